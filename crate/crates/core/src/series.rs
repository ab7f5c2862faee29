//! Local power-series parametrization of the curve.
//!
//! On the affine chart `(X, Z) = (x/y, z/y)` the curve is `G(X, Z) = 0` with
//! `G = Z + g2 X Z^2 + g3 Z^3 - 4 X^3`, and near a point where
//! `D = dG/dZ = 3 g3 Z^2 + 2 g2 X Z + 1` does not vanish it admits a ring
//! monomorphism into power series in a parameter `t`:
//!
//! ```text
//! X -> X + t,      Z -> Z + sum_{l >= 1} dz[l] / D^(2l-1) t^l
//! ```
//!
//! where the `dz[l]` are polynomials produced by either of two recurrences:
//! extraction of Taylor coefficients of `G(X + t, Z + ...)` (the defining
//! route) or transport of the implicit derivative along the curve (the
//! differential route). Both are implemented and must agree coefficient by
//! coefficient; the construction fails loudly if they ever differ.
//!
//! Series are stored as `(numerator, k)` pairs standing for
//! `numerator / D^k` with `k = f(l) = max(0, 2l - 1)` at order `l`; products
//! of series renormalize exactly to this shape because `f` is superadditive.
//! The homogenized variant multiplies the order-`l` coefficient of a
//! degree-`d` monomial by `Y^(g(l)+d)` with `g(l) = max(0, 3l - 2)`, turning
//! every coefficient into a form in `(X, Y, Z)`.

use num_traits::{One, Zero};
use std::sync::{Arc, OnceLock};

use crate::curve::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::places::Rational;
use crate::poly::MultiPoly;

/// Ordered tuples of `parts` positive integers summing to `n`.
fn compositions(n: u32, parts: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `f(l) = max(0, 2l - 1)`: the denominator exponent at order `l`.
pub fn f_exp(l: u32) -> u32 {
    (2 * l).saturating_sub(1)
}

/// `g(l) = 2 f(l) - l = max(0, 3l - 2)`: the homogenization excess.
pub fn g_exp(l: u32) -> u32 {
    (3 * l).saturating_sub(2)
}

fn numeric_vars() -> Arc<Vec<String>> {
    static V: OnceLock<Arc<Vec<String>>> = OnceLock::new();
    V.get_or_init(|| Arc::new(vec!["X".into(), "Z".into()])).clone()
}

fn symbolic_vars() -> Arc<Vec<String>> {
    static V: OnceLock<Arc<Vec<String>>> = OnceLock::new();
    V.get_or_init(|| Arc::new(vec!["X".into(), "Z".into(), "g2".into(), "g3".into()]))
        .clone()
}

/// The chart polynomials and the series coefficients `dz[0..=order]`.
pub struct SeriesCoefficients {
    vars: Arc<Vec<String>>,
    g2: MultiPoly,
    g3: MultiPoly,
    /// `G(X, Z)`: the affine chart equation.
    pub chart_equation: MultiPoly,
    /// `D(X, Z) = dG/dZ`.
    pub delta: MultiPoly,
    /// `dz[l]` for `l = 0..=order`; `dz[0] = Z`.
    pub dz: Vec<MultiPoly>,
    pub order: u32,
}

impl SeriesCoefficients {
    /// Coefficients for a fixed curve, cross-checking the two recurrences at
    /// every order.
    pub fn for_curve(curve: &WeierstrassCurve, order: u32) -> Result<Self> {
        let vars = numeric_vars();
        Self::build(
            vars.clone(),
            MultiPoly::constant(vars.clone(), curve.g2().clone()),
            MultiPoly::constant(vars, curve.g3().clone()),
            order,
        )
    }

    /// Coefficients over the generic curve (`g2`, `g3` symbolic).
    pub fn symbolic(order: u32) -> Result<Self> {
        let vars = symbolic_vars();
        Self::build(
            vars.clone(),
            MultiPoly::var(vars.clone(), 2),
            MultiPoly::var(vars, 3),
            order,
        )
    }

    fn build(vars: Arc<Vec<String>>, g2: MultiPoly, g3: MultiPoly, order: u32) -> Result<Self> {
        if order < 1 {
            return Err(Error::precondition("series order must be at least 1"));
        }
        let x = MultiPoly::var(vars.clone(), 0);
        let z = MultiPoly::var(vars.clone(), 1);
        // G = Z + g2 X Z^2 + g3 Z^3 - 4 X^3
        let chart_equation = z
            .add(&g2.mul(&x)?.mul(&z.pow(2)?)?)?
            .add(&g3.mul(&z.pow(3)?)?)?
            .sub(&x.pow(3)?.scale(&Rational::from_integer(4.into())))?;
        let delta = chart_equation.derivative(1);
        let mut this = SeriesCoefficients {
            vars,
            g2,
            g3,
            chart_equation,
            delta,
            dz: vec![z],
            order,
        };
        for l in 1..=order {
            let by_taylor = this.next_by_taylor(l)?;
            if l >= 2 {
                let by_transport = this.next_by_transport(l)?;
                if by_taylor != by_transport {
                    return Err(Error::invariant(format!(
                        "series coefficient recurrences disagree at order {l}"
                    )));
                }
            }
            this.dz.push(by_taylor);
        }
        Ok(this)
    }

    /// Divided-power derivative of the chart equation:
    /// `(1/h! j!) d^(h+j) G / dX^h dZ^j`.
    fn g_derivative(&self, h: u32, j: u32) -> Result<MultiPoly> {
        self.chart_equation.normalized_derivative(&{
            let mut a = vec![0u32; self.vars.len()];
            a[0] = h;
            a[1] = j;
            a
        })
    }

    /// Taylor-coefficient route: the order-`l` coefficient of
    /// `G(X + t, Z + sum dz[k]/D^f(k) t^k)` must vanish, which solves for
    /// `dz[l]` as
    /// `- sum_(h,j) D^(2h+j-2) (1/h!j!) d^(h+j)G/dX^h dZ^j * dz[k1]...dz[kj]`
    /// over `(h, j)` distinct from `(0,0)` and `(0,1)` and ordered tuples of
    /// positive `k`s with `h + k1 + ... + kj = l`.
    fn next_by_taylor(&self, l: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(self.vars.clone());
        for h in 0..=3u32 {
            for j in 0..=(3 - h) {
                if (h, j) == (0, 0) || (h, j) == (0, 1) {
                    continue;
                }
                let gd = self.g_derivative(h, j)?;
                if gd.is_zero() {
                    continue;
                }
                if h > l {
                    continue;
                }
                let rest = l - h;
                let mut inner = MultiPoly::zero(self.vars.clone());
                let mut any = false;
                for tuple in compositions(rest, j) {
                    let mut prod = MultiPoly::one(self.vars.clone());
                    for k in tuple {
                        prod = prod.mul(&self.dz[k as usize])?;
                    }
                    inner = inner.add(&prod)?;
                    any = true;
                }
                if !any {
                    continue;
                }
                let dpow = self.delta.pow(2 * h + j - 2)?;
                acc = acc.add(&dpow.mul(&gd)?.mul(&inner)?)?;
            }
        }
        Ok(acc.neg())
    }

    /// Differential-transport route: with `Gx = dG/dX` and
    /// `R = D dD/dX - Gx dD/dZ`,
    /// `(l+1) dz[l+1] = dX(dz[l]) D^2 - dZ(dz[l]) Gx D - (2l-1) dz[l] R`.
    fn next_by_transport(&self, l: u32) -> Result<MultiPoly> {
        debug_assert!(l >= 2);
        let prev = &self.dz[(l - 1) as usize];
        let gx = self.chart_equation.derivative(0);
        let r = self
            .delta
            .mul(&self.delta.derivative(0))?
            .sub(&gx.mul(&self.delta.derivative(1))?)?;
        let term1 = prev.derivative(0).mul(&self.delta.pow(2)?)?;
        let term2 = prev.derivative(1).mul(&gx)?.mul(&self.delta)?;
        let term3 = prev.scale(&Rational::from_integer((2 * (l - 1) as i64 - 1).into()));
        let num = term1.sub(&term2)?.sub(&term3.mul(&r)?)?;
        Ok(num.scale(&Rational::new(1.into(), (l as i64).into())))
    }

    /// The series for `Z` itself, truncated at the cache order.
    pub fn z_series(&self) -> TruncatedSeries {
        TruncatedSeries {
            coefficients: self
                .dz
                .iter()
                .enumerate()
                .map(|(l, p)| (p.clone(), f_exp(l as u32)))
                .collect(),
            order: self.order,
        }
    }

    /// The series for `X`: `X + t`.
    pub fn x_series(&self) -> TruncatedSeries {
        let mut coefficients = vec![
            (MultiPoly::var(self.vars.clone(), 0), 0),
            (MultiPoly::one(self.vars.clone()), 0),
        ];
        coefficients.truncate((self.order + 1) as usize);
        while coefficients.len() <= self.order as usize {
            coefficients.push((MultiPoly::zero(self.vars.clone()), 0));
        }
        TruncatedSeries { coefficients, order: self.order }
    }

    /// Multiply two series, renormalizing every order-`l` denominator to
    /// `D^f(l)` exactly.
    pub fn series_mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        let order = a.order.min(b.order);
        let mut coefficients = Vec::with_capacity((order + 1) as usize);
        for l in 0..=order {
            let target = f_exp(l);
            let mut num = MultiPoly::zero(self.vars.clone());
            for i in 0..=l {
                let j = l - i;
                let (ai, fi) = &a.coefficients[i as usize];
                let (bj, fj) = &b.coefficients[j as usize];
                if ai.is_zero() || bj.is_zero() {
                    continue;
                }
                let excess = target
                    .checked_sub(fi + fj)
                    .ok_or_else(|| Error::invariant("denominator exponents exceed f(l)"))?;
                let mut t = ai.mul(bj)?;
                if excess > 0 {
                    t = t.mul(&self.delta.pow(excess)?)?;
                }
                num = num.add(&t)?;
            }
            coefficients.push((num, target));
        }
        Ok(TruncatedSeries { coefficients, order })
    }

    pub fn series_pow(&self, a: &TruncatedSeries, n: u32) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::one(self.vars.clone(), a.order);
        for _ in 0..n {
            acc = self.series_mul(&acc, a)?;
        }
        Ok(acc)
    }

    pub fn series_add(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        let order = a.order.min(b.order);
        let mut coefficients = Vec::with_capacity((order + 1) as usize);
        for l in 0..=order {
            let target = f_exp(l);
            let (an, af) = &a.coefficients[l as usize];
            let (bn, bf) = &b.coefficients[l as usize];
            let mut lhs = an.clone();
            if target > *af {
                lhs = lhs.mul(&self.delta.pow(target - af)?)?;
            }
            let mut rhs = bn.clone();
            if target > *bf {
                rhs = rhs.mul(&self.delta.pow(target - bf)?)?;
            }
            coefficients.push((lhs.add(&rhs)?, target));
        }
        Ok(TruncatedSeries { coefficients, order })
    }

    /// Expansion of the monomial `X^a1 Z^a2` under the parametrization.
    pub fn expand_monomial(&self, a1: u32, a2: u32) -> Result<TruncatedSeries> {
        let xs = self.series_pow(&self.x_series(), a1)?;
        let zs = self.series_pow(&self.z_series(), a2)?;
        self.series_mul(&xs, &zs)
    }

    /// Expansion of an arbitrary polynomial in `(X, Z)`.
    pub fn expand_polynomial(&self, p: &MultiPoly) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::zero(self.vars.clone(), self.order);
        for (e, c) in p.terms() {
            let mono = self.expand_monomial(e[0], e[1])?;
            let extra: Vec<u32> = e.iter().skip(2).cloned().collect();
            let mut scale_poly = MultiPoly::constant(self.vars.clone(), c.clone());
            if extra.iter().any(|&k| k > 0) {
                let mut ee = vec![0u32; self.vars.len()];
                for (i, k) in extra.iter().enumerate() {
                    ee[i + 2] = *k;
                }
                scale_poly = MultiPoly::monomial(self.vars.clone(), ee, c.clone());
            }
            let scaled = TruncatedSeries {
                coefficients: mono
                    .coefficients
                    .iter()
                    .map(|(n, f)| (n.mul(&scale_poly).expect("same vars"), *f))
                    .collect(),
                order: mono.order,
            };
            acc = self.series_add(&acc, &scaled)?;
        }
        Ok(acc)
    }

    /// Substitute the series into the chart equation and report the first
    /// order `l <= order` whose coefficient does not vanish identically
    /// (`None` when all vanish, i.e. the residual order exceeds `order`).
    pub fn parametrization_residual(&self) -> Result<Option<u32>> {
        let residual = self.expand_polynomial(&self.chart_equation)?;
        for (l, (num, _)) in residual.coefficients.iter().enumerate() {
            // the order-zero coefficient is the chart equation itself,
            // which vanishes on the curve but not identically
            if l == 0 {
                if *num != self.chart_equation {
                    return Err(Error::invariant("order-zero coefficient malformed"));
                }
                continue;
            }
            if !num.is_zero() {
                return Ok(Some(l as u32));
            }
        }
        Ok(None)
    }

    /// Evaluate the residual series at a chart point `(x, z)`; returns the
    /// first order with a nonzero value. The point must satisfy the chart
    /// equation with nonvanishing `D`.
    pub fn residual_order_at(&self, x: &Rational, z: &Rational) -> Result<Option<u32>> {
        let mut args = vec![x.clone(), z.clone()];
        args.resize(self.vars.len(), Rational::one());
        if self.vars.len() > 2 {
            return Err(Error::precondition(
                "point evaluation needs numeric curve coefficients",
            ));
        }
        if !self.chart_equation.eval(&args)?.is_zero() {
            return Err(Error::precondition("point is not on the affine chart"));
        }
        if self.delta.eval(&args)?.is_zero() {
            return Err(Error::precondition("parametrization pole: D vanishes"));
        }
        let residual = self.expand_polynomial(&self.chart_equation)?;
        for (l, (num, _)) in residual.coefficients.iter().enumerate().skip(1) {
            if !num.eval(&args)?.is_zero() {
                return Ok(Some(l as u32));
            }
        }
        Ok(None)
    }
}

/// A series truncated at a fixed order, coefficient `l` stored as
/// `numerator / D^k` with its explicit denominator exponent `k`.
pub struct TruncatedSeries {
    pub coefficients: Vec<(MultiPoly, u32)>,
    pub order: u32,
}

impl TruncatedSeries {
    fn zero(vars: Arc<Vec<String>>, order: u32) -> Self {
        TruncatedSeries {
            coefficients: (0..=order)
                .map(|l| (MultiPoly::zero(vars.clone()), f_exp(l)))
                .collect(),
            order,
        }
    }

    fn one(vars: Arc<Vec<String>>, order: u32) -> Self {
        let mut s = Self::zero(vars.clone(), order);
        s.coefficients[0] = (MultiPoly::one(vars), 0);
        s
    }
}

/// Verify the parametrization for a curve at truncation order `order`;
/// returns the residual order report.
#[derive(Debug)]
pub struct ParametrizationReport {
    /// First failing order, if any; `None` means the residual vanishes
    /// through the full truncation order.
    pub first_bad_order: Option<u32>,
    pub order: u32,
}

pub fn verify_parametrization(curve: &WeierstrassCurve, order: u32) -> Result<ParametrizationReport> {
    let s = SeriesCoefficients::for_curve(curve, order)?;
    Ok(ParametrizationReport {
        first_bad_order: s.parametrization_residual()?,
        order,
    })
}

// ---------------------------------------------------------------------------
// homogenized, multi-factor expansion
// ---------------------------------------------------------------------------

/// Variables for `m` coordinate blocks: `X10, X11, X12, X20, ...` where the
/// middle index of each triple is the `Y`-like coordinate.
pub fn block_vars(m: usize) -> Arc<Vec<String>> {
    let mut v = Vec::with_capacity(3 * m);
    for j in 1..=m {
        for k in 0..3 {
            v.push(format!("X{j}{k}"));
        }
    }
    Arc::new(v)
}

/// Homogenized order-`l` coefficient of a single coordinate monomial
/// `X^a Y^b Z^c` of degree `d = a+b+c`: the affine coefficient of
/// `X^a Z^c` times `Y^(g(l)+d-<affine degree>)`, all placed into the chosen
/// block of the target variable list.
fn homogenized_block_coefficient(
    series: &SeriesCoefficients,
    affine: &MultiPoly,
    l: u32,
    degree: u32,
    target: &Arc<Vec<String>>,
    block: usize,
) -> Result<MultiPoly> {
    let mut out = MultiPoly::zero(target.clone());
    let total = g_exp(l) + degree;
    for (e, c) in affine.terms() {
        let (u, w) = (e[0], e[1]);
        if u + w > total {
            return Err(Error::invariant("affine coefficient exceeds form degree"));
        }
        let mut ne = vec![0u32; target.len()];
        ne[3 * block] = u;
        ne[3 * block + 1] = total - u - w;
        ne[3 * block + 2] = w;
        out.insert_term(ne, c.clone());
    }
    let _ = series;
    Ok(out)
}

/// Per-factor expansion of a multihomogeneous form over `m` coordinate
/// blocks. Returns, for every `(i_1, ..., i_m)` with `i_1 + ... + i_m <= t`,
/// the coefficient form in the block variables.
pub struct MultiExpansion {
    pub m: usize,
    pub t: u32,
    pub block_degrees: Vec<u32>,
    pub coefficients: Vec<(Vec<u32>, MultiPoly)>,
}

pub fn multi_expand(
    curve: &WeierstrassCurve,
    m: usize,
    form: &MultiPoly,
    t: u32,
) -> Result<MultiExpansion> {
    let vars = block_vars(m);
    if form.vars().len() != vars.len() {
        return Err(Error::precondition(format!(
            "form must live in {} block variables",
            vars.len()
        )));
    }
    let blocks: Vec<Vec<usize>> = (0..m).map(|j| vec![3 * j, 3 * j + 1, 3 * j + 2]).collect();
    let degrees = form
        .block_homogeneous_degrees(&blocks)
        .ok_or_else(|| Error::precondition("form is not multihomogeneous over the blocks"))?;
    let series = SeriesCoefficients::for_curve(curve, t.max(1))?;

    // expansions of every single-block monomial that occurs, memoized
    use std::collections::HashMap;
    let mut memo: HashMap<(usize, u32, u32, u32), Vec<MultiPoly>> = HashMap::new();
    let mut coeff_map: HashMap<Vec<u32>, MultiPoly> = HashMap::new();
    for (e, c) in form.terms() {
        // per-block homogenized coefficient vectors, orders 0..=t
        let mut per_block: Vec<Vec<MultiPoly>> = Vec::with_capacity(m);
        for (j, block) in blocks.iter().enumerate() {
            let (a, b, cexp) = (e[block[0]], e[block[1]], e[block[2]]);
            let key = (j, a, b, cexp);
            if !memo.contains_key(&key) {
                let affine = series.expand_monomial(a, cexp)?;
                let d = a + b + cexp;
                let mut homogs = Vec::with_capacity((t + 1) as usize);
                for l in 0..=t {
                    homogs.push(homogenized_block_coefficient(
                        &series,
                        &affine.coefficients[l as usize].0,
                        l,
                        d,
                        &vars,
                        j,
                    )?);
                }
                memo.insert(key.clone(), homogs);
            }
            per_block.push(memo[&key].clone());
        }
        // distribute orders across blocks
        let mut stack: Vec<(usize, u32, Vec<u32>, MultiPoly)> =
            vec![(0, t, vec![], MultiPoly::constant(vars.clone(), c.clone()))];
        while let Some((j, budget, idx, acc)) = stack.pop() {
            if j == m {
                coeff_map
                    .entry(idx)
                    .and_modify(|p| *p = p.add(&acc).expect("same vars"))
                    .or_insert(acc);
                continue;
            }
            for l in 0..=budget {
                let part = &per_block[j][l as usize];
                if part.is_zero() {
                    continue;
                }
                let mut nidx = idx.clone();
                nidx.push(l);
                stack.push((j + 1, budget - l, nidx, acc.mul(part)?));
            }
        }
    }
    let mut coefficients: Vec<(Vec<u32>, MultiPoly)> = coeff_map.into_iter().collect();
    coefficients.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(MultiExpansion {
        m,
        t,
        block_degrees: degrees,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::Place;
    use crate::poly::PolyFamily;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn curve_04() -> WeierstrassCurve {
        WeierstrassCurve::new(rat(0, 1), rat(-4, 1)).unwrap()
    }

    #[test]
    fn first_coefficient_is_minus_gx() {
        let s = SeriesCoefficients::symbolic(2).unwrap();
        // dz[1] = 12 X^2 - g2 Z^2
        let expected = MultiPoly::parse("12 * X^2 + -1 * g2 * Z^2", s.vars.clone()).unwrap();
        assert_eq!(s.dz[1], expected);
        assert_eq!(s.dz[0], MultiPoly::var(s.vars.clone(), 1));
    }

    #[test]
    fn dual_recurrences_agree_symbolically() {
        // construction cross-checks the two routes at every order
        let s = SeriesCoefficients::symbolic(4).unwrap();
        assert_eq!(s.dz.len(), 5);
    }

    #[test]
    fn dual_recurrences_agree_on_rational_curves() {
        for (g2v, g3v) in [
            (rat(0, 1), rat(-4, 1)),
            (rat(4, 1), rat(-4, 1)),
            (rat(-3, 2), rat(7, 5)),
            (rat(1, 3), rat(2, 1)),
            (rat(5, 1), rat(-11, 4)),
        ] {
            let curve = WeierstrassCurve::new(g2v, g3v).unwrap();
            let s = SeriesCoefficients::for_curve(&curve, 8).unwrap();
            assert_eq!(s.dz.len(), 9);
        }
    }

    #[test]
    fn degree_bound() {
        let s = SeriesCoefficients::symbolic(6).unwrap();
        for t in 1..=6u32 {
            let max_deg = (0..=t)
                .map(|l| s.dz[l as usize].multidegree(&[vec![0, 1]])[0])
                .max()
                .unwrap();
            assert!(max_deg <= 3 * t - 1, "degree bound fails at T = {t}");
        }
    }

    #[test]
    fn height_bounds() {
        let curve = WeierstrassCurve::new(rat(4, 1), rat(-4, 1)).unwrap();
        let t = 8u32;
        let s = SeriesCoefficients::for_curve(&curve, t).unwrap();
        let fam = PolyFamily::new(s.dz.clone(), "series coefficients").unwrap();
        let eta = curve.eta().to_f64();
        let h = fam.gauss_weil_height(128).unwrap().to_f64();
        assert!(h <= (2.0 * t as f64 - 1.0) * (eta + 4.0) + 1e-9);
        for v in [Place::Archimedean, Place::finite(2u32).unwrap(), Place::finite(3u32).unwrap()] {
            let hv = fam.local_height(&v, 128).unwrap().to_f64();
            let mv = curve.little_m(&v, 128).unwrap().to_f64();
            let cap = if v.is_archimedean() {
                (2.0 * t as f64 - 1.0) * (mv + 4.0)
            } else {
                (2.0 * t as f64 - 1.0) * mv
            };
            assert!(hv <= cap + 1e-9, "local height bound fails at {v}");
        }
    }

    #[test]
    fn parametrization_residual_vanishes() {
        for (g2v, g3v) in [(rat(0, 1), rat(-4, 1)), (rat(4, 1), rat(-4, 1))] {
            let curve = WeierstrassCurve::new(g2v, g3v).unwrap();
            let report = verify_parametrization(&curve, 6).unwrap();
            assert_eq!(report.first_bad_order, None);
        }
    }

    #[test]
    fn residual_at_sample_points() {
        // (0 : 2 : 1) on the curve g2 = 0, g3 = -4 maps to chart point
        // (x/y, z/y) = (0, 1/2)
        let curve = curve_04();
        let s = SeriesCoefficients::for_curve(&curve, 5).unwrap();
        assert_eq!(s.residual_order_at(&rat(0, 1), &rat(1, 2)).unwrap(), None);
        // off-chart points are rejected
        assert!(s.residual_order_at(&rat(1, 1), &rat(1, 1)).is_err());
    }

    #[test]
    fn monomial_expansions() {
        let curve = curve_04();
        let s = SeriesCoefficients::for_curve(&curve, 4).unwrap();
        // X expands to X + t: order-l coefficient is stored over D^f(l), so
        // its numerator at order 1 is D itself and zero beyond
        let xs = s.expand_monomial(1, 0).unwrap();
        assert_eq!(xs.coefficients[0].0, MultiPoly::var(s.vars.clone(), 0));
        assert_eq!(xs.coefficients[1].0, s.delta);
        assert_eq!(xs.coefficients[1].1, 1);
        assert!(xs.coefficients[2].0.is_zero());
        assert!(xs.coefficients[3].0.is_zero());
        // Z expands with dz coefficients and f-exponent denominators
        let zs = s.expand_monomial(0, 1).unwrap();
        for l in 0..=4u32 {
            assert_eq!(zs.coefficients[l as usize].0, s.dz[l as usize]);
            assert_eq!(zs.coefficients[l as usize].1, f_exp(l));
        }
        // product structure: X^2 Z against the brute-force series product
        let m = s.expand_monomial(2, 1).unwrap();
        let brute = s
            .series_mul(
                &s.series_mul(&s.x_series(), &s.x_series()).unwrap(),
                &s.z_series(),
            )
            .unwrap();
        for l in 0..=4usize {
            assert_eq!(m.coefficients[l].0, brute.coefficients[l].0);
        }
    }

    #[test]
    fn monomial_degree_and_height_bounds() {
        let curve = WeierstrassCurve::new(rat(4, 1), rat(-4, 1)).unwrap();
        let t = 6u32;
        let s = SeriesCoefficients::for_curve(&curve, t).unwrap();
        let eta = curve.eta().to_f64();
        for (a1, a2) in [(1u32, 0u32), (0, 1), (2, 1), (1, 2), (2, 2)] {
            let delta = a1 + a2;
            let m = s.expand_monomial(a1, a2).unwrap();
            let members: Vec<MultiPoly> = m
                .coefficients
                .iter()
                .map(|(n, _)| n.clone())
                .filter(|n| !n.is_zero())
                .collect();
            let fam = PolyFamily::new(members, "monomial expansion").unwrap();
            let maxdeg = m
                .coefficients
                .iter()
                .map(|(n, _)| n.multidegree(&[vec![0, 1]])[0])
                .max()
                .unwrap();
            assert!(maxdeg <= 3 * t + delta.max(2) - 2);
            let h = fam.gauss_weil_height(128).unwrap().to_f64();
            assert!(h <= 2.0 * (eta + 6.0) * t as f64 + delta as f64 + 1e-9);
        }
    }

    #[test]
    fn multi_expand_product_rule() {
        let curve = curve_04();
        // m = 2, form = X10 * X20 (product of the two X-like coordinates)
        let vars = block_vars(2);
        let form = MultiPoly::monomial(vars.clone(), vec![1, 0, 0, 1, 0, 0], rat(1, 1));
        let exp = multi_expand(&curve, 2, &form, 2).unwrap();
        // single-factor route for one block
        let single = multi_expand(
            &curve,
            1,
            &MultiPoly::monomial(block_vars(1), vec![1, 0, 0], rat(1, 1)),
            2,
        )
        .unwrap();
        let lookup = |idx: &[u32]| -> &MultiPoly {
            &exp.coefficients
                .iter()
                .find(|(i, _)| i == idx)
                .expect("coefficient present")
                .1
        };
        // coefficient at (1, 0) equals (single-factor coefficient at 1) * X20
        let s1 = &single
            .coefficients
            .iter()
            .find(|(i, _)| i == &[1u32])
            .unwrap()
            .1;
        let embed = s1
            .embed(vars.clone(), &[0, 1, 2])
            .unwrap()
            .mul(&MultiPoly::var(vars.clone(), 3))
            .unwrap();
        assert_eq!(lookup(&[1, 0]), &embed);
        let embed2 = s1
            .embed(vars.clone(), &[3, 4, 5])
            .unwrap()
            .mul(&MultiPoly::var(vars.clone(), 0))
            .unwrap();
        assert_eq!(lookup(&[0, 1]), &embed2);
        // the Y-like coordinate expands trivially: only the (0, 0) term
        let yform = MultiPoly::monomial(vars.clone(), vec![0, 1, 0, 0, 1, 0], rat(1, 1));
        let yexp = multi_expand(&curve, 2, &yform, 2).unwrap();
        let nonzero: Vec<&Vec<u32>> = yexp
            .coefficients
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect();
        assert_eq!(nonzero, vec![&vec![0u32, 0]]);
    }

    #[test]
    fn multi_expand_degree_bounds() {
        let curve = WeierstrassCurve::new(rat(4, 1), rat(-4, 1)).unwrap();
        let vars = block_vars(2);
        // a bidegree-(2,2) form
        let form = MultiPoly::monomial(vars.clone(), vec![1, 1, 0, 0, 2, 0], rat(3, 1))
            .add(&MultiPoly::monomial(vars.clone(), vec![0, 0, 2, 1, 0, 1], rat(-1, 2)))
            .unwrap();
        let t = 3;
        let exp = multi_expand(&curve, 2, &form, t).unwrap();
        assert_eq!(exp.block_degrees, vec![2, 2]);
        let blocks = vec![vec![0usize, 1, 2], vec![3usize, 4, 5]];
        for (idx, coeff) in &exp.coefficients {
            if coeff.is_zero() {
                continue;
            }
            let degs = coeff.multidegree(&blocks);
            for j in 0..2 {
                assert!(
                    degs[j] <= 2 + g_exp(idx[j]),
                    "block degree bound fails at {idx:?}"
                );
            }
        }
        // finite-place family height: h_v <= 2 T m_v + h_v(form)
        let members: Vec<MultiPoly> = exp
            .coefficients
            .iter()
            .filter(|(i, _)| i.iter().sum::<u32>() <= t)
            .map(|(_, c)| c.clone())
            .filter(|c| !c.is_zero())
            .collect();
        let fam = PolyFamily::new(members, "derivative family").unwrap();
        for p in [2u32, 3] {
            let v = Place::finite(p).unwrap();
            let hv = fam.local_height(&v, 128).unwrap().to_f64();
            let mv = curve.little_m(&v, 128).unwrap().to_f64();
            let hform = form.local_height(&v, 128).unwrap().to_f64();
            assert!(hv <= 2.0 * t as f64 * mv + hform + 1e-9);
        }
    }
}
