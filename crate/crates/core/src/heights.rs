//! Projective v-adic distances, naive Weil heights and the Néron-Tate
//! height.
//!
//! The distance between two projective points at a place `v` is the largest
//! 2x2-minor absolute value divided by the product of the coordinate maxima;
//! it is representative-independent and computed on integer-primitive
//! representatives so the value is an exact rational. Against the identity
//! it is at most 1, and strictly below 1 it collapses to
//! `max(|x|_v, |z|_v)` on the `y = 1` representative.
//!
//! The Néron-Tate height is the duplication limit `lim h(2^k P) / 4^k`. The
//! naive and canonical heights differ by at most the explicit band
//! `[-3/4 eta - 5, 3/2 eta + 8]`, so `k` duplications pin the value to
//! within `max(3/4 eta + 5, 3/2 eta + 8) / 4^k` — entirely effective, no
//! local decompositions.

use num_traits::{One, Zero};

use crate::curve::{ProjectivePoint, WeierstrassCurve};
use crate::divpoly::Multiplier;
use crate::error::{Error, Result};
use crate::places::{abs_value, tuple_height, Place, Rational};
use crate::real::{LogValue, Real, DEFAULT_PRECISION};

/// Exact projective distance value at one place.
#[derive(Clone, Debug)]
pub struct DistanceValue {
    pub value: Rational,
    pub place: Place,
}

impl DistanceValue {
    /// `log` of the distance; `None` for coincident points (distance zero).
    pub fn log(&self, precision_bits: u32) -> Result<Option<LogValue>> {
        if self.value.is_zero() {
            return Ok(None);
        }
        Ok(Some(LogValue::ln_rational(&self.value, precision_bits)?))
    }
}

/// The projective v-adic distance between two points.
pub fn dist_v(p: &ProjectivePoint, q: &ProjectivePoint, v: &Place) -> Result<DistanceValue> {
    let a = p.normalized();
    let b = q.normalized();
    let minors = [
        &a[0] * &b[1] - &b[0] * &a[1],
        &a[0] * &b[2] - &b[0] * &a[2],
        &a[1] * &b[2] - &b[1] * &a[2],
    ];
    let minor_rats: Vec<Rational> = minors.iter().map(|m| Rational::from(m.clone())).collect();
    let coord_a: Vec<Rational> = a.iter().map(|c| Rational::from(c.clone())).collect();
    let coord_b: Vec<Rational> = b.iter().map(|c| Rational::from(c.clone())).collect();
    let num = max_abs(&minor_rats, v)?;
    let den_a = max_abs(&coord_a, v)?;
    let den_b = max_abs(&coord_b, v)?;
    Ok(DistanceValue {
        value: num / (den_a * den_b),
        place: v.clone(),
    })
}

fn max_abs(xs: &[Rational], v: &Place) -> Result<Rational> {
    let mut best = Rational::zero();
    for x in xs {
        if x.is_zero() {
            continue;
        }
        let a = abs_value(x, v)?;
        if a > best {
            best = a;
        }
    }
    Ok(best)
}

/// Naive (Weil) height of a point: `sum_v log max(|x|_v, |y|_v, |z|_v)` on
/// any representative; zero at the identity.
pub fn naive_height(p: &ProjectivePoint, precision_bits: u32) -> Result<LogValue> {
    let [x, y, z] = p.coords();
    tuple_height(&[x, y, z], precision_bits)
}

/// Result of a Néron-Tate height computation.
#[derive(Clone, Debug)]
pub struct NeronTateResult {
    /// The estimate `h(2^k P) / 4^k`.
    pub value: LogValue,
    /// Number of duplications performed.
    pub iterations: u32,
    /// Guaranteed absolute error bound `max(3/4 eta + 5, 3/2 eta + 8) / 4^k`.
    pub error_bound: Real,
}

impl NeronTateResult {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn error_f64(&self) -> f64 {
        self.error_bound.to_f64()
    }
}

/// The half-width of the naive-vs-canonical comparison band:
/// `max(3/4 eta + 5, 3/2 eta + 8)`.
pub fn comparison_band(curve: &WeierstrassCurve) -> Result<Real> {
    let eta = &curve.eta().value;
    let prec = DEFAULT_PRECISION;
    let lower = eta
        .mul(&Real::from_rational(&Rational::new(3.into(), 4.into()), prec)?)?
        .add(&Real::from_i64(5, prec))?;
    let upper = eta
        .mul(&Real::from_rational(&Rational::new(3.into(), 2.into()), prec)?)?
        .add(&Real::from_i64(8, prec))?;
    Ok(if lower.certainly_gt(&upper) { lower } else { upper })
}

/// Néron-Tate height by duplication to absolute accuracy `tol`.
pub fn neron_tate(mult: &Multiplier, p: &ProjectivePoint, tol: f64) -> Result<NeronTateResult> {
    if !(tol > 0.0) {
        return Err(Error::precondition("tolerance must be positive"));
    }
    if p.curve() != mult.curve() {
        return Err(Error::precondition("point on a different curve"));
    }
    let prec = DEFAULT_PRECISION;
    let band = comparison_band(p.curve())?;
    // choose k with band / 4^k < tol
    let mut k = 0u32;
    let band_hi = band.abs_upper_f64();
    let mut shrink = band_hi;
    while shrink >= tol {
        k += 1;
        shrink /= 4.0;
        if k > 24 {
            return Err(Error::precondition(
                "tolerance requires more than 24 duplications",
            ));
        }
    }
    let mut q = p.clone();
    for _ in 0..k {
        q = mult.scalar_mul(2, &q)?;
    }
    let h = naive_height(&q, prec)?;
    let scale = Real::from_bigint(&num_bigint::BigInt::from(4u32).pow(k), prec)?;
    let value = LogValue {
        value: h.value.div(&scale)?,
        precision_bits: h.precision_bits,
        provenance: h.provenance,
    };
    let error_bound = band.div(&scale)?;
    Ok(NeronTateResult { value, iterations: k, error_bound })
}

/// Report of the small-coordinate estimates at a qualifying place.
#[derive(Debug)]
pub struct SmallCoordinateReport {
    pub place: Place,
    /// `max(|x|_v, |z|_v)` on the `y = 1` representative.
    pub max_xz: Rational,
    /// The bound it was checked against.
    pub max_xz_ok: bool,
    /// `|D(x, 1, z)|_v` with `D = 3 g3 z^2 + 2 g2 x z + 1`.
    pub delta_abs: Rational,
    /// Finite place: equals 1 exactly. Archimedean: exceeds `exp(-1/2)`.
    pub delta_ok: bool,
    /// Archimedean only: `sum over |alpha| = d of |x^alpha|` is at most `e`
    /// for all `d` up to the checked maximum.
    pub coordinate_sums_ok: Option<bool>,
}

/// Check the small-coordinate consequences of being projectively close to
/// the identity: requires `dist_v(P, 0) < exp(-2 m_v - c_v)`.
pub fn small_coordinate_estimates(
    p: &ProjectivePoint,
    v: &Place,
    max_degree: u32,
) -> Result<SmallCoordinateReport> {
    let curve = p.curve().clone();
    let identity = curve.identity();
    let d = dist_v(p, &identity, v)?;
    let m = curve.big_m(v)?;
    let m_inv_sq = Rational::one() / (&m * &m);
    let prec = DEFAULT_PRECISION;
    // hypothesis: dist < exp(-2 m_v - c_v)
    let qualifies = if v.is_archimedean() {
        let thr = Real::from_rational(&m_inv_sq, prec)?
            .mul(&Real::from_i64(-16, prec).exp()?)?;
        Real::from_rational(&d.value, prec)?.certainly_lt(&thr)
    } else {
        d.value < m_inv_sq
    };
    if !qualifies {
        return Err(Error::precondition(
            "distance to the identity does not meet the smallness hypothesis",
        ));
    }
    let (x, z) = p
        .y1_representative()
        .ok_or_else(|| Error::invariant("qualifying point must avoid y = 0"))?;
    let max_xz = {
        let ax = abs_value(&x, v)?;
        let az = abs_value(&z, v)?;
        if ax > az { ax } else { az }
    };
    // bound: min(1, 1/|g2|_v, 1/|g3|_v), shrunk by e^{-16} at the archimedean
    // place; min(...) = 1/M_v
    let m_inv = Rational::one() / &m;
    let max_xz_ok = if v.is_archimedean() {
        let thr = Real::from_rational(&m_inv, prec)?
            .mul(&Real::from_i64(-16, prec).exp()?)?;
        Real::from_rational(&max_xz, prec)?.certainly_lt(&thr)
    } else {
        max_xz < m_inv
    };
    // D(x, 1, z) = 3 g3 z^2 + 2 g2 x z + 1
    let three = Rational::from_integer(3.into());
    let two = Rational::from_integer(2.into());
    let delta = three * p.curve().g3() * &z * &z + two * p.curve().g2() * &x * &z + Rational::one();
    let delta_abs = abs_value(&delta, v)?;
    let delta_ok = if v.is_archimedean() {
        // |D| > exp(-1/2)
        let thr = Real::from_rational(&Rational::new((-1).into(), 2.into()), prec)?.exp()?;
        Real::from_rational(&delta_abs, prec)?.certainly_gt(&thr)
    } else {
        delta_abs == Rational::one()
    };
    let coordinate_sums_ok = if v.is_archimedean() {
        let e_thr = Real::from_i64(1, prec).exp()?;
        let mut ok = true;
        for deg in 0..=max_degree {
            let mut sum = Rational::zero();
            for a0 in 0..=deg {
                for a2 in 0..=(deg - a0) {
                    sum += abs_value(&x, v)?.pow(a0 as i32) * abs_value(&z, v)?.pow(a2 as i32);
                }
            }
            if !Real::from_rational(&sum, prec)?.certainly_le(&e_thr) {
                ok = false;
            }
        }
        Some(ok)
    } else {
        None
    };
    Ok(SmallCoordinateReport {
        place: v.clone(),
        max_xz,
        max_xz_ok,
        delta_abs,
        delta_ok,
        coordinate_sums_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn curve_04() -> WeierstrassCurve {
        WeierstrassCurve::new(rat(0, 1), rat(-4, 1)).unwrap()
    }

    fn curve_44() -> WeierstrassCurve {
        WeierstrassCurve::new(rat(4, 1), rat(-4, 1)).unwrap()
    }

    #[test]
    fn distance_examples() {
        let c = curve_04();
        let p = c.affine_point(rat(0, 1), rat(2, 1)).unwrap();
        let o = c.identity();
        let d = dist_v(&p, &o, &Place::Archimedean).unwrap();
        assert_eq!(d.value, rat(1, 2));
        // dist(P, P) = 0 at every place
        for v in [Place::Archimedean, Place::finite(2u32).unwrap()] {
            assert!(dist_v(&p, &p, &v).unwrap().value.is_zero());
        }
        // representative invariance: the same point scaled by 7/3
        let p2 = c
            .point(rat(0, 1), rat(14, 3), rat(7, 3))
            .unwrap();
        let d2 = dist_v(&p2, &o, &Place::Archimedean).unwrap();
        assert_eq!(d2.value, d.value);
    }

    #[test]
    fn distance_is_at_most_one_against_identity() {
        let c = curve_44();
        let p = c.affine_point(rat(1, 1), rat(2, 1)).unwrap();
        let mut pts = vec![p.clone()];
        let mut acc = p.clone();
        for _ in 0..5 {
            acc = acc.add(&p).unwrap();
            pts.push(acc.clone());
            pts.push(acc.negate());
        }
        let places = [
            Place::Archimedean,
            Place::finite(2u32).unwrap(),
            Place::finite(3u32).unwrap(),
            Place::finite(7u32).unwrap(),
        ];
        let o = c.identity();
        for q in &pts {
            for v in &places {
                let d = dist_v(q, &o, v).unwrap();
                assert!(d.value <= rat(1, 1), "dist > 1 at {v} for {q:?}");
                // property ii): below 1 the distance is max(|x|_v, |z|_v)
                // on the y = 1 representative
                if d.value < rat(1, 1) {
                    let (x, z) = q.y1_representative().expect("y != 0");
                    let m = {
                        let ax = abs_value(&x, v).unwrap();
                        let az = abs_value(&z, v).unwrap();
                        if ax > az { ax } else { az }
                    };
                    assert_eq!(d.value, m);
                }
            }
        }
    }

    #[test]
    fn naive_height_examples() {
        let c = curve_44();
        assert_eq!(naive_height(&c.identity(), 128).unwrap().to_f64(), 0.0);
        let p = c.affine_point(rat(1, 1), rat(2, 1)).unwrap();
        assert!((naive_height(&p, 128).unwrap().to_f64() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn neron_tate_on_torsion_and_identity() {
        let c = curve_04();
        let m = Multiplier::new(&c);
        let o = c.identity();
        let r = neron_tate(&m, &o, 1e-3).unwrap();
        assert_eq!(r.value.to_f64(), 0.0);
        // (0 : 2 : 1) is 3-torsion
        let p = c.affine_point(rat(0, 1), rat(2, 1)).unwrap();
        let r = neron_tate(&m, &p, 1e-3).unwrap();
        assert!(r.value.to_f64().abs() <= 1e-3);
    }

    #[test]
    fn neron_tate_quadraticity() {
        let c = curve_44();
        let m = Multiplier::new(&c);
        let p = c.affine_point(rat(1, 1), rat(2, 1)).unwrap();
        let tol = 1e-2;
        let base = neron_tate(&m, &p, tol).unwrap();
        assert!(base.value.to_f64() > 0.0, "point of infinite order");
        for n in 2..=4i64 {
            let np = m.scalar_mul(n, &p).unwrap();
            let hn = neron_tate(&m, &np, tol).unwrap();
            let err = (hn.value.to_f64() - (n * n) as f64 * base.value.to_f64()).abs();
            assert!(
                err <= ((n * n + 1) as f64) * tol,
                "quadraticity at n = {n}: {err}"
            );
        }
    }

    #[test]
    fn height_band_on_samples() {
        let c = curve_44();
        let m = Multiplier::new(&c);
        let p = c.affine_point(rat(1, 1), rat(2, 1)).unwrap();
        let eta = c.eta().to_f64();
        let tol = 1e-2;
        let mut q = p.clone();
        for _ in 0..5 {
            let h = naive_height(&q, 128).unwrap().to_f64();
            let nt = neron_tate(&m, &q, tol).unwrap().value.to_f64();
            let diff = h - nt;
            assert!(diff >= -0.75 * eta - 5.0 - tol, "band lower: {diff}");
            assert!(diff <= 1.5 * eta + 8.0 + tol, "band upper: {diff}");
            q = q.add(&p).unwrap();
        }
    }

    #[test]
    fn small_coordinates_at_finite_place() {
        // multiples of (1 : 2 : 1) on the curve (4, -4) drop into the formal
        // group at odd primes as denominators appear; 7P does so at p = 3
        let c = curve_44();
        let p = c.affine_point(rat(1, 1), rat(2, 1)).unwrap();
        let mut q = p.clone();
        let mut found = None;
        'outer: for _n in 2..=10 {
            q = q.add(&p).unwrap();
            let Some((x, z)) = q.y1_representative() else { continue };
            for prime in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
                let v = Place::finite(prime).unwrap();
                if abs_value(&x, &v).unwrap() < rat(1, 1)
                    && abs_value(&z, &v).unwrap() < rat(1, 1)
                {
                    found = Some((q.clone(), v));
                    break 'outer;
                }
            }
        }
        let (point, v) = found.expect("some multiple qualifies at an odd prime");
        let report = small_coordinate_estimates(&point, &v, 0).unwrap();
        assert!(report.max_xz_ok);
        assert!(report.delta_ok, "|D| = {} at {}", report.delta_abs, report.place);
        assert_eq!(report.delta_abs, rat(1, 1));
    }

    #[test]
    fn small_coordinates_at_archimedean_place() {
        // an exact point far up the real branch: x = N^2, y = 2N^3 + N^-3
        // forces g3 = -4 - N^-6 with g2 = 0, so the curve stays small at the
        // archimedean place while dist(P, 0) ~ 1/(2N)
        let n = BigInt::from(10u8).pow(9);
        let x0 = Rational::from(&n * &n);
        let y0 = Rational::from(BigInt::from(2) * &n * &n * &n)
            + Rational::new(1.into(), (&n * &n * &n).clone());
        let g2 = rat(0, 1);
        let g3 = Rational::from_integer(4.into()) * &x0 * &x0 * &x0 - &y0 * &y0;
        let c = WeierstrassCurve::new(g2, g3).unwrap();
        let p = c.affine_point(x0, y0).unwrap();
        let report = small_coordinate_estimates(&p, &Place::Archimedean, 20).unwrap();
        assert!(report.max_xz_ok);
        assert!(report.delta_ok);
        assert_eq!(report.coordinate_sums_ok, Some(true));
        // an ordinary point fails the hypothesis
        let c44 = curve_44();
        let q = c44.affine_point(rat(1, 1), rat(2, 1)).unwrap();
        assert!(small_coordinate_estimates(&q, &Place::Archimedean, 5).is_err());
    }
}
