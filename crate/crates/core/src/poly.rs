//! Sparse exact multivariate polynomials.
//!
//! Coefficients are exact rationals; terms are keyed by dense exponent
//! vectors over an ordered variable list. Degrees, per-block multidegrees,
//! local heights `H_v` / lengths `L_v` (max resp. sum of coefficient absolute
//! values at a place) and the Gauss-Weil height of polynomial families are
//! all first-class here.
//!
//! The Gauss-Weil height of a family is the sum over places of the log of the
//! largest coefficient absolute value across all members. Computed on an
//! integer-primitive rescaling of the family this collapses to the log of a
//! single integer, so it never needs a factorization.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::places::{
    abs_value, format_rational, parse_rational, tuple_height, Place, Rational,
};
use crate::real::LogValue;

/// A sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: Arc<Vec<String>>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<Vec<String>>, c: Rational) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: Arc<Vec<String>>) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The monomial `vars[i]`.
    pub fn var(vars: Arc<Vec<String>>, i: usize) -> Self {
        let mut e = vec![0u32; vars.len()];
        e[i] = 1;
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn monomial(vars: Arc<Vec<String>>, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials in the canonical form.
    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    fn same_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.vars == other.vars || *self.vars == *other.vars {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "variable lists differ: {:?} vs {:?}",
                self.vars, other.vars
            )))
        }
    }

    /// Add `c * X^e` in place.
    pub(crate) fn insert_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_vars(other)?;
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn pow(&self, n: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(self.vars.clone());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Total degree (`0` for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Degree in one variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Per-block multidegree: for each block of variable indices, the maximum
    /// over terms of the block's exponent sum.
    pub fn multidegree(&self, blocks: &[Vec<usize>]) -> Vec<u32> {
        blocks
            .iter()
            .map(|block| {
                self.terms
                    .keys()
                    .map(|e| block.iter().map(|&i| e[i]).sum::<u32>())
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    /// `Some(degrees)` when every term has the same exponent sum in each
    /// block.
    pub fn block_homogeneous_degrees(&self, blocks: &[Vec<usize>]) -> Option<Vec<u32>> {
        let mut out: Option<Vec<u32>> = None;
        for e in self.terms.keys() {
            let d: Vec<u32> = blocks
                .iter()
                .map(|b| b.iter().map(|&i| e[i]).sum::<u32>())
                .collect();
            match &out {
                None => out = Some(d),
                Some(prev) if *prev == d => {}
                Some(_) => return None,
            }
        }
        out.or_else(|| Some(vec![0; blocks.len()]))
    }

    /// Evaluate at exact rational arguments (one per variable).
    pub fn eval(&self, args: &[Rational]) -> Result<Rational> {
        if args.len() != self.vars.len() {
            return Err(Error::domain("arity mismatch in eval"));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in args.iter().zip(e) {
                if k > 0 {
                    t *= pow_rational(x, k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute polynomials for the variables, positionally. All arguments
    /// must share a common variable list, which becomes the result's.
    pub fn compose(&self, args: &[MultiPoly]) -> Result<MultiPoly> {
        if args.len() != self.vars.len() {
            return Err(Error::domain(format!(
                "arity mismatch in compose: {} vars, {} arguments",
                self.vars.len(),
                args.len()
            )));
        }
        let target_vars = match args.first() {
            Some(a) => a.vars.clone(),
            None => {
                // nullary: constant polynomial
                return Ok(MultiPoly {
                    vars: Arc::new(vec![]),
                    terms: self.terms.clone(),
                });
            }
        };
        for a in args {
            if *a.vars != *target_vars {
                return Err(Error::domain("compose arguments over different variables"));
            }
        }
        // memoize powers of each argument
        let mut pows: Vec<Vec<MultiPoly>> = args
            .iter()
            .map(|a| vec![MultiPoly::one(target_vars.clone()), a.clone()])
            .collect();
        let mut out = MultiPoly::zero(target_vars.clone());
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target_vars.clone(), c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while pows[i].len() <= k as usize {
                    let next = pows[i].last().unwrap().mul(&args[i])?;
                    pows[i].push(next);
                }
                t = t.mul(&pows[i][k as usize])?;
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Plain partial derivative in one variable.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.insert_term(ne, c * Rational::from(BigInt::from(e[var])));
        }
        out
    }

    /// Divided-power derivative `1/(a_1! ... a_n!) d^|a|/dX^a`: termwise the
    /// coefficient picks up `prod_i binom(e_i, a_i)`.
    pub fn normalized_derivative(&self, alpha: &[u32]) -> Result<MultiPoly> {
        if alpha.len() != self.vars.len() {
            return Err(Error::domain("arity mismatch in normalized_derivative"));
        }
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e.iter().zip(alpha).any(|(ei, ai)| ei < ai) {
                continue;
            }
            let mut coef = c.clone();
            let mut ne = e.clone();
            for (i, &a) in alpha.iter().enumerate() {
                if a > 0 {
                    coef *= Rational::from(binomial(e[i], a));
                    ne[i] -= a;
                }
            }
            out.insert_term(ne, coef);
        }
        Ok(out)
    }

    /// Exact division by the variable `var`; errors when some term lacks it.
    pub fn div_exact_by_var(&self, var: usize) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[var] == 0 {
                return Err(Error::invariant(format!(
                    "inexact division by {}",
                    self.vars[var]
                )));
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.insert_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Homogenize to total degree `target` using the variable `var` (which
    /// must not occur yet).
    pub fn homogenize(&self, var: usize, target: u32) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[var] != 0 {
                return Err(Error::domain("homogenization variable already occurs"));
            }
            let d: u32 = e.iter().sum();
            if d > target {
                return Err(Error::domain("degree exceeds homogenization target"));
            }
            let mut ne = e.clone();
            ne[var] = target - d;
            out.insert_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Reinterpret over a larger variable list: old variable `i` becomes
    /// `mapping[i]` in the new list.
    pub fn embed(&self, new_vars: Arc<Vec<String>>, mapping: &[usize]) -> Result<MultiPoly> {
        if mapping.len() != self.vars.len() {
            return Err(Error::domain("embed mapping arity mismatch"));
        }
        let mut out = MultiPoly::zero(new_vars.clone());
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; new_vars.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[mapping[i]] += k;
            }
            out.insert_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Reinterpret over a smaller variable list; the dropped variables must
    /// not occur in any term.
    pub fn project(&self, keep: &[usize], new_vars: Arc<Vec<String>>) -> Result<MultiPoly> {
        assert_eq!(keep.len(), new_vars.len());
        let dropped: Vec<usize> =
            (0..self.vars.len()).filter(|i| !keep.contains(i)).collect();
        let mut out = MultiPoly::zero(new_vars);
        for (e, c) in &self.terms {
            if dropped.iter().any(|&i| e[i] != 0) {
                return Err(Error::domain("projected-away variable occurs in a term"));
            }
            let ne: Vec<u32> = keep.iter().map(|&i| e[i]).collect();
            out.insert_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Substitute exact rational values for a subset of variables, keeping
    /// the ambient variable list.
    pub fn substitute_values(&self, assignments: &[(usize, Rational)]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut coef = c.clone();
            let mut ne = e.clone();
            for (i, val) in assignments {
                if ne[*i] > 0 {
                    coef *= pow_rational(val, ne[*i]);
                    ne[*i] = 0;
                }
            }
            out.insert_term(ne, coef);
        }
        out
    }

    /// `H_v`: the maximum of coefficient absolute values at a place.
    pub fn max_abs_coeff(&self, v: &Place) -> Result<Rational> {
        if self.is_zero() {
            return Err(Error::domain("local height of the zero polynomial"));
        }
        let mut best = Rational::zero();
        for c in self.terms.values() {
            let a = abs_value(c, v)?;
            if a > best {
                best = a;
            }
        }
        Ok(best)
    }

    /// `L_v` at the archimedean place: the sum of coefficient magnitudes.
    pub fn sum_abs_coeff_arch(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(Error::domain("local length of the zero polynomial"));
        }
        Ok(self.terms.values().map(|c| c.abs()).sum())
    }

    /// `h_v = log H_v`.
    pub fn local_height(&self, v: &Place, precision_bits: u32) -> Result<LogValue> {
        LogValue::ln_rational(&self.max_abs_coeff(v)?, precision_bits)
    }

    /// `l_v = log L_v`, archimedean only.
    pub fn local_length(&self, v: &Place, precision_bits: u32) -> Result<LogValue> {
        if !v.is_archimedean() {
            return Err(Error::domain("local length is archimedean-only"));
        }
        LogValue::ln_rational(&self.sum_abs_coeff_arch()?, precision_bits)
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.terms.values().cloned().collect()
    }
}

fn pow_rational(x: &Rational, k: u32) -> Rational {
    let n = x.numer().pow(k);
    let d = x.denom().pow(k);
    Rational::new(n, d)
}

/// Exact binomial coefficient.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// A labeled finite family of polynomials over a common variable list.
#[derive(Clone)]
pub struct PolyFamily {
    pub members: Vec<MultiPoly>,
    pub label: String,
}

impl PolyFamily {
    pub fn new(members: Vec<MultiPoly>, label: impl Into<String>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::domain("empty polynomial family"));
        }
        Ok(PolyFamily { members, label: label.into() })
    }

    fn nonzero_check(&self) -> Result<()> {
        if self.members.iter().all(|m| m.is_zero()) {
            return Err(Error::domain("all members of the family are zero"));
        }
        Ok(())
    }

    /// `H_v` of the family: max over members.
    pub fn max_abs_coeff(&self, v: &Place) -> Result<Rational> {
        self.nonzero_check()?;
        let mut best = Rational::zero();
        for m in self.members.iter().filter(|m| !m.is_zero()) {
            let a = m.max_abs_coeff(v)?;
            if a > best {
                best = a;
            }
        }
        Ok(best)
    }

    pub fn local_height(&self, v: &Place, precision_bits: u32) -> Result<LogValue> {
        LogValue::ln_rational(&self.max_abs_coeff(v)?, precision_bits)
    }

    pub fn local_length(&self, v: &Place, precision_bits: u32) -> Result<LogValue> {
        if !v.is_archimedean() {
            return Err(Error::domain("local length is archimedean-only"));
        }
        self.nonzero_check()?;
        let mut best = Rational::zero();
        for m in self.members.iter().filter(|m| !m.is_zero()) {
            let a = m.sum_abs_coeff_arch()?;
            if a > best {
                best = a;
            }
        }
        LogValue::ln_rational(&best, precision_bits)
    }

    /// Gauss-Weil height: `sum_v log H_v(family)`. Equals the Weil height of
    /// the projective tuple of all coefficients, so it is computed as one
    /// exact-integer log and is invariant under common rescaling.
    pub fn gauss_weil_height(&self, precision_bits: u32) -> Result<LogValue> {
        self.nonzero_check()?;
        let coeffs: Vec<Rational> = self
            .members
            .iter()
            .flat_map(|m| m.terms.values().cloned())
            .collect();
        tuple_height(&coeffs, precision_bits)
    }
}

/// Gauss-Weil height of a single polynomial (family of one).
pub fn gauss_weil_height_single(p: &MultiPoly, precision_bits: u32) -> Result<LogValue> {
    PolyFamily::new(vec![p.clone()], "single")?.gauss_weil_height(precision_bits)
}

// ---------------------------------------------------------------------------
// textual serialization: "coeff * X^a Y^b" terms joined by " + "
// ---------------------------------------------------------------------------

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k == 1 {
                    write!(f, " * {}", self.vars[i])?;
                } else {
                    write!(f, " * {}^{}", self.vars[i], k)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl MultiPoly {
    /// Parse the `Display` format over a given variable list.
    pub fn parse(s: &str, vars: Arc<Vec<String>>) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(vars.clone());
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let mut parts = term.split('*').map(str::trim);
            let coeff = parts
                .next()
                .ok_or_else(|| Error::parse("empty term"))?;
            let c = parse_rational(coeff)?;
            let mut e = vec![0u32; vars.len()];
            for factor in parts {
                let (name, pow) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n.trim(),
                        p.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::parse(format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (factor, 1),
                };
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::parse(format!("unknown variable {name:?}")))?;
                e[idx] += pow;
            }
            out.insert_term(e, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn xy() -> Arc<Vec<String>> {
        Arc::new(vec!["X".into(), "Y".into()])
    }

    #[test]
    fn arithmetic_basics() {
        let vars = xy();
        let x = MultiPoly::var(vars.clone(), 0);
        let y = MultiPoly::var(vars.clone(), 1);
        let p = x.add(&y).unwrap().pow(2).unwrap();
        assert_eq!(p.total_degree(), 2);
        assert_eq!(p.monomial_count(), 3);
        assert_eq!(p.coefficient(&[1, 1]), rat(2, 1));
        let q = p.sub(&p).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn local_heights_and_lengths() {
        // 12X^2 - 4Y^2: H_inf = 12, L_inf = 16
        let vars = xy();
        let p = MultiPoly::monomial(vars.clone(), vec![2, 0], rat(12, 1))
            .add(&MultiPoly::monomial(vars.clone(), vec![0, 2], rat(-4, 1)))
            .unwrap();
        assert_eq!(p.max_abs_coeff(&Place::Archimedean).unwrap(), rat(12, 1));
        assert_eq!(p.sum_abs_coeff_arch().unwrap(), rat(16, 1));
        let one = MultiPoly::one(vars.clone());
        for v in [Place::Archimedean, Place::finite(2u32).unwrap()] {
            assert_eq!(one.max_abs_coeff(&v).unwrap(), rat(1, 1));
        }
        let zero = MultiPoly::zero(vars);
        assert!(zero.max_abs_coeff(&Place::Archimedean).is_err());
    }

    #[test]
    fn normalized_derivatives() {
        let vars = xy();
        let x = MultiPoly::var(vars.clone(), 0);
        let y = MultiPoly::var(vars.clone(), 1);
        // (1/2!) d^2/dX^2 of X^2 = 1
        let p = x.pow(2).unwrap();
        assert_eq!(
            p.normalized_derivative(&[2, 0]).unwrap(),
            MultiPoly::one(vars.clone())
        );
        // X^3 Y, alpha = (1,1) -> 3X^2
        let q = x.pow(3).unwrap().mul(&y).unwrap();
        let d = q.normalized_derivative(&[1, 1]).unwrap();
        assert_eq!(d, x.pow(2).unwrap().scale(&rat(3, 1)));
        // (X+Y)^4, alpha = (2,0) -> 6(X+Y)^2
        let s = x.add(&y).unwrap();
        let d = s.pow(4).unwrap().normalized_derivative(&[2, 0]).unwrap();
        assert_eq!(d, s.pow(2).unwrap().scale(&rat(6, 1)));
        // alpha! * normalized = raw iterated derivative
        let raw = q.derivative(0).derivative(1);
        assert_eq!(raw, q.normalized_derivative(&[1, 1]).unwrap());
    }

    #[test]
    fn composition() {
        let vars = xy();
        let x = MultiPoly::var(vars.clone(), 0);
        let q_vars: Arc<Vec<String>> = Arc::new(vec!["Y1".into(), "Y2".into()]);
        let q = MultiPoly::var(q_vars.clone(), 0).mul(&MultiPoly::var(q_vars.clone(), 1)).unwrap();
        let r = q.compose(&[x.clone(), x.clone()]).unwrap();
        assert_eq!(r, x.pow(2).unwrap());
        let s = MultiPoly::var(q_vars.clone(), 0).add(&MultiPoly::var(q_vars, 1)).unwrap();
        let z = s.compose(&[x.clone(), x.neg()]).unwrap();
        assert!(z.is_zero());
        assert!(s.compose(&[x]).is_err());
    }

    #[test]
    fn display_roundtrip() {
        let vars = xy();
        let p = MultiPoly::monomial(vars.clone(), vec![3, 1], rat(-3, 2))
            .add(&MultiPoly::monomial(vars.clone(), vec![0, 0], rat(7, 1)))
            .unwrap()
            .add(&MultiPoly::var(vars.clone(), 1))
            .unwrap();
        let text = p.to_string();
        let q = MultiPoly::parse(&text, vars).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn gauss_weil_examples() {
        let vars = xy();
        // family {1, g2, g3} for g2 = 0, g3 = -4 has height log 4
        let fam = PolyFamily::new(
            vec![
                MultiPoly::one(vars.clone()),
                MultiPoly::zero(vars.clone()),
                MultiPoly::constant(vars.clone(), rat(-4, 1)),
            ],
            "curve coefficients",
        )
        .unwrap();
        let h = fam.gauss_weil_height(128).unwrap();
        assert!((h.to_f64() - 4f64.ln()).abs() < 1e-12);
        // family {X, Y} has height 0
        let fam = PolyFamily::new(
            vec![MultiPoly::var(vars.clone(), 0), MultiPoly::var(vars, 1)],
            "coordinates",
        )
        .unwrap();
        assert_eq!(fam.gauss_weil_height(128).unwrap().to_f64(), 0.0);
    }

    #[test]
    fn block_degrees() {
        let vars: Arc<Vec<String>> =
            Arc::new(vec!["X1".into(), "Y1".into(), "X2".into(), "Y2".into()]);
        let p = MultiPoly::monomial(vars.clone(), vec![2, 0, 1, 1], rat(1, 1))
            .add(&MultiPoly::monomial(vars, vec![1, 1, 0, 2], rat(5, 1)))
            .unwrap();
        let blocks = vec![vec![0, 1], vec![2, 3]];
        assert_eq!(p.multidegree(&blocks), vec![2, 2]);
        assert_eq!(p.block_homogeneous_degrees(&blocks), Some(vec![2, 2]));
    }
}
