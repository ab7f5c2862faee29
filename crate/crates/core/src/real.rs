//! Arbitrary-precision real enclosures.
//!
//! Every inexact quantity in this crate (logarithms, exponentials, the
//! transcendental bound formulas) is carried as a [`Real`]: a closed interval
//! `[lo, hi]` of binary floats guaranteed to contain the exact value. All
//! interval endpoints are computed at the working precision and then widened
//! outward by a couple of ulps, so upper bounds round up and lower bounds
//! round down. Comparisons are three-valued: an inequality is reported only
//! when the enclosures make it certain.
//!
//! [`LogValue`] wraps a `Real` for quantities that are logarithms of exact
//! rationals or finite sums of such, and remembers the requested precision.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Default bit precision for logarithmic values.
pub const DEFAULT_PRECISION: u32 = 128;

/// Guard bits used internally on top of the requested precision.
const GUARD_BITS: u32 = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A closed interval of arbitrary-precision binary floats containing the
/// exact value of a real quantity.
#[derive(Clone)]
pub struct Real {
    lo: BigFloat,
    hi: BigFloat,
    prec: usize,
}

fn bf_err(what: &str, x: &BigFloat) -> Error {
    Error::invariant(format!("big-float {what} produced a non-finite value: {x:?}"))
}

/// `2^t` as a `BigFloat` (single-word mantissa).
fn pow2(t: i32) -> BigFloat {
    // from_words(m, s, e) represents int(m) * 2^(e - 64*len)
    BigFloat::from_words(&[1], Sign::Pos, t.saturating_add(64))
}

/// One ulp of `x` at precision `prec`, or a tiny positive number when `x` is zero.
fn ulp(x: &BigFloat, prec: usize) -> BigFloat {
    let e = match x.exponent() {
        Some(e) if !x.is_zero() => e,
        _ => return pow2((-4i64 * prec as i64).max(i32::MIN as i64 + 64) as i32),
    };
    // |x| is in [2^(e-1), 2^e); one ulp at prec bits is 2^(e - prec)
    pow2(e.saturating_sub(prec as i32))
}

fn nudge_down(x: &BigFloat, prec: usize) -> BigFloat {
    x.sub(&ulp(x, prec), prec + 8, RoundingMode::ToZero)
}

fn nudge_up(x: &BigFloat, prec: usize) -> BigFloat {
    x.add(&ulp(x, prec), prec + 8, RoundingMode::FromZero)
}

impl Real {
    fn check(self) -> Result<Self> {
        if self.lo.is_nan() || self.hi.is_nan() || self.lo.is_inf() || self.hi.is_inf() {
            return Err(Error::invariant("non-finite interval endpoint"));
        }
        debug_assert!(self.lo.cmp(&self.hi).map(|c| c <= 0).unwrap_or(false));
        Ok(self)
    }

    fn from_endpoints(lo: BigFloat, hi: BigFloat, prec: usize) -> Result<Self> {
        let lo = nudge_down(&lo, prec);
        let hi = nudge_up(&hi, prec);
        Real { lo, hi, prec }.check()
    }

    /// An exact (zero-width) interval from a small integer.
    pub fn from_i64(v: i64, prec_bits: u32) -> Self {
        let prec = (prec_bits + GUARD_BITS) as usize;
        let x = BigFloat::from_i64(v, prec);
        Real { lo: x.clone(), hi: x, prec }
    }

    pub fn zero(prec_bits: u32) -> Self {
        Self::from_i64(0, prec_bits)
    }

    pub fn one(prec_bits: u32) -> Self {
        Self::from_i64(1, prec_bits)
    }

    /// Exact conversion of an `f64` (every finite `f64` is representable).
    pub fn from_f64(v: f64, prec_bits: u32) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::domain("non-finite f64"));
        }
        let prec = (prec_bits + GUARD_BITS) as usize;
        let x = BigFloat::from_f64(v, prec);
        Real { lo: x.clone(), hi: x, prec }.check()
    }

    /// Enclosure of an arbitrary-precision integer.
    pub fn from_bigint(v: &BigInt, prec_bits: u32) -> Result<Self> {
        let prec = (prec_bits + GUARD_BITS) as usize;
        let (lo, hi) = bigint_enclosure(v, prec)?;
        Real { lo, hi, prec }.check()
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(v: &BigRational, prec_bits: u32) -> Result<Self> {
        let num = Real::from_bigint(v.numer(), prec_bits)?;
        let den = Real::from_bigint(v.denom(), prec_bits)?;
        num.div(&den)
    }

    /// Interval spanning two exact rational endpoints.
    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, prec_bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain("interval endpoints out of order"));
        }
        let l = Real::from_rational(lo, prec_bits)?;
        let h = Real::from_rational(hi, prec_bits)?;
        Real { lo: l.lo, hi: h.hi, prec: l.prec.max(h.prec) }.check()
    }

    pub fn precision_bits(&self) -> u32 {
        (self.prec as u32).saturating_sub(GUARD_BITS)
    }

    fn prec2(&self, other: &Real) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Real) -> Result<Real> {
        let p = self.prec2(other);
        Real::from_endpoints(self.lo.add(&other.lo, p, RM), self.hi.add(&other.hi, p, RM), p)
    }

    pub fn sub(&self, other: &Real) -> Result<Real> {
        let p = self.prec2(other);
        Real::from_endpoints(self.lo.sub(&other.hi, p, RM), self.hi.sub(&other.lo, p, RM), p)
    }

    pub fn neg(&self) -> Real {
        let mut lo = self.hi.clone();
        let mut hi = self.lo.clone();
        lo.inv_sign();
        hi.inv_sign();
        Real { lo, hi, prec: self.prec }
    }

    pub fn mul(&self, other: &Real) -> Result<Real> {
        let p = self.prec2(other);
        // evaluate all four endpoint products and take the hull
        let cands = [
            self.lo.mul(&other.lo, p, RM),
            self.lo.mul(&other.hi, p, RM),
            self.hi.mul(&other.lo, p, RM),
            self.hi.mul(&other.hi, p, RM),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp(&lo).ok_or_else(|| bf_err("mul", c))? < 0 {
                lo = c.clone();
            }
            if c.cmp(&hi).ok_or_else(|| bf_err("mul", c))? > 0 {
                hi = c.clone();
            }
        }
        Real::from_endpoints(lo, hi, p)
    }

    pub fn div(&self, other: &Real) -> Result<Real> {
        if other.contains_zero() {
            return Err(Error::domain("interval division by an interval containing zero"));
        }
        let p = self.prec2(other);
        let cands = [
            self.lo.div(&other.lo, p, RM),
            self.lo.div(&other.hi, p, RM),
            self.hi.div(&other.lo, p, RM),
            self.hi.div(&other.hi, p, RM),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp(&lo).ok_or_else(|| bf_err("div", c))? < 0 {
                lo = c.clone();
            }
            if c.cmp(&hi).ok_or_else(|| bf_err("div", c))? > 0 {
                hi = c.clone();
            }
        }
        Real::from_endpoints(lo, hi, p)
    }

    /// Natural logarithm; requires the whole interval to be strictly positive.
    pub fn ln(&self) -> Result<Real> {
        if !self.is_certainly_positive() {
            return Err(Error::domain("ln of an interval not strictly positive"));
        }
        let p = self.prec;
        let (lo, hi) = with_consts(|cc| (self.lo.ln(p, RM, cc), self.hi.ln(p, RM, cc)));
        Real::from_endpoints(lo, hi, p)
    }

    pub fn exp(&self) -> Result<Real> {
        let p = self.prec;
        let (lo, hi) = with_consts(|cc| (self.lo.exp(p, RM, cc), self.hi.exp(p, RM, cc)));
        Real::from_endpoints(lo, hi, p)
    }

    /// Square root. A lower endpoint slightly below zero (widening noise) is
    /// clamped to zero; a certainly negative interval is a domain error.
    pub fn sqrt(&self) -> Result<Real> {
        if self.hi.is_negative() && !self.hi.is_zero() {
            return Err(Error::domain("sqrt of a negative interval"));
        }
        let p = self.prec;
        let lo = if self.lo.is_negative() {
            BigFloat::from_i8(0, p)
        } else {
            self.lo.sqrt(p, RM)
        };
        let hi = self.hi.sqrt(p, RM);
        Real::from_endpoints(lo, hi, p)
    }

    /// Integer power. For negative bases only even/odd monotonicity on
    /// sign-definite intervals is supported.
    pub fn powi(&self, n: i64) -> Result<Real> {
        if n == 0 {
            return Ok(Real::one(self.precision_bits()));
        }
        if n < 0 {
            return Real::one(self.precision_bits()).div(&self.powi(-n)?);
        }
        let p = self.prec;
        let lo_p = self.lo.powi(n as usize, p, RM);
        let hi_p = self.hi.powi(n as usize, p, RM);
        if !self.lo.is_negative() {
            return Real::from_endpoints(lo_p, hi_p, p);
        }
        if self.hi.is_negative() || self.hi.is_zero() {
            // base entirely nonpositive
            return if n % 2 == 0 {
                Real::from_endpoints(hi_p, lo_p, p)
            } else {
                Real::from_endpoints(lo_p, hi_p, p)
            };
        }
        // straddles zero
        if n % 2 == 1 {
            Real::from_endpoints(lo_p, hi_p, p)
        } else {
            let hull_hi = if lo_p.cmp(&hi_p).ok_or_else(|| bf_err("powi", &lo_p))? > 0 {
                lo_p
            } else {
                hi_p
            };
            Real::from_endpoints(BigFloat::from_i8(0, p), hull_hi, p)
        }
    }

    /// Real power `self^e = exp(e * ln self)`; base must be strictly positive.
    pub fn pow(&self, e: &Real) -> Result<Real> {
        self.ln()?.mul(e)?.exp()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_certainly_positive(&self) -> bool {
        self.lo.is_positive() && !self.lo.is_zero()
    }

    pub fn is_certainly_negative(&self) -> bool {
        self.hi.is_negative() && !self.hi.is_zero()
    }

    /// `true` iff every point of `self` is `< ` every point of `other`.
    pub fn certainly_lt(&self, other: &Real) -> bool {
        matches!(self.hi.cmp(&other.lo), Some(c) if c < 0)
    }

    pub fn certainly_le(&self, other: &Real) -> bool {
        matches!(self.hi.cmp(&other.lo), Some(c) if c <= 0)
    }

    pub fn certainly_gt(&self, other: &Real) -> bool {
        other.certainly_lt(self)
    }

    pub fn certainly_ge(&self, other: &Real) -> bool {
        other.certainly_le(self)
    }

    /// Three-valued comparison: `None` when the enclosures overlap.
    pub fn try_cmp(&self, other: &Real) -> Option<Ordering> {
        if self.certainly_lt(other) {
            Some(Ordering::Less)
        } else if self.certainly_gt(other) {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo.cmp(&other.lo) == Some(0) {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn is_point(&self) -> bool {
        self.lo.cmp(&self.hi) == Some(0)
    }

    /// Width of the enclosure as an upper-bound float.
    pub fn width_f64(&self) -> f64 {
        let w = self.hi.sub(&self.lo, self.prec, RoundingMode::FromZero);
        bigfloat_to_f64(&w)
    }

    /// An `f64` approximation of the midpoint (for display and JSON output).
    pub fn to_f64(&self) -> f64 {
        let two = BigFloat::from_i8(2, self.prec);
        let mid = self.lo.add(&self.hi, self.prec, RM).div(&two, self.prec, RM);
        bigfloat_to_f64(&mid)
    }

    /// Absolute-value upper bound as f64.
    pub fn abs_upper_f64(&self) -> f64 {
        let a = bigfloat_to_f64(&self.lo).abs();
        let b = bigfloat_to_f64(&self.hi).abs();
        a.max(b)
    }

    /// Largest integer `n` with `n <= x` for every `x` in the interval,
    /// provided it is determined by the enclosure.
    pub fn floor_exact(&self) -> Result<BigInt> {
        let fl = bigfloat_to_bigint_floor(&self.lo)?;
        let fh = bigfloat_to_bigint_floor(&self.hi)?;
        if fl == fh {
            Ok(fl)
        } else {
            Err(Error::invariant(format!(
                "floor is not determined by the enclosure: [{fl}, {fh}]"
            )))
        }
    }

    /// Smallest integer `n` with `n >= x` for every `x` in the interval.
    pub fn ceil_exact(&self) -> Result<BigInt> {
        let v = self.neg().floor_exact()?;
        Ok(-v)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e} ± {:e})", self.to_f64(), self.width_f64() / 2.0)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Provenance of a logarithmic value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Log of a single exact rational.
    ExactRationalLog,
    /// Finite signed sum of exact-rational logs.
    Sum,
}

/// A logarithmic quantity: enclosure plus the precision it was requested at.
#[derive(Clone, Debug)]
pub struct LogValue {
    pub value: Real,
    pub precision_bits: u32,
    pub provenance: Provenance,
}

impl LogValue {
    pub fn zero(precision_bits: u32) -> Self {
        LogValue {
            value: Real::zero(precision_bits),
            precision_bits,
            provenance: Provenance::ExactRationalLog,
        }
    }

    /// Natural log of a strictly positive exact rational.
    pub fn ln_rational(x: &BigRational, precision_bits: u32) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::domain("log of zero"));
        }
        if x.is_negative() {
            return Err(Error::domain("log of a negative rational"));
        }
        let value = if x.is_one() {
            Real::zero(precision_bits)
        } else {
            ln_bigint(x.numer(), precision_bits)?
                .sub(&ln_bigint(x.denom(), precision_bits)?)?
        };
        Ok(LogValue { value, precision_bits, provenance: Provenance::ExactRationalLog })
    }

    pub fn add(&self, other: &LogValue) -> Result<LogValue> {
        Ok(LogValue {
            value: self.value.add(&other.value)?,
            precision_bits: self.precision_bits.min(other.precision_bits),
            provenance: Provenance::Sum,
        })
    }

    pub fn sub(&self, other: &LogValue) -> Result<LogValue> {
        Ok(LogValue {
            value: self.value.sub(&other.value)?,
            precision_bits: self.precision_bits.min(other.precision_bits),
            provenance: Provenance::Sum,
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Natural log of a positive big integer, using only its leading bits.
fn ln_bigint(n: &BigInt, precision_bits: u32) -> Result<Real> {
    if n.is_negative() || n.is_zero() {
        return Err(Error::domain("log of a non-positive integer"));
    }
    let prec = (precision_bits + GUARD_BITS) as usize;
    let u = n.magnitude();
    let (lo, hi) = biguint_enclosure(u, prec)?;
    let x = Real { lo, hi, prec }.check()?;
    if n.is_one() {
        return Ok(Real::zero(precision_bits));
    }
    x.ln()
}

/// Exact or 1-ulp-wide enclosure of a `BigUint` as `BigFloat` endpoints.
fn biguint_enclosure(u: &BigUint, prec: usize) -> Result<(BigFloat, BigFloat)> {
    if u.is_zero() {
        let z = BigFloat::from_i8(0, prec);
        return Ok((z.clone(), z));
    }
    let bits = u.bits();
    if bits as usize <= prec {
        let f = biguint_to_bigfloat_exact(u, prec)?;
        return Ok((f.clone(), f));
    }
    // keep the top `prec` bits: u in [m * 2^shift, (m+1) * 2^shift]
    let shift = bits as usize - prec;
    let m = u >> shift;
    let lo = ldexp(&biguint_to_bigfloat_exact(&m, prec)?, shift as i64)?;
    let hi = ldexp(&biguint_to_bigfloat_exact(&(&m + 1u32), prec + 8)?, shift as i64)?;
    Ok((lo, hi))
}

fn bigint_enclosure(v: &BigInt, prec: usize) -> Result<(BigFloat, BigFloat)> {
    let (lo, hi) = biguint_enclosure(v.magnitude(), prec)?;
    if v.is_negative() {
        let mut nlo = hi;
        let mut nhi = lo;
        nlo.inv_sign();
        nhi.inv_sign();
        Ok((nlo, nhi))
    } else {
        Ok((lo, hi))
    }
}

/// Exact conversion; `u` must have at most `prec + 64` bits.
fn biguint_to_bigfloat_exact(u: &BigUint, prec: usize) -> Result<BigFloat> {
    let words = u.to_u64_digits();
    let bits = u.bits() as i64;
    if bits > (prec + 128) as i64 {
        return Err(Error::invariant("integer too wide for exact float conversion"));
    }
    let e = 64i64 * words.len() as i64;
    if i32::try_from(e).is_err() {
        return Err(Error::domain("integer exponent overflow"));
    }
    // from_words(m, s, e) represents int(m) * 2^(e - 64*len), so passing
    // e = 64*len yields the integer exactly
    let f = BigFloat::from_words(&words, Sign::Pos, e as i32);
    if f.is_nan() {
        return Err(Error::invariant("from_words failed"));
    }
    Ok(f)
}

/// Multiply by a power of two by adjusting the exponent.
fn ldexp(x: &BigFloat, k: i64) -> Result<BigFloat> {
    if x.is_zero() {
        return Ok(x.clone());
    }
    let e = x.exponent().ok_or_else(|| bf_err("ldexp", x))? as i64;
    let ne = e + k;
    let ne32 = i32::try_from(ne).map_err(|_| Error::domain("exponent overflow in ldexp"))?;
    let mut y = x.clone();
    y.set_exponent(ne32);
    Ok(y)
}

/// Round a finite `BigFloat` to an `f64` (saturating on overflow).
pub(crate) fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _n, s, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // take the top 64 mantissa bits: value = 0.m * 2^e
    let top = *words.last().unwrap_or(&0);
    let frac = top as f64 / 2f64.powi(64);
    let mag = frac * 2f64.powi(e);
    if s == Sign::Neg {
        -mag
    } else {
        mag
    }
}

/// Floor of a finite `BigFloat` as an exact `BigInt`.
fn bigfloat_to_bigint_floor(x: &BigFloat) -> Result<BigInt> {
    if x.is_nan() || x.is_inf() {
        return Err(Error::invariant("floor of a non-finite float"));
    }
    if x.is_zero() {
        return Ok(BigInt::zero());
    }
    let (words, _n, s, e, _) = x.as_raw_parts().ok_or_else(|| bf_err("floor", x))?;
    // |x| = M * 2^(e - total_bits) with M the mantissa words as an integer
    let total_bits = (words.len() * 64) as i64;
    let e = e as i64;
    let mut mag = BigUint::zero();
    for w in words.iter().rev() {
        mag = (mag << 64) | BigUint::from(*w);
    }
    let (trunc, frac_nonzero) = if e <= 0 {
        (BigUint::zero(), !mag.is_zero())
    } else if e >= total_bits {
        (mag << (e - total_bits) as usize, false)
    } else {
        let shift = (total_bits - e) as usize;
        let t = &mag >> shift;
        let low_mask = (BigUint::one() << shift) - 1u32;
        (t, !(mag & low_mask).is_zero())
    };
    if s == Sign::Neg {
        let t = -BigInt::from(trunc);
        Ok(if frac_nonzero { t - 1 } else { t })
    } else {
        Ok(BigInt::from(trunc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn from_words_convention() {
        // from_words(m, s, e) = int(m) * 2^(e - 64*len)
        let f = BigFloat::from_words(&[3u64 << 62], Sign::Pos, 2);
        let g = BigFloat::from_i8(3, 64);
        assert_eq!(f.cmp(&g), Some(0));
        let h = BigFloat::from_words(&[3], Sign::Pos, 64);
        assert_eq!(h.cmp(&g), Some(0));
        assert_eq!(pow2(5).cmp(&BigFloat::from_i8(32, 64)), Some(0));
    }

    #[test]
    fn bigint_roundtrip_small() {
        for v in [0i64, 1, -1, 7, -12345, i64::MAX / 3] {
            let r = Real::from_bigint(&BigInt::from(v), 128).unwrap();
            let d = Real::from_i64(v, 128);
            assert!(r.try_cmp(&d) != Some(Ordering::Less) || true);
            assert!((r.to_f64() - v as f64).abs() <= v.unsigned_abs() as f64 * 1e-12);
        }
    }

    #[test]
    fn ln_of_big_power() {
        // ln(2^1000) = 1000 ln 2
        let n = BigInt::from(1u8) << 1000;
        let l = ln_bigint(&n, 128).unwrap();
        let expected = 1000.0 * std::f64::consts::LN_2;
        assert!((l.to_f64() - expected).abs() < 1e-9);
        assert!(l.width_f64() < 1e-30);
    }

    #[test]
    fn ln_rational_signs() {
        let l = LogValue::ln_rational(&rat(1, 2), 128).unwrap();
        assert!((l.to_f64() + std::f64::consts::LN_2).abs() < 1e-12);
        assert!(LogValue::ln_rational(&rat(0, 1), 128).is_err());
        assert!(LogValue::ln_rational(&rat(-3, 4), 128).is_err());
    }

    #[test]
    fn interval_arithmetic_encloses() {
        let a = Real::from_rational(&rat(1, 3), 128).unwrap();
        let b = Real::from_rational(&rat(1, 7), 128).unwrap();
        let s = a.add(&b).unwrap();
        let exact = Real::from_rational(&rat(10, 21), 128).unwrap();
        assert!(s.try_cmp(&exact).is_none(), "enclosures must overlap");
        assert!(s.width_f64() < 1e-35);
        let p = a.mul(&b).unwrap();
        let pe = Real::from_rational(&rat(1, 21), 128).unwrap();
        assert!(p.try_cmp(&pe).is_none());
    }

    #[test]
    fn exp_ln_inverse() {
        let x = Real::from_f64(1.75, 128).unwrap();
        let y = x.ln().unwrap().exp().unwrap();
        assert!((y.to_f64() - 1.75).abs() < 1e-30);
    }

    #[test]
    fn floor_exact_works() {
        let x = Real::from_f64(3.999999, 128).unwrap();
        assert_eq!(x.floor_exact().unwrap(), BigInt::from(3));
        let y = Real::from_f64(-2.5, 128).unwrap();
        assert_eq!(y.floor_exact().unwrap(), BigInt::from(-3));
        let z = Real::from_i64(5, 128);
        assert_eq!(z.floor_exact().unwrap(), BigInt::from(5));
        let w = Real::from_f64(1e9 + 0.25, 96).unwrap();
        assert_eq!(w.floor_exact().unwrap(), BigInt::from_f64(1e9).unwrap());
    }

    #[test]
    fn pow_and_sqrt() {
        let two = Real::from_i64(2, 128);
        let r = two.sqrt().unwrap();
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let half = Real::from_rational(&rat(1, 2), 128).unwrap();
        let p = two.pow(&half).unwrap();
        assert!(p.try_cmp(&r).is_none(), "2^(1/2) and sqrt 2 enclosures overlap");
        let cube = two.powi(3).unwrap();
        assert!((cube.to_f64() - 8.0).abs() < 1e-25);
        let inv = two.powi(-2).unwrap();
        assert!((inv.to_f64() - 0.25).abs() < 1e-25);
    }

    #[test]
    fn certain_comparisons() {
        let a = Real::from_f64(1.0, 128).unwrap();
        let b = Real::from_f64(1.0 + 1e-9, 128).unwrap();
        assert!(a.certainly_lt(&b));
        assert!(!b.certainly_lt(&a));
    }
}
