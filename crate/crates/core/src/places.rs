//! Places of Q, normalized absolute values, the product formula and the Weil
//! height of coordinate tuples.
//!
//! Over Q there is one archimedean place and one place per prime `p`, all with
//! local-degree weight 1, so every sum over places in this crate is an
//! unweighted sum. Finite absolute values are normalized by `|x|_p =
//! p^(-v_p(x))`, which makes `sum_v log |x|_v = 0` for nonzero rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::real::{LogValue, Provenance, Real};

pub type Rational = BigRational;

/// A place of Q: the archimedean absolute value or a `p`-adic one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Archimedean,
    Finite(BigUint),
}

impl Place {
    /// The finite place at a prime `p`; errors when `p` is not prime.
    pub fn finite(p: impl Into<BigUint>) -> Result<Place> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        Ok(Place::Finite(p))
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// `v_p(x)` for a nonzero rational: the exponent of `p` in `x`.
pub fn valuation(x: &Rational, p: &BigUint) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::domain("valuation of zero"));
    }
    let p = BigInt::from(p.clone());
    Ok(int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p))
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0i64;
    while !n.is_zero() {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            break;
        }
        n = q;
        v += 1;
    }
    v
}

/// The normalized absolute value `|x|_v` as an exact rational.
pub fn abs_value(x: &Rational, v: &Place) -> Result<Rational> {
    match v {
        Place::Archimedean => Ok(x.abs()),
        Place::Finite(p) => {
            if x.is_zero() {
                return Ok(Rational::zero());
            }
            let val = valuation(x, p)?;
            let pk = BigInt::from(p.clone()).pow(val.unsigned_abs() as u32);
            Ok(if val >= 0 {
                Rational::new(BigInt::one(), pk)
            } else {
                Rational::from(pk)
            })
        }
    }
}

/// `log |x|_v` for nonzero `x`.
pub fn log_abs_value(x: &Rational, v: &Place, precision_bits: u32) -> Result<LogValue> {
    if x.is_zero() {
        return Err(Error::domain("log of zero"));
    }
    LogValue::ln_rational(&abs_value(x, v)?, precision_bits)
}

/// Primes dividing the numerator or denominator of any of `xs`.
pub fn support_primes(xs: &[Rational]) -> Vec<BigUint> {
    let mut set = std::collections::BTreeSet::new();
    for x in xs {
        for n in [x.numer(), x.denom()] {
            if n.is_zero() || n.abs().is_one() {
                continue;
            }
            for p in factorize(&n.magnitude().clone()).keys() {
                set.insert(p.clone());
            }
        }
    }
    set.into_iter().collect()
}

/// The places where any of `xs` has a nontrivial absolute value, with the
/// archimedean place first.
pub fn relevant_places(xs: &[Rational]) -> Vec<Place> {
    let mut places = vec![Place::Archimedean];
    places.extend(support_primes(xs).into_iter().map(Place::Finite));
    places
}

/// `sum_v log |x|_v` over all relevant places; zero for every nonzero rational
/// up to the precision of the log evaluations.
pub fn product_formula_defect(x: &Rational, precision_bits: u32) -> Result<LogValue> {
    if x.is_zero() {
        return Err(Error::domain("product formula defect of zero"));
    }
    let mut acc = LogValue::zero(precision_bits);
    for v in relevant_places(std::slice::from_ref(x)) {
        acc = acc.add(&log_abs_value(x, &v, precision_bits)?)?;
    }
    acc.provenance = Provenance::Sum;
    Ok(acc)
}

/// An integer-primitive representative of a projective rational tuple:
/// common denominators cleared and the integer gcd divided out. The first
/// nonzero coordinate is made positive.
pub fn primitive_representative(coords: &[Rational]) -> Result<Vec<BigInt>> {
    if coords.iter().all(|c| c.is_zero()) {
        return Err(Error::domain("all-zero projective tuple"));
    }
    let mut den = BigInt::one();
    for c in coords {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coords.iter().map(|c| (c * &den).numer().clone()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    let mut out: Vec<BigInt> = ints.into_iter().map(|c| c / &g).collect();
    if let Some(first) = out.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in &mut out {
                *c = -&*c;
            }
        }
    }
    Ok(out)
}

/// Weil height of a projective tuple of rationals:
/// `sum_v log max_i |x_i|_v`, invariant under scaling.
///
/// On an integer-primitive representative every finite place contributes
/// zero, so the height is the log of a single exact integer.
pub fn tuple_height(coords: &[Rational], precision_bits: u32) -> Result<LogValue> {
    let prim = primitive_representative(coords)?;
    let max = prim
        .iter()
        .map(|c| c.abs())
        .max()
        .expect("nonempty tuple");
    LogValue::ln_rational(&Rational::from(max), precision_bits)
}

/// The exact rational whose log is the `v`-adic contribution to the height of
/// a tuple: `max_i |x_i|_v`.
pub fn max_abs_at(coords: &[Rational], v: &Place) -> Result<Rational> {
    let mut best = Rational::zero();
    for c in coords {
        let a = abs_value(c, v)?;
        if a > best {
            best = a;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// integer factorization (trial division + Pollard rho), desk-scale inputs
// ---------------------------------------------------------------------------

/// Factorize a positive integer into a prime -> exponent map.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, u32> {
    let mut map = BTreeMap::new();
    if n.is_zero() || n.is_one() {
        return map;
    }
    let mut n = n.clone();
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let p = BigUint::from(small);
        while (&n % &p).is_zero() {
            *map.entry(p.clone()).or_insert(0) += 1;
            n /= &p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *map.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    map
}

/// Miller-Rabin primality test, deterministic for inputs below 3.3e24.
pub fn is_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let p = BigUint::from(small);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    // Brent's variant; n is odd, composite, with no factor below 50
    let one = BigUint::one();
    let mut c = BigUint::from(1u32);
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if d != one && &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// Convenience: parse "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::parse(format!("bad integer {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::parse(format!("bad integer {den:?}")))?;
    if d.is_zero() {
        return Err(Error::parse("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Format a rational as "p" or "p/q".
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        Real::from_rational(x, 64)
            .map(|r| r.to_f64())
            .unwrap_or(f64::NAN)
    })
}
