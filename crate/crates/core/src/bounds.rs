//! Closed-form evaluation of the explicit point-counting bounds, the
//! near-optimal parameter choices, the simultaneous-approximation predicates
//! and the consistency census.
//!
//! All transcendental arithmetic runs through [`Real`] enclosures, so upper
//! bounds round outward and comparisons are claimed only when certain. A
//! theorem-shaped check can therefore report "hypotheses unmet" or
//! "undecided at this precision", but it can never fabricate a
//! falsification.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::counting::{enumerate_bounded, EnumerationResult, MordellWeilModel};
use crate::curve::{ProjectivePoint, WeierstrassCurve};
use crate::divpoly::Multiplier;
use crate::error::{Error, Result};
use crate::heights::{dist_v, naive_height};
use crate::places::{parse_rational, Place, Rational};
use crate::poly::MultiPoly;
use crate::real::{Real, DEFAULT_PRECISION};

fn real_rat(x: &Rational, prec: u32) -> Result<Real> {
    Real::from_rational(x, prec)
}

fn real_int(x: i64, prec: u32) -> Real {
    Real::from_i64(x, prec)
}

/// `|log epsilon| = log(1/epsilon)` for `0 < epsilon < 1`.
fn abs_log_eps(eps: &Rational, prec: u32) -> Result<Real> {
    if !eps.is_positive() {
        return Err(Error::precondition("epsilon must be positive"));
    }
    real_rat(eps, prec)?.ln().map(|l| l.neg())
}

// ---------------------------------------------------------------------------
// the height threshold R and its optimizers
// ---------------------------------------------------------------------------

/// The explicit height threshold
/// `R(m) = (2904 m)^m [ (55 e^(-m/(m-1)) + m e^(-1)) eta
///                     + (272 e^(-m/(m-1)) + 2 m e^(-1)) ]`
/// with `e` standing for `epsilon`.
pub fn r_expression(m: u32, eps: &Rational, eta: &Real) -> Result<Real> {
    if m < 2 {
        return Err(Error::precondition("R needs m >= 2"));
    }
    let prec = DEFAULT_PRECISION;
    let e = real_rat(eps, prec)?;
    let exp_main = Rational::new(BigInt::from(-(m as i64)), BigInt::from(m as i64 - 1));
    let e_main = e.pow(&real_rat(&exp_main, prec)?)?;
    let e_inv = Real::one(prec).div(&e)?;
    let m_r = real_int(m as i64, prec);
    let front = real_int(2904 * m as i64, prec).powi(m as i64)?;
    let eta_part = real_int(55, prec)
        .mul(&e_main)?
        .add(&m_r.mul(&e_inv)?)?
        .mul(eta)?;
    let const_part = real_int(272, prec)
        .mul(&e_main)?
        .add(&real_int(2, prec).mul(&m_r)?.mul(&e_inv)?)?;
    front.mul(&eta_part.add(&const_part)?)
}

/// The strict range bound for the first optimizer: `epsilon < 1/15788`.
pub fn m0_epsilon_bound() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(15788))
}

/// `m0 = floor( sqrt(2 log a / (loglog a - logloglog a + 16)) + 2 )` with
/// `a = 1/epsilon`; requires `epsilon < 1/15788`.
pub fn choose_m0(eps: &Rational) -> Result<u32> {
    if !eps.is_positive() || *eps >= m0_epsilon_bound() {
        return Err(Error::precondition("m0 optimizer needs 0 < epsilon < 1/15788"));
    }
    for prec in [DEFAULT_PRECISION, 256, 512] {
        let log_a = abs_log_eps(eps, prec)?;
        let ll = log_a.ln()?;
        let lll = ll.ln()?;
        let denom = ll.sub(&lll)?.add(&real_int(16, prec))?;
        let inner = real_int(2, prec).mul(&log_a)?.div(&denom)?;
        let val = inner.sqrt()?.add(&real_int(2, prec))?;
        if let Ok(fl) = val.floor_exact() {
            let m0 = fl
                .to_u32()
                .ok_or_else(|| Error::invariant("m0 out of range"))?;
            return Ok(m0.max(2));
        }
    }
    Err(Error::invariant("m0 floor undetermined"))
}

/// Signs of the derivative of `x (log x + log 2904) + x/(x-1) log a` at the
/// two bracket ends around its minimizer; both must be as stated for the
/// bracket to certify near-optimality of `m0`.
pub fn m0_bracket_certified(eps: &Rational) -> Result<bool> {
    let prec = 256;
    let log_a = abs_log_eps(eps, prec)?;
    let ll = log_a.ln()?;
    let lll = ll.ln()?;
    let g_prime = |x: &Real| -> Result<Real> {
        // g'(x) = log x + 1 + log 2904 - log a / (x - 1)^2
        let last = log_a.div(&x.sub(&Real::one(prec))?.powi(2)?)?;
        x.ln()?
            .add(&Real::one(prec))?
            .add(&real_int(2904, prec).ln()?)?
            .sub(&last)
    };
    let bracket = |c: i64| -> Result<Real> {
        let denom = ll.sub(&lll)?.add(&real_int(c, prec))?;
        real_int(2, prec)
            .mul(&log_a)?
            .div(&denom)?
            .sqrt()?
            .add(&Real::one(prec))
    };
    let lo = bracket(21)?;
    let hi = bracket(16)?;
    Ok(g_prime(&lo)?.is_certainly_negative() && g_prime(&hi)?.is_certainly_positive())
}

/// `m1 = floor( (r/4) |log epsilon| + 2 )`; requires
/// `epsilon <= exp(-4/r)`.
pub fn choose_m1(eps: &Rational, r: u32) -> Result<u32> {
    if r == 0 {
        return Err(Error::precondition("rank must be at least 1"));
    }
    for prec in [DEFAULT_PRECISION, 256, 512] {
        let l = abs_log_eps(eps, prec)?;
        // epsilon <= e^(-4/r)  <=>  r |log eps| >= 4
        let rl = real_int(r as i64, prec).mul(&l)?;
        if rl.certainly_lt(&real_int(4, prec)) {
            return Err(Error::precondition("m1 optimizer needs epsilon <= exp(-4/r)"));
        }
        if !rl.certainly_ge(&real_int(4, prec)) {
            continue;
        }
        let val = real_rat(&Rational::new(BigInt::from(r), BigInt::from(4)), prec)?
            .mul(&l)?
            .add(&real_int(2, prec))?;
        if let Ok(fl) = val.floor_exact() {
            return fl
                .to_u32()
                .ok_or_else(|| Error::invariant("m1 out of range"));
        }
    }
    Err(Error::invariant("m1 floor undetermined"))
}

/// The census-shaped count at parameter `m`:
/// `4 e^(-1/2) [m(m-1)(log m + 9) + m |log e|] (499 e^(-m/(2(m-1))))^r`.
pub fn s_expression(m: u32, eps: &Rational, r: u32) -> Result<Real> {
    if m < 2 {
        return Err(Error::precondition("S needs m >= 2"));
    }
    let prec = DEFAULT_PRECISION;
    let e = real_rat(eps, prec)?;
    let l = abs_log_eps(eps, prec)?;
    let m_r = real_int(m as i64, prec);
    let bracket = m_r
        .mul(&real_int(m as i64 - 1, prec))?
        .mul(&m_r.ln()?.add(&real_int(9, prec))?)?
        .add(&m_r.mul(&l)?)?;
    let expo = Rational::new(BigInt::from(-(m as i64)), BigInt::from(2 * (m as i64 - 1)));
    let tail = real_int(499, prec)
        .mul(&e.pow(&real_rat(&expo, prec)?)?)?
        .powi(r as i64)?;
    real_int(4, prec)
        .mul(&e.pow(&real_rat(&Rational::new((-1).into(), 2.into()), prec)?)?)?
        .mul(&bracket)?
        .mul(&tail)
}

/// The boxed parameter choices and their two constraints.
pub struct ParameterChoice {
    pub eps0: Real,
    pub eps1: Real,
    pub alpha: Real,
    /// `(m-1)/m! (7/3)^m eps1^m / (eps0 (m+eps0)(1+eps0)^(m-2)) <= 1/2`.
    pub product_constraint_ok: bool,
    /// `4m (eps0 + 2 alpha) <= eps eps1`.
    pub linear_constraint_ok: bool,
}

/// `eps1 = m eps^(1/(m-1)) / 484`, `eps0 = eps^(m/(m-1)) / 4000`,
/// `alpha = eps^(m/(m-1)) / 7744`, with both defining constraints verified.
pub fn parameters(eps: &Rational, m: u32) -> Result<ParameterChoice> {
    if m < 2 {
        return Err(Error::precondition("parameter choice needs m >= 2"));
    }
    if !eps.is_positive() {
        return Err(Error::precondition("epsilon must be positive"));
    }
    let prec = DEFAULT_PRECISION;
    let e = real_rat(eps, prec)?;
    let pow_1 = e.pow(&real_rat(
        &Rational::new(BigInt::one(), BigInt::from(m as i64 - 1)),
        prec,
    )?)?;
    let pow_m = e.pow(&real_rat(
        &Rational::new(BigInt::from(m as i64), BigInt::from(m as i64 - 1)),
        prec,
    )?)?;
    let eps1 = real_int(m as i64, prec).mul(&pow_1)?.div(&real_int(484, prec))?;
    let eps0 = pow_m.div(&real_int(4000, prec))?;
    let alpha = pow_m.div(&real_int(7744, prec))?;

    // product constraint
    let mut fact = BigInt::one();
    for i in 2..=(m as i64) {
        fact *= i;
    }
    let front = real_rat(&Rational::new(BigInt::from(m as i64 - 1), fact), prec)?;
    let seven_thirds = real_rat(&Rational::new(7.into(), 3.into()), prec)?.powi(m as i64)?;
    let numer = front.mul(&seven_thirds)?.mul(&eps1.powi(m as i64)?)?;
    let denom = eps0
        .mul(&eps0.add(&real_int(m as i64, prec))?)?
        .mul(&eps0.add(&Real::one(prec))?.powi(m as i64 - 2)?)?;
    let product_constraint_ok = numer
        .div(&denom)?
        .certainly_le(&real_rat(&Rational::new(1.into(), 2.into()), prec)?);

    // linear constraint
    let lhs = real_int(4 * m as i64, prec)
        .mul(&eps0.add(&real_int(2, prec).mul(&alpha)?)?)?;
    let rhs = e.mul(&eps1)?;
    let linear_constraint_ok = lhs.certainly_le(&rhs);

    Ok(ParameterChoice {
        eps0,
        eps1,
        alpha,
        product_constraint_ok,
        linear_constraint_ok,
    })
}

// ---------------------------------------------------------------------------
// theorem-shaped cardinal bounds
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    T1,
    T2,
    T3,
    C18,
    C19,
    C20,
}

impl BoundKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "t1" => BoundKind::T1,
            "t2" => BoundKind::T2,
            "t3" => BoundKind::T3,
            "c18" => BoundKind::C18,
            "c19" => BoundKind::C19,
            "c20" => BoundKind::C20,
            other => return Err(Error::precondition(format!("unknown bound kind {other:?}"))),
        })
    }
}

/// Inputs for a cardinal-bound evaluation.
pub struct BoundInputs {
    pub epsilon: Rational,
    pub rank: u32,
    pub eta: Real,
    pub hmin: Option<Rational>,
    pub torsion_count: Option<u64>,
    pub card_s: Option<u32>,
}

/// A fully evaluated bound: the cardinal cap and, for the shifted systems,
/// the height-shift entering the system of inequalities.
pub struct BoundReport {
    pub kind: BoundKind,
    pub cardinal_bound: Real,
    pub system_shift: Option<Real>,
}

fn t1_shape(eps: &Rational, r: u32) -> Result<Real> {
    let prec = DEFAULT_PRECISION;
    let e = real_rat(eps, prec)?;
    let l = abs_log_eps(eps, prec)?;
    let ll = l.ln()?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let e_mhalf = e.pow(&real_rat(&-&half, prec)?)?;
    let inner = real_int(499, prec)
        .mul(&e_mhalf)?
        .mul(&l.mul(&ll)?.sqrt()?.exp()?)?;
    real_int(34, prec)
        .mul(&e_mhalf)?
        .mul(&l.pow(&real_rat(&Rational::new(3.into(), 2.into()), prec)?)?)?
        .mul(&ll.pow(&real_rat(&-&half, prec)?)?)?
        .mul(&inner.powi(r as i64)?)
}

fn t2_shape(eps: &Rational, r: u32) -> Result<Real> {
    let prec = DEFAULT_PRECISION;
    let e = real_rat(eps, prec)?;
    let l = abs_log_eps(eps, prec)?;
    let e_mhalf = e.pow(&real_rat(&Rational::new((-1).into(), 2.into()), prec)?)?;
    let middle = real_int(r as i64, prec)
        .ln()?
        .add(&l.ln()?)?
        .add(&real_int(82, prec))?;
    real_int(2 * (r as i64) * (r as i64), prec)
        .mul(&e_mhalf)?
        .mul(&l.powi(2)?)?
        .mul(&middle)?
        .mul(&real_int(499, prec).mul(&e_mhalf)?.powi(r as i64)?)
}

fn t3_shape(
    eps: &Rational,
    r: u32,
    eta: &Real,
    hmin: &Rational,
    tor: u64,
) -> Result<Real> {
    let prec = DEFAULT_PRECISION;
    if !hmin.is_positive() {
        return Err(Error::precondition("hmin must be positive"));
    }
    if tor == 0 {
        return Err(Error::precondition("torsion count must be at least 1"));
    }
    let e = real_rat(eps, prec)?;
    let l = abs_log_eps(eps, prec)?;
    let ll = l.ln()?;
    // exponent -1/2 - 92/loglog
    let expo = real_rat(&Rational::new((-1).into(), 2.into()), prec)?
        .sub(&real_int(92, prec).div(&ll)?)?;
    let numer = real_int(15, prec)
        .mul(&eta.add(&real_int(4, prec))?.sqrt()?)?
        .mul(&e.pow(&expo)?)?;
    let frac = numer.div(&real_rat(hmin, prec)?.sqrt()?)?;
    let first = real_int(tor as i64, prec)
        .mul(&Real::one(prec).add(&frac)?.powi(r as i64)?)?;
    first.add(&t1_shape(eps, r)?)
}

fn five_pow(card_s: u32, prec: u32) -> Result<Real> {
    Real::from_bigint(&BigInt::from(5u32).pow(card_s), prec)
}

/// Evaluate a theorem-shaped cardinal bound with its preconditions.
pub fn theorem_bounds(kind: BoundKind, inputs: &BoundInputs) -> Result<BoundReport> {
    let prec = DEFAULT_PRECISION;
    let eps = &inputs.epsilon;
    let r = inputs.rank;
    if r == 0 {
        return Err(Error::precondition("rank must be at least 1"));
    }
    if !eps.is_positive() {
        return Err(Error::precondition("epsilon must be positive"));
    }
    let eta = &inputs.eta;
    let l = abs_log_eps(eps, prec)?;
    let ll_ok = || -> Result<Real> { l.ln() };
    let need_small = |b: bool| -> Result<()> {
        if b && *eps >= m0_epsilon_bound() {
            return Err(Error::precondition("epsilon must be below 1/15788"));
        }
        Ok(())
    };
    let need_e4r = || -> Result<()> {
        let rl = real_int(r as i64, prec).mul(&l)?;
        if !rl.certainly_ge(&real_int(4, prec)) {
            return Err(Error::precondition("epsilon must be at most exp(-4/r)"));
        }
        Ok(())
    };
    let eta5 = eta.add(&real_int(5, prec))?;
    let shift_t1 = |c: i64| -> Result<Real> {
        // c (eta + 5) eps^(-1 - 183/loglog)
        let expo = real_int(-1, prec).sub(&real_int(183, prec).div(&ll_ok()?)?)?;
        real_int(c, prec)
            .mul(&eta5)?
            .mul(&real_rat(eps, prec)?.pow(&expo)?)
    };
    let shift_t2 = |c: i64| -> Result<Real> {
        // (eta+5) exp( (r/4 |log eps| + 2)(loglog + log r + c) )
        let a = real_rat(&Rational::new(BigInt::from(r), BigInt::from(4)), prec)?
            .mul(&l)?
            .add(&real_int(2, prec))?;
        let b = ll_ok()?
            .add(&real_int(r as i64, prec).ln()?)?
            .add(&real_int(c, prec))?;
        eta5.mul(&a.mul(&b)?.exp()?)
    };
    let half_eps = eps / Rational::from(BigInt::from(2));
    let report = match kind {
        BoundKind::T1 => {
            need_small(true)?;
            BoundReport {
                kind,
                cardinal_bound: t1_shape(eps, r)?,
                system_shift: Some(shift_t1(56)?),
            }
        }
        BoundKind::T2 => {
            need_e4r()?;
            BoundReport {
                kind,
                cardinal_bound: t2_shape(eps, r)?,
                system_shift: Some(shift_t2(16)?),
            }
        }
        BoundKind::T3 => {
            need_small(true)?;
            let hmin = inputs
                .hmin
                .as_ref()
                .ok_or_else(|| Error::precondition("T3 needs hmin"))?;
            let tor = inputs
                .torsion_count
                .ok_or_else(|| Error::precondition("T3 needs the torsion count"))?;
            BoundReport {
                kind,
                cardinal_bound: t3_shape(eps, r, eta, hmin, tor)?,
                system_shift: None,
            }
        }
        BoundKind::C18 => {
            need_small(true)?;
            let s = inputs
                .card_s
                .ok_or_else(|| Error::precondition("C18 needs card S"))?;
            BoundReport {
                kind,
                cardinal_bound: five_pow(s, prec)?.mul(&t1_shape(&half_eps, r)?)?,
                system_shift: Some(shift_t1(57)?),
            }
        }
        BoundKind::C19 => {
            need_e4r()?;
            let s = inputs
                .card_s
                .ok_or_else(|| Error::precondition("C19 needs card S"))?;
            BoundReport {
                kind,
                cardinal_bound: five_pow(s, prec)?.mul(&t2_shape(&half_eps, r)?)?,
                system_shift: Some(shift_t2(17)?),
            }
        }
        BoundKind::C20 => {
            need_small(true)?;
            let s = inputs
                .card_s
                .ok_or_else(|| Error::precondition("C20 needs card S"))?;
            let hmin = inputs
                .hmin
                .as_ref()
                .ok_or_else(|| Error::precondition("C20 needs hmin"))?;
            let tor = inputs
                .torsion_count
                .ok_or_else(|| Error::precondition("C20 needs the torsion count"))?;
            let shift = real_int(2, prec).mul(eta)?.add(&real_int(16, prec))?;
            BoundReport {
                kind,
                cardinal_bound: five_pow(s, prec)?
                    .mul(&t3_shape(&half_eps, r, eta, hmin, tor)?)?,
                system_shift: Some(shift),
            }
        }
    };
    Ok(report)
}

// ---------------------------------------------------------------------------
// approximation systems and their predicate
// ---------------------------------------------------------------------------

/// The system variant: plain, or shifted by `lambda_v R`.
#[derive(Clone, Debug)]
pub enum SystemVariant {
    I,
    II { r_shift: Real },
}

/// A simultaneous v-adic approximation system.
pub struct ApproximationSystem {
    pub curve: WeierstrassCurve,
    pub places: Vec<Place>,
    pub lambdas: Vec<Rational>,
    pub epsilon: Rational,
    pub variant: SystemVariant,
}

impl ApproximationSystem {
    pub fn new(
        curve: WeierstrassCurve,
        places: Vec<Place>,
        lambdas: Vec<Rational>,
        epsilon: Rational,
        variant: SystemVariant,
    ) -> Result<Self> {
        if places.is_empty() || places.len() != lambdas.len() {
            return Err(Error::precondition("places and weights must match and be nonempty"));
        }
        if lambdas.iter().any(|l| l.is_negative()) {
            return Err(Error::precondition("weights must be nonnegative"));
        }
        let total: Rational = lambdas.iter().cloned().sum();
        if total != Rational::one() {
            return Err(Error::precondition("weights must sum to exactly 1"));
        }
        if !epsilon.is_positive() {
            return Err(Error::precondition("epsilon must be positive"));
        }
        Ok(ApproximationSystem { curve, places, lambdas, epsilon, variant })
    }
}

/// Three-valued certainty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn from_cert(certainly_true: bool, certainly_false: bool) -> Tri {
        match (certainly_true, certainly_false) {
            (true, _) => Tri::True,
            (_, true) => Tri::False,
            _ => Tri::Unknown,
        }
    }
}

/// Per-place and overall verdicts of the approximation predicate.
#[derive(Debug)]
pub struct SsReport {
    pub per_place: Vec<(Place, Tri)>,
    pub overall: Tri,
}

/// Does the point satisfy `dist_v(x, 0) < exp(-lambda_v eps h(x) - 2 m_v -
/// c_v [- lambda_v R])` at every place of the system?
pub fn ss_predicate(system: &ApproximationSystem, p: &ProjectivePoint) -> Result<SsReport> {
    let mut per_place = Vec::with_capacity(system.places.len());
    let identity = system.curve.identity();
    let h = naive_height(p, DEFAULT_PRECISION)?;
    for (v, lambda) in system.places.iter().zip(&system.lambdas) {
        let d = dist_v(p, &identity, v)?;
        if d.value.is_zero() {
            per_place.push((v.clone(), Tri::True));
            continue;
        }
        let mut verdict = Tri::Unknown;
        for prec in [DEFAULT_PRECISION, 256, 512] {
            let log_d = real_rat(&d.value, prec)?.ln()?;
            let lambda_r = real_rat(lambda, prec)?;
            let mut rhs = lambda_r
                .mul(&real_rat(&system.epsilon, prec)?)?
                .mul(&h.value)?
                .neg()
                .sub(&real_int(2, prec).mul(&system.curve.little_m(v, prec)?.value)?)?
                .sub(&real_int(WeierstrassCurve::c_v(v) as i64, prec))?;
            if let SystemVariant::II { r_shift } = &system.variant {
                rhs = rhs.sub(&lambda_r.mul(r_shift)?)?;
            }
            verdict = Tri::from_cert(log_d.certainly_lt(&rhs), log_d.certainly_ge(&rhs));
            if verdict != Tri::Unknown {
                break;
            }
        }
        per_place.push((v.clone(), verdict));
    }
    let overall = if per_place.iter().any(|(_, t)| *t == Tri::False) {
        Tri::False
    } else if per_place.iter().all(|(_, t)| *t == Tri::True) {
        Tri::True
    } else {
        Tri::Unknown
    };
    Ok(SsReport { per_place, overall })
}

// ---------------------------------------------------------------------------
// auxiliary difference forms
// ---------------------------------------------------------------------------

/// The two auxiliary bidegree-(4,4) forms on the square of the curve that
/// vanish at every pair `(x1, x2)` with `x1 - x2 = y`: the first and third
/// components of the difference family, composed with the difference family
/// itself and evaluated against a fixed representative of `y`.
pub fn mumford_aux_forms(
    curve: &WeierstrassCurve,
    y: &ProjectivePoint,
) -> Result<(MultiPoly, MultiPoly)> {
    if y.curve() != curve {
        return Err(Error::precondition("y lives on a different curve"));
    }
    let diff = curve.difference_family();
    let yrep = y.normalized();
    let vars = diff.forms[0].vars().clone();
    let y_consts: Vec<MultiPoly> = yrep
        .iter()
        .map(|c| MultiPoly::constant(vars.clone(), Rational::from(c.clone())))
        .collect();
    let args: Vec<MultiPoly> = diff
        .forms
        .iter()
        .cloned()
        .chain(y_consts)
        .collect();
    let q1 = diff.forms[0].compose(&args)?;
    let q2 = diff.forms[2].compose(&args)?;
    Ok((q1, q2))
}

// ---------------------------------------------------------------------------
// gap-inequality checkers
// ---------------------------------------------------------------------------

/// Outcome of a theorem-shaped check: either some hypothesis failed (or was
/// undecidable), or all hypotheses hold and the conclusion's verdict is
/// reported. A falsification - hypotheses certainly true, conclusion
/// certainly false - must never be produced by correct implementations.
#[derive(Debug)]
pub struct GapCheckReport {
    pub hypotheses_met: Tri,
    pub conclusion: Tri,
    pub falsified: bool,
}

fn and_tri(a: Tri, b: Tri) -> Tri {
    match (a, b) {
        (Tri::False, _) | (_, Tri::False) => Tri::False,
        (Tri::True, Tri::True) => Tri::True,
        _ => Tri::Unknown,
    }
}

/// Check the ascending-gap statement: points in a narrow cone, of large
/// enough ascending heights, all satisfying the approximation system, must
/// have some consecutive pair with bounded ratio.
///
/// Points are lattice vectors against the model's Gram matrix, so heights
/// and cosines are exact up to the recorded Gram error.
pub fn vojta_check(
    model: &MordellWeilModel,
    mult: &Multiplier,
    system: &ApproximationSystem,
    vectors: &[Vec<BigInt>],
    m: u32,
) -> Result<GapCheckReport> {
    let prec = DEFAULT_PRECISION;
    if vectors.len() != m as usize || m < 2 {
        return Err(Error::precondition("need exactly m >= 2 points"));
    }
    let eps = &system.epsilon;
    let eta = &model.curve.eta().value;
    // heights from the Gram form, as intervals with the gram error
    let heights: Vec<Real> = vectors
        .iter()
        .map(|v| gram_height_interval(model, v, prec))
        .collect::<Result<_>>()?;
    // hypothesis: ascending with floor R
    let r_floor = r_expression(m, eps, eta)?;
    let mut hyp = Tri::True;
    for w in heights.windows(2) {
        hyp = and_tri(hyp, Tri::from_cert(w[1].certainly_ge(&w[0]), w[1].certainly_lt(&w[0])));
    }
    hyp = and_tri(
        hyp,
        Tri::from_cert(
            heights[0].certainly_ge(&r_floor),
            heights[0].certainly_lt(&r_floor),
        ),
    );
    // cone hypothesis: cos >= 1 - eps^(m/(m-1))/30976
    let alpha4 = real_rat(eps, prec)?
        .pow(&real_rat(&Rational::new(BigInt::from(m), BigInt::from(m as i64 - 1)), prec)?)?
        .div(&real_int(30976, prec))?;
    hyp = and_tri(hyp, cone_tri(model, vectors, &alpha4, prec)?);
    // approximation system on the actual points
    for v in vectors {
        let point = realize_vector(model, mult, v)?;
        let ss = ss_predicate(system, &point)?;
        hyp = and_tri(hyp, ss.overall);
        if hyp == Tri::False {
            break;
        }
    }
    // conclusion: some consecutive ratio is small
    let factor = real_int(2, prec)
        .sqrt()?
        .mul(&real_int(2904 * m as i64, prec).powi(m as i64)?)?
        .mul(&real_rat(eps, prec)?.pow(&real_rat(
            &Rational::new(BigInt::from(-(m as i64)), BigInt::from(m as i64 - 1)),
            prec,
        )?)?)?;
    let mut concl = Tri::False;
    for i in 1..m as usize {
        let mut cap = factor.mul(&heights[i - 1])?;
        if i == m as usize - 1 {
            cap = cap.mul(&real_int(m as i64 - 1, prec))?;
        }
        let this = Tri::from_cert(heights[i].certainly_lt(&cap), heights[i].certainly_ge(&cap));
        concl = match (concl, this) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Unknown,
        };
    }
    Ok(GapCheckReport {
        hypotheses_met: hyp,
        conclusion: concl,
        falsified: hyp == Tri::True && concl == Tri::False,
    })
}

/// Check the lower-gap statement for a pair: under the cone, height-floor
/// and approximation hypotheses, `h(x2) >= (1 + sqrt(eps)/3) h(x1)`.
pub fn mumford_check(
    model: &MordellWeilModel,
    mult: &Multiplier,
    system: &ApproximationSystem,
    vectors: &[Vec<BigInt>; 2],
) -> Result<GapCheckReport> {
    let prec = DEFAULT_PRECISION;
    let eps = &system.epsilon;
    let eta = &model.curve.eta().value;
    if vectors[0] == vectors[1] {
        return Ok(GapCheckReport {
            hypotheses_met: Tri::False,
            conclusion: Tri::Unknown,
            falsified: false,
        });
    }
    let h1 = gram_height_interval(model, &vectors[0], prec)?;
    let h2 = gram_height_interval(model, &vectors[1], prec)?;
    let mut hyp = Tri::from_cert(h2.certainly_ge(&h1), h2.certainly_lt(&h1));
    // height floor: h1 >= (54 eta + 204)/eps
    let floor = real_int(54, prec)
        .mul(eta)?
        .add(&real_int(204, prec))?
        .div(&real_rat(eps, prec)?)?;
    hyp = and_tri(hyp, Tri::from_cert(h1.certainly_ge(&floor), h1.certainly_lt(&floor)));
    // cone: cos >= 1 - beta/4 with beta = eps/2
    let alpha4 = real_rat(eps, prec)?.div(&real_int(8, prec))?;
    hyp = and_tri(hyp, cone_tri(model, vectors.as_slice(), &alpha4, prec)?);
    for v in vectors.iter() {
        let point = realize_vector(model, mult, v)?;
        let ss = ss_predicate(system, &point)?;
        hyp = and_tri(hyp, ss.overall);
        if hyp == Tri::False {
            break;
        }
    }
    // conclusion: h2 >= (1 + sqrt(eps)/3) h1
    let theta = real_rat(eps, prec)?.sqrt()?.div(&real_int(3, prec))?;
    let rhs = Real::one(prec).add(&theta)?.mul(&h1)?;
    let concl = Tri::from_cert(h2.certainly_ge(&rhs), h2.certainly_lt(&rhs));
    Ok(GapCheckReport {
        hypotheses_met: hyp,
        conclusion: concl,
        falsified: hyp == Tri::True && concl == Tri::False,
    })
}

fn gram_height_interval(model: &MordellWeilModel, v: &[BigInt], prec: u32) -> Result<Real> {
    let r = model.rank();
    if v.len() != r {
        return Err(Error::precondition("vector length does not match the rank"));
    }
    let mut q = Rational::zero();
    let mut abs_sum = Rational::zero();
    for i in 0..r {
        for j in 0..r {
            q += &model.gram[i][j] * Rational::from(v[i].clone()) * Rational::from(v[j].clone());
            abs_sum += Rational::from(v[i].clone()).abs() * Rational::from(v[j].clone()).abs();
        }
    }
    let err = &model.gram_error * abs_sum;
    Real::from_rational_bounds(&(&q - &err), &(&q + &err), prec)
}

fn cone_tri(
    model: &MordellWeilModel,
    vectors: &[Vec<BigInt>],
    alpha4: &Real,
    prec: u32,
) -> Result<Tri> {
    // cos(x_i, x_j) >= 1 - alpha4 for all pairs
    let pair = |a: &[BigInt], b: &[BigInt]| -> Rational {
        let r = model.gram.len();
        let mut acc = Rational::zero();
        for i in 0..r {
            for j in 0..r {
                acc += &model.gram[i][j]
                    * Rational::from(a[i].clone())
                    * Rational::from(b[j].clone());
            }
        }
        acc
    };
    let mut all = Tri::True;
    for (i, a) in vectors.iter().enumerate() {
        for b in vectors.iter().skip(i + 1) {
            let inner = real_rat(&pair(a, b), prec)?;
            let na = real_rat(&pair(a, a), prec)?;
            let nb = real_rat(&pair(b, b), prec)?;
            let rhs = Real::one(prec).sub(alpha4)?.mul(&na.mul(&nb)?.sqrt()?)?;
            let t = Tri::from_cert(inner.certainly_ge(&rhs), inner.certainly_lt(&rhs));
            all = and_tri(all, t);
        }
    }
    Ok(all)
}

fn realize_vector(
    model: &MordellWeilModel,
    mult: &Multiplier,
    v: &[BigInt],
) -> Result<ProjectivePoint> {
    if model.generators.is_empty() {
        return Err(Error::precondition("model has no explicit generators"));
    }
    let mut acc = model.curve.identity();
    for (g, n) in model.generators.iter().zip(v) {
        let n = n
            .to_i64()
            .ok_or_else(|| Error::precondition("coefficient too large"))?;
        if n != 0 {
            acc = acc.add(&mult.scalar_mul_binary(n, g)?)?;
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// census
// ---------------------------------------------------------------------------

/// Empirical counts of approximation-system satisfiers among all points of
/// height at most the cap, with the theorem-shaped caps they must respect.
pub struct CensusReport {
    pub total_enumerated: usize,
    /// Points certainly satisfying the plain system.
    pub satisfy_plain: usize,
    /// Points certainly satisfying the shifted system.
    pub satisfy_shifted: usize,
    /// Plain satisfiers with height certainly above the threshold `R`.
    pub satisfy_plain_above_r: usize,
    /// Shifted satisfiers with height at most `R`; must be the identity
    /// alone.
    pub shifted_low_ids: Vec<usize>,
    pub singleton_ok: bool,
    /// Points whose verdicts stayed undecided.
    pub undecided: usize,
    /// The cap on plain satisfiers above `R`.
    pub large_height_cap: Real,
    pub large_height_ok: bool,
    pub r_value: Real,
}

/// Run the census: enumerate everything with Néron-Tate height at most
/// `r_cap`, classify against the plain and shifted systems at parameter `m`,
/// and compare the counts with the theorem caps.
pub fn census(
    model: &MordellWeilModel,
    mult: &Multiplier,
    system: &ApproximationSystem,
    r_cap: &Rational,
    m: u32,
    tol: f64,
) -> Result<CensusReport> {
    let prec = DEFAULT_PRECISION;
    let eta = &model.curve.eta().value;
    let eps = &system.epsilon;
    let r_value = r_expression(m, eps, eta)?;
    let shifted = ApproximationSystem {
        curve: system.curve.clone(),
        places: system.places.clone(),
        lambdas: system.lambdas.clone(),
        epsilon: system.epsilon.clone(),
        variant: SystemVariant::II { r_shift: r_value.clone() },
    };
    let EnumerationResult { points, .. } = enumerate_bounded(model, Some(mult), r_cap, tol)?;
    let mut report = CensusReport {
        total_enumerated: points.len(),
        satisfy_plain: 0,
        satisfy_shifted: 0,
        satisfy_plain_above_r: 0,
        shifted_low_ids: Vec::new(),
        singleton_ok: false,
        undecided: 0,
        large_height_cap: s_expression(m, eps, model.rank() as u32)?,
        large_height_ok: false,
        r_value: r_value.clone(),
    };
    for (idx, ep) in points.iter().enumerate() {
        let Some(point) = &ep.point else {
            return Err(Error::precondition("census needs point-backed models"));
        };
        let h = ep.verified_height.unwrap_or(0.0);
        let h_lo = Real::from_f64(h - tol, prec)?;
        let h_hi = Real::from_f64(h + tol, prec)?;
        let plain = ss_predicate(system, point)?.overall;
        let shifted_v = ss_predicate(&shifted, point)?.overall;
        if plain == Tri::Unknown || shifted_v == Tri::Unknown {
            report.undecided += 1;
        }
        if plain == Tri::True {
            report.satisfy_plain += 1;
            if h_lo.certainly_gt(&r_value) {
                report.satisfy_plain_above_r += 1;
            }
        }
        if shifted_v == Tri::True {
            report.satisfy_shifted += 1;
            if !h_hi.certainly_gt(&r_value) {
                report.shifted_low_ids.push(idx);
                let is_identity = point.is_identity();
                if !is_identity {
                    // a non-identity low-height shifted satisfier would
                    // falsify the singleton statement
                }
            }
        }
    }
    // singleton: exactly the identity among low-height shifted satisfiers
    report.singleton_ok = report.shifted_low_ids.iter().all(|&i| {
        points[i]
            .point
            .as_ref()
            .map(|p| p.is_identity())
            .unwrap_or(false)
    }) && !report.shifted_low_ids.is_empty();
    let cap_count = Real::from_i64(report.satisfy_plain_above_r as i64, prec);
    report.large_height_ok = cap_count.certainly_le(&report.large_height_cap)
        || report.satisfy_plain_above_r == 0;
    Ok(report)
}

// ---------------------------------------------------------------------------
// subset combinator
// ---------------------------------------------------------------------------

/// One subset's datum for the combinatorial bound.
pub struct SubsetTerm {
    pub card: u32,
    pub eps_primed: Rational,
    pub count: Real,
}

/// `sum over subsets of binom(A + card - 1, card - 1) * count` with
/// `A = ceil(eps' card / (eps - eps'))`; the empty subset contributes its
/// count once.
pub fn subset_combinator_bound(eps: &Rational, terms: &[SubsetTerm]) -> Result<Real> {
    let prec = DEFAULT_PRECISION;
    let mut acc = Real::zero(prec);
    for t in terms {
        if t.eps_primed >= *eps {
            return Err(Error::precondition("eps' must be strictly below eps"));
        }
        if t.card == 0 {
            acc = acc.add(&t.count)?;
            continue;
        }
        let a_exact = &t.eps_primed * Rational::from(BigInt::from(t.card))
            / (eps - &t.eps_primed);
        let a = a_exact.ceil().numer().clone();
        let a_u32 = a
            .to_u32()
            .ok_or_else(|| Error::invariant("A out of range"))?;
        let factor = crate::poly::binomial(a_u32 + t.card - 1, t.card - 1);
        acc = acc.add(&Real::from_bigint(&factor, prec)?.mul(&t.count)?)?;
    }
    Ok(acc)
}

/// The half-epsilon specialization over all subsets of an `s`-element set:
/// `sum_k binom(s, k) binom(2k - 1, k - 1)` exactly, which the crude cap
/// `5^s` dominates because `binom(2k-1, k-1) <= 4^k`.
pub fn combinator_exact_total(card_s: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for k in 0..=card_s {
        let b = if k == 0 {
            BigInt::one()
        } else {
            crate::poly::binomial(2 * k - 1, k - 1)
        };
        acc += crate::poly::binomial(card_s, k) * b;
    }
    acc
}

/// `sum_k binom(s, k) 4^k = 5^s`, the crude form of the specialization.
pub fn combinator_five_power_total(card_s: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for k in 0..=card_s {
        acc += crate::poly::binomial(card_s, k) * BigInt::from(4u32).pow(k);
    }
    acc
}

// ---------------------------------------------------------------------------
// system JSON
// ---------------------------------------------------------------------------

#[derive(serde::Serialize, serde::Deserialize)]
pub struct SystemJson {
    pub places: Vec<String>,
    pub lambdas: Vec<String>,
    pub epsilon: String,
    /// "I" or "II"
    pub variant: String,
    /// For variant II: the parameter `m` from which the shift is computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
}

pub fn system_from_json(curve: &WeierstrassCurve, j: &SystemJson) -> Result<ApproximationSystem> {
    let places: Vec<Place> = j
        .places
        .iter()
        .map(|s| {
            if s == "inf" {
                Ok(Place::Archimedean)
            } else {
                let p: u64 = s
                    .parse()
                    .map_err(|_| Error::parse(format!("bad place {s:?}")))?;
                Place::finite(p as u32)
            }
        })
        .collect::<Result<_>>()?;
    let lambdas: Vec<Rational> = j
        .lambdas
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_>>()?;
    let epsilon = parse_rational(&j.epsilon)?;
    let variant = match j.variant.as_str() {
        "I" => SystemVariant::I,
        "II" => {
            let m = j.m.ok_or_else(|| {
                Error::precondition("variant II needs the parameter m for the shift")
            })?;
            let shift = r_expression(m, &epsilon, &curve.eta().value)?;
            SystemVariant::II { r_shift: shift }
        }
        other => return Err(Error::parse(format!("unknown variant {other:?}"))),
    };
    ApproximationSystem::new(curve.clone(), places, lambdas, epsilon, variant)
}
