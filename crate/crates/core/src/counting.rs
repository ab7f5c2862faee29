//! Lattice counting and geometry of numbers: weighted-simplex point counts,
//! cone coverings of Euclidean space, bounded-height enumeration in a
//! Mordell-Weil lattice, gap-sequence checks and a small Siegel-lemma kernel
//! solver.
//!
//! Everything that can be exact is exact: simplex counts are integer
//! enumeration, cone-cover angle tests compare squared rational cosines,
//! Mordell-Weil enumeration works on an exact rational Gram matrix through a
//! square-root-free LDL decomposition, and the Siegel solver eliminates over
//! Q and returns a primitive integer kernel vector.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{ProjectivePoint, WeierstrassCurve};
use crate::divpoly::Multiplier;
use crate::error::{Error, Result};
use crate::heights::neron_tate;
use crate::places::{tuple_height, Rational};
use crate::poly::binomial;
use crate::real::{LogValue, Real, DEFAULT_PRECISION};

// ---------------------------------------------------------------------------
// weighted simplices
// ---------------------------------------------------------------------------

/// The set of nonnegative integer tuples below a weighted linear bound:
/// `tau_1/w_1 + ... + tau_n/w_n <= B`.
#[derive(Clone, Debug)]
pub struct WeightedSimplex {
    pub weights: Vec<Rational>,
    pub bound: Rational,
}

impl WeightedSimplex {
    pub fn new(weights: Vec<Rational>, bound: Rational) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::precondition("simplex needs at least one weight"));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::precondition("simplex weights must be positive"));
        }
        if bound.is_negative() {
            return Err(Error::precondition("simplex bound must be nonnegative"));
        }
        Ok(WeightedSimplex { weights, bound })
    }
}

/// Exact count plus, for integer data, the two binomial bounds
/// `w_1...w_n C(delta + T, n) <= count <= w_1...w_n C(delta + n, n)` with
/// `T = floor(sum 1/w_i)`.
#[derive(Clone, Debug)]
pub struct SimplexCount {
    pub exact: BigUint,
    pub binomial_bounds: Option<(BigUint, BigUint)>,
}

/// Count the lattice points of the simplex by recursive sweep.
pub fn simplex_count(s: &WeightedSimplex) -> Result<SimplexCount> {
    fn go(weights: &[Rational], budget: &Rational) -> BigUint {
        if budget.is_negative() {
            return BigUint::zero();
        }
        match weights.split_first() {
            None => BigUint::one(),
            Some((w, rest)) => {
                if rest.is_empty() {
                    // floor(w * budget) + 1 values
                    let max = (w * budget).floor().numer().clone();
                    return BigUint::try_from(max + BigInt::one()).unwrap_or_default();
                }
                let max = (w * budget).floor().numer().to_i64().unwrap_or(0);
                let mut acc = BigUint::zero();
                for tau in 0..=max {
                    let used = Rational::from(BigInt::from(tau)) / w;
                    acc += go(rest, &(budget - used));
                }
                acc
            }
        }
    }
    let exact = go(&s.weights, &s.bound);
    let binomial_bounds = integer_simplex_bounds(s);
    Ok(SimplexCount { exact, binomial_bounds })
}

fn integer_simplex_bounds(s: &WeightedSimplex) -> Option<(BigUint, BigUint)> {
    if !s.weights.iter().all(|w| w.denom().is_one()) || !s.bound.denom().is_one() {
        return None;
    }
    let n = s.weights.len() as u32;
    let delta = s.bound.numer().to_u32()?;
    // T = floor(sum of reciprocals)
    let recip: Rational = s
        .weights
        .iter()
        .map(|w| Rational::new(BigInt::one(), w.numer().clone()))
        .sum();
    let t = recip.floor().numer().to_u32()?;
    let prod: BigInt = s.weights.iter().map(|w| w.numer().clone()).product();
    let prod = BigUint::try_from(prod).ok()?;
    let lower = &prod * BigUint::try_from(binomial(delta + t, n)).ok()?;
    let upper = &prod * BigUint::try_from(binomial(delta + n, n)).ok()?;
    Some((lower, upper))
}

/// Independent brute-force count over an explicit bounding box; used as the
/// enumeration oracle in tests.
pub fn simplex_count_brute_force(s: &WeightedSimplex) -> Result<BigUint> {
    let boxes: Vec<i64> = s
        .weights
        .iter()
        .map(|w| {
            (w * &s.bound)
                .floor()
                .numer()
                .to_i64()
                .ok_or_else(|| Error::precondition("simplex too large for brute force"))
        })
        .collect::<Result<_>>()?;
    let n = boxes.len();
    let mut idx = vec![0i64; n];
    let mut count = BigUint::zero();
    'outer: loop {
        let lhs: Rational = idx
            .iter()
            .zip(&s.weights)
            .map(|(t, w)| Rational::from(BigInt::from(*t)) / w)
            .sum();
        if lhs <= s.bound {
            count += BigUint::one();
        }
        for i in 0..n {
            idx[i] += 1;
            if idx[i] <= boxes[i] {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// cone coverings
// ---------------------------------------------------------------------------

/// A covering of Euclidean `r`-space by cones of apex 0 and angle
/// `arccos(1 - 1/c1)`, represented by integer direction vectors. Any two
/// points within angle `2 phi` of the same center span an angle of at most
/// `4 phi = arccos(1 - 1/c1)`, so the centers of a maximal `2 phi`-separated
/// set cut out such a covering.
#[derive(Clone, Debug)]
pub struct ConeCover {
    pub dimension: usize,
    pub c1: Rational,
    /// Unnormalized integer direction vectors.
    pub centers: Vec<Vec<i64>>,
    /// `floor((1 + sqrt(8 c1))^r)`, the guaranteed cap on the center count.
    pub count_bound: BigInt,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

fn norm2(a: &[i64]) -> i128 {
    dot(a, a)
}

/// `cos angle(a, b) >= tau` where `tau^2 = (2 c1 - 1) / (2 c1)`, exactly.
fn within_half_angle(a: &[i64], b: &[i64], c1: &Rational) -> bool {
    let d = dot(a, b);
    if d < 0 {
        return false;
    }
    // d^2 / (|a|^2 |b|^2) >= (2 c1 - 1)/(2 c1)
    let lhs = Rational::from(BigInt::from(d)) * Rational::from(BigInt::from(d))
        * Rational::from(BigInt::from(2)) * c1;
    let rhs = (Rational::from(BigInt::from(2)) * c1 - Rational::one())
        * Rational::from(BigInt::from(norm2(a)))
        * Rational::from(BigInt::from(norm2(b)));
    lhs >= rhs
}

/// Greedily build the cover and verify it on fresh random samples.
pub fn cone_cover(r: usize, c1: &Rational, samples: usize, seed: u64) -> Result<ConeCover> {
    if r == 0 {
        return Err(Error::precondition("dimension must be at least 1"));
    }
    if *c1 <= Rational::one() {
        return Err(Error::precondition("c1 must exceed 1"));
    }
    let eight_c1 = Rational::from(BigInt::from(8)) * c1;
    let count_bound = floor_scaled_sqrt_power(&eight_c1, r, &BigInt::one())?;

    let mut centers: Vec<Vec<i64>> = Vec::new();
    let push_if_separated = |centers: &mut Vec<Vec<i64>>, v: Vec<i64>| {
        if v.iter().all(|&x| x == 0) {
            return;
        }
        if centers.iter().all(|c| !within_half_angle(c, &v, c1)) {
            centers.push(v);
        }
    };
    // axis directions first, then random candidates
    for i in 0..r {
        for s in [1i64, -1] {
            let mut v = vec![0i64; r];
            v[i] = s;
            push_if_separated(&mut centers, v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = 20_000usize.max(40 * samples / 10);
    for _ in 0..candidates {
        let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-64i64..=64)).collect();
        push_if_separated(&mut centers, v);
    }
    if BigInt::from(centers.len()) > count_bound {
        return Err(Error::invariant(format!(
            "cone construction produced {} centers, above the cap {count_bound}",
            centers.len()
        )));
    }
    // covering certificate on fresh samples
    let cover = ConeCover { dimension: r, c1: c1.clone(), centers, count_bound };
    let mut uncovered = 0usize;
    for _ in 0..samples {
        let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-997i64..=997)).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        if !cover.covers(&v) {
            uncovered += 1;
        }
    }
    if uncovered > 0 {
        return Err(Error::invariant(format!(
            "covering certificate failed on {uncovered} of {samples} samples"
        )));
    }
    Ok(cover)
}

impl ConeCover {
    /// Whether a direction lies within the half-angle of some center.
    pub fn covers(&self, v: &[i64]) -> bool {
        self.centers
            .iter()
            .any(|c| within_half_angle(c, v, &self.c1))
    }
}

// ---------------------------------------------------------------------------
// Mordell-Weil models and bounded enumeration
// ---------------------------------------------------------------------------

/// A finitely generated model of the rational points: free generators with
/// their Néron-Tate Gram matrix, plus the torsion points. The generators may
/// be omitted (gram-only mode) for synthetic lattices.
pub struct MordellWeilModel {
    pub curve: WeierstrassCurve,
    pub generators: Vec<ProjectivePoint>,
    pub torsion: Vec<ProjectivePoint>,
    pub gram: Vec<Vec<Rational>>,
    /// Entrywise absolute error bound on the Gram entries.
    pub gram_error: Rational,
    /// Positive lower bound for the smallest nonzero Néron-Tate height.
    pub hmin: Rational,
}

impl MordellWeilModel {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// Build from explicit generators, computing the Gram matrix by the
    /// parallelogram identity at tolerance `tol` and taking `hmin` from a
    /// small enumeration.
    pub fn from_generators(
        mult: &Multiplier,
        generators: Vec<ProjectivePoint>,
        torsion: Vec<ProjectivePoint>,
        tol: f64,
    ) -> Result<Self> {
        let curve = mult.curve().clone();
        let r = generators.len();
        let mut gram = vec![vec![Rational::zero(); r]; r];
        let mut heights = Vec::with_capacity(r);
        for g in &generators {
            heights.push(neron_tate(mult, g, tol)?.value.to_f64());
        }
        for i in 0..r {
            gram[i][i] = approx_rational(heights[i]);
            for j in (i + 1)..r {
                let sum = generators[i].add(&generators[j])?;
                let hs = neron_tate(mult, &sum, tol)?.value.to_f64();
                let pairing = (hs - heights[i] - heights[j]) / 2.0;
                let v = approx_rational(pairing);
                gram[i][j] = v.clone();
                gram[j][i] = v;
            }
        }
        let gram_error = approx_rational(3.0 * tol);
        let torsion = normalize_torsion(&curve, torsion);
        let mut model = MordellWeilModel {
            curve,
            generators,
            torsion,
            gram,
            gram_error,
            hmin: Rational::one(),
        };
        if r > 0 {
            // smallest verified height within a modest radius
            let r_small = model
                .gram
                .iter()
                .enumerate()
                .map(|(i, row)| row[i].clone())
                .min()
                .expect("rank > 0")
                + approx_rational(2.0 * tol);
            let pts = enumerate_bounded(&model, mult.into(), &r_small, tol)?;
            let min_pos = pts
                .points
                .iter()
                .filter(|p| p.coeffs.iter().any(|c| !c.is_zero()))
                .filter_map(|p| p.verified_height)
                .fold(f64::INFINITY, f64::min);
            if min_pos.is_finite() && min_pos > 3.0 * tol {
                model.hmin = approx_rational(min_pos - tol);
            } else {
                return Err(Error::precondition(
                    "generators include a point indistinguishable from torsion",
                ));
            }
        }
        Ok(model)
    }

    /// Gram-only synthetic model: a curve (for the ambient structure), a
    /// positive-definite rational Gram matrix, trivial torsion.
    pub fn synthetic(curve: WeierstrassCurve, gram: Vec<Vec<Rational>>, hmin: Rational) -> Result<Self> {
        let torsion = vec![curve.identity()];
        let model = MordellWeilModel {
            curve,
            generators: Vec::new(),
            torsion,
            gram,
            gram_error: Rational::zero(),
            hmin,
        };
        ldl(&model.gram)?;
        Ok(model)
    }
}

fn normalize_torsion(curve: &WeierstrassCurve, mut torsion: Vec<ProjectivePoint>) -> Vec<ProjectivePoint> {
    let id = curve.identity();
    if !torsion.iter().any(|t| *t == id) {
        torsion.insert(0, id);
    }
    torsion
}

/// Dyadic rational approximation of an f64.
pub fn approx_rational(x: f64) -> Rational {
    let scaled = (x * (1u64 << 32) as f64).round();
    Rational::new(
        BigInt::from(scaled as i64),
        BigInt::from(1u64 << 32),
    )
}

/// Square-root-free LDL decomposition of a symmetric positive-definite
/// rational matrix: returns `(d, u)` with
/// `q(n) = sum_i d_i (n_i + sum_{j>i} u[i][j] n_j)^2`.
fn ldl(gram: &[Vec<Rational>]) -> Result<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let r = gram.len();
    let mut a: Vec<Vec<Rational>> = gram.to_vec();
    let mut d = vec![Rational::zero(); r];
    let mut u = vec![vec![Rational::zero(); r]; r];
    for i in 0..r {
        if a[i].len() != r {
            return Err(Error::precondition("gram matrix is not square"));
        }
        d[i] = a[i][i].clone();
        if !d[i].is_positive() {
            return Err(Error::precondition("gram matrix is not positive definite"));
        }
        for j in (i + 1)..r {
            u[i][j] = &a[i][j] / &d[i];
        }
        for j in (i + 1)..r {
            for k in j..r {
                let delta = &d[i] * &u[i][j] * &u[i][k];
                a[j][k] = &a[j][k] - &delta;
                a[k][j] = a[j][k].clone();
            }
        }
    }
    Ok((d, u))
}

/// One enumerated rational point: torsion part plus generator coefficients.
#[derive(Clone, Debug)]
pub struct EnumeratedPoint {
    pub torsion_index: usize,
    pub coeffs: Vec<BigInt>,
    /// Gram-form value of the free part.
    pub lattice_height: Rational,
    /// Actual point, when generators are available.
    pub point: Option<ProjectivePoint>,
    /// Re-verified Néron-Tate height, when the point is available.
    pub verified_height: Option<f64>,
}

/// Result of a bounded enumeration: the points, the exhaustive count, and
/// the explicit cap `#torsion * (1 + sqrt(4R/hmin))^r`.
pub struct EnumerationResult {
    pub points: Vec<EnumeratedPoint>,
    pub bound: Real,
    pub bound_floor: BigInt,
}

/// All points with Néron-Tate height at most `r_cap` (with slack absorbing
/// the Gram error; point-backed models re-verify each candidate exactly
/// against `r_cap + tol`).
pub fn enumerate_bounded(
    model: &MordellWeilModel,
    mult: Option<&Multiplier>,
    r_cap: &Rational,
    tol: f64,
) -> Result<EnumerationResult> {
    if r_cap.is_negative() {
        return Err(Error::precondition("height cap must be nonnegative"));
    }
    let r = model.rank();
    let (d, u) = ldl(&model.gram)?;
    // inflate the ellipsoid so Gram error cannot lose points
    let slack = if model.gram_error.is_zero() {
        Rational::zero()
    } else {
        let mut sum_inv = Rational::zero();
        for di in &d {
            sum_inv += Rational::one() / di;
        }
        let coord_sq = (r_cap + Rational::one()) * sum_inv;
        &model.gram_error * coord_sq * Rational::from(BigInt::from(r as i64 + 1))
    };
    let budget = r_cap + &slack;
    let mut lattice = enumerate_lattice(&d, &u, &budget)?;
    lattice.sort_by(|a, b| a.0.cmp(&b.0));

    let mut points = Vec::new();
    for (t_idx, t) in model.torsion.iter().enumerate() {
        for (coeffs, q_val) in &lattice {
            let mut entry = EnumeratedPoint {
                torsion_index: t_idx,
                coeffs: coeffs.clone(),
                lattice_height: q_val.clone(),
                point: None,
                verified_height: None,
            };
            if !model.generators.is_empty() {
                let mult = mult.ok_or_else(|| {
                    Error::precondition("point-backed enumeration needs a multiplier")
                })?;
                let mut acc = t.clone();
                for (g, n) in model.generators.iter().zip(coeffs) {
                    let n = n.to_i64().ok_or_else(|| {
                        Error::invariant("enumeration coefficient exceeds i64")
                    })?;
                    if n != 0 {
                        acc = acc.add(&mult.scalar_mul_binary(n, g)?)?;
                    }
                }
                let h = neron_tate(mult, &acc, tol)?.value.to_f64();
                if h > rational_f64(r_cap) + tol {
                    continue;
                }
                entry.point = Some(acc);
                entry.verified_height = Some(h);
            } else if *q_val > *r_cap {
                continue;
            }
            points.push(entry);
        }
    }
    // the explicit cap: #torsion * (1 + sqrt(4R/hmin))^r
    let prec = DEFAULT_PRECISION;
    let tor = BigInt::from(model.torsion.len() as i64);
    let ratio = Rational::from(BigInt::from(4)) * r_cap / &model.hmin;
    let bound_floor = if r == 0 {
        tor.clone()
    } else {
        floor_scaled_sqrt_power(&ratio, r, &tor)?
    };
    let bound = if r == 0 {
        Real::from_bigint(&tor, prec)?
    } else {
        Real::from_rational(&ratio, prec)?
            .sqrt()?
            .add(&Real::one(prec))?
            .powi(r as i64)?
            .mul(&Real::from_bigint(&tor, prec)?)?
    };
    Ok(EnumerationResult { points, bound, bound_floor })
}

fn rational_f64(x: &Rational) -> f64 {
    crate::places::rational_to_f64(x)
}

/// Exact square root of a rational when numerator and denominator are both
/// perfect squares.
fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let ns = q.numer().magnitude().sqrt();
    let ds = q.denom().magnitude().sqrt();
    if &(&ns * &ns) == q.numer().magnitude() && &(&ds * &ds) == q.denom().magnitude() {
        Some(Rational::new(BigInt::from(ns), BigInt::from(ds)))
    } else {
        None
    }
}

/// `floor(scale * (1 + sqrt(q))^r)`, exact when `q` is a rational square and
/// by precision escalation otherwise (the value is then irrational, so the
/// floor is always determined at some finite precision).
pub fn floor_scaled_sqrt_power(q: &Rational, r: usize, scale: &BigInt) -> Result<BigInt> {
    if let Some(s) = exact_sqrt(q) {
        let base = Rational::one() + s;
        let mut acc = Rational::from(scale.clone());
        for _ in 0..r {
            acc *= &base;
        }
        return Ok(acc.floor().numer().clone());
    }
    for prec in [DEFAULT_PRECISION, 256, 512, 1024] {
        let v = Real::from_rational(q, prec)?
            .sqrt()?
            .add(&Real::one(prec))?
            .powi(r as i64)?
            .mul(&Real::from_bigint(scale, prec)?)?;
        if let Ok(fl) = v.floor_exact() {
            return Ok(fl);
        }
    }
    Err(Error::invariant("floor undetermined at 1024 bits"))
}

fn enumerate_lattice(
    d: &[Rational],
    u: &[Vec<Rational>],
    budget: &Rational,
) -> Result<Vec<(Vec<BigInt>, Rational)>> {
    let r = d.len();
    let mut out = Vec::new();
    let mut n = vec![BigInt::zero(); r];
    fn rec(
        d: &[Rational],
        u: &[Vec<Rational>],
        budget: Rational,
        i: usize,
        n: &mut Vec<BigInt>,
        out: &mut Vec<(Vec<BigInt>, Rational)>,
    ) -> Result<()> {
        if budget.is_negative() {
            return Ok(());
        }
        if i == 0 && d.is_empty() {
            out.push((vec![], Rational::zero()));
            return Ok(());
        }
        let idx = i - 1;
        // center: n_idx + sum_{j>idx} u[idx][j] n_j must satisfy
        // d_idx (n_idx + c)^2 <= budget
        let mut c = Rational::zero();
        for j in i..d.len() {
            c += &u[idx][j] * Rational::from(n[j].clone());
        }
        // |n_idx + c| <= sqrt(budget / d_idx)
        let ratio = &budget / &d[idx];
        let radius = rational_sqrt_floor_plus(&ratio);
        let lo = (-&c - &radius).ceil().numer().clone();
        let hi = (-&c + &radius).floor().numer().clone();
        let mut k = lo.clone();
        while k <= hi {
            let shifted = Rational::from(k.clone()) + &c;
            let used = &d[idx] * &shifted * &shifted;
            if used <= budget {
                n[idx] = k.clone();
                if idx == 0 {
                    let q_total = total_q(d, u, n);
                    out.push((n.clone(), q_total));
                } else {
                    rec(d, u, &budget - &used, idx, n, out)?;
                }
                n[idx] = BigInt::zero();
            }
            k += 1;
        }
        Ok(())
    }
    if r == 0 {
        out.push((vec![], Rational::zero()));
        return Ok(out);
    }
    rec(d, u, budget.clone(), r, &mut n, &mut out)?;
    Ok(out)
}

fn total_q(d: &[Rational], u: &[Vec<Rational>], n: &[BigInt]) -> Rational {
    let r = d.len();
    let mut q = Rational::zero();
    for i in 0..r {
        let mut c = Rational::from(n[i].clone());
        for j in (i + 1)..r {
            c += &u[i][j] * Rational::from(n[j].clone());
        }
        q += &d[i] * &c * &c;
    }
    q
}

/// `ceil`-safe floor of `sqrt(x)` for nonnegative rational `x`, returned as
/// a rational slightly above the true square root so interval ends are not
/// clipped.
fn rational_sqrt_floor_plus(x: &Rational) -> Rational {
    if x.is_negative() {
        return Rational::zero();
    }
    // integer sqrt of floor(x) + 1 always dominates sqrt(x)
    let fl = x.floor().numer().magnitude().sqrt();
    Rational::from(BigInt::from(fl) + BigInt::one())
}

// ---------------------------------------------------------------------------
// gap sequences
// ---------------------------------------------------------------------------

/// Input to the gap-sequence computation: ascending Néron-Tate heights
/// (squared norms) and the cone parameter `alpha`.
pub struct AiInput {
    pub nt_heights: Vec<Rational>,
    pub alpha: Rational,
    /// Naive heights, when ratio comparisons against them are wanted.
    pub naive_heights: Option<Vec<Rational>>,
}

/// The `a_i = floor(|x_m| / |x_i|)` sequence with hypothesis and conclusion
/// reports.
#[derive(Debug)]
pub struct AiReport {
    pub a: Vec<BigInt>,
    /// Norm-ratio clause: `|x_m| / |x_i| >= 1/sqrt(alpha) + 1` for `i < m`.
    pub ratio_clause_ok: bool,
    /// Spacing clause: `h(x_i) >= 49 h(x_(i-1))`.
    pub spacing_clause_ok: bool,
    /// `a_i >= 1/sqrt(alpha)` for `i < m`.
    pub lower_ok: bool,
    /// `a_i >= 7^(m-i)`.
    pub powers_ok: bool,
    /// `a_(i-1) >= 7 a_i`.
    pub chain_ok: bool,
    /// `sum a_i^2 <= (1 + 1/48) a_1^2`.
    pub sum_sq_ok: bool,
    /// `m - 1 <= (1 + 1/48) alpha a_1^2`.
    pub m_bound_ok: bool,
    /// Double inequalities between scaled heights
    /// (`a_i^2 h(x_i)` within `sqrt 2` of each other, etc.); populated when
    /// naive heights are supplied.
    pub scaled_height_ok: Option<bool>,
}

/// `floor(sqrt(p/q))` for a nonnegative rational.
fn rational_isqrt(x: &Rational) -> BigInt {
    BigInt::from(x.floor().numer().magnitude().sqrt())
}

/// `a >= sqrt(x)` for nonnegative values, exactly.
fn ge_sqrt(a: &Rational, x: &Rational) -> bool {
    if a.is_negative() {
        return false;
    }
    a * a >= *x
}

pub fn ai_sequence(input: &AiInput) -> Result<AiReport> {
    let hs = &input.nt_heights;
    let m = hs.len();
    if m < 2 {
        return Err(Error::precondition("need at least two heights"));
    }
    if hs.iter().any(|h| !h.is_positive()) {
        return Err(Error::precondition("heights must be positive"));
    }
    if hs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::precondition("heights must be ascending"));
    }
    if !input.alpha.is_positive() {
        return Err(Error::precondition("alpha must be positive"));
    }
    let last = &hs[m - 1];
    let a: Vec<BigInt> = hs.iter().map(|h| rational_isqrt(&(last / h))).collect();

    // hypothesis clauses expressible from the norms
    // |x_m|/|x_i| >= 1/sqrt(alpha) + 1  <=>  sqrt(h_m/h_i) - 1 >= 1/sqrt(alpha)
    let ratio_clause_ok = (0..m - 1).all(|i| {
        // t = sqrt(h_m / h_i); need t >= 1 + s with s = 1/sqrt(alpha):
        // t^2 - 1 - s^2 >= 2s, then square once more
        let t2 = last / &hs[i];
        let s2 = Rational::one() / &input.alpha;
        let lhs = &t2 - Rational::one() - &s2;
        if lhs.is_negative() {
            return false;
        }
        &lhs * &lhs >= Rational::from(BigInt::from(4)) * &s2
    });
    let spacing_clause_ok = (1..m).all(|i| hs[i] >= Rational::from(BigInt::from(49)) * &hs[i - 1]);

    // conclusions
    let lower_ok = (0..m - 1).all(|i| {
        let ai = Rational::from(a[i].clone());
        ge_sqrt(&ai, &(Rational::one() / &input.alpha))
    });
    let powers_ok = (0..m).all(|i| {
        let pow = BigInt::from(7u32).pow((m - 1 - i) as u32);
        a[i] >= pow
    });
    let chain_ok = (1..m).all(|i| a[i - 1] >= BigInt::from(7) * &a[i]);
    let sum_sq: BigInt = a.iter().map(|x| x * x).sum();
    let a1_sq = &a[0] * &a[0];
    let sum_sq_ok = Rational::from(sum_sq)
        <= Rational::new(BigInt::from(49), BigInt::from(48)) * Rational::from(a1_sq.clone());
    let m_bound_ok = Rational::from(BigInt::from(m as i64 - 1))
        <= Rational::new(BigInt::from(49), BigInt::from(48)) * &input.alpha * Rational::from(a1_sq);

    let scaled_height_ok = input.naive_heights.as_ref().map(|nh| {
        if nh.len() != m {
            return false;
        }
        let sq = |x: &Rational| x * x;
        (0..m).all(|i| {
            (0..m).all(|j| {
                let ai2hi = Rational::from(&a[i] * &a[i]) * &hs[i];
                let aj2hj = Rational::from(&a[j] * &a[j]) * &hs[j];
                // (1/sqrt2) a_j^2 h_j <= a_i^2 h_i <= sqrt2 a_j^2 h_j
                let nt_ok = sq(&ai2hi) <= Rational::from(BigInt::from(2)) * sq(&aj2hj)
                    && sq(&aj2hj) <= Rational::from(BigInt::from(2)) * sq(&ai2hi);
                // height-ratio comparison h_i/h_j vs naive ratio
                let cross1 = &hs[i] * &nh[j];
                let cross2 = &hs[j] * &nh[i];
                let ratio_ok = sq(&cross1) <= Rational::from(BigInt::from(2)) * sq(&cross2)
                    && sq(&cross2) <= Rational::from(BigInt::from(2)) * sq(&cross1);
                // naive scaled double inequality with factor 2
                let ai2ni = Rational::from(&a[i] * &a[i]) * &nh[i];
                let aj2nj = Rational::from(&a[j] * &a[j]) * &nh[j];
                let naive_ok = ai2ni <= Rational::from(BigInt::from(2)) * &aj2nj
                    && aj2nj <= Rational::from(BigInt::from(2)) * &ai2ni;
                nt_ok && ratio_ok && naive_ok
            })
        })
    });

    Ok(AiReport {
        a,
        ratio_clause_ok,
        spacing_clause_ok,
        lower_ok,
        powers_ok,
        chain_ok,
        sum_sq_ok,
        m_bound_ok,
        scaled_height_ok,
    })
}

/// Exact check of the translate-height cap
/// `h(a_i x_i - x_m) <= alpha (a_i^2 h(x_i) + h(x_m))` for lattice vectors
/// under a rational Gram form.
pub fn translate_height_cap_holds(
    gram: &[Vec<Rational>],
    vectors: &[Vec<BigInt>],
    alpha: &Rational,
) -> Result<bool> {
    let m = vectors.len();
    if m < 2 {
        return Err(Error::precondition("need at least two vectors"));
    }
    let q = |v: &[Rational]| -> Rational {
        let r = gram.len();
        let mut acc = Rational::zero();
        for i in 0..r {
            for j in 0..r {
                acc += &gram[i][j] * &v[i] * &v[j];
            }
        }
        acc
    };
    let to_rat = |v: &[BigInt]| -> Vec<Rational> {
        v.iter().map(|x| Rational::from(x.clone())).collect()
    };
    let hs: Vec<Rational> = vectors.iter().map(|v| q(&to_rat(v))).collect();
    let last_v = &vectors[m - 1];
    let last_h = &hs[m - 1];
    for i in 0..m - 1 {
        let a = rational_isqrt(&(last_h / &hs[i]));
        let combo: Vec<Rational> = vectors[i]
            .iter()
            .zip(last_v)
            .map(|(x, y)| Rational::from(&a * x) - Rational::from(y.clone()))
            .collect();
        let lhs = q(&combo);
        let rhs = alpha * (Rational::from(&a * &a) * &hs[i] + last_h);
        if lhs > rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The cone clause `cos(x_i, x_j) >= 1 - alpha/4` for lattice vectors under
/// a rational Gram form, exactly.
pub fn cone_clause_holds(
    gram: &[Vec<Rational>],
    vectors: &[Vec<BigInt>],
    alpha: &Rational,
) -> Result<bool> {
    let pair = |a: &[BigInt], b: &[BigInt]| -> Rational {
        let r = gram.len();
        let mut acc = Rational::zero();
        for i in 0..r {
            for j in 0..r {
                acc += &gram[i][j] * Rational::from(a[i].clone()) * Rational::from(b[j].clone());
            }
        }
        acc
    };
    let thr = Rational::one() - alpha / Rational::from(BigInt::from(4));
    for (i, a) in vectors.iter().enumerate() {
        for b in vectors.iter().skip(i + 1) {
            let inner = pair(a, b);
            let na = pair(a, a);
            let nb = pair(b, b);
            // inner / sqrt(na nb) >= thr
            let ok = if thr.is_negative() || thr.is_zero() {
                true
            } else if inner.is_negative() {
                false
            } else {
                &inner * &inner >= &thr * &thr * na * nb
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Siegel-lemma kernel solver
// ---------------------------------------------------------------------------

/// A small nonzero kernel vector with its height report.
#[derive(Debug)]
pub struct SiegelReport {
    pub solution: Vec<BigInt>,
    pub height: LogValue,
    /// Dirichlet exponent `m / (n - m)` from the matrix format.
    pub dirichlet_exponent: Rational,
    /// `e (h(A) + log n) + (1 + e) c_S`.
    pub bound: Real,
    /// Whether the solution's height satisfies the bound.
    pub satisfied: bool,
}

/// Exact nonzero rational kernel vector of an `m x n` matrix with `m < n`,
/// scaled to a primitive integer vector with positive leading entry; among
/// the free-column basis vectors the one of smallest height is returned.
pub fn siegel_small_solution(
    matrix: &[Vec<Rational>],
    c_s: f64,
    precision_bits: u32,
) -> Result<SiegelReport> {
    let m = matrix.len();
    let n = matrix.first().map(|r| r.len()).unwrap_or(0);
    if m == 0 || n == 0 {
        return Err(Error::precondition("matrix must be nonempty"));
    }
    if matrix.iter().any(|r| r.len() != n) {
        return Err(Error::precondition("ragged matrix"));
    }
    if m >= n {
        return Err(Error::precondition("need strictly more columns than rows"));
    }
    // row-reduce
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].clone();
        for x in a[row].iter_mut() {
            *x = &*x / &inv;
        }
        for r in 0..m {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let sub = &f * &a[row][c];
                    a[r][c] = &a[r][c] - sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().cloned().collect();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
    // kernel basis vectors, one per free column
    let mut best: Option<(Vec<BigInt>, Rational)> = None;
    for &fc in &free_cols {
        let mut v = vec![Rational::zero(); n];
        v[fc] = Rational::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[ri][fc].clone();
        }
        let prim = crate::places::primitive_representative(&v)?;
        let maxabs: BigInt = prim.iter().map(|x| x.abs()).max().expect("nonempty");
        let key = Rational::from(maxabs);
        if best.as_ref().map(|(_, k)| key < *k).unwrap_or(true) {
            best = Some((prim, key));
        }
    }
    let (solution, _) = best.ok_or_else(|| Error::invariant("kernel must be nontrivial"))?;
    let sol_rats: Vec<Rational> = solution.iter().map(|x| Rational::from(x.clone())).collect();
    let height = tuple_height(&sol_rats, precision_bits)?;
    // Gauss-Weil height of the matrix entries as one projective tuple
    let entries: Vec<Rational> = matrix.iter().flatten().cloned().collect();
    let h_a = if entries.iter().all(|x| x.is_zero()) {
        LogValue::zero(precision_bits)
    } else {
        tuple_height(&entries, precision_bits)?
    };
    let e = Rational::new(BigInt::from(m as i64), BigInt::from((n - m) as i64));
    let prec = precision_bits;
    let e_real = Real::from_rational(&e, prec)?;
    let log_n = Real::from_i64(n as i64, prec).ln()?;
    let cs = Real::from_f64(c_s, prec)?;
    let bound = e_real
        .mul(&h_a.value.add(&log_n)?)?
        .add(&Real::one(prec).add(&e_real)?.mul(&cs)?)?;
    let satisfied = height.value.certainly_le(&bound);
    Ok(SiegelReport {
        solution,
        height,
        dirichlet_exponent: e,
        bound,
        satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn curve_44() -> WeierstrassCurve {
        WeierstrassCurve::new(rat(4, 1), rat(-4, 1)).unwrap()
    }

    #[test]
    fn simplex_examples() {
        // weights (2, 3), bound 1: exactly 7 points
        let s = WeightedSimplex::new(vec![rat(2, 1), rat(3, 1)], rat(1, 1)).unwrap();
        let c = simplex_count(&s).unwrap();
        assert_eq!(c.exact, BigUint::from(7u32));
        assert_eq!(c.exact, simplex_count_brute_force(&s).unwrap());
        let (lo, hi) = c.binomial_bounds.unwrap();
        assert!(lo <= c.exact && c.exact <= hi);
        // unit weights: exactly C(delta + n, n)
        let s = WeightedSimplex::new(vec![rat(1, 1); 3], rat(4, 1)).unwrap();
        let c = simplex_count(&s).unwrap();
        assert_eq!(c.exact, BigUint::try_from(binomial(7, 3)).unwrap());
        let (lo, hi) = c.binomial_bounds.unwrap();
        assert_eq!(lo, c.exact);
        assert_eq!(hi, c.exact);
        // bound 0: the origin only
        let s = WeightedSimplex::new(vec![rat(5, 2)], rat(0, 1)).unwrap();
        assert_eq!(simplex_count(&s).unwrap().exact, BigUint::one());
    }

    #[test]
    fn simplex_random_instances_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let n = rng.gen_range(1..=3usize);
            let weights: Vec<Rational> = (0..n)
                .map(|_| rat(rng.gen_range(1..=6i64), rng.gen_range(1..=3i64)))
                .collect();
            let bound = rat(rng.gen_range(0..=8i64), rng.gen_range(1..=2i64));
            let s = WeightedSimplex::new(weights, bound).unwrap();
            let c = simplex_count(&s).unwrap();
            assert_eq!(c.exact, simplex_count_brute_force(&s).unwrap());
            if let Some((lo, hi)) = c.binomial_bounds {
                assert!(lo <= c.exact && c.exact <= hi);
            }
        }
    }

    #[test]
    fn cone_cover_dimension_one() {
        let cover = cone_cover(1, &rat(2, 1), 100, 1).unwrap();
        assert_eq!(cover.centers.len(), 2);
        assert!(BigInt::from(cover.centers.len()) <= cover.count_bound);
    }

    #[test]
    fn cone_cover_r2_and_r3() {
        for (r, c1) in [(2usize, rat(2, 1)), (2, rat(8, 1)), (3, rat(2, 1))] {
            let cover = cone_cover(r, &c1, 10_000, 42).unwrap();
            assert!(
                BigInt::from(cover.centers.len()) <= cover.count_bound,
                "count {} above bound {} at r = {r}",
                cover.centers.len(),
                cover.count_bound
            );
        }
    }

    #[test]
    fn enumerate_rank_one_tight_case() {
        // hmin = 1, R = 4: exactly the multiples -2..2, bound (1+4)^1 = 5
        let c = curve_44();
        let model =
            MordellWeilModel::synthetic(c, vec![vec![rat(1, 1)]], rat(1, 1)).unwrap();
        let res = enumerate_bounded(&model, None, &rat(4, 1), 1e-3).unwrap();
        assert_eq!(res.points.len(), 5);
        assert_eq!(res.bound_floor, BigInt::from(5));
        // R = 0: torsion only
        let res = enumerate_bounded(&model, None, &rat(0, 1), 1e-3).unwrap();
        assert_eq!(res.points.len(), 1);
    }

    #[test]
    fn enumerate_rank_two_diagonal() {
        let c = curve_44();
        let model = MordellWeilModel::synthetic(
            c,
            vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]],
            rat(1, 1),
        )
        .unwrap();
        let res = enumerate_bounded(&model, None, &rat(1, 1), 1e-3).unwrap();
        // |n1|^2 + |n2|^2 <= 1: five points
        assert_eq!(res.points.len(), 5);
        assert_eq!(res.bound_floor, BigInt::from(9));
        // monotone in R
        let res2 = enumerate_bounded(&model, None, &rat(2, 1), 1e-3).unwrap();
        assert!(res2.points.len() >= res.points.len());
        assert_eq!(res2.points.len(), 9);
    }

    #[test]
    fn enumerate_point_backed_model() {
        let c = curve_44();
        let mult = Multiplier::new(&c);
        let g = c.affine_point(rat(1, 1), rat(2, 1)).unwrap();
        let model =
            MordellWeilModel::from_generators(&mult, vec![g], vec![], 1e-3).unwrap();
        assert!(model.hmin.is_positive());
        let r_cap = &model.gram[0][0] * rat(5, 1);
        let res = enumerate_bounded(&model, Some(&mult), &r_cap, 1e-3).unwrap();
        // at least -2g..2g (n^2 <= 5 gives n in -2..2)
        assert!(res.points.len() >= 5, "got {}", res.points.len());
        assert!(BigInt::from(res.points.len()) <= res.bound_floor.clone() + BigInt::one());
        for p in &res.points {
            if let Some(h) = p.verified_height {
                assert!(h <= rational_f64(&r_cap) + 2e-3);
            }
        }
    }

    #[test]
    fn ai_sequence_examples() {
        // heights (1, 49, 2401) correspond to norms (1, 7, 49)
        let input = AiInput {
            nt_heights: vec![rat(1, 1), rat(49, 1), rat(2401, 1)],
            alpha: rat(1, 49),
            naive_heights: None,
        };
        let rep = ai_sequence(&input).unwrap();
        assert_eq!(rep.a, vec![BigInt::from(49), BigInt::from(7), BigInt::from(1)]);
        assert!(rep.lower_ok && rep.powers_ok && rep.chain_ok && rep.sum_sq_ok && rep.m_bound_ok);
        // m = 2, norms (1, t): a = (floor(t), 1)
        let input = AiInput {
            nt_heights: vec![rat(1, 1), rat(64, 1)],
            alpha: rat(1, 49),
            naive_heights: None,
        };
        let rep = ai_sequence(&input).unwrap();
        assert_eq!(rep.a, vec![BigInt::from(8), BigInt::from(1)]);
        assert!(rep.spacing_clause_ok);
        // a ratio below 7 flags the spacing clause
        let input = AiInput {
            nt_heights: vec![rat(1, 1), rat(36, 1)],
            alpha: rat(1, 49),
            naive_heights: None,
        };
        let rep = ai_sequence(&input).unwrap();
        assert!(!rep.spacing_clause_ok);
    }

    #[test]
    fn translate_cap_and_cone_clause() {
        // rank-1 lattice: x_i = n_i g with a shared gram [1]
        let gram = vec![vec![rat(1, 1)]];
        let vectors = vec![vec![BigInt::from(1)], vec![BigInt::from(7)], vec![BigInt::from(49)]];
        // colinear vectors: cone clause holds for any positive alpha
        assert!(cone_clause_holds(&gram, &vectors, &rat(1, 49)).unwrap());
        // a_i x_i - x_m vanishes exactly when ratios are integers
        assert!(translate_height_cap_holds(&gram, &vectors, &rat(1, 49)).unwrap());
    }

    #[test]
    fn siegel_examples() {
        // A = [1 1 1]: kernel vector (1, -1, 0) with height 0
        let rep = siegel_small_solution(&[vec![rat(1, 1); 3]], 0.0, 128).unwrap();
        assert_eq!(rep.solution, vec![BigInt::from(1), BigInt::from(-1), BigInt::zero()]);
        assert_eq!(rep.height.to_f64(), 0.0);
        assert!(rep.satisfied);
        assert_eq!(rep.dirichlet_exponent, rat(1, 2));
        // A = [[1,0,-2],[0,1,-3]]: kernel (2, 3, 1), height log 3
        let rep = siegel_small_solution(
            &[
                vec![rat(1, 1), rat(0, 1), rat(-2, 1)],
                vec![rat(0, 1), rat(1, 1), rat(-3, 1)],
            ],
            0.0,
            128,
        )
        .unwrap();
        assert_eq!(rep.solution, vec![BigInt::from(2), BigInt::from(3), BigInt::from(1)]);
        assert!((rep.height.to_f64() - 3f64.ln()).abs() < 1e-12);
        assert_eq!(rep.dirichlet_exponent, rat(2, 1));
    }

    #[test]
    fn siegel_random_matrices_have_exact_kernels() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = rng.gen_range(1..=3usize);
            let n = m + rng.gen_range(1..=3usize);
            let a: Vec<Vec<Rational>> = (0..m)
                .map(|_| (0..n).map(|_| rat(rng.gen_range(-9i64..=9), 1)).collect())
                .collect();
            let rep = siegel_small_solution(&a, 0.0, 128).unwrap();
            assert!(rep.solution.iter().any(|x| !x.is_zero()));
            for row in &a {
                let dotp: Rational = row
                    .iter()
                    .zip(&rep.solution)
                    .map(|(c, x)| c * Rational::from(x.clone()))
                    .sum();
                assert!(dotp.is_zero(), "A x != 0");
            }
        }
    }
}
