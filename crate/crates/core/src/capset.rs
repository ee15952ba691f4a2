//! Cut-and-project sets `Σ_{ε,η}(Ω) = { a + bη : a,b ∈ Z, a − bε ∈ Ω }`.
//!
//! Conversion from 3iet parameters, generation with gap labels, exact
//! counting in windows, the unit-scaling and renormalization identities,
//! bounded count discrepancy, and self-similar point sets of morphisms.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::iet::{Closure, IetError, Iet3Params};
use crate::morphism::{fixed_point_seeds, fixed_point_window, perron_data, Morphism, MorphismError};
use crate::qfield::{Interval, QfieldError, QuadReal, RealParam};
use crate::words::{Alphabet, Letter, PointedWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CapsetError {
    #[error("{0} is not a unit compatible with Z + εZ")]
    NotAUnit(String),
    #[error("renormalization is singular: {0}")]
    SingularRenorm(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("conversion produced invalid parameters: {0}")]
    ConversionBug(String),
    #[error("{0} lies outside [0,l)")]
    OutOfDomain(String),
    #[error("ε + η must be nonzero")]
    ZeroDirection,
    #[error("morphism is not primitive")]
    NotPrimitive,
    #[error("no fixed-point seed for powers up to {0}")]
    NoFixedPoint(u32),
    #[error(transparent)]
    Field(#[from] QfieldError),
    #[error(transparent)]
    Iet(#[from] IetError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

fn q(n: i64) -> QuadReal {
    QuadReal::from_int(n)
}

fn qb(n: &BigInt) -> QuadReal {
    QuadReal::from_bigint(n.clone())
}

/// Normalized C&P parameters of a 3iet coding:
/// `ε = (β+γ)/N`, `l = (α+β+γ)/N`, `c = x0/N` with `N = α+2β+γ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConversionResult {
    pub eps: QuadReal,
    pub l: QuadReal,
    pub c: QuadReal,
    pub eta: QuadReal,
    /// `(c−l, c]` for left-closed codings, `[c−l, c)` for right-closed ones.
    pub omega: Interval,
    pub closure: Closure,
}

pub fn from_iet(p: &Iet3Params, x0: &RealParam, eta: &RealParam) -> Result<ConversionResult, CapsetError> {
    let [a, b, g] = p.exact_triple()?;
    let x0 = x0.exact()?.clone();
    let eta = eta.exact()?.clone();
    let s = &(&a + &b) + &g;
    let in_domain = match p.closure {
        Closure::LeftClosed => !x0.is_negative() && x0 < s,
        Closure::RightClosed => x0.is_positive() && x0 <= s,
    };
    if !in_domain {
        return Err(IetError::OutOfDomain(x0.to_string()).into());
    }
    if !eta.is_positive() {
        return Err(CapsetError::HypothesisFailed("η must be positive".into()));
    }
    eta.checked_add(&a)?;
    let norm = &s + &b;
    let eps = &(&b + &g) / &norm;
    let l = &s / &norm;
    let c = x0.checked_div(&norm)?;
    let omega = match p.closure {
        Closure::LeftClosed => Interval::left_open(&c - &l, c.clone()),
        Closure::RightClosed => Interval::right_open(&c - &l, c.clone()),
    };
    let one = QuadReal::one();
    let ok = eps.is_positive()
        && eps < one
        && eps.clone().max(&one - &eps) < l
        && l <= one
        && (omega.contains(&QuadReal::zero()) || p.closure == Closure::RightClosed);
    if !ok {
        return Err(CapsetError::ConversionBug(format!("ε={eps}, l={l}, c={c}")));
    }
    Ok(ConversionResult { eps, l, c, eta, omega, closure: p.closure })
}

/// Points of a C&P set in an index window, sorted, with the gap word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapSet {
    pub eps: QuadReal,
    pub eta: QuadReal,
    pub points: Vec<QuadReal>,
    /// Orbit index `n` of each point.
    pub indices: Vec<i64>,
    /// Label of the gap to the right of each point but the last:
    /// `η -> A`, `1+2η -> B`, `1+η -> C`.
    pub gaps: Vec<Letter>,
    /// Position of the point `0`, if generated.
    pub zero_pos: Option<usize>,
}

impl CapSet {
    /// Gap labels as a pointed word centred at the point `0`.
    pub fn gap_word(&self) -> PointedWord {
        PointedWord::new(Alphabet::Ternary, self.gaps.clone(), self.zero_pos.unwrap_or(0))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,t_exact,t_approx,gap\n");
        for (k, (t, n)) in self.points.iter().zip(&self.indices).enumerate() {
            let gap = self.gaps.get(k).map_or(String::new(), |&g| Alphabet::Ternary.symbol(g).to_string());
            let _ = writeln!(out, "{n},{t},{:.12},{gap}", t.to_f64());
        }
        out
    }

    /// Two rows: the set itself, and its points coloured by gap label.
    pub fn to_svg(&self) -> String {
        svg_rows(&self.points, &self.gaps, None)
    }
}

/// Generates `⌊c+nε⌋ + nη` for `n` in `n_lo..=n_hi` whose fractional part
/// `{c+nε}` lies in `[0,l)` (upper fractional part in `(0,l]` when
/// right-closed).
pub fn generate(cp: &ConversionResult, n_lo: i64, n_hi: i64) -> CapSet {
    let mut points = Vec::new();
    let mut indices = Vec::new();
    for n in n_lo..=n_hi {
        let y = &cp.c + &(&cp.eps * &q(n));
        let (a, keep) = match cp.closure {
            Closure::LeftClosed => {
                let (fl, fr) = y.floor_frac();
                (fl, fr < cp.l)
            }
            Closure::RightClosed => {
                let a = y.ceil() - 1;
                let fr = &y - &qb(&a);
                (a, fr <= cp.l)
            }
        };
        if keep {
            points.push(&qb(&a) + &(&cp.eta * &q(n)));
            indices.push(n);
        }
    }
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
    let gaps = label_gaps(&points, &cp.eta);
    let zero_pos = points.iter().position(QuadReal::is_zero);
    CapSet { eps: cp.eps.clone(), eta: cp.eta.clone(), points, indices, gaps, zero_pos }
}

/// Gap labels; panics on a gap outside `{η, 1+2η, 1+η}`.
pub fn label_gaps(points: &[QuadReal], eta: &QuadReal) -> Vec<Letter> {
    let ga = eta.clone();
    let gb = &(eta * &q(2)) + &q(1);
    let gc = eta + &q(1);
    points
        .windows(2)
        .map(|w| {
            let d = &w[1] - &w[0];
            if d == ga {
                0
            } else if d == gb {
                1
            } else if d == gc {
                2
            } else {
                panic!("gap {d} outside the three admissible lengths")
            }
        })
        .collect()
}

/// The induced exchange on `[0,l)`.
pub fn tilde_t(cp: &ConversionResult, x: &QuadReal) -> Result<QuadReal, CapsetError> {
    if x.is_negative() || x >= &cp.l {
        return Err(CapsetError::OutOfDomain(x.to_string()));
    }
    let one = QuadReal::one();
    Ok(if x < &(&cp.l - &cp.eps) {
        x + &cp.eps
    } else if x < &(&one - &cp.eps) {
        &(x + &(&cp.eps * &q(2))) - &one
    } else {
        &(x + &cp.eps) - &one
    })
}

/// Integers `b` with `b(ε+η) ∈ J − Ω`.
fn b_range(eps: &QuadReal, eta: &QuadReal, omega: &Interval, j: &Interval) -> Result<Option<(i64, i64)>, CapsetError> {
    let s = eps.checked_add(eta)?;
    if s.is_zero() {
        return Err(CapsetError::ZeroDirection);
    }
    if omega.is_empty() || j.is_empty() {
        return Ok(None);
    }
    let diff = Interval::closed(&j.lo - &omega.hi, &j.hi - &omega.lo);
    let inv = s.inverse().ok_or(QfieldError::DivByZero)?;
    Ok(diff.scale(&inv).integer_range().map(|(lo, hi)| {
        (lo.to_i64().expect("window fits in i64"), hi.to_i64().expect("window fits in i64"))
    }))
}

fn a_range(eps: &QuadReal, eta: &QuadReal, omega: &Interval, j: &Interval, b: i64) -> Option<(BigInt, BigInt)> {
    let bq = q(b);
    omega.shift(&(eps * &bq)).intersect(&j.shift(&-(eta * &bq))).integer_range()
}

/// `#(J ∩ Σ_{ε,η}(Ω))`.
pub fn count_in(eps: &QuadReal, eta: &QuadReal, omega: &Interval, j: &Interval) -> Result<u64, CapsetError> {
    let Some((lo, hi)) = b_range(eps, eta, omega, j)? else {
        return Ok(0);
    };
    Ok((lo..=hi)
        .into_par_iter()
        .map(|b| match a_range(eps, eta, omega, j, b) {
            Some((a0, a1)) => (a1 - a0 + 1u32).to_u64().unwrap_or(0),
            None => 0,
        })
        .sum())
}

/// Sorted `J ∩ Σ_{ε,η}(Ω)`.
pub fn points_in(eps: &QuadReal, eta: &QuadReal, omega: &Interval, j: &Interval) -> Result<Vec<QuadReal>, CapsetError> {
    let Some((lo, hi)) = b_range(eps, eta, omega, j)? else {
        return Ok(Vec::new());
    };
    let mut pts: Vec<QuadReal> = (lo..=hi)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut v = Vec::new();
            if let Some((a0, a1)) = a_range(eps, eta, omega, j, b) {
                let mut a = a0;
                while a <= a1 {
                    v.push(&qb(&a) + &(eta * &q(b)));
                    a += 1;
                }
            }
            v
        })
        .collect();
    pts.sort();
    Ok(pts)
}

/// Both sides of `#(Ω₁ ∩ Σ_{ε,η}(Ω₂)) = #(Ω₂ ∩ Σ_{η,ε}(Ω₁))`.
pub fn duality_counts(
    eps: &QuadReal,
    eta: &QuadReal,
    omega1: &Interval,
    omega2: &Interval,
) -> Result<(u64, u64), CapsetError> {
    Ok((count_in(eps, eta, omega2, omega1)?, count_in(eta, eps, omega1, omega2)?))
}

/// `Z + εZ` coordinates `(p, q)` of `x = p + qε`, if integral.
fn lattice_coords(x: &QuadReal, eps: &QuadReal) -> Option<(BigInt, BigInt)> {
    let (xa, xb) = x.rational_decompose();
    let (ea, eb) = eps.rational_decompose();
    if eb.is_zero() {
        return None;
    }
    let qq = &xb / &eb;
    let pp = &xa - &qq * &ea;
    (pp.is_integer() && qq.is_integer()).then(|| (pp.to_integer(), qq.to_integer()))
}

/// `λ(Z + εZ) = Z + εZ`: the multiplication map is integral and unimodular.
pub fn is_compatible_unit(lambda: &QuadReal, eps: &QuadReal) -> bool {
    if lambda.checked_add(eps).is_err() || !lambda.norm().abs().is_one() {
        return false;
    }
    match (lattice_coords(lambda, eps), lattice_coords(&(lambda * eps), eps)) {
        (Some((p1, q1)), Some((p2, q2))) => (p1 * q2 - p2 * q1).abs() == BigInt::from(1),
        _ => false,
    }
}

/// Sides of `λ′ Σ_{ε,−ε′}(Ω) = Σ_{ε,−ε′}(λΩ)` restricted to `window`.
pub fn unit_scaling_sides(
    eps: &QuadReal,
    lambda: &QuadReal,
    omega: &Interval,
    window: &Interval,
) -> Result<(Vec<QuadReal>, Vec<QuadReal>), CapsetError> {
    if !is_compatible_unit(lambda, eps) {
        return Err(CapsetError::NotAUnit(lambda.to_string()));
    }
    let eta = -eps.conjugate();
    let lc = lambda.conjugate();
    let lc_inv = lc.inverse().ok_or(QfieldError::DivByZero)?;
    let lhs: Vec<QuadReal> =
        points_in(eps, &eta, omega, &window.scale(&lc_inv))?.into_iter().map(|p| &p * &lc).collect();
    let rhs = points_in(eps, &eta, &omega.scale(lambda), window)?;
    Ok((lhs, rhs))
}

pub fn unit_scaling_check(
    eps: &QuadReal,
    lambda: &QuadReal,
    omega: &Interval,
    window: &Interval,
) -> Result<bool, CapsetError> {
    let (l, r) = unit_scaling_sides(eps, lambda, omega, window)?;
    Ok(l == r)
}

/// Sides of `Σ_{ε,η}((1+2ε)Ω) = (1−2η) Σ_{ε/(1+2ε), η/(1−2η)}(Ω′)` in
/// `window`; the identity holds for `Ω′ = Ω`.
pub fn renorm_sides(
    eps: &QuadReal,
    eta: &QuadReal,
    omega_lhs: &Interval,
    omega_rhs: &Interval,
    window: &Interval,
) -> Result<(Vec<QuadReal>, Vec<QuadReal>), CapsetError> {
    let one = QuadReal::one();
    let s = &one + &(eps * &q(2));
    let t = &one - &(eta * &q(2));
    if s.is_zero() || t.is_zero() {
        return Err(CapsetError::SingularRenorm(format!("1+2ε = {s}, 1−2η = {t}")));
    }
    let (e2, h2) = (eps / &s, eta / &t);
    if (&e2 + &h2).is_zero() || (eps + eta).is_zero() {
        return Err(CapsetError::SingularRenorm("transformed ε + η vanishes".into()));
    }
    let lhs = points_in(eps, eta, &omega_lhs.scale(&s), window)?;
    let t_inv = t.inverse().ok_or(QfieldError::DivByZero)?;
    let mut rhs: Vec<QuadReal> =
        points_in(&e2, &h2, omega_rhs, &window.scale(&t_inv))?.into_iter().map(|p| &p * &t).collect();
    rhs.sort();
    Ok((lhs, rhs))
}

pub fn renorm_check(eps: &QuadReal, eta: &QuadReal, omega: &Interval, window: &Interval) -> Result<bool, CapsetError> {
    let (l, r) = renorm_sides(eps, eta, omega, omega, window)?;
    Ok(l == r)
}

/// `Q(J,z) = #(J ∩ Σ_{ε,η}(z−1, z])`.
pub fn q_count(eps: &QuadReal, eta: &QuadReal, j: &Interval, z: &QuadReal) -> Result<u64, CapsetError> {
    count_in(eps, eta, &Interval::left_open(z - &QuadReal::one(), z.clone()), j)
}

/// `2(1 + 1/|ε+η|)`.
pub fn q_bound(eps: &QuadReal, eta: &QuadReal) -> Result<QuadReal, CapsetError> {
    let s = eps.checked_add(eta)?.abs();
    let inv = s.inverse().ok_or(CapsetError::ZeroDirection)?;
    Ok(&(&QuadReal::one() + &inv) * &q(2))
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> QuadReal {
    QuadReal::frac(rng.gen_range(lo * den..=hi * den), den)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QBoundReport {
    pub bound: QuadReal,
    pub bound_approx: f64,
    pub triples: usize,
    pub max_diff: u64,
    pub violations: usize,
}

/// `|Q(J,z) − Q(J,t)|` over random `(z, t, J)` with rational data.
pub fn q_bound_experiment(eps: &QuadReal, eta: &QuadReal, triples: usize, seed: u64) -> Result<QBoundReport, CapsetError> {
    let bound = q_bound(eps, eta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(QuadReal, QuadReal, Interval)> = (0..triples)
        .map(|_| {
            let z = random_rational(&mut rng, -10, 10, 97);
            let t = random_rational(&mut rng, -10, 10, 97);
            let lo = random_rational(&mut rng, -20, 20, 89);
            let len = random_rational(&mut rng, 0, 15, 83);
            let j = Interval::new(lo.clone(), &lo + &len, rng.gen(), rng.gen());
            (z, t, j)
        })
        .collect();
    let diffs: Vec<u64> = cases
        .par_iter()
        .map(|(z, t, j)| -> Result<u64, CapsetError> {
            Ok(q_count(eps, eta, j, z)?.abs_diff(q_count(eps, eta, j, t)?))
        })
        .collect::<Result<_, _>>()?;
    let violations = diffs.iter().filter(|&&d| q(d as i64) > bound).count();
    Ok(QBoundReport {
        bound_approx: bound.to_f64(),
        bound,
        triples,
        max_diff: diffs.into_iter().max().unwrap_or(0),
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PnRow {
    pub n: u32,
    pub min: u64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PnReport {
    pub eta: QuadReal,
    pub big_lambda: QuadReal,
    /// Bound through the renormalized parameters `η/(1+2η)`, `ε/(1−2ε)`.
    pub bound: QuadReal,
    pub bound_approx: f64,
    pub rows: Vec<PnRow>,
    pub max_diff: u64,
    pub within_bound: bool,
}

/// `P_n(x) = #((x, x+(1+2η)Λⁿ] ∩ Σ_{ε,η}(Ω))`.
pub fn p_count(eps: &QuadReal, eta: &QuadReal, big_lambda_n: &QuadReal, omega: &Interval, x: &QuadReal) -> Result<u64, CapsetError> {
    let len = &(&QuadReal::one() + &(eta * &q(2))) * big_lambda_n;
    count_in(eps, eta, omega, &Interval::left_open(x.clone(), x + &len))
}

/// Verifies the hypotheses on `ε`, `λ`, then records the spread of `P_n` over
/// `samples` random rational points for each `n <= n_max`.
pub fn pn_experiment(
    eps: &QuadReal,
    lambda: &QuadReal,
    omega: &Interval,
    n_max: u32,
    samples: usize,
    seed: u64,
) -> Result<PnReport, CapsetError> {
    let one = QuadReal::one();
    let fail = |m: &str| Err(CapsetError::HypothesisFailed(m.into()));
    if eps.is_rational() || !eps.is_positive() || eps >= &one {
        return fail("ε must be an irrational number in (0,1)");
    }
    if !eps.conjugate().is_negative() {
        return fail("ε′ must be negative");
    }
    if !lambda.is_positive() || lambda >= &one || lambda.conjugate() <= one {
        return fail("λ must lie in (0,1) with λ′ > 1");
    }
    if !is_compatible_unit(lambda, eps) {
        return fail("λ is not a unit preserving Z + εZ");
    }
    let eta = -eps.conjugate();
    let big = lambda.conjugate();
    let eps_t = &eta / &(&one + &(&eta * &q(2)));
    let eta_t = eps / &(&one - &(eps * &q(2)));
    let bound = q_bound(&eps_t, &eta_t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<QuadReal> = (0..samples).map(|_| random_rational(&mut rng, -50, 50, 101)).collect();
    let mut rows = Vec::new();
    let mut big_n = one.clone();
    for n in 0..=n_max {
        let counts: Vec<u64> =
            xs.iter().map(|x| p_count(eps, &eta, &big_n, omega, x)).collect::<Result<_, _>>()?;
        rows.push(PnRow { n, min: *counts.iter().min().unwrap_or(&0), max: *counts.iter().max().unwrap_or(&0) });
        big_n = &big_n * &big;
    }
    let max_diff = rows.iter().map(|r| r.max - r.min).max().unwrap_or(0);
    Ok(PnReport {
        within_bound: q(max_diff as i64) <= bound,
        bound_approx: bound.to_f64(),
        bound,
        eta,
        big_lambda: big,
        rows,
        max_diff,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfSimilarReport {
    pub power: u32,
    pub seed: String,
    pub lambda: QuadReal,
    pub lengths: Vec<QuadReal>,
    pub gaps_checked: usize,
    /// `Λ t_n ∈ Σ` for every checked point.
    pub scaling_ok: bool,
    /// `#((Λt_n, Λt_{n+1}] ∩ Σ) = |φ(u_n)|` for every checked gap.
    pub counts_ok: bool,
    #[serde(skip)]
    pub points: Vec<QuadReal>,
    #[serde(skip)]
    pub letters: Vec<Letter>,
}

impl SelfSimilarReport {
    pub fn passed(&self) -> bool {
        self.scaling_ok && self.counts_ok
    }

    pub fn to_svg(&self) -> String {
        let scaled: Vec<QuadReal> = self.points.iter().map(|t| t * &self.lambda).collect();
        svg_rows(&self.points, &self.letters, Some(&scaled))
    }
}

/// Builds `Σ = {t_n}` from a fixed point of some power of `m`, with letter
/// lengths from the right Perron eigenvector, and checks `ΛΣ ⊂ Σ` and the
/// gap counts on `gaps` gaps around the origin.
pub fn selfsimilar_check(m: &Morphism, gaps: usize) -> Result<SelfSimilarReport, CapsetError> {
    if !m.is_primitive() {
        return Err(CapsetError::NotPrimitive);
    }
    let pd = perron_data(&m.incidence_matrix())?;
    const MAX_POWER: u32 = 9;
    let &(p, sl, sr) = fixed_point_seeds(m, MAX_POWER).first().ok_or(CapsetError::NoFixedPoint(MAX_POWER))?;
    let mp = m.power(p);
    let lambda = pd.lambda.pow(p);
    let max_img = mp.images().iter().map(Vec::len).max().unwrap_or(1);
    let half = gaps.div_ceil(2);
    let w = fixed_point_window(&mp, sl, sr, (half + 1) * max_img + 2)?;
    let lengths = pd.right.clone();

    // t_k for k in lo..=hi
    let mut pts = Vec::with_capacity(w.len() + 1);
    let mut acc = QuadReal::zero();
    let mut left: Vec<QuadReal> = Vec::new();
    for l in w.left() {
        acc = &acc - &lengths[l as usize];
        left.push(acc.clone());
    }
    left.reverse();
    pts.extend(left);
    let zero_idx = pts.len();
    acc = QuadReal::zero();
    pts.push(acc.clone());
    for &l in w.right() {
        acc = &acc + &lengths[l as usize];
        pts.push(acc.clone());
    }
    let idx_of = |x: &QuadReal| pts.binary_search(x).ok();
    let mut scaling_ok = true;
    let mut counts_ok = true;
    let lo = -(half as i64);
    let hi = (gaps - half) as i64;
    for n in lo..hi {
        let k = (zero_idx as i64 + n) as usize;
        let (a, b) = (&pts[k] * &lambda, &pts[k + 1] * &lambda);
        match (idx_of(&a), idx_of(&b)) {
            (Some(ia), Some(ib)) => {
                let letter = w.get(n).expect("inside window");
                if ib - ia != mp.image(letter).len() {
                    counts_ok = false;
                }
            }
            _ => scaling_ok = false,
        }
    }
    let a = m.alphabet();
    let lo_k = zero_idx - half;
    let hi_k = zero_idx + (gaps - half);
    Ok(SelfSimilarReport {
        power: p,
        seed: format!("{}|{}", a.symbol(sl), a.symbol(sr)),
        lambda,
        lengths,
        gaps_checked: gaps,
        scaling_ok,
        counts_ok,
        points: pts[lo_k..=hi_k].to_vec(),
        letters: w.letters()[w.origin() - half..w.origin() + (gaps - half)].to_vec(),
    })
}

const PALETTE: [&str; 3] = ["#1b9e77", "#d95f02", "#7570b3"];

/// Top row: points joined by gap segments coloured per letter. Bottom row
/// (optional): a second point set, drawn on the same scale.
pub fn svg_rows(points: &[QuadReal], gaps: &[Letter], second: Option<&[QuadReal]>) -> String {
    let xs: Vec<f64> = points.iter().map(QuadReal::to_f64).collect();
    let (min, max) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let width = 1200.0;
    let span = if max > min { max - min } else { 1.0 };
    let sx = |x: f64| 20.0 + (x - min) / span * (width - 40.0);
    let height = if second.is_some() { 140.0 } else { 80.0 };
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">"#);
    for (k, g) in gaps.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="40" x2="{:.2}" y2="40" stroke="{}" stroke-width="3"/>"#,
            sx(xs[k]),
            sx(xs[k + 1]),
            PALETTE[*g as usize % 3]
        );
    }
    for &x in &xs {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="40" r="2.5" fill="black"/>"#, sx(x));
    }
    if let Some(second) = second {
        for p in second {
            let x = p.to_f64();
            if x >= min && x <= max {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="100" r="2.5" fill="black"/>"#, sx(x));
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iet::t3_word;

    fn s2() -> QuadReal {
        QuadReal::sqrt(2)
    }
    fn ex(x: QuadReal) -> RealParam {
        RealParam::Exact(x)
    }
    fn params() -> Iet3Params {
        Iet3Params::exact(q(1), s2(), s2()).unwrap()
    }

    /// Definitional count: every `(a, b)` in a box.
    fn brute_count(eps: &QuadReal, eta: &QuadReal, omega: &Interval, j: &Interval, r: i64) -> u64 {
        let mut n = 0;
        for a in -r..=r {
            for b in -r..=r {
                let (aq, bq) = (q(a), q(b));
                if omega.contains(&(&aq - &(&bq * eps))) && j.contains(&(&aq + &(&bq * eta))) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn conversion_examples() {
        let cp = from_iet(&params(), &ex(q(0)), &ex(q(1))).unwrap();
        assert_eq!(cp.eps, &(s2() * q(2)) / &(q(1) + s2() * q(3)));
        assert!(cp.c.is_zero());
        assert_eq!(cp.omega, Interval::left_open(-cp.l.clone(), q(0)));
        let ones = Iet3Params::exact(q(1), q(1), q(1)).unwrap();
        let cp1 = from_iet(&ones, &ex(q(0)), &ex(q(1))).unwrap();
        assert_eq!((cp1.eps, cp1.l), (QuadReal::frac(1, 2), QuadReal::frac(3, 4)));
        assert!(from_iet(&ones, &ex(q(3)), &ex(q(1))).is_err());
    }

    #[test]
    fn generated_gaps_code_the_orbit() {
        let x0 = QuadReal::frac(1, 3);
        let cp = from_iet(&params(), &ex(x0.clone()), &ex(q(1))).unwrap();
        let set = generate(&cp, -300, 1500);
        assert!(set.points.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(set.indices[set.zero_pos.unwrap()], 0);
        let gw = set.gap_word();
        let left = gw.origin() as i64;
        let right = (gw.len() - gw.origin()) as i64;
        assert_eq!(t3_word(&params(), &ex(x0), -left, right - 1).unwrap(), gw);
    }

    #[test]
    fn right_closed_generation_codes_right_closed_orbit() {
        let p = params().with_closure(Closure::RightClosed);
        let x0 = q(1);
        let cp = from_iet(&p, &ex(x0.clone()), &ex(s2())).unwrap();
        let gw = generate(&cp, -200, 800).gap_word();
        let left = gw.origin() as i64;
        let right = (gw.len() - gw.origin()) as i64;
        assert_eq!(t3_word(&p, &ex(x0), -left, right - 1).unwrap(), gw);
    }

    #[test]
    fn closed_form_equals_definition() {
        let cp = from_iet(&params(), &ex(QuadReal::frac(2, 5)), &ex(QuadReal::frac(1, 2))).unwrap();
        let set = generate(&cp, -400, 400);
        // every point of the definitional set between the extreme generated
        // points is generated
        let j = Interval::closed(set.points[0].clone(), set.points.last().unwrap().clone());
        let def = points_in(&cp.eps, &cp.eta, &cp.omega, &j).unwrap();
        assert_eq!(def, set.points);
    }

    #[test]
    fn induced_map_follows_neighbours() {
        let cp = from_iet(&params(), &ex(QuadReal::frac(1, 2)), &ex(q(1))).unwrap();
        let set = generate(&cp, 0, 200);
        let star = |n: i64| (&cp.c + &(&cp.eps * &q(n))).fract();
        for w in set.indices.windows(2).take(100) {
            assert_eq!(tilde_t(&cp, &star(w[0])).unwrap(), star(w[1]));
        }
        let x = &QuadReal::one() - &cp.eps;
        assert_eq!(tilde_t(&cp, &x).unwrap(), &(&x + &cp.eps) - &q(1));
        assert!(tilde_t(&cp, &cp.l).is_err());
    }

    #[test]
    fn induced_map_is_homothetic_to_source() {
        let p = params();
        let cp = from_iet(&p, &ex(q(0)), &ex(q(1))).unwrap();
        let norm = &(q(1) + s2() * q(3)) * &q(1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x = random_rational(&mut rng, 0, 3, 113);
            let total = q(1) + s2() * q(2);
            if x >= total {
                continue;
            }
            let tx = crate::iet::t3_apply(&p, &ex(x.clone())).unwrap();
            assert_eq!(tilde_t(&cp, &(&x / &norm)).unwrap(), tx.exact().unwrap() / &norm);
        }
    }

    #[test]
    fn count_matches_brute_force() {
        let eps = &s2() - &q(1);
        let eta = s2() / q(3);
        let omega = Interval::left_open(q(-1), QuadReal::frac(1, 2));
        for (lo, hi, lc, hc) in [(-3, 4, true, false), (0, 0, true, true), (-5, 2, false, true), (2, 1, true, true)] {
            let j = Interval::new(q(lo), q(hi), lc, hc);
            assert_eq!(count_in(&eps, &eta, &omega, &j).unwrap(), brute_count(&eps, &eta, &omega, &j, 40));
        }
        // the single point {0} lies in Σ when 0 ∈ Ω
        assert_eq!(count_in(&eps, &eta, &omega, &Interval::closed(q(0), q(0))).unwrap(), 1);
    }

    #[test]
    fn duality_random_pairs() {
        let eps = s2() / q(3);
        let eta = s2() / q(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let lo1 = random_rational(&mut rng, -5, 5, 7);
            let lo2 = random_rational(&mut rng, -5, 5, 7);
            let o1 = Interval::new(lo1.clone(), &lo1 + &random_rational(&mut rng, 0, 6, 5), rng.gen(), rng.gen());
            let o2 = Interval::new(lo2.clone(), &lo2 + &random_rational(&mut rng, 0, 6, 5), rng.gen(), rng.gen());
            let (a, b) = duality_counts(&eps, &eta, &o1, &o2).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, brute_count(&eps, &eta, &o2, &o1, 60));
        }
    }

    #[test]
    fn unit_scaling_examples() {
        let eps = &s2() - &q(1);
        let lambda = &q(3) - &(s2() * q(2));
        let omega = Interval::right_open(q(0), q(1));
        let w = Interval::closed(q(-20), q(20));
        let (l, r) = unit_scaling_sides(&eps, &lambda, &omega, &w).unwrap();
        assert!(!l.is_empty());
        assert_eq!(l, r);
        assert!(unit_scaling_check(&eps, &QuadReal::one(), &omega, &w).unwrap());
        assert!(matches!(unit_scaling_check(&eps, &q(2), &omega, &w), Err(CapsetError::NotAUnit(_))));
    }

    #[test]
    fn renorm_examples() {
        let (e, h) = (s2() / q(4), s2() / q(8));
        let omega = Interval::left_open(q(0), q(1));
        let w = Interval::closed(q(-20), q(20));
        let (l, r) = renorm_sides(&e, &h, &omega, &omega, &w).unwrap();
        assert!(l.len() > 20);
        assert_eq!(l, r);
        let empty = Interval::new(q(1), q(0), true, true);
        assert!(renorm_check(&e, &h, &omega, &empty).unwrap());
        let moved = Interval::left_open(q(0), QuadReal::frac(11, 10));
        let (l2, r2) = renorm_sides(&e, &h, &omega, &moved, &w).unwrap();
        assert_ne!(l2, r2);
        assert!(matches!(
            renorm_check(&QuadReal::frac(-1, 2), &h, &omega, &w),
            Err(CapsetError::SingularRenorm(_))
        ));
    }

    /// The variant with `ε/(1−2ε)` and `η/(1+2η)` does not hold.
    #[test]
    fn swapped_denominators_fail() {
        let (e, h) = (s2() / q(4), s2() / q(8));
        let omega = Interval::left_open(q(0), q(1));
        let w = Interval::closed(q(-20), q(20));
        let one = QuadReal::one();
        let lhs = points_in(&e, &h, &omega.scale(&(&one + &(&e * &q(2)))), &w).unwrap();
        let t = &one - &(&h * &q(2));
        let e2 = &e / &(&one - &(&e * &q(2)));
        let h2 = &h / &(&one + &(&h * &q(2)));
        let rhs: Vec<QuadReal> = points_in(&e2, &h2, &omega, &w.scale(&t.inverse().unwrap()))
            .unwrap()
            .into_iter()
            .map(|p| &p * &t)
            .collect();
        assert_ne!(lhs.len(), rhs.len());
    }

    #[test]
    fn q_bound_examples() {
        let (e, h) = (s2() / q(3), s2() / q(5));
        let rep = q_bound_experiment(&e, &h, 50, 3).unwrap();
        assert_eq!(rep.violations, 0);
        let z = QuadReal::frac(1, 3);
        let j = Interval::closed(q(0), QuadReal::frac(1, 2));
        assert!(q_count(&e, &h, &j, &z).unwrap() <= 2);
        assert_eq!(q_count(&e, &h, &j, &z).unwrap(), q_count(&e, &h, &j, &z).unwrap());
    }

    #[test]
    fn pn_small() {
        let eps = s2() / q(2);
        let lambda = &q(3) - &(s2() * q(2));
        let omega = Interval::left_open(q(-1), q(0));
        let rep = pn_experiment(&eps, &lambda, &omega, 3, 6, 1).unwrap();
        assert!(rep.within_bound, "{rep:?}");
        assert_eq!(rep.bound, q(2) + s2());
        assert!(matches!(
            pn_experiment(&(&q(2) - &s2()), &lambda, &omega, 1, 2, 1),
            Err(CapsetError::HypothesisFailed(_))
        ));
    }

    #[test]
    fn selfsimilar_golden_mean() {
        let fib: Morphism = "0->10;1->110".parse().unwrap();
        let rep = selfsimilar_check(&fib, 200).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let tau = (q(1) + QuadReal::sqrt(5)) / q(2);
        assert_eq!(rep.lambda, &tau * &tau);
        assert_eq!(rep.lengths, vec![q(1), tau]);
        assert!(rep.to_svg().starts_with("<svg"));
    }

    #[test]
    fn selfsimilar_ternary_and_rejection() {
        let phi0: Morphism = "A->B;B->BCB;C->CAC".parse().unwrap();
        assert!(selfsimilar_check(&phi0, 100).unwrap().passed());
        let phi: Morphism = "A->AC;B->BC;C->C".parse().unwrap();
        assert_eq!(selfsimilar_check(&phi, 10).unwrap_err(), CapsetError::NotPrimitive);
    }

    #[test]
    fn csv_shape() {
        let cp = from_iet(&params(), &ex(q(0)), &ex(q(1))).unwrap();
        let csv = generate(&cp, 0, 5).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,t_exact,t_approx,gap"));
        assert!(lines.next().unwrap().starts_with("0,0,"));
    }
}
