//! Two- and three-interval exchange transformations, their orbit codings and
//! exact classification of parameters.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::qfield::{Interval, QfieldError, QuadReal, Rational, RealParam, ScaledQuad, Scalar, UnitScalar};
use crate::words::{Alphabet, Letter, PointedWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IetError {
    #[error("{0} lies outside the domain")]
    OutOfDomain(String),
    #[error("parameter {0} must be positive")]
    NonPositive(&'static str),
    #[error("2iet slope must lie in (0,1) and intercept in the domain")]
    BadTwoIet,
    #[error("index range {0}:{1} must satisfy lo <= 0 <= hi")]
    BadRange(i64, i64),
    #[error(transparent)]
    Field(#[from] QfieldError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `LeftClosed` uses `[0,a)`-type intervals, `RightClosed` uses `(0,a]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
pub enum Closure {
    #[default]
    LeftClosed,
    RightClosed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Iet3Params {
    pub alpha: RealParam,
    pub beta: RealParam,
    pub gamma: RealParam,
    pub closure: Closure,
}

impl Iet3Params {
    pub fn new(alpha: RealParam, beta: RealParam, gamma: RealParam, closure: Closure) -> Result<Self, IetError> {
        for (name, v) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
            let positive = match v {
                RealParam::Exact(q) => q.is_positive(),
                RealParam::Approx { value, .. } => *value > 0.0,
            };
            if !positive {
                return Err(IetError::NonPositive(name));
            }
        }
        Ok(Self { alpha, beta, gamma, closure })
    }

    /// Left-closed parameters from exact values.
    pub fn exact(alpha: QuadReal, beta: QuadReal, gamma: QuadReal) -> Result<Self, IetError> {
        Self::new(alpha.into(), beta.into(), gamma.into(), Closure::LeftClosed)
    }

    pub fn with_closure(mut self, closure: Closure) -> Self {
        self.closure = closure;
        self
    }

    pub fn exact_triple(&self) -> Result<[QuadReal; 3], IetError> {
        let t = [self.alpha.exact()?.clone(), self.beta.exact()?.clone(), self.gamma.exact()?.clone()];
        // Surface mixed fields here rather than deep inside a loop.
        t[0].checked_add(&t[1])?.checked_add(&t[2])?;
        Ok(t)
    }

    fn float_triple(&self) -> ([f64; 3], f64) {
        let tol = [&self.alpha, &self.beta, &self.gamma]
            .iter()
            .map(|p| match p {
                RealParam::Approx { tolerance, .. } => *tolerance,
                RealParam::Exact(_) => 0.0,
            })
            .fold(0.0, f64::max);
        ([self.alpha.to_f64(), self.beta.to_f64(), self.gamma.to_f64()], tol)
    }

    pub fn is_exact(&self) -> bool {
        self.alpha.is_exact() && self.beta.is_exact() && self.gamma.is_exact()
    }

    /// `alpha + beta + gamma`
    pub fn total(&self) -> RealParam {
        match self.exact_triple() {
            Ok([a, b, g]) => RealParam::Exact(a + b + g),
            Err(_) => {
                let ([a, b, g], tol) = self.float_triple();
                RealParam::Approx { value: a + b + g, tolerance: tol }
            }
        }
    }
}

/// Lower: `u_n = floor((n+1)a + x0) - floor(n a + x0)` on `[0,1)`.
/// Upper: the ceiling variant on `(0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mechanical {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Iet2Params {
    pub slope: RealParam,
    pub intercept: RealParam,
    pub kind: Mechanical,
}

impl Iet2Params {
    pub fn new(slope: RealParam, intercept: RealParam, kind: Mechanical) -> Result<Self, IetError> {
        let ok = match (&slope, &intercept) {
            (RealParam::Exact(a), RealParam::Exact(x)) => {
                let one = QuadReal::one();
                a.is_positive() && a < &one && !x.is_negative() && x <= &one
            }
            _ => {
                let (a, x) = (slope.to_f64(), intercept.to_f64());
                a > 0.0 && a < 1.0 && (0.0..=1.0).contains(&x)
            }
        };
        if !ok {
            return Err(IetError::BadTwoIet);
        }
        Ok(Self { slope, intercept, kind })
    }

    pub fn exact(slope: QuadReal, intercept: QuadReal, kind: Mechanical) -> Result<Self, IetError> {
        Self::new(slope.into(), intercept.into(), kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IetClass {
    Periodic { k: BigInt, l: BigInt },
    Degenerate { k: BigInt, l: BigInt },
    NonDegenerate,
}

impl IetClass {
    pub fn name(&self) -> &'static str {
        match self {
            IetClass::Periodic { .. } => "Periodic",
            IetClass::Degenerate { .. } => "Degenerate",
            IetClass::NonDegenerate => "NonDegenerate",
        }
    }

    pub fn witness(&self) -> Option<(&BigInt, &BigInt)> {
        match self {
            IetClass::Periodic { k, l } | IetClass::Degenerate { k, l } => Some((k, l)),
            IetClass::NonDegenerate => None,
        }
    }

    pub fn periodic(k: i64, l: i64) -> Self {
        IetClass::Periodic { k: k.into(), l: l.into() }
    }

    pub fn degenerate(k: i64, l: i64) -> Self {
        IetClass::Degenerate { k: k.into(), l: l.into() }
    }
}

/// JSON integer when it fits in `i64`, decimal string otherwise.
pub(crate) fn ser_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

impl Serialize for IetClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        #[derive(Serialize)]
        struct N<'a>(#[serde(serialize_with = "ser_bigint")] &'a BigInt);
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("class", self.name())?;
        if let Some((k, l)) = self.witness() {
            m.serialize_entry("K", &N(k))?;
            m.serialize_entry("L", &N(l))?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitWindow {
    pub word: PointedWord,
    /// `T^n(x0)` for `n` from the lowest index upward.
    pub points: Vec<RealParam>,
    /// Float membership decisions within tolerance of a cut point.
    pub ties: usize,
}

impl Serialize for PointedWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A 3iet over a concrete scalar type.
#[derive(Debug, Clone)]
pub(crate) struct Iet3<T: Scalar> {
    alpha: T,
    beta: T,
    gamma: T,
    closure: Closure,
    tol: f64,
}

impl<T: Scalar> Iet3<T> {
    pub(crate) fn new(alpha: T, beta: T, gamma: T, closure: Closure, tol: f64) -> Self {
        Self { alpha, beta, gamma, closure, tol }
    }

    /// Index of the piece of `[0, c1, c2, total]` holding `x`, and whether the
    /// decision was a float tie.
    fn locate(&self, x: &T, c1: &T, c2: &T, total: &T) -> Result<(usize, bool), IetError> {
        let zero = T::zero();
        if x.near(&zero, self.tol) {
            return Ok((0, true));
        }
        let mut tie = false;
        let mut below = |c: &T| -> bool {
            if x.near(c, self.tol) {
                tie = true;
                return true;
            }
            matches!((x.compare(c), self.closure), (Ordering::Less, _) | (Ordering::Equal, Closure::RightClosed))
        };
        let in_domain = match self.closure {
            Closure::LeftClosed => x.compare(&zero) != Ordering::Less,
            Closure::RightClosed => x.compare(&zero) == Ordering::Greater,
        };
        if !in_domain || !below(total) {
            return Err(IetError::OutOfDomain(format!("{x:?}")));
        }
        let idx = if below(c1) {
            0
        } else if below(c2) {
            1
        } else {
            2
        };
        Ok((idx, tie))
    }

    fn total(&self) -> T {
        self.alpha.plus(&self.beta).plus(&self.gamma)
    }

    pub(crate) fn letter(&self, x: &T) -> Result<(Letter, bool), IetError> {
        let ab = self.alpha.plus(&self.beta);
        let (i, tie) = self.locate(x, &self.alpha, &ab, &self.total())?;
        Ok((i as Letter, tie))
    }

    /// `(letter of x, T(x), tie)`
    pub(crate) fn step(&self, x: &T) -> Result<(Letter, T, bool), IetError> {
        let (l, tie) = self.letter(x)?;
        let y = match l {
            0 => x.plus(&self.beta).plus(&self.gamma),
            1 => x.minus(&self.alpha).plus(&self.gamma),
            _ => x.minus(&self.alpha).minus(&self.beta),
        };
        Ok((l, y, tie))
    }

    /// `(T^-1(x), letter of T^-1(x), tie)`
    pub(crate) fn step_back(&self, x: &T) -> Result<(T, Letter, bool), IetError> {
        let gb = self.gamma.plus(&self.beta);
        let (i, tie) = self.locate(x, &self.gamma, &gb, &self.total())?;
        Ok(match i {
            0 => (x.plus(&self.alpha).plus(&self.beta), 2, tie),
            1 => (x.plus(&self.alpha).minus(&self.gamma), 1, tie),
            _ => (x.minus(&self.beta).minus(&self.gamma), 0, tie),
        })
    }

    /// Orbit points and letters for indices `n_lo..=n_hi`.
    pub(crate) fn code(&self, x0: &T, n_lo: i64, n_hi: i64) -> Result<(Vec<Letter>, Vec<T>, usize), IetError> {
        if n_lo > 0 || n_hi < 0 {
            return Err(IetError::BadRange(n_lo, n_hi));
        }
        let back = n_lo.unsigned_abs() as usize;
        let mut ties = 0;
        let mut left_pts = Vec::with_capacity(back);
        let mut left_letters = Vec::with_capacity(back);
        let mut x = x0.clone();
        for _ in 0..back {
            let (y, l, tie) = self.step_back(&x)?;
            ties += tie as usize;
            left_letters.push(l);
            left_pts.push(y.clone());
            x = y;
        }
        left_letters.reverse();
        left_pts.reverse();
        let mut letters = left_letters;
        let mut pts = left_pts;
        let mut x = x0.clone();
        for n in 0..=n_hi {
            let (l, y, tie) = self.step(&x)?;
            ties += tie as usize;
            letters.push(l);
            pts.push(x);
            if n < n_hi {
                x = y;
            } else {
                break;
            }
        }
        Ok((letters, pts, ties))
    }
}

fn exact_iet(p: &Iet3Params) -> Result<Iet3<QuadReal>, IetError> {
    let [a, b, g] = p.exact_triple()?;
    Ok(Iet3::new(a, b, g, p.closure, 0.0))
}

fn float_iet(p: &Iet3Params) -> Iet3<f64> {
    let ([a, b, g], tol) = p.float_triple();
    Iet3::new(a, b, g, p.closure, tol)
}

fn float_of(x: &RealParam) -> (f64, f64) {
    match x {
        RealParam::Exact(q) => (q.to_f64(), 0.0),
        RealParam::Approx { value, tolerance } => (*value, *tolerance),
    }
}

/// `T(x)`.
pub fn t3_apply(p: &Iet3Params, x: &RealParam) -> Result<RealParam, IetError> {
    match (exact_iet(p), x) {
        (Ok(t), RealParam::Exact(q)) => {
            q.checked_add(&t.alpha)?;
            Ok(RealParam::Exact(t.step(q)?.1))
        }
        _ => {
            let (v, tol) = float_of(x);
            let mut t = float_iet(p);
            t.tol = t.tol.max(tol);
            Ok(RealParam::Approx { value: t.step(&v)?.1, tolerance: t.tol })
        }
    }
}

/// `T^-1(x)`.
pub fn t3_inverse(p: &Iet3Params, x: &RealParam) -> Result<RealParam, IetError> {
    match (exact_iet(p), x) {
        (Ok(t), RealParam::Exact(q)) => {
            q.checked_add(&t.alpha)?;
            Ok(RealParam::Exact(t.step_back(q)?.0))
        }
        _ => {
            let (v, tol) = float_of(x);
            let mut t = float_iet(p);
            t.tol = t.tol.max(tol);
            Ok(RealParam::Approx { value: t.step_back(&v)?.0, tolerance: t.tol })
        }
    }
}

/// Coding `u_{n_lo} ... u_{n_hi}` of the orbit of `x0` (both ends inclusive).
pub fn t3_code(p: &Iet3Params, x0: &RealParam, n_lo: i64, n_hi: i64) -> Result<OrbitWindow, IetError> {
    let origin = n_lo.unsigned_abs() as usize;
    match (exact_iet(p), x0) {
        (Ok(t), RealParam::Exact(q)) => {
            q.checked_add(&t.alpha)?;
            let (letters, pts) = exact_code(&t, q, n_lo, n_hi, true)?;
            Ok(OrbitWindow {
                word: PointedWord::new(Alphabet::Ternary, letters, origin),
                points: pts.into_iter().map(RealParam::Exact).collect(),
                ties: 0,
            })
        }
        _ => {
            let (v, tol) = float_of(x0);
            let mut t = float_iet(p);
            t.tol = t.tol.max(tol);
            let (letters, pts, ties) = t.code(&v, n_lo, n_hi)?;
            let tolerance = t.tol;
            Ok(OrbitWindow {
                word: PointedWord::new(Alphabet::Ternary, letters, origin),
                points: pts.into_iter().map(|value| RealParam::Approx { value, tolerance }).collect(),
                ties,
            })
        }
    }
}

/// Word only; same indexing as [`t3_code`].
pub fn t3_word(p: &Iet3Params, x0: &RealParam, n_lo: i64, n_hi: i64) -> Result<PointedWord, IetError> {
    match (exact_iet(p), x0) {
        (Ok(t), RealParam::Exact(q)) => {
            q.checked_add(&t.alpha)?;
            let (letters, _) = exact_code(&t, q, n_lo, n_hi, false)?;
            Ok(PointedWord::new(Alphabet::Ternary, letters, n_lo.unsigned_abs() as usize))
        }
        _ => Ok(t3_code(p, x0, n_lo, n_hi)?.word),
    }
}

/// Exact orbit coding, on machine integers over a common denominator when the
/// inputs allow it.
fn exact_code(
    t: &Iet3<QuadReal>,
    x0: &QuadReal,
    n_lo: i64,
    n_hi: i64,
    points: bool,
) -> Result<(Vec<Letter>, Vec<QuadReal>), IetError> {
    let inputs = [t.alpha.clone(), t.beta.clone(), t.gamma.clone(), x0.clone()];
    match ScaledQuad::from_quads(&inputs) {
        Some((v, den)) => {
            let fast = Iet3::new(v[0], v[1], v[2], t.closure, 0.0);
            let (letters, pts, _) = fast.code(&v[3], n_lo, n_hi)?;
            let pts = if points { pts.into_iter().map(|x| x.to_quad(&den)).collect() } else { Vec::new() };
            Ok((letters, pts))
        }
        None => {
            let (letters, pts, _) = t.code(x0, n_lo, n_hi)?;
            Ok((letters, pts))
        }
    }
}

/// Bounds of `T(I_C) < T(I_B) < T(I_A)` as exact intervals.
pub fn image_intervals(p: &Iet3Params) -> Result<[Interval; 3], IetError> {
    let [a, b, g] = p.exact_triple()?;
    let total = &(&a + &b) + &g;
    let (lc, hc) = match p.closure {
        Closure::LeftClosed => (true, false),
        Closure::RightClosed => (false, true),
    };
    let piece = |lo: QuadReal, hi: QuadReal| Interval::new(lo, hi, lc, hc);
    // Images are computed by translating the source intervals.
    let ia = piece(QuadReal::zero(), a.clone()).shift(&(&b + &g));
    let ib = piece(a.clone(), &a + &b).shift(&(&g - &a));
    let ic = piece(&a + &b, total).shift(&-(&a + &b));
    Ok([ic, ib, ia])
}

/// Whether consecutive image intervals abut and cover `[0, total)` exactly.
pub fn images_tile_domain(p: &Iet3Params) -> Result<bool, IetError> {
    let iv = image_intervals(p)?;
    let [a, b, g] = p.exact_triple()?;
    let total = a + b + g;
    Ok(iv[0].lo.is_zero() && iv[2].hi == total && iv.windows(2).all(|w| w[0].hi == w[1].lo))
}

/// Step of the 2iet on `[0,1)` (lower) or `(0,1]` (upper): returns
/// `(letter, T(x))`.
fn t2_step<T: UnitScalar>(x: &T, slope: &T, kind: Mechanical) -> (Letter, T) {
    let one = T::one();
    let cut = one.minus(slope);
    let zero_letter = match kind {
        Mechanical::Lower => x.compare(&cut) == Ordering::Less,
        Mechanical::Upper => x.compare(&cut) != Ordering::Greater,
    };
    if zero_letter {
        (0, x.plus(slope))
    } else {
        (1, x.plus(slope).minus(&one))
    }
}

/// `(T^-1(x), letter of T^-1(x))`
fn t2_step_back<T: UnitScalar>(x: &T, slope: &T, kind: Mechanical) -> (T, Letter) {
    let came_from_zero = match kind {
        Mechanical::Lower => x.compare(slope) != Ordering::Less,
        Mechanical::Upper => x.compare(slope) == Ordering::Greater,
    };
    if came_from_zero {
        (x.minus(slope), 0)
    } else {
        (x.minus(slope).plus(&T::one()), 1)
    }
}

fn t2_generic<T: UnitScalar>(x0: T, slope: &T, kind: Mechanical, n_lo: i64, n_hi: i64) -> Vec<Letter> {
    let mut left = Vec::new();
    let mut x = x0.clone();
    for _ in n_lo..0 {
        let (y, l) = t2_step_back(&x, slope, kind);
        left.push(l);
        x = y;
    }
    left.reverse();
    let mut x = x0;
    for n in 0..=n_hi {
        let (l, y) = t2_step(&x, slope, kind);
        left.push(l);
        if n < n_hi {
            x = y;
        }
    }
    left
}

/// Mechanical word `u_{n_lo} ... u_{n_hi}` (both ends inclusive).
pub fn t2_code(p: &Iet2Params, n_lo: i64, n_hi: i64) -> Result<PointedWord, IetError> {
    if n_lo > 0 || n_hi < 0 {
        return Err(IetError::BadRange(n_lo, n_hi));
    }
    let origin = n_lo.unsigned_abs() as usize;
    let letters = match (&p.slope, &p.intercept) {
        (RealParam::Exact(a), RealParam::Exact(x)) => {
            // Move the intercept into the kind's domain.
            let x = match p.kind {
                Mechanical::Lower => x.fract(),
                Mechanical::Upper => {
                    let f = x.fract();
                    if f.is_zero() {
                        QuadReal::one()
                    } else {
                        f
                    }
                }
            };
            t2_generic(x, a, p.kind, n_lo, n_hi)
        }
        _ => {
            let x = p.intercept.to_f64().rem_euclid(1.0);
            let x = if p.kind == Mechanical::Upper && x == 0.0 { 1.0 } else { x };
            t2_generic(x, &p.slope.to_f64(), p.kind, n_lo, n_hi)
        }
    };
    Ok(PointedWord::new(Alphabet::Binary, letters, origin))
}

/// Image under `A -> 0, B -> 01, C -> 1`.
pub fn sigma_project(w: &PointedWord) -> Result<PointedWord, WordError> {
    if w.alphabet() != Alphabet::Ternary {
        return Err(WordError::AlphabetMismatch { expected: Alphabet::Ternary, found: w.alphabet() });
    }
    let img = |ls: &[Letter]| -> Vec<Letter> {
        ls.iter()
            .flat_map(|&l| match l {
                0 => &[0u8][..],
                1 => &[0u8, 1][..],
                _ => &[1u8][..],
            })
            .copied()
            .collect()
    };
    let (left, right) = w.letters().split_at(w.origin());
    let mut letters = img(left);
    let origin = letters.len();
    letters.extend(img(right));
    Ok(PointedWord::new(Alphabet::Binary, letters, origin))
}

/// The 2iet whose coding of `x0/(alpha+2beta+gamma)` is the projection of the
/// 3iet coding of `x0`.
pub fn sigma_two_iet(p: &Iet3Params, x0: &QuadReal) -> Result<Iet2Params, IetError> {
    let [a, b, g] = p.exact_triple()?;
    let norm = &(&a + &(&b * &QuadReal::from_int(2))) + &g;
    let kind = match p.closure {
        Closure::LeftClosed => Mechanical::Lower,
        Closure::RightClosed => Mechanical::Upper,
    };
    Iet2Params::exact(&(&b + &g) / &norm, x0 / &norm, kind)
}

/// Exact classification by the integer relations
/// `K(a+b) + L(b+g) = 0` (periodic) or `= a+b+g` (degenerate).
pub fn classify(p: &Iet3Params) -> Result<IetClass, IetError> {
    let [a, b, g] = p.exact_triple()?;
    Ok(classify_triple(&a, &b, &g))
}

pub fn classify_triple(a: &QuadReal, b: &QuadReal, g: &QuadReal) -> IetClass {
    let s1 = a + b;
    let s2 = b + g;
    let t = &s1 + g;
    let (p1, q1) = s1.rational_decompose();
    let (p2, q2) = s2.rational_decompose();
    let det = &p1 * &q2 - &p2 * &q1;
    if det.is_zero() {
        // s1 / s2 is a positive rational m/n.
        let r = (&s1 / &s2).rational_decompose().0;
        let (m, n) = (r.numer().clone(), r.denom().clone());
        return IetClass::Periodic { k: n, l: -m };
    }
    let (pt, qt) = t.rational_decompose();
    let k = (&pt * &q2 - &p2 * &qt) / &det;
    let l = (&p1 * &qt - &pt * &q1) / &det;
    if k.is_integer() && l.is_integer() {
        IetClass::Degenerate { k: k.to_integer(), l: l.to_integer() }
    } else {
        IetClass::NonDegenerate
    }
}

/// Aperiodic parameters give minimal transformations.
pub fn is_minimal(p: &Iet3Params) -> Result<bool, IetError> {
    Ok(!matches!(classify(p)?, IetClass::Periodic { .. }))
}

/// Checks a classification witness by direct substitution.
pub fn witness_holds(a: &QuadReal, b: &QuadReal, g: &QuadReal, class: &IetClass) -> bool {
    let combo = |k: &BigInt, l: &BigInt| {
        let k = QuadReal::from_bigint(k.clone());
        let l = QuadReal::from_bigint(l.clone());
        &(&(&k * a) + &(&(&k + &l) * b)) + &(&l * g)
    };
    match class {
        IetClass::Periodic { k, l } => !k.is_zero() && !l.is_zero() && combo(k, l).is_zero(),
        IetClass::Degenerate { k, l } => combo(k, l) == &(a + b) + g,
        IetClass::NonDegenerate => true,
    }
}

/// Smallest period of a finite letter sequence.
pub fn smallest_period(w: &[Letter]) -> usize {
    (1..=w.len()).find(|&p| w.iter().zip(&w[p..]).all(|(x, y)| x == y)).unwrap_or(w.len())
}

/// First return index of an exact orbit to its start, if any within `max`.
pub fn orbit_cycle_length(p: &Iet3Params, x0: &QuadReal, max: usize) -> Result<Option<usize>, IetError> {
    let t = exact_iet(p)?;
    let mut x = x0.clone();
    for n in 1..=max {
        x = t.step(&x)?.1;
        if &x == x0 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `gcd`-normalized integer vector; helper for witness output.
pub fn primitive_pair(k: &BigInt, l: &BigInt) -> (BigInt, BigInt) {
    let g = k.gcd(l);
    if g.is_zero() {
        return (k.clone(), l.clone());
    }
    let (mut k, mut l) = (k / &g, l / &g);
    if k.is_negative() {
        k = -k;
        l = -l;
    }
    (k, l)
}

/// `Rational` as an exact parameter.
pub fn rational_param(r: Rational) -> RealParam {
    RealParam::Exact(QuadReal::from_rational(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rat;
    use crate::words::{complexity_profile, factors, Language};

    fn q(n: i64) -> QuadReal {
        QuadReal::from_int(n)
    }
    fn s2() -> QuadReal {
        QuadReal::sqrt(2)
    }
    fn ex(x: QuadReal) -> RealParam {
        RealParam::Exact(x)
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn machine_integer_path_matches_rationals_random(
            c in proptest::array::uniform3((1i64..20, 0i64..6, 1i64..9)),
            t in 0i64..100,
            right in proptest::bool::ANY,
        ) {
            let p: Vec<QuadReal> = c.iter().map(|&(a, b, d)| QuadReal::frac(a, d) + QuadReal::frac(b, d) * s2()).collect();
            let closure = if right { Closure::RightClosed } else { Closure::LeftClosed };
            let total = &(&p[0] + &p[1]) + &p[2];
            let x0 = &total * &QuadReal::frac(t + i64::from(right), 100 + i64::from(right));
            let slow = Iet3::new(p[0].clone(), p[1].clone(), p[2].clone(), closure, 0.0);
            let (letters, _, _) = slow.code(&x0, -100, 100).unwrap();
            let params = Iet3Params::exact(p[0].clone(), p[1].clone(), p[2].clone()).unwrap().with_closure(closure);
            let w = t3_word(&params, &ex(x0), -100, 100).unwrap();
            proptest::prop_assert_eq!(w.letters(), &letters[..]);
        }
    }

    #[test]
    fn machine_integer_path_matches_rationals() {
        let cases = [
            ([q(1), s2(), s2()], QuadReal::frac(1, 3), Closure::LeftClosed),
            ([QuadReal::frac(3, 7), s2() / q(5), q(2) - s2()], s2() / q(9), Closure::RightClosed),
            ([q(1), q(2), q(3)], q(0), Closure::LeftClosed),
            ([q(1), s2(), q(2)], q(1), Closure::RightClosed),
        ];
        for (p, x0, closure) in cases {
            let slow = Iet3::new(p[0].clone(), p[1].clone(), p[2].clone(), closure, 0.0);
            let (letters, pts, _) = slow.code(&x0, -500, 500).unwrap();
            let params = Iet3Params::exact(p[0].clone(), p[1].clone(), p[2].clone()).unwrap().with_closure(closure);
            let fast = t3_code(&params, &ex(x0.clone()), -500, 500).unwrap();
            assert_eq!(fast.word.letters(), &letters[..]);
            assert_eq!(fast.points, pts.into_iter().map(RealParam::Exact).collect::<Vec<_>>());
            assert_eq!(t3_word(&params, &ex(x0), -500, 500).unwrap(), fast.word);
        }
    }
    fn p(a: QuadReal, b: QuadReal, g: QuadReal) -> Iet3Params {
        Iet3Params::exact(a, b, g).unwrap()
    }

    #[test]
    fn apply_examples() {
        let pp = p(q(1), s2(), q(2));
        assert_eq!(t3_apply(&pp, &ex(q(0))).unwrap(), ex(s2() + q(2)));
        assert_eq!(t3_apply(&pp, &ex(q(1))).unwrap(), ex(q(2)));
        let ones = p(q(1), q(1), q(1));
        assert_eq!(t3_apply(&ones, &ex(QuadReal::frac(5, 2))).unwrap(), ex(QuadReal::frac(1, 2)));
        assert!(matches!(t3_apply(&pp, &ex(q(-1))), Err(IetError::OutOfDomain(_))));
        assert!(matches!(t3_apply(&pp, &ex(q(3) + s2())), Err(IetError::OutOfDomain(_))));
        let rc = pp.clone().with_closure(Closure::RightClosed);
        assert!(matches!(t3_apply(&rc, &ex(q(0))), Err(IetError::OutOfDomain(_))));
        // alpha belongs to I_A under the right-closed convention
        assert_eq!(t3_apply(&rc, &ex(q(1))).unwrap(), ex(q(1) + s2() + q(2)));
    }

    #[test]
    fn inverse_examples() {
        let pp = p(q(1), s2(), q(2));
        assert_eq!(t3_inverse(&pp, &ex(q(1))).unwrap(), ex(q(2) + s2()));
        assert_eq!(t3_inverse(&pp, &ex(q(2) + s2() / q(2))).unwrap(), ex(q(1) + s2() / q(2)));
    }

    #[test]
    fn float_path_marks_ties() {
        let pp = Iet3Params::new(
            RealParam::Approx { value: 1.0, tolerance: 1e-12 },
            RealParam::Approx { value: 1.0, tolerance: 1e-12 },
            RealParam::Approx { value: 1.0, tolerance: 1e-12 },
            Closure::LeftClosed,
        )
        .unwrap();
        let w = t3_code(&pp, &RealParam::Approx { value: 1.0 + 1e-14, tolerance: 0.0 }, 0, 0).unwrap();
        assert_eq!(w.ties, 1);
        assert_eq!(w.word.letters(), &[0]);
        assert_eq!(classify(&pp), Err(IetError::Field(QfieldError::ExactnessRequired)));
    }

    #[test]
    fn code_matches_cap_formula() {
        // Letters from the point formula floor(c+n eps)+n eta gaps: eta->A,
        // 1+2eta->B, 1+eta->C, with eta=1.
        let (a, b, g) = (q(1), s2(), s2());
        let norm = &(&a + &(&b * &q(2))) + &g;
        let eps = &(&b + &g) / &norm;
        let l = &(&(&a + &b) + &g) / &norm;
        let mut pts = Vec::new();
        for n in -40i64..200 {
            let y = &eps * &q(n);
            let (fl, fr) = y.floor_frac();
            if fr < l {
                pts.push(QuadReal::from_bigint(fl) + q(n));
            }
        }
        pts.sort();
        let start = pts.iter().position(QuadReal::is_zero).unwrap();
        let letters: Vec<Letter> = pts[start..start + 6]
            .windows(2)
            .map(|w| {
                let gap = &w[1] - &w[0];
                if gap == q(1) {
                    0
                } else if gap == q(3) {
                    1
                } else {
                    assert_eq!(gap, q(2));
                    2
                }
            })
            .collect();
        let w = t3_word(&p(a, b, g), &ex(q(0)), 0, 4).unwrap();
        assert_eq!(w.letters(), &letters[..]);
    }

    #[test]
    fn periodic_word_period_divides_cycle() {
        let pp = p(q(1), q(2), q(3));
        let cycle = orbit_cycle_length(&pp, &q(0), 100).unwrap().unwrap();
        let w = t3_word(&pp, &ex(q(0)), 0, 3 * cycle as i64).unwrap();
        assert_eq!(cycle % smallest_period(w.letters()), 0);
        let single = t3_word(&pp, &ex(q(5)), 0, 0).unwrap();
        assert_eq!(single.letters(), &[2]);
    }

    #[test]
    fn t2_examples() {
        let a = s2() - q(1);
        let w = t2_code(&Iet2Params::exact(a.clone(), q(0), Mechanical::Lower).unwrap(), 0, 10).unwrap();
        let direct: Vec<Letter> =
            (0..=10).map(|n| ((&a * &q(n + 1)).floor() - (&a * &q(n)).floor()).to_u8().unwrap()).collect();
        assert_eq!(w.letters(), &direct[..]);
        let third = t2_code(&Iet2Params::exact(QuadReal::frac(1, 3), q(0), Mechanical::Lower).unwrap(), 0, 8).unwrap();
        assert_eq!(third.to_string(), "|001001001");
        // The two kinds differ only where the orbit hits a cut point.
        let up = t2_code(&Iet2Params::exact(QuadReal::frac(1, 3), q(0), Mechanical::Upper).unwrap(), -3, 8).unwrap();
        let lo = t2_code(&Iet2Params::exact(QuadReal::frac(1, 3), q(0), Mechanical::Lower).unwrap(), -3, 8).unwrap();
        assert_ne!(up, lo);
        let ceil: Vec<Letter> = (-3..=8)
            .map(|n| ((QuadReal::frac(n + 1, 3)).ceil() - (QuadReal::frac(n, 3)).ceil()).to_u8().unwrap())
            .collect();
        assert_eq!(up.letters(), &ceil[..]);
        let a_up = t2_code(&Iet2Params::exact(a.clone(), QuadReal::frac(1, 7), Mechanical::Upper).unwrap(), -30, 30).unwrap();
        let a_lo = t2_code(&Iet2Params::exact(a, QuadReal::frac(1, 7), Mechanical::Lower).unwrap(), -30, 30).unwrap();
        assert_eq!(a_up, a_lo);
    }

    #[test]
    fn sigma_examples() {
        let w: PointedWord = "|ABC".parse().unwrap();
        assert_eq!(sigma_project(&w).unwrap().to_string(), "|0011");
        let empty = PointedWord::right_only(Alphabet::Ternary, vec![]);
        assert!(sigma_project(&empty).unwrap().is_empty());
        assert!(sigma_project(&"|01".parse().unwrap()).is_err());

        let pp = p(q(1), s2(), s2());
        let x0 = QuadReal::frac(1, 2);
        let w = t3_word(&pp, &ex(x0.clone()), -200, 799).unwrap();
        let proj = sigma_project(&w).unwrap();
        let s = sigma_two_iet(&pp, &x0).unwrap();
        let left = proj.origin() as i64;
        let right = (proj.len() - proj.origin()) as i64;
        assert_eq!(t2_code(&s, -left, right - 1).unwrap(), proj);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&p(q(1), s2(), q(2))).unwrap(), IetClass::degenerate(-1, 2));
        assert_eq!(classify(&p(q(1), s2(), s2())).unwrap(), IetClass::NonDegenerate);
        assert_eq!(classify(&p(q(1), q(2), q(3))).unwrap(), IetClass::periodic(5, -3));
        assert!(is_minimal(&p(q(1), s2(), s2())).unwrap());
        assert!(!is_minimal(&p(q(1), q(2), q(3))).unwrap());
        assert!(is_minimal(&p(q(1), s2(), q(2))).unwrap());
        // irrational but dependent sums
        assert!(matches!(classify(&p(s2(), s2(), s2())).unwrap(), IetClass::Periodic { .. }));
        let mixed = p(q(1), s2(), QuadReal::sqrt(3));
        assert!(matches!(classify(&mixed), Err(IetError::Field(QfieldError::IncompatibleField(..)))));
    }

    /// Independent search for the witnesses over a small box.
    fn brute_force(a: &QuadReal, b: &QuadReal, g: &QuadReal) -> IetClass {
        let box_ = -10i64..=10;
        for k in box_.clone() {
            for l in box_.clone() {
                let c = IetClass::periodic(k, l);
                if k != 0 && l != 0 && witness_holds(a, b, g, &c) {
                    return c;
                }
            }
        }
        for k in box_.clone() {
            for l in box_.clone() {
                let c = IetClass::degenerate(k, l);
                if witness_holds(a, b, g, &c) {
                    return c;
                }
            }
        }
        IetClass::NonDegenerate
    }

    #[test]
    fn classify_agrees_with_brute_force() {
        let cases = [(q(1), s2(), q(2)), (q(1), s2(), s2()), (q(1), q(2), q(3))];
        for (a, b, g) in cases {
            let fast = classify_triple(&a, &b, &g);
            let slow = brute_force(&a, &b, &g);
            match (&fast, &slow) {
                (IetClass::Periodic { k, l }, IetClass::Periodic { k: k2, l: l2 }) => {
                    assert_eq!(primitive_pair(k, l), primitive_pair(k2, l2))
                }
                _ => assert_eq!(fast, slow),
            }
        }
    }

    #[test]
    fn image_intervals_tile() {
        for pp in [p(q(1), s2(), q(2)), p(q(1), q(1), q(1)), p(q(1), s2(), s2()).with_closure(Closure::RightClosed)] {
            assert!(images_tile_domain(&pp).unwrap());
        }
    }

    #[test]
    fn degenerate_complexity_is_n_plus_const() {
        let w = t3_word(&p(q(1), s2(), q(2)), &ex(q(0)), 0, 30_000).unwrap();
        let c = complexity_profile(&w, 30).unwrap();
        let d: Vec<i64> = (20..=30).map(|n| c[n - 1] as i64 - n as i64).collect();
        assert!(d.windows(2).all(|x| x[0] == x[1]), "{c:?}");
    }

    #[test]
    fn language_independent_of_intercept() {
        let pp = p(q(1), s2(), s2());
        let u = t3_word(&pp, &ex(q(0)), 0, 60_000).unwrap();
        let v = t3_word(&pp, &ex(QuadReal::frac(7, 5)), 0, 60_000).unwrap();
        for n in [1, 5, 12, 20] {
            assert_eq!(factors(&u, n).unwrap(), factors(&v, n).unwrap());
        }
        let rc = t3_word(&pp.clone().with_closure(Closure::RightClosed), &ex(QuadReal::frac(7, 5)), 0, 60_000).unwrap();
        let lang = Language::from_word(&u, 20).unwrap();
        assert!(crate::words::is_factor_subset(&rc, &lang, 20).unwrap().contained);
        let _ = rat(1, 2);
    }
}
