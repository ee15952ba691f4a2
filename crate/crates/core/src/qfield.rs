//! Exact arithmetic in `Q` and real quadratic fields `Q(sqrt d)`.
//!
//! A [`QuadReal`] stores `a + b*sqrt(d)` with rational `a`, `b` and a
//! squarefree `d >= 2`. Rationals carry the sentinel `d = 0` and are
//! compatible with every field; two irrational values with different `d`
//! cannot be combined. Operator impls panic on such a mix, the `checked_*`
//! methods report it as [`QfieldError::IncompatibleField`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QfieldError {
    #[error("incompatible quadratic fields Q(sqrt {0}) and Q(sqrt {1})")]
    IncompatibleField(u64, u64),
    #[error("division by zero")]
    DivByZero,
    #[error("parameter is approximate; an exact value is required")]
    ExactnessRequired,
}

/// Exact real number `a + b*sqrt(d)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadReal {
    a: Rational,
    b: Rational,
    d: u64,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Splits `n` into `(f, s)` with `n = f^2 * s` and `s` squarefree.
fn squarefree_split(mut n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 0);
    }
    let mut f = 1u64;
    let mut s = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
        p += 1;
    }
    (f, s * n)
}

fn unify(d1: u64, d2: u64) -> Result<u64, QfieldError> {
    match (d1, d2) {
        (0, d) | (d, 0) => Ok(d),
        (x, y) if x == y => Ok(x),
        (x, y) => Err(QfieldError::IncompatibleField(x, y)),
    }
}

/// Exact sign of `a + b*sqrt(d)`.
fn sign_parts(a: &Rational, b: &Rational, d: u64) -> i8 {
    let sa = signum(a);
    let sb = if d == 0 { 0 } else { signum(b) };
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // Opposite signs: compare a^2 against b^2 d. Equality would make sqrt(d)
    // rational, which a squarefree d >= 2 rules out.
    let lhs = a * a;
    let rhs = b * b * int(d as i64);
    if lhs > rhs {
        sa
    } else {
        sb
    }
}

fn signum(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl QuadReal {
    /// The value `a + b*sqrt(d)` for any `d >= 0`; square factors of `d` are
    /// pulled into `b`, and perfect squares collapse to a rational.
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        let (f, s) = squarefree_split(d);
        if s <= 1 || b.is_zero() {
            let extra = if s == 1 { b * int(f as i64) } else { Rational::zero() };
            return Self::from_rational(a + extra);
        }
        Self { a, b: b * int(f as i64), d: s }
    }

    pub fn from_rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// `sqrt(n)`, exact.
    pub fn sqrt(n: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), n)
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Radicand, or `None` for a rational value.
    pub fn field(&self) -> Option<u64> {
        (self.d != 0).then_some(self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.a.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.d == 0 && self.a.is_integer()
    }

    fn build(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            Self::from_rational(a)
        } else {
            Self { a, b, d }
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, QfieldError> {
        let d = unify(self.d, o.d)?;
        Ok(Self::build(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, QfieldError> {
        let d = unify(self.d, o.d)?;
        Ok(Self::build(&self.a - &o.a, &self.b - &o.b, d))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, QfieldError> {
        let d = unify(self.d, o.d)?;
        if d == 0 {
            return Ok(Self::from_rational(&self.a * &o.a));
        }
        let a = &self.a * &o.a + &self.b * &o.b * int(d as i64);
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::build(a, b, d))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, QfieldError> {
        unify(self.d, o.d)?;
        let inv = o.inverse().ok_or(QfieldError::DivByZero)?;
        self.checked_mul(&inv)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.d == 0 {
            return Some(Self::from_rational(self.a.recip()));
        }
        let n = self.norm();
        Some(Self::build(&self.a / &n, -(&self.b / &n), self.d))
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        Self::build(self.a.clone(), -self.b.clone(), self.d)
    }

    /// Field norm `x * conj(x) = a^2 - b^2 d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * int(self.d as i64)
    }

    /// Returns `(a, b)` with `x = a + b*sqrt(d)`.
    pub fn rational_decompose(&self) -> (Rational, Rational) {
        (self.a.clone(), self.b.clone())
    }

    /// Exact sign in `{-1, 0, 1}`, computed without floating point.
    pub fn sign(&self) -> i8 {
        sign_parts(&self.a, &self.b, self.d)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Sign of `self - k` for an integer `k`.
    fn cmp_integer(&self, k: &BigInt) -> Ordering {
        let a = &self.a - Rational::from_integer(k.clone());
        match sign_parts(&a, &self.b, self.d) {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// `floor(x)`. The float estimate only seeds a galloping search; every
    /// decision is an exact sign test.
    pub fn floor(&self) -> BigInt {
        if self.d == 0 {
            return self.a.floor().to_integer();
        }
        let est = self.to_f64();
        let mut lo = if est.is_finite() {
            BigInt::from_f64(est.floor()).unwrap_or_else(|| self.a.floor().to_integer())
        } else {
            self.a.floor().to_integer()
        };
        let mut step = BigInt::one();
        while self.cmp_integer(&lo) == Ordering::Less {
            lo -= &step;
            step <<= 1;
        }
        let mut hi = &lo + BigInt::one();
        step = BigInt::one();
        while self.cmp_integer(&hi) != Ordering::Less {
            lo = hi.clone();
            hi += &step;
            step <<= 1;
        }
        // Invariant: lo <= x < hi.
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            if self.cmp_integer(&mid) == Ordering::Less {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `(floor(x), x - floor(x))`, the fractional part lying in `[0, 1)`.
    pub fn floor_frac(&self) -> (BigInt, QuadReal) {
        let k = self.floor();
        let f = self - &QuadReal::from_bigint(k.clone());
        (k, f)
    }

    pub fn fract(&self) -> QuadReal {
        self.floor_frac().1
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.d == 0 {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    pub fn pow(&self, e: u32) -> QuadReal {
        let mut acc = QuadReal::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> QuadReal {
        Self::build(&self.a * r, &self.b * r, self.d)
    }

    /// Total order for values in a shared field.
    pub fn checked_cmp(&self, o: &Self) -> Result<Ordering, QfieldError> {
        let diff = self.checked_sub(o)?;
        Ok(diff.sign().cmp(&0))
    }

    pub fn min(self, o: Self) -> Self {
        if self <= o {
            self
        } else {
            o
        }
    }

    pub fn max(self, o: Self) -> Self {
        if self >= o {
            self
        } else {
            o
        }
    }
}

/// Field arithmetic dispatched by operator name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(x: &QuadReal, y: &QuadReal, op: ArithOp) -> Result<QuadReal, QfieldError> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadReal> for &QuadReal {
            type Output = QuadReal;
            fn $method(self, rhs: &QuadReal) -> QuadReal {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $method(self, rhs: QuadReal) -> QuadReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $method(self, rhs: &QuadReal) -> QuadReal {
                (&self).$method(rhs)
            }
        }
        impl $tr<QuadReal> for &QuadReal {
            type Output = QuadReal;
            fn $method(self, rhs: QuadReal) -> QuadReal {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        QuadReal::build(-self.a.clone(), -self.b.clone(), self.d)
    }
}

impl Neg for QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        -&self
    }
}

impl PartialOrd for QuadReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.checked_cmp(other).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl From<i64> for QuadReal {
    fn from(n: i64) -> Self {
        QuadReal::from_int(n)
    }
}

impl From<Rational> for QuadReal {
    fn from(r: Rational) -> Self {
        QuadReal::from_rational(r)
    }
}

impl From<BigInt> for QuadReal {
    fn from(n: BigInt) -> Self {
        QuadReal::from_bigint(n)
    }
}

impl fmt::Display for QuadReal {
    /// Canonical text, parseable by [`crate::parse::parse_quad`]:
    /// `3/2`, `sqrt(5)`, `1/2-3/4*sqrt(5)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.b.is_one() {
            write!(f, "sqrt({})", self.d)
        } else if (-&self.b).is_one() {
            write!(f, "-sqrt({})", self.d)
        } else {
            write!(f, "{}*sqrt({})", self.b, self.d)
        }
    }
}

impl fmt::Debug for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for QuadReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuadReal", 3)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("d", &self.d)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QuadReal {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: String,
            b: String,
            d: u64,
        }
        let raw = Raw::deserialize(de)?;
        let a: Rational = raw.a.parse().map_err(de::Error::custom)?;
        let b: Rational = raw.b.parse().map_err(de::Error::custom)?;
        Ok(QuadReal::new(a, b, raw.d))
    }
}

/// A parameter value: exact, or a float with the tolerance it was given at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RealParam {
    Exact(QuadReal),
    Approx { value: f64, tolerance: f64 },
}

impl RealParam {
    pub fn exact(&self) -> Result<&QuadReal, QfieldError> {
        match self {
            RealParam::Exact(q) => Ok(q),
            RealParam::Approx { .. } => Err(QfieldError::ExactnessRequired),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RealParam::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealParam::Exact(q) => q.to_f64(),
            RealParam::Approx { value, .. } => *value,
        }
    }
}

impl From<QuadReal> for RealParam {
    fn from(q: QuadReal) -> Self {
        RealParam::Exact(q)
    }
}

/// Ordered-field operations shared by the exact and the float code paths.
pub trait Scalar: Clone + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn compare(&self, o: &Self) -> Ordering;
    /// Whether two values are within `tol` of each other; always false for
    /// exact values.
    fn near(&self, o: &Self, tol: f64) -> bool;
    fn approx(&self) -> f64;
}

/// Scalars with a multiplicative unit.
pub trait UnitScalar: Scalar {
    fn one() -> Self;
}

impl UnitScalar for QuadReal {
    fn one() -> Self {
        QuadReal::one()
    }
}

impl UnitScalar for f64 {
    fn one() -> Self {
        1.0
    }
}

impl Scalar for QuadReal {
    fn zero() -> Self {
        QuadReal::zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn compare(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn near(&self, _: &Self, _: f64) -> bool {
        false
    }
    fn approx(&self) -> f64 {
        self.to_f64()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn compare(&self, o: &Self) -> Ordering {
        self.total_cmp(o)
    }
    fn near(&self, o: &Self, tol: f64) -> bool {
        (self - o).abs() <= tol
    }
    fn approx(&self) -> f64 {
        *self
    }
}

/// `(p + q sqrt d) / D` over a denominator `D` shared by every value in one
/// computation, with machine integers. Only sums and differences of values
/// built by one [`ScaledQuad::from_quads`] call may be mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaledQuad {
    p: i128,
    q: i128,
    d: u64,
}

/// Magnitude cap on scaled inputs; keeps sums of many steps far from overflow.
const SCALED_CAP: u128 = 1 << 60;

impl ScaledQuad {
    /// Common-denominator image of `xs`, or `None` if the fields differ or a
    /// numerator exceeds `2^60`.
    pub fn from_quads(xs: &[QuadReal]) -> Option<(Vec<ScaledQuad>, BigInt)> {
        let mut d = 0;
        for x in xs {
            match (d, x.d) {
                (_, 0) => {}
                (0, e) => d = e,
                (a, e) if a != e => return None,
                _ => {}
            }
        }
        let den = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.a.denom()).lcm(x.b.denom()));
        let scale = |r: &Rational| -> Option<i128> {
            let n = r.numer() * (&den / r.denom());
            n.to_i128().filter(|v| v.unsigned_abs() < SCALED_CAP)
        };
        let out = xs.iter().map(|x| Some(ScaledQuad { p: scale(&x.a)?, q: scale(&x.b)?, d })).collect::<Option<_>>()?;
        Some((out, den))
    }

    pub fn to_quad(self, den: &BigInt) -> QuadReal {
        let r = |n: i128| Rational::new(BigInt::from(n), den.clone());
        QuadReal::new(r(self.p), r(self.q), self.d)
    }

    fn sign(self) -> Ordering {
        let (p, q) = (self.p, self.q);
        let sp = p.cmp(&0);
        let sq = q.cmp(&0);
        if self.d == 0 || sq == Ordering::Equal || sp == sq {
            return if sp == Ordering::Equal { sq } else { sp };
        }
        if sp == Ordering::Equal {
            return sq;
        }
        // opposite signs: compare p^2 with q^2 d
        let lhs = p.checked_mul(p);
        let rhs = q.checked_mul(q).and_then(|v| v.checked_mul(self.d as i128));
        let mag = match (lhs, rhs) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => {
                let (bp, bq) = (BigInt::from(p), BigInt::from(q));
                (&bp * &bp).cmp(&(&bq * &bq * BigInt::from(self.d)))
            }
        };
        if sp == Ordering::Greater {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl Scalar for ScaledQuad {
    fn zero() -> Self {
        ScaledQuad { p: 0, q: 0, d: 0 }
    }
    fn plus(&self, o: &Self) -> Self {
        ScaledQuad { p: self.p + o.p, q: self.q + o.q, d: self.d.max(o.d) }
    }
    fn minus(&self, o: &Self) -> Self {
        ScaledQuad { p: self.p - o.p, q: self.q - o.q, d: self.d.max(o.d) }
    }
    fn compare(&self, o: &Self) -> Ordering {
        self.minus(o).sign()
    }
    fn near(&self, _: &Self, _: f64) -> bool {
        false
    }
    fn approx(&self) -> f64 {
        self.p as f64 + self.q as f64 * (self.d as f64).sqrt()
    }
}

/// Bounded real interval with explicit endpoint closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: QuadReal,
    pub hi: QuadReal,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: QuadReal, hi: QuadReal, lo_closed: bool, hi_closed: bool) -> Self {
        Self { lo, hi, lo_closed, hi_closed }
    }

    /// `(lo, hi]`
    pub fn left_open(lo: QuadReal, hi: QuadReal) -> Self {
        Self::new(lo, hi, false, true)
    }

    /// `[lo, hi)`
    pub fn right_open(lo: QuadReal, hi: QuadReal) -> Self {
        Self::new(lo, hi, true, false)
    }

    pub fn closed(lo: QuadReal, hi: QuadReal) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn contains(&self, x: &QuadReal) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        above
            && match x.cmp(&self.hi) {
                Ordering::Less => true,
                Ordering::Equal => self.hi_closed,
                Ordering::Greater => false,
            }
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Greater => true,
        }
    }

    pub fn length(&self) -> QuadReal {
        &self.hi - &self.lo
    }

    /// `s * I`; a negative factor flips the interval and its closure flags.
    pub fn scale(&self, s: &QuadReal) -> Interval {
        match s.sign() {
            1 => Interval::new(s * &self.lo, s * &self.hi, self.lo_closed, self.hi_closed),
            -1 => Interval::new(s * &self.hi, s * &self.lo, self.hi_closed, self.lo_closed),
            _ => Interval::closed(QuadReal::zero(), QuadReal::zero()),
        }
    }

    pub fn shift(&self, t: &QuadReal) -> Interval {
        Interval::new(&self.lo + t, &self.hi + t, self.lo_closed, self.hi_closed)
    }

    /// Intersection; may be empty.
    pub fn intersect(&self, o: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&o.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (o.lo.clone(), o.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && o.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&o.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (o.hi.clone(), o.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && o.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// Smallest and largest integers in the interval, if any.
    pub fn integer_range(&self) -> Option<(BigInt, BigInt)> {
        let first = if self.lo_closed { self.lo.ceil() } else { self.lo.floor() + 1 };
        let last = if self.hi_closed { self.hi.floor() } else { self.hi.ceil() - 1 };
        (first <= last).then_some((first, last))
    }

    pub fn count_integers(&self) -> BigInt {
        match self.integer_range() {
            Some((a, b)) => b - a + 1,
            None => BigInt::zero(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}
