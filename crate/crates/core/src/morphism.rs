//! Non-erasing morphisms over `{A,B,C}` or `{0,1}`, their incidence
//! matrices, density transport and fixed-point windows.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qfield::{QuadReal, Rational};
use crate::words::{Alphabet, Letter, PointedWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("image of {0} is empty; erasing morphisms are not supported")]
    Erasing(char),
    #[error("alphabet mismatch: morphism over {expected}, word over {found}")]
    AlphabetMismatch { expected: Alphabet, found: Alphabet },
    #[error("density transport has a zero denominator")]
    DegenerateTransport,
    #[error("seed {0} is not a fixed-point seed: {1}")]
    NotAFixedPointSeed(String, &'static str),
    #[error("cannot parse morphism: {0}")]
    Parse(String),
    #[error("cannot parse matrix: {0}")]
    MatrixParse(String),
    #[error("dominant eigenvector does not lie in a quadratic field")]
    FieldMismatch,
}

/// Square matrix with arbitrary-precision integer entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

/// Incidence matrices are 3x3 for ternary morphisms (2x2 for binary ones).
pub type Mat3 = IntMatrix;

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        Self { n: self.n, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// Exact determinant by cofactor expansion (intended for n <= 4).
    pub fn det(&self) -> BigInt {
        fn minor_det(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = BigInt::zero();
            for (k, &c) in cols.iter().enumerate() {
                let e = m.get(rows[0], c);
                if e.is_zero() {
                    continue;
                }
                let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let t = e * minor_det(m, &rows[1..], &sub);
                if k % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            acc
        }
        let idx: Vec<usize> = (0..self.n).collect();
        if self.n == 0 {
            return BigInt::one();
        }
        minor_det(self, &idx, &idx)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|x| x.is_positive())
    }

    /// Row vector times matrix, `v M`.
    pub fn left_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| &v[i] * self.get(i, j)).sum())
            .collect()
    }

    /// Matrix times column vector, `M v`.
    pub fn right_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    /// `r1c1,r1c2,...;r2c1,...`, the `--matrix` syntax of the CLI.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for IntMatrix {
    type Err = MorphismError;

    fn from_str(s: &str) -> Result<Self, MorphismError> {
        let rows: Vec<Vec<BigInt>> = s
            .trim()
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| x.trim().parse::<BigInt>().map_err(|e| MorphismError::MatrixParse(format!("{x:?}: {e}"))))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(MorphismError::MatrixParse(format!("{s:?} is not square")));
        }
        Ok(IntMatrix { n, data: rows.into_iter().flatten().collect() })
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.n).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }
}

/// A letter-to-word map; every image is nonempty.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    alphabet: Alphabet,
    images: Vec<Vec<Letter>>,
}

impl Morphism {
    pub fn new(alphabet: Alphabet, images: Vec<Vec<Letter>>) -> Result<Self, MorphismError> {
        if images.len() != alphabet.size() {
            return Err(MorphismError::Parse(format!(
                "{} images given for an alphabet of {} letters",
                images.len(),
                alphabet.size()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(MorphismError::Erasing(alphabet.symbol(i as Letter)));
            }
            if img.iter().any(|&l| l as usize >= alphabet.size()) {
                return Err(MorphismError::Parse(format!("image of letter {i} leaves {alphabet}")));
            }
        }
        Ok(Self { alphabet, images })
    }

    /// Images given as strings in alphabet order, e.g. `["AC", "BC", "C"]`.
    pub fn from_images(alphabet: Alphabet, images: &[&str]) -> Result<Self, MorphismError> {
        let imgs = images
            .iter()
            .map(|s| {
                s.chars()
                    .map(|c| alphabet.letter(c).ok_or_else(|| MorphismError::Parse(format!("symbol {c:?}"))))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Self::new(alphabet, imgs)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self { alphabet, images: alphabet.letters().map(|l| vec![l]).collect() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn image(&self, l: Letter) -> &[Letter] {
        &self.images[l as usize]
    }

    pub fn images(&self) -> &[Vec<Letter>] {
        &self.images
    }

    /// Image of a finite word.
    pub fn apply_finite(&self, w: &[Letter]) -> Vec<Letter> {
        w.iter().flat_map(|&l| self.images[l as usize].iter().copied()).collect()
    }

    /// Row `i` counts the letters of the image of letter `i`.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let n = self.alphabet.size();
        let mut m = IntMatrix::zeros(n);
        for (i, img) in self.images.iter().enumerate() {
            for &l in img {
                m.data[i * n + l as usize] += 1;
            }
        }
        m
    }

    /// `... phi(u_-1) | phi(u_0) phi(u_1) ...`
    pub fn apply(&self, w: &PointedWord) -> Result<PointedWord, MorphismError> {
        if w.alphabet() != self.alphabet {
            return Err(MorphismError::AlphabetMismatch { expected: self.alphabet, found: w.alphabet() });
        }
        let (left, right) = w.letters().split_at(w.origin());
        let mut letters = self.apply_finite(left);
        let origin = letters.len();
        letters.extend(self.apply_finite(right));
        Ok(PointedWord::new(self.alphabet, letters, origin))
    }

    /// `self ∘ other`: first `other`, then `self`. Its incidence matrix is
    /// `M_other * M_self`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism, MorphismError> {
        if self.alphabet != other.alphabet {
            return Err(MorphismError::AlphabetMismatch { expected: self.alphabet, found: other.alphabet });
        }
        Ok(Morphism {
            alphabet: self.alphabet,
            images: other.images.iter().map(|img| self.apply_finite(img)).collect(),
        })
    }

    pub fn power(&self, p: u32) -> Morphism {
        let mut acc = Morphism::identity(self.alphabet);
        for _ in 0..p {
            acc = self.compose(&acc).expect("same alphabet");
        }
        acc
    }

    /// Smallest `k <= 2 n^2` with `M^k > 0`.
    pub fn primitivity(&self) -> Primitivity {
        primitivity(&self.incidence_matrix())
    }

    pub fn is_primitive(&self) -> bool {
        self.primitivity().primitive
    }
}

impl fmt::Display for Morphism {
    /// `A->AC;B->BC;C->C`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{}->{}", self.alphabet.symbol(i as Letter), self.alphabet.render(img))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({self})")
    }
}

impl FromStr for Morphism {
    type Err = MorphismError;

    /// Parses `A->AC;B->BC;C->C` (rules in any order, every letter once).
    fn from_str(s: &str) -> Result<Self, MorphismError> {
        let rules: Vec<(&str, &str)> = s
            .split(';')
            .filter(|r| !r.trim().is_empty())
            .map(|r| r.split_once("->").map(|(a, b)| (a.trim(), b.trim())))
            .collect::<Option<_>>()
            .ok_or_else(|| MorphismError::Parse(format!("{s:?}: expected rules like A->AC")))?;
        let first = rules
            .first()
            .and_then(|(a, _)| a.chars().next())
            .ok_or_else(|| MorphismError::Parse("no rules".into()))?;
        let alphabet = Alphabet::of_symbol(first).ok_or_else(|| MorphismError::Parse(format!("symbol {first:?}")))?;
        let mut images: Vec<Option<&str>> = vec![None; alphabet.size()];
        for (src, img) in rules {
            let mut chars = src.chars();
            let l = match (chars.next().and_then(|c| alphabet.letter(c)), chars.next()) {
                (Some(l), None) => l,
                _ => return Err(MorphismError::Parse(format!("bad source letter {src:?}"))),
            };
            if images[l as usize].replace(img).is_some() {
                return Err(MorphismError::Parse(format!("letter {src} given twice")));
            }
        }
        let images: Vec<&str> = images
            .into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| MorphismError::Parse(format!("no rule for {}", alphabet.symbol(i as Letter)))))
            .collect::<Result<_, _>>()?;
        Morphism::from_images(alphabet, &images)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Primitivity {
    pub primitive: bool,
    /// Smallest power with all entries positive.
    pub power: Option<u32>,
}

pub fn primitivity(m: &IntMatrix) -> Primitivity {
    let bound = 2 * (m.dim() * m.dim()) as u32;
    // Only the zero pattern matters; track it as booleans.
    let n = m.dim();
    let base: Vec<bool> = m.entries().iter().map(|x| x.is_positive()).collect();
    let mut cur = base.clone();
    for k in 1..=bound {
        if cur.iter().all(|&x| x) {
            return Primitivity { primitive: true, power: Some(k) };
        }
        let mut next = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                next[i * n + j] = (0..n).any(|t| cur[i * n + t] && base[t * n + j]);
            }
        }
        cur = next;
    }
    Primitivity { primitive: false, power: None }
}

/// Normalized left action `rho M / (rho M 1)`.
pub fn density_transport(m: &IntMatrix, rho: &[QuadReal]) -> Result<Vec<QuadReal>, MorphismError> {
    let n = m.dim();
    let raw: Vec<QuadReal> = (0..n)
        .map(|j| {
            (0..n).fold(QuadReal::zero(), |acc, i| acc + &rho[i] * &QuadReal::from_bigint(m.get(i, j).clone()))
        })
        .collect();
    let total = raw.iter().fold(QuadReal::zero(), |acc, x| acc + x);
    if total.is_zero() {
        return Err(MorphismError::DegenerateTransport);
    }
    Ok(raw.iter().map(|x| x / &total).collect())
}

/// Rational densities embedded in the exact number type.
pub fn densities_as_quad(rho: &[Rational]) -> Vec<QuadReal> {
    rho.iter().cloned().map(QuadReal::from_rational).collect()
}

const MAX_ITERATIONS: usize = 200;

/// Window of `lim phi^n(seed_left) | phi^n(seed_right)` whose sides are at
/// least `min_len` long.
pub fn fixed_point_window(
    m: &Morphism,
    seed_left: Letter,
    seed_right: Letter,
    min_len: usize,
) -> Result<PointedWord, MorphismError> {
    let a = m.alphabet();
    let seed = format!("{}|{}", a.symbol(seed_left), a.symbol(seed_right));
    if m.image(seed_right).first() != Some(&seed_right) {
        return Err(MorphismError::NotAFixedPointSeed(seed, "image of the right seed does not start with it"));
    }
    if m.image(seed_left).last() != Some(&seed_left) {
        return Err(MorphismError::NotAFixedPointSeed(seed, "image of the left seed does not end with it"));
    }
    let mut right = vec![seed_right];
    let mut left = vec![seed_left];
    for _ in 0..MAX_ITERATIONS {
        if right.len() >= min_len && left.len() >= min_len {
            return Ok(PointedWord::from_parts(a, &left.iter().rev().copied().collect::<Vec<_>>(), &right));
        }
        let nr = m.apply_finite(&right);
        let nl = m.apply_finite(&left);
        if (nr.len() == right.len() && right.len() < min_len) || (nl.len() == left.len() && left.len() < min_len) {
            return Err(MorphismError::NotAFixedPointSeed(seed, "iterates stop growing"));
        }
        right = nr;
        left = nl;
    }
    Err(MorphismError::NotAFixedPointSeed(seed, "iterates stop growing"))
}

/// Pairs `(p, left, right)` with `p <= max_power` for which `phi^p` admits the
/// seed `left|right`, in increasing `p` then seed order.
pub fn fixed_point_seeds(m: &Morphism, max_power: u32) -> Vec<(u32, Letter, Letter)> {
    let mut out = Vec::new();
    for p in 1..=max_power {
        let mp = m.power(p);
        for l in m.alphabet().letters() {
            for r in m.alphabet().letters() {
                let grows = mp.image(l).len() > 1 && mp.image(r).len() > 1;
                if grows && mp.image(r).first() == Some(&r) && mp.image(l).last() == Some(&l) {
                    out.push((p, l, r));
                }
            }
        }
    }
    out
}

/// Dominant eigenvalue of a nonnegative integer matrix together with positive
/// left and right eigenvectors, when the eigenvalue is at most quadratic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerronData {
    pub lambda: QuadReal,
    pub right: Vec<QuadReal>,
    pub left: Vec<QuadReal>,
}

/// Characteristic polynomial coefficients, highest degree first:
/// `x^n + c[1] x^(n-1) + ... + c[n]`.
pub fn char_poly(m: &IntMatrix) -> Vec<BigInt> {
    match m.dim() {
        1 => vec![BigInt::one(), -m.get(0, 0).clone()],
        2 => vec![BigInt::one(), -m.trace(), m.det()],
        3 => {
            let minors: BigInt = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| m.get(i, i) * m.get(j, j) - m.get(i, j) * m.get(j, i))
                .sum();
            vec![BigInt::one(), -m.trace(), minors, -m.det()]
        }
        n => panic!("characteristic polynomial implemented for n <= 3, got {n}"),
    }
}

fn eval_poly(c: &[BigInt], x: &Rational) -> Rational {
    c.iter().fold(Rational::zero(), |acc, k| acc * x + Rational::from_integer(k.clone()))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs().to_u64().unwrap_or(0);
    if n == 0 {
        return vec![BigInt::zero()];
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(BigInt::from(d));
            out.push(BigInt::from(n / d));
        }
        d += 1;
    }
    out
}

/// Real roots of a monic integer polynomial of degree <= 3 that split over a
/// single quadratic field; `None` if an irreducible cubic remains.
pub fn quadratic_roots(c: &[BigInt]) -> Option<Vec<QuadReal>> {
    match c.len() - 1 {
        1 => Some(vec![QuadReal::from_bigint(-c[1].clone())]),
        2 => {
            let t = -c[1].clone();
            let q = c[2].clone();
            let disc = &t * &t - BigInt::from(4) * &q;
            if disc.is_negative() {
                return Some(Vec::new());
            }
            let disc_u = disc.to_u64()?;
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            let center = QuadReal::from_rational(Rational::from_integer(t) * &half);
            let r = QuadReal::new(Rational::zero(), half, disc_u);
            Some(vec![&center + &r, &center - &r])
        }
        3 => {
            let last = &c[3];
            let mut candidates = divisors(last);
            candidates.extend(candidates.clone().into_iter().map(|x| -x));
            let root = candidates.into_iter().find(|r| eval_poly(c, &Rational::from_integer(r.clone())).is_zero())?;
            // synthetic division by (x - root)
            let b1 = &c[1] + &root;
            let b2 = &c[2] + &root * &b1;
            let mut rest = quadratic_roots(&[BigInt::one(), b1, b2])?;
            rest.push(QuadReal::from_bigint(root));
            let fields: Vec<u64> = rest.iter().filter_map(QuadReal::field).collect();
            fields.windows(2).all(|w| w[0] == w[1]).then_some(rest)
        }
        _ => None,
    }
}

fn kernel_vector(rows: &[Vec<QuadReal>]) -> Option<Vec<QuadReal>> {
    let n = rows.len();
    if n == 2 {
        // (a b) x = 0  ->  x = (b, -a)
        for r in rows {
            if !(r[0].is_zero() && r[1].is_zero()) {
                return Some(vec![r[1].clone(), -&r[0]]);
            }
        }
        return None;
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&rows[i], &rows[j]);
            let v = vec![
                &a[1] * &b[2] - &a[2] * &b[1],
                &a[2] * &b[0] - &a[0] * &b[2],
                &a[0] * &b[1] - &a[1] * &b[0],
            ];
            if v.iter().any(|x| !x.is_zero()) {
                return Some(v);
            }
        }
    }
    None
}

fn normalize_positive(v: Vec<QuadReal>) -> Option<Vec<QuadReal>> {
    let pivot = v.iter().find(|x| !x.is_zero())?.clone();
    let out: Vec<QuadReal> = v.iter().map(|x| x / &pivot).collect();
    out.iter().all(QuadReal::is_positive).then_some(out)
}

/// Perron eigenvalue and eigenvectors scaled to first component 1.
pub fn perron_data(m: &IntMatrix) -> Result<PerronData, MorphismError> {
    let roots = quadratic_roots(&char_poly(m)).ok_or(MorphismError::FieldMismatch)?;
    let lambda = roots.into_iter().max().ok_or(MorphismError::FieldMismatch)?;
    let n = m.dim();
    let shifted = |transpose: bool| -> Vec<Vec<QuadReal>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = if transpose { m.get(j, i) } else { m.get(i, j) };
                        let mut x = QuadReal::from_bigint(e.clone());
                        if i == j {
                            x = x - &lambda;
                        }
                        x
                    })
                    .collect()
            })
            .collect()
    };
    let right = kernel_vector(&shifted(false)).and_then(normalize_positive).ok_or(MorphismError::FieldMismatch)?;
    let left = kernel_vector(&shifted(true)).and_then(normalize_positive).ok_or(MorphismError::FieldMismatch)?;
    Ok(PerronData { lambda, right, left })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rat;

    pub(crate) fn phi() -> Morphism {
        "A->AC;B->BC;C->C".parse().unwrap()
    }
    fn xi() -> Morphism {
        "A->C;B->B;C->A".parse().unwrap()
    }
    fn phi0() -> Morphism {
        "A->B;B->BCB;C->CAC".parse().unwrap()
    }

    #[test]
    fn incidence_examples() {
        assert_eq!(phi().incidence_matrix(), IntMatrix::from_rows(&[[1, 0, 1], [0, 1, 1], [0, 0, 1]]));
        assert_eq!(xi().incidence_matrix(), IntMatrix::from_rows(&[[0, 0, 1], [0, 1, 0], [1, 0, 0]]));
        let m0 = phi0().incidence_matrix();
        assert_eq!(m0, IntMatrix::from_rows(&[[0, 1, 0], [0, 2, 1], [1, 0, 2]]));
        assert_eq!(m0.det(), BigInt::from(1));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(phi().to_string(), "A->AC;B->BC;C->C");
        assert_eq!("C->A;A->C;B->B".parse::<Morphism>().unwrap(), xi());
        assert_eq!("A->;B->B;C->C".parse::<Morphism>(), Err(MorphismError::Erasing('A')));
        assert!("A->AB;B->B".parse::<Morphism>().is_err());
        assert!("A->AD;B->B;C->C".parse::<Morphism>().is_err());
        let fib: Morphism = "0->10;1->110".parse().unwrap();
        assert_eq!(fib.alphabet(), Alphabet::Binary);
    }

    #[test]
    fn apply_examples() {
        let w: PointedWord = "CAB|ACBAC".parse().unwrap();
        assert_eq!(Morphism::identity(Alphabet::Ternary).apply(&w).unwrap(), w);
        let sigma = Morphism::new(Alphabet::Ternary, vec![vec![0], vec![0, 1], vec![1]]).unwrap();
        // sigma maps into {0,1} letters but is declared ternary here; check
        // the pointed concatenation only.
        let out = sigma.apply(&"B|A".parse().unwrap()).unwrap();
        assert_eq!(out.letters(), &[0, 1, 0]);
        assert_eq!(out.origin(), 2);
        let counts = phi().apply(&w).unwrap().parikh();
        let expected = phi().incidence_matrix().left_mul(&w.parikh().iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
        assert_eq!(counts.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(), expected);
        let bin: PointedWord = "01|10".parse().unwrap();
        assert!(matches!(phi().apply(&bin), Err(MorphismError::AlphabetMismatch { .. })));
    }

    #[test]
    fn compose_matrix_identity() {
        assert_eq!(phi().compose(&Morphism::identity(Alphabet::Ternary)).unwrap(), phi());
        let sq = phi0().compose(&phi0()).unwrap();
        assert_eq!(sq.incidence_matrix(), phi0().incidence_matrix().pow(2));
        let c = phi().compose(&phi0()).unwrap();
        assert_eq!(c.incidence_matrix(), phi0().incidence_matrix().mul(&phi().incidence_matrix()));
    }

    #[test]
    fn primitivity_examples() {
        assert_eq!(phi0().primitivity(), Primitivity { primitive: true, power: Some(3) });
        assert!(!phi().is_primitive());
        assert!(!Morphism::identity(Alphabet::Ternary).is_primitive());
    }

    #[test]
    fn transport_identity_and_eigenvector() {
        let rho = vec![QuadReal::frac(1, 2), QuadReal::frac(1, 3), QuadReal::frac(1, 6)];
        assert_eq!(density_transport(&IntMatrix::identity(3), &rho).unwrap(), rho);

        let tau = (QuadReal::one() + QuadReal::sqrt(5)) / QuadReal::from_int(2);
        let v = [QuadReal::one(), tau.clone(), &tau * &tau];
        let total = v.iter().fold(QuadReal::zero(), |a, x| a + x);
        let rho: Vec<QuadReal> = v.iter().map(|x| x / &total).collect();
        assert_eq!(density_transport(&phi0().incidence_matrix(), &rho).unwrap(), rho);

        // (gamma, alpha + 2 beta, beta + 2 gamma) = Lambda (alpha, beta, gamma)
        let big = (QuadReal::from_int(3) + QuadReal::sqrt(5)) / QuadReal::from_int(2);
        let image = [v[2].clone(), &v[0] + &(&v[1] * &QuadReal::from_int(2)), &v[1] + &(&v[2] * &QuadReal::from_int(2))];
        for (x, y) in image.iter().zip(&v) {
            assert_eq!(x, &(&big * y));
        }

        let zero_rho = vec![QuadReal::zero(); 3];
        assert_eq!(density_transport(&IntMatrix::identity(3), &zero_rho), Err(MorphismError::DegenerateTransport));
    }

    #[test]
    fn fixed_point_examples() {
        let fib: Morphism = "0->10;1->110".parse().unwrap();
        let w = fixed_point_window(&fib, 0, 1, 40).unwrap();
        assert_eq!(&w.right()[..3], &[1, 1, 0]);
        // phi(w) agrees with w on the overlap
        let img = fib.apply(&w).unwrap();
        for i in w.lo()..w.hi() {
            assert_eq!(img.get(i), w.get(i));
        }
        assert!(matches!(fixed_point_window(&phi(), 0, 0, 10), Err(MorphismError::NotAFixedPointSeed(..))));
        assert!(matches!(
            fixed_point_window(&Morphism::identity(Alphabet::Ternary), 0, 0, 10),
            Err(MorphismError::NotAFixedPointSeed(..))
        ));
        let cube = phi0().power(3);
        let seeds = fixed_point_seeds(&cube, 1);
        assert!(!seeds.is_empty());
        let (_, l, r) = seeds[0];
        assert!(fixed_point_window(&cube, l, r, 100).is_ok());
    }

    #[test]
    fn perron_examples() {
        let fib: Morphism = "0->10;1->110".parse().unwrap();
        let pd = perron_data(&fib.incidence_matrix()).unwrap();
        let tau = (QuadReal::one() + QuadReal::sqrt(5)) / QuadReal::from_int(2);
        assert_eq!(pd.lambda, &tau * &tau);
        assert_eq!(pd.right, vec![QuadReal::one(), tau.clone()]);

        let pd0 = perron_data(&phi0().incidence_matrix()).unwrap();
        assert_eq!(pd0.lambda, &tau * &tau);
        assert_eq!(pd0.left, vec![QuadReal::one(), tau.clone(), &tau * &tau]);
        assert_eq!(pd0.right, vec![QuadReal::one(), &tau * &tau, tau.clone()]);
        let _ = rat(1, 1);
    }

    #[test]
    fn matrix_parse_display() {
        let m: IntMatrix = "0,2,1;2,3,5;3,0,5".parse().unwrap();
        assert_eq!(m.to_string(), "0,2,1;2,3,5;3,0,5");
        assert_eq!(m.det(), BigInt::from(1));
        assert!("1,2;3".parse::<IntMatrix>().is_err());
    }
}
