//! Integer 3x3 matrix predicates: the `M E M^T = ±E` condition, the left
//! eigenvector and row-sum identities, the invariant lattice of the plane
//! `x1 - x2 + x3 = 0`, and enumeration of the monoid `E(3,N)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::iet::ser_bigint;
use crate::morphism::{char_poly, IntMatrix};
use crate::qfield::QuadReal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("entry bound {0} exceeds the enumeration cap {1}")]
    BoundTooLarge(u32, u32),
    #[error("matrix is not in the class: {0}")]
    NotInClass(String),
    #[error("expected a 3x3 matrix, got {0}x{0}")]
    Dimension(usize),
}

pub const ENUMERATION_CAP: u32 = 6;

/// `E = [[0,1,1],[-1,0,1],[-1,-1,0]]`
pub fn e_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[0, 1, 1], [-1, 0, 1], [-1, -1, 0]])
}

fn require3(m: &IntMatrix) -> Result<(), MonoidError> {
    if m.dim() == 3 {
        Ok(())
    } else {
        Err(MonoidError::Dimension(m.dim()))
    }
}

/// `s` with `M J M^T = s J`, if any.
pub fn form_sign(m: &IntMatrix, j: &IntMatrix) -> Option<i8> {
    let p = m.mul(j).mul(&m.transpose());
    if &p == j {
        Some(1)
    } else if p == j.neg() {
        Some(-1)
    } else {
        None
    }
}

pub fn symplectic_like_check(m: &IntMatrix) -> Option<i8> {
    if m.dim() != 3 {
        return None;
    }
    form_sign(m, &e_matrix())
}

pub fn det3(m: &IntMatrix) -> BigInt {
    m.det()
}

const W: [i64; 3] = [1, -1, 1];

fn w() -> Vec<BigInt> {
    W.iter().map(|&x| BigInt::from(x)).collect()
}

/// `mu` with `(1,-1,1) M = mu (1,-1,1)`, if `(1,-1,1)` is a left eigenvector.
pub fn left_eigenvalue(m: &IntMatrix) -> Option<BigInt> {
    let row = m.left_mul(&w());
    let mu = row[0].clone();
    (row[1] == -&mu && row[2] == mu).then_some(mu)
}

/// `(1,-1,1) M = ±det M (1,-1,1)`.
pub fn left_eigen_check(m: &IntMatrix) -> bool {
    let det = m.det();
    left_eigenvalue(m).is_some_and(|mu| mu.abs() == det.abs())
}

/// Row sums of rows 1 and 3 minus that of row 2 equal `±det M`.
pub fn row_sum_check(m: &IntMatrix) -> bool {
    let s: Vec<BigInt> = (0..3).map(|i| m.row(i).iter().sum()).collect();
    let diff = &s[0] + &s[2] - &s[1];
    diff.abs() == m.det().abs()
}

fn in_plane(v: &[BigInt]) -> bool {
    (&v[0] - &v[1] + &v[2]).is_zero()
}

/// Coordinates of `M x1`, `M x2` in the basis `x1=(1,1,0)`, `x2=(0,1,1)`,
/// as columns.
pub fn restricted_matrix(m: &IntMatrix) -> [[BigInt; 2]; 2] {
    let g = |i, j| m.get(i, j).clone();
    [[g(0, 0) + g(0, 1), g(0, 1) + g(0, 2)], [g(2, 0) + g(2, 1), g(2, 1) + g(2, 2)]]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeChecks {
    pub subspace_ok: bool,
    pub basis_ok: bool,
    pub translate_ok: bool,
    /// Determinant of the restriction to the plane, when it is `±1`.
    pub delta: Option<i8>,
}

impl LatticeChecks {
    pub fn all(&self) -> bool {
        self.subspace_ok && self.basis_ok && self.translate_ok
    }
}

pub fn lattice_checks(m: &IntMatrix) -> LatticeChecks {
    let x1 = [1, 1, 0].map(BigInt::from);
    let x2 = [0, 1, 1].map(BigInt::from);
    let subspace_ok = in_plane(&m.right_mul(&x1)) && in_plane(&m.right_mul(&x2));
    let r = restricted_matrix(m);
    let d = &r[0][0] * &r[1][1] - &r[0][1] * &r[1][0];
    let delta = if subspace_ok { d.to_i8().filter(|x| x.abs() == 1) } else { None };
    let translate_ok = delta.is_some_and(|delta| {
        let shift = m.det() * BigInt::from(delta);
        let v: Vec<BigInt> = m.right_mul(&[1, 1, 1].map(BigInt::from)).into_iter().map(|x| x - &shift).collect();
        in_plane(&v)
    });
    LatticeChecks { subspace_ok, basis_ok: delta.is_some(), translate_ok, delta }
}

pub fn e3n_membership(m: &IntMatrix) -> bool {
    m.dim() == 3 && m.is_nonnegative() && symplectic_like_check(m).is_some() && m.det().abs().is_one()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixReport {
    pub matrix: IntMatrix,
    #[serde(serialize_with = "ser_bigint")]
    pub det: BigInt,
    pub symplectic_sign: Option<i8>,
    pub delta: Option<i8>,
    pub left_eigen_ok: bool,
    pub row_sum_ok: bool,
    pub lattice: LatticeChecks,
    pub lattice_ok: bool,
    pub e3n_member: bool,
}

pub fn matrix_report(m: &IntMatrix) -> Result<MatrixReport, MonoidError> {
    require3(m)?;
    let lattice = lattice_checks(m);
    Ok(MatrixReport {
        matrix: m.clone(),
        det: m.det(),
        symplectic_sign: symplectic_like_check(m),
        delta: lattice.delta,
        left_eigen_ok: left_eigen_check(m),
        row_sum_ok: row_sum_check(m),
        lattice_ok: lattice.all(),
        lattice,
        e3n_member: e3n_membership(m),
    })
}

fn matrix_from(rows: [[i64; 3]; 3]) -> IntMatrix {
    IntMatrix::from_rows(&rows)
}

/// Members of `E(3,N)` with entries `<= bound`, sorted lexicographically.
/// Rows 1 and 3 are free; row 2 is `row1 + row3 - s(1,-1,1)` for `s = ±1`.
pub fn enumerate_e3n(bound: u32) -> Result<Vec<IntMatrix>, MonoidError> {
    if bound > ENUMERATION_CAP {
        return Err(MonoidError::BoundTooLarge(bound, ENUMERATION_CAP));
    }
    let b = bound as i64;
    let mut out: Vec<IntMatrix> = (0..=b)
        .into_par_iter()
        .flat_map_iter(|a0| {
            let mut found = Vec::new();
            for a1 in 0..=b {
                for a2 in 0..=b {
                    for c0 in 0..=b {
                        for c1 in 0..=b {
                            for c2 in 0..=b {
                                for s in [-1i64, 1] {
                                    let r2 = [a0 + c0 - s, a1 + c1 + s, a2 + c2 - s];
                                    if r2.iter().any(|&x| x < 0 || x > b) {
                                        continue;
                                    }
                                    let m = matrix_from([[a0, a1, a2], r2, [c0, c1, c2]]);
                                    if e3n_membership(&m) {
                                        found.push(m);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            found
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// All nine entries free; oracle for [`enumerate_e3n`].
pub fn enumerate_e3n_naive(bound: u32) -> Vec<IntMatrix> {
    let b = bound as i64 + 1;
    let total = b.pow(9);
    let mut out: Vec<IntMatrix> = (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut e = [0i64; 9];
            for x in e.iter_mut() {
                *x = code % b;
                code /= b;
            }
            let m = matrix_from([[e[0], e[1], e[2]], [e[3], e[4], e[5]], [e[6], e[7], e[8]]]);
            e3n_membership(&m).then_some(m)
        })
        .collect();
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    /// Eigenvalue belonging to the left eigenvector `(1,-1,1)`.
    #[serde(serialize_with = "ser_bigint")]
    pub mu: BigInt,
    /// Quadratic factor `x^2 - t x + q`.
    #[serde(serialize_with = "ser_bigint")]
    pub t: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub q: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub discriminant: BigInt,
    /// Larger root of the quadratic factor when the discriminant is positive.
    pub perron: Option<QuadReal>,
    pub eigenvalues: Vec<QuadReal>,
}

/// Splits the characteristic polynomial as `(x - mu)(x^2 - t x + q)`.
pub fn spectrum_report(m: &IntMatrix) -> Result<SpectrumReport, MonoidError> {
    require3(m)?;
    if !left_eigen_check(m) {
        return Err(MonoidError::NotInClass("(1,-1,1) is not a left eigenvector with eigenvalue ±det".into()));
    }
    let mu = left_eigenvalue(m).expect("checked above");
    let c = char_poly(m);
    let b1 = &c[1] + &mu;
    let b2 = &c[2] + &mu * &b1;
    if !(&c[3] + &mu * &b2).is_zero() {
        return Err(MonoidError::NotInClass("characteristic polynomial does not split off x - mu".into()));
    }
    let t = -b1;
    let q = b2;
    if !q.abs().is_one() {
        return Err(MonoidError::NotInClass(format!("quadratic factor has constant term {q}")));
    }
    let disc = &t * &t - BigInt::from(4) * &q;
    let mut eigenvalues = vec![QuadReal::from_bigint(mu.clone())];
    let perron = if disc.is_negative() {
        None
    } else {
        let d = disc.to_u64().ok_or_else(|| MonoidError::NotInClass("discriminant too large".into()))?;
        let half = QuadReal::frac(1, 2);
        let tq = QuadReal::from_bigint(t.clone());
        let r = QuadReal::sqrt(d);
        let big = &(&tq + &r) * &half;
        let small = &(&tq - &r) * &half;
        eigenvalues.push(big.clone());
        eigenvalues.push(small);
        (disc.is_positive()).then_some(big)
    };
    Ok(SpectrumReport { mu, t, q, discriminant: disc, perron, eigenvalues })
}

/// Integers `(K1, L1)` with `M(1,1,1)^T = M(K1, K1+L1, L1)^T`, for `det M = 0`
/// matrices satisfying the lattice conditions.
pub fn degeneracy_transport_check(m: &IntMatrix) -> Result<(BigInt, BigInt), MonoidError> {
    require3(m)?;
    let lat = lattice_checks(m);
    if !m.det().is_zero() || !lat.all() {
        return Err(MonoidError::NotInClass("requires det 0 and the lattice conditions".into()));
    }
    let v = m.right_mul(&[1, 1, 1].map(BigInt::from));
    let r = restricted_matrix(m);
    let delta = BigInt::from(lat.delta.expect("basis_ok"));
    // inverse of a determinant-delta 2x2 matrix
    let k1 = (&r[1][1] * &v[0] - &r[0][1] * &v[2]) * &delta;
    let l1 = (&r[0][0] * &v[2] - &r[1][0] * &v[0]) * &delta;
    let check = m.right_mul(&[k1.clone(), &k1 + &l1, l1.clone()]);
    if check != v {
        return Err(MonoidError::NotInClass("no lattice witness".into()));
    }
    Ok((k1, l1))
}

/// Class predicate without the nonnegativity and determinant conditions.
pub fn satisfies_form(m: &IntMatrix) -> bool {
    symplectic_like_check(m).is_some()
}
