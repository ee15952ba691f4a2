//! Empirical harness for morphisms preserving 3iet words: parameter
//! transport, factor containment against the predicted language, the
//! degeneracy dichotomy by determinant, and fixed points of primitive
//! morphisms.
//!
//! Verdicts are `Falsified` or `Consistent` only; no run decides that a
//! morphism is preserving.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::iet::{classify, classify_triple, sigma_project, t2_code, t3_word, IetClass, IetError, Iet2Params, Iet3Params, Mechanical};
use crate::monoid::{degeneracy_transport_check, matrix_report, symplectic_like_check, MatrixReport, MonoidError};
use crate::morphism::{fixed_point_seeds, fixed_point_window, perron_data, IntMatrix, Morphism, MorphismError};
use crate::qfield::{QuadReal, RealParam};
use crate::words::{balance_defect, complexity_profile, is_factor_subset, Alphabet, Language, PointedWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreserveError {
    #[error("transported parameters leave the positive cone: {0}")]
    TransportOutOfCone(String),
    #[error("matrix is not in the class: {0}")]
    NotInClass(String),
    #[error("no fixed-point seed for powers up to {0}")]
    NoFixedPointFound(u32),
    #[error("expected a morphism on {{A,B,C}}")]
    NotTernary,
    #[error("morphism is not primitive")]
    NotPrimitive,
    #[error(transparent)]
    Iet(#[from] IetError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// Language windows are this many times the checked factor length.
pub const LANGUAGE_FACTOR: usize = 3000;
/// Doublings of the language window while its complexity is short of `2n+1`.
const LANGUAGE_DOUBLINGS: u32 = 4;
const MAX_FIXED_POWER: u32 = 9;

/// `(α, β, γ) M`, unnormalized.
pub fn predicted_params(m: &IntMatrix, p: &[QuadReal; 3]) -> Result<[QuadReal; 3], PreserveError> {
    if m.dim() != 3 {
        return Err(PreserveError::NotTernary);
    }
    let out: [QuadReal; 3] = std::array::from_fn(|j| {
        (0..3).fold(QuadReal::zero(), |acc, i| acc + &p[i] * &QuadReal::from_bigint(m.get(i, j).clone()))
    });
    if out.iter().any(|x| !x.is_positive()) {
        return Err(PreserveError::TransportOutOfCone(format!("({}, {}, {})", out[0], out[1], out[2])));
    }
    Ok(out)
}

/// Column sums of `M` over the names `α, β, γ`, e.g. `(γ, α+2β, β+2γ)`.
pub fn symbolic_transport(m: &IntMatrix) -> String {
    const NAMES: [&str; 3] = ["α", "β", "γ"];
    let cols: Vec<String> = (0..m.dim().min(3))
        .map(|j| {
            let mut s = String::new();
            for (i, name) in NAMES.iter().enumerate() {
                let c = m.get(i, j);
                if c.is_zero() {
                    continue;
                }
                if !s.is_empty() {
                    s.push('+');
                }
                if !c.is_one() {
                    s.push_str(&c.to_string());
                }
                s.push_str(name);
            }
            if s.is_empty() {
                s.push('0');
            }
            s
        })
        .collect();
    format!("({})", cols.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness")]
pub enum Verdict {
    Falsified(String),
    Consistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub params: [QuadReal; 3],
    pub intercept: QuadReal,
    pub predicted: Option<[QuadReal; 3]>,
    pub language_len: usize,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub morphism: String,
    pub matrix: MatrixReport,
    pub trials: usize,
    pub window_len: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub checked_factor_length: usize,
    pub parameter_transport: String,
    /// First failing trial, if any.
    pub failing_trial: Option<TrialRecord>,
}

fn sample_component(rng: &mut ChaCha8Rng) -> QuadReal {
    loop {
        let a = rng.gen_range(-4..=8);
        let b = rng.gen_range(0..=4);
        let x = QuadReal::frac(a, 4) + QuadReal::frac(b, 4) * QuadReal::sqrt(2);
        if x.is_positive() {
            return x;
        }
    }
}

/// Non-degenerate triples over `Q(√2)` with component ratio at most 10.
pub fn sample_nondegenerate(rng: &mut ChaCha8Rng) -> [QuadReal; 3] {
    loop {
        let p: [QuadReal; 3] = std::array::from_fn(|_| sample_component(rng));
        let f: Vec<f64> = p.iter().map(QuadReal::to_f64).collect();
        let ratio = f.iter().cloned().fold(f64::MIN, f64::max) / f.iter().cloned().fold(f64::MAX, f64::min);
        if ratio <= 10.0 && classify_triple(&p[0], &p[1], &p[2]) == IetClass::NonDegenerate {
            return p;
        }
    }
}

fn ex(x: &QuadReal) -> RealParam {
    RealParam::Exact(x.clone())
}

/// Window `u_{-len/2} .. u_{len-len/2-1}`.
fn centred_word(p: &Iet3Params, x0: &QuadReal, len: usize) -> Result<PointedWord, IetError> {
    let lo = -((len / 2) as i64);
    t3_word(p, &ex(x0), lo, lo + len as i64 - 1)
}

/// Factor language of the 3iet with parameters `p` up to length `flen`,
/// from a window of `LANGUAGE_FACTOR * flen` letters doubled until the
/// complexity reaches `2n+1` for non-degenerate parameters.
pub fn iet_language(p: &[QuadReal; 3], flen: usize) -> Result<(Language, usize), PreserveError> {
    let params = Iet3Params::exact(p[0].clone(), p[1].clone(), p[2].clone())?;
    let full = classify(&params)? == IetClass::NonDegenerate;
    let mut len = LANGUAGE_FACTOR * flen;
    for k in 0..=LANGUAGE_DOUBLINGS {
        let w = t3_word(&params, &ex(&QuadReal::zero()), 0, len as i64 - 1)?;
        let lang = Language::from_word(&w, flen)?;
        let complete = (1..=flen).all(|n| lang.count(n) == 2 * n + 1);
        if !full || complete || k == LANGUAGE_DOUBLINGS {
            return Ok((lang, len));
        }
        len *= 2;
    }
    unreachable!()
}

fn run_trial(
    m: &Morphism,
    mat: &IntMatrix,
    trial: usize,
    seed: u64,
    window_len: usize,
    flen: usize,
) -> Result<TrialRecord, PreserveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let p = sample_nondegenerate(&mut rng);
    let total = &(&p[0] + &p[1]) + &p[2];
    let intercept = &total * &QuadReal::frac(rng.gen_range(0..997), 997);
    let mut rec = TrialRecord { trial, params: p.clone(), intercept: intercept.clone(), predicted: None, language_len: 0, failure: None };
    let predicted = match predicted_params(mat, &p) {
        Ok(q) => q,
        Err(PreserveError::TransportOutOfCone(s)) => {
            rec.failure = Some(format!("transport out of cone: {s}"));
            return Ok(rec);
        }
        Err(e) => return Err(e),
    };
    rec.predicted = Some(predicted.clone());
    let params = Iet3Params::exact(p[0].clone(), p[1].clone(), p[2].clone())?;
    let u = centred_word(&params, &intercept, window_len)?;
    let v = m.apply(&u)?;
    let (lang, lang_len) = iet_language(&predicted, flen)?;
    rec.language_len = lang_len;
    let sub = is_factor_subset(&v, &lang, flen)?;
    if !sub.contained {
        rec.failure = Some(format!("factor {} of the image is absent", sub.witness.unwrap_or_default()));
        return Ok(rec);
    }
    let prof = complexity_profile(&v, flen)?;
    let over: Vec<usize> = (1..=flen).filter(|&n| prof[n - 1] > 2 * n + 1).collect();
    if !over.is_empty() {
        rec.failure = Some(format!("complexity exceeds 2n+1 at {} lengths, first n={}", over.len(), over[0]));
        return Ok(rec);
    }
    let bd = balance_defect(&sigma_project(&v)?, flen)?;
    if bd > 1 {
        rec.failure = Some(format!("binary projection has balance defect {bd}"));
    }
    Ok(rec)
}

/// Runs `trials` independent trials; the verdict is that of the first
/// failing trial in trial order.
pub fn test_preservation(
    m: &Morphism,
    trials: usize,
    window_len: usize,
    flen: usize,
    seed: u64,
) -> Result<PreservationReport, PreserveError> {
    if m.alphabet() != Alphabet::Ternary {
        return Err(PreserveError::NotTernary);
    }
    let mat = m.incidence_matrix();
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(m, &mat, t, seed, window_len, flen))
        .collect::<Result<_, _>>()?;
    let failing = records.into_iter().find(|r| r.failure.is_some());
    let verdict = match &failing {
        Some(r) => Verdict::Falsified(r.failure.clone().unwrap_or_default()),
        None => Verdict::Consistent,
    };
    Ok(PreservationReport {
        morphism: m.to_string(),
        matrix: matrix_report(&mat)?,
        trials,
        window_len,
        seed,
        verdict,
        checked_factor_length: flen,
        parameter_transport: symbolic_transport(&mat),
        failing_trial: failing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassPair {
    pub params: [QuadReal; 3],
    pub source: IetClass,
    pub transported: IetClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub matrix: IntMatrix,
    #[serde(serialize_with = "crate::iet::ser_bigint")]
    pub det: BigInt,
    pub samples: Vec<ClassPair>,
    /// `(K1, L1)` with `M(1,1,1)^T = M(K1, K1+L1, L1)^T` when `det M = 0`.
    pub lattice_witness: Option<(i64, i64)>,
    pub passed: bool,
}

/// Positive degenerate triple `(α, β, γ)` with `Kα + (K+L)β + Lγ = α+β+γ`.
fn sample_degenerate(rng: &mut ChaCha8Rng) -> [QuadReal; 3] {
    loop {
        let a = sample_component(rng);
        let b = sample_component(rng);
        let k = rng.gen_range(-3..=3i64);
        let l = rng.gen_range(-3..=3i64);
        if l == 1 {
            continue;
        }
        let kq = QuadReal::from_int(k);
        let lq = QuadReal::from_int(l);
        let one = QuadReal::one();
        let g = (&(&(&one - &kq) * &a) + &(&(&(&one - &kq) - &lq) * &b)) / &(&lq - &one);
        let class = classify_triple(&a, &b, &g);
        if g.is_positive() && matches!(class, IetClass::Degenerate { .. }) {
            return [a, b, g];
        }
    }
}

/// Unimodular matrices keep each sampled class non-degenerate or not on both
/// sides; singular ones send every sample to a degenerate or periodic class.
pub fn degeneracy_dichotomy_check(m: &IntMatrix, samples: usize, seed: u64) -> Result<DichotomyReport, PreserveError> {
    if m.dim() != 3 || !m.is_nonnegative() || symplectic_like_check(m).is_none() {
        return Err(PreserveError::NotInClass("requires a nonnegative matrix with M E M^T = ±E".into()));
    }
    let det = m.det();
    let unimodular = det.abs().is_one();
    if !unimodular && !det.is_zero() {
        return Err(PreserveError::NotInClass(format!("det {det} is neither 0 nor ±1")));
    }
    let lattice_witness = if unimodular {
        None
    } else {
        let (k, l) = degeneracy_transport_check(m)?;
        Some((i64::try_from(k).unwrap_or(i64::MAX), i64::try_from(l).unwrap_or(i64::MAX)))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    let mut passed = true;
    for i in 0..samples {
        let p = if unimodular && i % 2 == 1 { sample_degenerate(&mut rng) } else { sample_nondegenerate(&mut rng) };
        let q = predicted_params(m, &p)?;
        let source = classify_triple(&p[0], &p[1], &p[2]);
        let transported = classify_triple(&q[0], &q[1], &q[2]);
        let ok = if unimodular {
            (source == IetClass::NonDegenerate) == (transported == IetClass::NonDegenerate)
        } else {
            transported != IetClass::NonDegenerate
        };
        passed &= ok;
        out.push(ClassPair { params: p, source, transported });
    }
    Ok(DichotomyReport { matrix: m.clone(), det, samples: out, lattice_witness, passed })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub morphism: String,
    pub power: u32,
    pub seed: String,
    /// Left Perron eigenvector, normalized to first entry 1.
    pub params: Vec<QuadReal>,
    pub lambda: QuadReal,
    pub window_len: usize,
    pub factor_len: usize,
    pub contained: bool,
    pub witness: Option<String>,
}

/// Language of the coding with lengths `rho`: a 3iet at intercept 0, or the
/// lower mechanical word whose letter-1 density is `rho1/(rho0+rho1)`.
fn eigen_language(rho: &[QuadReal], flen: usize) -> Result<Language, PreserveError> {
    match rho.len() {
        3 => Ok(iet_language(&[rho[0].clone(), rho[1].clone(), rho[2].clone()], flen)?.0),
        2 => {
            let slope = &rho[1] / &(&rho[0] + &rho[1]);
            let p = Iet2Params::exact(slope, QuadReal::zero(), Mechanical::Lower)?;
            let w = t2_code(&p, 0, (LANGUAGE_FACTOR * flen) as i64)?;
            Ok(Language::from_word(&w, flen)?)
        }
        _ => Err(PreserveError::NotTernary),
    }
}

/// Searches `p <= 9` and seeds for a fixed point of `m^p` whose factors of
/// length `<= flen` lie in the coding language with left-eigenvector
/// parameters.
pub fn fixed_point_3iet_check(m: &Morphism, window_len: usize, flen: usize) -> Result<FixedPointReport, PreserveError> {
    if !m.is_primitive() {
        return Err(PreserveError::NotPrimitive);
    }
    let pd = perron_data(&m.incidence_matrix())?;
    let lang = eigen_language(&pd.left, flen)?;
    let seeds = fixed_point_seeds(m, MAX_FIXED_POWER);
    if seeds.is_empty() {
        return Err(PreserveError::NoFixedPointFound(MAX_FIXED_POWER));
    }
    let a = m.alphabet();
    let mut first = None;
    for &(p, l, r) in &seeds {
        let w = fixed_point_window(&m.power(p), l, r, window_len / 2)?;
        let sub = is_factor_subset(&w, &lang, flen)?;
        let rep = FixedPointReport {
            morphism: m.to_string(),
            power: p,
            seed: format!("{}|{}", a.symbol(l), a.symbol(r)),
            params: pd.left.clone(),
            lambda: pd.lambda.clone(),
            window_len: w.len(),
            factor_len: flen,
            contained: sub.contained,
            witness: sub.witness,
        };
        if rep.contained {
            return Ok(rep);
        }
        first.get_or_insert(rep);
    }
    Ok(first.expect("seeds nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadReal {
        QuadReal::from_int(n)
    }
    fn mat(rows: [[i64; 3]; 3]) -> IntMatrix {
        IntMatrix::from_rows(&rows)
    }
    fn morph(s: &str) -> Morphism {
        s.parse().unwrap()
    }

    #[test]
    fn example_transports() {
        let (a, b, g) = (q(1), QuadReal::sqrt(2), QuadReal::sqrt(2) * q(3));
        let p = [a.clone(), b.clone(), g.clone()];
        let phi = morph("A->AC;B->BC;C->C").incidence_matrix();
        let xi = morph("A->C;B->B;C->A").incidence_matrix();
        let phi0 = morph("A->B;B->BCB;C->CAC").incidence_matrix();
        assert_eq!(predicted_params(&phi, &p).unwrap(), [a.clone(), b.clone(), &(&a + &b) + &g]);
        assert_eq!(predicted_params(&xi, &p).unwrap(), [g.clone(), b.clone(), a.clone()]);
        assert_eq!(
            predicted_params(&phi0, &p).unwrap(),
            [g.clone(), &a + &(&b * &q(2)), &b + &(&g * &q(2))]
        );
        assert_eq!(symbolic_transport(&phi), "(α, β, α+β+γ)");
        assert_eq!(symbolic_transport(&xi), "(γ, β, α)");
        assert_eq!(symbolic_transport(&phi0), "(γ, α+2β, β+2γ)");
        let erasing_col = mat([[1, 0, 0], [0, 1, 0], [1, 0, 0]]);
        assert!(matches!(predicted_params(&erasing_col, &p), Err(PreserveError::TransportOutOfCone(_))));
    }

    #[test]
    fn transport_commutes_with_composition() {
        let phi = morph("A->AC;B->BC;C->C");
        let phi0 = morph("A->B;B->BCB;C->CAC");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = sample_nondegenerate(&mut rng);
        // (psi ∘ phi)(u) = psi(phi(u)): transport by phi first
        let comp = phi0.compose(&phi).unwrap();
        let two_step = predicted_params(&phi0.incidence_matrix(), &predicted_params(&phi.incidence_matrix(), &p).unwrap()).unwrap();
        assert_eq!(predicted_params(&comp.incidence_matrix(), &p).unwrap(), two_step);
    }

    #[test]
    fn small_harness_runs() {
        let id = Morphism::identity(Alphabet::Ternary);
        assert_eq!(test_preservation(&id, 2, 3000, 8, 1).unwrap().verdict, Verdict::Consistent);
        let phi = morph("A->AC;B->BC;C->C");
        assert_eq!(test_preservation(&phi, 2, 3000, 8, 1).unwrap().verdict, Verdict::Consistent);
        let bad = morph("A->AB;B->BC;C->C");
        let rep = test_preservation(&bad, 2, 3000, 8, 1).unwrap();
        assert!(matches!(rep.verdict, Verdict::Falsified(_)), "{rep:?}");
        assert!(test_preservation(&"0->01;1->0".parse().unwrap(), 1, 100, 4, 1).is_err());
    }

    #[test]
    fn degeneracy_dichotomy_cases() {
        let phi0 = morph("A->B;B->BCB;C->CAC").incidence_matrix();
        let r = degeneracy_dichotomy_check(&phi0, 10, 4).unwrap();
        assert!(r.passed && r.lattice_witness.is_none());
        let s2 = QuadReal::sqrt(2);
        let nd = predicted_params(&phi0, &[q(1), s2.clone(), s2.clone()]).unwrap();
        assert_eq!(classify_triple(&nd[0], &nd[1], &nd[2]), IetClass::NonDegenerate);
        let phi = morph("A->AC;B->BC;C->C").incidence_matrix();
        let d = predicted_params(&phi, &[q(1), s2.clone(), q(2)]).unwrap();
        assert_eq!(d[2], &q(3) + &s2);
        assert!(matches!(classify_triple(&d[0], &d[1], &d[2]), IetClass::Degenerate { .. }));
        let singular = mat([[1, 0, 1], [1, 1, 2], [0, 1, 1]]);
        let r = degeneracy_dichotomy_check(&singular, 10, 4).unwrap();
        assert!(r.passed);
        assert_eq!(r.lattice_witness, Some((2, 0)));
        assert!(matches!(degeneracy_dichotomy_check(&mat([[2, 0, 0], [0, 1, 0], [0, 0, 1]]), 1, 0), Err(PreserveError::NotInClass(_))));
    }

    #[test]
    fn fixed_points() {
        let phi0 = morph("A->B;B->BCB;C->CAC");
        let r = fixed_point_3iet_check(&phi0, 4000, 10).unwrap();
        assert!(r.contained, "{r:?}");
        let tau = (q(1) + QuadReal::sqrt(5)) / q(2);
        assert_eq!(r.params, vec![q(1), tau.clone(), &tau * &tau]);
        let fib = "0->10;1->110".parse().unwrap();
        assert!(fixed_point_3iet_check(&fib, 4000, 10).unwrap().contained);
        assert_eq!(fixed_point_3iet_check(&morph("A->AC;B->BC;C->C"), 100, 5).unwrap_err(), PreserveError::NotPrimitive);
    }
}
