//! The acceptance suite: thirteen exact or tolerance-pinned checks, each
//! with a runtime budget.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::capset::{
    duality_counts, from_iet, generate, pn_experiment, points_in, q_bound_experiment, renorm_check,
    selfsimilar_check, unit_scaling_sides,
};
use crate::iet::{classify_triple, sigma_project, sigma_two_iet, t2_code, t3_word, IetClass, Iet3Params};
use crate::monoid::{
    e3n_membership, enumerate_e3n, enumerate_e3n_naive, left_eigen_check, row_sum_check, symplectic_like_check,
};
use crate::morphism::{density_transport, IntMatrix, Morphism};
use crate::preserve::{fixed_point_3iet_check, predicted_params, symbolic_transport, test_preservation, Verdict};
use crate::qfield::{Interval, QuadReal, RealParam};
use crate::words::{balance_defect, complexity_profile, empirical_densities};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    /// Correctness and budget both met.
    pub passed: bool,
    pub correct: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {:<28} {:>8} ms (budget {} ms)  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.budget_ms,
            self.detail
        )
    }
}

/// Correctness, detail, and the timed span when it is narrower than the whole
/// check (oracles excluded).
type Check = fn() -> (bool, String, Option<Duration>);

const CRITERIA: [(u32, &str, u64, Check); 13] = [
    (1, "matrix identity", 1_000, c1_matrix_identity),
    (2, "counterexample membership", 1, c2_membership),
    (3, "eigenvector and row sums", 30_000, c3_corollaries),
    (4, "cut-and-project coding", 10_000, c4_correspondence),
    (5, "classification", 3, c5_classification),
    (6, "complexity", 60_000, c6_complexity),
    (7, "binary projection", 5_000, c7_projection),
    (8, "density transport", 30_000, c8_densities),
    (9, "example transports", 1, c9_transports),
    (10, "preservation harness", 300_000, c10_preservation),
    (11, "point set identities", 120_000, c11_identities),
    (12, "self-similarity", 10_000, c12_selfsimilar),
    (13, "fixed point", 60_000, c13_fixed_point),
];

pub fn criterion_ids() -> Vec<u32> {
    CRITERIA.iter().map(|c| c.0).collect()
}

pub fn run(id: u32) -> Option<CriterionResult> {
    let &(id, name, budget, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (correct, detail, timed) = check();
    let elapsed = timed.unwrap_or_else(|| start.elapsed());
    let budget = Duration::from_millis(budget);
    Some(CriterionResult {
        id,
        name,
        passed: correct && elapsed <= budget,
        correct,
        detail,
        elapsed_ms: elapsed.as_millis(),
        budget_ms: budget.as_millis(),
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    criterion_ids().into_iter().filter_map(run).collect()
}

fn q(n: i64) -> QuadReal {
    QuadReal::from_int(n)
}

fn s2() -> QuadReal {
    QuadReal::sqrt(2)
}

fn ex(x: QuadReal) -> RealParam {
    RealParam::Exact(x)
}

fn morph(s: &str) -> Morphism {
    s.parse().expect("built-in morphism")
}

pub fn phi() -> Morphism {
    morph("A->AC;B->BC;C->C")
}

pub fn xi() -> Morphism {
    morph("A->C;B->B;C->A")
}

pub fn phi0() -> Morphism {
    morph("A->B;B->BCB;C->CAC")
}

fn c1_matrix_identity() -> (bool, String, Option<Duration>) {
    let gens = [phi(), xi(), phi0()].map(|m| m.incidence_matrix());
    let ok_one = |m: &IntMatrix| symplectic_like_check(m).is_some() && m.det().abs().is_one();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = gens.iter().filter(|m| !ok_one(m)).count();
    for _ in 0..200 {
        let len = rng.gen_range(2..=6);
        let mut m = IntMatrix::identity(3);
        for _ in 0..len {
            m = m.mul(&gens[rng.gen_range(0..3)]);
        }
        bad += usize::from(!ok_one(&m));
    }
    (bad == 0, format!("3 generators + 200 products, {bad} failures"), None)
}

fn c2_membership() -> (bool, String, Option<Duration>) {
    let m = IntMatrix::from_rows(&[[0, 2, 1], [2, 3, 5], [3, 0, 5]]);
    let det = m.det();
    (e3n_membership(&m) && det == BigInt::from(1), format!("member={}, det={det}", e3n_membership(&m)), None)
}

fn c3_corollaries() -> (bool, String, Option<Duration>) {
    let (Ok(b3), Ok(b2)) = (enumerate_e3n(3), enumerate_e3n(2)) else {
        return (false, "enumeration failed".into(), None);
    };
    let bad = b3.iter().filter(|m| !(left_eigen_check(m) && row_sum_check(m))).count();
    let naive: BTreeSet<String> = enumerate_e3n_naive(2).iter().map(ToString::to_string).collect();
    let fast: BTreeSet<String> = b2.iter().map(ToString::to_string).collect();
    let same = naive == fast;
    (bad == 0 && same, format!("{} members at bound 3, {bad} failures; bound-2 sets equal: {same} ({})", b3.len(), fast.len()), None)
}

fn c4_correspondence() -> (bool, String, Option<Duration>) {
    let Ok(p) = Iet3Params::exact(q(1), s2(), s2()) else {
        return (false, "bad params".into(), None);
    };
    let Ok(cp) = from_iet(&p, &ex(q(0)), &ex(q(1))) else {
        return (false, "conversion failed".into(), None);
    };
    let set = generate(&cp, -200, 3000);
    let gw = set.gap_word();
    let left = gw.origin() as i64;
    let right = (gw.len() - gw.origin()) as i64;
    let coded = t3_word(&p, &ex(q(0)), -left, right - 1);
    let words_eq = coded.as_ref().is_ok_and(|c| *c == gw);
    let hull = Interval::closed(set.points[0].clone(), set.points[set.points.len() - 1].clone());
    let pointwise = points_in(&cp.eps, &cp.eta, &cp.omega, &hull).is_ok_and(|d| d == set.points);
    let ok = words_eq && pointwise && gw.len() >= 2000;
    (ok, format!("{} gap letters; coding equal: {words_eq}; membership equal: {pointwise}", gw.len()), None)
}

/// Periodic and degenerate relations: all `(K, L)` with `|K|, |L| <= 10` satisfying the periodic and degenerate
/// relations, by direct substitution.
type Relations = Vec<(i64, i64)>;

fn brute_relations(a: &QuadReal, b: &QuadReal, g: &QuadReal) -> (Relations, Relations) {
    let total = &(a + b) + g;
    let (mut per, mut deg) = (Vec::new(), Vec::new());
    for k in -10..=10 {
        for l in -10..=10 {
            let v = &(&(&q(k) * a) + &(&q(k + l) * b)) + &(&q(l) * g);
            if v.is_zero() && k != 0 && l != 0 {
                per.push((k, l));
            }
            if v == total {
                deg.push((k, l));
            }
        }
    }
    (per, deg)
}

fn c5_classification() -> (bool, String, Option<Duration>) {
    let cases = [
        ([q(1), s2(), q(2)], IetClass::degenerate(-1, 2)),
        ([q(1), s2(), s2()], IetClass::NonDegenerate),
        ([q(1), q(2), q(3)], IetClass::periodic(5, -3)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    let mut timed = Duration::ZERO;
    for ([a, b, g], expected) in cases {
        let (per, deg) = brute_relations(&a, &b, &g);
        let oracle = match &expected {
            IetClass::Periodic { k, l } => per.contains(&(k.to_i64().unwrap_or(0), l.to_i64().unwrap_or(0))),
            IetClass::Degenerate { k, l } => per.is_empty() && deg == vec![(k.to_i64().unwrap_or(0), l.to_i64().unwrap_or(0))],
            IetClass::NonDegenerate => per.is_empty() && deg.is_empty(),
        };
        let start = Instant::now();
        let got = classify_triple(&a, &b, &g);
        timed += start.elapsed();
        ok &= oracle && got == expected;
        parts.push(got.name().to_string());
    }
    (ok, parts.join(", "), Some(timed))
}

fn c6_complexity() -> (bool, String, Option<Duration>) {
    let nd = Iet3Params::exact(q(1), s2(), s2()).expect("positive");
    let dg = Iet3Params::exact(q(1), s2(), q(2)).expect("positive");
    let (Ok(u), Ok(v)) = (t3_word(&nd, &ex(q(0)), 0, 99_999), t3_word(&dg, &ex(q(0)), 0, 99_999)) else {
        return (false, "generation failed".into(), None);
    };
    let (Ok(pu), Ok(pv)) = (complexity_profile(&u, 30), complexity_profile(&v, 30)) else {
        return (false, "window too short".into(), None);
    };
    let nd_ok = (1..=30).all(|n| pu[n - 1] == 2 * n + 1);
    let shifts: BTreeSet<i64> = (20..=30).map(|n| pv[n - 1] as i64 - n as i64).collect();
    let dg_ok = shifts.len() == 1;
    (nd_ok && dg_ok, format!("C(n)=2n+1 for n<=30: {nd_ok}; C(n)-n on 20..30: {shifts:?}"), None)
}

fn c7_projection() -> (bool, String, Option<Duration>) {
    let p = Iet3Params::exact(q(1), s2(), s2()).expect("positive");
    let x0 = QuadReal::frac(1, 3);
    let (Ok(w), Ok(two)) = (t3_word(&p, &ex(x0.clone()), 0, 999), sigma_two_iet(&p, &x0)) else {
        return (false, "generation failed".into(), None);
    };
    let Ok(proj) = sigma_project(&w) else {
        return (false, "projection failed".into(), None);
    };
    let Ok(s) = t2_code(&two, 0, proj.len() as i64 - 1) else {
        return (false, "2iet coding failed".into(), None);
    };
    let equal = s == proj;
    let bd = balance_defect(&proj, 200).unwrap_or(usize::MAX);
    (equal && bd == 1, format!("{} binary letters equal: {equal}; balance defect {bd}", proj.len()), None)
}

fn max_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn c8_densities() -> (bool, String, Option<Duration>) {
    let rho = [q(1), s2(), s2()];
    let p = Iet3Params::exact(rho[0].clone(), rho[1].clone(), rho[2].clone()).expect("positive");
    let Ok(u) = t3_word(&p, &ex(q(0)), 0, 99_999) else {
        return (false, "generation failed".into(), None);
    };
    let Ok(v) = phi0().apply(&u) else {
        return (false, "apply failed".into(), None);
    };
    let total = &(&rho[0] + &rho[1]) + &rho[2];
    let expect_u: Vec<f64> = rho.iter().map(|x| (x / &total).to_f64()).collect();
    let Ok(expect_v) = density_transport(&phi0().incidence_matrix(), &rho) else {
        return (false, "transport failed".into(), None);
    };
    let expect_v: Vec<f64> = expect_v.iter().map(QuadReal::to_f64).collect();
    let emp = |w| -> Vec<f64> {
        empirical_densities(w).map(|d| d.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()).unwrap_or_default()
    };
    let (eu, ev) = (max_err(&emp(&u), &expect_u), max_err(&emp(&v), &expect_v));
    (eu <= 1e-2 && ev <= 1e-2, format!("max error u {eu:.2e}, image {ev:.2e}"), None)
}

fn c9_transports() -> (bool, String, Option<Duration>) {
    let (a, b, g) = (q(2), s2(), &q(1) + &s2());
    let p = [a.clone(), b.clone(), g.clone()];
    let expected = [
        (phi(), [a.clone(), b.clone(), &(&a + &b) + &g], "(α, β, α+β+γ)"),
        (xi(), [g.clone(), b.clone(), a.clone()], "(γ, β, α)"),
        (phi0(), [g.clone(), &a + &(&b * &q(2)), &b + &(&g * &q(2))], "(γ, α+2β, β+2γ)"),
    ];
    let mut ok = true;
    let mut forms = Vec::new();
    for (m, v, sym) in expected {
        let mat = m.incidence_matrix();
        let s = symbolic_transport(&mat);
        ok &= predicted_params(&mat, &p).is_ok_and(|x| x == v) && s == sym;
        forms.push(s);
    }
    (ok, forms.join(" "), None)
}

fn c10_preservation() -> (bool, String, Option<Duration>) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, m, want_consistent) in [
        ("phi", phi(), true),
        ("xi", xi(), true),
        ("phi0", phi0(), true),
        ("corrupted", morph("A->AB;B->BC;C->C"), false),
    ] {
        match test_preservation(&m, 20, 50_000, 15, 0) {
            Ok(r) => {
                let consistent = r.verdict == Verdict::Consistent;
                ok &= consistent == want_consistent;
                parts.push(match r.verdict {
                    Verdict::Consistent => format!("{name}: Consistent"),
                    Verdict::Falsified(w) => format!("{name}: Falsified ({w})"),
                });
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: error {e}"));
            }
        }
    }
    (ok, parts.join("; "), None)
}

fn random_interval(rng: &mut ChaCha8Rng) -> Interval {
    let lo = QuadReal::frac(rng.gen_range(-60..=60), 7);
    let len = QuadReal::frac(rng.gen_range(0..=40), 5);
    Interval::new(lo.clone(), &lo + &len, rng.gen(), rng.gen())
}

fn c11_identities() -> (bool, String, Option<Duration>) {
    let mut parts = Vec::new();
    let mut ok = true;

    let (e, h) = (s2() / q(3), s2() / q(5));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dual_bad = (0..50)
        .filter(|_| {
            let (o1, o2) = (random_interval(&mut rng), random_interval(&mut rng));
            duality_counts(&e, &h, &o1, &o2).map_or(true, |(a, b)| a != b)
        })
        .count();
    ok &= dual_bad == 0;
    parts.push(format!("duality {dual_bad}/50 mismatches"));

    let eps = &s2() - &q(1);
    let lambda = &q(3) - &(s2() * q(2));
    let w = Interval::closed(q(-20), q(20));
    let scaling = unit_scaling_sides(&eps, &lambda, &Interval::right_open(q(0), q(1)), &w);
    let scaling_ok = scaling.as_ref().is_ok_and(|(l, r)| l == r && !l.is_empty());
    ok &= scaling_ok;
    parts.push(format!("scaling {}", if scaling_ok { "exact" } else { "FAILED" }));

    let renorm = renorm_check(&(s2() / q(4)), &(s2() / q(8)), &Interval::left_open(q(0), q(1)), &w);
    let renorm_ok = renorm == Ok(true);
    ok &= renorm_ok;
    parts.push(format!("renormalization {}", if renorm_ok { "exact" } else { "FAILED" }));

    match q_bound_experiment(&e, &h, 200, 4) {
        Ok(r) => {
            ok &= r.violations == 0;
            parts.push(format!("count bound {} violations, max diff {} <= {:.3}", r.violations, r.max_diff, r.bound_approx));
        }
        Err(err) => {
            ok = false;
            parts.push(format!("count bound error {err}"));
        }
    }

    let pn = pn_experiment(&(s2() / q(2)), &lambda, &Interval::left_open(q(-1), q(0)), 6, 10, 6);
    match pn {
        Ok(r) => {
            ok &= r.within_bound;
            parts.push(format!("P_n max diff {} <= {:.3}: {}", r.max_diff, r.bound_approx, r.within_bound));
        }
        Err(err) => {
            ok = false;
            parts.push(format!("P_n error {err}"));
        }
    }
    (ok, parts.join("; "), None)
}

fn c12_selfsimilar() -> (bool, String, Option<Duration>) {
    let fib = morph("0->10;1->110");
    match selfsimilar_check(&fib, 500) {
        Ok(r) => {
            let tau = (q(1) + QuadReal::sqrt(5)) / q(2);
            let lam_ok = r.lambda == &tau * &tau && r.power == 1;
            let ok = r.passed() && lam_ok && r.lengths == vec![q(1), tau];
            (ok, format!("Λ={} on {} gaps; ΛΣ⊂Σ {}; counts {}", r.lambda, r.gaps_checked, r.scaling_ok, r.counts_ok), None)
        }
        Err(e) => (false, e.to_string(), None),
    }
}

fn c13_fixed_point() -> (bool, String, Option<Duration>) {
    match fixed_point_3iet_check(&phi0(), 20_000, 15) {
        Ok(r) => {
            let tau = (q(1) + QuadReal::sqrt(5)) / q(2);
            let params_ok = r.params == vec![q(1), tau.clone(), &tau * &tau];
            (
                r.contained && params_ok && r.power <= 9,
                format!("p={}, seed {}, {} letters, contained {}", r.power, r.seed, r.window_len, r.contained),
                None,
            )
        }
        Err(e) => (false, e.to_string(), None),
    }
}
