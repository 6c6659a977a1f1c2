//! Seeded randomized property suites.
//!
//! Every case gets its own 64-bit seed drawn from one master generator, so a
//! failing case can be replayed on its own from the seed and size bound.

use partiso_core::construct::{
    construct_similar_partial_isometry, partition_blocks, peel_unimodular, superdiagonal_partial_isometry,
    synthesize_partial_isometry,
};
use partiso_core::decide::{
    decide_matrix_partial_isometry, decide_projection_product, pi_spectrum_feasible, weyl_horn_feasible,
    SingularProfile,
};
use partiso_core::jordan::{jordan_structure, JordanSpec};
use partiso_core::linalg::{inverse, schur_upper_triangularize};
use partiso_core::projections::{canonical_two_projections, construct_projection_pair, in_set_s, in_variety_pi};
use partiso_core::sample::{
    complex_gaussian, random_admissible_spec, random_disk_tuple, random_partial_isometry, random_projection,
    random_projection_product_spec, random_unitary, random_xis, well_conditioned, SpecShape,
};
use partiso_core::{c64, CMat, Error, Tolerances};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

type CaseFn = fn(&mut ChaCha8Rng, usize, &Tolerances) -> Result<(), String>;

/// Suites in report order.
pub const SUITES: &[(&str, CaseFn)] = &[
    ("schur_reconstruction", schur_reconstruction),
    ("jordan_round_trip", jordan_round_trip),
    ("superdiagonal", superdiagonal),
    ("synthesis_round_trip", synthesis_round_trip),
    ("necessity", necessity),
    ("decide_construct_coherence", coherence),
    ("peel_unimodular", peel),
    ("weyl_horn", weyl_horn),
    ("two_projections", two_projections),
    ("projection_spectrum_law", projection_law),
    ("projection_pair_round_trip", projection_pair),
    ("set_s", set_s),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFailure {
    pub suite: String,
    pub seed: u64,
    pub size_max: usize,
    /// `[rank_rel, cluster_abs, residual_abs]`.
    pub tolerances: [f64; 3],
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summaries: Vec<SuiteSummary>,
    pub first_failure: Option<CaseFailure>,
}

impl Report {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.summaries {
            out.push_str(&format!("{}: {}/{} passed\n", s.name, s.passed, s.total));
        }
        match &self.first_failure {
            None => out.push_str("all suites passed\n"),
            Some(f) => {
                out.push_str("first failure:\n");
                out.push_str(&crate::format::to_json(f));
            }
        }
        out
    }
}

fn tol_array(tol: &Tolerances) -> [f64; 3] {
    [tol.rank_rel, tol.cluster_abs, tol.residual_abs]
}

pub fn run_case(suite: &str, seed: u64, size_max: usize, tol: &Tolerances) -> Result<(), CaseFailure> {
    let fail = |message: String| CaseFailure {
        suite: suite.to_string(),
        seed,
        size_max,
        tolerances: tol_array(tol),
        message,
    };
    let f = SUITES.iter().find(|s| s.0 == suite).ok_or_else(|| fail(format!("unknown suite {suite}")))?.1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    f(&mut rng, size_max.max(1), tol).map_err(fail)
}

/// Runs `cases` cases of every suite; seeds come from `seed` in suite order.
pub fn run(seed: u64, size_max: usize, cases: usize, tol: &Tolerances) -> Report {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut summaries = Vec::new();
    let mut first_failure = None;
    for &(name, _) in SUITES {
        let mut passed = 0;
        for _ in 0..cases {
            match run_case(name, master.next_u64(), size_max, tol) {
                Ok(()) => passed += 1,
                Err(f) => {
                    first_failure.get_or_insert(f);
                }
            }
        }
        summaries.push(SuiteSummary { name, passed, total: cases });
    }
    Report { summaries, first_failure }
}

/// Replays a recorded case with its recorded tolerances.
pub fn replay(case: &CaseFailure) -> Result<Result<(), CaseFailure>, Error> {
    let [r, c, e] = case.tolerances;
    let tol = Tolerances::new(r, c, e)?;
    Ok(run_case(&case.suite, case.seed, case.size_max, &tol))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn conjugate(s: &CMat, a: &CMat) -> Result<CMat, String> {
    Ok(s.matmul(a).matmul(&inverse(s).map_err(|e| e.to_string())?))
}

fn schur_reconstruction(rng: &mut ChaCha8Rng, size_max: usize, _: &Tolerances) -> Result<(), String> {
    let n = rng.random_range(1..=size_max);
    let a = complex_gaussian(rng, n, n);
    let s = schur_upper_triangularize(&a).map_err(|e| e.to_string())?;
    let err = s.reconstruction_error(&a);
    check(s.t.is_upper_triangular(), || "Schur factor is not triangular".into())?;
    check(err <= 1e-12 * n as f64 * a.frobenius_norm(), || format!("reconstruction error {err:e}"))
}

fn jordan_round_trip(rng: &mut ChaCha8Rng, size_max: usize, tol: &Tolerances) -> Result<(), String> {
    let shape = SpecShape { max_dim: size_max, separation: 0.05, max_block: 3, unimodular: true, ..SpecShape::default() };
    let spec = random_admissible_spec(rng, &shape);
    let s = well_conditioned(rng, spec.dim(), 10.0);
    let a = conjugate(&s, &spec.jordan_matrix())?;
    let found = jordan_structure(&a, tol).map_err(|e| e.to_string())?;
    check(found.approx_eq(&spec, 1e-4), || format!("recovered {found:?} from {spec:?}"))
}

fn superdiagonal(rng: &mut ChaCha8Rng, size_max: usize, _: &Tolerances) -> Result<(), String> {
    let n = rng.random_range(1..=size_max.min(50));
    let xis = random_xis(rng, n - 1, 0.99);
    let v = superdiagonal_partial_isometry(&xis).map_err(|e| e.to_string())?;
    let target = CMat::zeros(1, 1).direct_sum(&CMat::identity(n - 1));
    let gram = (&v.adjoint_mul(&v) - &target).frobenius_norm();
    check(gram <= 1e-10, || format!("|V*V - (0 + I)|_F = {gram:e}"))?;
    check(v.diagonal()[1..] == xis[..] && v[(0, 0)] == c64(0.0, 0.0), || "diagonal differs from input".into())?;
    check((0..n - 1).all(|k| v[(k, k + 1)].re > 0.0 && v[(k, k + 1)].im == 0.0), || {
        "superdiagonal entry not real positive".into()
    })
}

fn synthesis_round_trip(rng: &mut ChaCha8Rng, size_max: usize, tol: &Tolerances) -> Result<(), String> {
    let spec = random_admissible_spec(rng, &SpecShape { max_dim: size_max, unimodular: true, ..SpecShape::default() });
    let cert = synthesize_partial_isometry(&spec, tol).map_err(|e| e.to_string())?;
    let found = jordan_structure(&cert.target, tol).map_err(|e| e.to_string())?;
    check(found == spec, || format!("recovered {found:?} from {spec:?}"))?;
    check(cert.residual_variety <= tol.residual_abs, || format!("residual_variety {:e}", cert.residual_variety))
}

fn necessity(rng: &mut ChaCha8Rng, size_max: usize, tol: &Tolerances) -> Result<(), String> {
    let n = rng.random_range(1..=size_max);
    let v = random_partial_isometry(rng, n);
    let (decision, spec) = decide_matrix_partial_isometry(&v, tol).map_err(|e| e.to_string())?;
    check(decision.verdict, || format!("partial isometry judged inadmissible: {spec:?}"))
}

fn coherence(rng: &mut ChaCha8Rng, size_max: usize, tol: &Tolerances) -> Result<(), String> {
    let admissible = rng.random_bool(0.5);
    let spec = if admissible {
        let shape = SpecShape { max_dim: size_max, separation: 0.05, max_block: 2, ..SpecShape::default() };
        random_admissible_spec(rng, &shape)
    } else {
        // z zero blocks against z + 1 blocks of one interior eigenvalue
        let z = rng.random_range(0..=(size_max - 1) / 2);
        let mut blocks = vec![(c64(0.5, 0.25), vec![1; z + 1])];
        if z > 0 {
            blocks.push((c64(0.0, 0.0), vec![1; z]));
        }
        JordanSpec::new(blocks, tol.cluster_abs).map_err(|e| e.to_string())?
    };
    let a = conjugate(&well_conditioned(rng, spec.dim(), 5.0), &spec.jordan_matrix())?;
    let (decision, _) = decide_matrix_partial_isometry(&a, tol).map_err(|e| e.to_string())?;
    check(decision.verdict == admissible, || format!("verdict {} for {spec:?}", decision.verdict))?;
    match construct_similar_partial_isometry(&a, tol) {
        Ok(cert) => check(admissible && in_variety_pi(&cert.target, tol), || "construction disagrees with decision".into()),
        Err(Error::NotAdmissible(_)) => check(!admissible, || "construction refused an admissible matrix".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn peel(rng: &mut ChaCha8Rng, size_max: usize, tol: &Tolerances) -> Result<(), String> {
    let shape = SpecShape { max_dim: size_max, separation: 0.01, unimodular: true, ..SpecShape::default() };
    let spec = random_admissible_spec(rng, &shape);
    let grouping = partition_blocks(&spec).map_err(|e| e.to_string())?;
    let cert = synthesize_partial_isometry(&spec, tol).map_err(|e| e.to_string())?;
    let u = random_unitary(rng, spec.dim());
    let v = u.matmul(&cert.target).matmul(&u.adjoint());
    let (unitary, _) = peel_unimodular(&v, tol).map_err(|e| e.to_string())?;
    let same = unitary.len() == grouping.unitary_part.len()
        && unitary
            .iter()
            .zip(&grouping.unitary_part)
            .all(|((z, m), (z0, m0))| m == m0 && (z - z0).norm() <= tol.cluster_abs);
    check(same, || format!("peeled {unitary:?}, expected {:?}", grouping.unitary_part))
}

fn weyl_horn(rng: &mut ChaCha8Rng, size_max: usize, tol: &Tolerances) -> Result<(), String> {
    let n = rng.random_range(1..=size_max.min(6));
    let r = rng.random_range(0..=n);
    let lambdas = random_disk_tuple(rng, n);
    let profile = SingularProfile::partial_isometry(r, n).map_err(|e| e.to_string())?;
    let direct = pi_spectrum_feasible(&lambdas, r, n, tol).map_err(|e| e.to_string())?;
    let wh = weyl_horn_feasible(&profile, &lambdas, tol).map_err(|e| e.to_string())?;
    check(direct == wh, || format!("r = {r}, lambdas {lambdas:?}: direct {direct}, Weyl-Horn {wh}"))
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (CMat, CMat) {
    let rp = rng.random_range(0..=n);
    let rq = rng.random_range(0..=n);
    let p = random_projection(rng, n, rp);
    let q = random_projection(rng, n, rq);
    (p, q)
}

fn two_projections(rng: &mut ChaCha8Rng, size_max: usize, tol: &Tolerances) -> Result<(), String> {
    let n = rng.random_range(1..=size_max);
    let (p, q) = random_pair(rng, n);
    let (form, u) = canonical_two_projections(&p, &q, tol).map_err(|e| e.to_string())?;
    let ep = (&u.matmul(&form.p_matrix()).matmul(&u.adjoint()) - &p).frobenius_norm();
    let eq = (&u.matmul(&form.q_matrix()).matmul(&u.adjoint()) - &q).frobenius_norm();
    check(ep.max(eq) <= tol.residual_abs, || format!("reassembly error {:e}", ep.max(eq)))
}

fn projection_law(rng: &mut ChaCha8Rng, size_max: usize, tol: &Tolerances) -> Result<(), String> {
    let n = rng.random_range(1..=size_max);
    let (p, q) = random_pair(rng, n);
    let spec = jordan_structure(&p.matmul(&q), tol).map_err(|e| e.to_string())?;
    check(decide_projection_product(&spec, tol).verdict, || format!("PQ has inadmissible spec {spec:?}"))
}

fn projection_pair(rng: &mut ChaCha8Rng, size_max: usize, tol: &Tolerances) -> Result<(), String> {
    let spec = random_projection_product_spec(rng, size_max, 1e-3);
    let cert = construct_projection_pair(&spec, tol).map_err(|e| e.to_string())?;
    let found = jordan_structure(&cert.p.matmul(&cert.q), tol).map_err(|e| e.to_string())?;
    check(found == spec, || format!("recovered {found:?} from {spec:?}"))?;
    check(cert.residual_variety <= tol.residual_abs, || format!("residual_variety {:e}", cert.residual_variety))
}

fn set_s(_: &mut ChaCha8Rng, _: usize, tol: &Tolerances) -> Result<(), String> {
    let h = 0.5f64.sqrt();
    let member = CMat::from_real(2, 2, &[h, h, 0.0, 0.0]);
    let outsider = CMat::from_real(2, 2, &[h, 1.0, 0.0, 0.0]);
    let t = CMat::from_real(2, 2, &[1.0, 1.0, 0.0, -1.0]);
    let facts = [in_set_s(&t, tol), in_set_s(&member, tol), in_set_s(&outsider, tol).map(|b| !b)];
    for (k, f) in facts.into_iter().enumerate() {
        check(f.map_err(|e| e.to_string())?, || format!("membership fact {k} does not hold"))?;
    }
    let a = jordan_structure(&member, tol).map_err(|e| e.to_string())?;
    let b = jordan_structure(&outsider, tol).map_err(|e| e.to_string())?;
    check(a == b, || "the two 2x2 examples are not similar".into())
}
