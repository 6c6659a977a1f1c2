//! The eight acceptance criteria, one pass/fail line each.

use std::time::{Duration, Instant};

use partiso::format::{AnyCertificate, CertificateJson};
use partiso::verify::verify;
use partiso_core::construct::{construct_similar_partial_isometry, superdiagonal_partial_isometry, synthesize_partial_isometry};
use partiso_core::decide::{
    decide_matrix_partial_isometry, decide_partial_isometry, decide_projection_product, pi_spectrum_feasible,
    weyl_horn_feasible, SingularProfile,
};
use partiso_core::jordan::{jordan_structure, JordanSpec};
use partiso_core::linalg::{schur_upper_triangularize, singular_values};
use partiso_core::projections::{construct_projection_pair, in_set_s, in_variety_pi};
use partiso_core::sample::{
    random_admissible_spec, random_disk_tuple, random_partial_isometry, random_projection,
    random_projection_product_spec, random_xis, SpecShape,
};
use partiso_core::{c64, CMat, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> Tolerances {
    Tolerances::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn two_examples() -> (CMat, CMat) {
    let r3 = 3.0f64.sqrt() / 2.0;
    (CMat::from_real(2, 2, &[0.0, r3, 0.0, 0.5]), CMat::from_real(2, 2, &[0.0, 0.0, 0.0, 0.5]))
}

fn two_example_regression() -> Outcome {
    let start = Instant::now();
    let (v, a) = two_examples();
    ensure(in_variety_pi(&v, &tol()), || "first matrix is not a partial isometry".into())?;
    ensure(!in_variety_pi(&a, &tol()), || "second matrix passes the partial isometry test".into())?;
    for m in [&v, &a] {
        let (d, _) = decide_matrix_partial_isometry(m, &tol()).map_err(|e| e.to_string())?;
        ensure(d.verdict, || format!("decide false on {m:?}"))?;
    }
    let cert = construct_similar_partial_isometry(&a, &tol()).map_err(|e| e.to_string())?;
    let json = AnyCertificate::PartialIsometry(CertificateJson::from_certificate(&cert));
    let report = verify(&json, &a, &tol()).map_err(|e| e.to_string())?;
    ensure(report.pass, || format!("verification failed: {report:?}"))?;
    let variety = report.checks.iter().find(|c| c.name == "residual_variety").unwrap().value;
    ensure(variety <= 1e-8, || format!("residual_variety {variety:e}"))?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("residual_variety {variety:.1e}, residual_similarity {:.1e}", cert.residual_similarity))
}

fn necessity_by_sampling() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..500 {
        let n = rng.random_range(2..=8);
        let v = random_partial_isometry(&mut rng, n);
        let (d, spec) = decide_matrix_partial_isometry(&v, &tol()).map_err(|e| format!("case {k}: {e}"))?;
        ensure(d.verdict, || format!("case {k}: verdict false for {spec:?}"))?;
    }
    within(Duration::from_secs(30), start)?;
    Ok("500 of 500 random partial isometries admissible".into())
}

fn criterion3_specs() -> Vec<JordanSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = SpecShape { max_dim: 20, max_modulus: 0.95, separation: 1e-3, max_block: 4, unimodular: false };
    (0..200).map(|_| random_admissible_spec(&mut rng, &shape)).collect()
}

fn sufficiency_round_trip() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (k, spec) in criterion3_specs().iter().enumerate() {
        let cert = synthesize_partial_isometry(spec, &tol()).map_err(|e| format!("case {k}: {e}"))?;
        let found = jordan_structure(&cert.target, &tol()).map_err(|e| format!("case {k}: {e}"))?;
        ensure(&found == spec, || format!("case {k}: recovered {found:?} from {spec:?}"))?;
        ensure(cert.residual_variety <= 1e-10, || format!("case {k}: residual_variety {:e}", cert.residual_variety))?;
        worst = worst.max(cert.residual_variety);
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("200 of 200 specs recovered exactly, worst residual_variety {worst:.1e}"))
}

fn superdiagonal_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let n = rng.random_range(1..=50);
        let xis = random_xis(&mut rng, n - 1, 0.99);
        let v = superdiagonal_partial_isometry(&xis).map_err(|e| format!("case {k}: {e}"))?;
        let gram = (&v.adjoint_mul(&v) - &CMat::zeros(1, 1).direct_sum(&CMat::identity(n - 1))).frobenius_norm();
        ensure(gram <= 1e-10, || format!("case {k}: |V*V - (0 + I)|_F = {gram:e}"))?;
        ensure(v[(0, 0)] == c64(0.0, 0.0) && v.diagonal()[1..] == xis[..], || format!("case {k}: diagonal altered"))?;
        ensure((0..n - 1).all(|j| v[(j, j + 1)].re > 0.0 && v[(j, j + 1)].im == 0.0), || {
            format!("case {k}: superdiagonal entry not real positive")
        })?;
        worst = worst.max(gram);
    }
    let base = superdiagonal_partial_isometry(&[c64(0.5, 0.0)]).map_err(|e| e.to_string())?;
    let err = (&base - &two_examples().0).max_abs();
    ensure(err <= f64::EPSILON, || format!("base case off by {err:e}"))?;
    Ok(format!("200 of 200 tuples, worst Gram error {worst:.1e}, base case error {err:.1e}"))
}

fn projection_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let proj_err = |p: &CMat| {
        (&p.matmul(p) - p).frobenius_norm().max((&p.adjoint() - p).frobenius_norm())
    };
    for k in 0..100 {
        let spec = random_projection_product_spec(&mut rng, 16, 1e-3);
        let cert = construct_projection_pair(&spec, &tol()).map_err(|e| format!("case {k}: {e}"))?;
        let worst = proj_err(&cert.p).max(proj_err(&cert.q));
        ensure(worst <= 1e-10, || format!("case {k}: projection residual {worst:e}"))?;
        let found = jordan_structure(&cert.p.matmul(&cert.q), &tol()).map_err(|e| format!("case {k}: {e}"))?;
        ensure(found == spec, || format!("case {k}: recovered {found:?} from {spec:?}"))?;
    }
    for k in 0..200 {
        let n = rng.random_range(1..=12);
        let (rp, rq) = (rng.random_range(0..=n), rng.random_range(0..=n));
        let p = random_projection(&mut rng, n, rp);
        let q = random_projection(&mut rng, n, rq);
        let spec = jordan_structure(&p.matmul(&q), &tol()).map_err(|e| format!("pair {k}: {e}"))?;
        ensure(decide_projection_product(&spec, &tol()).verdict, || format!("pair {k}: PQ spec {spec:?} rejected"))?;
    }
    Ok("100 of 100 specs realized, 200 of 200 products admissible".into())
}

fn set_s_facts() -> Outcome {
    let h = 0.5f64.sqrt();
    let t = CMat::from_real(2, 2, &[1.0, 1.0, 0.0, -1.0]);
    let outsider = CMat::from_real(2, 2, &[h, 1.0, 0.0, 0.0]);
    let member = CMat::from_real(2, 2, &[h, h, 0.0, 0.0]);
    let e = |r: partiso_core::Result<bool>| r.map_err(|e| e.to_string());
    ensure(e(in_set_s(&t, &tol()))?, || "[[1,1],[0,-1]] not in S".into())?;
    ensure(!e(in_set_s(&outsider, &tol()))?, || "[[1/sqrt2, 1],[0,0]] in S".into())?;
    ensure(e(in_set_s(&member, &tol()))?, || "[[1/sqrt2, 1/sqrt2],[0,0]] not in S".into())?;
    let a = jordan_structure(&outsider, &tol()).map_err(|e| e.to_string())?;
    let b = jordan_structure(&member, &tol()).map_err(|e| e.to_string())?;
    ensure(a == b, || format!("{a:?} differs from {b:?}"))?;
    Ok("membership facts hold and the two 2x2 examples are similar".into())
}

fn weyl_horn_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs = 0;
    for n in 1..=6 {
        for r in 0..=n {
            let profile = SingularProfile::partial_isometry(r, n).map_err(|e| e.to_string())?;
            for _ in 0..200 {
                let lambdas = random_disk_tuple(&mut rng, n);
                let direct = pi_spectrum_feasible(&lambdas, r, n, &tol()).map_err(|e| e.to_string())?;
                let wh = weyl_horn_feasible(&profile, &lambdas, &tol()).map_err(|e| e.to_string())?;
                ensure(direct == wh, || format!("n {n}, r {r}, {lambdas:?}: direct {direct}, Weyl-Horn {wh}"))?;
                pairs += 1;
            }
        }
    }
    for (k, spec) in criterion3_specs().iter().enumerate() {
        let v = synthesize_partial_isometry(spec, &tol()).map_err(|e| format!("case {k}: {e}"))?.target;
        let sigma = SingularProfile::new(singular_values(&v).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let lambdas = schur_upper_triangularize(&v).map_err(|e| e.to_string())?.eigenvalues();
        let ok = weyl_horn_feasible(&sigma, &lambdas, &tol()).map_err(|e| e.to_string())?;
        ensure(ok, || format!("case {k}: synthesized matrix violates Weyl-Horn"))?;
    }
    Ok(format!("{pairs} tuples agree, 200 synthesized matrices feasible"))
}

fn direct_summand_regression() -> Outcome {
    let with_zero = JordanSpec::new(vec![(c64(0.0, 0.0), vec![1]), (c64(0.5, 0.0), vec![1])], 1e-7)
        .map_err(|e| e.to_string())?;
    let alone = JordanSpec::new(vec![(c64(0.5, 0.0), vec![1])], 1e-7).map_err(|e| e.to_string())?;
    ensure(decide_partial_isometry(&with_zero).verdict, || "0 + 1/2 rejected".into())?;
    ensure(!decide_partial_isometry(&alone).verdict, || "1/2 alone accepted".into())?;
    Ok("0 + 1/2 admissible, its summand 1/2 is not".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("1 two-example regression", two_example_regression),
        ("2 necessity by sampling", necessity_by_sampling),
        ("3 sufficiency round trip", sufficiency_round_trip),
        ("4 superdiagonal construction", superdiagonal_invariants),
        ("5 projection products", projection_round_trip),
        ("6 set S facts", set_s_facts),
        ("7 Weyl-Horn coherence", weyl_horn_coherence),
        ("8 direct summands", direct_summand_regression),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({:.2?})", start.elapsed()),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {name}: {msg} ({:.2?})", start.elapsed());
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
