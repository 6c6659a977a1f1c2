use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use partiso::format::{AnyCertificate, CertificateJson, DecisionJson, MatrixJson, PairCertificateJson, SpecJson};
use partiso_core::{c64, CMat, Tolerances};
use tempfile::TempDir;

fn partiso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partiso")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn write_matrix(dir: &TempDir, name: &str, m: &CMat) -> PathBuf {
    write(dir, name, &serde_json::to_string(&MatrixJson::from_mat(m)).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn spec_of(out: &Output) -> partiso_core::jordan::JordanSpec {
    let json: SpecJson = serde_json::from_str(&stdout(out)).unwrap();
    json.to_spec(&Tolerances::default()).unwrap()
}

fn half() -> CMat {
    CMat::from_real(2, 2, &[0.0, 0.0, 0.0, 0.5])
}

#[test]
fn analyze_examples() {
    let dir = TempDir::new().unwrap();
    let r3 = 3.0f64.sqrt() / 2.0;
    let v = write_matrix(&dir, "v.json", &CMat::from_real(2, 2, &[0.0, r3, 0.0, 0.5]));
    let out = partiso(&["analyze", s(&v)]);
    assert_eq!(code(&out), 0);
    let spec = spec_of(&out);
    assert_eq!(spec.layout(), vec![(c64(0.5, 0.0), 1), (c64(0.0, 0.0), 1)]);

    let id = write_matrix(&dir, "id.json", &CMat::identity(3));
    let spec = spec_of(&partiso(&["analyze", s(&id)]));
    assert_eq!(spec.layout(), vec![(c64(1.0, 0.0), 1); 3]);

    let j2 = write_matrix(&dir, "j2.json", &CMat::jordan_block(2, c64(0.0, 0.0)));
    let spec = spec_of(&partiso(&["analyze", s(&j2)]));
    assert_eq!(spec.layout(), vec![(c64(0.0, 0.0), 2)]);
}

#[test]
fn decide_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "half.json", r#"{"n":1,"blocks":[{"eig":[0.5,0],"sizes":[1]}]}"#);
    let out = partiso(&["decide", s(&bad)]);
    assert_eq!(code(&out), 1);
    let d: DecisionJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!d.verdict);
    let failed: Vec<_> = d.conditions.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
    assert_eq!(failed, ["ZeroNullityDominates"]);

    let id = write_matrix(&dir, "id.json", &CMat::identity(2));
    assert_eq!(code(&partiso(&["decide", s(&id)])), 0);

    let j2one = write(&dir, "j2one.json", r#"{"n":2,"blocks":[{"eig":[1,0],"sizes":[2]}]}"#);
    let out = partiso(&["decide", s(&j2one)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("UnimodularDiagonalizable"));

    let pair = write(&dir, "pair.json", r#"{"n":2,"blocks":[{"eig":[0.5,0],"sizes":[1]},{"eig":[0,0],"sizes":[1]}]}"#);
    assert_eq!(code(&partiso(&["decide", "--pp", s(&pair)])), 0);
    assert_eq!(code(&partiso(&["decide", "--pp", s(&bad)])), 1);
}

#[test]
fn construct_and_verify() {
    let dir = TempDir::new().unwrap();
    let a = write_matrix(&dir, "a.json", &half());
    let cert_path = dir.path().join("cert.json");
    let out = partiso(&["construct", s(&a), "--out", s(&cert_path)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let cert: CertificateJson = serde_json::from_str(&fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert!(cert.residual_variety <= 1e-8);
    assert_eq!((cert.v.rows, cert.v.cols), (2, 2));

    let out = partiso(&["verify", s(&cert_path), s(&a)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    let mut tampered = cert.clone();
    tampered.v = MatrixJson::from_mat(&half());
    let t = write(&dir, "t1.json", &serde_json::to_string(&tampered).unwrap());
    let out = partiso(&["verify", s(&t), s(&a)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("residual_variety"));

    let mut tampered = cert;
    tampered.s = MatrixJson::from_mat(&CMat::from_real(2, 2, &[0.31, -1.7, 0.62, 0.05]));
    let t = write(&dir, "t2.json", &serde_json::to_string(&tampered).unwrap());
    let out = partiso(&["verify", s(&t), s(&a)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("residual_similarity"));
    assert!(!stderr(&out).contains("residual_variety"));
}

#[test]
fn construct_from_specs() {
    let dir = TempDir::new().unwrap();
    let zeta = write(&dir, "i.json", r#"{"n":1,"blocks":[{"eig":[0,1],"sizes":[1]}]}"#);
    let out = partiso(&["construct", s(&zeta)]);
    assert_eq!(code(&out), 0);
    let cert: CertificateJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert.v.to_mat().unwrap(), CMat::diag(&[c64(0.0, 1.0)]));
    let c = write(&dir, "ic.json", &stdout(&out));
    assert_eq!(code(&partiso(&["verify", s(&c), s(&zeta)])), 0);

    let pair = write(&dir, "pair.json", r#"{"n":2,"blocks":[{"eig":[0.5,0],"sizes":[1]},{"eig":[0,0],"sizes":[1]}]}"#);
    let out = partiso(&["construct", "--pp", s(&pair)]);
    assert_eq!(code(&out), 0);
    let cert: PairCertificateJson = serde_json::from_str(&stdout(&out)).unwrap();
    let pq = cert.p.to_mat().unwrap().matmul(&cert.q.to_mat().unwrap());
    assert!((&pq - &CMat::from_real(2, 2, &[0.5, 0.5, 0.0, 0.0])).frobenius_norm() < 1e-15);
    let c = write(&dir, "pc.json", &stdout(&out));
    assert_eq!(code(&partiso(&["verify", s(&c), s(&pair)])), 0);
    let parsed: AnyCertificate = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(matches!(parsed, AnyCertificate::ProjectionPair(_)));

    let a = write_matrix(&dir, "a.json", &half());
    let out = partiso(&["construct", "--pp", s(&a)]);
    assert_eq!(code(&out), 0);
    let c = write(&dir, "pa.json", &stdout(&out));
    assert_eq!(code(&partiso(&["verify", s(&c), s(&a)])), 0);
}

#[test]
fn construct_refuses_inadmissible() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "half.json", r#"{"n":1,"blocks":[{"eig":[0.5,0],"sizes":[1]}]}"#);
    let out = partiso(&["construct", s(&bad)]);
    assert_eq!(code(&out), 1);
    let d: DecisionJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!d.verdict);
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "g.json", "{not json");
    assert_eq!(code(&partiso(&["analyze", s(&garbage)])), 2);
    assert_eq!(code(&partiso(&["analyze", "/nonexistent/matrix.json"])), 2);
    let rect = write_matrix(&dir, "r.json", &CMat::zeros(2, 3));
    let out = partiso(&["decide", s(&rect)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("square"));
    let short = write(&dir, "short.json", r#"{"rows":2,"cols":2,"data":[[0,0]]}"#);
    assert_eq!(code(&partiso(&["analyze", s(&short)])), 2);
    let id = write_matrix(&dir, "id.json", &CMat::identity(2));
    assert_eq!(code(&partiso(&["analyze", s(&id), "--tol-rank", "-1"])), 2);
    assert_eq!(code(&partiso(&["frobnicate"])), 2);
}

#[test]
fn numerical_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let close = write_matrix(&dir, "close.json", &CMat::diag(&[c64(0.5, 0.0), c64(0.5 + 1.5e-7, 0.0)]));
    let out = partiso(&["analyze", s(&close)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("ambiguous"));
}

#[test]
fn output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = write_matrix(&dir, "a.json", &half());
    let first = partiso(&["construct", s(&a)]);
    let second = partiso(&["construct", s(&a)]);
    assert_eq!(first.stdout, second.stdout);

    let args = ["suite", "--seed", "42", "--size-max", "8"];
    let first = partiso(&args);
    assert_eq!(code(&first), 0, "{}", stdout(&first));
    assert!(stdout(&first).ends_with("all suites passed\n"));
    assert_eq!(first.stdout, partiso(&args).stdout);
}

#[test]
fn degenerate_suite_sizes_pass() {
    let out = partiso(&["suite", "--seed", "3", "--size-max", "1"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn failing_case_replays_identically() {
    let dir = TempDir::new().unwrap();
    let saved = dir.path().join("failure.json");
    let out = partiso(&["suite", "--seed", "5", "--size-max", "4", "--cases", "3", "--tol-residual", "1e-300", "--save-failure", s(&saved)]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    let recorded = text.split_once("first failure:\n").expect("failure section").1;
    assert_eq!(recorded, fs::read_to_string(&saved).unwrap());

    let replay = partiso(&["suite", "--replay", s(&saved)]);
    assert_eq!(code(&replay), 1);
    let replayed = stdout(&replay);
    assert_eq!(replayed.split_once('\n').unwrap().1, recorded);
    assert_eq!(replay.stdout, partiso(&["suite", "--replay", s(&saved)]).stdout);
}
