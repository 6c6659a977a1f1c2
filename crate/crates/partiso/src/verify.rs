//! Independent recomputation of certificate residuals.

use partiso_core::construct::{similarity_bound, similarity_residual};
use partiso_core::{CMat, Error, Tolerances};
use serde::Serialize;

use crate::format::AnyCertificate;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, value: f64, bound: f64) -> Self {
        Check { name, value, bound, passed: value <= bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn projection_residual(p: &CMat) -> f64 {
    let idem = (&p.matmul(p) - p).frobenius_norm();
    let herm = (&p.adjoint() - p).frobenius_norm();
    idem.max(herm)
}

/// Recomputes every residual of `cert` against the original matrix `a`;
/// nothing stored in the certificate is trusted.
pub fn verify(cert: &AnyCertificate, a: &CMat, tol: &Tolerances) -> Result<Report, Error> {
    let mut checks = Vec::new();
    let (target, s) = match cert {
        AnyCertificate::PartialIsometry(c) => {
            let v = c.v.to_mat()?;
            let s = c.s.to_mat()?;
            if !v.is_square() {
                return Err(Error::InvalidInput("certificate matrix V is not square".into()));
            }
            let variety = (&v.matmul(&v.adjoint()).matmul(&v) - &v).frobenius_norm();
            checks.push(Check::new("residual_variety", variety, tol.residual_abs));
            (v, s)
        }
        AnyCertificate::ProjectionPair(c) => {
            let p = c.p.to_mat()?;
            let q = c.q.to_mat()?;
            let s = c.s.to_mat()?;
            if !p.is_square() || !q.is_square() || p.rows() != q.rows() {
                return Err(Error::InvalidInput("certificate projections have mismatched shapes".into()));
            }
            checks.push(Check::new("projection_P", projection_residual(&p), tol.residual_abs));
            checks.push(Check::new("projection_Q", projection_residual(&q), tol.residual_abs));
            (p.matmul(&q), s)
        }
    };
    let (residual, cond) = similarity_residual(a, &target, &s)?;
    checks.push(Check::new("residual_similarity", residual, similarity_bound(tol, cond, a)));
    Ok(Report { pass: checks.iter().all(|c| c.passed), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{CertificateJson, MatrixJson};
    use partiso_core::construct::construct_similar_partial_isometry;

    #[test]
    fn tampering_is_detected() {
        let tol = Tolerances::default();
        let a = CMat::from_real(2, 2, &[0.0, 0.0, 0.0, 0.5]);
        let cert = construct_similar_partial_isometry(&a, &tol).unwrap();
        let json = CertificateJson::from_certificate(&cert);
        let report = verify(&AnyCertificate::PartialIsometry(json.clone()), &a, &tol).unwrap();
        assert!(report.pass);

        let mut bad = json.clone();
        bad.v = MatrixJson::from_mat(&a);
        let report = verify(&AnyCertificate::PartialIsometry(bad), &a, &tol).unwrap();
        assert_eq!(report.failed().map(|c| c.name).collect::<Vec<_>>(), ["residual_variety", "residual_similarity"]);

        let mut bad = json;
        bad.s = MatrixJson::from_mat(&CMat::from_real(2, 2, &[0.3, -1.2, 0.7, 0.4]));
        let report = verify(&AnyCertificate::PartialIsometry(bad), &a, &tol).unwrap();
        assert_eq!(report.failed().map(|c| c.name).collect::<Vec<_>>(), ["residual_similarity"]);
    }
}
