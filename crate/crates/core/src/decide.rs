//! Decision procedures on Jordan specs, plus the Weyl-Horn test for
//! prescribed singular values and eigenvalues.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::jordan::{jordan_structure, JordanSpec, EXACT_SLACK};
use crate::linalg::{CMat, Tolerances, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionId {
    SpectrumInDisk,
    UnimodularDiagonalizable,
    ZeroNullityDominates,
    SpectrumInUnitInterval,
    Diagonalizable,
    NullitySumBound,
}

impl ConditionId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionId::SpectrumInDisk => "SpectrumInDisk",
            ConditionId::UnimodularDiagonalizable => "UnimodularDiagonalizable",
            ConditionId::ZeroNullityDominates => "ZeroNullityDominates",
            ConditionId::SpectrumInUnitInterval => "SpectrumInUnitInterval",
            ConditionId::Diagonalizable => "Diagonalizable",
            ConditionId::NullitySumBound => "NullitySumBound",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            ConditionId::SpectrumInDisk,
            ConditionId::UnimodularDiagonalizable,
            ConditionId::ZeroNullityDominates,
            ConditionId::SpectrumInUnitInterval,
            ConditionId::Diagonalizable,
            ConditionId::NullitySumBound,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub id: ConditionId,
    pub passed: bool,
    pub detail: String,
    /// Offending eigenvalues (empty when the condition holds).
    pub eigenvalues: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub verdict: bool,
    pub conditions: Vec<ConditionReport>,
}

impl Decision {
    fn from_reports(conditions: Vec<ConditionReport>) -> Self {
        Decision { verdict: conditions.iter().all(|c| c.passed), conditions }
    }

    pub fn report(&self, id: ConditionId) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn failed(&self) -> impl Iterator<Item = &ConditionReport> {
        self.conditions.iter().filter(|c| !c.passed)
    }
}

/// Singular values, descending and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularProfile(Vec<f64>);

impl SingularProfile {
    /// Sorts descending; rejects negative or non-finite values.
    pub fn new(mut sigmas: Vec<f64>) -> Result<Self> {
        if sigmas.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::invalid("singular values must be finite and nonnegative"));
        }
        sigmas.sort_by(|a, b| b.total_cmp(a));
        Ok(SingularProfile(sigmas))
    }

    /// `r` ones followed by `n - r` zeros.
    pub fn partial_isometry(r: usize, n: usize) -> Result<Self> {
        if r > n {
            return Err(Error::invalid(format!("rank {r} exceeds dimension {n}")));
        }
        let mut s = alloc::vec![1.0; r];
        s.resize(n, 0.0);
        Ok(SingularProfile(s))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn list(values: &[C64]) -> String {
    let parts: Vec<String> = values.iter().map(|z| format!("{z}")).collect();
    parts.join(", ")
}

fn report(id: ConditionId, offending: Vec<C64>, ok: &str, bad: &str) -> ConditionReport {
    let passed = offending.is_empty();
    let detail = if passed { String::from(ok) } else { format!("{bad}: {}", list(&offending)) };
    ConditionReport { id, passed, detail, eigenvalues: offending }
}

/// The three-condition test for similarity to a partial isometry. `spec`
/// is expected to be snapped already, so eigenvalues on the circle and at
/// zero are exact up to rounding.
pub fn decide_partial_isometry(spec: &JordanSpec) -> Decision {
    let blocks = spec.blocks();
    let outside: Vec<C64> =
        blocks.iter().filter(|b| b.eigenvalue.norm() > 1.0 + EXACT_SLACK).map(|b| b.eigenvalue).collect();
    let defective: Vec<C64> = blocks
        .iter()
        .filter(|b| b.is_unimodular() && b.sizes.iter().any(|&s| s > 1))
        .map(|b| b.eigenvalue)
        .collect();
    let zero = spec.zero_block_count();
    let dominated: Vec<C64> = blocks
        .iter()
        .filter(|b| !b.is_zero() && b.eigenvalue.norm() < 1.0 - EXACT_SLACK && b.count() > zero)
        .map(|b| b.eigenvalue)
        .collect();
    Decision::from_reports(alloc::vec![
        report(
            ConditionId::SpectrumInDisk,
            outside,
            "spectrum lies in the closed unit disk",
            "eigenvalues outside the closed unit disk",
        ),
        report(
            ConditionId::UnimodularDiagonalizable,
            defective,
            "every unimodular eigenvalue is semisimple",
            "unimodular eigenvalues with a Jordan block of size > 1",
        ),
        report(
            ConditionId::ZeroNullityDominates,
            dominated,
            "nullity at 0 is at least the nullity at every eigenvalue inside the disk",
            &format!("eigenvalues with more than {zero} Jordan blocks (the number at zero)"),
        ),
    ])
}

/// Computes the Jordan structure of `a` and applies [`decide_partial_isometry`].
pub fn decide_matrix_partial_isometry(a: &CMat, tol: &Tolerances) -> Result<(Decision, JordanSpec)> {
    let spec = jordan_structure(a, tol)?;
    Ok((decide_partial_isometry(&spec), spec))
}

/// The three-condition test for similarity to a product of two orthogonal
/// projections. Eigenvalues within `cluster_abs` of the real axis, of 0 or
/// of 1 are treated as lying there.
pub fn decide_projection_product(spec: &JordanSpec, tol: &Tolerances) -> Decision {
    let eps = tol.cluster_abs;
    let blocks = spec.blocks();
    let in_interval = |z: C64| z.im.abs() <= eps && z.re >= -eps && z.re <= 1.0 + eps;
    let is_zero = |z: C64| z.norm() <= eps;
    let is_one = |z: C64| (z - C64::new(1.0, 0.0)).norm() <= eps;
    let outside: Vec<C64> = blocks.iter().filter(|b| !in_interval(b.eigenvalue)).map(|b| b.eigenvalue).collect();
    let defective: Vec<C64> =
        blocks.iter().filter(|b| b.sizes.iter().any(|&s| s > 1)).map(|b| b.eigenvalue).collect();
    let zeros: usize = blocks.iter().filter(|b| is_zero(b.eigenvalue)).map(|b| b.count()).sum();
    let interior: Vec<&crate::jordan::EigenBlocks> = blocks
        .iter()
        .filter(|b| in_interval(b.eigenvalue) && !is_zero(b.eigenvalue) && !is_one(b.eigenvalue))
        .collect();
    let demand: usize = interior.iter().map(|b| b.count()).sum();
    let short: Vec<C64> = if zeros >= demand { Vec::new() } else { interior.iter().map(|b| b.eigenvalue).collect() };
    Decision::from_reports(alloc::vec![
        report(
            ConditionId::SpectrumInUnitInterval,
            outside,
            "spectrum lies in [0, 1]",
            "eigenvalues outside [0, 1]",
        ),
        report(
            ConditionId::Diagonalizable,
            defective,
            "all Jordan blocks have size 1",
            "eigenvalues with a Jordan block of size > 1",
        ),
        report(
            ConditionId::NullitySumBound,
            short,
            "nullity at 0 covers the eigenvalues in (0, 1)",
            &format!("{demand} blocks in (0, 1) but only {zeros} at zero"),
        ),
    ])
}

/// `sum ln x_i` over the first `k` entries, or `None` once a zero is hit.
fn log_prefixes(values: &[f64]) -> Vec<Option<f64>> {
    let mut acc = Some(0.0);
    values
        .iter()
        .map(|&v| {
            acc = match acc {
                Some(s) if v > 0.0 => Some(s + v.ln()),
                _ => None,
            };
            acc
        })
        .collect()
}

/// Whether some matrix has singular values `sigmas` and eigenvalues
/// `lambdas` (log-majorisation with equality of full products).
///
/// Singular values at or below `rank_rel * sigma_1` and eigenvalues of
/// modulus at most `cluster_abs` count as zero; nonzero products are
/// compared in log scale with slack `residual_abs`.
pub fn weyl_horn_feasible(sigmas: &SingularProfile, lambdas: &[C64], tol: &Tolerances) -> Result<bool> {
    let n = sigmas.len();
    if n == 0 || lambdas.len() != n {
        return Err(Error::invalid(format!(
            "need equally many singular values and eigenvalues (got {} and {})",
            n,
            lambdas.len()
        )));
    }
    if lambdas.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::invalid("non-finite eigenvalue"));
    }
    let top = sigmas.values()[0];
    let s: Vec<f64> = sigmas.values().iter().map(|&x| if x <= tol.rank_rel * top { 0.0 } else { x }).collect();
    let mut l: Vec<f64> = lambdas.iter().map(|z| if z.norm() <= tol.cluster_abs { 0.0 } else { z.norm() }).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    let ps = log_prefixes(&s);
    let pl = log_prefixes(&l);
    let slack = tol.residual_abs;
    for k in 0..n - 1 {
        let ok = match (ps[k], pl[k]) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a >= b - slack,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(match (ps[n - 1], pl[n - 1]) {
        (None, None) => true,
        (Some(a), Some(b)) => (a - b).abs() <= slack,
        _ => false,
    })
}

/// Whether `lambdas` can be the eigenvalues of an `n x n` partial isometry
/// of rank `r`: all in the closed disk with at least `n - r` zeros, and all
/// on the circle when `r = n`.
pub fn pi_spectrum_feasible(lambdas: &[C64], r: usize, n: usize, tol: &Tolerances) -> Result<bool> {
    if r > n {
        return Err(Error::invalid(format!("rank {r} exceeds dimension {n}")));
    }
    if lambdas.len() != n {
        return Err(Error::invalid(format!("expected {n} eigenvalues, got {}", lambdas.len())));
    }
    let moduli: Vec<f64> = lambdas.iter().map(|z| z.norm()).collect();
    if r == n {
        let log_det: f64 = moduli.iter().map(|m| m.ln()).sum();
        return Ok(moduli.iter().all(|&m| m <= 1.0 + tol.residual_abs) && log_det.abs() <= tol.residual_abs);
    }
    let zeros = moduli.iter().filter(|&&m| m <= tol.cluster_abs).count();
    Ok(moduli.iter().all(|&m| m <= 1.0 + tol.residual_abs) && zeros >= n - r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use alloc::vec;

    fn spec(blocks: Vec<(C64, Vec<usize>)>) -> JordanSpec {
        JordanSpec::new(blocks, 1e-7).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn partial_isometry_examples() {
        let d = decide_partial_isometry(&spec(vec![(c64(0.0, 0.0), vec![1]), (c64(0.5, 0.0), vec![1])]));
        assert!(d.verdict);

        let d = decide_partial_isometry(&spec(vec![(c64(0.5, 0.0), vec![1])]));
        assert!(!d.verdict);
        let failed: Vec<ConditionId> = d.failed().map(|r| r.id).collect();
        assert_eq!(failed, vec![ConditionId::ZeroNullityDominates]);
        assert_eq!(d.report(ConditionId::ZeroNullityDominates).unwrap().eigenvalues, vec![c64(0.5, 0.0)]);

        let d = decide_partial_isometry(&spec(vec![(c64(1.0, 0.0), vec![2])]));
        let failed: Vec<ConditionId> = d.failed().map(|r| r.id).collect();
        assert_eq!(failed, vec![ConditionId::UnimodularDiagonalizable]);

        assert!(decide_partial_isometry(&spec(vec![(c64(1.0, 0.0), vec![1, 1, 1])])).verdict);
        assert!(decide_partial_isometry(&JordanSpec::empty()).verdict);
    }

    #[test]
    fn outside_disk_fails_first_condition() {
        let d = decide_partial_isometry(&spec(vec![(c64(0.0, 0.0), vec![1]), (c64(1.5, 0.0), vec![1])]));
        assert_eq!(d.failed().map(|r| r.id).collect::<Vec<_>>(), vec![ConditionId::SpectrumInDisk]);
    }

    #[test]
    fn matrix_examples() {
        let a = CMat::from_real(2, 2, &[0.0, 0.0, 0.0, 0.5]);
        assert!(decide_matrix_partial_isometry(&a, &tol()).unwrap().0.verdict);
        assert!(decide_matrix_partial_isometry(&CMat::identity(2), &tol()).unwrap().0.verdict);
        let half = CMat::from_real(1, 1, &[0.5]);
        assert!(!decide_matrix_partial_isometry(&half, &tol()).unwrap().0.verdict);
    }

    #[test]
    fn projection_product_examples() {
        let t = tol();
        let ok = spec(vec![(c64(1.0, 0.0), vec![1]), (c64(0.5, 0.0), vec![1]), (c64(0.0, 0.0), vec![1])]);
        assert!(decide_projection_product(&ok, &t).verdict);

        let d = decide_projection_product(&spec(vec![(c64(0.5, 0.0), vec![1]), (c64(0.25, 0.0), vec![1])]), &t);
        assert_eq!(d.failed().map(|r| r.id).collect::<Vec<_>>(), vec![ConditionId::NullitySumBound]);

        let d = decide_projection_product(&spec(vec![(c64(-0.5, 0.0), vec![1]), (c64(0.0, 0.0), vec![1])]), &t);
        assert_eq!(d.failed().map(|r| r.id).collect::<Vec<_>>(), vec![ConditionId::SpectrumInUnitInterval]);

        let d = decide_projection_product(&spec(vec![(c64(0.0, 0.0), vec![2])]), &t);
        assert_eq!(d.failed().map(|r| r.id).collect::<Vec<_>>(), vec![ConditionId::Diagonalizable]);
    }

    #[test]
    fn weyl_horn_examples() {
        let t = tol();
        let s = SingularProfile::new(vec![1.0, 1.0, 0.0]).unwrap();
        assert!(weyl_horn_feasible(&s, &[c64(0.9, 0.0), c64(0.5, 0.0), c64(0.0, 0.0)], &t).unwrap());
        let s = SingularProfile::new(vec![1.0, 0.0]).unwrap();
        assert!(!weyl_horn_feasible(&s, &[c64(0.5, 0.0), c64(0.5, 0.0)], &t).unwrap());
        let s = SingularProfile::new(vec![1.0, 1.0]).unwrap();
        assert!(weyl_horn_feasible(&s, &[c64(1.0, 0.0), c64(1.0, 0.0)], &t).unwrap());
        assert!(weyl_horn_feasible(&s, &[c64(1.0, 0.0)], &t).is_err());
        assert!(SingularProfile::new(vec![-1.0]).is_err());
    }

    #[test]
    fn weyl_horn_general_profile() {
        // diag(2, 1/2): sigma = (2, 1/2), lambda = (2, 1/2); also (1, 1) is reachable
        let t = tol();
        let s = SingularProfile::new(vec![0.5, 2.0]).unwrap();
        assert_eq!(s.values(), &[2.0, 0.5]);
        assert!(weyl_horn_feasible(&s, &[c64(1.0, 0.0), c64(0.0, 1.0)], &t).unwrap());
        assert!(!weyl_horn_feasible(&s, &[c64(2.5, 0.0), c64(0.4, 0.0)], &t).unwrap());
    }

    #[test]
    fn pi_spectrum_examples() {
        let t = tol();
        assert!(pi_spectrum_feasible(&[c64(0.9, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)], 1, 3, &t).unwrap());
        assert!(!pi_spectrum_feasible(&[c64(0.9, 0.0), c64(0.5, 0.0), c64(0.0, 0.0)], 1, 3, &t).unwrap());
        assert!(pi_spectrum_feasible(&[c64(0.0, 1.0)], 1, 1, &t).unwrap());
        assert!(!pi_spectrum_feasible(&[c64(0.5, 0.0)], 1, 1, &t).unwrap());
        assert!(pi_spectrum_feasible(&[c64(0.0, 0.0)], 2, 1, &t).is_err());
    }
}
