use crate::{Error, Result};

/// Numerical thresholds shared by every decision in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value cutoff: values at or below `rank_rel * scale` count as zero.
    pub rank_rel: f64,
    /// Eigenvalues closer than this are one cluster.
    pub cluster_abs: f64,
    /// Acceptance threshold for certificate residuals.
    pub residual_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rank_rel: 1e-9, cluster_abs: 1e-7, residual_abs: 1e-8 }
    }
}

impl Tolerances {
    pub fn new(rank_rel: f64, cluster_abs: f64, residual_abs: f64) -> Result<Self> {
        let tol = Tolerances { rank_rel, cluster_abs, residual_abs };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rank_rel > 0.0 && self.rank_rel < 1.0) {
            return Err(Error::invalid("rank_rel must lie in (0, 1)"));
        }
        if !(self.cluster_abs > 0.0 && self.cluster_abs.is_finite()) {
            return Err(Error::invalid("cluster_abs must be positive"));
        }
        if !(self.residual_abs > 0.0 && self.residual_abs.is_finite()) {
            return Err(Error::invalid("residual_abs must be positive"));
        }
        Ok(())
    }
}
