use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::decide::Decision;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: shape mismatch, non-finite entries, out-of-range parameters.
    InvalidInput(String),
    /// An iteration did not converge or a computed residual breached its bound.
    NumericalFailure { what: String, residual: f64, bound: f64 },
    /// Two eigenvalue clusters are too close to be told apart.
    ClusterAmbiguity { first: [f64; 2], second: [f64; 2], distance: f64 },
    /// The two matrices have different Jordan structures.
    NotSimilar,
    /// The input fails the similarity criterion; the failing decision is attached.
    NotAdmissible(Box<Decision>),
    NotPartialIsometry { residual: f64 },
    NotProjection { residual: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numerical(what: impl Into<String>, residual: f64, bound: f64) -> Self {
        Error::NumericalFailure { what: what.into(), residual, bound }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NumericalFailure { what, residual, bound } => {
                write!(f, "numerical failure in {what}: residual {residual:e} exceeds bound {bound:e}")
            }
            Error::ClusterAmbiguity { first, second, distance } => write!(
                f,
                "ambiguous eigenvalue clusters ({}{:+}i) and ({}{:+}i) are {distance:e} apart",
                first[0], first[1], second[0], second[1]
            ),
            Error::NotSimilar => write!(f, "matrices have different Jordan structures"),
            Error::NotAdmissible(decision) => {
                write!(f, "input is not admissible; failed conditions:")?;
                for report in decision.conditions.iter().filter(|r| !r.passed) {
                    write!(f, " {}", report.id.as_str())?;
                }
                Ok(())
            }
            Error::NotPartialIsometry { residual } => {
                write!(f, "not a partial isometry: |VV*V - V|_F = {residual:e}")
            }
            Error::NotProjection { residual } => {
                write!(f, "not an orthogonal projection: residual {residual:e}")
            }
        }
    }
}

impl core::error::Error for Error {}
