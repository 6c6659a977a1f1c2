//! JSON encodings of matrices, Jordan specs, decisions and certificates.
//!
//! Complex numbers are `[re, im]` pairs; matrices are row-major.

use partiso_core::construct::Certificate;
use partiso_core::decide::{ConditionId, ConditionReport, Decision};
use partiso_core::jordan::JordanSpec;
use partiso_core::projections::{ProjectionCertificate, TwoProjectionForm};
use partiso_core::{c64, CMat, Error, Tolerances, C64};
use serde::{Deserialize, Serialize};

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: [f64; 2]) -> C64 {
    c64(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_mat(m: &CMat) -> Self {
        MatrixJson { rows: m.rows(), cols: m.cols(), data: m.data().iter().map(|&z| pair(z)).collect() }
    }

    pub fn to_mat(&self) -> Result<CMat, Error> {
        CMat::new(self.rows, self.cols, self.data.iter().map(|&p| complex(p)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockJson {
    pub eig: [f64; 2],
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecJson {
    pub n: usize,
    pub blocks: Vec<BlockJson>,
}

impl SpecJson {
    pub fn from_spec(spec: &JordanSpec) -> Self {
        SpecJson {
            n: spec.dim(),
            blocks: spec
                .blocks()
                .iter()
                .map(|b| BlockJson { eig: pair(b.eigenvalue), sizes: b.sizes.clone() })
                .collect(),
        }
    }

    /// Canonical spec with eigenvalues snapped to 0 and the unit circle.
    pub fn to_spec(&self, tol: &Tolerances) -> Result<JordanSpec, Error> {
        let blocks = self.blocks.iter().map(|b| (complex(b.eig), b.sizes.clone())).collect();
        let spec = JordanSpec::new(blocks, tol.cluster_abs)?.snapped(tol.cluster_abs)?;
        if spec.dim() != self.n {
            return Err(Error::InvalidInput(format!(
                "spec declares n = {} but its blocks add up to {}",
                self.n,
                spec.dim()
            )));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionJson {
    pub id: String,
    pub passed: bool,
    pub detail: String,
    pub eigenvalues: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionJson {
    pub verdict: bool,
    pub conditions: Vec<ConditionJson>,
}

impl DecisionJson {
    pub fn from_decision(d: &Decision) -> Self {
        DecisionJson {
            verdict: d.verdict,
            conditions: d
                .conditions
                .iter()
                .map(|c| ConditionJson {
                    id: c.id.as_str().to_string(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                    eigenvalues: c.eigenvalues.iter().map(|&z| pair(z)).collect(),
                })
                .collect(),
        }
    }

    pub fn to_decision(&self) -> Result<Decision, Error> {
        let conditions = self
            .conditions
            .iter()
            .map(|c| {
                let id = ConditionId::parse(&c.id)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown condition id {}", c.id)))?;
                Ok(ConditionReport {
                    id,
                    passed: c.passed,
                    detail: c.detail.clone(),
                    eigenvalues: c.eigenvalues.iter().map(|&p| complex(p)).collect(),
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(Decision { verdict: self.verdict, conditions })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub d: [usize; 4],
    pub angles: Vec<f64>,
}

impl FormJson {
    pub fn from_form(f: &TwoProjectionForm) -> Self {
        FormJson { d: [f.d1, f.d2, f.d3, f.d4], angles: f.angles.clone() }
    }

    pub fn to_form(&self) -> TwoProjectionForm {
        let [d1, d2, d3, d4] = self.d;
        TwoProjectionForm { d1, d2, d3, d4, angles: self.angles.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    #[serde(rename = "V")]
    pub v: MatrixJson,
    #[serde(rename = "S")]
    pub s: MatrixJson,
    pub residual_similarity: f64,
    pub residual_variety: f64,
    #[serde(rename = "cond_S")]
    pub cond_s: f64,
}

impl CertificateJson {
    pub fn from_certificate(c: &Certificate) -> Self {
        CertificateJson {
            v: MatrixJson::from_mat(&c.target),
            s: MatrixJson::from_mat(&c.similarity),
            residual_similarity: c.residual_similarity,
            residual_variety: c.residual_variety,
            cond_s: c.cond_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCertificateJson {
    #[serde(rename = "P")]
    pub p: MatrixJson,
    #[serde(rename = "Q")]
    pub q: MatrixJson,
    #[serde(rename = "S")]
    pub s: MatrixJson,
    pub form: FormJson,
    pub residual_similarity: f64,
    pub residual_variety: f64,
    #[serde(rename = "cond_S")]
    pub cond_s: f64,
}

impl PairCertificateJson {
    pub fn from_certificate(c: &ProjectionCertificate) -> Self {
        PairCertificateJson {
            p: MatrixJson::from_mat(&c.p),
            q: MatrixJson::from_mat(&c.q),
            s: MatrixJson::from_mat(&c.similarity),
            form: FormJson::from_form(&c.form),
            residual_similarity: c.residual_similarity,
            residual_variety: c.residual_variety,
            cond_s: c.cond_s,
        }
    }
}

/// Anything `verify` accepts as a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyCertificate {
    PartialIsometry(CertificateJson),
    ProjectionPair(PairCertificateJson),
}

/// A command input: either a Jordan spec or a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Input {
    Spec(SpecJson),
    Matrix(MatrixJson),
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON encoding of plain data cannot fail");
    s.push('\n');
    s
}
