use alloc::vec::Vec;

use super::{c64, CMat, C64};
use crate::{Error, Result};

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMat,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &CMat) -> Result<Self> {
        a.ensure_square()?;
        a.ensure_finite()?;
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().partial_cmp(&lu[(j, k)].norm()).unwrap())
                .unwrap();
            if lu[(pivot, k)].norm() == 0.0 {
                return Err(Error::numerical("LU factorisation (singular matrix)", 0.0, 0.0));
            }
            if pivot != k {
                perm.swap(pivot, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot, j)];
                    lu[(pivot, j)] = tmp;
                }
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f != c64(0.0, 0.0) {
                    for j in (k + 1)..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= f * u;
                    }
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[(i, j)];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &CMat) -> CMat {
        assert_eq!(b.rows(), self.lu.rows());
        let cols: Vec<Vec<C64>> = (0..b.cols()).map(|j| self.solve_vec(&b.col(j))).collect();
        CMat::from_columns(b.rows(), &cols)
    }
}

pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.rows() != b.rows() {
        return Err(Error::invalid("solve: row mismatch"));
    }
    Ok(Lu::new(a)?.solve(b))
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    Ok(Lu::new(a)?.solve(&CMat::identity(a.rows())))
}
