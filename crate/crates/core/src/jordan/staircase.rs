//! Nested kernels `ker N ⊂ ker N^2 ⊂ ...` of a nilpotent-up-to-noise block,
//! computed without forming powers: level `j + 1` is the kernel of
//! `(I - Pi_j) N`, where `Pi_j` projects onto level `j`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{null_space, svd, CMat};
use crate::Result;

#[derive(Debug, Clone)]
pub(crate) struct Staircase {
    /// Orthonormal new directions at each level; `[W_1, W_2, ...]` is an
    /// orthonormal basis of the deepest kernel found.
    pub layers: Vec<CMat>,
    /// `nullities[k]` = dim ker N^k, starting with `nullities[0] = 0`.
    pub nullities: Vec<usize>,
}

impl Staircase {
    pub fn compute(n: &CMat, threshold: f64) -> Result<Self> {
        let m = n.rows();
        let mut basis = CMat::zeros(m, 0);
        let mut layers = Vec::new();
        let mut nullities = vec![0];
        while basis.cols() < m {
            let reduced = if basis.cols() == 0 {
                n.clone()
            } else {
                n - &basis.matmul(&basis.adjoint_mul(n))
            };
            let z = null_space(&reduced, threshold)?;
            if z.cols() <= basis.cols() {
                break;
            }
            let grow = z.cols() - basis.cols();
            let fresh = if basis.cols() == 0 {
                z
            } else {
                let c = &z - &basis.matmul(&basis.adjoint_mul(&z));
                let dec = svd(&c)?;
                dec.u.submatrix(0..m, 0..grow)
            };
            basis = basis.hstack(&fresh);
            nullities.push(basis.cols());
            layers.push(fresh);
        }
        Ok(Staircase { layers, nullities })
    }

    pub fn dim(&self) -> usize {
        *self.nullities.last().unwrap_or(&0)
    }

    /// Number of blocks of size at least `j`, for `j = 1..`.
    pub fn increments(&self) -> Vec<usize> {
        self.nullities.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Increments must be nonincreasing for the sequence to come from a
    /// nilpotent matrix.
    pub fn is_segre(&self) -> bool {
        self.increments().windows(2).all(|w| w[0] >= w[1])
    }

    /// Jordan block sizes, descending.
    pub fn block_sizes(&self) -> Vec<usize> {
        let inc = self.increments();
        let mut sizes = Vec::new();
        for j in (0..inc.len()).rev() {
            let next = inc.get(j + 1).copied().unwrap_or(0);
            for _ in 0..inc[j].saturating_sub(next) {
                sizes.push(j + 1);
            }
        }
        sizes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn jordan_block_staircase() {
        let j = CMat::jordan_block(3, c64(0.0, 0.0)).direct_sum(&CMat::zeros(1, 1));
        let s = Staircase::compute(&j, 1e-12).unwrap();
        assert_eq!(s.nullities, vec![0, 2, 3, 4]);
        assert!(s.is_segre());
        assert_eq!(s.block_sizes(), vec![3, 1]);
    }

    #[test]
    fn nullities_match_powers() {
        // J_2(0) + J_2(0) + J_1(0) conjugated by a fixed unitary-ish permutation
        let base = CMat::block_diag([
            &CMat::jordan_block(2, c64(0.0, 0.0)),
            &CMat::jordan_block(2, c64(0.0, 0.0)),
            &CMat::zeros(1, 1),
        ]);
        let s = Staircase::compute(&base, 1e-12).unwrap();
        for k in 1..s.nullities.len() {
            let pk = base.pow(k as u32);
            let kernel = null_space(&pk, 1e-12).unwrap().cols();
            assert_eq!(kernel, s.nullities[k]);
        }
        assert_eq!(s.block_sizes(), vec![2, 2, 1]);
    }

    #[test]
    fn invertible_block_has_no_kernel() {
        let s = Staircase::compute(&CMat::identity(2), 1e-12).unwrap();
        assert_eq!(s.dim(), 0);
        assert!(s.block_sizes().is_empty());
    }
}
