//! Dense complex linear algebra used by every other module.
//!
//! Everything here is written for small desk-scale problems (n up to a few
//! hundred): one-sided Jacobi for the SVD, cyclic Jacobi for Hermitian
//! eigenproblems, Hessenberg + shifted QR for the Schur form.

mod hermitian;
mod lu;
mod mat;
mod schur;
mod svd;
mod tol;

pub use hermitian::hermitian_eigen;
pub use lu::{inverse, solve, Lu};
pub use mat::{c64, CMat, C64};
pub use schur::{schur_swap, schur_upper_triangularize, Schur};
pub use svd::{
    condition_number, null_space, rank_with_tol, singular_values, solve_least_squares, svd, Svd,
};
pub use tol::Tolerances;

// only needed without std, where f64 has no inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

/// Single Givens rotation `[c s; -conj(s) c]` with `c` real, chosen so that
/// applying it to `(f, g)` gives `(r, 0)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Givens {
    pub c: f64,
    pub s: C64,
}

impl Givens {
    pub fn new(f: C64, g: C64) -> (Self, C64) {
        if g == C64::new(0.0, 0.0) {
            return (Givens { c: 1.0, s: C64::new(0.0, 0.0) }, f);
        }
        let fa = f.norm();
        let ga = g.norm();
        if fa == 0.0 {
            return (Givens { c: 0.0, s: g.conj() / ga }, C64::new(ga, 0.0));
        }
        let norm = fa.hypot(ga);
        let phase = f / fa;
        let c = fa / norm;
        let s = phase * g.conj() / norm;
        (Givens { c, s }, phase * norm)
    }

    /// `x <- c x + s y`, `y <- c y - conj(s) x`.
    #[inline]
    pub fn apply(&self, x: C64, y: C64) -> (C64, C64) {
        (x * self.c + self.s * y, y * self.c - self.s.conj() * x)
    }

    /// Rotation acting on rows `i`, `j` over the column range.
    pub fn rotate_rows(&self, m: &mut CMat, i: usize, j: usize, cols: core::ops::Range<usize>) {
        for k in cols {
            let (x, y) = self.apply(m[(i, k)], m[(j, k)]);
            m[(i, k)] = x;
            m[(j, k)] = y;
        }
    }

    /// Applies the conjugate transpose from the right on columns `i`, `j`.
    pub fn rotate_cols(&self, m: &mut CMat, i: usize, j: usize, rows: core::ops::Range<usize>) {
        let g = Givens { c: self.c, s: self.s.conj() };
        for k in rows {
            let (x, y) = g.apply(m[(k, i)], m[(k, j)]);
            m[(k, i)] = x;
            m[(k, j)] = y;
        }
    }
}
