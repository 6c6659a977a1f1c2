use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

// only needed without std, where f64 has no inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{c64, CMat, C64};
use crate::{Error, Result};

/// Distance from the unit circle (or from zero) below which a canonical
/// eigenvalue is treated as lying exactly on it. Specs produced by
/// [`super::jordan_structure`] are already snapped, so this only absorbs
/// the last-ulp error of `z / |z|`.
pub const EXACT_SLACK: f64 = 1e-12;

/// All Jordan blocks belonging to one eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBlocks {
    pub eigenvalue: C64,
    /// Block sizes, descending.
    pub sizes: Vec<usize>,
}

impl EigenBlocks {
    pub fn multiplicity(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.eigenvalue.norm() <= EXACT_SLACK
    }

    pub fn is_unimodular(&self) -> bool {
        (self.eigenvalue.norm() - 1.0).abs() <= EXACT_SLACK
    }
}

/// Jordan structure of a square matrix: for each distinct eigenvalue, the
/// multiset of block sizes. Eigenvalues are kept in canonical order
/// (descending modulus, then ascending argument in `[0, 2pi)`) so two
/// specs for similar matrices list their blocks identically.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanSpec {
    n: usize,
    blocks: Vec<EigenBlocks>,
}

impl JordanSpec {
    /// Validates and canonicalises. `separation` is the minimum distance
    /// required between distinct eigenvalues (normally `cluster_abs`); it
    /// is also the tie width when ordering by modulus.
    pub fn new(blocks: Vec<(C64, Vec<usize>)>, separation: f64) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for (eigenvalue, mut sizes) in blocks {
            if !(eigenvalue.re.is_finite() && eigenvalue.im.is_finite()) {
                return Err(Error::invalid("non-finite eigenvalue in Jordan spec"));
            }
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(Error::invalid("every eigenvalue needs a nonempty list of positive block sizes"));
            }
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            out.push(EigenBlocks { eigenvalue, sizes });
        }
        for i in 0..out.len() {
            for j in (i + 1)..out.len() {
                let d = (out[i].eigenvalue - out[j].eigenvalue).norm();
                if d <= separation {
                    return Err(Error::invalid(alloc::format!(
                        "eigenvalues {} and {} are not separated by more than {separation:e}",
                        out[i].eigenvalue, out[j].eigenvalue
                    )));
                }
            }
        }
        let order = canonical_order(&out.iter().map(|b| b.eigenvalue).collect::<Vec<_>>(), separation);
        let blocks: Vec<EigenBlocks> = order.into_iter().map(|i| out[i].clone()).collect();
        let n = blocks.iter().map(EigenBlocks::multiplicity).sum();
        Ok(JordanSpec { n, blocks })
    }

    pub fn empty() -> Self {
        JordanSpec { n: 0, blocks: Vec::new() }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[EigenBlocks] {
        &self.blocks
    }

    /// Blocks for the eigenvalue within `tol` of `lambda`, if any.
    pub fn find(&self, lambda: C64, tol: f64) -> Option<&EigenBlocks> {
        self.blocks.iter().find(|b| (b.eigenvalue - lambda).norm() <= tol)
    }

    /// Number of Jordan blocks for `lambda` (zero when absent).
    pub fn block_count(&self, lambda: C64, tol: f64) -> usize {
        self.find(lambda, tol).map_or(0, EigenBlocks::count)
    }

    pub fn zero_block_count(&self) -> usize {
        self.blocks.iter().find(|b| b.is_zero()).map_or(0, EigenBlocks::count)
    }

    /// Blocks in matrix layout order: `(eigenvalue, size)`.
    pub fn layout(&self) -> Vec<(C64, usize)> {
        self.blocks.iter().flat_map(|b| b.sizes.iter().map(move |&s| (b.eigenvalue, s))).collect()
    }

    /// `J(spec)`: the block-diagonal Jordan matrix in layout order.
    pub fn jordan_matrix(&self) -> CMat {
        let blocks: Vec<CMat> = self.layout().into_iter().map(|(l, s)| CMat::jordan_block(s, l)).collect();
        CMat::block_diag(blocks.iter())
    }

    /// Eigenvalues with algebraic multiplicity, in layout order.
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.layout().into_iter().flat_map(|(l, s)| vec![l; s]).collect()
    }

    /// Same structure with eigenvalues near the unit circle moved onto it and
    /// eigenvalues near zero set to zero.
    pub fn snapped(&self, tol: f64) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| (snap_eigenvalue(b.eigenvalue, tol), b.sizes.clone()))
            .collect();
        JordanSpec::new(blocks, tol)
    }

    /// Adds one block of the given size, merging with an existing eigenvalue
    /// within `tol`.
    pub fn with_block(&self, lambda: C64, size: usize, tol: f64) -> Result<Self> {
        let mut blocks: Vec<(C64, Vec<usize>)> =
            self.blocks.iter().map(|b| (b.eigenvalue, b.sizes.clone())).collect();
        match blocks.iter_mut().find(|(l, _)| (*l - lambda).norm() <= tol) {
            Some((_, sizes)) => sizes.push(size),
            None => blocks.push((lambda, vec![size])),
        }
        JordanSpec::new(blocks, tol)
    }

    /// Structural equality with eigenvalues compared up to `tol`.
    pub fn approx_eq(&self, other: &JordanSpec, tol: f64) -> bool {
        if self.n != other.n || self.blocks.len() != other.blocks.len() {
            return false;
        }
        let mut used = vec![false; other.blocks.len()];
        for b in &self.blocks {
            let hit = other
                .blocks
                .iter()
                .enumerate()
                .filter(|(j, o)| !used[*j] && (o.eigenvalue - b.eigenvalue).norm() <= tol)
                .min_by(|(_, x), (_, y)| {
                    (x.eigenvalue - b.eigenvalue).norm().total_cmp(&(y.eigenvalue - b.eigenvalue).norm())
                });
            match hit {
                Some((j, o)) if o.sizes == b.sizes => used[j] = true,
                _ => return false,
            }
        }
        true
    }
}

pub(crate) fn snap_eigenvalue(z: C64, tol: f64) -> C64 {
    let r = z.norm();
    if r <= tol {
        c64(0.0, 0.0)
    } else if r != 1.0 && (r - 1.0).abs() <= tol {
        z / r
    } else {
        z
    }
}

/// Argument in `[0, 2pi)`, with values just below `2pi` wrapped to 0 so that
/// `0.5 - 1e-17 i` sorts with `0.5`.
fn arg_key(z: C64) -> f64 {
    if z.norm() == 0.0 {
        return 0.0;
    }
    let mut a = z.im.atan2(z.re);
    if a < 0.0 {
        a += 2.0 * PI;
    }
    if 2.0 * PI - a < 1e-12 {
        0.0
    } else {
        a
    }
}

/// Indices of `values` in canonical order. Moduli within `tie` of each
/// other (chained) are treated as equal and ordered by argument.
pub(crate) fn canonical_order(values: &[C64], tie: f64) -> Vec<usize> {
    let mut by_modulus: Vec<usize> = (0..values.len()).collect();
    by_modulus.sort_by(|&i, &j| values[j].norm().total_cmp(&values[i].norm()));
    let mut group = vec![0usize; values.len()];
    let mut g = 0;
    for w in 1..by_modulus.len() {
        let (prev, cur) = (by_modulus[w - 1], by_modulus[w]);
        if values[prev].norm() - values[cur].norm() > tie {
            g += 1;
        }
        group[cur] = g;
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| group[i].cmp(&group[j]).then(arg_key(values[i]).total_cmp(&arg_key(values[j]))));
    order
}
