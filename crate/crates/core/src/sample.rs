//! Random test inputs: Haar unitaries, projections, partial isometries,
//! well-conditioned similarities and admissible Jordan specs.
//!
//! Everything draws from a caller-supplied generator so runs are
//! reproducible from a seed.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::jordan::JordanSpec;
use crate::linalg::{c64, CMat, Tolerances, C64};

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    })
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `R`'s diagonal pushed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = complex_gaussian(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.col(j);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &cols {
                let dot: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= dot * a;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let r = g.col(j).iter().zip(&v).map(|(a, b)| b.conj() * a).sum::<C64>() / norm;
        let phase = if r.norm() > 0.0 { r / r.norm() } else { c64(1.0, 0.0) };
        for x in v.iter_mut() {
            *x = *x / norm * phase;
        }
        cols.push(v);
    }
    CMat::from_columns(n, &cols)
}

/// Orthogonal projection onto a random subspace of dimension `rank`.
pub fn random_projection<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> CMat {
    let u = random_unitary(rng, n);
    let b = u.submatrix(0..n, 0..rank.min(n));
    b.matmul(&b.adjoint())
}

/// `U P` with `U` Haar unitary and `P` a projection of uniformly random rank.
pub fn random_partial_isometry<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let rank = rng.random_range(0..=n);
    let u = random_unitary(rng, n);
    u.matmul(&random_projection(rng, n, rank))
}

/// `U diag(s) W` with singular values in `[1, cond]`, both ends attained
/// when `n >= 2`.
pub fn well_conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize, cond: f64) -> CMat {
    let u = random_unitary(rng, n);
    let w = random_unitary(rng, n);
    let s: Vec<C64> = (0..n)
        .map(|k| match k {
            0 => c64(1.0, 0.0),
            1 => c64(cond, 0.0),
            _ => c64(rng.random_range(1.0..=cond), 0.0),
        })
        .collect();
    u.matmul(&CMat::diag(&s)).matmul(&w)
}

/// Uniform point in the disk of radius `r`.
pub fn disk_point<R: Rng + ?Sized>(rng: &mut R, r: f64) -> C64 {
    let rho = r * rng.random::<f64>().sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    c64(rho * theta.cos(), rho * theta.sin())
}

/// Point with modulus exactly 1 in floating point.
pub fn circle_point<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    loop {
        let theta = 2.0 * PI * rng.random::<f64>();
        let mut z = c64(theta.cos(), theta.sin());
        for _ in 0..4 {
            let r = z.norm();
            if r == 1.0 {
                return z;
            }
            z /= r;
        }
    }
}

/// `k` values with `|xi| <= r`.
pub fn random_xis<R: Rng + ?Sized>(rng: &mut R, k: usize, r: f64) -> Vec<C64> {
    (0..k).map(|_| disk_point(rng, r)).collect()
}

/// `n` points of the closed unit disk mixing exact zeros, points on the
/// circle and interior points.
pub fn random_disk_tuple<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| match rng.random_range(0..4) {
            0 => c64(0.0, 0.0),
            1 => circle_point(rng),
            _ => disk_point(rng, 1.0),
        })
        .collect()
}

/// Shape of the random admissible specs.
#[derive(Debug, Clone, Copy)]
pub struct SpecShape {
    pub max_dim: usize,
    /// Largest modulus of an eigenvalue inside the disk.
    pub max_modulus: f64,
    /// Minimum distance between distinct eigenvalues (and from zero).
    pub separation: f64,
    pub max_block: usize,
    /// Whether eigenvalues on the unit circle may appear.
    pub unimodular: bool,
}

impl Default for SpecShape {
    fn default() -> Self {
        SpecShape { max_dim: 20, max_modulus: 0.95, separation: 1e-3, max_block: 4, unimodular: false }
    }
}

fn separated_point<R: Rng + ?Sized>(rng: &mut R, taken: &[C64], sep: f64, draw: impl Fn(&mut R) -> C64) -> C64 {
    loop {
        let z = draw(rng);
        if taken.iter().all(|t| (*t - z).norm() >= sep) {
            return z;
        }
    }
}

/// Random spec satisfying the partial-isometry criterion: at least as many
/// zero blocks as blocks of any eigenvalue inside the disk, and only
/// semisimple eigenvalues on the circle.
pub fn random_admissible_spec<R: Rng + ?Sized>(rng: &mut R, shape: &SpecShape) -> JordanSpec {
    let n = rng.random_range(1..=shape.max_dim.max(1));
    let mut remaining = n;
    let mut taken: Vec<C64> = vec![c64(0.0, 0.0)];
    let mut blocks: Vec<(C64, Vec<usize>)> = Vec::new();

    if shape.unimodular && rng.random_bool(0.5) {
        let kinds = rng.random_range(1..=remaining.min(3));
        for _ in 0..kinds {
            if remaining == 0 {
                break;
            }
            let z = separated_point(rng, &taken, shape.separation, |r| circle_point(r));
            let mult = rng.random_range(1..=remaining.min(3));
            remaining -= mult;
            taken.push(z);
            blocks.push((z, vec![1; mult]));
        }
    }
    if remaining > 0 {
        let zero_blocks = rng.random_range(1..=remaining.min(3));
        let mut sizes = Vec::new();
        for k in 0..zero_blocks {
            let left_for_others = zero_blocks - k - 1;
            let cap = (remaining - left_for_others).min(shape.max_block).max(1);
            let s = rng.random_range(1..=cap);
            remaining -= s;
            sizes.push(s);
        }
        blocks.push((c64(0.0, 0.0), sizes));
        let m = zero_blocks;
        while remaining > 0 {
            let z = separated_point(rng, &taken, shape.separation, |r| disk_point(r, shape.max_modulus));
            taken.push(z);
            let count = rng.random_range(1..=m.min(remaining));
            let mut sizes = Vec::new();
            for k in 0..count {
                let cap = (remaining - (count - k - 1)).min(shape.max_block).max(1);
                let s = rng.random_range(1..=cap);
                remaining -= s;
                sizes.push(s);
            }
            blocks.push((z, sizes));
        }
    }
    JordanSpec::new(blocks, Tolerances::default().cluster_abs).expect("generated spec is valid")
}

/// Random spec satisfying the projection-product criterion: eigenvalues
/// in `[0, 1]`, all blocks of size 1, and at least as many zeros as
/// eigenvalues strictly inside `(0, 1)`.
pub fn random_projection_product_spec<R: Rng + ?Sized>(rng: &mut R, max_dim: usize, separation: f64) -> JordanSpec {
    let n = rng.random_range(1..=max_dim.max(1));
    let interior = rng.random_range(0..=n / 2);
    let zeros = rng.random_range(interior..=n - interior);
    let ones = n - interior - zeros;
    let mut blocks: Vec<(C64, Vec<usize>)> = Vec::new();
    let mut taken: Vec<f64> = Vec::new();
    let mut left = interior;
    while left > 0 {
        let c = loop {
            let c = rng.random_range(0.05..0.95);
            if taken.iter().all(|t| (t - c).abs() >= separation) {
                break c;
            }
        };
        taken.push(c);
        let mult = rng.random_range(1..=left);
        left -= mult;
        blocks.push((c64(c, 0.0), vec![1; mult]));
    }
    if zeros > 0 {
        blocks.push((c64(0.0, 0.0), vec![1; zeros]));
    }
    if ones > 0 {
        blocks.push((c64(1.0, 0.0), vec![1; ones]));
    }
    JordanSpec::new(blocks, Tolerances::default().cluster_abs).expect("generated spec is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::{decide_partial_isometry, decide_projection_product};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(&mut rng, 6);
        assert!(u.adjoint_mul(&u).distance_to_identity() < 1e-13);
    }

    #[test]
    fn projection_is_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_projection(&mut rng, 5, 2);
        assert!((&p.matmul(&p) - &p).frobenius_norm() < 1e-13);
        assert!((&p.adjoint() - &p).frobenius_norm() < 1e-14);
        assert!((p.trace() - c64(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn well_conditioned_condition_number() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = well_conditioned(&mut rng, 5, 50.0);
        let k = crate::linalg::condition_number(&s).unwrap();
        assert!((k - 50.0).abs() < 1e-8);
    }

    #[test]
    fn generated_specs_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let shape = SpecShape { unimodular: true, ..SpecShape::default() };
        for _ in 0..100 {
            let spec = random_admissible_spec(&mut rng, &shape);
            assert!(decide_partial_isometry(&spec).verdict, "{spec:?}");
            let pp = random_projection_product_spec(&mut rng, 16, 1e-3);
            assert!(decide_projection_product(&pp, &Tolerances::default()).verdict, "{pp:?}");
        }
    }
}
