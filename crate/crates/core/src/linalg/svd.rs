//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns of a working copy `W = A V` are rotated pairwise until they are
//! mutually orthogonal; the column norms are then the singular values. The
//! method is slow compared with bidiagonal QR but computes small singular
//! values to high relative accuracy, which is what rank decisions need.

use alloc::vec::Vec;


// only needed without std, where f64 has no inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use super::{c64, CMat, Tolerances, C64};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x n`; column `j` is `A v_j / sigma_j`, or zero when `sigma_j == 0`.
    pub u: CMat,
    /// Length `n`, sorted descending.
    pub sigma: Vec<f64>,
    /// `n x n` unitary; columns ordered like `sigma`.
    pub v: CMat,
}

/// Full-column SVD `A V = U diag(sigma)`, `V` square unitary.
pub fn svd(a: &CMat) -> Result<Svd> {
    a.ensure_finite()?;
    let (m, n) = (a.rows(), a.cols());
    // columns are kept in a column-major scratch buffer for cache-friendly sweeps
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = alloc::vec![c64(0.0, 0.0); n];
            e[j] = c64(1.0, 0.0);
            e
        })
        .collect();

    let eps = f64::EPSILON;
    // columns this small are zero to working precision; rotating them
    // against a parallel partner only reshuffles roundoff
    let floor = (eps * a.frobenius_norm()).powi(2);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma: C64 = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = gamma / g; // w_q' = conj(phase) w_q makes the inner product real
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                if t.abs() <= eps {
                    // the rotation would round to the identity
                    continue;
                }
                rotated = true;
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s, phase);
                rotate_pair(&mut v, p, q, c, s, phase);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::numerical("one-sided Jacobi SVD", f64::NAN, f64::NAN));
    }

    let norms: Vec<f64> = w.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(core::cmp::Ordering::Equal));

    let mut u = CMat::zeros(m, n);
    let mut vm = CMat::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        if s > 0.0 {
            for i in 0..m {
                u[(i, k)] = w[j][i] / s;
            }
        }
        for i in 0..n {
            vm[(i, k)] = v[j][i];
        }
    }
    Ok(Svd { u, sigma, v: vm })
}

/// Columns `p < q`: `(x_p, x_q) <- (c x_p - s y, s x_p + c y)` with
/// `y = conj(phase) x_q`.
fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let (head, tail) = cols.split_at_mut(q);
    for (xp, xq) in head[p].iter_mut().zip(tail[0].iter_mut()) {
        let a = *xp;
        let b = *xq * phase.conj();
        *xp = a * c - b * s;
        *xq = a * s + b * c;
    }
}

/// `min(rows, cols)` singular values, descending.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    a.ensure_finite()?;
    let k = a.rows().min(a.cols());
    let dec = if a.cols() <= a.rows() { svd(a)? } else { svd(&a.adjoint())? };
    let mut s = dec.sigma;
    s.truncate(k);
    Ok(s)
}

/// Number of singular values above `rank_rel * sigma_max`.
pub fn rank_with_tol(a: &CMat, tol: &Tolerances) -> Result<usize> {
    let s = singular_values(a)?;
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > tol.rank_rel * smax).count())
}

/// Orthonormal basis (as columns) of the right singular vectors whose
/// singular value is at most `threshold`.
pub fn null_space(a: &CMat, threshold: f64) -> Result<CMat> {
    let dec = svd(a)?;
    let n = a.cols();
    let cols: Vec<usize> = (0..n).filter(|&k| dec.sigma[k] <= threshold).collect();
    Ok(dec.v.select(&(0..n).collect::<Vec<_>>(), &cols))
}

/// `sigma_max / sigma_min` of a square matrix; infinite when singular.
pub fn condition_number(a: &CMat) -> Result<f64> {
    let s = singular_values(a)?;
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => Ok(hi / lo),
        (Some(_), Some(_)) => Ok(f64::INFINITY),
        _ => Ok(1.0),
    }
}

/// Minimum-norm `X` minimising `|A X - B|_F`, via the pseudo-inverse.
pub fn solve_least_squares(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.rows() != b.rows() {
        return Err(Error::invalid(alloc::format!(
            "least squares: A has {} rows but B has {}",
            a.rows(),
            b.rows()
        )));
    }
    b.ensure_finite()?;
    let dec = svd(a)?;
    let n = a.cols();
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    let cutoff = f64::EPSILON * (a.rows().max(n) as f64) * smax;
    // X = V diag(1/sigma) U^H B over the retained singular triplets
    let uhb = dec.u.adjoint_mul(b);
    let mut scaled = CMat::zeros(n, b.cols());
    for k in 0..n {
        if dec.sigma[k] > cutoff && dec.sigma[k] > 0.0 {
            for j in 0..b.cols() {
                scaled[(k, j)] = uhb[(k, j)] / dec.sigma[k];
            }
        }
    }
    Ok(dec.v.matmul(&scaled))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first_example() -> CMat {
        CMat::from_real(2, 2, &[0.0, 3.0f64.sqrt() / 2.0, 0.0, 0.5])
    }

    #[test]
    fn singular_values_of_partial_isometry_example() {
        let s = singular_values(&first_example()).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-15);
        assert!(s[1].abs() < 1e-15);
    }

    #[test]
    fn singular_values_identity_and_diag() {
        let s = singular_values(&CMat::identity(3)).unwrap();
        assert_eq!(s, alloc::vec![1.0, 1.0, 1.0]);
        // 2x2 closed form: sigma^2 are the eigenvalues of A^H A = diag(0, 1/4)
        let s = singular_values(&CMat::from_real(2, 2, &[0.0, 0.0, 0.0, 0.5])).unwrap();
        assert!((s[0] - 0.5).abs() < 1e-16);
        assert_eq!(s[1], 0.0);
    }

    #[test]
    fn closed_form_2x2_oracle() {
        // sigma_{1,2}^2 = (t +- sqrt(t^2 - 4 d^2)) / 2 with t = |A|_F^2, d = |det A|
        let a = CMat::from_complex(2, 2, &[c64(1.0, 2.0), c64(-0.5, 0.0), c64(0.3, -0.7), c64(2.0, 1.0)]);
        let t = a.frobenius_norm().powi(2);
        let d = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).norm();
        let disc = (t * t - 4.0 * d * d).sqrt();
        let s1 = ((t + disc) / 2.0).sqrt();
        let s2 = ((t - disc) / 2.0).sqrt();
        let s = singular_values(&a).unwrap();
        assert!((s[0] - s1).abs() < 1e-13);
        assert!((s[1] - s2).abs() < 1e-13);
    }

    #[test]
    fn rectangular_shapes() {
        let a = CMat::from_real(2, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0]);
        let s = singular_values(&a).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s[0] - 2.0).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15);
        let dec = svd(&a).unwrap();
        assert_eq!(dec.v.rows(), 3);
        let recon = dec.u.matmul(&CMat::diag(&dec.sigma.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>()));
        let av = a.matmul(&dec.v);
        assert!((&recon - &av).frobenius_norm() < 1e-14);
    }

    #[test]
    fn rank_examples() {
        let tol = Tolerances::default();
        assert_eq!(rank_with_tol(&first_example(), &tol).unwrap(), 1);
        assert_eq!(rank_with_tol(&CMat::zeros(4, 4), &tol).unwrap(), 0);
        assert_eq!(rank_with_tol(&CMat::identity(5), &tol).unwrap(), 5);
    }

    #[test]
    fn non_finite_is_invalid_input() {
        let mut a = CMat::identity(2);
        a[(0, 1)] = c64(f64::NAN, 0.0);
        assert!(matches!(singular_values(&a), Err(Error::InvalidInput(_))));
        assert!(matches!(rank_with_tol(&a, &Tolerances::default()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn null_space_of_jordan_block() {
        let j = CMat::jordan_block(3, c64(0.0, 0.0));
        let ns = null_space(&j, 1e-12).unwrap();
        assert_eq!(ns.cols(), 1);
        assert!((ns[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn least_squares_examples() {
        let b = CMat::from_complex(2, 2, &[c64(1.0, 1.0), c64(2.0, 0.0), c64(0.0, 3.0), c64(-1.0, 0.5)]);
        let x = solve_least_squares(&CMat::identity(2), &b).unwrap();
        assert!((&x - &b).frobenius_norm() < 1e-15);

        let a = CMat::from_real(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let x = solve_least_squares(&a, &a).unwrap();
        assert!(x.distance_to_identity() < 1e-14);

        // normal equations: (A^T A) x = A^T b  ->  2 x = 2
        let a = CMat::from_real(2, 1, &[1.0, 1.0]);
        let b = CMat::from_real(2, 1, &[0.0, 2.0]);
        let x = solve_least_squares(&a, &b).unwrap();
        assert!((x[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-15);

        assert!(solve_least_squares(&a, &CMat::zeros(3, 1)).is_err());
    }
}
