use alloc::vec::Vec;


// only needed without std, where f64 has no inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use super::{c64, CMat};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `H = X diag(w) X^H` of a Hermitian matrix by cyclic
/// complex Jacobi rotations. Eigenvalues are returned ascending with
/// matching eigenvector columns.
///
/// Only the Hermitian part `(H + H^H) / 2` is used.
pub fn hermitian_eigen(h: &CMat) -> Result<(Vec<f64>, CMat)> {
    h.ensure_square()?;
    h.ensure_finite()?;
    let n = h.rows();
    let mut a = CMat::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut x = CMat::identity(n);

    let scale = a.frobenius_norm();
    let mut done = n < 2 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if done {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale {
            done = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= f64::EPSILON * 1e-3 * scale {
                    continue;
                }
                // Rotate in the (p, q) plane with J = [[c, -s e],[s conj(e), c]], e = apq/|apq|
                let e = apq / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns: A <- A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * e.conj() * s;
                    a[(k, q)] = akp * e * s + akq * c;
                }
                // rows: A <- J^H A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * e * s;
                    a[(q, k)] = apk * e.conj() * s + aqk * c;
                }
                a[(p, q)] = c64(0.0, 0.0);
                a[(q, p)] = c64(0.0, 0.0);
                a[(p, p)] = c64(a[(p, p)].re, 0.0);
                a[(q, q)] = c64(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let xkp = x[(k, p)];
                    let xkq = x[(k, q)];
                    x[(k, p)] = xkp * c - xkq * e.conj() * s;
                    x[(k, q)] = xkp * e * s + xkq * c;
                }
            }
        }
    }
    if !done {
        return Err(Error::numerical("Hermitian Jacobi eigensolver", f64::NAN, f64::NAN));
    }
    let w: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[i].partial_cmp(&w[j]).unwrap());
    let vals = order.iter().map(|&i| w[i]).collect();
    let vecs = x.select(&(0..n).collect::<Vec<_>>(), &order);
    Ok((vals, vecs))
}
