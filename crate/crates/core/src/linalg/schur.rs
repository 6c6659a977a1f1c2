//! Complex Schur form `A = Q T Q^H` by Householder reduction to Hessenberg
//! form followed by single-shift implicit QR sweeps.

use alloc::vec::Vec;


// only needed without std, where f64 has no inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use super::{c64, CMat, Givens, C64};
use crate::{Error, Result};

const ITERS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct Schur {
    /// Unitary factor.
    pub q: CMat,
    /// Upper triangular factor; its diagonal lists the eigenvalues.
    pub t: CMat,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.t.diagonal()
    }

    /// `|Q T Q^H - A|_F`.
    pub fn reconstruction_error(&self, a: &CMat) -> f64 {
        (&self.q.matmul(&self.t).matmul(&self.q.adjoint()) - a).frobenius_norm()
    }

    /// Stable reorder of the diagonal by `key` (ascending) using adjacent
    /// swaps. Entries with equal keys keep their relative order and are
    /// never swapped with each other.
    pub fn reorder_by_key<K: PartialOrd + Copy>(&mut self, key: &[K]) {
        let n = self.t.rows();
        assert_eq!(key.len(), n);
        let mut key = key.to_vec();
        for pass in 0..n {
            let mut swapped = false;
            for k in 0..n.saturating_sub(1 + pass) {
                if key[k] > key[k + 1] {
                    schur_swap(&mut self.t, &mut self.q, k);
                    key.swap(k, k + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
    }
}

/// Exchanges the adjacent diagonal entries `k` and `k + 1` of the upper
/// triangular `t` by a unitary similarity, updating `q` so `Q T Q^H` is
/// unchanged.
pub fn schur_swap(t: &mut CMat, q: &mut CMat, k: usize) {
    let n = t.rows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    if t11 == t22 {
        return;
    }
    let (g, _) = Givens::new(t[(k, k + 1)], t22 - t11);
    if k + 2 < n {
        g.rotate_rows(t, k, k + 1, (k + 2)..n);
    }
    g.rotate_cols(t, k, k + 1, 0..k);
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
    g.rotate_cols(q, k, k + 1, 0..q.rows());
}

pub fn schur_upper_triangularize(a: &CMat) -> Result<Schur> {
    a.ensure_square()?;
    a.ensure_finite()?;
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMat::identity(n);
    hessenberg(&mut h, &mut q);
    qr_iterate(&mut h, &mut q)?;
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = c64(0.0, 0.0);
        }
    }
    Ok(Schur { q, t: h })
}

fn hessenberg(h: &mut CMat, q: &mut CMat) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..(n - 2) {
        let tail: f64 = ((k + 2)..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let xnorm = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() == 0.0 { c64(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let mut v: Vec<C64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2 v v^H) H on rows k+1..n
        for j in k..n {
            let dot: C64 = v.iter().enumerate().map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)]).sum();
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= vr * dot * 2.0;
            }
        }
        // H <- H (I - 2 v v^H) on columns k+1..n, and accumulate into Q
        for m in [&mut *h, &mut *q] {
            for i in 0..n {
                let dot: C64 = v.iter().enumerate().map(|(r, vr)| m[(i, k + 1 + r)] * vr).sum();
                for (r, vr) in v.iter().enumerate() {
                    m[(i, k + 1 + r)] -= dot * vr.conj() * 2.0;
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = c64(0.0, 0.0);
        }
    }
}

fn wilkinson_shift(h: &CMat, hi: usize) -> C64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let (plus, minus) = (p + disc, p - disc);
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

fn qr_iterate(h: &mut CMat, q: &mut CMat) -> Result<()> {
    let n = h.rows();
    if n < 2 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let hnorm = h.frobenius_norm();
    let mut hi = n - 1;
    let mut iter = 0usize;
    let budget = ITERS_PER_EIGENVALUE * n;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = hnorm;
            }
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = c64(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > budget {
            let residual = h[(hi, hi - 1)].norm();
            return Err(Error::numerical("Schur QR iteration did not converge", residual, eps * hnorm));
        }
        let shift = if iter.is_multiple_of(10) {
            h[(hi, hi)] + h[(hi, hi - 1)].norm() * 0.75
        } else {
            wilkinson_shift(h, hi)
        };
        for k in l..hi {
            let g = if k == l {
                let (g, _) = Givens::new(h[(l, l)] - shift, h[(l + 1, l)]);
                g.rotate_rows(h, k, k + 1, l..n);
                g
            } else {
                let (g, r) = Givens::new(h[(k, k - 1)], h[(k + 1, k - 1)]);
                g.rotate_rows(h, k, k + 1, k..n);
                h[(k, k - 1)] = r;
                h[(k + 1, k - 1)] = c64(0.0, 0.0);
                g
            };
            g.rotate_cols(h, k, k + 1, 0..(k + 3).min(hi + 1));
            g.rotate_cols(q, k, k + 1, 0..n);
        }
    }
    Ok(())
}
