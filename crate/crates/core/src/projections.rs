//! Products of two orthogonal projections, the two-projections canonical
//! form, and membership tests for the varieties `xx*x = x`, `xx*x = x^2`
//! and the set of `T` with `TT*T ~ T`.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::construct::{similarity_bound, similarity_residual};
use crate::decide::decide_projection_product;
use crate::jordan::{analyze, jordan_structure, JordanSpec};
use crate::linalg::{c64, condition_number, hermitian_eigen, inverse, null_space, CMat, Tolerances, C64};
use crate::{Error, Result};

/// `P ~ I_d1 + I_d2 + 0_d3 + 0_d4 + sum_j [1 0; 0 0]` and
/// `Q ~ I_d1 + 0_d2 + I_d3 + 0_d4 + sum_j [c^2 cs; cs s^2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoProjectionForm {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub d4: usize,
    /// Cosines `c_j` in `(0, 1)`, descending.
    pub angles: Vec<f64>,
}

impl TwoProjectionForm {
    pub fn dim(&self) -> usize {
        self.d1 + self.d2 + self.d3 + self.d4 + 2 * self.angles.len()
    }

    fn corner(&self) -> usize {
        self.d1 + self.d2 + self.d3 + self.d4
    }

    pub fn p_matrix(&self) -> CMat {
        let mut diag = Vec::with_capacity(self.dim());
        diag.extend(core::iter::repeat_n(1.0, self.d1 + self.d2));
        diag.extend(core::iter::repeat_n(0.0, self.d3 + self.d4));
        for _ in &self.angles {
            diag.extend([1.0, 0.0]);
        }
        let diag: Vec<C64> = diag.into_iter().map(|x| c64(x, 0.0)).collect();
        CMat::diag(&diag)
    }

    pub fn q_matrix(&self) -> CMat {
        let mut corner = Vec::with_capacity(self.corner());
        corner.extend(core::iter::repeat_n(c64(1.0, 0.0), self.d1));
        corner.extend(core::iter::repeat_n(c64(0.0, 0.0), self.d2));
        corner.extend(core::iter::repeat_n(c64(1.0, 0.0), self.d3));
        corner.extend(core::iter::repeat_n(c64(0.0, 0.0), self.d4));
        let mut parts = alloc::vec![CMat::diag(&corner)];
        parts.extend(self.angles.iter().map(|&c| generic_block(c * c)));
        CMat::block_diag(parts.iter())
    }
}

/// `[[mu, sqrt(mu (1 - mu))], [sqrt(mu (1 - mu)), 1 - mu]]`, the generic 2x2
/// block of `Q` with `mu = c^2`.
fn generic_block(mu: f64) -> CMat {
    let cs = (mu * (1.0 - mu)).sqrt();
    CMat::from_real(2, 2, &[mu, cs, cs, 1.0 - mu])
}

fn projection_residual(p: &CMat) -> f64 {
    let idem = (&p.matmul(p) - p).frobenius_norm();
    let herm = (&p.adjoint() - p).frobenius_norm();
    idem.max(herm)
}

fn check_projection(p: &CMat, tol: &Tolerances) -> Result<()> {
    p.ensure_square()?;
    p.ensure_finite()?;
    let residual = projection_residual(p);
    if !(residual <= tol.residual_abs * p.frobenius_norm().max(1.0)) {
        return Err(Error::NotProjection { residual });
    }
    Ok(())
}

fn normalize(v: &mut [C64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Unitary `U` such that `U* P U` and `U* Q U` are the matrices of the
/// returned form.
pub fn canonical_two_projections(p: &CMat, q: &CMat, tol: &Tolerances) -> Result<(TwoProjectionForm, CMat)> {
    check_projection(p, tol)?;
    check_projection(q, tol)?;
    let n = p.rows();
    if q.rows() != n {
        return Err(Error::invalid("projections of different sizes"));
    }
    let (pvals, pvecs) = hermitian_eigen(p)?;
    let ker: Vec<usize> = (0..n).filter(|&i| pvals[i] < 0.5).collect();
    let ran: Vec<usize> = (0..n).filter(|&i| pvals[i] >= 0.5).collect();
    let kernel = pvecs.select(&(0..n).collect::<Vec<_>>(), &ker);
    let range = pvecs.select(&(0..n).collect::<Vec<_>>(), &ran);

    // Q compressed to ran P
    let (mus, w) = hermitian_eigen(&range.adjoint().matmul(q).matmul(&range))?;
    let rotated = range.matmul(&w);
    let mut both = Vec::new();
    let mut p_only = Vec::new();
    let mut pairs: Vec<(f64, Vec<C64>)> = Vec::new();
    let mut snapped = false;
    for (k, &mu) in mus.iter().enumerate() {
        let c = mu.clamp(0.0, 1.0).sqrt();
        let r = rotated.col(k);
        if c >= 1.0 - tol.cluster_abs {
            snapped |= mu < 1.0 - tol.residual_abs;
            both.push(r);
        } else if c <= tol.cluster_abs {
            snapped |= mu > tol.residual_abs;
            p_only.push(r);
        } else {
            pairs.push((c, r));
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut partners: Vec<Vec<C64>> = Vec::with_capacity(pairs.len());
    for (c, r) in &pairs {
        let qr = q.matvec(r);
        let pqr = p.matvec(&qr);
        let s = (1.0 - c * c).sqrt();
        let mut k: Vec<C64> = qr.iter().zip(&pqr).map(|(a, b)| (a - b) / (c * s)).collect();
        for prev in &partners {
            let dot: C64 = prev.iter().zip(&k).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in k.iter_mut().zip(prev) {
                *x -= dot * a;
            }
        }
        normalize(&mut k);
        partners.push(k);
    }

    // part of ker P orthogonal to the partners
    let rest = if partners.is_empty() {
        kernel.clone()
    } else {
        let coords = kernel.adjoint().matmul(&CMat::from_columns(n, &partners));
        let comp = null_space(&coords.adjoint(), 0.5)?;
        kernel.matmul(&comp)
    };
    let (nus, y) = hermitian_eigen(&rest.adjoint().matmul(q).matmul(&rest))?;
    let rest_rot = rest.matmul(&y);
    let mut q_only = Vec::new();
    let mut neither = Vec::new();
    for (k, &nu) in nus.iter().enumerate() {
        if nu >= 0.5 {
            q_only.push(rest_rot.col(k));
        } else {
            neither.push(rest_rot.col(k));
        }
    }

    let form = TwoProjectionForm {
        d1: both.len(),
        d2: p_only.len(),
        d3: q_only.len(),
        d4: neither.len(),
        angles: pairs.iter().map(|x| x.0).collect(),
    };
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    cols.extend(both);
    cols.extend(p_only);
    cols.extend(q_only);
    cols.extend(neither);
    for ((_, r), k) in pairs.into_iter().zip(partners) {
        cols.push(r);
        cols.push(k);
    }
    if cols.len() != n {
        return Err(Error::numerical("two-projection basis dimension", cols.len() as f64, n as f64));
    }
    let u = CMat::from_columns(n, &cols);
    let err = u
        .adjoint_mul(&u)
        .distance_to_identity()
        .max((&u.adjoint().matmul(p).matmul(&u) - &form.p_matrix()).frobenius_norm())
        .max((&u.adjoint().matmul(q).matmul(&u) - &form.q_matrix()).frobenius_norm());
    let mut bound = tol.residual_abs * (1.0 + p.frobenius_norm() + q.frobenius_norm());
    if snapped {
        bound += 2.0 * tol.cluster_abs;
    }
    if !(err <= bound) {
        return Err(Error::numerical("two-projection reconstruction", err, bound));
    }
    Ok((form, u))
}

/// Projections `P`, `Q` in canonical coordinates with `PQ` similar to
/// `J(spec)` via `S`.
#[derive(Debug, Clone)]
pub struct ProjectionCertificate {
    pub p: CMat,
    pub q: CMat,
    pub form: TwoProjectionForm,
    /// `S J(spec) S^-1 = PQ`.
    pub similarity: CMat,
    pub residual_similarity: f64,
    /// Largest of the projection residuals of `P`, `Q` and
    /// `|X X* X - X^2|_F` for `X = PQ`.
    pub residual_variety: f64,
    pub cond_s: f64,
}

pub fn construct_projection_pair(spec: &JordanSpec, tol: &Tolerances) -> Result<ProjectionCertificate> {
    let decision = decide_projection_product(spec, tol);
    if !decision.verdict {
        return Err(Error::NotAdmissible(Box::new(decision)));
    }
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    let mut interior = Vec::new();
    for b in spec.blocks() {
        let lambda = b.eigenvalue;
        if (lambda - c64(1.0, 0.0)).norm() <= tol.cluster_abs {
            ones.extend(core::iter::repeat_n(lambda, b.count()));
        } else if lambda.norm() <= tol.cluster_abs {
            zeros.extend(core::iter::repeat_n(lambda, b.count()));
        } else {
            interior.extend(core::iter::repeat_n(lambda.re, b.count()));
        }
    }
    interior.sort_by(|a, b| b.total_cmp(a));
    let surplus = zeros.len() - interior.len();
    let form = TwoProjectionForm {
        d1: ones.len(),
        d2: 0,
        d3: 0,
        d4: surplus,
        angles: interior.iter().map(|mu| mu.sqrt()).collect(),
    };
    let p = form.p_matrix();
    let corner: Vec<C64> = ones.iter().copied().chain(core::iter::repeat_n(c64(0.0, 0.0), surplus)).collect();
    let mut q_parts = alloc::vec![CMat::diag(&corner)];
    q_parts.extend(interior.iter().map(|&mu| generic_block(mu)));
    let q = CMat::block_diag(q_parts.iter());
    let x = p.matmul(&q);

    // PQ = W D W^-1 with the 2x2 blocks [[mu, cs],[0,0]] = X diag(mu, 0) X^-1
    let mut w_parts = alloc::vec![CMat::identity(form.corner())];
    let mut d: Vec<C64> = corner.clone();
    for &mu in &interior {
        let (c, s) = (mu.sqrt(), (1.0 - mu).sqrt());
        w_parts.push(CMat::from_real(2, 2, &[1.0, s, 0.0, -c]));
        d.push(c64(mu, 0.0));
        d.push(c64(0.0, 0.0));
    }
    let w = CMat::block_diag(w_parts.iter());
    let j = spec.jordan_matrix();
    let layout = spec.eigenvalues();
    let n = layout.len();
    let mut used = alloc::vec![false; n];
    let mut m = CMat::zeros(n, n);
    for (i, &di) in d.iter().enumerate() {
        let target = if di == c64(0.0, 0.0) && !zeros.is_empty() { zeros[0] } else { di };
        let pos = (0..n)
            .filter(|&k| !used[k])
            .min_by(|&a, &b| (layout[a] - target).norm().total_cmp(&(layout[b] - target).norm()))
            .ok_or_else(|| Error::numerical("eigenvalue matching", f64::NAN, 0.0))?;
        used[pos] = true;
        m[(i, pos)] = c64(1.0, 0.0);
    }
    let s = w.matmul(&m);
    let (residual_similarity, cond_s) = if n == 0 {
        (0.0, 1.0)
    } else {
        let s_inv = inverse(&s)?;
        ((&s.matmul(&j).matmul(&s_inv) - &x).frobenius_norm(), condition_number(&s)?)
    };
    let bound = similarity_bound(tol, cond_s, &j);
    if !(residual_similarity <= bound) {
        return Err(Error::numerical("similarity residual", residual_similarity, bound));
    }
    let residual_variety = projection_residual(&p)
        .max(projection_residual(&q))
        .max(pp_residual(&x));
    if !(residual_variety <= tol.residual_abs) {
        return Err(Error::numerical("projection residual", residual_variety, tol.residual_abs));
    }
    Ok(ProjectionCertificate { p, q, form, similarity: s, residual_similarity, residual_variety, cond_s })
}

/// Decides whether `a` is similar to a product of two orthogonal
/// projections and, if so, returns a pair with `S A S^-1 = PQ`.
pub fn construct_similar_projection_product(a: &CMat, tol: &Tolerances) -> Result<ProjectionCertificate> {
    let analysis = analyze(a, tol)?;
    let mut cert = construct_projection_pair(&analysis.spec, tol)?;
    let ta = analysis.transform(a, tol)?;
    let s = cert.similarity.matmul(&ta.p_inv);
    let x = cert.p.matmul(&cert.q);
    let (residual_similarity, cond_s) = similarity_residual(a, &x, &s)?;
    let bound = similarity_bound(tol, cond_s, a);
    if !(residual_similarity <= bound) {
        return Err(Error::numerical("similarity residual", residual_similarity, bound));
    }
    cert.similarity = s;
    cert.residual_similarity = residual_similarity;
    cert.cond_s = cond_s;
    Ok(cert)
}

fn pp_residual(x: &CMat) -> f64 {
    (&x.matmul(&x.adjoint()).matmul(x) - &x.matmul(x)).frobenius_norm()
}

fn variety_bound(x: &CMat, tol: &Tolerances) -> f64 {
    tol.residual_abs * (1.0 + x.frobenius_norm().powi(3))
}

/// Whether `X X* X = X` within tolerance, that is whether `X` is a partial
/// isometry.
pub fn in_variety_pi(x: &CMat, tol: &Tolerances) -> bool {
    if !x.is_finite() {
        return false;
    }
    let residual = (&x.matmul(&x.adjoint()).matmul(x) - x).frobenius_norm();
    residual <= variety_bound(x, tol)
}

/// Whether `X X* X = X^2` within tolerance.
pub fn in_variety_pp(x: &CMat, tol: &Tolerances) -> bool {
    if !x.is_square() || !x.is_finite() {
        return false;
    }
    pp_residual(x) <= variety_bound(x, tol)
}

/// Whether `T T* T` has the same Jordan structure as `T`, eigenvalues
/// compared up to `cluster_abs`.
pub fn in_set_s(t: &CMat, tol: &Tolerances) -> Result<bool> {
    t.ensure_square()?;
    let lhs = jordan_structure(&t.matmul(&t.adjoint()).matmul(t), tol)?;
    let rhs = jordan_structure(t, tol)?;
    Ok(lhs.approx_eq(&rhs, tol.cluster_abs))
}
