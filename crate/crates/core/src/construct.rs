//! Building partial isometries with a prescribed Jordan structure, with a
//! similarity certificate.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::decide::decide_partial_isometry;
use crate::jordan::{analyze, similarity_between, JordanSpec, Similarity};
use crate::linalg::{c64, condition_number, CMat, Lu, Tolerances, C64};
use crate::{Error, Result};

/// One zero block together with at most one block per nonzero eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub zero_size: usize,
    /// `(eigenvalue, block size)` in canonical eigenvalue order.
    pub blocks: Vec<(C64, usize)>,
}

impl Group {
    pub fn dim(&self) -> usize {
        self.zero_size + self.blocks.iter().map(|b| b.1).sum::<usize>()
    }

    /// Diagonal of the superdiagonal construction after its leading zero.
    pub fn xis(&self) -> Vec<C64> {
        let mut xis = vec![c64(0.0, 0.0); self.zero_size - 1];
        for &(lambda, size) in &self.blocks {
            xis.extend(core::iter::repeat_n(lambda, size));
        }
        xis
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrouping {
    pub groups: Vec<Group>,
    /// `(zeta, multiplicity)` for eigenvalues on the unit circle.
    pub unitary_part: Vec<(C64, usize)>,
}

/// A target matrix `V` together with `S` such that `S A S^-1 = V`.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub target: CMat,
    pub similarity: CMat,
    pub residual_similarity: f64,
    /// `|V V^* V - V|_F`.
    pub residual_variety: f64,
    pub cond_s: f64,
}

/// Upper triangular partial isometry with diagonal `(0, xis...)`,
/// orthonormal columns after the first, and a positive real superdiagonal.
pub fn superdiagonal_partial_isometry(xis: &[C64]) -> Result<CMat> {
    if let Some(bad) = xis.iter().find(|x| !(x.norm() < 1.0)) {
        return Err(Error::invalid(alloc::format!("superdiagonal construction needs |xi| < 1, got {bad}")));
    }
    let n = xis.len() + 1;
    let mut v = CMat::zeros(n, n);
    for j in 1..n {
        let xi = xis[j - 1];
        // columns 1..j already live in rows 0..j and are orthonormal there
        let w = v.submatrix(0..j, 1..j);
        let mut proj = CMat::identity(j);
        proj = &proj - &w.matmul(&w.adjoint());
        let best = (0..j)
            .max_by(|&a, &b| {
                let na: f64 = (0..j).map(|i| proj[(i, a)].norm_sqr()).sum();
                let nb: f64 = (0..j).map(|i| proj[(i, b)].norm_sqr()).sum();
                na.total_cmp(&nb)
            })
            .unwrap();
        let mut u = proj.col(best);
        for _ in 0..2 {
            let coef = w.adjoint().matvec(&u);
            let back = w.matvec(&coef);
            for (x, b) in u.iter_mut().zip(back) {
                *x -= b;
            }
            let norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for x in u.iter_mut() {
                *x /= norm;
            }
        }
        let pivot = u[j - 1];
        let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { c64(1.0, 0.0) };
        let scale = (1.0 - xi.norm_sqr()).sqrt();
        for (i, x) in u.iter().enumerate() {
            v[(i, j)] = x * phase * scale;
        }
        v[(j - 1, j)] = c64(v[(j - 1, j)].norm(), 0.0);
        v[(j, j)] = xi;
    }
    Ok(v)
}

/// Splits an admissible spec into the unitary part and one group per zero
/// block. Nonzero blocks are dealt round-robin (in canonical eigenvalue
/// order, largest blocks first) over groups ordered by descending zero
/// block size.
pub fn partition_blocks(spec: &JordanSpec) -> Result<BlockGrouping> {
    let decision = decide_partial_isometry(spec);
    if !decision.verdict {
        return Err(Error::NotAdmissible(Box::new(decision)));
    }
    let unitary_part: Vec<(C64, usize)> =
        spec.blocks().iter().filter(|b| b.is_unimodular()).map(|b| (b.eigenvalue, b.multiplicity())).collect();
    let zero_sizes: Vec<usize> = spec.blocks().iter().find(|b| b.is_zero()).map(|b| b.sizes.clone()).unwrap_or_default();
    let mut groups: Vec<Group> =
        zero_sizes.iter().map(|&zero_size| Group { zero_size, blocks: Vec::new() }).collect();
    let m = groups.len();
    let mut next = 0;
    for b in spec.blocks().iter().filter(|b| !b.is_zero() && !b.is_unimodular()) {
        for &size in &b.sizes {
            groups[next % m].blocks.push((b.eigenvalue, size));
            next += 1;
        }
    }
    Ok(BlockGrouping { groups, unitary_part })
}

fn variety_residual(v: &CMat) -> f64 {
    (&v.matmul(&v.adjoint()).matmul(v) - v).frobenius_norm()
}

/// The partial isometry built from a grouping: one superdiagonal block per
/// group followed by the diagonal unitary part.
pub fn assemble(grouping: &BlockGrouping) -> Result<CMat> {
    let mut parts = Vec::with_capacity(grouping.groups.len() + 1);
    for g in &grouping.groups {
        parts.push(superdiagonal_partial_isometry(&g.xis())?);
    }
    let zetas: Vec<C64> =
        grouping.unitary_part.iter().flat_map(|&(z, m)| core::iter::repeat_n(z, m)).collect();
    parts.push(CMat::diag(&zetas));
    Ok(CMat::block_diag(parts.iter()))
}

fn synthesize(spec: &JordanSpec, tol: &Tolerances) -> Result<(CMat, Similarity, f64)> {
    let grouping = partition_blocks(spec)?;
    let v = assemble(&grouping)?;
    let residual_variety = variety_residual(&v);
    if !(residual_variety <= tol.residual_abs) {
        return Err(Error::numerical("partial isometry residual", residual_variety, tol.residual_abs));
    }
    let j = spec.jordan_matrix();
    let sim = similarity_between(&j, &v, tol).map_err(|e| match e {
        Error::NotSimilar => Error::numerical("Jordan structure of the synthesized matrix", f64::NAN, 0.0),
        other => other,
    })?;
    Ok((v, sim, residual_variety))
}

/// Partial isometry `V` with Jordan structure `spec`, and `S` with
/// `S J(spec) S^-1 = V`.
pub fn synthesize_partial_isometry(spec: &JordanSpec, tol: &Tolerances) -> Result<Certificate> {
    let (v, sim, residual_variety) = synthesize(spec, tol)?;
    Ok(Certificate {
        target: v,
        similarity: sim.s,
        residual_similarity: sim.residual,
        residual_variety,
        cond_s: sim.cond,
    })
}

/// Decides whether `a` is similar to a partial isometry and, if so, returns
/// one with the similarity.
pub fn construct_similar_partial_isometry(a: &CMat, tol: &Tolerances) -> Result<Certificate> {
    let analysis = analyze(a, tol)?;
    let decision = decide_partial_isometry(&analysis.spec);
    if !decision.verdict {
        return Err(Error::NotAdmissible(Box::new(decision)));
    }
    let (v, sim, residual_variety) = synthesize(&analysis.spec, tol)?;
    let ta = analysis.transform(a, tol)?;
    let s = sim.s.matmul(&ta.p_inv);
    let s_inv = ta.p.matmul(&sim.s_inv);
    let cond_s = if a.rows() == 0 { 1.0 } else { condition_number(&s)? };
    let residual_similarity = (&s.matmul(a).matmul(&s_inv) - &v).frobenius_norm();
    let bound = similarity_bound(tol, cond_s, a);
    if !(residual_similarity <= bound) {
        return Err(Error::numerical("similarity residual", residual_similarity, bound));
    }
    Ok(Certificate { target: v, similarity: s, residual_similarity, residual_variety, cond_s })
}

/// Acceptance bound for `|S A S^-1 - B|_F`.
pub fn similarity_bound(tol: &Tolerances, cond_s: f64, a: &CMat) -> f64 {
    tol.residual_abs * cond_s * cond_s * a.frobenius_norm().max(1.0)
}

/// `|S A S^-1 - B|_F` and `cond(S)`, recomputed from scratch.
pub fn similarity_residual(a: &CMat, b: &CMat, s: &CMat) -> Result<(f64, f64)> {
    for m in [a, b, s] {
        m.ensure_square()?;
        m.ensure_finite()?;
    }
    if a.rows() != b.rows() || a.rows() != s.rows() {
        return Err(Error::invalid("similarity check: dimension mismatch"));
    }
    if a.rows() == 0 {
        return Ok((0.0, 1.0));
    }
    let cond = condition_number(s)?;
    if !cond.is_finite() {
        return Ok((f64::INFINITY, cond));
    }
    let s_inv = match Lu::new(s) {
        Ok(lu) => lu.solve(&CMat::identity(s.rows())),
        Err(_) => return Ok((f64::INFINITY, f64::INFINITY)),
    };
    Ok(((&s.matmul(a).matmul(&s_inv) - b).frobenius_norm(), cond))
}

/// Splits off the eigenvalues of a partial isometry that lie on the unit
/// circle: returns `(zeta, multiplicity)` pairs and the remaining upper
/// triangular partial isometry, which is unitarily similar to the rest.
pub fn peel_unimodular(v: &CMat, tol: &Tolerances) -> Result<(Vec<(C64, usize)>, CMat)> {
    v.ensure_square()?;
    v.ensure_finite()?;
    let residual = variety_residual(v);
    if !(residual <= tol.residual_abs * (1.0 + v.frobenius_norm().powi(3))) {
        return Err(Error::NotPartialIsometry { residual });
    }
    let analysis = analyze(v, tol)?;
    let mut unitary = Vec::new();
    let mut k = 0;
    for (b, c) in analysis.spec.blocks().iter().zip(&analysis.clusters) {
        if !b.is_unimodular() {
            continue;
        }
        if c.range.start != k {
            return Err(Error::numerical("unimodular eigenvalues are not leading in the Schur form", f64::NAN, 0.0));
        }
        k = c.range.end;
        unitary.push((b.eigenvalue, b.multiplicity()));
    }
    let t = &analysis.schur.t;
    let n = t.rows();
    let zetas: Vec<C64> = unitary.iter().flat_map(|&(z, m)| core::iter::repeat_n(z, m)).collect();
    let t11 = t.submatrix(0..k, 0..k);
    let t12 = t.submatrix(0..k, k..n);
    let coupling = (&t11 - &CMat::diag(&zetas)).frobenius_norm().hypot(t12.frobenius_norm());
    let bound = tol.residual_abs * (1.0 + v.frobenius_norm());
    if !(coupling <= bound) {
        return Err(Error::numerical("decoupling of the unimodular part", coupling, bound));
    }
    Ok((unitary, t.submatrix(k..n, k..n)))
}
