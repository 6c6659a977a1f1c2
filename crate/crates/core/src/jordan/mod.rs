//! Jordan structure, Jordan transforms and similarities between matrices.
//!
//! Eigenvalues come from a Schur form. Diagonal entries closer than
//! `cluster_abs` are single-linkage clustered; a defective eigenvalue of a
//! perturbed matrix spreads over a ring of radius about `delta^(1/k)`, so
//! clusters whose spread is consistent with that law are merged as well,
//! but only when the staircase of kernels on the merged Schur block
//! confirms a nilpotent block of the full size. Kernel dimensions are
//! measured against `rank_rel * sigma_max(A)`.

mod cluster;
mod spec;
mod staircase;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;


use crate::linalg::{c64, condition_number, singular_values, CMat, Lu, Schur, Tolerances, C64};
use crate::{Error, Result};

pub use spec::{EigenBlocks, JordanSpec, EXACT_SLACK};
pub(crate) use spec::{canonical_order, snap_eigenvalue};
use staircase::Staircase;

/// `n - rank(A - lambda I)`, singular values counted as zero below
/// `rank_rel` times the larger of `|A|_2` and `|A - lambda I|_2`.
pub fn nullity_at(a: &CMat, lambda: C64, tol: &Tolerances) -> Result<usize> {
    a.ensure_square()?;
    let scale = singular_values(a)?.first().copied().unwrap_or(0.0);
    let shifted = singular_values(&a.shifted(lambda))?;
    let threshold = tol.rank_rel * scale.max(shifted.first().copied().unwrap_or(0.0));
    Ok(shifted.iter().filter(|&&s| s <= threshold).count())
}

/// One eigenvalue cluster of an analysed matrix.
#[derive(Debug, Clone)]
pub struct Cluster {
    /// Representative after snapping to the unit circle or to zero.
    pub eigenvalue: C64,
    /// Arithmetic mean of the Schur diagonal entries in the cluster.
    pub center: C64,
    /// Position of the cluster in the reordered Schur factor.
    pub range: Range<usize>,
    /// `dim ker (A - lambda I)^k` for `k = 0, 1, ...` up to the multiplicity.
    pub nullities: Vec<usize>,
    stairs: Staircase,
}

/// Everything computed on the way to a [`JordanSpec`].
#[derive(Debug, Clone)]
pub struct JordanAnalysis {
    pub spec: JordanSpec,
    /// Schur form reordered so clusters are contiguous and in spec order.
    pub schur: Schur,
    /// In spec order.
    pub clusters: Vec<Cluster>,
    /// `sigma_max(A)`; kernel thresholds are `rank_rel * scale`.
    pub scale: f64,
}

/// `P` with `P^-1 A P = J(spec)`.
#[derive(Debug, Clone)]
pub struct JordanTransform {
    pub p: CMat,
    pub p_inv: CMat,
    pub cond: f64,
    /// `|P^-1 A P - J(spec)|_F`.
    pub residual: f64,
}

/// `S` with `S A S^-1 = B`.
#[derive(Debug, Clone)]
pub struct Similarity {
    pub s: CMat,
    pub s_inv: CMat,
    pub cond: f64,
    /// `|S A S^-1 - B|_F`.
    pub residual: f64,
}

pub fn jordan_structure(a: &CMat, tol: &Tolerances) -> Result<JordanSpec> {
    Ok(analyze(a, tol)?.spec)
}

pub fn analyze(a: &CMat, tol: &Tolerances) -> Result<JordanAnalysis> {
    tol.validate()?;
    a.ensure_square()?;
    a.ensure_finite()?;
    let n = a.rows();
    let scale = singular_values(a)?.first().copied().unwrap_or(0.0);
    if n == 0 {
        return Ok(JordanAnalysis {
            spec: JordanSpec::empty(),
            schur: Schur { q: CMat::zeros(0, 0), t: CMat::zeros(0, 0) },
            clusters: Vec::new(),
            scale,
        });
    }
    let threshold = tol.rank_rel * scale;
    let mut schur = crate::linalg::schur_upper_triangularize(a)?;
    let groups = cluster::group_eigenvalues(&schur, tol, scale, threshold)?;

    let centers: Vec<C64> = groups
        .iter()
        .map(|g| {
            // offsets from the first member, so identical entries average exactly
            let base = schur.t[(g[0], g[0])];
            base + g.iter().map(|&i| schur.t[(i, i)] - base).sum::<C64>() / g.len() as f64
        })
        .collect();
    let reps: Vec<C64> = centers.iter().map(|&c| snap_eigenvalue(c, tol.cluster_abs)).collect();
    let order = canonical_order(&reps, tol.cluster_abs);
    let mut rank = vec![0usize; groups.len()];
    for (pos, &g) in order.iter().enumerate() {
        rank[g] = pos;
    }
    let mut key = vec![0usize; n];
    for (g, members) in groups.iter().enumerate() {
        for &i in members {
            key[i] = rank[g];
        }
    }
    schur.reorder_by_key(&key);

    let mut clusters = Vec::with_capacity(groups.len());
    let mut start = 0;
    for &g in &order {
        let m = groups[g].len();
        let range = start..start + m;
        start += m;
        let block = schur.t.submatrix(range.clone(), range.clone());
        let stairs = Staircase::compute(&block.shifted(centers[g]), threshold)?;
        if stairs.dim() != m {
            return Err(Error::numerical(
                alloc::format!("kernel staircase at eigenvalue {} stalls below its multiplicity {m}", reps[g]),
                stairs.dim() as f64,
                m as f64,
            ));
        }
        if !stairs.is_segre() {
            return Err(Error::numerical(
                alloc::format!("nullity sequence at eigenvalue {} is not concave", reps[g]),
                f64::NAN,
                threshold,
            ));
        }
        clusters.push(Cluster {
            eigenvalue: reps[g],
            center: centers[g],
            range,
            nullities: stairs.nullities.clone(),
            stairs,
        });
    }

    let spec = JordanSpec::new(
        clusters.iter().map(|c| (c.eigenvalue, c.stairs.block_sizes())).collect(),
        tol.cluster_abs,
    )
    .map_err(|_| ambiguity(&clusters))?;
    if spec.blocks().iter().zip(&clusters).any(|(b, c)| b.eigenvalue != c.eigenvalue) {
        return Err(ambiguity(&clusters));
    }
    Ok(JordanAnalysis { spec, schur, clusters, scale })
}

fn ambiguity(clusters: &[Cluster]) -> Error {
    let mut best = (f64::INFINITY, 0, 0);
    for i in 0..clusters.len() {
        for j in (i + 1)..clusters.len() {
            let d = (clusters[i].eigenvalue - clusters[j].eigenvalue).norm();
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    let (d, i, j) = best;
    let (a, b) = (clusters[i].eigenvalue, clusters[j].eigenvalue);
    Error::ClusterAmbiguity { first: [a.re, a.im], second: [b.re, b.im], distance: d }
}

impl JordanAnalysis {
    /// Builds `P = Q Y Z`: `Q` from Schur, `Y` decouples the clusters, `Z`
    /// holds Jordan chains inside each cluster.
    pub fn transform(&self, a: &CMat, tol: &Tolerances) -> Result<JordanTransform> {
        let n = a.rows();
        if n == 0 {
            let e = CMat::zeros(0, 0);
            return Ok(JordanTransform { p: e.clone(), p_inv: e, cond: 1.0, residual: 0.0 });
        }
        let t = &self.schur.t;
        let ranges: Vec<Range<usize>> = self.clusters.iter().map(|c| c.range.clone()).collect();
        let y = decouple(t, &ranges);
        let chains: Vec<CMat> = self
            .clusters
            .iter()
            .map(|c| {
                let block = t.submatrix(c.range.clone(), c.range.clone());
                chain_basis(&block.shifted(c.center), &c.stairs)
            })
            .collect::<Result<_>>()?;
        let z = CMat::block_diag(chains.iter());
        let mut p = self.schur.q.matmul(&y).matmul(&z);
        fix_chain_phases(&mut p, &self.spec);
        let lu = Lu::new(&p)?;
        let p_inv = lu.solve(&CMat::identity(n));
        let cond = condition_number(&p)?;
        let j = self.spec.jordan_matrix();
        let residual = (&p_inv.matmul(&a.matmul(&p)) - &j).frobenius_norm();
        let bound = tol.residual_abs * cond * a.frobenius_norm().max(1.0);
        if !(residual <= bound) {
            return Err(Error::numerical("Jordan transform residual", residual, bound));
        }
        Ok(JordanTransform { p, p_inv, cond, residual })
    }
}

/// `P` with `P^-1 A P = J(spec)`. `spec` must match the structure of `A`.
pub fn jordan_transform(a: &CMat, spec: &JordanSpec, tol: &Tolerances) -> Result<JordanTransform> {
    let analysis = analyze(a, tol)?;
    if !analysis.spec.approx_eq(spec, tol.cluster_abs) {
        return Err(Error::invalid("spec does not match the Jordan structure of the matrix"));
    }
    analysis.transform(a, tol)
}

/// `S` with `S A S^-1 = B`, composed as `P_B * Pi * P_A^-1`.
pub fn similarity_between(a: &CMat, b: &CMat, tol: &Tolerances) -> Result<Similarity> {
    if a.rows() != b.rows() {
        a.ensure_square()?;
        b.ensure_square()?;
        return Err(Error::NotSimilar);
    }
    let ja = analyze(a, tol)?;
    let jb = analyze(b, tol)?;
    if !ja.spec.approx_eq(&jb.spec, tol.cluster_abs) {
        return Err(Error::NotSimilar);
    }
    let ta = ja.transform(a, tol)?;
    let tb = jb.transform(b, tol)?;
    let perm = block_matching(&ja.spec, &jb.spec, tol.cluster_abs)?;
    // S = P_B Pi P_A^-1, Pi e_i = e_perm[i]
    let n = a.rows();
    let mut pi = CMat::zeros(n, n);
    for (i, &k) in perm.iter().enumerate() {
        pi[(k, i)] = c64(1.0, 0.0);
    }
    let s = tb.p.matmul(&pi).matmul(&ta.p_inv);
    let s_inv = ta.p.matmul(&pi.adjoint()).matmul(&tb.p_inv);
    let cond = if n == 0 { 1.0 } else { condition_number(&s)? };
    let residual = (&s.matmul(a).matmul(&s_inv) - b).frobenius_norm();
    let bound = tol.residual_abs * cond * cond * a.frobenius_norm().max(1.0);
    if !(residual <= bound) {
        return Err(Error::numerical("similarity residual", residual, bound));
    }
    Ok(Similarity { s, s_inv, cond, residual })
}

/// Index map from basis positions of `J(a)` to those of `J(b)`, pairing
/// blocks of equal size and matching eigenvalue.
fn block_matching(a: &JordanSpec, b: &JordanSpec, tol: f64) -> Result<Vec<usize>> {
    let la = a.layout();
    let lb = b.layout();
    let offsets = |l: &[(C64, usize)]| {
        let mut off = Vec::with_capacity(l.len());
        let mut acc = 0;
        for &(_, s) in l {
            off.push(acc);
            acc += s;
        }
        off
    };
    let (oa, ob) = (offsets(&la), offsets(&lb));
    let mut used = vec![false; lb.len()];
    let mut perm = vec![0; a.dim()];
    for (i, &(lambda, size)) in la.iter().enumerate() {
        let k = (0..lb.len())
            .find(|&k| !used[k] && lb[k].1 == size && (lb[k].0 - lambda).norm() <= tol)
            .ok_or(Error::NotSimilar)?;
        used[k] = true;
        for r in 0..size {
            perm[oa[i] + r] = ob[k] + r;
        }
    }
    Ok(perm)
}

/// Upper block-triangular `Y` with identity diagonal blocks and
/// `T Y = Y D`, `D` the block diagonal of `T` over `ranges`.
fn decouple(t: &CMat, ranges: &[Range<usize>]) -> CMat {
    let n = t.rows();
    let mut y = CMat::identity(n);
    for j in 1..ranges.len() {
        let rj = ranges[j].clone();
        let tjj = t.submatrix(rj.clone(), rj.clone());
        for i in (0..j).rev() {
            let ri = ranges[i].clone();
            let mut c = t.submatrix(ri.clone(), rj.clone()).scale(c64(-1.0, 0.0));
            for rl in &ranges[(i + 1)..j] {
                let til = t.submatrix(ri.clone(), rl.clone());
                let ylj = y.submatrix(rl.clone(), rj.clone());
                c = &c - &til.matmul(&ylj);
            }
            let tii = t.submatrix(ri.clone(), ri.clone());
            let x = triangular_sylvester(&tii, &tjj, &c);
            y.set_block(ri.start, rj.start, &x);
        }
    }
    y
}

/// Solves `A X - X B = C` for upper triangular `A`, `B` with disjoint spectra.
fn triangular_sylvester(a: &CMat, b: &CMat, c: &CMat) -> CMat {
    let (m, k) = (a.rows(), b.rows());
    let mut x = CMat::zeros(m, k);
    for col in 0..k {
        // (A - b_cc I) x_c = c_c + sum_{l < c} x_l b_lc
        let mut rhs: Vec<C64> = (0..m).map(|i| c[(i, col)]).collect();
        for l in 0..col {
            let blc = b[(l, col)];
            for (i, r) in rhs.iter_mut().enumerate() {
                *r += x[(i, l)] * blc;
            }
        }
        let shift = b[(col, col)];
        for i in (0..m).rev() {
            let mut acc = rhs[i];
            for j in (i + 1)..m {
                acc -= a[(i, j)] * x[(j, col)];
            }
            x[(i, col)] = acc / (a[(i, i)] - shift);
        }
    }
    x
}

/// Columns `[N^(s-1) h, ..., N h, h]` for every chain head `h`, longest
/// chains first.
fn chain_basis(n: &CMat, stairs: &Staircase) -> Result<CMat> {
    let m = n.rows();
    let depth = stairs.layers.len();
    let mut heads: Vec<(usize, Vec<C64>)> = Vec::new();
    let mut current: Vec<Vec<C64>> = Vec::new();
    for level in (1..=depth).rev() {
        let w = &stairs.layers[level - 1];
        let need = w.cols().saturating_sub(current.len());
        if need > 0 {
            let fresh = if current.is_empty() {
                w.clone()
            } else {
                // directions of W orthogonal to the W-components of the existing vectors
                let e = w.adjoint_mul(&CMat::from_columns(m, &current));
                let dec = crate::linalg::svd(&e.adjoint())?;
                let b = w.cols();
                let comp = dec.v.submatrix(0..b, (b - need)..b);
                w.matmul(&comp)
            };
            for k in 0..fresh.cols() {
                let h = fresh.col(k);
                heads.push((level, h.clone()));
                current.push(h);
            }
        }
        current = current.iter().map(|v| n.matvec(v)).collect();
    }
    let mut cols = Vec::with_capacity(m);
    for (size, h) in heads {
        let mut chain = vec![h];
        for _ in 1..size {
            let next = n.matvec(chain.last().unwrap());
            chain.push(next);
        }
        chain.reverse();
        cols.extend(chain);
    }
    if cols.len() != m {
        return Err(Error::numerical("Jordan chain count", cols.len() as f64, m as f64));
    }
    Ok(CMat::from_columns(m, &cols))
}

/// Rescales each Jordan chain in `p` by a unimodular factor so the largest
/// entry of its last column is real and positive.
fn fix_chain_phases(p: &mut CMat, spec: &JordanSpec) {
    let n = p.rows();
    let mut start = 0;
    for (_, size) in spec.layout() {
        let factor = phase_factor(&p.col(start + size - 1));
        for c in start..start + size {
            for r in 0..n {
                p[(r, c)] *= factor;
            }
        }
        start += size;
    }
}

/// Unimodular `f` such that `f * v` has its largest entry real and positive.
fn phase_factor(v: &[C64]) -> C64 {
    let big = v.iter().copied().fold(c64(0.0, 0.0), |acc, z| if z.norm() > acc.norm() * (1.0 + 1e-12) { z } else { acc });
    if big.norm() > 0.0 {
        big.conj() / big.norm()
    } else {
        c64(1.0, 0.0)
    }
}
