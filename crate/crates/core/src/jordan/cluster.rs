//! Grouping of Schur diagonal entries into eigenvalue clusters.

use alloc::vec;
use alloc::vec::Vec;

// only needed without std, where f64 has no inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use super::staircase::Staircase;
use crate::linalg::{Schur, Tolerances, C64};
use crate::{Error, Result};

struct Node {
    members: Vec<usize>,
    children: Option<(usize, usize)>,
    link: f64,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Single-linkage groups of `values` at radius `radius`.
fn single_linkage(values: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn min_distance(values: &[C64], a: &[usize], b: &[usize]) -> f64 {
    let mut d = f64::INFINITY;
    for &i in a {
        for &j in b {
            d = d.min((values[i] - values[j]).norm());
        }
    }
    d
}

/// Largest spread of a `k`-fold defective eigenvalue that a perturbation
/// of relative size `rank_rel` can produce, as a nearest-neighbour distance.
fn defect_radius(k: usize, tol: &Tolerances, scale: f64) -> f64 {
    2.0 * tol.rank_rel.powf(1.0 / k as f64) * scale
}

/// True when the Schur block on `members` is, up to `threshold`, a single
/// eigenvalue with nilpotent part of full size.
fn confirms_defect(schur: &Schur, members: &[usize], threshold: f64) -> bool {
    let n = schur.t.rows();
    let mut s = schur.clone();
    let mut key = vec![1u8; n];
    for &i in members {
        key[i] = 0;
    }
    s.reorder_by_key(&key);
    let k = members.len();
    let block = s.t.submatrix(0..k, 0..k);
    let center = block.trace() / k as f64;
    match Staircase::compute(&block.shifted(center), threshold) {
        Ok(st) => st.dim() == k && st.is_segre(),
        Err(_) => false,
    }
}

pub(super) fn group_eigenvalues(
    schur: &Schur,
    tol: &Tolerances,
    scale: f64,
    threshold: f64,
) -> Result<Vec<Vec<usize>>> {
    let values = schur.eigenvalues();
    let leaves = single_linkage(&values, tol.cluster_abs);

    // dendrogram over the leaves by single linkage (Kruskal)
    let mut nodes: Vec<Node> =
        leaves.into_iter().map(|members| Node { members, children: None, link: 0.0 }).collect();
    let nleaves = nodes.len();
    let mut edges = Vec::new();
    for i in 0..nleaves {
        for j in (i + 1)..nleaves {
            edges.push((min_distance(&values, &nodes[i].members, &nodes[j].members), i, j));
        }
    }
    edges.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut parent: Vec<usize> = (0..nleaves).collect();
    let mut top: Vec<usize> = (0..nleaves).collect();
    for (d, i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a == b {
            continue;
        }
        let (na, nb) = (top[a], top[b]);
        let mut members = nodes[na].members.clone();
        members.extend_from_slice(&nodes[nb].members);
        nodes.push(Node { members, children: Some((na, nb)), link: d });
        parent[b] = a;
        top[a] = nodes.len() - 1;
    }

    // top-down: keep the largest confirmed defective groups
    let mut accepted: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![nodes.len() - 1];
    while let Some(id) = stack.pop() {
        let node = &nodes[id];
        match node.children {
            None => accepted.push(node.members.clone()),
            Some((a, b)) => {
                let k = node.members.len();
                if node.link <= defect_radius(k, tol, scale) && confirms_defect(schur, &node.members, threshold) {
                    accepted.push(node.members.clone());
                } else {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
    }

    for i in 0..accepted.len() {
        for j in (i + 1)..accepted.len() {
            let d = min_distance(&values, &accepted[i], &accepted[j]);
            if d < 2.0 * tol.cluster_abs {
                let mean = |g: &[usize]| g.iter().map(|&k| values[k]).sum::<C64>() / g.len() as f64;
                let (a, b) = (mean(&accepted[i]), mean(&accepted[j]));
                return Err(Error::ClusterAmbiguity { first: [a.re, a.im], second: [b.re, b.im], distance: d });
            }
        }
    }
    for g in accepted.iter_mut() {
        g.sort_unstable();
    }
    Ok(accepted)
}
