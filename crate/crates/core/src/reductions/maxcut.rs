//! Max-Cut to continuous median.
//!
//! For a graph on `[n]` the instance lives on `N = 3n + 2` symbols with two
//! separator runs `X_1 = n+1..=2n+1` and `X_2 = 2n+2..=3n+2`. Many copies of
//! `π^L = 1..n X_1 X_2` and `π^R = X_1 n..1 X_2` force every median into the
//! cut-shaped family `π^{A,B} = A↑ X_1 B↓ X_2`; two gadgets per edge then
//! reward cutting it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aggregation::UlamInstance;
use crate::perm::{Perm, Symbol};

use super::ReductionError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {0}) is a self-loop")]
    SelfLoop(u32),
    #[error("edge ({0}, {1}) appears twice")]
    DuplicateEdge(u32, u32),
    #[error("vertex {0} is outside 1..={1}")]
    VertexOutOfRange(u32, usize),
}

/// Simple undirected graph on vertices `1..=n`. Edges are stored as
/// `(u, v)` with `u < v`, in input order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w == 0 || w as usize > n {
                    return Err(GraphError::VertexOutOfRange(w, n));
                }
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            out.push(e);
        }
        Ok(Self { n, edges: out })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Number of edges with exactly one endpoint in the set encoded by
    /// `mask` (bit `v - 1` for vertex `v`).
    pub fn cut_size(&self, mask: u64) -> usize {
        self.edges.iter().filter(|&&e| is_cut(mask, e)).count()
    }
}

pub fn is_cut(mask: u64, (u, v): (u32, u32)) -> bool {
    (mask >> (u - 1) & 1) != (mask >> (v - 1) & 1)
}

fn x1(n: usize) -> impl Iterator<Item = Symbol> {
    (n as Symbol + 1)..=(2 * n as Symbol + 1)
}

fn x2(n: usize) -> impl Iterator<Item = Symbol> {
    (2 * n as Symbol + 2)..=(3 * n as Symbol + 2)
}

/// `1 2 .. n X_1 X_2`.
pub fn pi_left(n: usize) -> Perm {
    Perm::identity(3 * n + 2)
}

/// `X_1 n .. 1 X_2`.
pub fn pi_right(n: usize) -> Perm {
    let out = x1(n).chain((1..=n as Symbol).rev()).chain(x2(n)).collect();
    Perm::from_vec_unchecked(out)
}

/// `π^{A,B}` where `A` holds the vertices whose bit is set in `mask`.
pub fn cut_permutation(n: usize, mask: u64) -> Perm {
    let in_a = |v: Symbol| mask >> (v - 1) & 1 == 1;
    let a = (1..=n as Symbol).filter(|&v| in_a(v));
    let b = (1..=n as Symbol).rev().filter(|&v| !in_a(v));
    Perm::from_vec_unchecked(a.chain(x1(n)).chain(b).chain(x2(n)).collect())
}

/// Inverse of [`cut_permutation`]: the mask of `A` if `p` is cut-shaped.
pub fn cut_mask_of(n: usize, p: &Perm) -> Option<u64> {
    let mask = p
        .as_slice()
        .iter()
        .take_while(|&&s| s as usize <= n)
        .fold(0u64, |m, &s| m | 1 << (s - 1));
    (p.len() == 3 * n + 2 && cut_permutation(n, mask) == *p).then_some(mask)
}

/// The two gadgets of edge `{i, j}` with `i < j`:
/// `j i X_1 X_2 rest` and `X_1 i j X_2 rest`, where `rest` lists the other
/// vertices in increasing order.
pub fn edge_gadgets(n: usize, (i, j): (u32, u32)) -> (Perm, Perm) {
    let rest: Vec<Symbol> = (1..=n as Symbol).filter(|&v| v != i && v != j).collect();
    let first = [j, i]
        .into_iter()
        .chain(x1(n))
        .chain(x2(n))
        .chain(rest.iter().copied())
        .collect();
    let second = x1(n)
        .chain([i, j])
        .chain(x2(n))
        .chain(rest.iter().copied())
        .collect();
    (Perm::from_vec_unchecked(first), Perm::from_vec_unchecked(second))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxCutCertificate {
    pub graph: Graph,
    /// Copies of each of `π^L` and `π^R`: `|E| (2n - 1)`.
    pub t: u64,
    /// Cut size the instance threshold was computed for.
    pub target_cut: usize,
}

impl MaxCutCertificate {
    /// Median cost of the best cut-shaped permutation when the graph has a
    /// cut of size `k`: `|E| (2n - 1) - k + t n`.
    pub fn cost_for_cut(&self, k: usize) -> u64 {
        let n = self.graph.vertex_count() as u64;
        let e = self.graph.edges().len() as u64;
        e * (2 * n - 1) - k as u64 + self.t * n
    }
}

/// Builds the median instance with threshold `cost_for_cut(target_cut)`.
///
/// Order: both gadgets of each edge in edge order, then `t` copies of `π^L`,
/// then `t` copies of `π^R`.
pub fn maxcut_to_median(g: &Graph, target_cut: usize) -> Result<(UlamInstance, MaxCutCertificate), ReductionError> {
    if g.edges().is_empty() {
        return Err(ReductionError::NoEdges);
    }
    let n = g.vertex_count();
    let t = (g.edges().len() * (2 * n - 1)) as u64;
    let mut perms = Vec::with_capacity(2 * g.edges().len() + 2 * t as usize);
    for &e in g.edges() {
        let (p1, p2) = edge_gadgets(n, e);
        perms.push(p1);
        perms.push(p2);
    }
    let (left, right) = (pi_left(n), pi_right(n));
    perms.extend(std::iter::repeat_n(left, t as usize));
    perms.extend(std::iter::repeat_n(right, t as usize));

    let cert = MaxCutCertificate { graph: g.clone(), t, target_cut };
    let instance = UlamInstance::new(perms, cert.cost_for_cut(target_cut))?;
    Ok((instance, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::ulam_distance;
    use crate::perm::p;

    fn k3() -> Graph {
        Graph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert_eq!(Graph::new(3, vec![(2, 2)]), Err(GraphError::SelfLoop(2)));
        assert_eq!(Graph::new(3, vec![(1, 2), (2, 1)]), Err(GraphError::DuplicateEdge(1, 2)));
        assert_eq!(Graph::new(3, vec![(1, 4)]), Err(GraphError::VertexOutOfRange(4, 3)));
        assert_eq!(Graph::new(3, vec![(3, 1)]).unwrap().edges(), &[(1, 3)]);
    }

    #[test]
    fn special_permutations_for_one_vertex_pair() {
        // n = 2: X_1 = 345, X_2 = 678.
        assert_eq!(pi_left(2), p("12345678"));
        assert_eq!(pi_right(2), p("34521678"));
        assert_eq!(cut_permutation(2, 0b01), p("13452678"));
        assert_eq!(cut_permutation(2, 0b00), p("34521678"));
        let (a, b) = edge_gadgets(2, (1, 2));
        assert_eq!(a, p("21345678"));
        assert_eq!(b, p("34512678"));
    }

    #[test]
    fn cut_mask_round_trip() {
        for n in 1..=5 {
            for mask in 0..(1u64 << n) {
                assert_eq!(cut_mask_of(n, &cut_permutation(n, mask)), Some(mask));
            }
        }
        assert_eq!(cut_mask_of(2, &p("21345678")), None);
    }

    #[test]
    fn k3_shape_and_threshold() {
        let (inst, cert) = maxcut_to_median(&k3(), 2).unwrap();
        assert_eq!(inst.len(), 36);
        assert_eq!(inst.length(), 11);
        assert_eq!(cert.t, 15);
        assert_eq!(inst.tau(), 58);
        assert!(inst.is_multiset());
    }

    #[test]
    fn aux_pair_sums_to_n() {
        for n in 1..=5 {
            for mask in 0..(1u64 << n) {
                let pi = cut_permutation(n, mask);
                let s = ulam_distance(&pi, &pi_left(n)).unwrap() + ulam_distance(&pi, &pi_right(n)).unwrap();
                assert_eq!(s, n);
            }
        }
    }

    #[test]
    fn rejects_edgeless_graph() {
        let g = Graph::new(2, vec![]).unwrap();
        assert!(matches!(maxcut_to_median(&g, 0), Err(ReductionError::NoEdges)));
    }
}
