//! Exact induced motif counts.
//!
//! [`enumerate_exact`] enumerates every connected induced `k`-subgraph once
//! with the ESU extension scheme. [`brute_force_subsets`] tries every
//! `k`-subset and is only meant for tiny graphs. [`formula_counts`] derives
//! 3- and 4-node counts from degree, triangle, codegree and 4-clique
//! statistics without enumerating subgraphs.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::motif::{mask, MotifCatalog, MotifId};

/// Default cap on enumerated subgraphs.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Largest graph accepted by [`brute_force_subsets`].
pub const BRUTE_FORCE_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCounts {
    pub k: usize,
    /// `|S(k,m)|` at index `m - 1`.
    pub counts: Vec<u64>,
}

impl ExactCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, id: MotifId) -> Option<u64> {
        if id.k as usize != self.k {
            return None;
        }
        self.counts.get((id.m as usize).checked_sub(1)?).copied()
    }

    pub fn concentrations(&self) -> Result<Vec<f64>> {
        let total = self.total();
        if total == 0 {
            return Err(Error::NoSamples);
        }
        Ok(self
            .counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect())
    }
}

fn subset_mask(graph: &Graph, nodes: &[NodeId]) -> u32 {
    graph.induced_edge_mask(nodes)
}

struct Esu<'a> {
    graph: &'a Graph,
    catalog: &'a MotifCatalog,
    k: usize,
    counts: Vec<u64>,
    visited: u64,
}

impl Esu<'_> {
    fn root(&mut self, root: NodeId) {
        let mut sub = [0 as NodeId; 8];
        sub[0] = root;
        let ext: Vec<NodeId> = self
            .graph
            .neighbors(root)
            .iter()
            .copied()
            .filter(|&u| u > root)
            .collect();
        self.extend(&mut sub, 1, ext, root);
    }

    fn extend(&mut self, sub: &mut [NodeId; 8], size: usize, mut ext: Vec<NodeId>, root: NodeId) {
        if size == self.k {
            self.visited += 1;
            let id = self
                .catalog
                .classify(subset_mask(self.graph, &sub[..size]), size)
                .expect("ESU only yields connected subgraphs");
            self.counts[id.m as usize - 1] += 1;
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in self.graph.neighbors(w) {
                if u <= root || sub[..size].contains(&u) {
                    continue;
                }
                // exclusive neighborhood: not adjacent to the current subgraph
                if sub[..size].iter().any(|&x| self.graph.has_edge(x, u)) {
                    continue;
                }
                if !next.contains(&u) {
                    next.push(u);
                }
            }
            sub[size] = w;
            self.extend(sub, size + 1, next, root);
        }
    }
}

/// Every connected induced `k`-subgraph, enumerated once. Fails with
/// [`Error::BudgetExceeded`] once more than `budget` subgraphs are seen.
pub fn enumerate_exact(
    graph: &Graph,
    catalog: &MotifCatalog,
    k: usize,
    budget: u64,
) -> Result<ExactCounts> {
    catalog.ensure_k(k)?;
    let motifs = catalog.motif_count(k);
    let roots_total = graph.node_count();
    let visited = AtomicU64::new(0);
    let roots_done = AtomicU64::new(0);
    let over = AtomicBool::new(false);

    let per_root = |root: NodeId, counts: &mut Vec<u64>| {
        if over.load(Ordering::Relaxed) {
            return;
        }
        let mut esu = Esu {
            graph,
            catalog,
            k,
            counts: std::mem::take(counts),
            visited: 0,
        };
        esu.root(root);
        *counts = esu.counts;
        let seen = visited.fetch_add(esu.visited, Ordering::Relaxed) + esu.visited;
        if seen > budget {
            over.store(true, Ordering::Relaxed);
        } else {
            roots_done.fetch_add(1, Ordering::Relaxed);
        }
    };

    #[cfg(feature = "parallel")]
    let counts = {
        use rayon::prelude::*;
        (0..graph.node_count() as NodeId)
            .into_par_iter()
            .fold(
                || vec![0u64; motifs],
                |mut acc, root| {
                    per_root(root, &mut acc);
                    acc
                },
            )
            .reduce(
                || vec![0u64; motifs],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    };
    #[cfg(not(feature = "parallel"))]
    let counts = {
        let mut acc = vec![0u64; motifs];
        for root in 0..graph.node_count() as NodeId {
            per_root(root, &mut acc);
        }
        acc
    };

    if over.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            visited: visited.load(Ordering::Relaxed),
            budget,
            roots_done: roots_done.load(Ordering::Relaxed) as usize,
            roots_total,
        });
    }
    Ok(ExactCounts { k, counts })
}

/// Checks all `C(n, k)` node subsets. Limited to `n <= 14`.
pub fn brute_force_subsets(graph: &Graph, catalog: &MotifCatalog, k: usize) -> Result<ExactCounts> {
    catalog.ensure_k(k)?;
    let n = graph.node_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::GraphTooLarge {
            nodes: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut counts = vec![0u64; catalog.motif_count(k)];
    let mut subset: Vec<NodeId> = Vec::with_capacity(k);
    for bits in 0u32..(1u32 << n) {
        if bits.count_ones() as usize != k {
            continue;
        }
        subset.clear();
        subset.extend((0..n as NodeId).filter(|&v| bits >> v & 1 == 1));
        if let Some(id) = catalog.classify(subset_mask(graph, &subset), k) {
            counts[id.m as usize - 1] += 1;
        }
    }
    Ok(ExactCounts { k, counts })
}

/// Triangles through each edge, in CSR order (both directions).
fn edge_triangles(graph: &Graph) -> Vec<u64> {
    let n = graph.node_count() as NodeId;
    let mut out = Vec::with_capacity(graph.degree_sum() as usize);
    for u in 0..n {
        for &v in graph.neighbors(u) {
            out.push(common_neighbors(graph.neighbors(u), graph.neighbors(v)));
        }
    }
    out
}

fn common_neighbors(a: &[NodeId], b: &[NodeId]) -> u64 {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

fn choose3(x: u64) -> u64 {
    if x < 3 {
        0
    } else {
        x * (x - 1) * (x - 2) / 6
    }
}

/// Non-induced 4-node subgraph counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphCounts {
    pub wedges: u64,
    pub triangles: u64,
    pub claws: u64,
    pub paths: u64,
    pub tailed_triangles: u64,
    pub cycles: u64,
    pub diamonds: u64,
    pub cliques: u64,
}

/// Non-induced copies of each connected 4-node pattern.
pub fn subgraph_counts(graph: &Graph) -> SubgraphCounts {
    let n = graph.node_count();
    let tri_edge = edge_triangles(graph);
    let degree = |v: NodeId| graph.degree(v) as u64;

    let mut s = SubgraphCounts::default();
    let mut tri_node = vec![0u64; n];
    let mut idx = 0;
    let mut tri_sum = 0u64;
    for u in 0..n as NodeId {
        let du = degree(u);
        s.wedges += choose2(du);
        s.claws += choose3(du);
        for &v in graph.neighbors(u) {
            let t = tri_edge[idx];
            idx += 1;
            tri_node[u as usize] += t;
            if u < v {
                tri_sum += t;
                s.paths += (du - 1) * (degree(v) - 1);
                s.diamonds += choose2(t);
            }
        }
    }
    s.triangles = tri_sum / 3;
    s.paths -= 3 * s.triangles;
    // each triangle at u is seen through both of its edges at u
    for (u, &t) in tri_node.iter().enumerate() {
        s.tailed_triangles += t / 2 * (degree(u as NodeId).saturating_sub(2));
    }

    // codegrees over unordered pairs: each 4-cycle is counted twice
    let mut codeg = vec![0u64; n];
    let mut touched: Vec<NodeId> = Vec::new();
    let mut pair_sum = 0u64;
    for u in 0..n as NodeId {
        for &v in graph.neighbors(u) {
            for &w in graph.neighbors(v) {
                if w > u {
                    if codeg[w as usize] == 0 {
                        touched.push(w);
                    }
                    codeg[w as usize] += 1;
                }
            }
        }
        for &w in &touched {
            pair_sum += choose2(codeg[w as usize]);
            codeg[w as usize] = 0;
        }
        touched.clear();
    }
    s.cycles = pair_sum / 2;

    for u in 0..n as NodeId {
        let nu = graph.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = graph.neighbors(v);
            let common: Vec<NodeId> = nu
                .iter()
                .copied()
                .filter(|&w| w > v && nv.binary_search(&w).is_ok())
                .collect();
            for (i, &w) in common.iter().enumerate() {
                for &x in &common[i + 1..] {
                    if graph.has_edge(w, x) {
                        s.cliques += 1;
                    }
                }
            }
        }
    }
    s
}

fn shape_id(catalog: &MotifCatalog, edges: &[(usize, usize)], k: usize) -> usize {
    let bits = edges
        .iter()
        .fold(0u32, |b, &(i, j)| b | 1 << mask::pair_bit(i, j, k));
    catalog.classify(bits, k).expect("connected pattern").m as usize - 1
}

/// 3- or 4-node induced counts from non-induced pattern counts, by
/// inverting the overlap relations between the patterns.
pub fn formula_counts(graph: &Graph, catalog: &MotifCatalog, k: usize) -> Result<ExactCounts> {
    catalog.ensure_k(k)?;
    let s = subgraph_counts(graph);
    let mut counts = vec![0u64; catalog.motif_count(k)];
    match k {
        3 => {
            counts[shape_id(catalog, &[(0, 1), (1, 2)], 3)] = s.wedges - 3 * s.triangles;
            counts[shape_id(catalog, &[(0, 1), (1, 2), (0, 2)], 3)] = s.triangles;
        }
        4 => {
            let k4 = s.cliques;
            let diamond = s.diamonds - 6 * k4;
            let cycle = s.cycles - diamond - 3 * k4;
            let tailed = s.tailed_triangles - 4 * diamond - 12 * k4;
            let claw = s.claws - tailed - 2 * diamond - 4 * k4;
            let path = s.paths - 2 * tailed - 4 * cycle - 6 * diamond - 12 * k4;
            counts[shape_id(catalog, &[(0, 1), (0, 2), (0, 3)], 4)] = claw;
            counts[shape_id(catalog, &[(0, 1), (1, 2), (2, 3)], 4)] = path;
            counts[shape_id(catalog, &[(0, 1), (1, 2), (0, 2), (0, 3)], 4)] = tailed;
            counts[shape_id(catalog, &[(0, 1), (1, 2), (2, 3), (0, 3)], 4)] = cycle;
            counts[shape_id(catalog, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)], 4)] = diamond;
            counts[shape_id(
                catalog,
                &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)],
                4,
            )] = k4;
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "closed-form counts cover k = 3 and 4, not {k}"
            )))
        }
    }
    Ok(ExactCounts { k, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn cat() -> &'static MotifCatalog {
        MotifCatalog::shared()
    }

    #[test]
    fn complete_graphs() {
        let g = generate::complete(6);
        for k in 3..=5 {
            let c = enumerate_exact(&g, cat(), k, DEFAULT_BUDGET).unwrap();
            let expected = [0, 0, 0, 20, 15, 6][k];
            assert_eq!(c.total(), expected);
            assert_eq!(*c.counts.last().unwrap(), expected);
        }
    }

    #[test]
    fn star_counts() {
        let g = generate::star(5);
        let c = enumerate_exact(&g, cat(), 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.counts[0], 10);
        assert_eq!(c.total(), 10);
        let c = enumerate_exact(&g, cat(), 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.counts[2], 5);
        assert_eq!(c.total(), 5);
    }

    #[test]
    fn cycle_counts() {
        let g = generate::cycle(7);
        for k in 3..=5 {
            let c = enumerate_exact(&g, cat(), k, DEFAULT_BUDGET).unwrap();
            assert_eq!(c.total(), 7, "k={k}");
        }
    }

    #[test]
    fn esu_matches_brute_force() {
        for seed in 0..10 {
            let g = generate::erdos_renyi(11, 0.35, seed);
            for k in 3..=5 {
                assert_eq!(
                    enumerate_exact(&g, cat(), k, DEFAULT_BUDGET).unwrap(),
                    brute_force_subsets(&g, cat(), k).unwrap()
                );
            }
        }
    }

    #[test]
    fn formula_matches_esu() {
        for seed in 0..10 {
            let g = generate::erdos_renyi(25, 0.3, seed);
            for k in 3..=4 {
                assert_eq!(
                    formula_counts(&g, cat(), k).unwrap(),
                    enumerate_exact(&g, cat(), k, DEFAULT_BUDGET).unwrap(),
                    "seed {seed} k {k}"
                );
            }
        }
    }

    #[test]
    fn budget_exceeded() {
        let g = generate::complete(10);
        match enumerate_exact(&g, cat(), 5, 100) {
            Err(Error::BudgetExceeded {
                budget,
                roots_total,
                ..
            }) => {
                assert_eq!(budget, 100);
                assert_eq!(roots_total, 10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn brute_force_size_limit() {
        let g = generate::path(15);
        assert!(matches!(
            brute_force_subsets(&g, cat(), 3),
            Err(Error::GraphTooLarge {
                nodes: 15,
                limit: 14
            })
        ));
    }

    #[test]
    fn formula_rejects_five() {
        assert!(formula_counts(&generate::complete(5), cat(), 5).is_err());
    }
}
