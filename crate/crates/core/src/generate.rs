//! Small deterministic graph families for fixtures, tests and the demo.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, NodeId};

fn build(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Graph {
    Graph::from_edges(n, edges).expect("generated endpoints are in range")
}

pub fn complete(n: usize) -> Graph {
    let n32 = n as NodeId;
    build(n, (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v))))
}

/// Node 0 joined to `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves as NodeId).map(|v| (0, v)))
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n as NodeId).map(|v| (v - 1, v)))
}

pub fn cycle(n: usize) -> Graph {
    let n32 = n as NodeId;
    build(n, (0..n32).map(|v| (v, (v + 1) % n32)))
}

/// `G(n, p)`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// `G(n, m)`: `m` distinct edges chosen uniformly.
pub fn gnm(n: usize, m: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max = n * n.saturating_sub(1) / 2;
    let m = m.min(max);
    let mut chosen = HashSet::with_capacity(m);
    while chosen.len() < m {
        let u = rng.gen_range(0..n as NodeId);
        let v = rng.gen_range(0..n as NodeId);
        if u != v {
            chosen.insert((u.min(v), u.max(v)));
        }
    }
    let mut edges: Vec<_> = chosen.into_iter().collect();
    edges.sort_unstable();
    build(n, edges)
}

/// Preferential attachment with triad closure (Holme–Kim). Each new node
/// brings `m` edges; after each preferential edge, with probability
/// `triad_p` the next edge closes a triangle instead. `triad_p = 0` gives
/// Barabási–Albert.
pub fn holme_kim(n: usize, m: usize, triad_p: f64, seed: u64) -> Graph {
    assert!(m >= 1 && n > m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    // endpoint multiset for preferential choice
    let mut targets: Vec<NodeId> = Vec::new();
    let mut edges = Vec::new();
    let add = |u: NodeId,
               v: NodeId,
               adj: &mut Vec<Vec<NodeId>>,
               targets: &mut Vec<NodeId>,
               edges: &mut Vec<(NodeId, NodeId)>| {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
        targets.push(u);
        targets.push(v);
        edges.push((u, v));
    };
    // seed clique on m + 1 nodes
    for u in 0..=m as NodeId {
        for v in u + 1..=m as NodeId {
            add(u, v, &mut adj, &mut targets, &mut edges);
        }
    }
    for new in (m + 1) as NodeId..n as NodeId {
        let mut linked: Vec<NodeId> = Vec::with_capacity(m);
        let mut last: Option<NodeId> = None;
        while linked.len() < m {
            let candidate = match last {
                Some(prev) if rng.gen_bool(triad_p) => {
                    // a few tries at a fresh neighbor of the last target
                    let pool = &adj[prev as usize];
                    (0..8)
                        .map(|_| pool[rng.gen_range(0..pool.len())])
                        .find(|w| *w != new && !linked.contains(w))
                }
                _ => None,
            };
            let v = match candidate {
                Some(v) => v,
                None => {
                    let v = targets[rng.gen_range(0..targets.len())];
                    if linked.contains(&v) {
                        continue;
                    }
                    v
                }
            };
            linked.push(v);
            last = Some(v);
        }
        for v in linked {
            add(new, v, &mut adj, &mut targets, &mut edges);
        }
    }
    build(n, edges)
}

pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Graph {
    holme_kim(n, m, 0.0, seed)
}

/// Connected `G(n, m)`: a random spanning tree plus extra uniform edges.
pub fn connected_gnm(n: usize, m: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    order.shuffle(&mut rng);
    let mut chosen = HashSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let child = order[i];
        chosen.insert((parent.min(child), parent.max(child)));
    }
    let max = n * n.saturating_sub(1) / 2;
    let target = m.clamp(n.saturating_sub(1), max);
    while chosen.len() < target {
        let u = rng.gen_range(0..n as NodeId);
        let v = rng.gen_range(0..n as NodeId);
        if u != v {
            chosen.insert((u.min(v), u.max(v)));
        }
    }
    let mut edges: Vec<_> = chosen.into_iter().collect();
    edges.sort_unstable();
    build(n, edges)
}
