//! Simple random walks under a neighbor-query access model.
//!
//! Estimators never touch a [`Graph`] directly. They go through a
//! [`NeighborProvider`], which hands out neighbor lists one node at a time and
//! keeps a [`QueryLedger`] of what was fetched, so the same walk code would
//! run against a rate-limited remote API.
//!
//! Randomness is split into three independent streams per run: the walk
//! itself, the choice of path embedding in the generic estimator, and the
//! waddle draws. Waddle draws are keyed by `(step, window offset, draw
//! index)` rather than consumed sequentially, so two estimators that waddle
//! from the same walk node at the same step see the same neighbor.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};

/// Default number of discarded steps before sampling starts.
pub const DEFAULT_BURN_IN: u64 = 1000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    /// Distinct nodes whose neighbor list has been fetched.
    pub distinct: u64,
    /// Fetch requests including repeats served from cache.
    pub total: u64,
}

/// Access to neighbor lists, one query per node.
pub trait NeighborProvider {
    /// Returns `N(v)`, charging one query the first time `v` is fetched.
    fn fetch(&mut self, v: NodeId) -> &[NodeId];

    /// Degree of a node that has already been fetched.
    fn degree(&self, v: NodeId) -> usize;

    /// Adjacency test; `u` must already have been fetched.
    fn adjacent(&self, u: NodeId, v: NodeId) -> bool;

    fn ledger(&self) -> QueryLedger;

    /// Zeroes the ledger so that every node counts again on its next fetch.
    /// Cached neighbor lists stay available.
    fn reset_ledger(&mut self);

    /// `|V|`, when the provider knows it.
    fn node_count(&self) -> Option<u64> {
        None
    }
}

/// Provider backed by an in-memory graph, with a per-node fetch cache.
pub struct LocalProvider<'g> {
    graph: &'g Graph,
    /// Ledger epoch of the last fetch of each node; 0 if never fetched.
    charged: Vec<u32>,
    epoch: u32,
    ledger: QueryLedger,
}

impl<'g> LocalProvider<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            charged: vec![0; graph.node_count()],
            epoch: 1,
            ledger: QueryLedger::default(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }
}

impl NeighborProvider for LocalProvider<'_> {
    #[inline]
    fn fetch(&mut self, v: NodeId) -> &[NodeId] {
        self.ledger.total += 1;
        let seen = &mut self.charged[v as usize];
        if *seen != self.epoch {
            *seen = self.epoch;
            self.ledger.distinct += 1;
        }
        self.graph.neighbors(v)
    }

    #[inline]
    fn degree(&self, v: NodeId) -> usize {
        debug_assert!(self.charged[v as usize] != 0);
        self.graph.degree(v)
    }

    #[inline]
    fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        debug_assert!(self.charged[u as usize] != 0);
        self.graph.has_edge(u, v)
    }

    fn ledger(&self) -> QueryLedger {
        self.ledger
    }

    fn reset_ledger(&mut self) {
        self.epoch += 1;
        self.ledger = QueryLedger::default();
    }

    fn node_count(&self) -> Option<u64> {
        Some(self.graph.node_count() as u64)
    }
}

/// When a run stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    /// Stop once this many distinct nodes have been fetched after burn-in
    /// (capped at `|V|` when the provider knows it).
    Queries(u64),
    /// Stop after this many post-burn-in steps.
    Steps(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub seed: u64,
    pub burn_in: u64,
    pub budget: Budget,
    /// Overrides the uniformly random start node.
    pub start: Option<NodeId>,
}

impl WalkConfig {
    pub fn with_steps(seed: u64, steps: u64) -> Self {
        Self {
            seed,
            burn_in: DEFAULT_BURN_IN,
            budget: Budget::Steps(steps),
            start: None,
        }
    }

    pub fn with_queries(seed: u64, queries: u64) -> Self {
        Self {
            seed,
            burn_in: DEFAULT_BURN_IN,
            budget: Budget::Queries(queries),
            start: None,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The random streams owned by one run.
pub struct RunStreams {
    pub walk: ChaCha8Rng,
    pub embedding: ChaCha8Rng,
    pub waddle: WaddleKeys,
}

impl RunStreams {
    /// Streams for run `run` of an experiment seeded with `seed`. Runs are
    /// independent and the same `(seed, run)` always gives the same streams.
    pub fn new(seed: u64, run: u64) -> Self {
        let mut walk = ChaCha8Rng::seed_from_u64(seed);
        walk.set_stream(2 * run);
        let mut embedding = ChaCha8Rng::seed_from_u64(seed);
        embedding.set_stream(2 * run + 1);
        Self {
            walk,
            embedding,
            waddle: WaddleKeys {
                key: splitmix64(seed ^ splitmix64(run ^ 0x5741_4444_4c45)),
            },
        }
    }
}

/// Counter-based source for waddle draws.
#[derive(Debug, Clone, Copy)]
pub struct WaddleKeys {
    key: u64,
}

impl WaddleKeys {
    /// Draw `index` for waddles anchored `offset` steps before step `step`.
    pub fn draws(&self, step: u64, offset: usize) -> KeyedDraws {
        KeyedDraws {
            base: splitmix64(
                self.key ^ splitmix64(step.wrapping_mul(8).wrapping_add(offset as u64)),
            ),
            next: 0,
        }
    }
}

/// Sequence of uniform indices derived from one key.
#[derive(Debug, Clone)]
pub struct KeyedDraws {
    base: u64,
    next: u64,
}

impl KeyedDraws {
    /// Uniform index in `0..n` (multiply-shift; bias below `n / 2^64`).
    pub fn index(&mut self, n: usize) -> usize {
        let h = splitmix64(self.base ^ self.next.wrapping_mul(0xd6e8_feb8_6659_fd93));
        self.next += 1;
        ((h as u128 * n as u128) >> 64) as usize
    }
}

/// Recent history of one walk.
#[derive(Debug, Clone)]
pub struct WalkState {
    /// `(node, degree)` for the last `capacity` visits, oldest first.
    window: VecDeque<(NodeId, u32)>,
    capacity: usize,
    /// Nodes visited so far, counting the start node.
    pub step_index: u64,
    pub burned_in: bool,
    pub rng: ChaCha8Rng,
}

impl WalkState {
    /// Starts a walk at `start`, fetching its neighbor list.
    pub fn new<P: NeighborProvider>(
        provider: &mut P,
        start: NodeId,
        capacity: usize,
        rng: ChaCha8Rng,
    ) -> Self {
        let degree = provider.fetch(start).len() as u32;
        let mut window = VecDeque::with_capacity(capacity.max(1));
        window.push_back((start, degree));
        Self {
            window,
            capacity: capacity.max(1),
            step_index: 1,
            burned_in: false,
            rng,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn current(&self) -> NodeId {
        self.window.back().unwrap().0
    }

    /// `r_{i-j}`: the node visited `j` steps ago, with its degree.
    #[inline]
    pub fn recent(&self, j: usize) -> (NodeId, u32) {
        self.window[self.window.len() - 1 - j]
    }

    /// The last `s` nodes, oldest first, written into `out`.
    #[inline]
    pub fn last_nodes(&self, s: usize, out: &mut [NodeId]) {
        let start = self.window.len() - s;
        for (slot, &(v, _)) in out.iter_mut().zip(self.window.range(start..)) {
            *slot = v;
        }
    }

    /// True if the last `s` visited nodes are pairwise distinct.
    #[inline]
    pub fn distinct_tail(&self, s: usize) -> bool {
        if self.window.len() < s {
            return false;
        }
        let start = self.window.len() - s;
        for a in start..self.window.len() {
            for b in a + 1..self.window.len() {
                if self.window[a].0 == self.window[b].0 {
                    return false;
                }
            }
        }
        true
    }

    fn push(&mut self, node: NodeId, degree: u32) {
        if self.window.len() == self.capacity {
            self.window.pop_front();
        }
        self.window.push_back((node, degree));
        self.step_index += 1;
    }
}

/// Moves to a uniformly random neighbor of the current node.
///
/// The graph must have no isolated node on the walk (true for any connected
/// graph with at least two nodes).
pub fn step<P: NeighborProvider>(provider: &mut P, state: &mut WalkState) -> NodeId {
    let neighbors = provider.fetch(state.current());
    let next = neighbors[state.rng.gen_range(0..neighbors.len())];
    let degree = provider.fetch(next).len() as u32;
    state.push(next, degree);
    next
}

/// Advances `steps` steps without sampling and marks the state burned in.
pub fn burn_in<P: NeighborProvider>(provider: &mut P, state: &mut WalkState, steps: u64) {
    for _ in 0..steps {
        step(provider, state);
    }
    state.burned_in = true;
}

/// Draws `count` independent uniform neighbors of `anchor` into `out`
/// (duplicates allowed) and returns their joint probability
/// `1 / d(anchor)^count`. Each drawn node is fetched.
pub fn waddle_sample<P: NeighborProvider>(
    provider: &mut P,
    anchor: NodeId,
    count: usize,
    draws: &mut KeyedDraws,
    out: &mut Vec<NodeId>,
) -> f64 {
    let degree = provider.degree(anchor);
    let mut probability = 1.0;
    for _ in 0..count {
        let w = provider.fetch(anchor)[draws.index(degree)];
        provider.fetch(w);
        out.push(w);
        probability /= degree as f64;
    }
    probability
}

/// `∏_{j=1}^{s-2} d(r_{i-j})`: the inverse of the stationary probability of
/// the last `s` steps, times `D`. The empty product (`s <= 2`) is 1.
#[inline]
pub fn path_weight(state: &WalkState, s: usize) -> f64 {
    let mut weight = 1.0;
    for j in 1..s.saturating_sub(1) {
        weight *= state.recent(j).1 as f64;
    }
    weight
}

/// Uniform start node.
pub fn uniform_start<R: Rng>(graph: &Graph, rng: &mut R) -> NodeId {
    rng.gen_range(0..graph.node_count()) as NodeId
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn k3() -> Graph {
        generate::complete(3)
    }

    #[test]
    fn step_on_triangle_is_uniform() {
        let g = k3();
        let mut p = LocalProvider::new(&g);
        let mut s = WalkState::new(&mut p, 0, 2, ChaCha8Rng::seed_from_u64(1));
        let n = 100_000;
        let mut to_first = 0u32;
        let mut from_zero = 0u32;
        for _ in 0..n {
            let cur = s.current();
            let next = step(&mut p, &mut s);
            assert_ne!(cur, next);
            if cur == 0 {
                from_zero += 1;
                if next == 1 {
                    to_first += 1;
                }
            }
        }
        // Binomial(from_zero, 1/2) within 3 sigma.
        let mean = from_zero as f64 / 2.0;
        let sigma = (from_zero as f64 / 4.0).sqrt();
        assert!((to_first as f64 - mean).abs() < 3.0 * sigma);
    }

    #[test]
    fn burn_in_zero_only_sets_flag() {
        let g = k3();
        let mut p = LocalProvider::new(&g);
        let mut s = WalkState::new(&mut p, 0, 3, ChaCha8Rng::seed_from_u64(9));
        burn_in(&mut p, &mut s, 0);
        assert!(s.burned_in);
        assert_eq!(s.step_index, 1);
        assert_eq!(s.len(), 1);
        burn_in(&mut p, &mut s, 1000);
        assert_eq!(s.step_index, 1001);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn path_weight_cases() {
        let g = generate::complete(5);
        let mut p = LocalProvider::new(&g);
        let mut s = WalkState::new(&mut p, 0, 5, ChaCha8Rng::seed_from_u64(2));
        burn_in(&mut p, &mut s, 10);
        assert_eq!(path_weight(&s, 2), 1.0);
        assert_eq!(path_weight(&s, 3), 4.0);
        assert_eq!(path_weight(&s, 5), 64.0);
    }

    #[test]
    fn path_weight_single_interior_factor() {
        // a - b - c with d(b) = 4
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (1, 4)]).unwrap();
        let mut p = LocalProvider::new(&g);
        let mut s = WalkState::new(&mut p, 0, 3, ChaCha8Rng::seed_from_u64(0));
        while !(s.len() == 3 && s.recent(1).0 == 1) {
            step(&mut p, &mut s);
        }
        assert_eq!(path_weight(&s, 3), 4.0);
    }

    #[test]
    fn waddle_probability() {
        let g = generate::star(7);
        let mut p = LocalProvider::new(&g);
        p.fetch(0);
        let keys = RunStreams::new(1, 0).waddle;
        let mut out = Vec::new();
        let prob = waddle_sample(&mut p, 0, 2, &mut keys.draws(10, 1), &mut out);
        assert_eq!(out.len(), 2);
        assert!((prob - 1.0 / 49.0).abs() < 1e-15);

        let g5 = generate::star(5);
        let mut p5 = LocalProvider::new(&g5);
        p5.fetch(0);
        out.clear();
        let prob = waddle_sample(&mut p5, 0, 1, &mut keys.draws(3, 1), &mut out);
        assert!((prob - 0.2).abs() < 1e-15);
    }

    #[test]
    fn waddle_marginal_is_uniform() {
        let g = generate::star(6);
        let mut p = LocalProvider::new(&g);
        p.fetch(0);
        let keys = RunStreams::new(77, 3).waddle;
        let n = 60_000u64;
        let mut hits = [0u64; 7];
        let mut out = Vec::new();
        for step in 0..n {
            out.clear();
            waddle_sample(&mut p, 0, 1, &mut keys.draws(step, 1), &mut out);
            hits[out[0] as usize] += 1;
        }
        let expect = n as f64 / 6.0;
        let sigma = (n as f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for &h in &hits[1..] {
            assert!((h as f64 - expect).abs() < 3.0 * sigma, "{hits:?}");
        }
    }

    #[test]
    fn keyed_draws_repeat_per_key() {
        let keys = RunStreams::new(5, 1).waddle;
        let a: Vec<usize> = (0..4)
            .map({
                let mut d = keys.draws(100, 2);
                move |_| d.index(1000)
            })
            .collect();
        let mut d = keys.draws(100, 2);
        let b: Vec<usize> = (0..4).map(|_| d.index(1000)).collect();
        assert_eq!(a, b);
        let mut other = keys.draws(101, 2);
        assert_ne!(
            a[0..4],
            (0..4).map(|_| other.index(1000)).collect::<Vec<_>>()[..]
        );
    }

    #[test]
    fn ledger_counts_distinct_and_total() {
        let g = k3();
        let mut p = LocalProvider::new(&g);
        let mut s = WalkState::new(&mut p, 0, 2, ChaCha8Rng::seed_from_u64(4));
        for _ in 0..50 {
            step(&mut p, &mut s);
        }
        let l = p.ledger();
        assert_eq!(l.distinct, 3);
        assert_eq!(l.total, 1 + 2 * 50);
    }

    #[test]
    fn window_length_tracks_steps() {
        let g = generate::cycle(10);
        let mut p = LocalProvider::new(&g);
        let mut s = WalkState::new(&mut p, 0, 4, ChaCha8Rng::seed_from_u64(4));
        for i in 1..10u64 {
            assert_eq!(s.len() as u64, s.step_index.min(4));
            assert_eq!(s.step_index, i);
            step(&mut p, &mut s);
        }
    }
}
