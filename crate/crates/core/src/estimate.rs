//! Random-walk estimators of motif concentrations and counts.
//!
//! Every estimator accumulates, per motif `m`, a sum `c_m` whose expectation
//! per post-burn-in step is `|S(k,m)| / D`. The per-motif divisors are folded
//! into each increment at sample time, so accumulators from independent runs
//! add up directly and `c_m / sum(c)` is the concentration estimate.
//!
//! * [`Method::NoWaddle`] looks at the last `l(k,m)` walk nodes and counts
//!   windows that cover exactly `k` distinct nodes inducing `M(k,m)`.
//! * [`Method::WrwGeneric`] looks at the last `L(k,m)` nodes; when they are
//!   distinct and `L < k` it picks a random longest-path embedding and draws
//!   the missing `k - L` nodes as random neighbors of the anchoring window
//!   nodes.
//! * [`Method::Wrw`] is the same walk with the fixed waddle positions used
//!   for 4- and 5-node motifs (the generic one for `k = 3`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::motif::{MotifCatalog, MotifEntry, MotifId};
use crate::walk::{
    self, path_weight, waddle_sample, Budget, LocalProvider, NeighborProvider, RunStreams,
    WalkConfig, WalkState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Waddling random walk, specialised for `k = 4, 5`.
    Wrw,
    /// Waddling random walk through the generic per-motif loop.
    WrwGeneric,
    NoWaddle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Wrw => "wrw",
            Method::WrwGeneric => "wrw-generic",
            Method::NoWaddle => "no-waddle",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wrw" => Ok(Method::Wrw),
            "wrw-generic" => Ok(Method::WrwGeneric),
            "no-waddle" => Ok(Method::NoWaddle),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// Running sums for one or more merged runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateAccumulator {
    pub k: usize,
    /// `c_m` for `m = 1..=T_k`, stored at index `m - 1`.
    pub c: Vec<f64>,
    /// Post-burn-in steps.
    pub t: u64,
    /// `sum 1/d(r_i)` over post-burn-in walk nodes.
    pub inv_degree_sum: f64,
    pub runs_merged: u32,
    /// Distinct nodes fetched after burn-in.
    pub queries: u64,
    /// All fetch requests after burn-in.
    pub fetches: u64,
}

impl EstimateAccumulator {
    pub fn new(k: usize, motifs: usize) -> Self {
        Self {
            k,
            c: vec![0.0; motifs],
            t: 0,
            inv_degree_sum: 0.0,
            runs_merged: 1,
            queries: 0,
            fetches: 0,
        }
    }

    /// Adds another accumulator's sums into this one.
    pub fn merge(&mut self, other: &EstimateAccumulator) {
        assert_eq!(self.k, other.k, "merging accumulators for different k");
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += b;
        }
        self.t += other.t;
        self.inv_degree_sum += other.inv_degree_sum;
        self.runs_merged += other.runs_merged;
        self.queries += other.queries;
        self.fetches += other.fetches;
    }

    pub fn total(&self) -> f64 {
        self.c.iter().sum()
    }

    /// `c_m / c_t` for every motif.
    pub fn concentrations(&self) -> Result<Vec<f64>> {
        let total = self.total();
        if total <= 0.0 {
            return Err(Error::NoSamples);
        }
        Ok(self.c.iter().map(|c| c / total).collect())
    }

    /// `D̂ = |V| / mean(1/d)` over the walk nodes.
    pub fn degree_sum_estimate(&self, node_count: u64) -> Option<f64> {
        (self.t > 0 && self.inv_degree_sum > 0.0)
            .then(|| node_count as f64 * self.t as f64 / self.inv_degree_sum)
    }

    /// `|Ŝ(k,m)| = (c_m / t) · D̂`.
    pub fn motif_count(&self, m: u8, degree_sum: f64) -> Option<f64> {
        let c = *self.c.get((m as usize).checked_sub(1)?)?;
        (self.t > 0).then(|| c / self.t as f64 * degree_sum)
    }
}

/// Edge mask of the subgraph induced by `nodes`, through the provider.
#[inline]
fn induced_mask<P: NeighborProvider>(provider: &P, nodes: &[NodeId]) -> u32 {
    let k = nodes.len();
    let mut bits = 0u32;
    let mut bit = 0;
    for i in 0..k {
        for j in i + 1..k {
            if provider.adjacent(nodes[i], nodes[j]) {
                bits |= 1 << bit;
            }
            bit += 1;
        }
    }
    bits
}

#[inline]
fn all_distinct(nodes: &[NodeId]) -> bool {
    (0..nodes.len()).all(|i| !nodes[i + 1..].contains(&nodes[i]))
}

const MAX_WINDOW: usize = 8;

struct NoWaddlePlan {
    /// `(s, 1/P_r(k,m,s) per motif with l = s, or 0)`.
    groups: Vec<(usize, Vec<f64>)>,
}

struct WaddledMotif {
    index: usize,
    entry: MotifEntry,
    divisor: f64,
}

struct GenericPlan {
    /// `1/P_r(k,m,k)` for motifs with `L = k`, 0 otherwise.
    direct: Vec<f64>,
    waddled: Vec<WaddledMotif>,
}

/// `1/P_r(k,m,k)` for motifs with a Hamiltonian path.
fn direct_weights(entries: &[MotifEntry], k: usize) -> Vec<f64> {
    entries
        .iter()
        .map(|e| {
            if e.longest_path == k {
                1.0 / e.pr(k).unwrap() as f64
            } else {
                0.0
            }
        })
        .collect()
}

// Motifs and divisors hard-wired into the specialised walks.
const STAR4: usize = 0;
const STAR4_DIVISOR: f64 = 6.0;
const FORK5: usize = 1;
const FORK5_DIVISOR: f64 = 2.0;
const STAR5: usize = 2;
const STAR5_DIVISOR: f64 = 24.0;
const CRICKET5: usize = 5;
const CRICKET5_DIVISOR: f64 = 4.0;

enum Plan {
    NoWaddle(NoWaddlePlan),
    Generic(GenericPlan),
    Four { direct: Vec<f64> },
    Five { direct: Vec<f64> },
}

/// A configured estimator over one graph; cheap to run many times.
pub struct Estimator<'a> {
    graph: &'a Graph,
    catalog: &'a MotifCatalog,
    k: usize,
    method: Method,
    plan: Plan,
    window: usize,
}

impl<'a> Estimator<'a> {
    /// Checks the graph is connected and precomputes per-motif constants.
    pub fn new(
        graph: &'a Graph,
        catalog: &'a MotifCatalog,
        method: Method,
        k: usize,
    ) -> Result<Self> {
        catalog.ensure_k(k)?;
        if graph.node_count() < 2 {
            return Err(Error::InvalidArgument(
                "a walk needs at least two nodes".into(),
            ));
        }
        let (_, components) = graph.components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        let entries = catalog.entries(k);
        let (plan, window) = match method {
            Method::NoWaddle => {
                let mut lengths: Vec<usize> = entries.iter().map(|e| e.shortest_cover).collect();
                lengths.sort_unstable();
                lengths.dedup();
                let groups = lengths
                    .iter()
                    .map(|&s| {
                        let weights = entries
                            .iter()
                            .map(|e| {
                                if e.shortest_cover == s {
                                    1.0 / e.pr(s).unwrap() as f64
                                } else {
                                    0.0
                                }
                            })
                            .collect();
                        (s, weights)
                    })
                    .collect();
                let window = *lengths.last().unwrap();
                (Plan::NoWaddle(NoWaddlePlan { groups }), window)
            }
            Method::Wrw if k == 4 => (
                Plan::Four {
                    direct: direct_weights(entries, 4),
                },
                4,
            ),
            Method::Wrw if k == 5 => (
                Plan::Five {
                    direct: direct_weights(entries, 5),
                },
                5,
            ),
            Method::Wrw | Method::WrwGeneric => {
                let waddled = entries
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.is_waddled())
                    .map(|(index, e)| WaddledMotif {
                        index,
                        entry: e.clone(),
                        divisor: e.waddle_divisor(),
                    })
                    .collect();
                (
                    Plan::Generic(GenericPlan {
                        direct: direct_weights(entries, k),
                        waddled,
                    }),
                    k,
                )
            }
        };
        debug_assert!(window <= MAX_WINDOW);
        Ok(Self {
            graph,
            catalog,
            k,
            method,
            plan,
            window,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    /// One independent run on the local graph, identified by `run` within
    /// the experiment seeded by `config.seed`.
    pub fn run(&self, config: &WalkConfig, run: u64) -> EstimateAccumulator {
        let mut provider = LocalProvider::new(self.graph);
        let mut streams = RunStreams::new(config.seed, run);
        let start = config
            .start
            .unwrap_or_else(|| walk::uniform_start(self.graph, &mut streams.walk));
        self.run_with(&mut provider, start, config, &mut streams)
    }

    /// Runs against any neighbor provider.
    pub fn run_with<P: NeighborProvider>(
        &self,
        provider: &mut P,
        start: NodeId,
        config: &WalkConfig,
        streams: &mut RunStreams,
    ) -> EstimateAccumulator {
        let mut acc = EstimateAccumulator::new(self.k, self.catalog.motif_count(self.k));
        let mut state = WalkState::new(provider, start, self.window, streams.walk.clone());
        walk::burn_in(provider, &mut state, config.burn_in);
        // nodes seen during burn-in are charged again on their first use
        provider.reset_ledger();
        let cap = provider.node_count().unwrap_or(u64::MAX);
        let mut scratch = Vec::with_capacity(4);
        loop {
            let done = match config.budget {
                Budget::Steps(n) => acc.t >= n,
                Budget::Queries(q) => provider.ledger().distinct >= q.min(cap),
            };
            if done {
                break;
            }
            walk::step(provider, &mut state);
            acc.t += 1;
            acc.inv_degree_sum += 1.0 / state.recent(0).1 as f64;
            self.sample(provider, &state, streams, &mut acc, &mut scratch);
        }
        let ledger = provider.ledger();
        acc.queries = ledger.distinct;
        acc.fetches = ledger.total;
        streams.walk = state.rng;
        acc
    }

    #[inline]
    fn sample<P: NeighborProvider>(
        &self,
        provider: &mut P,
        state: &WalkState,
        streams: &mut RunStreams,
        acc: &mut EstimateAccumulator,
        scratch: &mut Vec<NodeId>,
    ) {
        let k = self.k;
        let step = state.step_index;
        let mut nodes = [0 as NodeId; MAX_WINDOW];
        match &self.plan {
            Plan::NoWaddle(plan) => {
                for (s, weights) in &plan.groups {
                    let s = *s;
                    if state.len() < s {
                        continue;
                    }
                    state.last_nodes(s, &mut nodes[..s]);
                    // distinct nodes in order of first appearance
                    let mut distinct = [0 as NodeId; MAX_WINDOW];
                    let mut count = 0;
                    for &v in &nodes[..s] {
                        if !distinct[..count].contains(&v) {
                            distinct[count] = v;
                            count += 1;
                        }
                    }
                    if count != k {
                        continue;
                    }
                    let Some(id) = self
                        .catalog
                        .classify(induced_mask(provider, &distinct[..k]), k)
                    else {
                        continue;
                    };
                    let w = weights[id.m as usize - 1];
                    if w > 0.0 {
                        acc.c[id.m as usize - 1] += path_weight(state, s) * w;
                    }
                }
            }
            Plan::Generic(plan) => {
                self.sample_direct(provider, state, &plan.direct, acc);
                for wm in &plan.waddled {
                    let s = wm.entry.longest_path;
                    if !state.distinct_tail(s) {
                        continue;
                    }
                    let embedding = wm
                        .entry
                        .random_path_embedding(s, &mut streams.embedding)
                        .expect("waddled motif has longest-path embeddings");
                    state.last_nodes(s, &mut nodes[..s]);
                    scratch.clear();
                    let mut inverse = 1.0;
                    let anchors = &embedding.waddle_anchors;
                    for (slot, &pos) in anchors.iter().enumerate() {
                        if anchors[..slot].contains(&pos) {
                            continue;
                        }
                        // all draws from this anchor share one keyed sequence
                        let count = anchors[slot..].iter().filter(|&&p| p == pos).count();
                        let anchor = nodes[pos as usize];
                        let degree = provider.degree(anchor) as f64;
                        let mut draws = streams.waddle.draws(step, s - 1 - pos as usize);
                        waddle_sample(provider, anchor, count, &mut draws, scratch);
                        for _ in 0..count {
                            inverse *= degree;
                        }
                    }
                    nodes[s..k].copy_from_slice(scratch);
                    if !all_distinct(&nodes[..k]) {
                        continue;
                    }
                    if self
                        .catalog
                        .classify(induced_mask(provider, &nodes[..k]), k)
                        .map(|id| id.m as usize - 1)
                        == Some(wm.index)
                    {
                        acc.c[wm.index] += path_weight(state, s) * inverse / wm.divisor;
                    }
                }
            }
            Plan::Four { direct } => {
                self.sample_direct(provider, state, direct, acc);
                if state.distinct_tail(3) {
                    let (r1, d1) = state.recent(1);
                    state.last_nodes(3, &mut nodes[..3]);
                    scratch.clear();
                    waddle_sample(provider, r1, 1, &mut streams.waddle.draws(step, 1), scratch);
                    nodes[3] = scratch[0];
                    if self.is_motif(provider, &nodes[..4], STAR4) {
                        let d1 = d1 as f64;
                        acc.c[STAR4] += path_weight(state, 3) * d1 / STAR4_DIVISOR;
                    }
                }
            }
            Plan::Five { direct } => {
                self.sample_direct(provider, state, direct, acc);
                if state.distinct_tail(4) {
                    let (r2, d2) = state.recent(2);
                    state.last_nodes(4, &mut nodes[..4]);
                    scratch.clear();
                    waddle_sample(provider, r2, 1, &mut streams.waddle.draws(step, 2), scratch);
                    nodes[4] = scratch[0];
                    if all_distinct(&nodes[..5]) {
                        let d2 = d2 as f64;
                        match self
                            .catalog
                            .classify(induced_mask(provider, &nodes[..5]), 5)
                        {
                            Some(id) if id.m as usize - 1 == FORK5 => {
                                acc.c[FORK5] += path_weight(state, 4) * d2 / FORK5_DIVISOR;
                            }
                            Some(id) if id.m as usize - 1 == CRICKET5 => {
                                acc.c[CRICKET5] += path_weight(state, 4) * d2 / CRICKET5_DIVISOR;
                            }
                            _ => {}
                        }
                    }
                }
                if state.distinct_tail(3) {
                    let (r1, d1) = state.recent(1);
                    state.last_nodes(3, &mut nodes[..3]);
                    scratch.clear();
                    waddle_sample(provider, r1, 2, &mut streams.waddle.draws(step, 1), scratch);
                    nodes[3..5].copy_from_slice(scratch);
                    if self.is_motif(provider, &nodes[..5], STAR5) {
                        let d1 = d1 as f64;
                        acc.c[STAR5] += path_weight(state, 3) * (d1 * d1) / STAR5_DIVISOR;
                    }
                }
            }
        }
    }

    /// Window of `k` distinct walk nodes, classified directly.
    #[inline]
    fn sample_direct<P: NeighborProvider>(
        &self,
        provider: &P,
        state: &WalkState,
        direct: &[f64],
        acc: &mut EstimateAccumulator,
    ) {
        let k = self.k;
        if !state.distinct_tail(k) {
            return;
        }
        let mut nodes = [0 as NodeId; MAX_WINDOW];
        state.last_nodes(k, &mut nodes[..k]);
        if let Some(id) = self
            .catalog
            .classify(induced_mask(provider, &nodes[..k]), k)
        {
            let w = direct[id.m as usize - 1];
            if w > 0.0 {
                acc.c[id.m as usize - 1] += path_weight(state, k) * w;
            }
        }
    }

    #[inline]
    fn is_motif<P: NeighborProvider>(&self, provider: &P, nodes: &[NodeId], index: usize) -> bool {
        all_distinct(nodes)
            && self
                .catalog
                .classify(induced_mask(provider, nodes), nodes.len())
                .map(|id| id.m as usize - 1)
                == Some(index)
    }
}

/// The estimator without waddling, windows of `l(k,m)` nodes.
pub fn estimate_no_waddle(
    graph: &Graph,
    k: usize,
    config: &WalkConfig,
) -> Result<EstimateAccumulator> {
    Ok(Estimator::new(graph, MotifCatalog::shared(), Method::NoWaddle, k)?.run(config, 0))
}

/// The waddling walk through the generic per-motif loop.
pub fn estimate_wrw_generic(
    graph: &Graph,
    k: usize,
    catalog: &MotifCatalog,
    config: &WalkConfig,
) -> Result<EstimateAccumulator> {
    Ok(Estimator::new(graph, catalog, Method::WrwGeneric, k)?.run(config, 0))
}

/// The waddling walk with the fixed 4-node waddle.
pub fn estimate_wrw_4(
    graph: &Graph,
    catalog: &MotifCatalog,
    config: &WalkConfig,
) -> Result<EstimateAccumulator> {
    Ok(Estimator::new(graph, catalog, Method::Wrw, 4)?.run(config, 0))
}

/// The waddling walk with the fixed 5-node waddles.
pub fn estimate_wrw_5(
    graph: &Graph,
    catalog: &MotifCatalog,
    config: &WalkConfig,
) -> Result<EstimateAccumulator> {
    Ok(Estimator::new(graph, catalog, Method::Wrw, 5)?.run(config, 0))
}

/// A walk that only records degrees, for `D̂` on its own. The budget is
/// `ceil(sample_fraction · |V|)` distinct queries after burn-in.
pub fn estimate_degree_sum(
    graph: &Graph,
    node_count: u64,
    sample_fraction: f64,
    config: &WalkConfig,
    run: u64,
) -> Result<f64> {
    if !(sample_fraction > 0.0 && sample_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sample fraction {sample_fraction} not in (0, 1]"
        )));
    }
    if !graph.is_connected() || graph.node_count() < 2 {
        return Err(Error::Disconnected {
            components: graph.components().1,
        });
    }
    let queries = (sample_fraction * graph.node_count() as f64).ceil() as u64;
    let mut provider = LocalProvider::new(graph);
    let mut streams = RunStreams::new(config.seed, run);
    let start = config
        .start
        .unwrap_or_else(|| walk::uniform_start(graph, &mut streams.walk));
    let mut state = WalkState::new(&mut provider, start, 1, streams.walk.clone());
    walk::burn_in(&mut provider, &mut state, config.burn_in);
    provider.reset_ledger();
    let (mut t, mut inv) = (0u64, 0.0);
    while provider.ledger().distinct < queries {
        walk::step(&mut provider, &mut state);
        t += 1;
        inv += 1.0 / state.recent(0).1 as f64;
    }
    Ok(node_count as f64 * t as f64 / inv)
}

/// `|Ŝ(k,m)|` from an accumulator and a degree-sum estimate.
pub fn estimate_motif_count(
    acc: &EstimateAccumulator,
    degree_sum: f64,
    motif: MotifId,
) -> Result<f64> {
    if motif.k as usize != acc.k {
        return Err(Error::UnknownMotif(motif));
    }
    acc.motif_count(motif.m, degree_sum).ok_or(Error::NoSamples)
}

/// Summary statistics over independent runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub mean: f64,
    pub stderr: Option<f64>,
    pub ci95_lo: Option<f64>,
    pub ci95_hi: Option<f64>,
}

/// Mean, standard error and a 95% interval (Student t below 30 samples,
/// normal otherwise).
pub fn run_stats(samples: &[f64]) -> RunStats {
    run_stats_at(samples, 0.95)
}

/// Same as [`run_stats`] at another two-sided confidence level.
pub fn run_stats_at(samples: &[f64], level: f64) -> RunStats {
    use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

    let n = samples.len();
    if n == 0 {
        return RunStats {
            mean: f64::NAN,
            stderr: None,
            ci95_lo: None,
            ci95_hi: None,
        };
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return RunStats {
            mean,
            stderr: None,
            ci95_lo: None,
            ci95_hi: None,
        };
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let stderr = (var / n as f64).sqrt();
    let p = 0.5 + level / 2.0;
    let q = if n < 30 {
        StudentsT::new(0.0, 1.0, (n - 1) as f64)
            .unwrap()
            .inverse_cdf(p)
    } else {
        Normal::new(0.0, 1.0).unwrap().inverse_cdf(p)
    };
    RunStats {
        mean,
        stderr: Some(stderr),
        ci95_lo: Some(mean - q * stderr),
        ci95_hi: Some(mean + q * stderr),
    }
}

/// Inputs to the sample-size bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Mixing time `T`.
    pub mixing_time: f64,
    /// `D`.
    pub degree_sum: f64,
    /// Product of the `k` largest degrees.
    pub top_degree_product: f64,
    /// `|S(k,m)|` or a lower bound on it.
    pub motif_count: f64,
    pub delta: f64,
    pub alpha: f64,
    /// The unspecified constant inside the logarithm; 1 by default.
    pub c_const: f64,
    /// The leading constant; 72 by default, from the exponent of the
    /// underlying Chernoff-type bound for Markov chains.
    pub xi: f64,
}

impl BoundInputs {
    pub const DEFAULT_XI: f64 = 72.0;
    pub const DEFAULT_C: f64 = 1.0;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepBound {
    pub t_min: f64,
    /// With probability at least `confidence`, `Ĉ/C` lies in
    /// `[lower_factor, upper_factor]`.
    pub lower_factor: f64,
    pub upper_factor: f64,
    pub confidence: f64,
}

/// `ξ T D Q / (|S| δ²) · ln(c/α)` steps, and the concentration error band
/// `(1 - 2δ/(1+δ), 1 + 2δ/(1-δ))` they buy with probability `1 - 2α`.
pub fn required_steps(b: &BoundInputs) -> Result<StepBound> {
    let positive = [
        ("mixing time", b.mixing_time),
        ("degree sum", b.degree_sum),
        ("top-degree product", b.top_degree_product),
        ("motif count", b.motif_count),
        ("c", b.c_const),
        ("xi", b.xi),
    ];
    for (name, value) in positive {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "{name} must be positive, got {value}"
            )));
        }
    }
    for (name, value) in [("delta", b.delta), ("alpha", b.alpha)] {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "{name} must lie in (0, 1), got {value}"
            )));
        }
    }
    let log_term = (b.c_const / b.alpha).ln();
    if log_term <= 0.0 {
        return Err(Error::InvalidArgument("c/alpha must exceed 1".into()));
    }
    let t_min = b.xi * b.mixing_time * b.degree_sum * b.top_degree_product * log_term
        / (b.motif_count * b.delta * b.delta);
    Ok(StepBound {
        t_min,
        lower_factor: 1.0 - 2.0 * b.delta / (1.0 + b.delta),
        upper_factor: 1.0 + 2.0 * b.delta / (1.0 - b.delta),
        confidence: 1.0 - 2.0 * b.alpha,
    })
}

/// Product of the `k` largest degrees of `graph`.
pub fn top_degree_product(graph: &Graph, k: usize) -> f64 {
    let mut degrees: Vec<usize> = (0..graph.node_count() as NodeId)
        .map(|v| graph.degree(v))
        .collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    degrees.iter().take(k).map(|&d| d as f64).product()
}
