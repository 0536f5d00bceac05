//! Repeated seeded runs, report assembly and estimate/exact comparison.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{run_stats, EstimateAccumulator, Estimator, Method};
use crate::exact::ExactCounts;
use crate::graph::Graph;
use crate::motif::{MotifCatalog, MotifId};
use crate::report::{ComparisonReport, ComparisonRow, EstimateReport, MotifReport};
use crate::walk::{Budget, WalkConfig, DEFAULT_BURN_IN};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph_name: String,
    pub k: usize,
    pub method: Method,
    pub budget: Budget,
    pub runs: u32,
    pub burn_in: u64,
    pub seed: u64,
    /// Restrict the report to these motifs; all motifs of size `k` if empty.
    pub motifs: Vec<MotifId>,
    /// `|V|` for count estimates; the graph's own node count if absent.
    pub node_count: Option<u64>,
}

impl ExperimentConfig {
    pub fn new(k: usize, method: Method, budget: Budget, runs: u32, seed: u64) -> Self {
        Self {
            graph_name: String::new(),
            k,
            method,
            budget,
            runs,
            burn_in: DEFAULT_BURN_IN,
            seed,
            motifs: Vec::new(),
            node_count: None,
        }
    }

    fn walk_config(&self) -> WalkConfig {
        WalkConfig {
            seed: self.seed,
            burn_in: self.burn_in,
            budget: self.budget,
            start: None,
        }
    }
}

/// Accumulators of all runs, in run order.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub node_count: u64,
    pub runs: Vec<EstimateAccumulator>,
}

/// Runs `config.runs` independent walks. Run `i` uses the streams derived
/// from `(config.seed, i)`, so results do not depend on thread count.
pub fn run_experiment(
    graph: &Graph,
    catalog: &MotifCatalog,
    config: &ExperimentConfig,
) -> Result<Experiment> {
    if config.runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    for id in &config.motifs {
        if id.k as usize != config.k {
            return Err(Error::InvalidArgument(format!(
                "motif {id} does not have {} nodes",
                config.k
            )));
        }
        catalog.require(*id)?;
    }
    let estimator = Estimator::new(graph, catalog, config.method, config.k)?;
    let walk = config.walk_config();

    #[cfg(feature = "parallel")]
    let runs = {
        use rayon::prelude::*;
        (0..config.runs as u64)
            .into_par_iter()
            .map(|run| estimator.run(&walk, run))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs = (0..config.runs as u64)
        .map(|run| estimator.run(&walk, run))
        .collect();

    Ok(Experiment {
        config: config.clone(),
        node_count: config.node_count.unwrap_or(graph.node_count() as u64),
        runs,
    })
}

impl Experiment {
    /// All runs merged into one accumulator.
    pub fn merged(&self) -> EstimateAccumulator {
        let mut iter = self.runs.iter();
        let mut acc = iter.next().expect("at least one run").clone();
        for r in iter {
            acc.merge(r);
        }
        acc
    }

    /// Per-run concentration vectors of the runs that saw any sample.
    pub fn run_concentrations(&self) -> Vec<Vec<f64>> {
        self.runs
            .iter()
            .filter_map(|r| r.concentrations().ok())
            .collect()
    }

    /// Per-run count estimates `(c_m/t)·D̂`, each with the run's own `D̂`.
    pub fn run_counts(&self, m: u8) -> Vec<f64> {
        self.runs
            .iter()
            .filter_map(|r| r.motif_count(m, r.degree_sum_estimate(self.node_count)?))
            .collect()
    }

    /// Headline numbers are means over runs; intervals come from the spread
    /// between runs.
    pub fn report(&self, catalog: &MotifCatalog) -> Result<EstimateReport> {
        let conc = self.run_concentrations();
        if conc.is_empty() {
            return Err(Error::NoSamples);
        }
        let d_hats: Vec<f64> = self
            .runs
            .iter()
            .filter_map(|r| r.degree_sum_estimate(self.node_count))
            .collect();
        let cfg = &self.config;
        let mut motifs = Vec::new();
        for entry in catalog.entries(cfg.k) {
            if !cfg.motifs.is_empty() && !cfg.motifs.contains(&entry.id) {
                continue;
            }
            let idx = entry.id.m as usize - 1;
            let samples: Vec<f64> = conc.iter().map(|c| c[idx]).collect();
            let stats = run_stats(&samples);
            let counts = self.run_counts(entry.id.m);
            motifs.push(MotifReport {
                k: entry.id.k,
                m: entry.id.m,
                canonical_code: entry.canonical_code,
                concentration: stats.mean,
                count_estimate: (!counts.is_empty()).then(|| run_stats(&counts).mean),
                stderr: stats.stderr,
                ci95_lo: stats.ci95_lo,
                ci95_hi: stats.ci95_hi,
            });
        }
        let (queries, steps) = match cfg.budget {
            Budget::Queries(q) => (Some(q), None),
            Budget::Steps(s) => (None, Some(s)),
        };
        Ok(EstimateReport {
            graph: cfg.graph_name.clone(),
            k: cfg.k,
            method: cfg.method.name().to_string(),
            queries,
            steps,
            runs: cfg.runs,
            burn_in: cfg.burn_in,
            seed: cfg.seed,
            runs_without_samples: (self.runs.len() - conc.len()) as u32,
            degree_sum_estimate: (!d_hats.is_empty()).then(|| run_stats(&d_hats).mean),
            motifs,
        })
    }
}

/// Exact counts in report form, so they can be saved and compared against.
pub fn exact_report(
    graph_name: &str,
    counts: &ExactCounts,
    catalog: &MotifCatalog,
    motifs: &[MotifId],
) -> Result<EstimateReport> {
    let conc = counts.concentrations()?;
    let rows = catalog
        .entries(counts.k)
        .iter()
        .filter(|e| motifs.is_empty() || motifs.contains(&e.id))
        .map(|e| {
            let idx = e.id.m as usize - 1;
            MotifReport {
                k: e.id.k,
                m: e.id.m,
                canonical_code: e.canonical_code,
                concentration: conc[idx],
                count_estimate: Some(counts.counts[idx] as f64),
                stderr: None,
                ci95_lo: None,
                ci95_hi: None,
            }
        })
        .collect();
    Ok(EstimateReport {
        graph: graph_name.to_string(),
        k: counts.k,
        method: "exact".into(),
        queries: None,
        steps: None,
        runs: 1,
        burn_in: 0,
        seed: 0,
        runs_without_samples: 0,
        degree_sum_estimate: None,
        motifs: rows,
    })
}

fn relative(estimate: f64, exact: f64) -> Option<f64> {
    (exact != 0.0).then(|| (estimate - exact) / exact)
}

/// Joins an estimate report with exact values motif by motif.
pub fn compare(estimate: &EstimateReport, exact: &EstimateReport) -> Result<ComparisonReport> {
    if estimate.k != exact.k {
        return Err(Error::Schema(format!(
            "estimate has k = {}, exact has k = {}",
            estimate.k, exact.k
        )));
    }
    let mut rows = Vec::with_capacity(estimate.motifs.len());
    for est in &estimate.motifs {
        let truth = exact.motif(est.id()).ok_or_else(|| {
            Error::Schema(format!("motif {} missing from the exact report", est.id()))
        })?;
        if truth.canonical_code != est.canonical_code {
            return Err(Error::Schema(format!(
                "motif {} has canonical code {} in the estimate and {} in the exact report",
                est.id(),
                est.canonical_code,
                truth.canonical_code
            )));
        }
        let within_ci = match (est.ci95_lo, est.ci95_hi) {
            (Some(lo), Some(hi)) => Some(lo <= truth.concentration && truth.concentration <= hi),
            _ => None,
        };
        rows.push(ComparisonRow {
            k: est.k,
            m: est.m,
            canonical_code: est.canonical_code,
            estimate: est.concentration,
            exact: truth.concentration,
            relative_error: relative(est.concentration, truth.concentration),
            within_ci,
            count_estimate: est.count_estimate,
            count_exact: truth.count_estimate,
            count_relative_error: match (est.count_estimate, truth.count_estimate) {
                (Some(e), Some(x)) => relative(e, x),
                _ => None,
            },
        });
    }
    Ok(ComparisonReport {
        graph: estimate.graph.clone(),
        k: estimate.k,
        method: estimate.method.clone(),
        queries: estimate.queries,
        runs: estimate.runs,
        motifs: rows,
    })
}
