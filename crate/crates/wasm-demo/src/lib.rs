//! Browser bindings for the demo page in `www/`.
//!
//! Each export returns a JSON string so the page needs no extra glue.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use wrw_core::estimate::Method;
use wrw_core::exact::{enumerate_exact, formula_counts, ExactCounts};
use wrw_core::experiment::{run_experiment, ExperimentConfig};
use wrw_core::generate;
use wrw_core::walk::Budget;
use wrw_core::{Graph, MotifCatalog, MotifId};

/// Exact 5-node enumeration stops past this many subgraphs in the browser.
const BROWSER_CIS_BUDGET: u64 = 20_000_000;

/// Concentration with its 95% CI bounds.
type Estimate = (f64, Option<f64>, Option<f64>);

#[derive(Serialize)]
struct CatalogRow {
    m: u8,
    canonical_code: u32,
    edges: u32,
    l: usize,
    big_l: usize,
    z: u32,
    pw: u64,
    pr: Vec<(usize, u64)>,
    /// Upper-triangle edge list for drawing.
    drawing: Vec<(u8, u8)>,
}

pub fn catalog_rows(k: usize) -> Result<String, String> {
    let cat = MotifCatalog::shared();
    cat.ensure_k(k).map_err(|e| e.to_string())?;
    let rows: Vec<CatalogRow> = cat
        .entries(k)
        .iter()
        .map(|e| {
            let adj = e.adjacency();
            let drawing = (0..k as u8)
                .flat_map(|i| (i + 1..k as u8).map(move |j| (i, j)))
                .filter(|&(i, j)| adj[i as usize] >> j & 1 == 1)
                .collect();
            CatalogRow {
                m: e.id.m,
                canonical_code: e.canonical_code,
                edges: e.edge_count,
                l: e.shortest_cover,
                big_l: e.longest_path,
                z: e.symmetry,
                pw: e.pw,
                pr: e.pr_table.iter().map(|(&s, &p)| (s, p)).collect(),
                drawing,
            }
        })
        .collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

fn demo_graph(
    nodes: usize,
    edges_per_node: usize,
    triad_p: f64,
    seed: u64,
) -> Result<Graph, String> {
    if nodes <= edges_per_node + 1 || edges_per_node == 0 {
        return Err("need nodes > edges per node + 1 and at least one edge per node".into());
    }
    Ok(generate::holme_kim(nodes, edges_per_node, triad_p, seed))
}

fn exact_counts(g: &Graph, k: usize) -> Result<ExactCounts, String> {
    let cat = MotifCatalog::shared();
    let r = if k <= 4 {
        formula_counts(g, cat, k)
    } else {
        enumerate_exact(g, cat, k, BROWSER_CIS_BUDGET)
    };
    r.map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ComparisonRow {
    m: u8,
    exact: f64,
    wrw: f64,
    wrw_lo: Option<f64>,
    wrw_hi: Option<f64>,
    no_waddle: f64,
}

#[derive(Serialize)]
struct Comparison {
    nodes: usize,
    edges: usize,
    rows: Vec<ComparisonRow>,
}

fn concentrations(
    g: &Graph,
    k: usize,
    method: Method,
    queries: u64,
    runs: u32,
    seed: u64,
) -> Result<Vec<Estimate>, String> {
    let cat = MotifCatalog::shared();
    let cfg = ExperimentConfig::new(k, method, Budget::Queries(queries), runs, seed);
    let report = run_experiment(g, cat, &cfg)
        .and_then(|e| e.report(cat))
        .map_err(|e| e.to_string())?;
    Ok(report
        .motifs
        .iter()
        .map(|r| (r.concentration, r.ci95_lo, r.ci95_hi))
        .collect())
}

/// Exact concentrations next to WRW and no-waddle estimates on a generated
/// Holme–Kim graph.
pub fn compare_on_generated(
    nodes: usize,
    edges_per_node: usize,
    triad_p: f64,
    k: usize,
    queries: u64,
    runs: u32,
    seed: u64,
) -> Result<String, String> {
    let g = demo_graph(nodes, edges_per_node, triad_p, seed)?;
    let exact = exact_counts(&g, k)?
        .concentrations()
        .map_err(|e| e.to_string())?;
    let wrw = concentrations(&g, k, Method::Wrw, queries, runs, seed)?;
    let plain = concentrations(&g, k, Method::NoWaddle, queries, runs, seed)?;
    let rows = exact
        .iter()
        .enumerate()
        .map(|(i, &x)| ComparisonRow {
            m: i as u8 + 1,
            exact: x,
            wrw: wrw[i].0,
            wrw_lo: wrw[i].1,
            wrw_hi: wrw[i].2,
            no_waddle: plain[i].0,
        })
        .collect();
    serde_json::to_string(&Comparison {
        nodes: g.node_count(),
        edges: g.edge_count(),
        rows,
    })
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct BudgetPoint {
    queries: u64,
    wrw: f64,
    no_waddle: f64,
}

/// Mean absolute relative error of `Ĉ(k,m)` for each query budget.
pub fn error_curve(
    nodes: usize,
    edges_per_node: usize,
    triad_p: f64,
    motif: &str,
    budgets: &[u64],
    runs: u32,
    seed: u64,
) -> Result<String, String> {
    let id: MotifId = motif.parse().map_err(|e: wrw_core::Error| e.to_string())?;
    let k = id.k as usize;
    MotifCatalog::shared()
        .require(id)
        .map_err(|e| e.to_string())?;
    let g = demo_graph(nodes, edges_per_node, triad_p, seed)?;
    let truth = exact_counts(&g, k)?
        .concentrations()
        .map_err(|e| e.to_string())?[id.m as usize - 1];
    if truth == 0.0 {
        return Err(format!("{id} does not occur in this graph"));
    }
    let cat = MotifCatalog::shared();
    let mean_error = |method: Method, q: u64| -> Result<f64, String> {
        let mut cfg = ExperimentConfig::new(k, method, Budget::Queries(q), runs, seed);
        cfg.motifs = vec![id];
        let exp = run_experiment(&g, cat, &cfg).map_err(|e| e.to_string())?;
        let runs = exp.run_concentrations();
        if runs.is_empty() {
            return Err("no samples; raise the budget".into());
        }
        Ok(runs
            .iter()
            .map(|c| ((c[id.m as usize - 1] - truth) / truth).abs())
            .sum::<f64>()
            / runs.len() as f64)
    };
    let points = budgets
        .iter()
        .map(|&q| {
            Ok(BudgetPoint {
                queries: q,
                wrw: mean_error(Method::Wrw, q)?,
                no_waddle: mean_error(Method::NoWaddle, q)?,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    serde_json::to_string(&points).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = catalog)]
pub fn js_catalog(k: usize) -> Result<String, JsError> {
    catalog_rows(k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = compareOnGenerated)]
pub fn js_compare(
    nodes: usize,
    edges_per_node: usize,
    triad_p: f64,
    k: usize,
    queries: u32,
    runs: u32,
    seed: u32,
) -> Result<String, JsError> {
    compare_on_generated(
        nodes,
        edges_per_node,
        triad_p,
        k,
        queries as u64,
        runs,
        seed as u64,
    )
    .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = errorCurve)]
pub fn js_error_curve(
    nodes: usize,
    edges_per_node: usize,
    triad_p: f64,
    motif: &str,
    budgets: Vec<u32>,
    runs: u32,
    seed: u32,
) -> Result<String, JsError> {
    let budgets: Vec<u64> = budgets.into_iter().map(u64::from).collect();
    error_curve(
        nodes,
        edges_per_node,
        triad_p,
        motif,
        &budgets,
        runs,
        seed as u64,
    )
    .map_err(|e| JsError::new(&e))
}
