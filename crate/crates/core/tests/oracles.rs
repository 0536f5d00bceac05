//! Estimators and exact routes checked against independent oracles.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wrw_core::estimate::{
    required_steps, run_stats, top_degree_product, BoundInputs, Estimator, Method,
};
use wrw_core::exact::{enumerate_exact, formula_counts, subgraph_counts, DEFAULT_BUDGET};
use wrw_core::experiment::{run_experiment, ExperimentConfig};
use wrw_core::generate;
use wrw_core::walk::{self, Budget, LocalProvider, NeighborProvider, WalkConfig, WalkState};
use wrw_core::{Graph, MotifCatalog, MotifId, NodeId};

fn cat() -> &'static MotifCatalog {
    MotifCatalog::shared()
}

fn cfg(seed: u64, steps: u64) -> WalkConfig {
    WalkConfig {
        burn_in: 200,
        ..WalkConfig::with_steps(seed, steps)
    }
}

#[test]
fn induced_mask_matches_pair_scan() {
    let g = generate::erdos_renyi(30, 0.3, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let nodes: Vec<NodeId> = rand::seq::index::sample(&mut rng, 30, 5)
            .into_iter()
            .map(|v| v as NodeId)
            .collect();
        let mut expected = 0u32;
        let mut bit = 0;
        for i in 0..5 {
            for j in i + 1..5 {
                if g.neighbors(nodes[i]).contains(&nodes[j]) {
                    expected |= 1 << bit;
                }
                bit += 1;
            }
        }
        assert_eq!(g.induced_edge_mask(&nodes), expected);
    }
}

/// Stationary probability of a specific 3-node walk on a triangle:
/// `d(a)/D · 1/d(a) · 1/d(b) = 1/12`.
#[test]
fn triangle_sequence_frequency() {
    let g = generate::complete(3);
    let mut p = LocalProvider::new(&g);
    let mut s = WalkState::new(&mut p, 0, 3, ChaCha8Rng::seed_from_u64(12));
    walk::burn_in(&mut p, &mut s, 100);
    let steps = 120_000;
    let mut hits = 0u64;
    for _ in 0..steps {
        walk::step(&mut p, &mut s);
        if s.recent(2).0 == 0 && s.recent(1).0 == 1 && s.recent(0).0 == 2 {
            hits += 1;
        }
    }
    let freq = hits as f64 / steps as f64;
    let sd = (1.0 / 12.0 * 11.0 / 12.0 / steps as f64).sqrt();
    assert!((freq - 1.0 / 12.0).abs() < 4.0 * sd, "{freq}");
}

/// Pearson chi-square against the uniform distribution over embeddings.
#[test]
fn random_embeddings_are_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for id in [
        MotifId::new(4, 1),
        MotifId::new(5, 2),
        MotifId::new(5, 3),
        MotifId::new(5, 6),
    ] {
        let e = cat().require(id).unwrap();
        let s = e.longest_path;
        let n = e.embeddings(s).len();
        assert_eq!(n as u64, e.pr(s).unwrap());
        let draws = 2000 * n;
        let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
        for _ in 0..draws {
            *seen
                .entry(
                    e.random_path_embedding(s, &mut rng)
                        .unwrap()
                        .vertices
                        .clone(),
                )
                .or_default() += 1;
        }
        assert_eq!(seen.len(), n);
        let expected = draws as f64 / n as f64;
        let chi2: f64 = seen
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 99.9% quantile of chi-square with up to 11 degrees of freedom is 31.3
        assert!(chi2 < 31.3, "{id}: chi2 {chi2}");
    }
}

#[test]
fn specialised_and_generic_agree_sample_for_sample_at_k4() {
    let g = generate::holme_kim(300, 3, 0.5, 3);
    let fast = Estimator::new(&g, cat(), Method::Wrw, 4).unwrap();
    let slow = Estimator::new(&g, cat(), Method::WrwGeneric, 4).unwrap();
    for run in 0..5 {
        assert_eq!(fast.run(&cfg(8, 3000), run), slow.run(&cfg(8, 3000), run));
    }
}

/// At k = 5 the fork and cricket waddle from a randomly chosen anchor in the
/// generic loop and from `r_{i-2}` in the specialised one; the other 19
/// motifs must still match exactly, and the two must agree in mean.
#[test]
fn specialised_and_generic_agree_at_k5() {
    let g = generate::holme_kim(150, 3, 0.6, 4);
    let fast = Estimator::new(&g, cat(), Method::Wrw, 5).unwrap();
    let slow = Estimator::new(&g, cat(), Method::WrwGeneric, 5).unwrap();
    let (fork, cricket) = (1, 5);
    let (mut fa, mut sa, mut fc, mut sc) = (vec![], vec![], vec![], vec![]);
    for run in 0..60 {
        let a = fast.run(&cfg(9, 3000), run);
        let b = slow.run(&cfg(9, 3000), run);
        assert_eq!(a.t, b.t);
        for m in 0..21 {
            if m != fork && m != cricket {
                assert_eq!(a.c[m], b.c[m], "M(5,{}) run {run}", m + 1);
            }
        }
        fa.push(a.c[fork] / a.t as f64);
        sa.push(b.c[fork] / b.t as f64);
        fc.push(a.c[cricket] / a.t as f64);
        sc.push(b.c[cricket] / b.t as f64);
    }
    for (x, y) in [(fa, sa), (fc, sc)] {
        let (a, b) = (run_stats(&x), run_stats(&y));
        let se = (a.stderr.unwrap().powi(2) + b.stderr.unwrap().powi(2)).sqrt();
        assert!(
            (a.mean - b.mean).abs() < 4.0 * se,
            "{} vs {}",
            a.mean,
            b.mean
        );
    }
}

/// Mean of `c_m / t` estimates `|S(k,m)| / D` for every estimator.
#[test]
fn per_step_sums_estimate_count_over_degree_sum() {
    let g = generate::connected_gnm(14, 30, 21);
    let d = g.degree_sum() as f64;
    for k in 3..=5 {
        let exact = enumerate_exact(&g, cat(), k, DEFAULT_BUDGET).unwrap();
        for method in [Method::Wrw, Method::WrwGeneric, Method::NoWaddle] {
            let est = Estimator::new(&g, cat(), method, k).unwrap();
            let runs: Vec<_> = (0..200)
                .map(|r| est.run(&cfg(30 + k as u64, 2000), r))
                .collect();
            let motifs = exact.counts.len();
            for m in 0..motifs {
                let truth = exact.counts[m] as f64 / d;
                let s = run_stats(&runs.iter().map(|a| a.c[m] / a.t as f64).collect::<Vec<_>>());
                let se = s.stderr.unwrap();
                // Bonferroni over every (k, method, motif) checked here
                assert!(
                    (s.mean - truth).abs() <= 4.0 * se + 1e-12,
                    "k={k} {method} M({k},{}): {} vs {truth} (se {se})",
                    m + 1,
                    s.mean
                );
            }
        }
    }
}

#[test]
fn ci_coverage_is_near_nominal() {
    let g = generate::holme_kim(20, 2, 0.5, 42);
    let truth = enumerate_exact(&g, cat(), 4, DEFAULT_BUDGET)
        .unwrap()
        .concentrations()
        .unwrap();
    let mut covered = 0;
    let mut total = 0;
    for rep in 0..100 {
        let mut c = ExperimentConfig::new(4, Method::Wrw, Budget::Steps(1000), 30, 500 + rep);
        c.burn_in = 100;
        let report = run_experiment(&g, cat(), &c)
            .unwrap()
            .report(cat())
            .unwrap();
        for (row, &t) in report.motifs.iter().zip(&truth) {
            if t < 0.01 {
                continue;
            }
            total += 1;
            if row.ci95_lo.unwrap() <= t && t <= row.ci95_hi.unwrap() {
                covered += 1;
            }
        }
    }
    let rate = covered as f64 / total as f64;
    assert!((0.90..=0.99).contains(&rate), "coverage {rate}");
}

#[test]
fn closed_form_counts_match_enumeration() {
    for seed in 0..4 {
        let g = generate::holme_kim(400, 3, 0.7, seed);
        for k in 3..=4 {
            assert_eq!(
                formula_counts(&g, cat(), k).unwrap(),
                enumerate_exact(&g, cat(), k, DEFAULT_BUDGET).unwrap()
            );
        }
    }
}

#[test]
fn pattern_counts_on_small_graphs() {
    let k4 = subgraph_counts(&generate::complete(4));
    assert_eq!(
        (
            k4.claws,
            k4.paths,
            k4.tailed_triangles,
            k4.cycles,
            k4.diamonds,
            k4.cliques
        ),
        (4, 12, 12, 3, 6, 1)
    );
    let c5 = subgraph_counts(&generate::cycle(5));
    assert_eq!((c5.paths, c5.cycles, c5.triangles), (5, 0, 0));
    let c4 = subgraph_counts(&generate::cycle(4));
    assert_eq!((c4.paths, c4.cycles), (4, 1));
}

#[test]
fn count_estimates_track_exact_counts() {
    let g = generate::holme_kim(500, 3, 0.5, 13);
    let exact = formula_counts(&g, cat(), 4).unwrap();
    let mut c = ExperimentConfig::new(4, Method::Wrw, Budget::Steps(4000), 40, 7);
    c.motifs = vec![MotifId::new(4, 1), MotifId::new(4, 2)];
    let report = run_experiment(&g, cat(), &c)
        .unwrap()
        .report(cat())
        .unwrap();
    for row in &report.motifs {
        let truth = exact.counts[row.m as usize - 1] as f64;
        let rel = (row.count_estimate.unwrap() - truth) / truth;
        assert!(rel.abs() < 0.05, "M(4,{}) {rel}", row.m);
    }
}

#[test]
fn bound_on_k5() {
    // independent arithmetic for xi T D Q ln(1/alpha) / (|S| delta^2)
    let g = generate::complete(5);
    let q = top_degree_product(&g, 5);
    assert_eq!(q, 1024.0);
    let inputs = BoundInputs {
        mixing_time: 10.0,
        degree_sum: g.degree_sum() as f64,
        top_degree_product: q,
        motif_count: 1.0,
        delta: 0.5,
        alpha: 0.1,
        c_const: 1.0,
        xi: 72.0,
    };
    let b = required_steps(&inputs).unwrap();
    let expected = 72.0 * 10.0 * 20.0 * 1024.0 * 10f64.ln() / 0.25;
    assert!((b.t_min - expected).abs() < 1e-6 * expected);
    assert!((b.lower_factor - 1.0 / 3.0).abs() < 1e-12);
    assert!((b.upper_factor - 3.0).abs() < 1e-12);
    assert!((b.confidence - 0.8).abs() < 1e-12);

    let halved = required_steps(&BoundInputs {
        delta: 0.25,
        ..inputs
    })
    .unwrap();
    assert!((halved.t_min / b.t_min - 4.0).abs() < 1e-9);
    let squared = required_steps(&BoundInputs {
        alpha: 0.01,
        ..inputs
    })
    .unwrap();
    assert!((squared.t_min / b.t_min - 2.0).abs() < 1e-9);
}

#[test]
fn walk_visits_match_stationary_distribution() {
    let g = generate::star(4);
    let mut p = LocalProvider::new(&g);
    let mut s = WalkState::new(&mut p, 1, 1, ChaCha8Rng::seed_from_u64(3));
    // odd and even steps alternate between center and leaves on a star
    let steps = 40_000;
    let mut center = 0;
    for _ in 0..steps {
        walk::step(&mut p, &mut s);
        if s.current() == 0 {
            center += 1;
        }
    }
    assert_eq!(center, steps / 2);
    assert!(p.ledger().total >= p.ledger().distinct);
}

#[test]
fn classification_of_walk_windows_uses_only_fetched_nodes() {
    struct Strict<'g> {
        inner: LocalProvider<'g>,
        fetched: Vec<bool>,
    }
    impl NeighborProvider for Strict<'_> {
        fn fetch(&mut self, v: NodeId) -> &[NodeId] {
            self.fetched[v as usize] = true;
            self.inner.fetch(v)
        }
        fn degree(&self, v: NodeId) -> usize {
            assert!(self.fetched[v as usize], "degree of unfetched {v}");
            self.inner.degree(v)
        }
        fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
            assert!(self.fetched[u as usize], "adjacency from unfetched {u}");
            self.inner.adjacent(u, v)
        }
        fn ledger(&self) -> walk::QueryLedger {
            self.inner.ledger()
        }
        fn reset_ledger(&mut self) {
            self.inner.reset_ledger()
        }
    }
    let g: Graph = generate::holme_kim(200, 3, 0.5, 1);
    for (method, k) in [
        (Method::Wrw, 5),
        (Method::WrwGeneric, 5),
        (Method::NoWaddle, 4),
    ] {
        let est = Estimator::new(&g, cat(), method, k).unwrap();
        let mut provider = Strict {
            inner: LocalProvider::new(&g),
            fetched: vec![false; g.node_count()],
        };
        let mut streams = walk::RunStreams::new(1, 0);
        let acc = est.run_with(
            &mut provider,
            0,
            &WalkConfig::with_queries(1, 100),
            &mut streams,
        );
        assert!(acc.queries >= 100 && acc.t > 0);
    }
}
