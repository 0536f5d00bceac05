use std::collections::BTreeSet;

use proptest::prelude::*;

use wrw_core::estimate::{required_steps, BoundInputs, EstimateAccumulator};
use wrw_core::motif::mask;
use wrw_core::{EdgeListOptions, Graph, MotifCatalog};

fn edges_strategy() -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec((0u64..40, 0u64..40), 1..120)
}

fn normalized(edges: &[(u64, u64)]) -> BTreeSet<(u64, u64)> {
    edges
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect()
}

fn external_edges(g: &Graph) -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    for u in 0..g.node_count() as u32 {
        for &v in g.neighbors(u) {
            let (a, b) = (g.external_id(u), g.external_id(v));
            out.insert((a.min(b), a.max(b)));
        }
    }
    out
}

proptest! {
    #[test]
    fn edge_list_round_trip(edges in edges_strategy()) {
        let want = normalized(&edges);
        prop_assume!(!want.is_empty());
        let g = Graph::from_labeled_edges(edges.iter().copied()).unwrap();
        prop_assert_eq!(external_edges(&g), want.clone());
        prop_assert_eq!(g.edge_count(), want.len());
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let back = Graph::load_edge_list(&buf[..], &EdgeListOptions::default()).unwrap();
        prop_assert_eq!(external_edges(&back), want);
        prop_assert_eq!(back.degree_sum(), 2 * g.edge_count() as u64);
    }

    #[test]
    fn classification_is_permutation_invariant(k in 3usize..=5, bits in any::<u32>(), perm_seed in any::<u64>()) {
        let bits = bits & ((1u32 << mask::pair_count(k)) - 1);
        let perms = mask::permutations(k);
        let perm = &perms[(perm_seed % perms.len() as u64) as usize];
        let cat = MotifCatalog::shared();
        prop_assert_eq!(cat.classify(bits, k), cat.classify(mask::permute(bits, perm, k), k));
        prop_assert_eq!(cat.classify(bits, k).is_some(), mask::is_connected(bits, k));
    }

    #[test]
    fn largest_component_is_a_fixed_point(edges in edges_strategy()) {
        prop_assume!(!normalized(&edges).is_empty());
        let g = Graph::from_labeled_edges(edges).unwrap();
        let lcc = g.largest_connected_component();
        prop_assert!(lcc.is_connected());
        prop_assert_eq!(lcc.largest_connected_component(), lcc.clone());
        let (labels, count) = g.components();
        let mut sizes = vec![0usize; count];
        for c in labels {
            sizes[c as usize] += 1;
        }
        prop_assert_eq!(lcc.node_count(), *sizes.iter().max().unwrap());
    }

    #[test]
    fn merge_is_componentwise_addition(
        a in prop::collection::vec(0.0f64..1e6, 6),
        b in prop::collection::vec(0.0f64..1e6, 6),
        ta in 0u64..1000,
        tb in 0u64..1000,
    ) {
        let mut x = EstimateAccumulator::new(4, 6);
        x.c = a.clone();
        x.t = ta;
        let mut y = EstimateAccumulator::new(4, 6);
        y.c = b.clone();
        y.t = tb;
        let mut merged = x.clone();
        merged.merge(&y);
        prop_assert_eq!(merged.t, ta + tb);
        prop_assert_eq!(merged.runs_merged, 2);
        for i in 0..6 {
            prop_assert_eq!(merged.c[i], a[i] + b[i]);
        }
        if let (Ok(cm), Ok(cx), Ok(cy)) = (merged.concentrations(), x.concentrations(), y.concentrations()) {
            // the merged concentration lies between the two parts
            for i in 0..6 {
                prop_assert!(cm[i] >= cx[i].min(cy[i]) - 1e-12 && cm[i] <= cx[i].max(cy[i]) + 1e-12);
            }
        }
    }

    #[test]
    fn bound_scales_with_delta_and_alpha(delta in 0.01f64..0.9, alpha in 0.001f64..0.5) {
        let base = BoundInputs {
            mixing_time: 50.0,
            degree_sum: 1e6,
            top_degree_product: 1e9,
            motif_count: 1e7,
            delta,
            alpha,
            c_const: 1.0,
            xi: 72.0,
        };
        let b = required_steps(&base).unwrap();
        let half = required_steps(&BoundInputs { delta: delta / 2.0, ..base }).unwrap();
        prop_assert!((half.t_min / b.t_min - 4.0).abs() < 1e-9);
        let sq = required_steps(&BoundInputs { alpha: alpha * alpha, ..base }).unwrap();
        prop_assert!((sq.t_min / b.t_min - 2.0).abs() < 1e-9);
        prop_assert!(b.lower_factor < 1.0 && b.upper_factor > 1.0);
    }
}
