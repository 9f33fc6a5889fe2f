use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;

use qgraph::boundary::{BoundaryConditions, GaugePhases};
use qgraph::combinatorial as comb;
use qgraph::graph::{random_graph, rat, MetricGraph};
use qgraph::linalg::{self, c};
use qgraph::scattering;
use qgraph::walks;

fn graph_strategy(max_v: usize, max_i: usize, ne: usize) -> impl Strategy<Value = (MetricGraph, Vec<BigRational>)> {
    (2..=max_v, any::<u64>())
        .prop_flat_map(move |(nv, seed)| (Just(nv), nv - 1..=max_i.max(nv - 1), Just(seed)))
        .prop_flat_map(move |(nv, ni, seed)| {
            let lens = proptest::collection::vec((1i64..20, 1i64..6), ni);
            (Just(random_graph(nv, ni, ne, seed).unwrap()), lens)
        })
        .prop_map(|(g, l)| {
            let a0: Vec<BigRational> = l.into_iter().map(|(p, q)| rat(p, q)).collect();
            (g.concretize(&a0).unwrap(), a0)
        })
}

fn score_for(g: &MetricGraph, raw: &[u32]) -> Vec<u32> {
    (0..g.num_internal()).map(|i| raw.get(i).copied().unwrap_or(0) % 3).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smatrix_is_unitary((g, _) in graph_strategy(4, 5, 2), seed in any::<u64>(), k in 0.1f64..20.0) {
        let bc = BoundaryConditions::haar_local(&g, seed).unwrap();
        let s = scattering::global_smatrix(&g, &bc, c(k, 0.0)).unwrap();
        prop_assert!(s.unitarity_residual() < 1e-10);
    }

    #[test]
    fn trivial_gauge_leaves_s_unchanged((g, _) in graph_strategy(4, 5, 2), seed in any::<u64>(), k in 0.1f64..10.0) {
        let bc = BoundaryConditions::haar_local(&g, seed).unwrap();
        let gauged = bc.apply_gauge(&g, &GaugePhases::random_trivial(&g, seed ^ 1)).unwrap();
        let s = scattering::global_smatrix(&g, &bc, c(k, 0.0)).unwrap().s;
        let t = scattering::global_smatrix(&g, &gauged, c(k, 0.0)).unwrap().s;
        prop_assert!(linalg::norm(&(s - t)) < 1e-11);
    }

    #[test]
    fn both_routes_agree((g, _) in graph_strategy(4, 5, 2), seed in any::<u64>(), k in 0.3f64..10.0) {
        let bc = BoundaryConditions::haar_local(&g, seed).unwrap();
        let s = scattering::global_smatrix(&g, &bc, c(k, 0.0)).unwrap().s;
        let z = scattering::smatrix_via_z(&g, &bc, c(k, 0.0)).unwrap().s;
        prop_assert!(linalg::norm(&(s - z)) < 1e-8);
    }

    #[test]
    fn walk_sets_reverse((g, _) in graph_strategy(4, 4, 2), raw in proptest::collection::vec(0u32..3, 4)) {
        let n = score_for(&g, &raw);
        let fwd = walks::enumerate_walks(&g, 0, 1, &n);
        let back = walks::enumerate_walks(&g, 1, 0, &n);
        prop_assert_eq!(fwd.len(), back.len());
        let back_edges: BTreeSet<Vec<usize>> = back.iter().map(|w| w.edges.clone()).collect();
        for w in &fwd {
            prop_assert_eq!(w.score(&g), n.clone());
            prop_assert!(back_edges.contains(&w.reversed().edges));
        }
    }

    #[test]
    fn euler_criterion_matches_enumeration((g, _) in graph_strategy(4, 4, 2), raw in proptest::collection::vec(0u32..3, 4), e in 0usize..2, ep in 0usize..2) {
        let n = score_for(&g, &raw);
        let exists = walks::walk_exists(&g, g.external()[ep].vertex, g.external()[e].vertex, &n);
        let found = walks::enumerate_walks(&g, ep, e, &n);
        prop_assert_eq!(exists, !found.is_empty());
        // ordered edge sequences never exceed the multinomial count
        prop_assert!(found.len() as u128 <= walks::multinomial(&n));
    }

    #[test]
    fn visit_counts_match_chains((g, _) in graph_strategy(4, 4, 2), raw in proptest::collection::vec(0u32..3, 4)) {
        let n = score_for(&g, &raw);
        for w in walks::enumerate_walks(&g, 1, 0, &n).iter().take(5) {
            for v in 0..g.num_vertices() {
                let seen = w.chain.iter().filter(|&&u| u == v).count() as i64;
                prop_assert_eq!(comb::visit_count(&g, &n, 0, 1, v).unwrap(), rat(seen, 1));
            }
        }
    }

    #[test]
    fn fourier_coefficients_sum_walk_weights((g, _) in graph_strategy(3, 3, 2), seed in any::<u64>(), raw in proptest::collection::vec(0u32..3, 3), k in 0.5f64..5.0) {
        let n = score_for(&g, &raw);
        let bc = BoundaryConditions::haar_local(&g, seed).unwrap();
        let m = walks::fourier_matrix(&g, &bc, &n, c(k, 0.0)).unwrap();
        let sv = bc.unitary(c(k, 0.0)).unwrap();
        let direct: num_complex::Complex64 = walks::enumerate_walks(&g, 1, 0, &n).iter().map(|w| walks::reduced_weight(&g, w, &sv)).sum();
        prop_assert!((m[(0, 1)] - direct).norm() < 1e-10);
    }

    #[test]
    fn tsp_bounds((g, a0) in graph_strategy(4, 5, 2), e in 0usize..2, ep in 0usize..2) {
        let t1 = comb::solve_tsp1(&g, &a0, e, ep).unwrap();
        let opt = t1.length.clone().unwrap();
        prop_assert_eq!(comb::uncapped_tsp_optimum(&g, &a0, e, ep).unwrap(), Some(opt.clone()));
        let h = comb::solve_hpp(&g, e, ep).unwrap();
        let t2 = comb::solve_tsp2(&g, &a0, e, ep).unwrap();
        prop_assert_eq!(h.feasible, t2.feasible);
        if let Some(l2) = &t2.length {
            prop_assert!(l2 >= &opt);
        }
        prop_assert!(comb::solve_tsp3(&g, &a0, e, ep, &opt).unwrap().feasible);
        prop_assert!(!comb::solve_tsp3(&g, &a0, e, ep, &(opt - rat(1, 1000))).unwrap().feasible);
    }

    #[test]
    fn kbp_witness_uses_every_edge_once((g, _) in graph_strategy(5, 6, 2), e in 0usize..2, ep in 0usize..2) {
        let a = comb::solve_kbp(&g, e, ep).unwrap();
        prop_assert_eq!(a.feasible, a.witness.is_some());
        if let Some(w) = a.witness {
            let mut edges = w.edges.clone();
            edges.sort();
            prop_assert_eq!(edges, (0..g.num_internal()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn oracle_member_agrees_with_spectrum(seed in any::<u64>(), nv in 2usize..4) {
        let g = random_graph(nv, nv + 1, 1, seed).unwrap();
        let o = walks::spectrum_oracle(&g, 0).unwrap();
        let listed: BTreeSet<Vec<u32>> = walks::length_spectrum(&g, 0, 0, 5).into_iter().map(|(n, _)| n).collect();
        for n in &listed {
            prop_assert!(o.member(n));
        }
        for raw in 0..3u32.pow(g.num_internal() as u32) {
            let n: Vec<u32> = (0..g.num_internal()).map(|i| raw / 3u32.pow(i as u32) % 3).collect();
            if walks::total(&n) <= 5 {
                prop_assert_eq!(o.member(&n), listed.contains(&n));
            }
        }
    }
}
