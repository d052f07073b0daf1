use proptest::prelude::*;

use confcolor::arbdefective::{arbdefective_coloring, beta_audit_bound, class_count};
use confcolor::io::{load_instance, save_instance, LoadOptions};
use confcolor::lab::{
    encode_edge_coloring, encode_list_coloring, encode_plus_one_coloring, gen_graph, random_lists, GenParams, GraphKind,
};
use confcolor::lca::{lca_query, LcaProblem, Regime};
use confcolor::linial::delta2_coloring_with;
use confcolor::{solve_conflict_coloring, validate_coloring, GraphOracle, PortGraph, SolverConfig};

fn random_graph() -> impl Strategy<Value = PortGraph> {
    (8usize..40, 2usize..7, any::<u64>()).prop_map(|(n, max_degree, seed)| {
        gen_graph(GraphKind::RandomBoundedDegree { n, max_degree }, GenParams::default(), seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_output_is_valid(g in random_graph(), seed in any::<u64>(), kind in 0u8..3) {
        let inst = match kind {
            0 => encode_plus_one_coloring(&g),
            1 => encode_list_coloring(&g, random_lists(&g, 30, seed)),
            _ if g.edge_count() > 0 => encode_edge_coloring(&g).instance,
            _ => encode_plus_one_coloring(&g),
        };
        let (a, m) = solve_conflict_coloring(&inst, &SolverConfig::default()).unwrap();
        prop_assert!(a.is_total());
        prop_assert!(validate_coloring(&inst, &a).valid);
        prop_assert!(m.violations.is_empty());
        prop_assert!(m.simulated_rounds >= m.bootstrap_rounds);
    }

    #[test]
    fn bootstrap_is_proper(n in 3usize..200, range in 200u64..1_000_000, seed in any::<u64>()) {
        let g = gen_graph(GraphKind::Ring { n }, GenParams { id_range: Some(range) }, seed).unwrap();
        let run = delta2_coloring_with(&g, 2, range).unwrap();
        prop_assert!(g.edges().all(|(u, _, v, _)| run.colors[u] != run.colors[v]));
        prop_assert!(run.colors.iter().all(|&c| c < run.palette));
    }

    #[test]
    fn arbdefective_respects_bounds(g in random_graph(), k in 1usize..6) {
        let delta = g.max_degree().max(1);
        let boot = delta2_coloring_with(&g, delta, g.n() as u64).unwrap();
        for k in [k, class_count(delta, 1.0)] {
            let p = arbdefective_coloring(&g, &boot.colors, boot.palette, k, delta);
            prop_assert!(p.class_of.iter().all(|&c| c < k));
            prop_assert_eq!(p.beta, p.measured_beta(&g));
            prop_assert!(p.beta <= p.beta_bound);
            prop_assert!(p.beta <= beta_audit_bound(delta, k, 1.0).max(p.beta_bound));
        }
    }

    #[test]
    fn json_roundtrip(g in random_graph(), seed in any::<u64>()) {
        let inst = encode_list_coloring(&g, random_lists(&g, 25, seed));
        let back = load_instance(&save_instance(&inst), LoadOptions::default()).unwrap();
        prop_assert_eq!(back, inst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Answers depend only on the probed ball, so any query order agrees
    /// with a fresh oracle per query.
    #[test]
    fn lca_answers_are_stateless(n in 8usize..40, seed in any::<u64>()) {
        let g = gen_graph(GraphKind::RandomBoundedDegree { n, max_degree: 3 }, GenParams::default(), seed).unwrap();
        let inst = encode_plus_one_coloring(&g);
        let problem = LcaProblem::for_instance(&inst, Regime::General);
        let shared = GraphOracle::new(&inst);
        for &id in g.ids().iter().rev().take(5) {
            let a = lca_query(&shared, &problem, id).unwrap();
            let b = lca_query(&GraphOracle::new(&inst), &problem, id).unwrap();
            prop_assert_eq!(a.color, b.color);
            prop_assert_eq!(a.ledger.count(), b.ledger.count());
        }
    }
}
