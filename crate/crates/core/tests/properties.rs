use proptest::prelude::*;

use fraccolor::analysis::{color_class, is_independent, sample_independent_set};
use fraccolor::engine::{Engine, RunOptions};
use fraccolor::generators::{
    gen_linear_girth4_hypergraph, gen_locally_r_colorable, gen_triangle_free_degenerate, GenSpec,
};
use fraccolor::graph_engine::{GraphEngine, GraphParams};
use fraccolor::hyper_engine::{HyperEngine, HyperParams};
use fraccolor::instances::io::{parse_instance, write_graph, write_hypergraph, Instance};
use fraccolor::instances::{
    check_linear, check_triangle_free, check_triangle_free_general, degeneracy_ordering,
    find_local_coloring, EdgeSet, Graph, Hypergraph,
};

/// Max over vertex subsets of the min degree inside the subset.
fn brute_degeneracy<E: EdgeSet>(h: &E) -> usize {
    let n = h.vertex_count();
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let inside = |v: usize| mask >> v & 1 == 1;
        let mut deg = vec![0usize; n];
        for idx in 0..h.edge_count() {
            let e = h.edge(idx);
            if e.iter().all(|&v| inside(v)) {
                for &v in e {
                    deg[v] += 1;
                }
            }
        }
        let min = (0..n).filter(|&v| inside(v)).map(|v| deg[v]).min().unwrap();
        best = best.max(min);
    }
    best
}

/// Three distinct edges and vertices `u ∈ e∩f`, `v ∈ f∩g`, `w ∈ e∩g`, none
/// of them in `e∩f∩g`.
fn naive_triangle(edges: &[Vec<usize>]) -> bool {
    let m = edges.len();
    let has = |e: &Vec<usize>, x: usize| e.contains(&x);
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if a == b || b == c || a == c {
                    continue;
                }
                let (e, f, g) = (&edges[a], &edges[b], &edges[c]);
                let all = |x: usize| has(e, x) && has(f, x) && has(g, x);
                let us: Vec<_> = e
                    .iter()
                    .copied()
                    .filter(|&u| has(f, u) && !all(u))
                    .collect();
                let vs: Vec<_> = f
                    .iter()
                    .copied()
                    .filter(|&v| has(g, v) && !all(v))
                    .collect();
                let ws: Vec<_> = e
                    .iter()
                    .copied()
                    .filter(|&w| has(g, w) && !all(w))
                    .collect();
                if !us.is_empty() && !vs.is_empty() && !ws.is_empty() {
                    return true;
                }
            }
        }
    }
    false
}

fn naive_linear(edges: &[Vec<usize>]) -> bool {
    edges.iter().enumerate().all(|(i, e)| {
        edges[i + 1..]
            .iter()
            .all(|f| e.iter().filter(|x| f.contains(x)).count() <= 1)
    })
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=n * 2).prop_map(move |pairs| {
            let edges: Vec<_> = pairs.into_iter().filter(|(a, b)| a != b).collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn hyper_strategy(max_n: usize, r: usize, max_m: usize) -> impl Strategy<Value = Hypergraph> {
    (r..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(
            prop::sample::subsequence((0..n).collect::<Vec<_>>(), r),
            0..=max_m,
        )
        .prop_map(move |edges| Hypergraph::new(n, r, &edges).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph_degeneracy_matches_brute_force(g in graph_strategy(8)) {
        let ord = degeneracy_ordering(&g);
        prop_assert_eq!(ord.d, brute_degeneracy(&g));
        for v in 0..g.n() {
            prop_assert!(ord.left_degree(v) <= ord.d);
        }
    }

    #[test]
    fn hyper_degeneracy_matches_brute_force(h in hyper_strategy(8, 3, 10)) {
        prop_assert_eq!(degeneracy_ordering(&h).d, brute_degeneracy(&h));
    }

    #[test]
    fn validators_match_definitions(h in hyper_strategy(7, 3, 12)) {
        let edges = h.edges().to_vec();
        prop_assert_eq!(check_linear(&h).ok, naive_linear(&edges));
        let tri = naive_triangle(&edges);
        prop_assert_eq!(check_triangle_free(&h).ok, !tri);
        prop_assert_eq!(check_triangle_free_general(&h).ok, !tri);
    }

    #[test]
    fn validators_match_definitions_r2(h in hyper_strategy(7, 2, 12)) {
        let edges = h.edges().to_vec();
        prop_assert_eq!(check_triangle_free(&h).ok, !naive_triangle(&edges));
    }

    #[test]
    fn triangle_free_generator(n in 1usize..120, d in 1usize..8, seed: u64) {
        let spec = GenSpec::new(n, d, 1, seed);
        let (g, _) = gen_triangle_free_degenerate(&spec).unwrap();
        prop_assert!(g.find_triangle().is_none());
        prop_assert!(degeneracy_ordering(&g).d <= d);
        prop_assert_eq!(&g, &gen_triangle_free_degenerate(&spec).unwrap().0);
    }

    #[test]
    fn locally_colorable_generator(n in 1usize..90, d in 1usize..5, r in 1usize..4, seed: u64) {
        let spec = GenSpec::new(n, d, r, seed);
        let (g, local, _) = gen_locally_r_colorable(&spec).unwrap();
        prop_assert!(g.n() >= n);
        prop_assert!(local.verify(&g).is_ok());
        prop_assert!(find_local_coloring(&g, r, 1 << 22).is_ok());
        prop_assert!(degeneracy_ordering(&g).d < r * (d + 1));
    }

    #[test]
    fn girth4_generator(n in 2usize..120, d in 1usize..7, r in 2usize..5, seed: u64) {
        let spec = GenSpec::new(n.max(r), d, r, seed);
        let (h, _) = gen_linear_girth4_hypergraph(&spec).unwrap();
        prop_assert!(check_linear(&h).ok);
        prop_assert!(check_triangle_free(&h).ok);
        prop_assert!(degeneracy_ordering(&h).d <= d);
        let text = write_hypergraph(&h);
        prop_assert_eq!(text.clone(), write_hypergraph(&gen_linear_girth4_hypergraph(&spec).unwrap().0));
        match parse_instance(&text).unwrap() {
            Instance::Hyper(back) => prop_assert_eq!(back, h),
            Instance::Graph(_) => prop_assert!(false, "parsed as a graph"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_runs_are_valid_and_reproducible(
        n in 2usize..60, d in 1usize..5, r in 1usize..3, gseed: u64, seed: u64,
    ) {
        let (g, local, _) = gen_locally_r_colorable(&GenSpec::new(n, d, r, gseed)).unwrap();
        let ord = degeneracy_ordering(&g);
        let params = GraphParams::new(300, 1.0, r, ord.d.max(2), seed).unwrap();
        let engine = GraphEngine::new(&g, &ord, &local, params)
            .unwrap()
            .with_options(RunOptions::checked());
        let out = engine.run(seed).unwrap();
        let sets = out.color_sets(engine.initial_weight());
        prop_assert!(sets.violations(&g).is_empty());
        prop_assert_eq!(out.stats.invariant_violations, 0);
        // one class draw per activated (step, color) whatever the neighbor count
        prop_assert!(out.stats.class_draws <= (g.n() * 300) as u64);
        prop_assert_eq!(out.sets(), engine.run(seed).unwrap().sets());
        for ell in 0..300 {
            prop_assert!(is_independent(&g, &color_class(&sets, ell)));
        }
        let (ell, members) = sample_independent_set(&sets, seed);
        prop_assert_eq!(members, color_class(&sets, ell));
        // text round trip
        match parse_instance(&write_graph(&g)).unwrap() {
            Instance::Graph(back) => prop_assert_eq!(back, g),
            Instance::Hyper(_) => prop_assert!(false, "parsed as a hypergraph"),
        }
    }

    #[test]
    fn hyper_runs_are_valid_and_order_independent(
        n in 3usize..80, d in 1usize..5, r in 2usize..5, gseed: u64, seed: u64,
    ) {
        let (h, _) = gen_linear_girth4_hypergraph(&GenSpec::new(n.max(r), d, r, gseed)).unwrap();
        let ord = degeneracy_ordering(&h);
        let d_use = fraccolor::hyper_engine::exclusive_degeneracy(ord.d, r, 1.0);
        let params = HyperParams::new(300, 1.0, r, d_use, seed).unwrap();
        let forward = HyperEngine::new(&h, &ord, params.clone())
            .unwrap()
            .with_options(RunOptions::checked());
        let reverse = HyperEngine::new(&h, &ord, params)
            .unwrap()
            .with_options(RunOptions { reverse_edge_order: true, ..RunOptions::checked() });
        let a = forward.run(seed).unwrap();
        let b = reverse.run(seed).unwrap();
        prop_assert!(a.color_sets(0.0).violations(&h).is_empty());
        prop_assert_eq!(a.stats.invariant_violations, 0);
        prop_assert_eq!(&a.state, &b.state);
        if r == 2 {
            prop_assert_eq!(a.stats.lower_case, 0);
        }
    }
}
