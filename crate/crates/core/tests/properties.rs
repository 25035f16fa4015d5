use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdual_core::catalog::{complete, cycle, generate_all_graphs, path, petersen, GraphFilter};
use sdual_core::colorings::{
    centered_from_td, find_low_td_coloring, product_centered, verify_low_td, verify_p_centered,
    Coloring,
};
use sdual_core::graph::{quotient, radius_center, BallFamily};
use sdual_core::hom::{
    check_homomorphism, core, find_homomorphism, hom_equivalent, is_isomorphic, SearchLimits,
};
use sdual_core::powers::{chromatic_number, exact_distance_graph, exact_power};
use sdual_core::sparsity::{grad_r, tree_depth, verify_td};
use sdual_core::{disjoint_union, Graph, Rational, VertexSet};

fn graphs_up_to(n: usize) -> Vec<Graph> {
    generate_all_graphs(n, &GraphFilter::default()).unwrap()
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

#[test]
fn composition_of_found_homomorphisms_is_a_homomorphism() {
    let gs: Vec<Graph> = graphs_up_to(4).into_iter().filter(|g| g.n() > 0).collect();
    let targets = [complete(2), complete(3), cycle(5), petersen()];
    for g in &gs {
        for h in &targets {
            let Some(f) = find_homomorphism(g, h).map() else {
                continue;
            };
            for k in &targets {
                if let Some(f2) = find_homomorphism(h, k).map() {
                    let comp = f.then(&f2).unwrap();
                    assert!(check_homomorphism(g, k, &comp));
                }
            }
        }
    }
}

#[test]
fn odd_cycle_order() {
    for k in 1..=4usize {
        for l in 1..=4usize {
            let found = find_homomorphism(&cycle(2 * k + 1), &cycle(2 * l + 1)).is_found();
            assert_eq!(found, l <= k, "C{} -> C{}", 2 * k + 1, 2 * l + 1);
        }
    }
}

#[test]
fn cores_are_idempotent_and_equivalent() {
    for g in graphs_up_to(7).iter().filter(|g| g.n() > 0) {
        let c = core(g).unwrap().graph;
        let cc = core(&c).unwrap().graph;
        assert!(is_isomorphic(&c, &cc).unwrap());
        assert_eq!(hom_equivalent(g, &c, SearchLimits::unbounded()), Some(true));
    }
}

#[test]
fn singleton_quotients_match_induced_subgraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let g = random_graph(&mut rng, n, 0.4);
        let s = VertexSet::from_vertices(n, (0..n).filter(|_| rng.gen_bool(0.6))).unwrap();
        let q = quotient(&g, &BallFamily::singletons(&s)).unwrap();
        let (ind, _) = g.induced_subgraph(&s).unwrap();
        assert!(is_isomorphic(&q, &ind).unwrap());
    }
}

#[test]
fn components_partition_the_vertex_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.gen_range(0..=12);
        let g = random_graph(&mut rng, n, 0.15);
        let comps = g.connected_components();
        let mut seen = VertexSet::empty(n);
        for c in &comps {
            assert!(seen.is_disjoint(c));
            seen.union_with(c);
            let (sub, _) = g.induced_subgraph(c).unwrap();
            assert!(sub.is_connected());
        }
        assert_eq!(seen.len(), n);
        for (i, a) in comps.iter().enumerate() {
            for b in &comps[i + 1..] {
                assert!(a.iter().all(|x| b.iter().all(|y| !g.has_edge(x, y))));
            }
        }
    }
}

#[test]
fn tree_depth_of_disconnected_graphs_is_max_over_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let parts: Vec<Graph> = (0..rng.gen_range(2..=3))
            .map(|_| {
                let n = rng.gen_range(1..=4);
                random_graph(&mut rng, n, 0.6)
            })
            .collect();
        let (g, _) = disjoint_union(&parts);
        let cert = tree_depth(&g);
        assert!(verify_td(&g, &cert));
        let expected = g
            .connected_components()
            .iter()
            .map(|c| tree_depth(&g.induced_subgraph(c).unwrap().0).value)
            .max()
            .unwrap();
        assert_eq!(cert.value, expected);
    }
}

/// `∇_r` straight from the definition: every labeling of vertices by ball
/// index (or none) whose classes are connected with radius at most `r`.
fn brute_grad(g: &Graph, r: usize) -> Rational {
    let n = g.n();
    let mut best = Rational::from_integer(0);
    let mut label = vec![0usize; n];
    loop {
        // label n = uncovered; balls must use labels 0..k contiguously
        let k = label.iter().filter(|&&l| l < n).max().map_or(0, |m| m + 1);
        let balls: Vec<VertexSet> = (0..k)
            .map(|b| VertexSet::from_vertices(n, (0..n).filter(|&v| label[v] == b)).unwrap())
            .collect();
        let valid = balls
            .iter()
            .all(|b| !b.is_empty() && radius_center(g, b).is_ok_and(|(rad, _)| rad <= r));
        if valid && k > 0 {
            let q = quotient(g, &BallFamily::new(balls, r)).unwrap();
            best = best.max(Rational::new(q.edge_count() as i64, k as i64));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            label[i] += 1;
            if label[i] <= n {
                break;
            }
            label[i] = 0;
        }
    }
}

#[test]
fn grad_matches_definition_on_small_graphs() {
    for g in graphs_up_to(5) {
        for r in 0..=2 {
            assert_eq!(
                grad_r(&g, r).value,
                brute_grad(&g, r),
                "{:?} r={r}",
                g.edges()
            );
        }
    }
}

#[test]
fn distance_graph_is_contained_in_exact_power() {
    let check = |g: &Graph| {
        for p in 1..=4 {
            let a = exact_power(g, p).unwrap();
            let b = exact_distance_graph(g, p).unwrap();
            assert!(b.edges().iter().all(|&(x, y)| a.has_edge(x, y)));
        }
        assert_eq!(&exact_power(g, 1).unwrap(), g);
        assert_eq!(&exact_distance_graph(g, 1).unwrap(), g);
    };
    graphs_up_to(7).iter().for_each(check);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..300 {
        let n = rng.gen_range(8..=10);
        let density = rng.gen_range(0.1..0.5);
        check(&random_graph(&mut rng, n, density));
    }
}

fn brute_colorable(g: &Graph, k: usize) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut c = vec![0usize; n];
    loop {
        if g.edges().iter().all(|&(a, b)| c[a] != c[b]) {
            return true;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            c[i] += 1;
            if c[i] < k {
                break;
            }
            c[i] = 0;
        }
    }
}

#[test]
fn chromatic_number_matches_exhaustive_search() {
    for g in graphs_up_to(7) {
        let chi = chromatic_number(&g).value().unwrap();
        assert!(brute_colorable(&g, chi));
        assert!(chi == 0 || !brute_colorable(&g, chi - 1));
    }
}

#[test]
fn level_colorings_are_centered_and_low_td() {
    for g in graphs_up_to(6) {
        let c = centered_from_td(&g, &tree_depth(&g)).unwrap();
        for p in 1..=g.n() {
            assert!(verify_p_centered(&g, &c, p).unwrap().ok);
        }
    }
}

#[test]
fn product_colorings_are_centered_and_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let n = rng.gen_range(1..=8);
        let g = random_graph(&mut rng, n, 0.35);
        let p = rng.gen_range(1..=3);
        let cbar = find_low_td_coloring(&g, p, n).unwrap().coloring.unwrap();
        assert!(verify_low_td(&g, &cbar, p).unwrap().ok);
        let prod = product_centered(&g, &cbar, p).unwrap();
        assert!(verify_p_centered(&g, &prod.coloring, p).unwrap().ok);
        let k = cbar.k() as u128;
        let t = prod.max_levels.max(1) as u128;
        let bound = k * t.pow(prod.subsets as u32);
        assert!(prod.coloring.k() as u128 <= bound);
    }
}

/// Every copy of `P_4` or `K_3` gets at least three colors under a
/// `q`-centered coloring with `q >= 3`.
#[test]
fn centered_colorings_color_small_subgraphs_richly() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut copies = 0;
    for _ in 0..150 {
        let n = rng.gen_range(4..=9);
        let g = random_graph(&mut rng, n, 0.4);
        let base = centered_from_td(&g, &tree_depth(&g)).unwrap();
        let c = Coloring::new(
            (0..n)
                .map(|v| base.color(v) * 2 + rng.gen_range(0..2))
                .collect(),
        );
        let q = rng.gen_range(3..=4);
        if !verify_p_centered(&g, &c, q).unwrap().ok {
            continue;
        }
        let distinct = |vs: &[usize]| {
            let mut cs: Vec<usize> = vs.iter().map(|&v| c.color(v)).collect();
            cs.sort_unstable();
            cs.dedup();
            cs.len()
        };
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let tri =
                        a < b && b < d && g.has_edge(a, b) && g.has_edge(b, d) && g.has_edge(a, d);
                    if tri {
                        copies += 1;
                        assert!(distinct(&[a, b, d]) >= 3);
                    }
                    for e in 0..n {
                        let distinct_vs = [a, b, d, e];
                        let all_distinct =
                            (0..4).all(|i| (i + 1..4).all(|j| distinct_vs[i] != distinct_vs[j]));
                        if all_distinct
                            && a < e
                            && g.has_edge(a, b)
                            && g.has_edge(b, d)
                            && g.has_edge(d, e)
                        {
                            copies += 1;
                            assert!(distinct(&distinct_vs) >= 3);
                        }
                    }
                }
            }
        }
    }
    assert!(copies > 100);
}

#[test]
fn expansion_profile_examples() {
    use sdual_core::sparsity::expansion_profile;
    let p = expansion_profile(&path(6), 2).unwrap();
    assert!(p.is_monotone() && p.exact);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn td_certificates_verify(g in arb_graph(10)) {
        let cert = tree_depth(&g);
        prop_assert!(verify_td(&g, &cert));
        prop_assert!(cert.optimal);
    }

    #[test]
    fn radius_is_below_ball_size(g in arb_graph(8)) {
        for comp in g.connected_components() {
            let (r, c) = radius_center(&g, &comp).unwrap();
            prop_assert!(r < comp.len());
            prop_assert_eq!(r == 0, comp.len() == 1);
            prop_assert!(comp.contains(c));
        }
    }

    #[test]
    fn found_maps_are_homomorphisms(g in arb_graph(7), h in arb_graph(5)) {
        if let Some(f) = find_homomorphism(&g, &h).map() {
            prop_assert!(check_homomorphism(&g, &h, &f));
        }
    }

    #[test]
    fn low_td_search_output_verifies(g in arb_graph(8), p in 1usize..=3) {
        let s = find_low_td_coloring(&g, p, 8).unwrap();
        prop_assert!(s.exhaustive);
        let c = s.coloring.unwrap();
        prop_assert!(verify_low_td(&g, &c, p).unwrap().ok);
    }
}
