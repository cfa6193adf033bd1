mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use stw_core::build_ordered_graph;
use stw_core::generators::{
    flatten_edge, gen_abh, gen_flattened_grid, gen_grid, gen_hk, gen_hk_bad_order, iterated_subdivision,
    random_bounded_degree, random_cograph, random_gnp, random_sparse, subdivide_simple, subdivision_pipeline,
    GenError, DEFAULT_EDGE_BUDGET, DEFAULT_VERTEX_BUDGET, HORIZONTAL, VERTICAL,
};
use stw_core::matrix::{adjacency_matrix, approx_stw, ApproxOutcome};
use stw_core::overlap::{ktt_upper_check, overlap_graph, BicliqueBudget, KttCheck};
use stw_core::stretch::verify_sequence;
use stw_core::OrderedGraph;

fn edge_set(g: &OrderedGraph) -> BTreeSet<(usize, usize)> {
    g.edges().iter().copied().collect()
}

fn path_edges(vs: &[usize]) -> Vec<(usize, usize)> {
    vs.windows(2).map(|w| (w[0], w[1])).collect()
}

#[test]
fn hk_instances() {
    let h1 = gen_hk(1).unwrap();
    assert_eq!(h1.graph.edges(), &path_edges(&[0, 1, 2, 3, 4])[..]);
    for k in 1..=10 {
        let h = gen_hk(k).unwrap();
        assert_eq!((h.graph.n(), h.graph.m()), (3 * k + 2, 4 * k));
        let report = verify_sequence(&h.graph, h.witness.as_ref().unwrap()).unwrap();
        assert!(report.max_stretch <= h.claimed_stretch.unwrap());
    }
    let h5 = gen_hk(5).unwrap().graph;
    assert_eq!((h5.n(), h5.m()), (17, 20));
    assert!(matches!(gen_hk(0), Err(GenError::BadParameter(_))));

    // The bad order is a relabelling of the same graph.
    let bad = gen_hk_bad_order(5).unwrap();
    let degrees = |g: &OrderedGraph| {
        let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
        d.sort_unstable();
        d
    };
    assert_eq!(degrees(&bad), degrees(&h5));
    assert_eq!(bad.m(), 20);
}

#[test]
fn a3_small_cases() {
    let a = gen_abh(3, 2, DEFAULT_EDGE_BUDGET).unwrap();
    assert_eq!(a.graph.n(), 9);
    let expected: BTreeSet<(usize, usize)> = [(0, 3), (3, 6), (1, 4), (4, 7), (2, 5), (5, 8)].into_iter().collect();
    assert_eq!(edge_set(&a.graph), expected);
    for h in 1..=4 {
        let a = gen_abh(3, h, DEFAULT_EDGE_BUDGET).unwrap();
        let report = verify_sequence(&a.graph, a.witness.as_ref().unwrap()).unwrap();
        assert!(report.max_stretch <= 9, "h={h}: {}", report.max_stretch);
    }
    assert!(matches!(gen_abh(3, 3, 10), Err(GenError::OverBudget { .. })));
}

/// Edges of `A(2,5)` read off the drawing: at each level the groups of `2^l`
/// consecutive vertices are paired as `i -- i+2` and `i+1 -- i+3` for odd `i`.
fn a25_from_drawing() -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for l in 0..4 {
        let size = 1usize << l;
        let groups = 32 / size;
        let group = |g: usize| (g - 1) * size..g * size;
        let mut i = 1;
        while i + 3 <= groups {
            for (a, b) in [(i, i + 2), (i + 1, i + 3)] {
                for x in group(a) {
                    for y in group(b) {
                        out.insert((x, y));
                    }
                }
            }
            i += 2;
        }
    }
    out
}

#[test]
fn a25_matches_drawing() {
    let a = gen_abh(2, 5, DEFAULT_EDGE_BUDGET).unwrap();
    assert_eq!(a.graph.n(), 32);
    let drawn = a25_from_drawing();
    assert_eq!(drawn.len(), 310);
    assert_eq!(edge_set(&a.graph), drawn);
    assert!(a.witness.is_none());
}

#[test]
fn a3_degree_law() {
    for h in 2..=5 {
        let g = gen_abh(3, h, DEFAULT_EDGE_BUDGET).unwrap().graph;
        let top = 3usize.pow(h as u32 - 1);
        for v in 0..g.n() {
            let d = g.degree(v);
            assert!((top - 1) / 2 <= d && d < top, "h={h} v={v} d={d}");
        }
    }
}

#[test]
fn grids() {
    let c4 = gen_grid(2).unwrap();
    assert_eq!(edge_set(&c4), [(0, 1), (0, 2), (1, 3), (2, 3)].into_iter().collect());
    let g3 = gen_grid(3).unwrap();
    assert_eq!((g3.n(), g3.m()), (9, 12));
    let g4 = gen_grid(4).unwrap();
    assert_eq!((g4.n(), g4.m()), (16, 24));
    let mut drawn = BTreeSet::new();
    for r in 0..4 {
        for c in 0..3 {
            drawn.insert((4 * r + c, 4 * r + c + 1));
        }
    }
    for i in 0..12 {
        drawn.insert((i, i + 4));
    }
    assert_eq!(edge_set(&g4), drawn);
    let labels = g4.labels().unwrap();
    for (i, &(a, b)) in g4.edges().iter().enumerate() {
        assert_eq!(labels[i], if b == a + 1 { HORIZONTAL } else { VERTICAL });
    }
}

#[test]
fn flatten_examples() {
    let k2 = build_ordered_graph(2, &[(0, 1)]).unwrap();
    let (p, _) = flatten_edge(&k2, (0, 1)).unwrap();
    assert_eq!(p.edges(), &path_edges(&[0, 1, 2])[..]);

    // u < z < v: the path runs u, w1, w2, v with w1 before z and w2 after it.
    let g = build_ordered_graph(3, &[(0, 2)]).unwrap();
    let (f, pos) = flatten_edge(&g, (0, 2)).unwrap();
    assert_eq!(f.n(), 5);
    assert_eq!(f.edges(), &path_edges(&[0, 1, 3, 4])[..]);
    assert!(1 < pos[1] && pos[1] < 3);
    assert!(matches!(flatten_edge(&g, (0, 1)), Err(GenError::NotAnEdge(0, 1))));
}

#[test]
fn iterated_subdivision_follows_the_drawing() {
    let g = build_ordered_graph(5, &[(0, 2), (0, 4), (1, 3)]).unwrap();

    let (first, _) = flatten_edge(&g, (0, 2)).unwrap();
    let mut panel2 = path_edges(&[0, 1, 3, 4]);
    panel2.extend([(0, 6), (2, 5)]);
    assert_eq!(edge_set(&first), panel2.into_iter().collect());

    let out = iterated_subdivision(&g, &[(0, 2), (1, 3), (0, 4)], DEFAULT_VERTEX_BUDGET).unwrap();
    assert_eq!(out.n(), 19);
    let mut last = path_edges(&[0, 2, 8, 12]);
    last.extend(path_edges(&[0, 1, 3, 5, 7, 9, 11, 13, 15, 17, 18]));
    last.extend(path_edges(&[4, 6, 10, 14, 16]));
    assert_eq!(edge_set(&out), last.into_iter().collect());

    assert!(matches!(iterated_subdivision(&g, &[(0, 2)], DEFAULT_VERTEX_BUDGET), Err(GenError::NotEdgePermutation)));
    assert!(matches!(iterated_subdivision(&g, &[(0, 2), (1, 3), (0, 4)], 10), Err(GenError::OverBudget { .. })));
}

#[test]
fn simple_subdivisions() {
    let k2 = build_ordered_graph(2, &[(0, 1)]).unwrap();
    let s = subdivide_simple(&k2, (0, 1)).unwrap();
    assert_eq!(s.w, 1);
    assert_eq!(s.graph.edges(), &path_edges(&[0, 1, 2])[..]);
    assert_eq!(overlap_graph(&s.graph).crossing_count(), 0);

    let crossings = build_ordered_graph(7, &[(0, 3), (0, 4), (1, 4), (2, 5), (3, 6), (4, 5)]).unwrap();
    let s = subdivide_simple(&crossings, (0, 3)).unwrap();
    assert!(s.overlap_preserving);
    assert_eq!(overlap_graph(&s.graph).crossing_count(), 7);
    assert_eq!(overlap_graph(&s.graph).isolated().len(), 2);
}

#[test]
fn flattened_grids() {
    let budget = BicliqueBudget::default();
    assert_eq!(gen_flattened_grid(1, DEFAULT_VERTEX_BUDGET).unwrap().n(), 1);
    let g2 = gen_flattened_grid(2, DEFAULT_VERTEX_BUDGET).unwrap();
    assert!(matches!(ktt_upper_check(&g2, 3, budget), KttCheck::Certified { .. }));
    let g3 = gen_flattened_grid(3, DEFAULT_VERTEX_BUDGET).unwrap();
    assert!(g3.max_degree() <= 4);
    let g4 = gen_flattened_grid(4, DEFAULT_VERTEX_BUDGET).unwrap();
    assert!(g4.max_degree() <= 4);
    assert!(matches!(ktt_upper_check(&g4, 5, budget), KttCheck::Certified { .. }));
    let sizes: Vec<usize> = [g2.n(), g3.n(), g4.n()].to_vec();
    assert!(sizes.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn random_generators() {
    for seed in 0..10 {
        let g = random_bounded_degree(4, 1, seed).unwrap();
        assert!(g.max_degree() <= 1 && g.m() == 2);
    }
    assert_eq!(random_bounded_degree(10, 3, 42).unwrap(), random_bounded_degree(10, 3, 42).unwrap());
    let g = random_bounded_degree(6, 2, 7).unwrap();
    assert!(g.max_degree() <= 2);
    assert!(random_bounded_degree(5, 0, 1).is_err());

    let s = random_sparse(30, 3, 12, 9).unwrap();
    assert!(s.m() <= 12 && s.max_degree() <= 3);
    assert_eq!(random_gnp(20, 0.3, 4).unwrap(), random_gnp(20, 0.3, 4).unwrap());
    assert_eq!(random_gnp(8, 1.0, 0).unwrap().m(), 28);
    let (a, sa) = random_cograph(15, 2).unwrap();
    let (b, sb) = random_cograph(15, 2).unwrap();
    assert_eq!((a, sa), (b, sb));
}

#[test]
fn pipeline_instances_are_approximable() {
    let mut done = 0;
    for seed in 0..40 {
        let g = random_sparse(4, 2, 3, seed).unwrap();
        if g.m() == 0 {
            continue;
        }
        let d = g.max_degree();
        let p = subdivision_pipeline(&g, DEFAULT_VERTEX_BUDGET).unwrap();
        let target = g.n() << g.m();
        let labels = p.labels().unwrap();
        for stem in 0..g.m() as u32 {
            let pieces = labels.iter().filter(|&&l| l == stem).count();
            assert!(pieces > target, "stem {stem}: {pieces} edges");
        }
        let k = 32 * (4 * d + 5).pow(3);
        match approx_stw(&adjacency_matrix(&p), k).unwrap() {
            ApproxOutcome::Success { verified_stretch, bound, .. } => assert!(verified_stretch as u128 <= bound),
            other => panic!("seed {seed}: {other:?}"),
        }
        done += 1;
        if done == 5 {
            break;
        }
    }
    assert_eq!(done, 5);
}

fn arb_edge_order(g: OrderedGraph) -> impl Strategy<Value = (OrderedGraph, Vec<(usize, usize)>)> {
    let e = g.edges().to_vec();
    (Just(g), Just(e).prop_shuffle())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn flattening_keeps_degrees_and_size((g, order) in common::arb_sparse_graph(7, 8).prop_flat_map(arb_edge_order)) {
        let out = iterated_subdivision(&g, &order, DEFAULT_VERTEX_BUDGET).unwrap();
        prop_assert!(out.max_degree() <= g.max_degree().max(2));
        prop_assert!(out.n() <= g.n() << g.m());
        prop_assert_eq!(out.labels().map_or(0, |l| l.len()), out.m());
    }

    #[test]
    fn simple_subdivision_keeps_crossings(g in common::arb_sparse_graph(8, 10), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.m() > 0);
        let (u, v) = g.edges()[pick.index(g.m())];
        let before = overlap_graph(&g);
        let s = subdivide_simple(&g, (u, v)).unwrap();
        let after = overlap_graph(&s.graph);
        if s.overlap_preserving {
            prop_assert_eq!(after.crossing_count(), before.crossing_count());
            prop_assert_eq!(after.isolated().len(), before.isolated().len() + 1);
        } else {
            prop_assert!(blocked_at_both_ends(&g, (u, v)));
        }
        if !blocked_at_both_ends(&g, (u, v)) {
            prop_assert!(s.overlap_preserving);
        }
    }

    #[test]
    fn flattened_edges_subdivide_cleanly((g, order) in common::arb_sparse_graph(6, 6).prop_flat_map(arb_edge_order)) {
        let f = iterated_subdivision(&g, &order, DEFAULT_VERTEX_BUDGET).unwrap();
        let crossings = overlap_graph(&f).crossing_count();
        for &e in f.edges() {
            let s = subdivide_simple(&f, e).unwrap();
            prop_assert!(s.overlap_preserving);
            prop_assert_eq!(overlap_graph(&s.graph).crossing_count(), crossings);
        }
    }
}

/// Both ends of `uv` carry another edge lying inside `uv`.
fn blocked_at_both_ends(g: &OrderedGraph, (u, v): (usize, usize)) -> bool {
    let inside = |a: usize| g.neighbors(a).iter().any(|&x| u < x && x < v);
    inside(u) && inside(v)
}
