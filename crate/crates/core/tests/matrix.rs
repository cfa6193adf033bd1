mod common;

use common::wide as wide_oracle;
use proptest::prelude::*;
use stw_core::generators::{gen_abh, gen_hk, random_gnp, DEFAULT_EDGE_BUDGET};
use stw_core::matrix::{
    adjacency_matrix, approx_bound, approx_stw, distinct_rows_outside_band, greedy_diagonal_sequence, is_diagonal,
    is_part_wide, matrix_partition_stretch, sequence_from_divisions, verify_matrix_sequence, ApproxOutcome,
    DivisionSequence, GreedyOutcome, MatrixError, SymBitMatrix, SymDivision,
};
use stw_core::{build_ordered_graph, VertexPartition};

fn zero(n: usize) -> SymBitMatrix {
    SymBitMatrix::from_rows(&vec![vec![false; n]; n]).unwrap()
}

fn from_ones(n: usize, ones: &[(usize, usize)]) -> SymBitMatrix {
    let mut rows = vec![vec![false; n]; n];
    for &(i, j) in ones {
        rows[i][j] = true;
        rows[j][i] = true;
    }
    SymBitMatrix::from_rows(&rows).unwrap()
}

/// 14 x 14 with blocks of sizes 2, 3, 3, 4, 2. Outside the three middle blocks, the
/// columns of block 2 read (0,1,0,1), (1,0,0,0), (0,1,0,1) on rows 0, 1, 12, 13.
fn wide_example() -> (SymBitMatrix, SymDivision) {
    let m = from_ones(14, &[(5, 1), (5, 13), (6, 0), (7, 1), (7, 13)]);
    (m, SymDivision::new(vec![0, 2, 5, 8, 12, 14]).unwrap())
}

#[test]
fn adjacency_examples() {
    let k2 = build_ordered_graph(2, &[(0, 1)]).unwrap();
    assert_eq!(adjacency_matrix(&k2).to_rows(), vec![vec![false, true], vec![true, false]]);
    let p3 = build_ordered_graph(3, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(adjacency_matrix(&p3), from_ones(3, &[(0, 1), (1, 2)]));
    assert_eq!(adjacency_matrix(&build_ordered_graph(4, &[]).unwrap()), zero(4));
    assert!(matches!(SymBitMatrix::from_rows(&[vec![false, true], vec![false, false]]), Err(MatrixError::NotSymmetric(0, 1))));
}

#[test]
fn wideness_examples() {
    let (m, d) = wide_example();
    assert!(!is_part_wide(&m, &d, 2, 3));
    assert!(is_part_wide(&m, &d, 2, 2));
    assert!(!wide_oracle(&m, &d, 2, 3) && wide_oracle(&m, &d, 2, 2));

    let g = random_gnp(9, 0.5, 3).unwrap();
    let a = adjacency_matrix(&g);
    let finest = SymDivision::finest(9);
    assert!((0..9).all(|i| !is_part_wide(&a, &finest, i, 2)));

    let z = zero(8);
    let d = SymDivision::new(vec![0, 3, 5, 8]).unwrap();
    assert!((0..3).all(|i| !is_part_wide(&z, &d, i, 2)));
}

#[test]
fn distinct_row_examples() {
    let z = zero(4);
    assert_eq!(distinct_rows_outside_band(&z, &SymDivision::finest(4), 1, 1), 1);
    assert_eq!(distinct_rows_outside_band(&z, &SymDivision::coarsest(4), 0, 1), 0);

    let id = SymBitMatrix::from_rows(&(0..4).map(|i| (0..4).map(|j| i == j).collect()).collect::<Vec<_>>()).unwrap();
    for i in 0..4 {
        assert_eq!(distinct_rows_outside_band(&id, &SymDivision::finest(4), i, 1), 1);
    }

    // P_4 rows 0 and 1 on columns 2, 3 read (0,0) and (1,0).
    let p4 = adjacency_matrix(&build_ordered_graph(4, &[(0, 1), (1, 2), (2, 3)]).unwrap());
    assert_eq!(distinct_rows_outside_band(&p4, &SymDivision::new(vec![0, 2, 4]).unwrap(), 0, 1), 2);
}

#[test]
fn greedy_examples() {
    match greedy_diagonal_sequence(&zero(6), 2) {
        GreedyOutcome::Chain(c) => assert_eq!(c.chain.len(), 6),
        other => panic!("{other:?}"),
    }
    let a = adjacency_matrix(&gen_abh(3, 2, DEFAULT_EDGE_BUDGET).unwrap().graph);
    let q = 2 * (9 * 9 + 1);
    let GreedyOutcome::Chain(chain) = greedy_diagonal_sequence(&a, q) else { panic!("stuck") };
    chain.validate(9).unwrap();
    for d in &chain.chain {
        assert!((0..d.len()).all(|i| !wide_oracle(&a, d, i, q)));
    }
}

#[test]
fn sequences_from_chains() {
    let z = zero(5);
    let chain = DivisionSequence {
        chain: vec![
            SymDivision::finest(5),
            SymDivision::new(vec![0, 2, 3, 4, 5]).unwrap(),
            SymDivision::new(vec![0, 2, 4, 5]).unwrap(),
            SymDivision::new(vec![0, 4, 5]).unwrap(),
            SymDivision::coarsest(5),
        ],
    };
    let seq = sequence_from_divisions(&z, &chain, 2).unwrap();
    assert_eq!(verify_matrix_sequence(&z, &seq).unwrap().max_stretch, 0);

    for (m, q) in [
        (adjacency_matrix(&gen_abh(3, 2, DEFAULT_EDGE_BUDGET).unwrap().graph), 20),
        (adjacency_matrix(&gen_hk(4).unwrap().graph), 20),
        (adjacency_matrix(&random_gnp(30, 0.2, 5).unwrap()), 12),
    ] {
        let GreedyOutcome::Chain(chain) = greedy_diagonal_sequence(&m, q) else { continue };
        let seq = sequence_from_divisions(&m, &chain, q).unwrap();
        assert!(verify_matrix_sequence(&m, &seq).unwrap().max_stretch <= 4 * q * q * q);
    }

    let bad = DivisionSequence { chain: vec![SymDivision::finest(5), SymDivision::coarsest(5)] };
    assert!(matches!(sequence_from_divisions(&z, &bad, 2), Err(MatrixError::InvalidChain(1))));
}

#[test]
fn matrix_stretch_examples() {
    assert_eq!(matrix_partition_stretch(&zero(5), &VertexPartition::finest(5)).max, 0);
    let g = random_gnp(6, 0.5, 11).unwrap();
    assert_eq!(matrix_partition_stretch(&adjacency_matrix(&g), &VertexPartition::finest(6)).max, 0);
    let p = VertexPartition::from_blocks(3, vec![vec![0, 2], vec![1]]).unwrap();
    assert_eq!(matrix_partition_stretch(&zero(3), &p).max, 1);
}

#[test]
fn approx_examples() {
    match approx_stw(&zero(7), 1).unwrap() {
        ApproxOutcome::Success { verified_stretch, .. } => assert_eq!(verified_stretch, 0),
        other => panic!("{other:?}"),
    }
    assert!(matches!(approx_stw(&zero(3), 0), Err(MatrixError::ZeroK)));
    assert_eq!(approx_bound(9), 32 * 82u128.pow(3));

    let a = adjacency_matrix(&gen_abh(3, 3, DEFAULT_EDGE_BUDGET).unwrap().graph);
    match approx_stw(&a, 9).unwrap() {
        ApproxOutcome::Success { sequence, verified_stretch, bound, .. } => {
            assert_eq!(verify_matrix_sequence(&a, &sequence).unwrap().max_stretch, verified_stretch);
            assert!(verified_stretch as u128 <= bound);
        }
        ApproxOutcome::Refusal { witness, wide_k, .. } => {
            assert!((0..witness.len()).all(|i| wide_oracle(&a, &witness, i, wide_k)));
        }
    }
}

#[test]
fn refusals_carry_wide_witnesses() {
    let mut refusals = 0;
    for seed in 1..3 {
        let m = adjacency_matrix(&random_gnp(600, 0.5, seed).unwrap());
        if let ApproxOutcome::Refusal { witness, wide_k, witness_checked, .. } = approx_stw(&m, 1).unwrap() {
            refusals += 1;
            assert_eq!(wide_k, 9);
            assert!(witness_checked);
            assert!((0..witness.len()).all(|i| wide_oracle(&m, &witness, i, wide_k)));
        }
    }
    assert!(refusals > 0, "dense random graphs should exhaust the greedy at k = 1");
}

fn arb_matrix(max_n: usize) -> impl Strategy<Value = SymBitMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut rows = vec![vec![false; n]; n];
            for i in 0..n {
                for j in i..n {
                    rows[i][j] = bits[i * n + j];
                    rows[j][i] = bits[i * n + j];
                }
            }
            SymBitMatrix::from_rows(&rows).unwrap()
        })
    })
}

fn arb_division(n: usize) -> impl Strategy<Value = SymDivision> {
    proptest::collection::vec(any::<bool>(), n.saturating_sub(1)).prop_map(move |cuts| {
        let mut b = vec![0];
        b.extend((1..n).filter(|&c| cuts[c - 1]));
        b.push(n);
        SymDivision::new(b).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn wideness_matches_definition((m, d, k) in arb_matrix(10).prop_flat_map(|m| {
        let n = m.n();
        (Just(m), arb_division(n), 1usize..5)
    })) {
        for i in 0..d.len() {
            prop_assert_eq!(is_part_wide(&m, &d, i, k), wide_oracle(&m, &d, i, k), "block {}", i);
        }
        prop_assert_eq!(is_diagonal(&m, &d, k), (0..d.len()).all(|i| !wide_oracle(&m, &d, i, k)));
    }

    #[test]
    fn greedy_chains_stay_diagonal((m, q) in (arb_matrix(12), 2usize..5)) {
        match greedy_diagonal_sequence(&m, q) {
            GreedyOutcome::Chain(chain) => {
                chain.validate(m.n()).unwrap();
                for d in &chain.chain {
                    prop_assert!((0..d.len()).all(|i| !wide_oracle(&m, d, i, q)));
                }
                let seq = sequence_from_divisions(&m, &chain, q).unwrap();
                prop_assert!(verify_matrix_sequence(&m, &seq).unwrap().max_stretch <= 4 * q * q * q);
            }
            GreedyOutcome::Stuck { reached, witness } => {
                prop_assert!(is_diagonal(&m, &reached, q));
                for i in 0..reached.len() - 1 {
                    prop_assert!(wide_oracle(&m, &reached.merge(i), i, q));
                }
                prop_assert_eq!(witness, reached.pairwise_merged());
            }
        }
    }
}
