use cospec_core::families::build_family;
use cospec_core::fixtures::{example, ENTROPY_PAIRS, WALK_PAIRS};
use cospec_core::io::{graph_from_json, graph_to_json, partition_from_json, partition_to_json};
use cospec_core::walk::{
    batch_verdicts, fermion_hop_operator, fermionic_quotient, stratum_probabilities, Phi7Convention, TimeGrid,
    WalkConfig, WalkSubject, DEFAULT_NNZ_CAP,
};
use cospec_core::{Execution, Family, Graph, VertexPartition};
use proptest::prelude::*;

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

#[test]
fn fermion_operator_identical_across_modes() {
    let g = build_family(Family::G5, 2, 4).unwrap().graph;
    let [s, p] = MODES.map(|e| fermion_hop_operator(&g, 2, DEFAULT_NNZ_CAP, e).unwrap().op);
    assert_eq!(s.nnz(), p.nnz());
    for i in 0..s.dim() {
        assert_eq!(s.row(i), p.row(i));
    }
    let inst = build_family(Family::T4, 1, 3).unwrap();
    let [qs, qp] = MODES.map(|e| fermionic_quotient(&inst, Phi7Convention::default(), DEFAULT_NNZ_CAP, e).unwrap());
    assert_eq!(qs.matrix, qp.matrix);
}

#[test]
fn traces_identical_across_modes() {
    let fx = example("H1").unwrap();
    let grid = TimeGrid::new(0.0, 3.0, 0.25).unwrap();
    let [s, p] =
        MODES.map(|e| stratum_probabilities(&fx.graph, fx.origin, Some(&fx.canonical_strata), &grid, e).unwrap());
    assert_eq!(s, p);
}

#[test]
fn batch_identical_across_modes() {
    let pairs: Vec<_> = WALK_PAIRS
        .into_iter()
        .chain(ENTROPY_PAIRS)
        .map(|(l, r)| {
            let side = |n| {
                let fx = example(n).unwrap();
                WalkSubject::new(fx.graph, fx.origin).with_partition(fx.canonical_strata)
            };
            (side(l), side(r))
        })
        .collect();
    let [s, p] = MODES.map(|exec| {
        batch_verdicts(
            &pairs,
            &WalkConfig {
                exec,
                ..Default::default()
            },
        )
    });
    assert_eq!(s, p);
    let distinguished: Vec<bool> = s.iter().map(|v| v.as_ref().unwrap().is_distinguished()).collect();
    assert_eq!(distinguished, [true, true, true, false, false, false]);
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..12).prop_flat_map(|n| {
        proptest::collection::btree_set((0..n, 0..n), 0..30)
            .prop_map(move |pairs| Graph::from_edge_list(n, pairs.into_iter().filter(|(u, v)| u != v)).unwrap())
    })
}

proptest! {
    #[test]
    fn graph_json_round_trip(g in arb_graph(), base in 0usize..2) {
        let back = graph_from_json(&graph_to_json(&g, base)).unwrap();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        prop_assert_eq!(back.n(), g.n());
    }

    #[test]
    fn partition_json_round_trip(n in 1usize..20, cuts in proptest::collection::vec(any::<bool>(), 19), base in 0usize..2) {
        let mut blocks = vec![vec![0]];
        for v in 1..n {
            if cuts[v - 1] {
                blocks.push(vec![v]);
            } else {
                blocks.last_mut().unwrap().push(v);
            }
        }
        let p = VertexPartition::new(blocks, n).unwrap();
        prop_assert_eq!(partition_from_json(&partition_to_json(&p, base), n, base).unwrap(), p);
    }
}
