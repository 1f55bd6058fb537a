//! proptest strategies shared by the in-crate test modules.

use proptest::prelude::*;

use crate::graph::{Digraph, VertexWeighting};
use crate::rat;

/// Random loopless, two-cycle-free digraph: up to `max_n` vertices, each
/// unordered pair independently absent or oriented, weights `num/den` with
/// `num in 0..=max_num`, `den in 1..=max_den`.
pub fn arb_digraph(max_n: usize, max_num: i64, max_den: i64) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(
            proptest::option::of((any::<bool>(), 0..=max_num, 1..=max_den)),
            pairs,
        )
        .prop_map(move |slots| digraph_from_slots(n, &slots))
    })
}

/// Like [`arb_digraph`] but with strictly positive integer weights.
pub fn arb_digraph_posint(max_n: usize, max_w: i64) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(
            proptest::option::of((any::<bool>(), 1..=max_w, Just(1i64))),
            pairs,
        )
        .prop_map(move |slots| digraph_from_slots(n, &slots))
    })
}

/// Random unit-weight tournament on up to `max_n` vertices.
pub fn arb_unit_tournament(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |flips| {
            let slots: Vec<Option<(bool, i64, i64)>> =
                flips.into_iter().map(|f| Some((f, 1, 1))).collect();
            digraph_from_slots(n, &slots)
        })
    })
}

/// A digraph together with a nonnegative rational vertex weighting.
pub fn arb_digraph_with_eta(
    max_n: usize,
    max_num: i64,
    max_den: i64,
) -> impl Strategy<Value = (Digraph, VertexWeighting)> {
    arb_digraph(max_n, max_num, max_den).prop_flat_map(move |d| {
        let n = d.n();
        proptest::collection::vec((0..=max_num, 1..=max_den), n).prop_map(move |ws| {
            let eta = VertexWeighting::new(
                ws.iter().map(|&(p, q)| rat(p, q)).collect(),
            )
            .unwrap();
            (d.clone(), eta)
        })
    })
}

fn digraph_from_slots(n: usize, slots: &[Option<(bool, i64, i64)>]) -> Digraph {
    let mut arcs = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            if let Some((flip, num, den)) = &slots[k] {
                let (a, b) = if *flip { (v, u) } else { (u, v) };
                arcs.push((a, b, rat(*num, *den)));
            }
            k += 1;
        }
    }
    Digraph::from_arcs(n, arcs).expect("slot construction is always valid")
}
