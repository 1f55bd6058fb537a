//! Small named instances used across tests and documentation.

use crate::graph::Digraph;
use crate::{rat, Rational};

/// Directed 3-cycle `0 -> 1 -> 2 -> 0` with unit weights.
pub fn c3() -> Digraph {
    Digraph::from_arcs(
        3,
        vec![
            (0, 1, rat(1, 1)),
            (1, 2, rat(1, 1)),
            (2, 0, rat(1, 1)),
        ],
    )
    .expect("valid fixture")
}

/// Transitive triangle `0 -> 1, 0 -> 2, 1 -> 2` with unit weights.
pub fn tt3() -> Digraph {
    Digraph::from_arcs(
        3,
        vec![
            (0, 1, rat(1, 1)),
            (0, 2, rat(1, 1)),
            (1, 2, rat(1, 1)),
        ],
    )
    .expect("valid fixture")
}

/// Five-vertex weighted DAG whose vertex 0 has first neighborhood weight 9,
/// second neighborhood weight 8 (terms 1, 2, 5 on targets 1, 2, 4), and
/// hence neighborhood weight difference -1.
pub fn weighted_dag5() -> Digraph {
    Digraph::from_arcs(
        5,
        vec![
            (0, 1, rat(3, 1)),
            (0, 3, rat(6, 1)),
            (3, 1, rat(4, 1)),
            (1, 2, rat(2, 1)),
            (1, 4, rat(5, 1)),
            (3, 4, rat(1, 1)),
        ],
    )
    .expect("valid fixture")
}

/// Rotational (circulant) tournament on odd `n`: arcs `i -> i + k (mod n)`
/// for `k = 1..=(n-1)/2`, unit weights. Every vertex has equal first and
/// second out-neighborhood sizes.
pub fn rotational(n: usize) -> Digraph {
    assert!(n % 2 == 1, "rotational tournaments need odd n");
    let mut arcs: Vec<(usize, usize, Rational)> = Vec::new();
    for i in 0..n {
        for k in 1..=(n - 1) / 2 {
            arcs.push((i, (i + k) % n, rat(1, 1)));
        }
    }
    Digraph::from_arcs(n, arcs).expect("valid fixture")
}
