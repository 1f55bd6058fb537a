//! Exact median orders and the last-vertex Seymour check.
//!
//! A median order minimizes the backward total — the number (count mode) or
//! total weight (weight mode) of arcs pointing from a later position to an
//! earlier one. Zero-weight arcs cost one in count mode and zero in weight
//! mode. The optimum is found by dynamic programming over vertex subsets
//! (optimal first-vertex extraction), which is exact well beyond brute
//! force; ties are broken toward the lexicographically smallest optimal
//! permutation so runs are reproducible.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::graph::Digraph;
use crate::report::report;
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderMode {
    Count,
    Weight,
}

/// A minimum-backward vertex order together with its exact backward total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianOrder {
    pub order: Vec<usize>,
    pub backward: Rational,
}

/// Default cap on the DP size; `2^n` table entries are allocated.
pub const DEFAULT_ORDER_CAP: usize = 20;

pub fn median_order(d: &Digraph, mode: OrderMode) -> Result<MedianOrder> {
    median_order_capped(d, mode, DEFAULT_ORDER_CAP)
}

pub fn median_order_capped(d: &Digraph, mode: OrderMode, cap: usize) -> Result<MedianOrder> {
    let n = d.n();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let (costs, scale) = integer_costs(d, mode);

    // Integer weights almost always fit machine words; fall back to big
    // integers only when they cannot.
    let (order, best) = match small_costs(&costs) {
        Some(small) => {
            let (order, best) = dp_median(n, &small);
            (order, BigInt::from(best))
        }
        None => dp_median(n, &costs),
    };
    Ok(MedianOrder {
        order,
        backward: Rational::new(best, scale),
    })
}

/// Backward total of an explicit order: the sum over arcs `(u, v)` with `u`
/// placed after `v` of one (count mode) or the arc weight (weight mode).
pub fn backward_weight(d: &Digraph, order: &[usize], mode: OrderMode) -> Result<Rational> {
    let n = d.n();
    if order.len() != n {
        return Err(Error::NotPermutation);
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::NotPermutation);
        }
        pos[v] = i;
    }
    let mut total = Rational::zero();
    for (u, v, w) in d.arcs() {
        if pos[u] > pos[v] {
            total += match mode {
                OrderMode::Count => Rational::one(),
                OrderMode::Weight => w.clone(),
            };
        }
    }
    Ok(total)
}

/// Result of checking whether a median order ends on a Seymour vertex.
/// `first`/`second` are the last vertex's neighborhood measures in the
/// requested mode (set sizes for count, alpha/beta for weight).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LastVertexCheck {
    pub seymour: bool,
    pub order: MedianOrder,
    pub vertex: usize,
    pub first: Rational,
    pub second: Rational,
    pub delta: Rational,
}

/// Computes a median order and classifies its last vertex: unweighted
/// Seymour for count mode, arc-weighted (`delta >= 0`) for weight mode.
pub fn last_vertex_seymour(d: &Digraph, mode: OrderMode) -> Result<LastVertexCheck> {
    last_vertex_seymour_capped(d, mode, DEFAULT_ORDER_CAP)
}

pub fn last_vertex_seymour_capped(
    d: &Digraph,
    mode: OrderMode,
    cap: usize,
) -> Result<LastVertexCheck> {
    let order = median_order_capped(d, mode, cap)?;
    let vertex = *order
        .order
        .last()
        .ok_or_else(|| Error::InvalidGraph("empty digraph has no last vertex".into()))?;
    let (first, second) = match mode {
        OrderMode::Count => {
            let h = d.neighborhoods(vertex)?;
            (
                Rational::from_integer(BigInt::from(h.first_out.len())),
                Rational::from_integer(BigInt::from(h.second_out.len())),
            )
        }
        OrderMode::Weight => {
            let rep = report(d);
            (
                rep.vertices[vertex].alpha.clone(),
                rep.vertices[vertex].beta.clone(),
            )
        }
    };
    let delta = second.clone() - first.clone();
    Ok(LastVertexCheck {
        seymour: !delta.is_negative(),
        order,
        vertex,
        first,
        second,
        delta,
    })
}

/// Arc costs as integers: count mode charges one per arc; weight mode
/// multiplies every weight by the common denominator. Returns the cost
/// matrix and the scale to divide back out.
fn integer_costs(d: &Digraph, mode: OrderMode) -> (Vec<Vec<BigInt>>, BigInt) {
    let n = d.n();
    let mut costs = vec![vec![BigInt::zero(); n]; n];
    match mode {
        OrderMode::Count => {
            for (u, v, _) in d.arcs() {
                costs[u][v] = BigInt::one();
            }
            (costs, BigInt::one())
        }
        OrderMode::Weight => {
            let mut scale = BigInt::one();
            for (_, _, w) in d.arcs() {
                scale = scale.lcm(w.denom());
            }
            for (u, v, w) in d.arcs() {
                costs[u][v] = w.numer() * (&scale / w.denom());
            }
            (costs, scale)
        }
    }
}

fn small_costs(costs: &[Vec<BigInt>]) -> Option<Vec<Vec<u64>>> {
    let mut total: u128 = 0;
    let mut out = Vec::with_capacity(costs.len());
    for row in costs {
        let mut small = Vec::with_capacity(row.len());
        for c in row {
            let c = c.to_u64()?;
            total = total.checked_add(c as u128)?;
            small.push(c);
        }
        out.push(small);
    }
    if total <= u64::MAX as u128 {
        Some(out)
    } else {
        None
    }
}

trait Cost: Clone + Ord + num::Zero + for<'a> std::ops::AddAssign<&'a Self> {}
impl Cost for u64 {}
impl Cost for BigInt {}

/// Subset DP: `h[T]` is the least backward total of arranging `T` as the
/// final |T| positions, counting only arcs inside `T`. Extracting the first
/// vertex `u` of the suffix charges the arcs from `T - u` into `u`. In-costs
/// are answered in O(1) from two half-mask tables. Reconstruction prefers
/// the smallest vertex at every step, which yields the lexicographically
/// smallest optimal permutation.
fn dp_median<C: Cost>(n: usize, costs: &[Vec<C>]) -> (Vec<usize>, C) {
    if n == 0 {
        return (Vec::new(), C::zero());
    }
    let lo = n / 2;
    let lo_mask: usize = (1 << lo) - 1;

    let prefix_table = |u: usize, base: usize, bits: usize| -> Vec<C> {
        let mut tab = Vec::with_capacity(1 << bits);
        tab.push(C::zero());
        for m in 1..(1usize << bits) {
            let b = m.trailing_zeros() as usize;
            let mut val = tab[m & (m - 1)].clone();
            val += &costs[base + b][u];
            tab.push(val);
        }
        tab
    };
    let in_lo: Vec<Vec<C>> = (0..n).map(|u| prefix_table(u, 0, lo)).collect();
    let in_hi: Vec<Vec<C>> = (0..n).map(|u| prefix_table(u, lo, n - lo)).collect();
    let in_cost = |u: usize, set: usize| -> C {
        let mut val = in_lo[u][set & lo_mask].clone();
        val += &in_hi[u][set >> lo];
        val
    };

    let full: usize = (1 << n) - 1;
    let mut h: Vec<C> = Vec::with_capacity(1 << n);
    h.push(C::zero());
    for t in 1..=full {
        let mut best: Option<C> = None;
        let mut s = t;
        while s != 0 {
            let u = s.trailing_zeros() as usize;
            s &= s - 1;
            let rest = t & !(1 << u);
            let mut cand = in_cost(u, rest);
            cand += &h[rest];
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
        h.push(best.expect("nonempty subset"));
    }

    let mut order = Vec::with_capacity(n);
    let mut t = full;
    while t != 0 {
        let mut s = t;
        let mut chosen = None;
        while s != 0 {
            let u = s.trailing_zeros() as usize;
            s &= s - 1;
            let rest = t & !(1 << u);
            let mut cand = in_cost(u, rest);
            cand += &h[rest];
            if cand == h[t] {
                chosen = Some(u);
                break;
            }
        }
        let u = chosen.expect("some vertex must attain the optimum");
        order.push(u);
        t &= !(1 << u);
    }
    (order, h[full].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c3, tt3};
    use crate::rat;
    use proptest::prelude::*;

    fn weighted_c3() -> Digraph {
        Digraph::from_arcs(
            3,
            vec![(0, 1, rat(1, 1)), (1, 2, rat(2, 1)), (2, 0, rat(4, 1))],
        )
        .unwrap()
    }

    #[test]
    fn median_order_fixtures() {
        // Acyclic: the topological order has no backward arcs.
        let m = median_order(&tt3(), OrderMode::Count).unwrap();
        assert_eq!(m.order, vec![0, 1, 2]);
        assert_eq!(m.backward, rat(0, 1));

        // A 3-cycle always has one backward arc; ties break
        // lexicographically.
        let m = median_order(&c3(), OrderMode::Count).unwrap();
        assert_eq!(m.order, vec![0, 1, 2]);
        assert_eq!(m.backward, rat(1, 1));

        // Weight mode places the cheapest arc backward.
        let m = median_order(&weighted_c3(), OrderMode::Weight).unwrap();
        assert_eq!(m.order, vec![1, 2, 0]);
        assert_eq!(m.backward, rat(1, 1));
    }

    #[test]
    fn backward_weight_fixtures() {
        assert_eq!(
            backward_weight(&tt3(), &[0, 1, 2], OrderMode::Count).unwrap(),
            rat(0, 1)
        );
        assert_eq!(
            backward_weight(&tt3(), &[2, 1, 0], OrderMode::Count).unwrap(),
            rat(3, 1)
        );
        assert_eq!(
            backward_weight(&weighted_c3(), &[0, 1, 2], OrderMode::Weight).unwrap(),
            rat(4, 1)
        );
        assert!(matches!(
            backward_weight(&tt3(), &[0, 1], OrderMode::Count),
            Err(Error::NotPermutation)
        ));
        assert!(matches!(
            backward_weight(&tt3(), &[0, 1, 1], OrderMode::Count),
            Err(Error::NotPermutation)
        ));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            median_order_capped(&c3(), OrderMode::Count, 2),
            Err(Error::CapExceeded { n: 3, cap: 2 })
        ));
    }

    #[test]
    fn last_vertex_on_fixtures() {
        let check = last_vertex_seymour(&tt3(), OrderMode::Count).unwrap();
        assert!(check.seymour);
        assert_eq!(check.vertex, 2);
        assert_eq!(check.first, rat(0, 1));

        let check = last_vertex_seymour(&weighted_c3(), OrderMode::Weight).unwrap();
        assert_eq!(check.vertex, 0);
        // alpha_0 = 1, beta_0 = w(1,2) - w(0,2) = 2.
        assert_eq!(check.first, rat(1, 1));
        assert_eq!(check.second, rat(2, 1));
        assert!(check.seymour);
    }

    /// Exhaustive permutation minimum, used as the optimality oracle.
    fn brute_force(d: &Digraph, mode: OrderMode) -> Rational {
        fn perms(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if k == items.len() {
                out.push(items.clone());
                return;
            }
            for i in k..items.len() {
                items.swap(k, i);
                perms(items, k + 1, out);
                items.swap(k, i);
            }
        }
        let mut all = Vec::new();
        perms(&mut (0..d.n()).collect(), 0, &mut all);
        all.into_iter()
            .map(|p| backward_weight(d, &p, mode).unwrap())
            .min()
            .expect("at least one permutation")
    }

    #[test]
    fn big_integer_fallback_matches_fast_path() {
        // Weights straddling u64 force the BigInt DP.
        let huge = Rational::from_integer(BigInt::from(u64::MAX)) * rat(4, 1);
        let d = Digraph::from_arcs(
            3,
            vec![
                (0, 1, huge.clone()),
                (1, 2, huge.clone() * rat(2, 1)),
                (2, 0, huge * rat(4, 1)),
            ],
        )
        .unwrap();
        let m = median_order(&d, OrderMode::Weight).unwrap();
        assert_eq!(m.order, vec![1, 2, 0]);
        assert_eq!(m.backward, Rational::from_integer(BigInt::from(u64::MAX)) * rat(4, 1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        // DP optimum equals the exhaustive-permutation minimum in both
        // modes, and the reported backward value matches its own order.
        #[test]
        fn dp_matches_brute_force(d in crate::testutil::arb_digraph(6, 3, 2)) {
            for mode in [OrderMode::Count, OrderMode::Weight] {
                let m = median_order(&d, mode).unwrap();
                prop_assert_eq!(
                    backward_weight(&d, &m.order, mode).unwrap(),
                    m.backward.clone()
                );
                prop_assert_eq!(m.backward.clone(), brute_force(&d, mode));
            }
        }

        // Reversal duality: the backward total of an order on d equals the
        // backward total of the reversed order on reverse(d).
        #[test]
        fn reversal_duality(d in crate::testutil::arb_digraph(6, 3, 2)) {
            let m = median_order(&d, OrderMode::Weight).unwrap();
            let mut flipped = m.order.clone();
            flipped.reverse();
            prop_assert_eq!(
                backward_weight(&d.reverse(), &flipped, OrderMode::Weight).unwrap(),
                m.backward
            );
        }

        // Havet-Thomasse: on unit tournaments the count-mode median order
        // always ends on a Seymour vertex.
        #[test]
        fn last_vertex_on_tournaments(t in crate::testutil::arb_unit_tournament(8)) {
            let check = last_vertex_seymour(&t, OrderMode::Count).unwrap();
            prop_assert!(check.seymour);
        }
    }
}
