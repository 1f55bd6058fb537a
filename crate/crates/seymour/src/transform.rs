//! Graph rewrites: contraction, the unweighted auxiliary expansion, weight
//! normalization, vertex-to-arc weight transfer, and the tournament blow-up.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::graph::{Digraph, VertexWeighting};
use crate::{Error, Rational, Result};

/// Result of contracting a vertex into another: the new digraph plus the
/// old-to-new index map (`None` for the removed vertex).
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Digraph,
    pub old_to_new: Vec<Option<usize>>,
}

/// Contracts `u` into `v`: removes `u` and folds the weight of every arc
/// `(x, u)` onto the arc `(x, v)`.
///
/// Requires that every `x` with a positive-weight arc into `u` is distinct
/// from `v` and already has an arc to `v` (any weight). Under that
/// precondition the rewrite preserves every surviving vertex's first
/// neighborhood weight and never increases its neighborhood weight
/// difference.
pub fn contract(d: &Digraph, u: usize, v: usize) -> Result<Contraction> {
    for x in [u, v] {
        if x >= d.n() {
            return Err(Error::UnknownVertex { vertex: x, n: d.n() });
        }
    }
    if u == v {
        return Err(Error::Precondition("cannot contract a vertex into itself".into()));
    }
    for x in d.in_neighbors(u) {
        if d.weight_or_zero(x, u).is_positive() {
            if x == v {
                return Err(Error::Precondition(format!(
                    "arc {v} -> {u} has nonzero weight"
                )));
            }
            if !d.has_arc(x, v) {
                return Err(Error::Precondition(format!(
                    "vertex {x} has a positive arc to {u} but no arc to {v}"
                )));
            }
        }
    }

    let old_to_new: Vec<Option<usize>> = (0..d.n())
        .map(|x| match x.cmp(&u) {
            std::cmp::Ordering::Less => Some(x),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(x - 1),
        })
        .collect();

    let mut arcs = Vec::with_capacity(d.arc_count());
    for (a, b, w) in d.arcs() {
        if a == u || b == u {
            continue;
        }
        let mut w = w.clone();
        if b == v && d.has_arc(a, u) {
            w += d.weight_or_zero(a, u);
        }
        arcs.push((old_to_new[a].unwrap(), old_to_new[b].unwrap(), w));
    }
    Ok(Contraction {
        graph: Digraph::from_arcs(d.n() - 1, arcs)?,
        old_to_new,
    })
}

/// Blow-up of an integer arc-weighted digraph into an unweighted one whose
/// neighborhood cardinalities realize the arc-weighted measures: each
/// original vertex `v` becomes an ordered block of vertices, and every arc
/// `(u, v)` of weight `w` sends all of block `u` to the first `w` vertices
/// of block `v`.
#[derive(Debug, Clone)]
pub struct Expansion {
    /// Unit-weight digraph standing for an unweighted one.
    pub graph: Digraph,
    /// `blocks[v]` lists the new indices replacing original vertex `v`, in
    /// block order. Blocks partition the new vertex set.
    pub blocks: Vec<Vec<usize>>,
}

pub const DEFAULT_EXPANSION_CAP: usize = 1_000_000;

pub fn expand_auxiliary(d: &Digraph) -> Result<Expansion> {
    expand_auxiliary_capped(d, DEFAULT_EXPANSION_CAP)
}

/// Requires every weight to be a strictly positive integer (use
/// [`drop_zero_arcs`] and [`rationalize_and_scale`] first). `cap` bounds the
/// expanded vertex count.
pub fn expand_auxiliary_capped(d: &Digraph, cap: usize) -> Result<Expansion> {
    let mut int_weights: Vec<(usize, usize, usize)> = Vec::with_capacity(d.arc_count());
    for (u, v, w) in d.arcs() {
        if !w.is_integer() || !w.is_positive() {
            return Err(Error::Precondition(format!(
                "arc {u} -> {v} has non-positive-integer weight {}",
                crate::format_rational(w)
            )));
        }
        let w: usize = w
            .to_integer()
            .try_into()
            .map_err(|_| Error::ExpansionTooLarge { size: usize::MAX, cap })?;
        int_weights.push((u, v, w));
    }

    // Block size: largest in-arc weight, or 1 for a vertex with no in-arcs
    // (its own measures do not depend on its block size).
    let mut sizes = vec![1usize; d.n()];
    for &(_, v, w) in &int_weights {
        sizes[v] = sizes[v].max(w);
    }
    let total: usize = sizes.iter().sum();
    if total > cap {
        return Err(Error::ExpansionTooLarge { size: total, cap });
    }

    let mut blocks = Vec::with_capacity(d.n());
    let mut next = 0;
    for &size in &sizes {
        blocks.push((next..next + size).collect::<Vec<_>>());
        next += size;
    }

    let mut arcs = Vec::new();
    for &(u, v, w) in &int_weights {
        for &x in &blocks[u] {
            for &y in &blocks[v][..w] {
                arcs.push((x, y, Rational::one()));
            }
        }
    }
    Ok(Expansion {
        graph: Digraph::from_arcs(total, arcs)?,
        blocks,
    })
}

impl Expansion {
    /// Instance text of the expanded graph followed by the block table as
    /// comment lines.
    pub fn to_instance_text(&self) -> String {
        let mut out = crate::io::serialize_digraph(&self.graph);
        for (v, block) in self.blocks.iter().enumerate() {
            let ids = block
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!("# block {v}: {ids}\n"));
        }
        out
    }
}

/// Removes every arc of weight zero. Never increases any vertex's
/// neighborhood weight difference.
pub fn drop_zero_arcs(d: &Digraph) -> Digraph {
    let arcs: Vec<_> = d
        .arcs()
        .filter(|(_, _, w)| !w.is_zero())
        .map(|(u, v, w)| (u, v, w.clone()))
        .collect();
    Digraph::from_arcs(d.n(), arcs).expect("subset of a valid arc set")
}

/// Multiplies every weight by the least common multiple of the weight
/// denominators, turning positive rational weights into positive integers.
/// Every delta scales by the same positive factor, so all classifications
/// are preserved. Errors when a zero-weight arc is present.
pub fn rationalize_and_scale(d: &Digraph) -> Result<Digraph> {
    let mut lcm = BigInt::one();
    for (u, v, w) in d.arcs() {
        if w.is_zero() {
            return Err(Error::Precondition(format!(
                "arc {u} -> {v} has weight zero; drop zero arcs first"
            )));
        }
        lcm = lcm.lcm(w.denom());
    }
    let scale = Rational::from_integer(lcm);
    let arcs: Vec<_> = d
        .arcs()
        .map(|(u, v, w)| (u, v, w * &scale))
        .collect();
    Digraph::from_arcs(d.n(), arcs)
}

/// Transfers a vertex weighting onto arcs: same arc set, `w(uv) = eta(v)`.
/// A vertex that is strongly contracting in the vertex-weighted sense stays
/// strongly contracting in the resulting arc-weighted sense.
pub fn arc_weights_from_vertex_weights(d: &Digraph, eta: &VertexWeighting) -> Result<Digraph> {
    eta.check_matches(d)?;
    let arcs: Vec<_> = d
        .arcs()
        .map(|(u, v, _)| (u, v, eta.get(v).clone()))
        .collect();
    Digraph::from_arcs(d.n(), arcs)
}

/// Blows a tournament up by positive integer block sizes: each vertex `v`
/// becomes a transitively oriented block of `eta(v)` vertices joined by
/// weight-zero arcs, and each original arc `u -> v` becomes all weight-one
/// arcs from block `u` to block `v`. The result is again a tournament.
///
/// The internal orientation is a canonical choice (ascending transitive);
/// callers exploring orientation effects can permute blocks themselves.
pub fn blowup(t: &Digraph, eta: &VertexWeighting) -> Result<Digraph> {
    if !t.is_tournament() {
        return Err(Error::Precondition("blow-up input must be a tournament".into()));
    }
    eta.check_matches(t)?;
    let mut sizes = Vec::with_capacity(t.n());
    for v in 0..t.n() {
        let w = eta.get(v);
        if !w.is_integer() || !w.is_positive() {
            return Err(Error::Precondition(format!(
                "block size for vertex {v} must be a positive integer, got {}",
                crate::format_rational(w)
            )));
        }
        sizes.push(usize::try_from(w.to_integer()).map_err(|_| {
            Error::Precondition(format!("block size for vertex {v} too large"))
        })?);
    }

    let mut offsets = Vec::with_capacity(t.n());
    let mut next = 0;
    for &s in &sizes {
        offsets.push(next);
        next += s;
    }
    let total = next;

    let mut arcs = Vec::new();
    for v in 0..t.n() {
        for i in 0..sizes[v] {
            for j in (i + 1)..sizes[v] {
                arcs.push((offsets[v] + i, offsets[v] + j, Rational::zero()));
            }
        }
    }
    for (u, v, _) in t.arcs() {
        for i in 0..sizes[u] {
            for j in 0..sizes[v] {
                arcs.push((offsets[u] + i, offsets[v] + j, Rational::one()));
            }
        }
    }
    Digraph::from_arcs(total, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c3, tt3, weighted_dag5};
    use crate::report::{report, seymour_vertices_arc};
    use crate::{rat, Error};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn contract_tt3_folds_weight() {
        let c = contract(&tt3(), 1, 2).unwrap();
        assert_eq!(c.graph.n(), 2);
        assert_eq!(c.old_to_new, vec![Some(0), None, Some(1)]);
        assert_eq!(c.graph.weight(0, 1), Some(&rat(2, 1)));

        // Vertex 0 keeps alpha = 2, beta = 0 on both sides.
        let before = report(&tt3());
        let after = report(&c.graph);
        assert_eq!(before.vertices[0].delta, rat(-2, 1));
        assert_eq!(after.vertices[0].delta, rat(-2, 1));
    }

    #[test]
    fn contract_monotone_on_a_path() {
        // x -> u (1), x -> v (0), u -> v (3): contracting u into v turns
        // beta_x from 3 into 0 while alpha_x stays 1.
        let d = Digraph::from_arcs(
            3,
            vec![(0, 1, rat(1, 1)), (0, 2, rat(0, 1)), (1, 2, rat(3, 1))],
        )
        .unwrap();
        let before = report(&d).vertices[0].clone();
        assert_eq!(before.alpha, rat(1, 1));
        assert_eq!(before.beta, rat(3, 1));

        let c = contract(&d, 1, 2).unwrap();
        let after = report(&c.graph).vertices[0].clone();
        assert_eq!(after.alpha, rat(1, 1));
        assert_eq!(after.beta, rat(0, 1));
        assert!(after.delta <= before.delta);
        assert_eq!(c.graph.weight(0, 1), Some(&rat(1, 1)));
    }

    #[test]
    fn contract_precondition_failures() {
        // 0 -> 1 positive but no arc 0 -> 2.
        let d = Digraph::from_arcs(3, vec![(0, 1, rat(1, 1))]).unwrap();
        let err = contract(&d, 1, 2).unwrap_err();
        assert!(err.to_string().contains("no arc to 2"), "{err}");

        // v -> u of nonzero weight blocks the contraction.
        let err = contract(&tt3(), 2, 1).unwrap_err();
        assert!(err.to_string().contains("nonzero weight"), "{err}");
    }

    #[test]
    fn expansion_examples() {
        // Unit 3-cycle expands to itself.
        let e = expand_auxiliary(&c3()).unwrap();
        assert_eq!(e.graph, c3());
        assert!(e.blocks.iter().all(|b| b.len() == 1));

        // Single arc of weight 3: one source vertex, three targets.
        let d = Digraph::from_arcs(2, vec![(0, 1, rat(3, 1))]).unwrap();
        let e = expand_auxiliary(&d).unwrap();
        assert_eq!(e.blocks[0].len(), 1);
        assert_eq!(e.blocks[1].len(), 3);
        assert_eq!(e.graph.out_neighbors(0).len(), 3);
    }

    #[test]
    fn expansion_realizes_weighted_measures() {
        let d = weighted_dag5();
        let e = expand_auxiliary(&d).unwrap();
        let rep = report(&d);
        for x in &e.blocks[0] {
            let h = e.graph.neighborhoods(*x).unwrap();
            assert_eq!(rat(h.first_out.len() as i64, 1), rep.vertices[0].alpha);
            assert_eq!(rat(h.second_out.len() as i64, 1), rep.vertices[0].beta);
        }
    }

    #[test]
    fn expansion_rejects_bad_weights() {
        let zero = Digraph::from_arcs(2, vec![(0, 1, rat(0, 1))]).unwrap();
        assert!(expand_auxiliary(&zero).is_err());
        let frac = Digraph::from_arcs(2, vec![(0, 1, rat(1, 2))]).unwrap();
        assert!(expand_auxiliary(&frac).is_err());
        let big = Digraph::from_arcs(2, vec![(0, 1, rat(100, 1))]).unwrap();
        assert!(matches!(
            expand_auxiliary_capped(&big, 10),
            Err(Error::ExpansionTooLarge { size: 101, cap: 10 })
        ));
    }

    #[test]
    fn drop_zero_arcs_examples() {
        let only_zeros =
            Digraph::from_arcs(3, vec![(0, 1, rat(0, 1)), (1, 2, rat(0, 1))]).unwrap();
        assert_eq!(drop_zero_arcs(&only_zeros).arc_count(), 0);
        assert_eq!(drop_zero_arcs(&weighted_dag5()), weighted_dag5());

        // Path 0 -> 1 -> 2 with a zero chord 0 -> 2: dropping the chord
        // keeps beta_0 = 1 (the route through 1 survives) and delta_0 = 0.
        let d = Digraph::from_arcs(
            3,
            vec![(0, 1, rat(1, 1)), (1, 2, rat(1, 1)), (0, 2, rat(0, 1))],
        )
        .unwrap();
        let before = report(&d).vertices[0].clone();
        let after = report(&drop_zero_arcs(&d)).vertices[0].clone();
        assert_eq!(before.beta, rat(1, 1));
        assert_eq!(after.beta, rat(1, 1));
        assert_eq!(before.delta, after.delta);
    }

    #[test]
    fn scaling_examples() {
        let d = Digraph::from_arcs(3, vec![(0, 1, rat(1, 2)), (1, 2, rat(1, 3))]).unwrap();
        let s = rationalize_and_scale(&d).unwrap();
        assert_eq!(s.weight(0, 1), Some(&rat(3, 1)));
        assert_eq!(s.weight(1, 2), Some(&rat(2, 1)));

        assert_eq!(rationalize_and_scale(&weighted_dag5()).unwrap(), weighted_dag5());

        let halved = Digraph::from_arcs(
            5,
            weighted_dag5()
                .arcs()
                .map(|(u, v, w)| (u, v, w / rat(2, 1)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(rationalize_and_scale(&halved).unwrap(), weighted_dag5());

        let zero = Digraph::from_arcs(2, vec![(0, 1, rat(0, 1))]).unwrap();
        assert!(rationalize_and_scale(&zero).is_err());
    }

    #[test]
    fn vertex_weights_become_arc_weights() {
        let eta = VertexWeighting::new(vec![rat(5, 1), rat(0, 1), rat(2, 1)]).unwrap();
        let d = arc_weights_from_vertex_weights(&tt3(), &eta).unwrap();
        assert_eq!(d.weight(0, 1), Some(&rat(0, 1)));
        assert_eq!(d.weight(0, 2), Some(&rat(2, 1)));
        assert_eq!(d.weight(1, 2), Some(&rat(2, 1)));

        let unit = arc_weights_from_vertex_weights(&c3(), &VertexWeighting::ones(3)).unwrap();
        assert_eq!(unit, c3());
    }

    #[test]
    fn vertex_to_arc_weights_preserve_alpha_identity() {
        let eta = VertexWeighting::new(vec![rat(1, 2), rat(3, 1), rat(0, 1)]).unwrap();
        let d = arc_weights_from_vertex_weights(&tt3(), &eta).unwrap();
        let hoods = tt3().all_neighborhoods();
        for v in 0..3 {
            assert_eq!(
                crate::report::alpha(&d, v).unwrap(),
                eta.on_set(&hoods[v].first_out)
            );
        }
    }

    #[test]
    fn blowup_examples() {
        let unit = blowup(&c3(), &VertexWeighting::ones(3)).unwrap();
        assert_eq!(unit, c3());

        // Single arc 0 -> 1 with block sizes (2, 1).
        let t = Digraph::from_arcs(2, vec![(0, 1, rat(1, 1))]).unwrap();
        let eta = VertexWeighting::new(vec![rat(2, 1), rat(1, 1)]).unwrap();
        let b = blowup(&t, &eta).unwrap();
        assert_eq!(b.n(), 3);
        assert!(b.is_tournament());
        assert_eq!(b.weight(0, 1), Some(&rat(0, 1)));
        assert_eq!(b.weight(0, 2), Some(&rat(1, 1)));
        assert_eq!(b.weight(1, 2), Some(&rat(1, 1)));

        let six = blowup(&c3(), &VertexWeighting::new(vec![rat(2, 1); 3]).unwrap()).unwrap();
        assert_eq!(six.n(), 6);
        assert!(six.is_tournament());
    }

    #[test]
    fn blowup_rejects_bad_inputs() {
        let not_tournament = Digraph::from_arcs(3, vec![(0, 1, rat(1, 1))]).unwrap();
        assert!(blowup(&not_tournament, &VertexWeighting::ones(3)).is_err());
        let eta = VertexWeighting::new(vec![rat(1, 1), rat(1, 2), rat(1, 1)]).unwrap();
        assert!(blowup(&c3(), &eta).is_err());
        let zeta = VertexWeighting::new(vec![rat(1, 1), rat(0, 1), rat(1, 1)]).unwrap();
        assert!(blowup(&c3(), &zeta).is_err());
    }

    #[test]
    fn blowup_commutes_with_reversal_on_seymour_sets() {
        // Compare at the block level: reversing then blowing up equals
        // blowing up then reversing, up to block-internal orientation.
        let eta = VertexWeighting::new(vec![rat(2, 1), rat(1, 1), rat(3, 1)]).unwrap();
        for t in [c3(), tt3()] {
            let a = blowup(&t.reverse(), &eta).unwrap();
            let b = blowup(&t, &eta).unwrap().reverse();
            let block_of = |x: usize| match x {
                0 | 1 => 0,
                2 => 1,
                _ => 2,
            };
            let sa: BTreeSet<usize> =
                seymour_vertices_arc(&a).into_iter().map(block_of).collect();
            let sb: BTreeSet<usize> =
                seymour_vertices_arc(&b).into_iter().map(block_of).collect();
            assert_eq!(sa, sb);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Contraction preserves alpha exactly and never increases delta.
        #[test]
        fn contraction_is_monotone(d in crate::testutil::arb_digraph(6, 3, 2)) {
            let before = report(&d);
            for u in 0..d.n() {
                for v in 0..d.n() {
                    if u == v { continue; }
                    if let Ok(c) = contract(&d, u, v) {
                        let after = report(&c.graph);
                        for y in 0..d.n() {
                            if let Some(ny) = c.old_to_new[y] {
                                prop_assert_eq!(&after.vertices[ny].alpha, &before.vertices[y].alpha);
                                prop_assert!(after.vertices[ny].beta <= before.vertices[y].beta);
                                prop_assert!(after.vertices[ny].delta <= before.vertices[y].delta);
                            }
                        }
                    }
                }
            }
        }

        // The auxiliary expansion realizes alpha and beta as cardinalities
        // for every block vertex.
        #[test]
        fn expansion_oracle(d in crate::testutil::arb_digraph_posint(6, 4)) {
            let e = expand_auxiliary(&d).unwrap();
            let rep = report(&d);
            let hoods = e.graph.all_neighborhoods();
            for v in 0..d.n() {
                for &x in &e.blocks[v] {
                    prop_assert_eq!(rat(hoods[x].first_out.len() as i64, 1), rep.vertices[v].alpha.clone());
                    prop_assert_eq!(rat(hoods[x].second_out.len() as i64, 1), rep.vertices[v].beta.clone());
                }
            }
        }

        // Dropping zero arcs never increases delta.
        #[test]
        fn dropping_zero_arcs_is_monotone(d in crate::testutil::arb_digraph(6, 3, 2)) {
            let before = report(&d);
            let after = report(&drop_zero_arcs(&d));
            for v in 0..d.n() {
                prop_assert!(after.vertices[v].delta <= before.vertices[v].delta);
            }
        }

        // Scaling yields integer weights and preserves the sign of every
        // delta.
        #[test]
        fn scaling_preserves_classification(d in crate::testutil::arb_digraph(6, 4, 3)) {
            let positive = drop_zero_arcs(&d);
            let scaled = rationalize_and_scale(&positive).unwrap();
            prop_assert!(scaled.arcs().all(|(_, _, w)| w.is_integer()));
            let before = report(&positive);
            let after = report(&scaled);
            for v in 0..d.n() {
                prop_assert_eq!(after.vertices[v].classification, before.vertices[v].classification);
            }
        }

        // Full round trip: the normalized graph is everywhere strongly
        // contracting exactly when its expansion has no unweighted Seymour
        // vertex, and an everywhere-contracting input stays contracting
        // through normalization.
        #[test]
        fn expansion_round_trip(d in crate::testutil::arb_digraph(5, 3, 2)) {
            let cleaned = drop_zero_arcs(&d);
            prop_assume!(cleaned.arc_count() > 0);
            let scaled = rationalize_and_scale(&cleaned).unwrap();
            let e = expand_auxiliary(&scaled).unwrap();
            let all_contracting = |rep: &crate::report::NeighborhoodReport| {
                rep.vertices
                    .iter()
                    .all(|r| r.classification == crate::report::Classification::StronglyContracting)
            };
            let no_seymour = crate::report::seymour_vertices_unweighted(&e.graph).is_empty();
            prop_assert_eq!(no_seymour, all_contracting(&report(&scaled)));
            // Zero-arc removal and scaling never increase delta, so an
            // everywhere-contracting input must survive the round trip.
            if all_contracting(&report(&d)) {
                prop_assert!(no_seymour);
            }
        }

        // Blow-up output is always a tournament.
        #[test]
        fn blowup_makes_tournaments(
            t in crate::testutil::arb_unit_tournament(4),
            sizes in proptest::collection::vec(1i64..=3, 4),
        ) {
            let eta = VertexWeighting::new(
                sizes.iter().take(t.n()).map(|&s| rat(s, 1)).collect(),
            ).unwrap();
            let b = blowup(&t, &eta).unwrap();
            prop_assert!(b.is_tournament());
        }
    }
}
