//! Arc-weighted digraph representation and basic structural queries.
//!
//! Vertices are dense indices `0..n`. Arcs map ordered pairs to nonnegative
//! exact rationals; an absent pair is a missing arc, which is semantically
//! distinct from a present arc of weight zero (a zero arc still contributes
//! to reachability). Loops and two-cycles are rejected at construction.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use crate::{Error, Rational, Result};

/// A loopless, two-cycle-free digraph with a nonnegative rational weight on
/// every arc. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: BTreeMap<(usize, usize), Rational>,
}

impl Digraph {
    /// Arcless digraph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            arcs: BTreeMap::new(),
        }
    }

    /// Builds a digraph from an arc list, validating every invariant:
    /// indices in range, no loops, no two-cycles, no duplicate arcs, and no
    /// negative weights.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut map = BTreeMap::new();
        for (u, v, w) in arcs {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::UnknownVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop arc at vertex {u}")));
            }
            if map.contains_key(&(v, u)) {
                return Err(Error::InvalidGraph(format!(
                    "two-cycle between {u} and {v}"
                )));
            }
            if w.is_negative() {
                return Err(Error::InvalidGraph(format!(
                    "negative weight on arc {u} -> {v}"
                )));
            }
            if map.insert((u, v), w).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate arc {u} -> {v}")));
            }
        }
        Ok(Digraph { n, arcs: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains_key(&(u, v))
    }

    /// Weight of arc `(u, v)`, or `None` when the arc is missing.
    pub fn weight(&self, u: usize, v: usize) -> Option<&Rational> {
        self.arcs.get(&(u, v))
    }

    /// Weight of arc `(u, v)` with missing arcs reading as zero. This is the
    /// convention used by the second-neighborhood weight formulas.
    pub fn weight_or_zero(&self, u: usize, v: usize) -> Rational {
        self.arcs
            .get(&(u, v))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.arcs.iter().map(|(&(u, v), w)| (u, v, w))
    }

    /// Heads of arcs leaving `v`, ascending.
    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        self.arcs
            .range((v, 0)..=(v, usize::MAX))
            .map(|(&(_, head), _)| head)
            .collect()
    }

    /// Tails of arcs entering `v`, ascending.
    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.arcs
            .keys()
            .filter(|&&(_, head)| head == v)
            .map(|&(tail, _)| tail)
            .collect()
    }

    /// Out- and in-adjacency lists for all vertices in one pass.
    pub fn adjacency(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut out = vec![Vec::new(); self.n];
        let mut inc = vec![Vec::new(); self.n];
        for &(u, v) in self.arcs.keys() {
            out[u].push(v);
            inc[v].push(u);
        }
        (out, inc)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex { vertex: v, n: self.n })
        }
    }

    /// First and second neighborhoods of `v`, on both sides.
    ///
    /// Membership follows arc presence, not weight positivity: a zero-weight
    /// arc contributes to reachability. `second_out` contains exactly the
    /// vertices whose shortest directed path from `v` has two arcs, so it is
    /// disjoint from `first_out` and excludes `v`.
    pub fn neighborhoods(&self, v: usize) -> Result<Neighborhoods> {
        self.check_vertex(v)?;
        let (out, inc) = self.adjacency();
        let (first_out, second_out) = two_level(&out, v);
        let (first_in, second_in) = two_level(&inc, v);
        Ok(Neighborhoods {
            first_out,
            second_out,
            first_in,
            second_in,
        })
    }

    /// Neighborhoods for every vertex at once; cheaper than calling
    /// [`Digraph::neighborhoods`] in a loop.
    pub fn all_neighborhoods(&self) -> Vec<Neighborhoods> {
        let (out, inc) = self.adjacency();
        (0..self.n)
            .map(|v| {
                let (first_out, second_out) = two_level(&out, v);
                let (first_in, second_in) = two_level(&inc, v);
                Neighborhoods {
                    first_out,
                    second_out,
                    first_in,
                    second_in,
                }
            })
            .collect()
    }

    /// The reverse digraph: every arc flipped, weights kept.
    pub fn reverse(&self) -> Digraph {
        let arcs = self
            .arcs
            .iter()
            .map(|(&(u, v), w)| ((v, u), w.clone()))
            .collect();
        Digraph { n: self.n, arcs }
    }

    /// True iff every unordered pair of vertices carries exactly one arc.
    pub fn is_tournament(&self) -> bool {
        if self.arcs.len() != self.n * (self.n.saturating_sub(1)) / 2 {
            return false;
        }
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_arc(u, v) && !self.has_arc(v, u) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff every arc `(u, v)` closes a directed triangle, i.e. some `x`
    /// has arcs `(v, x)` and `(x, u)`.
    pub fn every_arc_in_triangle(&self) -> bool {
        let (out, _) = self.adjacency();
        for &(u, v) in self.arcs.keys() {
            let closes = out[v].iter().any(|&x| self.has_arc(x, u));
            if !closes {
                return false;
            }
        }
        true
    }

    /// Induced subgraph on `keep` (ascending vertex list), with vertices
    /// renumbered densely. Returns the subgraph and the old-to-new index map.
    pub fn induced(&self, keep: &[usize]) -> (Digraph, Vec<Option<usize>>) {
        let mut old_to_new = vec![None; self.n];
        for (new, &old) in keep.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let arcs = self
            .arcs
            .iter()
            .filter_map(|(&(u, v), w)| {
                Some(((old_to_new[u]?, old_to_new[v]?), w.clone()))
            })
            .collect();
        (
            Digraph {
                n: keep.len(),
                arcs,
            },
            old_to_new,
        )
    }
}

fn two_level(adj: &[Vec<usize>], v: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let first: BTreeSet<usize> = adj[v].iter().copied().collect();
    let mut second = BTreeSet::new();
    for &u in &first {
        for &s in &adj[u] {
            if s != v && !first.contains(&s) {
                second.insert(s);
            }
        }
    }
    (first, second)
}

/// First and second neighborhoods of a single vertex, out- and in-side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhoods {
    pub first_out: BTreeSet<usize>,
    pub second_out: BTreeSet<usize>,
    pub first_in: BTreeSet<usize>,
    pub second_in: BTreeSet<usize>,
}

/// A nonnegative rational weight per vertex, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexWeighting {
    weights: Vec<Rational>,
}

impl VertexWeighting {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidGraph(format!(
                "negative vertex weight {}",
                crate::format_rational(w)
            )));
        }
        Ok(VertexWeighting { weights })
    }

    /// All-zero weighting on `n` vertices.
    pub fn zeros(n: usize) -> Self {
        VertexWeighting {
            weights: vec![Rational::zero(); n],
        }
    }

    /// All-ones weighting on `n` vertices.
    pub fn ones(n: usize) -> Self {
        VertexWeighting {
            weights: vec![num::one(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, v: usize) -> &Rational {
        &self.weights[v]
    }

    pub fn set(&mut self, v: usize, w: Rational) {
        self.weights[v] = w;
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.weights.iter()
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// Total weight carried by a vertex set.
    pub fn on_set<'a, I>(&self, set: I) -> Rational
    where
        I: IntoIterator<Item = &'a usize>,
    {
        set.into_iter().map(|&v| self.get(v).clone()).sum()
    }

    /// Errors unless the weighting covers exactly the digraph's vertex set.
    pub fn check_matches(&self, d: &Digraph) -> Result<()> {
        if self.len() == d.n() {
            Ok(())
        } else {
            Err(Error::WeightingMismatch {
                len: self.len(),
                n: d.n(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c3, tt3};
    use crate::rat;

    fn unit() -> Rational {
        rat(1, 1)
    }

    #[test]
    fn rejects_loops_two_cycles_negative_weights_and_duplicates() {
        assert!(matches!(
            Digraph::from_arcs(2, vec![(0, 0, unit())]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Digraph::from_arcs(2, vec![(0, 1, unit()), (1, 0, unit())]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Digraph::from_arcs(2, vec![(0, 1, rat(-1, 2))]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Digraph::from_arcs(2, vec![(0, 1, unit()), (0, 1, unit())]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Digraph::from_arcs(2, vec![(0, 5, unit())]),
            Err(Error::UnknownVertex { vertex: 5, n: 2 })
        ));
    }

    #[test]
    fn c3_neighborhoods() {
        let d = c3();
        let nb = d.neighborhoods(0).unwrap();
        assert_eq!(nb.first_out, BTreeSet::from([1]));
        assert_eq!(nb.second_out, BTreeSet::from([2]));
        assert_eq!(nb.first_in, BTreeSet::from([2]));
        assert_eq!(nb.second_in, BTreeSet::from([1]));
    }

    #[test]
    fn tt3_neighborhoods() {
        let d = tt3();
        let nb = d.neighborhoods(0).unwrap();
        // 2 is a first out-neighbor, so it is not a second one.
        assert_eq!(nb.first_out, BTreeSet::from([1, 2]));
        assert!(nb.second_out.is_empty());

        let sink = d.neighborhoods(2).unwrap();
        assert!(sink.first_out.is_empty());
        assert!(sink.second_out.is_empty());
        assert_eq!(sink.first_in, BTreeSet::from([0, 1]));
    }

    #[test]
    fn unknown_vertex_is_an_error() {
        assert!(matches!(
            c3().neighborhoods(3),
            Err(Error::UnknownVertex { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn reverse_swaps_arcs_and_is_an_involution() {
        let d = tt3();
        let r = d.reverse();
        assert!(r.has_arc(1, 0) && r.has_arc(2, 0) && r.has_arc(2, 1));
        assert_eq!(r.reverse(), d);

        // Reversal swaps out-sets with in-sets at every vertex.
        for v in 0..d.n() {
            let fwd = d.neighborhoods(v).unwrap();
            let bwd = r.neighborhoods(v).unwrap();
            assert_eq!(fwd.first_out, bwd.first_in);
            assert_eq!(fwd.second_out, bwd.second_in);
        }
    }

    #[test]
    fn tournament_detection() {
        assert!(c3().is_tournament());
        assert!(tt3().is_tournament());
        let missing = Digraph::from_arcs(3, vec![(0, 1, unit()), (1, 2, unit())]).unwrap();
        assert!(!missing.is_tournament());
    }

    #[test]
    fn triangle_coverage() {
        assert!(c3().every_arc_in_triangle());
        assert!(!tt3().every_arc_in_triangle());

        // Two vertex-disjoint 3-cycles: componentwise true.
        let two = Digraph::from_arcs(
            6,
            vec![
                (0, 1, unit()),
                (1, 2, unit()),
                (2, 0, unit()),
                (3, 4, unit()),
                (4, 5, unit()),
                (5, 3, unit()),
            ],
        )
        .unwrap();
        assert!(two.every_arc_in_triangle());
    }

    #[test]
    fn zero_weight_arcs_count_for_reachability() {
        // 0 -> 1 (weight 0) still makes 1's neighbors second neighbors of 0.
        let d = Digraph::from_arcs(3, vec![(0, 1, rat(0, 1)), (1, 2, unit())]).unwrap();
        let nb = d.neighborhoods(0).unwrap();
        assert_eq!(nb.first_out, BTreeSet::from([1]));
        assert_eq!(nb.second_out, BTreeSet::from([2]));
    }

    #[test]
    fn induced_subgraph_renumbers_densely() {
        let d = tt3();
        let (sub, map) = d.induced(&[0, 2]);
        assert_eq!(sub.n(), 2);
        assert_eq!(map, vec![Some(0), None, Some(1)]);
        assert!(sub.has_arc(0, 1));
        assert_eq!(sub.arc_count(), 1);
    }
}
