//! First/second neighborhood weights and Seymour-vertex classification.
//!
//! Three measures are supported on the same digraph:
//!
//! * arc-weighted: `alpha` is the total weight leaving a vertex; `beta` sums,
//!   over every target `s` reachable by a two-arc path, the clamped best
//!   excess `max(0, max_u w(us) - w(vs))` with missing arcs reading as zero;
//! * vertex-weighted: weights of the first/second out-neighborhood sets
//!   under a vertex weighting;
//! * unweighted: neighborhood set cardinalities.
//!
//! A vertex is weakly expanding (a Seymour vertex) when its second measure
//! is at least its first, strongly contracting otherwise. All comparisons
//! are exact.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use serde::Serialize;

use crate::graph::{Digraph, VertexWeighting};
use crate::{format_rational, Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    WeaklyExpanding,
    StronglyContracting,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::WeaklyExpanding => "weakly-expanding",
            Classification::StronglyContracting => "strongly-contracting",
        }
    }
}

/// Exact arc-weighted neighborhood data for one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexReport {
    pub vertex: usize,
    pub alpha: Rational,
    /// `beta_terms[s]` for every vertex `s != v` at the end of a two-arc
    /// path from `v`, including first out-neighbors.
    pub beta_terms: BTreeMap<usize, Rational>,
    pub beta: Rational,
    pub delta: Rational,
    pub classification: Classification,
}

/// Per-vertex reports for a whole digraph, ascending vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodReport {
    pub vertices: Vec<VertexReport>,
}

/// First neighborhood weight: total weight of arcs leaving `v`.
pub fn alpha(d: &Digraph, v: usize) -> Result<Rational> {
    if v >= d.n() {
        return Err(Error::UnknownVertex { vertex: v, n: d.n() });
    }
    Ok(d.out_neighbors(v)
        .into_iter()
        .map(|u| d.weight_or_zero(v, u))
        .sum())
}

/// Clamped best excess toward `s`: `max(0, max_{v->u->s} w(us) - w(vs))`,
/// with `w(vs) = 0` when `(v, s)` is not an arc. Errors when no two-arc path
/// from `v` reaches `s`.
pub fn beta_term(d: &Digraph, v: usize, s: usize) -> Result<Rational> {
    for x in [v, s] {
        if x >= d.n() {
            return Err(Error::UnknownVertex { vertex: x, n: d.n() });
        }
    }
    let mut best: Option<Rational> = None;
    for u in d.out_neighbors(v) {
        if u != s && s != v && d.has_arc(u, s) {
            let w = d.weight_or_zero(u, s);
            if best.as_ref().map_or(true, |b| w > *b) {
                best = Some(w);
            }
        }
    }
    let best = best.ok_or(Error::NoTwoPath { from: v, to: s })?;
    let excess = best - d.weight_or_zero(v, s);
    Ok(excess.max(Rational::zero()))
}

/// Full arc-weighted report: alpha, all beta terms, beta, delta, and the
/// resulting classification for every vertex. Neighborhood scans are done
/// once per graph.
pub fn report(d: &Digraph) -> NeighborhoodReport {
    let (out, _) = d.adjacency();
    let vertices = (0..d.n())
        .map(|v| {
            let mut alpha = Rational::zero();
            for &u in &out[v] {
                alpha += d.weight_or_zero(v, u);
            }
            // Best end-arc weight per two-step target.
            let mut best: BTreeMap<usize, Rational> = BTreeMap::new();
            for &u in &out[v] {
                for &s in &out[u] {
                    if s == v {
                        continue;
                    }
                    let w = d.weight_or_zero(u, s);
                    match best.get(&s) {
                        Some(b) if *b >= w => {}
                        _ => {
                            best.insert(s, w);
                        }
                    }
                }
            }
            let beta_terms: BTreeMap<usize, Rational> = best
                .into_iter()
                .map(|(s, w)| {
                    let excess = w - d.weight_or_zero(v, s);
                    (s, excess.max(Rational::zero()))
                })
                .collect();
            let beta: Rational = beta_terms.values().sum();
            let delta = beta.clone() - alpha.clone();
            let classification = if delta >= Rational::zero() {
                Classification::WeaklyExpanding
            } else {
                Classification::StronglyContracting
            };
            VertexReport {
                vertex: v,
                alpha,
                beta_terms,
                beta,
                delta,
                classification,
            }
        })
        .collect();
    NeighborhoodReport { vertices }
}

/// Arc-weighted Seymour vertices: `{v : delta_v >= 0}`.
pub fn seymour_vertices_arc(d: &Digraph) -> BTreeSet<usize> {
    report(d)
        .vertices
        .iter()
        .filter(|r| r.classification == Classification::WeaklyExpanding)
        .map(|r| r.vertex)
        .collect()
}

/// Vertex-weighted Seymour vertices: `{v : eta(N1+(v)) <= eta(N2+(v))}`.
/// Only arc presence matters; arc weights are ignored.
pub fn seymour_vertices_vw(d: &Digraph, eta: &VertexWeighting) -> Result<BTreeSet<usize>> {
    eta.check_matches(d)?;
    let hoods = d.all_neighborhoods();
    Ok((0..d.n())
        .filter(|&v| eta.on_set(&hoods[v].first_out) <= eta.on_set(&hoods[v].second_out))
        .collect())
}

/// Unweighted Seymour vertices: `{v : |N1+(v)| <= |N2+(v)|}`.
pub fn seymour_vertices_unweighted(d: &Digraph) -> BTreeSet<usize> {
    d.all_neighborhoods()
        .iter()
        .enumerate()
        .filter(|(_, h)| h.first_out.len() <= h.second_out.len())
        .map(|(v, _)| v)
        .collect()
}

#[derive(Serialize)]
struct VertexRecord {
    vertex: usize,
    alpha: String,
    beta: String,
    delta: String,
    classification: &'static str,
    beta_terms: BTreeMap<usize, String>,
}

#[derive(Serialize)]
struct ReportDoc {
    vertices: Vec<VertexRecord>,
}

impl NeighborhoodReport {
    pub fn min_delta(&self) -> Option<&Rational> {
        self.vertices.iter().map(|r| &r.delta).min()
    }

    pub fn seymour_set(&self) -> BTreeSet<usize> {
        self.vertices
            .iter()
            .filter(|r| r.classification == Classification::WeaklyExpanding)
            .map(|r| r.vertex)
            .collect()
    }

    /// Machine-readable JSON document, vertices in ascending order.
    pub fn to_json(&self) -> String {
        let doc = ReportDoc {
            vertices: self
                .vertices
                .iter()
                .map(|r| VertexRecord {
                    vertex: r.vertex,
                    alpha: format_rational(&r.alpha),
                    beta: format_rational(&r.beta),
                    delta: format_rational(&r.delta),
                    classification: r.classification.as_str(),
                    beta_terms: r
                        .beta_terms
                        .iter()
                        .map(|(s, w)| (*s, format_rational(w)))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
    }

    /// Fixed-width table for terminal use.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str("vertex  alpha      beta       delta      classification\n");
        for r in &self.vertices {
            let terms = r
                .beta_terms
                .iter()
                .map(|(s, w)| format!("{}:{}", s, format_rational(w)))
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!(
                "{:<7} {:<10} {:<10} {:<10} {:<21} {}\n",
                r.vertex,
                format_rational(&r.alpha),
                format_rational(&r.beta),
                format_rational(&r.delta),
                r.classification.as_str(),
                terms,
            ));
        }
        out
    }
}
