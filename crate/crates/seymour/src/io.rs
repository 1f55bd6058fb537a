//! Instance and certificate file formats.
//!
//! Instance files are line-oriented UTF-8; `#` starts a comment that runs to
//! the end of the line and blank lines are ignored:
//!
//! ```text
//! digraph <n>           # header, n >= 1
//! arc <u> <v> <w>       # arc with nonnegative rational weight
//! vweight <v> <w>       # optional vertex weight (default 0)
//! ```
//!
//! Weights are `<p>` or `<p>/<q>` with `p >= 0` and `q >= 1` decimal
//! integers of arbitrary size. Serialization is canonical: weights in lowest
//! terms, arc lines sorted lexicographically, vertex weights sorted by
//! vertex, zero vertex weights omitted. Parsing a canonical serialization
//! reproduces the value bit-exactly.
//!
//! Certificate files carry a `variant expanding|contracting` line followed
//! by `w <v> <weight>` lines (missing vertices read as weight zero).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{BigInt, BigRational, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::graph::{Digraph, VertexWeighting};
use crate::lp::{CertVariant, FarkasCertificate};
use crate::{format_rational, Error, Rational, Result};

/// A parsed instance file: the digraph plus its optional vertex weighting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Digraph,
    pub weighting: Option<VertexWeighting>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a rational weight token: `p` or `p/q`.
pub fn parse_weight(token: &str, line: usize) -> Result<Rational> {
    let (p_str, q_str) = match token.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (token, None),
    };
    let p: BigInt = p_str
        .parse()
        .map_err(|_| parse_err(line, format!("malformed weight `{token}`")))?;
    if p.is_negative() {
        return Err(parse_err(line, format!("negative weight `{token}`")));
    }
    let q: BigInt = match q_str {
        Some(q) => q
            .parse()
            .map_err(|_| parse_err(line, format!("malformed weight `{token}`")))?,
        None => BigInt::from(1),
    };
    if q < BigInt::from(1) {
        return Err(parse_err(
            line,
            format!("weight denominator must be >= 1 in `{token}`"),
        ));
    }
    Ok(BigRational::new(p, q))
}

fn parse_index(token: &str, line: usize, n: usize) -> Result<usize> {
    let v: usize = token
        .parse()
        .map_err(|_| parse_err(line, format!("malformed vertex index `{token}`")))?;
    if v >= n {
        return Err(parse_err(
            line,
            format!("vertex index {v} out of range (n = {n})"),
        ));
    }
    Ok(v)
}

/// Parses an instance file. Reports the first error with its line number.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut n: Option<usize> = None;
    let mut arcs: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    let mut vweights: BTreeMap<usize, Rational> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match (n, tokens.as_slice()) {
            (None, ["digraph", n_str]) => {
                let parsed: usize = n_str
                    .parse()
                    .map_err(|_| parse_err(line, format!("malformed vertex count `{n_str}`")))?;
                if parsed == 0 {
                    return Err(parse_err(line, "vertex count must be >= 1"));
                }
                n = Some(parsed);
            }
            (None, _) => {
                return Err(parse_err(line, "expected `digraph <n>` header"));
            }
            (Some(_), ["digraph", ..]) => {
                return Err(parse_err(line, "duplicate `digraph` header"));
            }
            (Some(n), ["arc", u_str, v_str, w_str]) => {
                let u = parse_index(u_str, line, n)?;
                let v = parse_index(v_str, line, n)?;
                let w = parse_weight(w_str, line)?;
                if u == v {
                    return Err(parse_err(line, format!("loop arc at vertex {u}")));
                }
                if arcs.contains_key(&(v, u)) {
                    return Err(parse_err(
                        line,
                        format!("two-cycle between {u} and {v}"),
                    ));
                }
                if arcs.insert((u, v), w).is_some() {
                    return Err(parse_err(line, format!("duplicate arc {u} -> {v}")));
                }
            }
            (Some(n), ["vweight", v_str, w_str]) => {
                let v = parse_index(v_str, line, n)?;
                let w = parse_weight(w_str, line)?;
                if vweights.insert(v, w).is_some() {
                    return Err(parse_err(line, format!("duplicate vweight for vertex {v}")));
                }
            }
            (Some(_), [kw, ..]) => {
                return Err(parse_err(line, format!("unknown directive `{kw}`")));
            }
            (Some(_), []) => unreachable!("blank lines are skipped"),
        }
    }

    let n = n.ok_or_else(|| parse_err(text.lines().count().max(1), "missing `digraph` header"))?;
    let graph = Digraph::from_arcs(n, arcs.into_iter().map(|((u, v), w)| (u, v, w)))?;
    let weighting = if vweights.is_empty() {
        None
    } else {
        let mut weights = vec![Rational::zero(); n];
        for (v, w) in vweights {
            weights[v] = w;
        }
        Some(VertexWeighting::new(weights)?)
    };
    Ok(Instance { graph, weighting })
}

/// Parses just the digraph, ignoring any vertex-weight lines.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    Ok(parse_instance(text)?.graph)
}

/// Canonical serialization: header, sorted arc lines, then sorted nonzero
/// vertex-weight lines. Parsing the output reproduces the input exactly.
pub fn serialize_instance(graph: &Digraph, weighting: Option<&VertexWeighting>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {}", graph.n()).unwrap();
    for (u, v, w) in graph.arcs() {
        writeln!(out, "arc {} {} {}", u, v, format_rational(w)).unwrap();
    }
    if let Some(eta) = weighting {
        for v in 0..eta.len() {
            if !eta.get(v).is_zero() {
                writeln!(out, "vweight {} {}", v, format_rational(eta.get(v))).unwrap();
            }
        }
    }
    out
}

pub fn serialize_digraph(graph: &Digraph) -> String {
    serialize_instance(graph, None)
}

/// Hex SHA-256 of the canonical serialization; used to name persisted
/// instances content-addressably.
pub fn digest(graph: &Digraph) -> String {
    let text = serialize_digraph(graph);
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Short digest prefix for filenames.
pub fn short_digest(graph: &Digraph) -> String {
    digest(graph)[..16].to_string()
}

/// Reads a vertex weighting from an instance file whose header must match
/// `n`. Vertices without a `vweight` line weigh zero.
pub fn parse_weighting_file(text: &str, n: usize) -> Result<VertexWeighting> {
    let inst = parse_instance(text)?;
    if inst.graph.n() != n {
        return Err(Error::WeightingMismatch {
            len: inst.graph.n(),
            n,
        });
    }
    Ok(inst.weighting.unwrap_or_else(|| VertexWeighting::zeros(n)))
}

/// Serializes a Farkas certificate.
pub fn serialize_certificate(cert: &FarkasCertificate) -> String {
    let mut out = String::new();
    let variant = match cert.variant {
        CertVariant::Expanding => "expanding",
        CertVariant::Contracting => "contracting",
    };
    writeln!(out, "variant {variant}").unwrap();
    for v in 0..cert.weighting.len() {
        writeln!(out, "w {} {}", v, format_rational(cert.weighting.get(v))).unwrap();
    }
    out
}

/// Parses a certificate file for a digraph on `n` vertices.
pub fn parse_certificate(text: &str, n: usize) -> Result<FarkasCertificate> {
    let mut variant: Option<CertVariant> = None;
    let mut weights = vec![Rational::zero(); n];
    let mut seen = vec![false; n];

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match (variant, tokens.as_slice()) {
            (None, ["variant", kind]) => {
                variant = Some(match *kind {
                    "expanding" => CertVariant::Expanding,
                    "contracting" => CertVariant::Contracting,
                    other => {
                        return Err(parse_err(line, format!("unknown variant `{other}`")))
                    }
                });
            }
            (None, _) => {
                return Err(parse_err(line, "expected `variant expanding|contracting`"));
            }
            (Some(_), ["w", v_str, w_str]) => {
                let v = parse_index(v_str, line, n)?;
                if seen[v] {
                    return Err(parse_err(line, format!("duplicate weight for vertex {v}")));
                }
                seen[v] = true;
                weights[v] = parse_weight(w_str, line)?;
            }
            (Some(_), [kw, ..]) => {
                return Err(parse_err(line, format!("unknown directive `{kw}`")));
            }
            (Some(_), []) => unreachable!("blank lines are skipped"),
        }
    }

    let variant = variant
        .ok_or_else(|| parse_err(text.lines().count().max(1), "missing `variant` line"))?;
    Ok(FarkasCertificate {
        variant,
        weighting: VertexWeighting::new(weights)?,
    })
}
