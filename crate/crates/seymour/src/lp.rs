//! Exact rational linear feasibility, the expanding/contracting weighting
//! dichotomy, and losing densities.
//!
//! The solver is a dense phase-1 simplex over exact rationals with Bland's
//! anti-cycling rule, so it terminates on every input and its answers are
//! never approximate. A feasibility query returns either a nonnegative
//! solution of `Ax = b` or a Farkas vector `p` with `p^T A >= 0` and
//! `p^T b < 0`; both are re-checked exactly before they are returned.

use num::{One, Signed, Zero};

use crate::graph::{Digraph, VertexWeighting};
use crate::{Error, Rational, Result};

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

/// The feasibility system whose two Farkas alternatives are the expanding
/// and contracting vertex weightings of a digraph.
///
/// `n` is the neighborhood sign matrix: entry `(i, j)` is -1 when `j` is a
/// first out-neighbor of `i`, +1 when `j` is a second out-neighbor, else 0.
/// `a` is the block matrix `[[n, -I], [1..1, 0..0]]` over variables
/// `(x_1..x_n, s_1..s_n)` and `b = (0, .., 0, 1)`: a nonnegative solution is
/// a normalized weighting under which every vertex is weakly expanding, the
/// slack `s_i` holding the surplus at vertex `i`.
#[derive(Debug, Clone)]
pub struct FarkasSystem {
    pub n: Matrix,
    pub a: Matrix,
    pub b: Vec<Rational>,
}

/// Builds the dichotomy system from arc presence alone; weights are ignored.
pub fn build_farkas_system(d: &Digraph) -> FarkasSystem {
    let n = d.n();
    let hoods = d.all_neighborhoods();
    let mut nmat = Matrix::zeros(n, n);
    for (i, h) in hoods.iter().enumerate() {
        for &j in &h.first_out {
            *nmat.at_mut(i, j) = -Rational::one();
        }
        for &j in &h.second_out {
            *nmat.at_mut(i, j) = Rational::one();
        }
    }
    let mut a = Matrix::zeros(n + 1, 2 * n);
    for i in 0..n {
        for j in 0..n {
            *a.at_mut(i, j) = nmat.at(i, j).clone();
        }
        *a.at_mut(i, n + i) = -Rational::one();
    }
    for j in 0..n {
        *a.at_mut(n, j) = Rational::one();
    }
    let mut b = vec![Rational::zero(); n + 1];
    b[n] = Rational::one();
    FarkasSystem { n: nmat, a, b }
}

/// Outcome of an exact feasibility query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// `x >= 0` with `Ax = b`.
    Feasible(Vec<Rational>),
    /// `p` with `p^T A >= 0` and `p^T b < 0`.
    Infeasible(Vec<Rational>),
}

/// Decides `exists x >= 0 with Ax = b` exactly, returning a solution or a
/// Farkas infeasibility vector. Exactly one alternative is ever returned,
/// and it is verified against `a` and `b` before returning.
pub fn lp_feasible(a: &Matrix, b: &[Rational]) -> Result<LpOutcome> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows but rhs has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let m = a.rows();
    let nc = a.cols();
    let cols = nc + m; // structural columns then one artificial per row

    // Flip rows so the right-hand side is nonnegative, then start from the
    // all-artificial basis and minimize the artificial total.
    let flips: Vec<bool> = b.iter().map(|bi| bi.is_negative()).collect();
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(cols + 1);
            for j in 0..nc {
                let x = a.at(i, j).clone();
                row.push(if flips[i] { -x } else { x });
            }
            for k in 0..m {
                row.push(if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
            let bi = b[i].clone();
            row.push(if flips[i] { -bi } else { bi });
            row
        })
        .collect();
    let mut basis: Vec<usize> = (nc..cols).collect();
    // An artificial variable that leaves the basis never re-enters; Bland's
    // rule on the remaining columns still guarantees termination.
    let mut banned = vec![false; cols];

    // Reduced costs for min sum-of-artificials: r_j = c_j - sum_i t[i][j].
    let mut r: Vec<Rational> = (0..cols)
        .map(|j| {
            let mut s = Rational::zero();
            for row in &t {
                s += &row[j];
            }
            let c_j = if j >= nc {
                Rational::one()
            } else {
                Rational::zero()
            };
            c_j - s
        })
        .collect();

    loop {
        // Bland: entering column is the smallest eligible index.
        let Some(e) = (0..cols).find(|&j| !banned[j] && r[j].is_negative()) else {
            break;
        };
        // Ratio test; ties resolved toward the smallest basic variable.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &t[i][cols] / &t[i][e];
                let better = match (&best, leave) {
                    (None, _) => true,
                    (Some(b), Some(li)) => ratio < *b || (ratio == *b && basis[i] < basis[li]),
                    _ => unreachable!(),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(li) = leave else {
            // The artificial objective is bounded below by zero, so an
            // unbounded ray indicates a solver bug.
            return Err(Error::Internal("phase-1 simplex found no pivot row".into()));
        };

        let pivot = t[li][e].clone();
        for x in t[li].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..m {
            if i != li && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..=cols {
                    let delta = &f * &t[li][j];
                    t[i][j] -= delta;
                }
            }
        }
        if !r[e].is_zero() {
            let f = r[e].clone();
            for j in 0..cols {
                let delta = &f * &t[li][j];
                r[j] -= delta;
            }
        }
        if basis[li] >= nc {
            banned[basis[li]] = true;
        }
        basis[li] = e;
    }

    let residual: Rational = (0..m)
        .filter(|&i| basis[i] >= nc)
        .map(|i| t[i][cols].clone())
        .sum();

    if residual.is_zero() {
        let mut x = vec![Rational::zero(); nc];
        for i in 0..m {
            if basis[i] < nc {
                x[basis[i]] = t[i][cols].clone();
            }
        }
        if x.iter().any(|xi| xi.is_negative()) {
            return Err(Error::Internal("simplex produced a negative basic value".into()));
        }
        for i in 0..m {
            let mut s = Rational::zero();
            for j in 0..nc {
                s += a.at(i, j) * &x[j];
            }
            if s != b[i] {
                return Err(Error::Internal(format!(
                    "feasible solution failed recheck at row {i}"
                )));
            }
        }
        Ok(LpOutcome::Feasible(x))
    } else {
        // The dual row sits under the artificial columns: the final reduced
        // cost there is 1 - p_i, so p_i = r[nc + i] - 1 after negation, with
        // row flips undone.
        let mut p = Vec::with_capacity(m);
        for i in 0..m {
            let q = r[nc + i].clone() - Rational::one();
            p.push(if flips[i] { -q } else { q });
        }
        for j in 0..nc {
            let mut s = Rational::zero();
            for (i, pi) in p.iter().enumerate() {
                s += pi * a.at(i, j);
            }
            if s.is_negative() {
                return Err(Error::Internal(format!(
                    "Farkas vector failed recheck at column {j}"
                )));
            }
        }
        let pb: Rational = p.iter().zip(b).map(|(pi, bi)| pi * bi).sum();
        if !pb.is_negative() {
            return Err(Error::Internal("Farkas vector has nonnegative p^T b".into()));
        }
        Ok(LpOutcome::Infeasible(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertVariant {
    /// A weighting of the digraph itself under which every vertex is weakly
    /// expanding; normalized to total weight one.
    Expanding,
    /// A weighting interpreted on the reverse digraph under which every
    /// vertex is strongly contracting; normalized to total weight one.
    Contracting,
}

/// One side of the Farkas dichotomy, with the witnessing weighting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub variant: CertVariant,
    pub weighting: VertexWeighting,
}

/// Vertices violating the certificate's claimed inequality, checked exactly
/// (on the digraph for expanding, on its reverse for contracting). Empty
/// means every per-vertex inequality holds.
pub fn certificate_violations(d: &Digraph, cert: &FarkasCertificate) -> Result<Vec<usize>> {
    cert.weighting.check_matches(d)?;
    let eta = &cert.weighting;
    let violations = match cert.variant {
        CertVariant::Expanding => d
            .all_neighborhoods()
            .iter()
            .enumerate()
            .filter(|(_, h)| eta.on_set(&h.first_out) > eta.on_set(&h.second_out))
            .map(|(v, _)| v)
            .collect(),
        CertVariant::Contracting => d
            .reverse()
            .all_neighborhoods()
            .iter()
            .enumerate()
            .filter(|(_, h)| eta.on_set(&h.first_out) <= eta.on_set(&h.second_out))
            .map(|(v, _)| v)
            .collect(),
    };
    Ok(violations)
}

/// True when the certificate verifies: no per-vertex violation and a
/// nontrivial (not identically zero) weighting.
pub fn verify_certificate(d: &Digraph, cert: &FarkasCertificate) -> Result<bool> {
    Ok(certificate_violations(d, cert)?.is_empty() && cert.weighting.total().is_positive())
}

/// Decides which side of the dichotomy holds: either a weighting of `d`
/// making every vertex weakly expanding, or a weighting making every vertex
/// of the reverse strongly contracting. Exactly one exists for every
/// digraph. Depends only on arc presence; weights are ignored. The returned
/// certificate has been verified exactly.
pub fn dichotomy(d: &Digraph) -> Result<FarkasCertificate> {
    let sys = build_farkas_system(d);
    let n = d.n();
    let cert = match lp_feasible(&sys.a, &sys.b)? {
        LpOutcome::Feasible(x) => FarkasCertificate {
            variant: CertVariant::Expanding,
            weighting: VertexWeighting::new(x[..n].to_vec())
                .map_err(|e| Error::Internal(format!("negative expanding weight: {e}")))?,
        },
        LpOutcome::Infeasible(p) => {
            let weights: Vec<Rational> = p[..n].iter().map(|pi| -pi.clone()).collect();
            if weights.iter().any(|w| w.is_negative()) {
                return Err(Error::Internal(
                    "contracting weights from Farkas vector are not nonnegative".into(),
                ));
            }
            let total: Rational = weights.iter().sum();
            if !total.is_positive() {
                return Err(Error::Internal("contracting weighting is trivial".into()));
            }
            FarkasCertificate {
                variant: CertVariant::Contracting,
                weighting: VertexWeighting::new(
                    weights.into_iter().map(|w| w / &total).collect(),
                )?,
            }
        }
    };
    if !verify_certificate(d, &cert)? {
        return Err(Error::Internal(
            "dichotomy certificate failed exact verification".into(),
        ));
    }
    Ok(cert)
}

/// Vertices violating the losing-density inequality for `ell`, i.e. where
/// the (weighted) in-neighbor mass exceeds the out-neighbor mass.
pub fn losing_density_violations(
    d: &Digraph,
    ell: &VertexWeighting,
    arc_weighted: bool,
) -> Result<Vec<usize>> {
    ell.check_matches(d)?;
    let (out, inc) = d.adjacency();
    let mut bad = Vec::new();
    for v in 0..d.n() {
        let coeff = |a: usize, b: usize| {
            if arc_weighted {
                d.weight_or_zero(a, b)
            } else {
                Rational::one()
            }
        };
        let in_mass: Rational = inc[v].iter().map(|&x| coeff(x, v) * ell.get(x)).sum();
        let out_mass: Rational = out[v].iter().map(|&y| coeff(v, y) * ell.get(y)).sum();
        if in_mass > out_mass {
            bad.push(v);
        }
    }
    Ok(bad)
}

fn losing_density_system(d: &Digraph, arc_weighted: bool) -> (Matrix, Vec<Rational>) {
    let n = d.n();
    // Row v: sum_{x -> v} c(xv) ell(x) - sum_{v -> y} c(vy) ell(y) + s_v = 0,
    // plus the normalization row sum ell = 1.
    let mut a = Matrix::zeros(n + 1, 2 * n);
    for (u, v, w) in d.arcs() {
        let c = if arc_weighted { w.clone() } else { Rational::one() };
        *a.at_mut(v, u) += &c;
        *a.at_mut(u, v) -= &c;
    }
    for i in 0..n {
        *a.at_mut(i, n + i) = Rational::one();
    }
    for j in 0..n {
        *a.at_mut(n, j) = Rational::one();
    }
    let mut b = vec![Rational::zero(); n + 1];
    b[n] = Rational::one();
    (a, b)
}

/// A losing density of the unweighted structure: a probability distribution
/// on the vertices placing at least as much mass on every vertex's
/// out-neighbors as on its in-neighbors. One exists for every digraph, so
/// infeasibility is reported as an internal error.
pub fn losing_density(d: &Digraph) -> Result<VertexWeighting> {
    let (a, b) = losing_density_system(d, false);
    match lp_feasible(&a, &b)? {
        LpOutcome::Feasible(x) => {
            let ell = VertexWeighting::new(x[..d.n()].to_vec())?;
            if !losing_density_violations(d, &ell, false)?.is_empty() {
                return Err(Error::Internal("losing density failed recheck".into()));
            }
            Ok(ell)
        }
        LpOutcome::Infeasible(_) => Err(Error::Internal(
            "no losing density found; one must exist for every digraph".into(),
        )),
    }
}

/// Outcome of the arc-weighted losing-density query. Unlike the unweighted
/// case, feasibility is not guaranteed, so infeasibility is a legitimate
/// result (and a reportable discovery).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LdOutcome {
    Density(VertexWeighting),
    Infeasible,
}

/// Arc-weighted losing density: `sum_{xv} w(xv) ell(x) <= sum_{vy} w(vy)
/// ell(y)` for every `v`, with `ell` a probability distribution. The
/// returned density is verified exactly.
pub fn arc_weighted_losing_density(d: &Digraph) -> Result<LdOutcome> {
    let (a, b) = losing_density_system(d, true);
    match lp_feasible(&a, &b)? {
        LpOutcome::Feasible(x) => {
            let ell = VertexWeighting::new(x[..d.n()].to_vec())?;
            if !losing_density_violations(d, &ell, true)?.is_empty() {
                return Err(Error::Internal(
                    "arc-weighted losing density failed recheck".into(),
                ));
            }
            Ok(LdOutcome::Density(ell))
        }
        LpOutcome::Infeasible(_) => Ok(LdOutcome::Infeasible),
    }
}

/// Vertices of the reverse digraph that are not weakly expanding under
/// `ell` taken as a vertex weighting. Nonempty output on a feasible
/// arc-weighted losing density is the searched-for failure mode.
pub fn ld_reverse_violations(d: &Digraph, ell: &VertexWeighting) -> Result<Vec<usize>> {
    ell.check_matches(d)?;
    let rev = d.reverse();
    Ok(rev
        .all_neighborhoods()
        .iter()
        .enumerate()
        .filter(|(_, h)| ell.on_set(&h.first_out) > ell.on_set(&h.second_out))
        .map(|(v, _)| v)
        .collect())
}
