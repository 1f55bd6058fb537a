//! Instance generators, counterexample reductions, conjecture sweeps, and
//! the search loops that hunt for negative witnesses.
//!
//! Randomness comes exclusively from ChaCha8 seeded with the configured
//! 64-bit seed; trial `t` of a sweep or search reads stream `t` of that
//! seed, so every run is reproducible bit for bit and trials are
//! order-independent.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{Digraph, VertexWeighting};
use crate::io::{serialize_certificate, serialize_digraph, short_digest};
use crate::lp::{
    arc_weighted_losing_density, dichotomy, ld_reverse_violations, CertVariant,
    FarkasCertificate, LdOutcome,
};
use crate::order::{last_vertex_seymour_capped, LastVertexCheck, OrderMode};
use crate::report::{report, seymour_vertices_unweighted, seymour_vertices_vw};
use crate::transform::blowup;
use crate::{format_rational, rat, Error, Rational, Result};

/// How arc weights are drawn. Integer-uniform draws from `1..=max`; zero
/// weights appear only under the explicit `IntWithZeros` scheme, because a
/// zero arc is semantically different from a missing one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightScheme {
    Unit,
    IntUniform { max: u64 },
    RatUniform { bound: u64 },
    IntWithZeros { max: u64 },
}

impl WeightScheme {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Rational {
        match *self {
            WeightScheme::Unit => Rational::one(),
            WeightScheme::IntUniform { max } => {
                Rational::from_integer(BigInt::from(rng.gen_range(1..=max)))
            }
            WeightScheme::RatUniform { bound } => {
                let numer = rng.gen_range(1..=bound);
                let denom = rng.gen_range(1..=bound);
                Rational::new(BigInt::from(numer), BigInt::from(denom))
            }
            WeightScheme::IntWithZeros { max } => {
                Rational::from_integer(BigInt::from(rng.gen_range(0..=max)))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            WeightScheme::Unit => true,
            WeightScheme::IntUniform { max } | WeightScheme::IntWithZeros { max } => max >= 1,
            WeightScheme::RatUniform { bound } => bound >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition("weight scheme bound must be >= 1".into()))
        }
    }
}

impl std::fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            WeightScheme::Unit => write!(f, "unit"),
            WeightScheme::IntUniform { max } => write!(f, "int:{max}"),
            WeightScheme::RatUniform { bound } => write!(f, "rat:{bound}"),
            WeightScheme::IntWithZeros { max } => write!(f, "zint:{max}"),
        }
    }
}

impl std::str::FromStr for WeightScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse_bound = |v: &str| -> std::result::Result<u64, String> {
            let b: u64 = v
                .parse()
                .map_err(|_| format!("malformed weight-scheme bound `{v}`"))?;
            if b == 0 {
                return Err("weight-scheme bound must be >= 1".into());
            }
            Ok(b)
        };
        match s.split_once(':') {
            None if s == "unit" => Ok(WeightScheme::Unit),
            Some(("int", v)) => Ok(WeightScheme::IntUniform { max: parse_bound(v)? }),
            Some(("rat", v)) => Ok(WeightScheme::RatUniform { bound: parse_bound(v)? }),
            Some(("zint", v)) => Ok(WeightScheme::IntWithZeros { max: parse_bound(v)? }),
            _ => Err(format!(
                "unknown weight scheme `{s}` (expected unit, int:M, rat:Q, or zint:M)"
            )),
        }
    }
}

/// Random tournament: every pair oriented by a fair coin, weights per
/// scheme. Deterministic in `seed`.
pub fn generate_tournament(n: usize, scheme: &WeightScheme, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            let forward = rng.gen::<u64>() & 1 == 0;
            let w = scheme.draw(&mut rng);
            arcs.push(if forward { (u, v, w) } else { (v, u, w) });
        }
    }
    Digraph::from_arcs(n, arcs).expect("pairwise construction is valid")
}

/// Random digraph: each unordered pair carries an arc with probability `p`
/// (resolution 2^-64), directed by a fair coin; two-cycles are impossible by
/// construction.
pub fn generate_digraph(
    n: usize,
    p: &Rational,
    scheme: &WeightScheme,
    seed: u64,
) -> Result<Digraph> {
    if p.is_negative() || p > &Rational::one() {
        return Err(Error::Precondition(format!(
            "arc probability {} outside [0, 1]",
            format_rational(p)
        )));
    }
    let threshold: u128 = {
        let scaled: BigInt = (p.numer() * (BigInt::one() << 64)) / p.denom();
        scaled.to_u128().unwrap_or(u128::MAX).min(1u128 << 64)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let present = (rng.gen::<u64>() as u128) < threshold;
            let forward = rng.gen::<u64>() & 1 == 0;
            if present {
                let w = scheme.draw(&mut rng);
                arcs.push(if forward { (u, v, w) } else { (v, u, w) });
            }
        }
    }
    Digraph::from_arcs(n, arcs)
}

/// Random union of directed triangles: a digraph in which every arc lies in
/// a directed triangle by construction.
pub fn generate_triangle_full(n: usize, attempts: usize, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for _ in 0..attempts {
        if n < 3 {
            break;
        }
        let mut tri = [0usize; 3];
        tri[0] = rng.gen_range(0..n);
        loop {
            tri[1] = rng.gen_range(0..n);
            if tri[1] != tri[0] {
                break;
            }
        }
        loop {
            tri[2] = rng.gen_range(0..n);
            if tri[2] != tri[0] && tri[2] != tri[1] {
                break;
            }
        }
        let cycle = [
            (tri[0], tri[1]),
            (tri[1], tri[2]),
            (tri[2], tri[0]),
        ];
        // Add the triangle only when no arc conflicts with an existing one.
        let ok = cycle
            .iter()
            .all(|&(a, b)| !arcs.contains_key(&(b, a)));
        if ok {
            for (a, b) in cycle {
                arcs.entry((a, b)).or_insert_with(Rational::one);
            }
        }
    }
    Digraph::from_arcs(n, arcs.into_iter().map(|((u, v), w)| (u, v, w)))
        .expect("triangle union is valid")
}

/// Random nonnegative rational vertex weighting with numerators in
/// `0..=max_num` and denominators in `1..=max_den`.
pub fn random_weighting(n: usize, max_num: u64, max_den: u64, seed: u64) -> VertexWeighting {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    VertexWeighting::new(
        (0..n)
            .map(|_| {
                Rational::new(
                    BigInt::from(rng.gen_range(0..=max_num)),
                    BigInt::from(rng.gen_range(1..=max_den)),
                )
            })
            .collect(),
    )
    .expect("nonnegative by construction")
}

/// Scales arc weights down by `epsilon * eta_star(head)` on every
/// positive-weight arc, where `epsilon` is the largest value keeping all
/// weights nonnegative. At least one previously positive arc becomes exactly
/// zero; zero arcs are left untouched (they stay present).
pub fn epsilon_reduce(d: &Digraph, eta_star: &VertexWeighting) -> Result<Digraph> {
    eta_star.check_matches(d)?;
    let mut epsilon: Option<Rational> = None;
    for (_, v, w) in d.arcs() {
        if w.is_positive() && eta_star.get(v).is_positive() {
            let ratio = w / eta_star.get(v);
            if epsilon.as_ref().map_or(true, |e| ratio < *e) {
                epsilon = Some(ratio);
            }
        }
    }
    let epsilon = epsilon.ok_or_else(|| {
        Error::Precondition(
            "no arc has positive weight and positive head weight; epsilon is undefined".into(),
        )
    })?;
    let mut hit_zero = false;
    let mut arcs = Vec::with_capacity(d.arc_count());
    for (u, v, w) in d.arcs() {
        let new = if w.is_positive() {
            w - &epsilon * eta_star.get(v)
        } else {
            Rational::zero()
        };
        if new.is_negative() {
            return Err(Error::Internal("epsilon reduction produced a negative weight".into()));
        }
        if w.is_positive() && new.is_zero() {
            hit_zero = true;
        }
        arcs.push((u, v, new));
    }
    if !hit_zero {
        return Err(Error::Internal("epsilon reduction zeroed no arc".into()));
    }
    Digraph::from_arcs(d.n(), arcs)
}

/// One algebraic reduction step: `t` is the least ratio `eta(v)/eta_plus(v)`
/// over vertices with positive `eta_plus`, and the reduced weighting is
/// `eta - t * eta_plus`, which is nonnegative and has at least one zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub t: Rational,
    pub reduced: VertexWeighting,
    pub zeros: Vec<usize>,
}

pub fn reduction_step(
    eta: &VertexWeighting,
    eta_plus: &VertexWeighting,
) -> Result<ReductionStep> {
    if eta.len() != eta_plus.len() {
        return Err(Error::WeightingMismatch {
            len: eta_plus.len(),
            n: eta.len(),
        });
    }
    let mut t: Option<Rational> = None;
    for v in 0..eta.len() {
        if eta_plus.get(v).is_positive() {
            let ratio = eta.get(v) / eta_plus.get(v);
            if t.as_ref().map_or(true, |best| ratio < *best) {
                t = Some(ratio);
            }
        }
    }
    let t = t.ok_or_else(|| {
        Error::Precondition("eta-plus is identically zero; no reduction possible".into())
    })?;
    let mut reduced = Vec::with_capacity(eta.len());
    let mut zeros = Vec::new();
    for v in 0..eta.len() {
        let w = eta.get(v) - &t * eta_plus.get(v);
        if w.is_negative() {
            return Err(Error::Internal("reduction produced a negative weight".into()));
        }
        if w.is_zero() {
            zeros.push(v);
        }
        reduced.push(w);
    }
    if zeros.is_empty() {
        return Err(Error::Internal("reduction reached no zero weight".into()));
    }
    Ok(ReductionStep {
        t,
        reduced: VertexWeighting::new(reduced)?,
        zeros,
    })
}

/// Shrinks a vertex-weighted counterexample: given `eta` making every
/// vertex strongly contracting and `eta_plus` making every vertex weakly
/// expanding, subtracts `t * eta_plus`, verifies strong contraction
/// survived, deletes the zero-weight vertices, and re-verifies the smaller
/// instance. Verification failures are reported as errorsrather than
/// silently trusted.
pub fn reduce_counterexample(
    d: &Digraph,
    eta: &VertexWeighting,
    eta_plus: &VertexWeighting,
) -> Result<(Digraph, VertexWeighting, Vec<Option<usize>>)> {
    eta.check_matches(d)?;
    eta_plus.check_matches(d)?;
    let expanding_under_eta = seymour_vertices_vw(d, eta)?;
    if !expanding_under_eta.is_empty() {
        return Err(Error::Precondition(format!(
            "eta is not strongly contracting at vertices {expanding_under_eta:?}"
        )));
    }
    let expanding_under_plus = seymour_vertices_vw(d, eta_plus)?;
    if expanding_under_plus.len() != d.n() {
        let bad: Vec<usize> = (0..d.n())
            .filter(|v| !expanding_under_plus.contains(v))
            .collect();
        return Err(Error::Precondition(format!(
            "eta-plus is not weakly expanding at vertices {bad:?}"
        )));
    }

    let step = reduction_step(eta, eta_plus)?;
    let still_expanding = seymour_vertices_vw(d, &step.reduced)?;
    if !still_expanding.is_empty() {
        return Err(Error::Verification(format!(
            "reduced weighting lost strong contraction at vertices {still_expanding:?}"
        )));
    }

    let keep: Vec<usize> = (0..d.n())
        .filter(|&v| step.reduced.get(v).is_positive())
        .collect();
    let (sub, old_to_new) = d.induced(&keep);
    let eta_sub = VertexWeighting::new(
        keep.iter().map(|&v| step.reduced.get(v).clone()).collect(),
    )?;
    let surviving_expanding = seymour_vertices_vw(&sub, &eta_sub)?;
    if !surviving_expanding.is_empty() {
        return Err(Error::Verification(format!(
            "post-deletion instance is not a counterexample: weakly expanding at {surviving_expanding:?}"
        )));
    }
    Ok((sub, eta_sub, old_to_new))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GeneratorKind {
    Tournament,
    Digraph,
}

impl GeneratorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::Tournament => "tournament",
            GeneratorKind::Digraph => "digraph",
        }
    }
}

/// Full description of a sweep; two identical configs produce byte-identical
/// reports.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub kind: GeneratorKind,
    pub n_min: usize,
    pub n_max: usize,
    /// Arc probability; only consulted for `GeneratorKind::Digraph`.
    pub arc_probability: Rational,
    pub scheme: WeightScheme,
    pub trials: u64,
    pub seed: u64,
    pub check_median_order: bool,
    pub check_ld_reverse: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 1 || self.n_min > self.n_max {
            return Err(Error::Precondition(format!(
                "invalid vertex range {}..{}",
                self.n_min, self.n_max
            )));
        }
        if self.trials < 1 {
            return Err(Error::Precondition("trial count must be >= 1".into()));
        }
        if self.arc_probability.is_negative() || self.arc_probability > Rational::one() {
            return Err(Error::Precondition("arc probability outside [0, 1]".into()));
        }
        self.scheme.validate()
    }
}

/// Special events a sweep can flag. Any flag makes the run a discovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Flag {
    EmptySeymourArc,
    EmptySeymourUnweighted,
    LastVertexNotSeymour,
    LdReverseViolation,
    LdInfeasible,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::EmptySeymourArc => "empty-seymour-arc",
            Flag::EmptySeymourUnweighted => "empty-seymour-unweighted",
            Flag::LastVertexNotSeymour => "last-vertex-not-seymour",
            Flag::LdReverseViolation => "ld-reverse-violation",
            Flag::LdInfeasible => "ld-infeasible",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub n: usize,
    pub digest: String,
    pub seymour_arc: usize,
    pub seymour_unweighted: usize,
    pub min_delta: String,
    pub dichotomy: String,
    pub last_vertex_seymour: Option<bool>,
    pub ld_reverse: Option<String>,
    pub flags: Vec<String>,
}

/// A flagged instance, kept in memory so the caller can persist it.
#[derive(Debug, Clone)]
pub struct FlaggedInstance {
    pub trial: u64,
    pub flag: Flag,
    pub graph: Digraph,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub records: Vec<TrialRecord>,
    pub flagged: Vec<FlaggedInstance>,
}

#[derive(Serialize)]
struct ConfigDoc {
    kind: &'static str,
    n_min: usize,
    n_max: usize,
    arc_probability: String,
    weights: String,
    trials: u64,
    seed: u64,
    checks: Vec<&'static str>,
    generator: &'static str,
}

#[derive(Serialize)]
struct AggregateDoc {
    trials: u64,
    flagged_trials: usize,
    flag_counts: BTreeMap<String, usize>,
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    config: ConfigDoc,
    trials: &'a [TrialRecord],
    aggregate: AggregateDoc,
}

impl SweepReport {
    pub fn flag_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for f in &self.flagged {
            *counts.entry(f.flag.as_str().to_string()).or_insert(0) += 1;
        }
        counts
    }

    pub fn has_flags(&self) -> bool {
        !self.flagged.is_empty()
    }

    /// Deterministic JSON rendering; identical configs yield identical
    /// bytes.
    pub fn to_json(&self) -> String {
        let mut checks = Vec::new();
        if self.config.check_median_order {
            checks.push("median-order");
        }
        if self.config.check_ld_reverse {
            checks.push("ld-reverse");
        }
        let flagged_trials: BTreeSet<u64> = self.flagged.iter().map(|f| f.trial).collect();
        let doc = SweepDoc {
            config: ConfigDoc {
                kind: self.config.kind.as_str(),
                n_min: self.config.n_min,
                n_max: self.config.n_max,
                arc_probability: format_rational(&self.config.arc_probability),
                weights: self.config.scheme.to_string(),
                trials: self.config.trials,
                seed: self.config.seed,
                checks,
                generator: "chacha8/stream-per-trial",
            },
            trials: &self.records,
            aggregate: AggregateDoc {
                trials: self.config.trials,
                flagged_trials: flagged_trials.len(),
                flag_counts: self.flag_counts(),
            },
        };
        serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
    }
}

/// Runs a sweep: per trial, generate an instance, compute the full report,
/// both Seymour sets, and the dichotomy, plus the optional median-order and
/// losing-density-reverse checks; flag and record any special event.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.trials as usize);
    let mut flagged = Vec::new();

    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial);
        let n = rng.gen_range(config.n_min..=config.n_max);
        let instance_seed = rng.gen::<u64>();
        let d = match config.kind {
            GeneratorKind::Tournament => generate_tournament(n, &config.scheme, instance_seed),
            GeneratorKind::Digraph => {
                generate_digraph(n, &config.arc_probability, &config.scheme, instance_seed)?
            }
        };

        let rep = report(&d);
        let seymour_arc = rep.seymour_set();
        let seymour_unweighted = seymour_vertices_unweighted(&d);
        let cert = dichotomy(&d)?;
        let mut flags: Vec<Flag> = Vec::new();

        if seymour_arc.is_empty() {
            flags.push(Flag::EmptySeymourArc);
        }
        if seymour_unweighted.is_empty() {
            flags.push(Flag::EmptySeymourUnweighted);
        }

        let last_vertex_seymour = if config.check_median_order {
            let mode = if config.scheme == WeightScheme::Unit {
                OrderMode::Count
            } else {
                OrderMode::Weight
            };
            let check = last_vertex_seymour_capped(&d, mode, 20)?;
            if !check.seymour {
                flags.push(Flag::LastVertexNotSeymour);
            }
            Some(check.seymour)
        } else {
            None
        };

        let ld_reverse = if config.check_ld_reverse {
            match arc_weighted_losing_density(&d)? {
                LdOutcome::Density(ell) => {
                    let violations = ld_reverse_violations(&d, &ell)?;
                    if violations.is_empty() {
                        Some("ok".to_string())
                    } else {
                        flags.push(Flag::LdReverseViolation);
                        Some(format!("violation at {violations:?}"))
                    }
                }
                LdOutcome::Infeasible => {
                    flags.push(Flag::LdInfeasible);
                    Some("infeasible".to_string())
                }
            }
        } else {
            None
        };

        for &flag in &flags {
            flagged.push(FlaggedInstance {
                trial,
                flag,
                graph: d.clone(),
            });
        }
        records.push(TrialRecord {
            trial,
            n,
            digest: short_digest(&d),
            seymour_arc: seymour_arc.len(),
            seymour_unweighted: seymour_unweighted.len(),
            min_delta: rep
                .min_delta()
                .map(format_rational)
                .unwrap_or_else(|| "0".to_string()),
            dichotomy: match cert.variant {
                CertVariant::Expanding => "expanding".to_string(),
                CertVariant::Contracting => "contracting".to_string(),
            },
            last_vertex_seymour,
            ld_reverse,
            flags: flags.iter().map(|f| f.as_str().to_string()).collect(),
        });
    }

    Ok(SweepReport {
        config: config.clone(),
        records,
        flagged,
    })
}

/// Writes every flagged instance as a canonical instance file named by flag
/// kind and content digest. Losing-density violations additionally get the
/// reversed instance and the density as an expanding certificate of the
/// reverse, so `verify` replays the violation directly.
pub fn persist_flagged(report: &SweepReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    std::fs::create_dir_all(dir)?;
    for f in &report.flagged {
        let stem = format!("flag-{}-{}", f.flag.as_str(), short_digest(&f.graph));
        let path = dir.join(format!("{stem}.dg"));
        std::fs::write(&path, serialize_digraph(&f.graph))?;
        written.push(path);
        if f.flag == Flag::LdReverseViolation {
            if let LdOutcome::Density(ell) = arc_weighted_losing_density(&f.graph)? {
                let rev_path = dir.join(format!("{stem}.rev.dg"));
                std::fs::write(&rev_path, serialize_digraph(&f.graph.reverse()))?;
                written.push(rev_path);
                let cert = FarkasCertificate {
                    variant: CertVariant::Expanding,
                    weighting: ell,
                };
                let cert_path = dir.join(format!("{stem}.cert"));
                std::fs::write(&cert_path, serialize_certificate(&cert))?;
                written.push(cert_path);
            }
        }
    }
    Ok(written)
}

/// Witness that a weighted median order can end on a non-Seymour vertex.
#[derive(Debug, Clone)]
pub struct MedianWitness {
    pub graph: Digraph,
    pub check: LastVertexCheck,
}

/// Searches blow-up tournaments (even trials) and random tournaments with
/// zero-including integer weights (odd trials) for an instance whose
/// weight-mode median order ends on a strongly contracting vertex. The
/// returned witness has been re-verified against a fresh report.
pub fn search_last_vertex_failure(seed: u64, max_trials: u64) -> Result<Option<MedianWitness>> {
    for trial in 0..max_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let d = if trial % 2 == 0 {
            let k = rng.gen_range(3..=5usize);
            let base = generate_tournament(k, &WeightScheme::Unit, rng.gen());
            let sizes =
                VertexWeighting::new((0..k).map(|_| rat(rng.gen_range(1..=3), 1)).collect())?;
            let b = blowup(&base, &sizes)?;
            if b.n() > 14 {
                continue;
            }
            b
        } else {
            let n = rng.gen_range(4..=8usize);
            generate_tournament(n, &WeightScheme::IntWithZeros { max: 3 }, rng.gen())
        };
        let check = last_vertex_seymour_capped(&d, OrderMode::Weight, 14)?;
        if !check.seymour {
            // Independent recheck before declaring a witness.
            let rep = report(&d);
            if rep.vertices[check.vertex].delta.is_negative() {
                return Ok(Some(MedianWitness { graph: d, check }));
            }
            return Err(Error::Internal(
                "median-order witness failed independent recheck".into(),
            ));
        }
    }
    Ok(None)
}

/// Witness that an arc-weighted losing density need not be weakly expanding
/// everywhere on the reverse digraph.
#[derive(Debug, Clone)]
pub struct LdReverseWitness {
    pub graph: Digraph,
    pub density: VertexWeighting,
    pub violations: Vec<usize>,
}

/// Searches random integer- and rational-weighted tournaments for a
/// feasible arc-weighted losing density that fails weak expansion somewhere
/// on the reverse.
pub fn search_ld_reverse_failure(seed: u64, max_trials: u64) -> Result<Option<LdReverseWitness>> {
    for trial in 0..max_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let n = rng.gen_range(3..=7usize);
        let scheme = if trial % 2 == 0 {
            WeightScheme::IntUniform { max: 5 }
        } else {
            WeightScheme::RatUniform { bound: 4 }
        };
        let d = generate_tournament(n, &scheme, rng.gen());
        if let LdOutcome::Density(ell) = arc_weighted_losing_density(&d)? {
            let violations = ld_reverse_violations(&d, &ell)?;
            if !violations.is_empty() {
                return Ok(Some(LdReverseWitness {
                    graph: d,
                    density: ell,
                    violations,
                }));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Exhaustive small tournaments
// ---------------------------------------------------------------------------

fn pair_index(n: usize, u: usize, v: usize) -> usize {
    // Lexicographic rank of the pair (u, v) with u < v.
    debug_assert!(u < v && v < n);
    let before: usize = (0..u).map(|i| n - 1 - i).sum();
    before + (v - u - 1)
}

fn tournament_from_mask(n: usize, mask: u16) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let bit = (mask >> pair_index(n, u, v)) & 1 == 1;
            arcs.push(if bit {
                (u, v, Rational::one())
            } else {
                (v, u, Rational::one())
            });
        }
    }
    Digraph::from_arcs(n, arcs).expect("mask construction is valid")
}

/// Every labeled unit-weight tournament on `n <= 5` vertices.
pub fn all_tournaments(n: usize) -> Vec<Digraph> {
    assert!(n >= 1 && n <= 5, "exhaustive enumeration is capped at n = 5");
    let pairs = n * (n - 1) / 2;
    (0..(1u32 << pairs))
        .map(|mask| tournament_from_mask(n, mask as u16))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), 0, &mut out);
    out
}

/// Canonical form of a tournament under relabeling: the minimum orientation
/// bitmask over all vertex permutations.
pub fn canonical_tournament_mask(d: &Digraph) -> u16 {
    let n = d.n();
    assert!(d.is_tournament() && n <= 5);
    permutations(n)
        .iter()
        .map(|perm| {
            let mut mask = 0u16;
            for (u, v, _) in d.arcs() {
                let (a, b) = (perm[u], perm[v]);
                if a < b {
                    mask |= 1 << pair_index(n, a, b);
                }
            }
            mask
        })
        .min()
        .expect("at least the identity permutation")
}

/// One representative per isomorphism class of tournaments on `n <= 5`
/// vertices, derived by brute-force canonical labeling.
pub fn tournament_classes(n: usize) -> Vec<Digraph> {
    let masks: BTreeSet<u16> = all_tournaments(n)
        .iter()
        .map(canonical_tournament_mask)
        .collect();
    masks
        .into_iter()
        .map(|m| tournament_from_mask(n, m))
        .collect()
}

/// The canonical masks of the 12 isomorphism classes of 5-vertex
/// tournaments, frozen as a regression corpus. `tournament_classes(5)` must
/// reproduce exactly this set.
pub const N5_CLASS_MASKS: [u16; 12] = [0, 2, 4, 5, 8, 9, 10, 11, 12, 40, 41, 76];

pub fn tournament_classes_n5() -> Vec<Digraph> {
    N5_CLASS_MASKS
        .iter()
        .map(|&m| tournament_from_mask(5, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::seymour_vertices_arc;

    #[test]
    fn tournament_generation_is_deterministic_and_valid() {
        let a = generate_tournament(6, &WeightScheme::IntUniform { max: 4 }, 7);
        let b = generate_tournament(6, &WeightScheme::IntUniform { max: 4 }, 7);
        assert_eq!(a, b);
        assert!(a.is_tournament());
        for (_, _, w) in a.arcs() {
            assert!(w.is_integer() && w.is_positive());
            assert!(*w <= rat(4, 1));
        }
        let c = generate_tournament(6, &WeightScheme::IntUniform { max: 4 }, 8);
        assert_ne!(a, c);

        assert_eq!(generate_tournament(1, &WeightScheme::Unit, 3).arc_count(), 0);
    }

    #[test]
    fn digraph_generation_respects_probability_extremes() {
        let none =
            generate_digraph(6, &Rational::zero(), &WeightScheme::Unit, 11).unwrap();
        assert_eq!(none.arc_count(), 0);
        let all = generate_digraph(6, &Rational::one(), &WeightScheme::Unit, 11).unwrap();
        assert!(all.is_tournament());
        assert!(generate_digraph(3, &rat(3, 2), &WeightScheme::Unit, 1).is_err());
    }

    #[test]
    fn weight_scheme_parsing() {
        assert_eq!("unit".parse::<WeightScheme>().unwrap(), WeightScheme::Unit);
        assert_eq!(
            "int:5".parse::<WeightScheme>().unwrap(),
            WeightScheme::IntUniform { max: 5 }
        );
        assert_eq!(
            "rat:6".parse::<WeightScheme>().unwrap(),
            WeightScheme::RatUniform { bound: 6 }
        );
        assert_eq!(
            "zint:3".parse::<WeightScheme>().unwrap(),
            WeightScheme::IntWithZeros { max: 3 }
        );
        assert!("int:0".parse::<WeightScheme>().is_err());
        assert!("foo".parse::<WeightScheme>().is_err());
        for s in ["unit", "int:5", "rat:6", "zint:3"] {
            assert_eq!(s.parse::<WeightScheme>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn rational_scheme_stays_in_bounds() {
        let d = generate_tournament(6, &WeightScheme::RatUniform { bound: 4 }, 99);
        for (_, _, w) in d.arcs() {
            assert!(w.is_positive());
            assert!(*w.numer() <= BigInt::from(4 * 4)); // reduced form bound
            assert!(*w.denom() <= BigInt::from(4));
        }
    }

    #[test]
    fn epsilon_reduce_examples() {
        // Weighted 3-cycle (1, 2, 4) with uniform eta*: epsilon = 1 and the
        // new weights are (0, 1, 3).
        let d = Digraph::from_arcs(
            3,
            vec![(0, 1, rat(1, 1)), (1, 2, rat(2, 1)), (2, 0, rat(4, 1))],
        )
        .unwrap();
        let reduced = epsilon_reduce(&d, &VertexWeighting::ones(3)).unwrap();
        assert_eq!(reduced.weight(0, 1), Some(&rat(0, 1)));
        assert_eq!(reduced.weight(1, 2), Some(&rat(1, 1)));
        assert_eq!(reduced.weight(2, 0), Some(&rat(3, 1)));

        // eta* identically zero: epsilon is undefined.
        assert!(epsilon_reduce(&d, &VertexWeighting::zeros(3)).is_err());

        // Single arc of weight 3 with head weight 2: epsilon = 3/2.
        let single = Digraph::from_arcs(2, vec![(0, 1, rat(3, 1))]).unwrap();
        let eta = VertexWeighting::new(vec![rat(0, 1), rat(2, 1)]).unwrap();
        let reduced = epsilon_reduce(&single, &eta).unwrap();
        assert_eq!(reduced.weight(0, 1), Some(&rat(0, 1)));
    }

    #[test]
    fn reduction_step_algebra() {
        // eta = eta_c + 2 * eta_plus hits zero exactly at the argmin vertex.
        let eta_c = VertexWeighting::new(vec![rat(3, 1), rat(0, 1), rat(5, 1)]).unwrap();
        let eta_plus =
            VertexWeighting::new(vec![rat(1, 1), rat(2, 1), rat(1, 2)]).unwrap();
        let eta = VertexWeighting::new(
            (0..3)
                .map(|v| eta_c.get(v) + rat(2, 1) * eta_plus.get(v))
                .collect(),
        )
        .unwrap();
        let step = reduction_step(&eta, &eta_plus).unwrap();
        // Ratios are 5, 2, 12; the minimum is t = 2 at vertex 1.
        assert_eq!(step.t, rat(2, 1));
        assert_eq!(step.zeros, vec![1]);
        assert_eq!(step.reduced.get(0), &rat(3, 1));
        assert_eq!(step.reduced.get(1), &rat(0, 1));
        assert_eq!(step.reduced.get(2), &rat(5, 1));

        assert!(reduction_step(&eta, &VertexWeighting::zeros(3)).is_err());
    }

    #[test]
    fn reduce_counterexample_rejects_non_counterexamples() {
        // On TT3 with uniform eta the sink is weakly expanding, so the
        // precondition fails (as it must on every small instance).
        let err = reduce_counterexample(
            &crate::fixtures::tt3(),
            &VertexWeighting::ones(3),
            &VertexWeighting::new(vec![rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("not strongly contracting"), "{err}");
    }

    #[test]
    fn sweep_is_deterministic_and_clean_on_small_tournaments() {
        let config = SweepConfig {
            kind: GeneratorKind::Tournament,
            n_min: 3,
            n_max: 6,
            arc_probability: Rational::one(),
            scheme: WeightScheme::Unit,
            trials: 40,
            seed: 42,
            check_median_order: true,
            check_ld_reverse: true,
        };
        let a = sweep(&config).unwrap();
        let b = sweep(&config).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.records.iter().all(|r| r.seymour_arc > 0));
        assert!(a.records.iter().all(|r| r.dichotomy == "expanding"));
        assert!(a
            .records
            .iter()
            .all(|r| r.last_vertex_seymour == Some(true)));
        // Unit tournaments satisfy the reverse expansion property, so no
        // flags at all.
        assert!(!a.has_flags());

        let other_seed = SweepConfig { seed: 43, ..config };
        assert_ne!(sweep(&other_seed).unwrap().to_json(), a.to_json());
    }

    #[test]
    fn searches_find_witnesses_quickly() {
        let median = search_last_vertex_failure(1, 3000).unwrap();
        let w = median.expect("a weighted median-order failure should exist in range");
        assert!(!w.check.seymour);
        assert!(seymour_vertices_arc(&w.graph).len() < w.graph.n());

        let ld = search_ld_reverse_failure(1, 3000).unwrap();
        let w = ld.expect("a losing-density reverse failure should exist in range");
        assert!(!w.violations.is_empty());
    }

    #[test]
    fn tournament_enumeration_counts() {
        assert_eq!(all_tournaments(3).len(), 8);
        assert_eq!(tournament_classes(1).len(), 1);
        assert_eq!(tournament_classes(2).len(), 1);
        assert_eq!(tournament_classes(3).len(), 2);
        assert_eq!(tournament_classes(4).len(), 4);
        assert_eq!(tournament_classes(5).len(), 12);
    }

    #[test]
    fn n5_class_corpus_matches_enumeration() {
        let enumerated: BTreeSet<u16> = tournament_classes(5)
            .iter()
            .map(canonical_tournament_mask)
            .collect();
        let frozen: BTreeSet<u16> = N5_CLASS_MASKS.iter().copied().collect();
        assert_eq!(enumerated, frozen);
        for d in tournament_classes_n5() {
            assert!(d.is_tournament());
        }
    }
}
