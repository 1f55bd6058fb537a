//! Command-line surface over the library: analysis, certificates, orders,
//! rewrites, and sweeps.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid instance or argument,
//! 3 verification failure, 4 flagged discovery (so CI notices), 101
//! internal error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::{BigInt, One, Signed};

use seymour::graph::{Digraph, VertexWeighting};
use seymour::harness::{
    persist_flagged, sweep, GeneratorKind, SweepConfig, WeightScheme,
};
use seymour::io::{
    parse_certificate, parse_instance, parse_weighting_file, serialize_certificate,
    serialize_digraph, serialize_instance,
};
use seymour::lp::{
    arc_weighted_losing_density, certificate_violations, dichotomy, losing_density, LdOutcome,
};
use seymour::order::{backward_weight, median_order, OrderMode};
use seymour::report::{
    report, seymour_vertices_arc, seymour_vertices_unweighted, seymour_vertices_vw,
};
use seymour::harness::reduce_counterexample;
use seymour::transform::{
    blowup, contract, drop_zero_arcs, expand_auxiliary, rationalize_and_scale,
};
use seymour::{format_rational, Error, Rational};

#[derive(Parser)]
#[command(
    name = "seymour",
    version,
    about = "Exact second-neighborhood analysis of arc-weighted digraphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeymourModeArg {
    Arc,
    Unweighted,
    Vertex,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderModeArg {
    Count,
    Weight,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Tournament,
    Digraph,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    MedianOrder,
    LdReverse,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-vertex neighborhood weights, deltas, and classifications.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// The Seymour vertex set in the chosen measure.
    Seymour {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "arc")]
        mode: SeymourModeArg,
    },
    /// An expanding or contracting weighting certificate.
    Dichotomy { file: PathBuf },
    /// Re-check a serialized certificate against an instance.
    Verify { file: PathBuf, certfile: PathBuf },
    /// A losing density of the instance, or `infeasible`.
    LosingDensity {
        file: PathBuf,
        #[arg(long)]
        arc_weighted: bool,
    },
    /// A minimum-backward vertex order.
    MedianOrder {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "count")]
        mode: OrderModeArg,
    },
    /// The unweighted auxiliary expansion (zero arcs dropped, weights
    /// scaled to integers first).
    Expand { file: PathBuf },
    /// Contract vertex u into vertex v.
    Contract { file: PathBuf, u: usize, v: usize },
    /// Blow the tournament up by its vweight block sizes.
    Blowup { file: PathBuf },
    /// Shrink a vertex-weighted counterexample by one reduction step.
    Reduce {
        file: PathBuf,
        etafile: PathBuf,
        etaplusfile: PathBuf,
    },
    /// Lower arc weights along an expanding weighting until an arc hits
    /// zero.
    EpsReduce { file: PathBuf, etafile: PathBuf },
    /// Randomized conjecture sweep with flagged-event persistence.
    Sweep {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Vertex-count range, inclusive: `A..B` or a single `N`.
        #[arg(long = "n")]
        n_range: String,
        /// Arc probability for digraph sweeps (rational or decimal).
        #[arg(long)]
        p: Option<String>,
        /// Weight scheme: unit, int:M, rat:Q, or zint:M.
        #[arg(long, value_parser = parse_scheme)]
        weights: WeightScheme,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long = "check", value_enum)]
        checks: Vec<CheckArg>,
        /// Output directory for the report and flagged instances.
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_scheme(s: &str) -> Result<WeightScheme, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Verification(_) => 3,
        Error::Internal(_) => 101,
        _ => 2,
    }
}

fn load_instance(path: &Path) -> Result<seymour::io::Instance, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

fn load_weighting(path: &Path, n: usize) -> Result<VertexWeighting, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_weighting_file(&text, n)
}

fn print_vertex_set(set: &std::collections::BTreeSet<usize>) {
    let line = set
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    println!("{line}");
}

fn weighting_as_eta_file(n: usize, eta: &VertexWeighting) -> String {
    serialize_instance(&Digraph::new(n), Some(eta))
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Analyze { file, format } => {
            let inst = load_instance(&file)?;
            let rep = report(&inst.graph);
            match format {
                FormatArg::Json => println!("{}", rep.to_json()),
                FormatArg::Table => print!("{}", rep.to_table()),
            }
            Ok(0)
        }
        Cmd::Seymour { file, mode } => {
            let inst = load_instance(&file)?;
            let set = match mode {
                SeymourModeArg::Arc => seymour_vertices_arc(&inst.graph),
                SeymourModeArg::Unweighted => seymour_vertices_unweighted(&inst.graph),
                SeymourModeArg::Vertex => {
                    let eta = inst.weighting.ok_or_else(|| {
                        Error::Precondition(
                            "vertex mode needs vweight lines in the instance file".into(),
                        )
                    })?;
                    seymour_vertices_vw(&inst.graph, &eta)?
                }
            };
            print_vertex_set(&set);
            Ok(0)
        }
        Cmd::Dichotomy { file } => {
            let inst = load_instance(&file)?;
            if inst.graph.arcs().any(|(_, _, w)| !w.is_one()) {
                eprintln!("warning: arc weights are ignored by the dichotomy (presence only)");
            }
            let cert = dichotomy(&inst.graph)?;
            print!("{}", serialize_certificate(&cert));
            Ok(0)
        }
        Cmd::Verify { file, certfile } => {
            let inst = load_instance(&file)?;
            let cert_text = std::fs::read_to_string(&certfile)?;
            let cert = parse_certificate(&cert_text, inst.graph.n())?;
            let violations = certificate_violations(&inst.graph, &cert)?;
            let trivial = !cert.weighting.total().is_positive();
            if violations.is_empty() && !trivial {
                println!("pass");
                Ok(0)
            } else {
                println!("fail");
                if trivial {
                    println!("trivial weighting (total is zero)");
                }
                for v in violations {
                    println!("violation {v}");
                }
                Ok(3)
            }
        }
        Cmd::LosingDensity { file, arc_weighted } => {
            let inst = load_instance(&file)?;
            if arc_weighted {
                match arc_weighted_losing_density(&inst.graph)? {
                    LdOutcome::Density(ell) => {
                        print!("{}", weighting_as_eta_file(inst.graph.n(), &ell))
                    }
                    LdOutcome::Infeasible => println!("infeasible"),
                }
            } else {
                let ell = losing_density(&inst.graph)?;
                print!("{}", weighting_as_eta_file(inst.graph.n(), &ell));
            }
            Ok(0)
        }
        Cmd::MedianOrder { file, mode } => {
            let inst = load_instance(&file)?;
            let mode = match mode {
                OrderModeArg::Count => OrderMode::Count,
                OrderModeArg::Weight => OrderMode::Weight,
            };
            let m = median_order(&inst.graph, mode)?;
            debug_assert_eq!(
                backward_weight(&inst.graph, &m.order, mode)?,
                m.backward
            );
            let line = m
                .order
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            println!("{line}");
            println!("backward {}", format_rational(&m.backward));
            Ok(0)
        }
        Cmd::Expand { file } => {
            let inst = load_instance(&file)?;
            let cleaned = drop_zero_arcs(&inst.graph);
            let dropped = inst.graph.arc_count() - cleaned.arc_count();
            let scaled = rationalize_and_scale(&cleaned)?;
            let expansion = expand_auxiliary(&scaled)?;
            print!("{}", expansion.to_instance_text());
            if dropped > 0 {
                println!("# dropped {dropped} zero arc(s)");
            }
            Ok(0)
        }
        Cmd::Contract { file, u, v } => {
            let inst = load_instance(&file)?;
            let c = contract(&inst.graph, u, v)?;
            print!("{}", serialize_digraph(&c.graph));
            for (old, new) in c.old_to_new.iter().enumerate() {
                if let Some(new) = new {
                    println!("# map {old} -> {new}");
                }
            }
            Ok(0)
        }
        Cmd::Blowup { file } => {
            let inst = load_instance(&file)?;
            let eta = inst.weighting.ok_or_else(|| {
                Error::Precondition(
                    "blowup needs vweight lines giving positive integer block sizes".into(),
                )
            })?;
            let b = blowup(&inst.graph, &eta)?;
            print!("{}", serialize_digraph(&b));
            Ok(0)
        }
        Cmd::Reduce {
            file,
            etafile,
            etaplusfile,
        } => {
            let inst = load_instance(&file)?;
            let eta = load_weighting(&etafile, inst.graph.n())?;
            let eta_plus = load_weighting(&etaplusfile, inst.graph.n())?;
            let (sub, eta_sub, old_to_new) =
                reduce_counterexample(&inst.graph, &eta, &eta_plus)?;
            print!("{}", serialize_instance(&sub, Some(&eta_sub)));
            for (old, new) in old_to_new.iter().enumerate() {
                if let Some(new) = new {
                    println!("# map {old} -> {new}");
                }
            }
            Ok(0)
        }
        Cmd::EpsReduce { file, etafile } => {
            let inst = load_instance(&file)?;
            let eta_star = load_weighting(&etafile, inst.graph.n())?;
            let reduced = seymour::harness::epsilon_reduce(&inst.graph, &eta_star)?;
            print!("{}", serialize_digraph(&reduced));
            Ok(0)
        }
        Cmd::Sweep {
            kind,
            n_range,
            p,
            weights,
            trials,
            seed,
            checks,
            out,
        } => {
            let (n_min, n_max) = parse_n_range(&n_range)?;
            let arc_probability = match p {
                Some(text) => parse_probability(&text)?,
                None => Rational::one(),
            };
            let config = SweepConfig {
                kind: match kind {
                    KindArg::Tournament => GeneratorKind::Tournament,
                    KindArg::Digraph => GeneratorKind::Digraph,
                },
                n_min,
                n_max,
                arc_probability,
                scheme: weights,
                trials,
                seed,
                check_median_order: checks.contains(&CheckArg::MedianOrder),
                check_ld_reverse: checks.contains(&CheckArg::LdReverse),
            };
            let rep = sweep(&config)?;
            std::fs::create_dir_all(&out)?;
            let report_path = out.join("report.json");
            std::fs::write(&report_path, rep.to_json())?;
            let files = persist_flagged(&rep, &out)?;
            println!(
                "trials {}, flagged {}",
                config.trials,
                rep.flag_counts().values().sum::<usize>()
            );
            for (flag, count) in rep.flag_counts() {
                println!("flag {flag}: {count}");
            }
            println!("report {}", report_path.display());
            for f in files {
                println!("persisted {}", f.display());
            }
            Ok(if rep.has_flags() { 4 } else { 0 })
        }
    }
}

/// Inclusive vertex-count range: `A..B` or a single `N`.
fn parse_n_range(s: &str) -> Result<(usize, usize), Error> {
    let bad = |_| Error::Precondition(format!("malformed vertex range `{s}`"));
    match s.split_once("..") {
        Some((a, b)) => Ok((a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?)),
        None => {
            let n: usize = s.trim().parse().map_err(bad)?;
            Ok((n, n))
        }
    }
}

/// Probability literal: `p/q`, an integer, or a decimal like `0.25`; all
/// parsed exactly.
fn parse_probability(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Precondition(format!("malformed probability `{s}`"));
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        let int: BigInt = int_part.parse().map_err(|_| bad())?;
        if int.is_negative() {
            return Err(bad());
        }
        let frac: BigInt = frac_part.parse().map_err(|_| bad())?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        Ok(Rational::new(int * &denom + frac, denom))
    } else {
        seymour::io::parse_weight(s, 1).map_err(|_| bad())
    }
}
