mod config;
mod scan;
mod text;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use scrollsys_core::curves::enumerate_homogeneous;
use scrollsys_core::degeneration::{recombine_dim, split, verify_leaves, Prover, ProverOptions};
use scrollsys_core::lattice::{expected_dim, virtual_dim, SystemSpec};
use scrollsys_core::oracle::{multi_prime, Field, OracleConfig, Verdict, DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS};
use scrollsys_core::reduction::{is_minus_one_special, reduce};
use scrollsys_core::scan::{verify_table1, Table1Bounds};
use scrollsys_core::transform::{elementary_transform, elementary_transform_point};
use scrollsys_core::Error;

use config::ConfigFile;

#[derive(Debug, Parser)]
#[command(
    name = "scrollsys",
    version,
    about = "Dimensions of linear systems with multiple base points on Hirzebruch surfaces"
)]
struct Cli {
    /// Prime modulus for the interpolation oracle.
    #[arg(long, global = true)]
    prime: Option<u64>,

    /// Base seed for sampling points.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Point samples per prime.
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    /// key=value file with defaults for the flags above and the scan box.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Print the documented discrepancies in the source formulas and exit.
    #[arg(long)]
    paper_notes: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Virtual and expected dimension, Table 1 match and (-1)-speciality.
    Dim {
        spec: String,
        /// Also run the interpolation oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Reduction trace against (-1)-curves and the negative section.
    Classify { spec: String },
    /// Homogeneous (-1)-classes with multiplicity m from the conic parametrization.
    Curves {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 12)]
        b_max: i64,
    },
    /// Elementary transformation towards F_{n-k}.
    Transform {
        spec: String,
        /// Number of points (homogeneous systems).
        #[arg(long, conflicts_with = "point", required_unless_present = "point")]
        k: Option<usize>,
        /// A single point, by index in the printed order.
        #[arg(long)]
        point: Option<usize>,
    },
    /// The four systems of a (k, s)-degeneration.
    Split {
        spec: String,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        s: usize,
    },
    /// Certificate that a non-(-1)-special system of multiplicity 2 or 3 has l = e.
    Prove {
        spec: String,
        /// Re-check every leaf with the oracle.
        #[arg(long)]
        verify: bool,
        /// Report an open case instead of using the oracle for unclosed systems.
        #[arg(long)]
        no_oracle_leaves: bool,
    },
    /// Effective dimension over prime fields.
    Oracle { spec: String },
    /// Instantiate Table 1 and compare with formulas and the oracle.
    VerifyTable1(Table1Args),
    /// Compare classifier and oracle on a box of homogeneous systems.
    Scan(scan::ScanArgs),
}

#[derive(Debug, Args)]
struct Table1Args {
    #[arg(long)]
    e_max: Option<i64>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    r_max: Option<usize>,
    /// Skip instances with more basis columns than this.
    #[arg(long)]
    max_cols: Option<i64>,
}

/// Exit status beyond plain success or failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Disagreement,
    Inconclusive,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Disagreement => 2,
            Outcome::Inconclusive => 3,
        }
    }
}

pub struct Settings {
    pub oracle: OracleConfig,
    pub json: bool,
    pub file: ConfigFile,
}

fn settings(cli: &Cli) -> Result<Settings> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut oracle = OracleConfig {
        prime: cli.prime.or(file.get("prime")?).unwrap_or(DEFAULT_PRIME),
        seed: cli.seed.or(file.get("seed")?).unwrap_or(DEFAULT_SEED),
        trials: cli.trials.or(file.get("trials")?).unwrap_or(DEFAULT_TRIALS),
        ..OracleConfig::default()
    };
    if let Some(c) = file.get("confirmations")? {
        oracle.confirmations = c;
    }
    if let Some(c) = file.get("max-primes")? {
        oracle.max_primes = c;
    }
    Field::new(oracle.prime).with_context(|| format!("--prime {}", oracle.prime))?;
    if oracle.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let json = cli.json || file.get::<bool>("json")?.unwrap_or(false);
    Ok(Settings { oracle, json, file })
}

pub fn parse_spec(text: &str) -> Result<SystemSpec> {
    text.parse::<SystemSpec>().map_err(|err| match err {
        Error::Parse { pos, ref msg } => anyhow!("{err}\n  {text}\n  {}^ {msg}", " ".repeat(pos)),
        other => anyhow!(other),
    })
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    if cli.paper_notes {
        print!("{}", text::NOTES);
        if cli.command.is_none() {
            return Ok(Outcome::Pass);
        }
    }
    let st = settings(&cli)?;
    let Some(command) = cli.command else {
        bail!("no command given; see --help");
    };
    match command {
        Command::Dim { spec, oracle } => cmd_dim(&st, &parse_spec(&spec)?, oracle),
        Command::Classify { spec } => cmd_classify(&st, &parse_spec(&spec)?),
        Command::Curves { n, m, b_max } => cmd_curves(&st, n, m, b_max),
        Command::Transform { spec, k, point } => cmd_transform(&st, &parse_spec(&spec)?, k, point),
        Command::Split { spec, k, s } => cmd_split(&st, &parse_spec(&spec)?, k, s),
        Command::Prove {
            spec,
            verify,
            no_oracle_leaves,
        } => cmd_prove(&st, &parse_spec(&spec)?, verify, no_oracle_leaves),
        Command::Oracle { spec } => cmd_oracle(&st, &parse_spec(&spec)?),
        Command::VerifyTable1(args) => cmd_verify_table1(&st, &args),
        Command::Scan(args) => scan::cmd_scan(&st, &args),
    }
}

fn cmd_dim(st: &Settings, s: &SystemSpec, with_oracle: bool) -> Result<Outcome> {
    let verdict = is_minus_one_special(s)?;
    let oracle = if with_oracle { Some(multi_prime(s, &st.oracle)?) } else { None };
    let outcome = match &oracle {
        None => Outcome::Pass,
        Some(o) if o.verdict == Verdict::Inconclusive => Outcome::Inconclusive,
        Some(o) if o.l_est == Some(verdict.predicted_l) => Outcome::Pass,
        Some(_) => Outcome::Disagreement,
    };
    let row = verdict.table_row.as_ref();
    if st.json {
        print_json(&json!({
            "spec": s,
            "v": verdict.v_initial,
            "e": verdict.expected,
            "table1_row": row.map(|t| t.row.number),
            "table1_v": row.map(|t| t.v_table),
            "table1_l": row.map(|t| t.l_table),
            "note": row.and_then(|t| t.note),
            "minus_one_special": verdict.minus_one_special,
            "predicted_l": verdict.predicted_l,
            "special": verdict.special(),
            "l_est": oracle.as_ref().and_then(|o| o.l_est),
            "oracle_verdict": oracle.as_ref().map(|o| o.verdict),
        }))?;
        return Ok(outcome);
    }
    println!("{s}");
    println!("  v = {}", verdict.v_initial);
    println!("  e = {}", verdict.expected);
    match row {
        Some(t) => println!(
            "  table 1: row {} {} (v = {}, l = {})",
            t.row.number, t.row.family, t.v_table, t.l_table
        ),
        None => println!("  table 1: no match"),
    }
    println!(
        "  (-1)-special: {} (predicted l = {}, {})",
        if verdict.minus_one_special { "yes" } else { "no" },
        verdict.predicted_l,
        if verdict.special() { "special" } else { "non-special" }
    );
    if let Some(note) = row.and_then(|t| t.note) {
        println!("  note: {note}");
    }
    if let Some(o) = &oracle {
        let l = o.l_est.map_or_else(|| "?".to_string(), |l| l.to_string());
        println!("  l_est = {l} ({}, {} prime(s))", o.verdict.as_str(), o.reports.len());
    }
    Ok(outcome)
}

fn cmd_classify(st: &Settings, s: &SystemSpec) -> Result<Outcome> {
    let trace = reduce(s)?;
    let verdict = scrollsys_core::reduction::verdict_from_trace(trace.clone())?;
    if st.json {
        print_json(&verdict)?;
        return Ok(Outcome::Pass);
    }
    println!("{s}");
    if trace.swapped_rulings {
        println!("  rulings swapped (F_0, a > b)");
    }
    for (i, step) in trace.steps.iter().enumerate() {
        println!("  {:>2}. {}", i + 1, text::step_label(step));
    }
    if trace.steps.is_empty() {
        println!("  no negative curves");
    }
    println!("  residual: {} ({:?})", trace.final_class, trace.residual);
    println!("  v = {}, v(residual) = {}", verdict.v_initial, verdict.v_final);
    println!(
        "  (-1)-special: {}; predicted l = {}, e = {}",
        if verdict.minus_one_special { "yes" } else { "no" },
        verdict.predicted_l,
        verdict.expected
    );
    Ok(Outcome::Pass)
}

fn cmd_curves(st: &Settings, n: u32, m: i64, b_max: i64) -> Result<Outcome> {
    let curves = enumerate_homogeneous(n, m, b_max)?;
    if st.json {
        let rows: Vec<_> = curves
            .iter()
            .map(|c| json!({"class": c.label(), "witness": c.witness}))
            .collect();
        print_json(&rows)?;
        return Ok(Outcome::Pass);
    }
    println!("(-1)-classes on F_{n} with {m}-fold points, b <= {b_max}: {}", curves.len());
    for c in &curves {
        match c.witness {
            Some(w) => println!("  {}  (p, q) = ({}, {})", c.label(), w.p, w.q),
            None => println!("  {}", c.label()),
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_transform(st: &Settings, s: &SystemSpec, k: Option<usize>, point: Option<usize>) -> Result<Outcome> {
    let t = match (k, point) {
        (Some(k), _) => elementary_transform(s, k)?,
        (None, Some(p)) => elementary_transform_point(s, p)?,
        (None, None) => bail!("give --k or --point"),
    };
    let v_before = virtual_dim(s)?;
    let v_after = virtual_dim(&t.spec)?;
    let class_v = t.class_image.riemann_roch()?;
    let preserved = class_v == v_before && (t.excess_fibers > 0 || v_after == v_before);
    if st.json {
        print_json(&json!({
            "spec": s,
            "image": t.spec,
            "class_image": t.class_image.to_string(),
            "v": v_before,
            "v_image": v_after,
            "v_class_image": class_v,
            "v_preserved": preserved,
            "excess_fibers": t.excess_fibers,
            "special_position": t.special_position,
        }))?;
    } else {
        println!("{s} -> {}", t.spec);
        println!("  class image {}", t.class_image);
        println!(
            "  v = {v_before} -> {v_after}{}",
            match (preserved, t.excess_fibers > 0) {
                (true, false) => " (preserved)",
                (true, true) => " (preserved at class level)",
                (false, _) => " (NOT preserved)",
            }
        );
        if t.excess_fibers > 0 {
            println!(
                "  {} fiber component(s) dropped with negative multiplicities; class-level v = {class_v}",
                t.excess_fibers
            );
        }
        if t.special_position {
            println!("  caveat: moved points lie on a common section; the image is not in general position");
        }
    }
    Ok(if preserved { Outcome::Pass } else { Outcome::Disagreement })
}

fn cmd_split(st: &Settings, s: &SystemSpec, k: i64, pts: usize) -> Result<Outcome> {
    let sp = split(s, k, pts)?;
    let mut dims = Vec::new();
    for piece in sp.pieces() {
        let l = if piece.b() < 0 { -1 } else { is_minus_one_special(piece)?.predicted_l };
        dims.push((piece.clone(), virtual_dim(piece)?, expected_dim(piece)?, l));
    }
    let recombined = recombine_dim(&sp, dims[0].3, dims[1].3, dims[2].3, dims[3].3).ok();
    let names = ["L~", "L", "L^~", "L^"];
    if st.json {
        let pieces: Vec<_> = names
            .iter()
            .zip(&dims)
            .map(|(name, (p, v, e, l))| json!({"name": name, "spec": p, "v": v, "e": e, "predicted_l": l}))
            .collect();
        print_json(&json!({
            "spec": s,
            "k": k,
            "s": pts,
            "glue_degree": sp.glue_degree(),
            "pieces": pieces,
            "identity_i": sp.identity_i()?,
            "identity_ii": sp.identity_ii()?,
            "l0": recombined.map(|(l, _)| l),
            "rule": recombined.map(|(_, r)| r.label()),
        }))?;
        return Ok(Outcome::Pass);
    }
    println!("{s}  (k, s) = ({k}, {pts}), a + n(b-k) = {}", sp.glue_degree());
    for (name, (p, v, e, l)) in names.iter().zip(&dims) {
        println!("  {name:<4}{:<22} v = {v:>4}  e = {e:>4}  l = {l:>4}", p.to_string());
    }
    println!("  identity (i): {}   identity (ii): {}", sp.identity_i()?, sp.identity_ii()?);
    match recombined {
        Some((l0, rule)) => println!("  l0 = {l0} by rule {} (e = {})", rule.label(), expected_dim(s)?),
        None => println!("  l0: the predicted dimensions are inconsistent"),
    }
    Ok(Outcome::Pass)
}

fn cmd_prove(st: &Settings, s: &SystemSpec, verify: bool, strict: bool) -> Result<Outcome> {
    let opts = ProverOptions {
        oracle_fallback: !strict,
        oracle: st.oracle,
        ..ProverOptions::default()
    };
    let cert = match Prover::new(opts).prove(s) {
        Ok(cert) => cert,
        Err(err @ Error::OpenCase { .. }) => {
            eprintln!("{err}");
            return Ok(Outcome::Inconclusive);
        }
        Err(err) => return Err(err.into()),
    };
    cert.check_structure()?;
    let checks = if verify { Some(verify_leaves(&cert, &st.oracle)?) } else { None };
    let outcome = match &checks {
        Some(c) if c.iter().any(|x| !x.ok) => Outcome::Disagreement,
        _ => Outcome::Pass,
    };
    if st.json {
        print_json(&json!({"certificate": cert, "leaf_checks": checks}))?;
        return Ok(outcome);
    }
    print!("{}", text::certificate_tree(&cert));
    if let Some(checks) = checks {
        let bad: Vec<_> = checks.iter().filter(|c| !c.ok).collect();
        println!("leaves re-verified by the oracle: {} ok, {} failed", checks.len() - bad.len(), bad.len());
        for c in bad {
            println!("  FAILED {} claim {} oracle {:?}", c.spec, c.claim, c.l_est);
        }
    }
    Ok(outcome)
}

fn cmd_oracle(st: &Settings, s: &SystemSpec) -> Result<Outcome> {
    let report = multi_prime(s, &st.oracle)?;
    let outcome = if report.verdict == Verdict::Inconclusive {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    };
    if st.json {
        print_json(&report)?;
        return Ok(outcome);
    }
    println!("{s}");
    for r in &report.reports {
        println!(
            "  p = {}: h0 = {}, conditions = {}, ranks {:?} -> l_est = {}, e = {}, deficiency = {}, {} (failure bound {:.1e})",
            r.prime,
            r.h0,
            r.conditions,
            r.rank_per_seed,
            r.l_est,
            r.expected,
            r.deficiency,
            r.verdict.as_str(),
            r.failure_bound
        );
    }
    match report.l_est {
        Some(l) => println!("  l = {l}: {}", report.verdict.as_str()),
        None => println!("  inconclusive: primes disagree"),
    }
    println!("  {}", scrollsys_core::oracle::CHAR_P_NOTE);
    Ok(outcome)
}

fn cmd_verify_table1(st: &Settings, args: &Table1Args) -> Result<Outcome> {
    let d = Table1Bounds::default();
    let bounds = Table1Bounds {
        e_max: args.e_max.unwrap_or(d.e_max),
        n_max: args.n_max.unwrap_or(d.n_max),
        r_max: args.r_max.unwrap_or(d.r_max),
        max_cols: args.max_cols.or(st.file.get("max-cols")?).unwrap_or(d.max_cols),
    };
    let checks = verify_table1(&bounds, &st.oracle)?;
    let inconclusive = checks.iter().filter(|c| c.verdict == Verdict::Inconclusive).count();
    let failed = checks.iter().filter(|c| !c.ok && c.verdict != Verdict::Inconclusive).count();
    if st.json {
        print_json(&json!({"bounds": bounds, "checks": checks, "failed": failed, "inconclusive": inconclusive}))?;
    } else {
        for c in &checks {
            let l = c.l_est.map_or_else(|| "?".into(), |l| l.to_string());
            println!(
                "T1.{:<2} n={} e={} {:<18} v {:>3}/{:<3} l {:>2}/{:<2} {}{}",
                c.row,
                c.n,
                c.e,
                c.spec.to_string(),
                c.v_table,
                c.v_computed,
                c.l_table,
                l,
                if c.ok { "ok" } else { "FAIL" },
                if c.note.is_some() { "  (v discrepancy noted)" } else { "" }
            );
        }
        println!(
            "{} instances: {} ok, {failed} failed, {inconclusive} inconclusive",
            checks.len(),
            checks.len() - failed - inconclusive
        );
    }
    Ok(if failed > 0 {
        Outcome::Disagreement
    } else if inconclusive > 0 {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Outcome::Pass.code(), 0);
        assert_eq!(Outcome::Disagreement.code(), 2);
        assert_eq!(Outcome::Inconclusive.code(), 3);
    }
}
