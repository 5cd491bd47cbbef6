//! `scrollsys scan`: classifier versus oracle over a box, as CSV or JSON lines.
//!
//! Output is written in enumeration order in chunks; a resume token
//! `<index>@<fingerprint>` restarts the same enumeration at `index`, and is
//! rejected if the box or oracle settings changed.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use sha2::{Digest, Sha256};

use scrollsys_core::oracle::{OracleConfig, Verdict};
use scrollsys_core::scan::{run, summarize, ScanBox, ScanRecord, SliceSummary, CSV_COLUMNS, CSV_VERSION};

use crate::config::parse_range;
use crate::{Outcome, Settings};

const CHUNK: usize = 512;

type Sink = io::BufWriter<Box<dyn Write>>;

enum Out {
    Csv(Box<csv::Writer<Sink>>),
    Json(Sink),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Surface index range, e.g. 0..5.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// Multiplicity range.
    #[arg(long)]
    m: Option<String>,
    /// Number of points.
    #[arg(long)]
    r: Option<String>,
    /// Write here instead of stdout; appended to when resuming.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Token printed by an interrupted or limited scan.
    #[arg(long)]
    resume: Option<String>,
    /// Stop after this many systems and print a resume token.
    #[arg(long)]
    limit: Option<usize>,
}

/// One output row; CSV and JSON share these fields.
#[derive(Debug, Serialize)]
struct Row<'a> {
    spec: String,
    v: i64,
    e: i64,
    l_est: Option<i64>,
    verdict: &'a str,
    table1_row: Option<u8>,
    agree: bool,
}

impl<'a> From<&'a ScanRecord> for Row<'a> {
    fn from(r: &'a ScanRecord) -> Self {
        Row {
            spec: r.spec.to_string(),
            v: r.v,
            e: r.e,
            l_est: r.l_est,
            verdict: r.verdict.as_str(),
            table1_row: r.table1_row,
            agree: r.agree,
        }
    }
}

fn resolve_box(st: &Settings, args: &ScanArgs) -> Result<ScanBox> {
    let d = ScanBox::standard();
    macro_rules! pick {
        ($field:ident, $key:literal) => {
            match &args.$field {
                Some(text) => parse_range(text).with_context(|| format!("--{}", $key))?,
                None => st.file.get_range($key)?.unwrap_or(d.$field),
            }
        };
    }
    let b = ScanBox {
        n: pick!(n, "n"),
        a: pick!(a, "a"),
        b: pick!(b, "b"),
        m: pick!(m, "m"),
        r: pick!(r, "r"),
    };
    b.validate()?;
    Ok(b)
}

fn fingerprint(scan_box: &ScanBox, cfg: &OracleConfig) -> String {
    let canon = format!(
        "v{CSV_VERSION};n={:?};a={:?};b={:?};m={:?};r={:?};p={};seed={};trials={};conf={};max={}",
        scan_box.n,
        scan_box.a,
        scan_box.b,
        scan_box.m,
        scan_box.r,
        cfg.prime,
        cfg.seed,
        cfg.trials,
        cfg.confirmations,
        cfg.max_primes
    );
    let digest = Sha256::digest(canon.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_token(token: &str, expect: &str) -> Result<usize> {
    let Some((index, fp)) = token.split_once('@') else {
        bail!("malformed resume token {token:?}; expected <index>@<fingerprint>");
    };
    if fp != expect {
        bail!("resume token {token:?} belongs to a different scan configuration (expected fingerprint {expect})");
    }
    index.parse().with_context(|| format!("resume token index {index:?}"))
}

pub fn cmd_scan(st: &Settings, args: &ScanArgs) -> Result<Outcome> {
    let scan_box = resolve_box(st, args)?;
    let fp = fingerprint(&scan_box, &st.oracle);
    let start = match &args.resume {
        Some(token) => parse_token(token, &fp)?,
        None => 0,
    };
    let systems = scan_box.systems()?;
    if start > systems.len() {
        bail!("resume index {start} is past the end ({} systems)", systems.len());
    }
    let end = match args.limit {
        Some(l) => (start + l).min(systems.len()),
        None => systems.len(),
    };
    let out_path = args.out.clone().or(st.file.get::<PathBuf>("out")?);
    let appending = start > 0 && out_path.as_ref().is_some_and(|p| p.exists());
    let sink: Box<dyn Write> = match &out_path {
        Some(path) => Box::new(
            OpenOptions::new()
                .create(true)
                .write(true)
                .append(appending)
                .truncate(!appending)
                .open(path)
                .with_context(|| format!("opening {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = io::BufWriter::new(sink);
    let header = start == 0 || !appending && out_path.is_some();
    if header && !st.json {
        writeln!(sink, "# scrollsys scan csv v{CSV_VERSION} columns={}", CSV_COLUMNS.join(","))?;
    }
    let mut out = if st.json {
        Out::Json(sink)
    } else {
        Out::Csv(Box::new(csv::WriterBuilder::new().has_headers(header).from_writer(sink)))
    };

    let mut records = Vec::with_capacity(end - start);
    let mut at = start;
    while at < end {
        let stop = (at + CHUNK).min(end);
        let chunk = run(&systems[..stop], at, &st.oracle);
        for rec in &chunk {
            match &mut out {
                Out::Csv(w) => w.serialize(Row::from(rec))?,
                Out::Json(w) => {
                    serde_json::to_writer(&mut *w, &Row::from(rec))?;
                    writeln!(w)?;
                }
            }
        }
        match &mut out {
            Out::Csv(w) => w.flush()?,
            Out::Json(w) => w.flush()?,
        }
        records.extend(chunk);
        at = stop;
    }
    drop(out);

    let summary = summarize(&records);
    let line = |name: &str, s: &SliceSummary| {
        eprintln!(
            "{name:<14} systems {:>6}  special {:>5}  disagreements {:>3}  inconclusive {:>3}",
            s.systems, s.special, s.disagreements, s.inconclusive
        )
    };
    line("all", &summary.all);
    line("m = 1", &summary.simple_points);
    line("r <= n + 3", &summary.few_points);
    line("b <= m + 1", &summary.low_degree);
    for rec in records.iter().filter(|r| !r.agree) {
        eprintln!(
            "  {} {}: classifier l = {}, oracle {:?} {}{}",
            if rec.verdict == Verdict::Inconclusive { "inconclusive" } else { "disagreement" },
            rec.spec,
            rec.predicted_l,
            rec.l_est,
            rec.verdict.as_str(),
            rec.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default()
        );
    }
    if end < systems.len() {
        eprintln!("resume: {end}@{fp}");
    }
    Ok(if summary.all.disagreements > 0 {
        Outcome::Disagreement
    } else if summary.all.inconclusive > 0 {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    })
}
