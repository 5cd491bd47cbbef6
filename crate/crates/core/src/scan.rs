//! Box scans comparing the (-1)-speciality classifier with the oracle.
//!
//! Systems are enumerated by increasing matrix size (conditions times `h0`),
//! ties broken by the spec order, so a scan is deterministic and a resume
//! index identifies the remaining stream exactly.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{h0_nef, virtual_dim, expected_dim, DivisorClass, SystemSpec};
use crate::oracle::{multi_prime, OracleConfig, Verdict};
use crate::reduction::is_minus_one_special;

pub const CSV_VERSION: u32 = 1;
pub const CSV_COLUMNS: [&str; 7] = ["spec", "v", "e", "l_est", "verdict", "table1_row", "agree"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanBox {
    pub n: (u32, u32),
    pub a: (i64, i64),
    pub b: (i64, i64),
    pub m: (i64, i64),
    pub r: (usize, usize),
}

impl ScanBox {
    /// The desk-scale box: `m <= 3, n <= 5, a <= 12, b <= 8, 1 <= r <= 12`.
    pub fn standard() -> Self {
        ScanBox {
            n: (0, 5),
            a: (0, 12),
            b: (0, 8),
            m: (1, 3),
            r: (1, 12),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.a.0 >= 0 && self.b.0 >= 0 && self.m.0 >= 1;
        if !ok {
            return Err(Error::InvalidInput("scan ranges must be non-negative, m >= 1".into()));
        }
        Ok(())
    }

    /// Every system in the box, in scan order.
    pub fn systems(&self) -> Result<Vec<SystemSpec>> {
        self.validate()?;
        let mut out = Vec::new();
        for n in self.n.0..=self.n.1 {
            for a in self.a.0..=self.a.1 {
                for b in self.b.0..=self.b.1 {
                    for m in self.m.0..=self.m.1 {
                        for r in self.r.0..=self.r.1 {
                            out.push(SystemSpec::homogeneous(n, a, b, m, r)?);
                        }
                    }
                }
            }
        }
        let mut keyed: Vec<(i64, SystemSpec)> = out
            .into_iter()
            .map(|s| Ok((matrix_size(&s)?, s)))
            .collect::<Result<_>>()?;
        keyed.sort();
        Ok(keyed.into_iter().map(|(_, s)| s).collect())
    }
}

pub fn matrix_size(s: &SystemSpec) -> Result<i64> {
    let h0 = h0_nef(DivisorClass::new(s.n(), s.a(), s.b()))?;
    Ok(h0 * s.condition_count()?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub index: usize,
    pub spec: SystemSpec,
    pub v: i64,
    pub e: i64,
    pub l_est: Option<i64>,
    pub verdict: Verdict,
    pub classifier_special: bool,
    pub predicted_l: i64,
    pub table1_row: Option<u8>,
    pub agree: bool,
    pub error: Option<String>,
}

impl ScanRecord {
    pub fn csv_fields(&self) -> [String; 7] {
        [
            self.spec.to_string(),
            self.v.to_string(),
            self.e.to_string(),
            self.l_est.map_or_else(String::new, |l| l.to_string()),
            self.verdict.as_str().to_string(),
            self.table1_row.map_or_else(String::new, |r| r.to_string()),
            self.agree.to_string(),
        ]
    }
}

/// Classify and run the oracle on one system; failures are recorded.
pub fn scan_one(index: usize, s: &SystemSpec, cfg: &OracleConfig) -> ScanRecord {
    let attempt = || -> Result<ScanRecord> {
        let verdict = is_minus_one_special(s)?;
        let oracle = multi_prime(s, cfg)?;
        let classifier_special = verdict.special();
        let agree = match oracle.verdict {
            Verdict::Inconclusive => false,
            v => (v == Verdict::Special) == classifier_special && oracle.l_est == Some(verdict.predicted_l),
        };
        Ok(ScanRecord {
            index,
            spec: s.clone(),
            v: verdict.v_initial,
            e: verdict.expected,
            l_est: oracle.l_est,
            verdict: oracle.verdict,
            classifier_special,
            predicted_l: verdict.predicted_l,
            table1_row: verdict.table_row.as_ref().map(|t| t.row.number),
            agree,
            error: None,
        })
    };
    attempt().unwrap_or_else(|err| ScanRecord {
        index,
        spec: s.clone(),
        v: virtual_dim(s).unwrap_or(i64::MIN),
        e: expected_dim(s).unwrap_or(i64::MIN),
        l_est: None,
        verdict: Verdict::Inconclusive,
        classifier_special: false,
        predicted_l: -1,
        table1_row: None,
        agree: false,
        error: Some(err.to_string()),
    })
}

/// Scan `systems[start..]` in parallel; results come back in scan order.
pub fn run(systems: &[SystemSpec], start: usize, cfg: &OracleConfig) -> Vec<ScanRecord> {
    systems
        .par_iter()
        .enumerate()
        .skip(start)
        .map(|(i, s)| scan_one(i, s, cfg))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SliceSummary {
    pub systems: usize,
    pub special: usize,
    pub disagreements: usize,
    pub inconclusive: usize,
}

impl SliceSummary {
    fn add(&mut self, rec: &ScanRecord) {
        self.systems += 1;
        if rec.verdict == Verdict::Special {
            self.special += 1;
        }
        if rec.verdict == Verdict::Inconclusive {
            self.inconclusive += 1;
        } else if !rec.agree {
            self.disagreements += 1;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub all: SliceSummary,
    pub simple_points: SliceSummary,
    /// `r <= n + 3`.
    pub few_points: SliceSummary,
    /// `b <= m + 1`.
    pub low_degree: SliceSummary,
    pub errors: usize,
}

pub fn summarize<'a>(records: impl IntoIterator<Item = &'a ScanRecord>) -> ScanSummary {
    let mut out = ScanSummary::default();
    for rec in records {
        out.all.add(rec);
        let m = rec.spec.max_mult();
        if m == 1 {
            out.simple_points.add(rec);
        }
        if rec.spec.r() as i64 <= i64::from(rec.spec.n()) + 3 {
            out.few_points.add(rec);
        }
        if rec.spec.b() <= m + 1 {
            out.low_degree.add(rec);
        }
        if rec.error.is_some() {
            out.errors += 1;
        }
    }
    out
}


/// Bounds for instantiating Table 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Bounds {
    pub e_max: i64,
    pub n_max: u32,
    pub r_max: usize,
    /// Skip instances whose basis has more columns than this.
    pub max_cols: i64,
}

impl Default for Table1Bounds {
    fn default() -> Self {
        Table1Bounds {
            e_max: 3,
            n_max: 6,
            r_max: 12,
            max_cols: 3000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Check {
    pub row: u8,
    pub n: u32,
    pub e: i64,
    pub spec: SystemSpec,
    pub v_table: i64,
    pub v_computed: i64,
    pub l_table: i64,
    pub l_est: Option<i64>,
    pub primes: Vec<u64>,
    pub verdict: Verdict,
    pub note: Option<&'static str>,
    pub ok: bool,
}

/// Every Table 1 instance within `bounds`, in (row, n, e, r) order.
pub fn table1_instances(bounds: &Table1Bounds) -> Result<Vec<(u8, u32, i64, SystemSpec)>> {
    let mut out = Vec::new();
    for row in 1..=11u8 {
        for n in 0..=bounds.n_max {
            for e in 0..=bounds.e_max {
                let free_r = crate::table1::TABLE1[usize::from(row) - 1].free_r;
                let rs: Vec<usize> = if free_r { (1..=bounds.r_max).collect() } else { vec![0] };
                for r in rs {
                    let Some(s) = crate::table1::instantiate(row, n, e, r) else {
                        continue;
                    };
                    let h0 = h0_nef(DivisorClass::new(s.n(), s.a(), s.b()))?;
                    if h0 <= bounds.max_cols {
                        out.push((row, n, e, s));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Compare each instance's printed `(v, l)` with the formula and the oracle.
/// Special rows must be confirmed at `cfg.confirmations` primes.
pub fn verify_table1(bounds: &Table1Bounds, cfg: &OracleConfig) -> Result<Vec<Table1Check>> {
    let cfg = OracleConfig {
        always_confirm: true,
        ..*cfg
    };
    table1_instances(bounds)?
        .par_iter()
        .map(|(row, n, e, s)| {
            let m = crate::table1::classify_table1(s)?
                .ok_or_else(|| Error::InvalidInput(format!("{s} does not match its own row")))?;
            let oracle = multi_prime(s, &cfg)?;
            let v_ok = m.v_table == m.v_computed || m.note.is_some();
            let ok = v_ok && oracle.l_est == Some(m.l_table) && m.row.number == *row;
            Ok(Table1Check {
                row: *row,
                n: *n,
                e: *e,
                spec: s.clone(),
                v_table: m.v_table,
                v_computed: m.v_computed,
                l_table: m.l_table,
                l_est: oracle.l_est,
                primes: oracle.reports.iter().map(|r| r.prime).collect(),
                verdict: oracle.verdict,
                note: m.note,
                ok,
            })
        })
        .collect()
}
