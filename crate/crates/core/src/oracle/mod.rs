//! Independent effective dimension: impose the multiplicity conditions at
//! random points over `F_p` and take the exact rank.
//!
//! A point of multiplicity `m` gives the rows `d_x^al d_y^be f = 0` for
//! `al + be < m`. Rank at specific points never exceeds the generic rank, so
//! `l_est = h0 - 1 - rank` is an upper bound for the generic dimension over
//! `F_p`; reaching the expected dimension certifies non-speciality (also in
//! characteristic 0, since reduction mod `p` can only lose rank). A special
//! verdict holds with failure probability at most `(D/p)^trials`, `D` the
//! degree of a maximal minor in the point coordinates, and only for `p`
//! generic; the characteristic-0 statement is inferred, not proven.

pub mod basis;
pub mod field;
pub mod rank;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{expected_dim, virtual_dim, SystemSpec};

pub use basis::{basis, MonomialBasis};
pub use field::{is_prime, prime_ladder, Field, DEFAULT_PRIME};
pub use rank::Matrix;

pub const DEFAULT_TRIALS: usize = 3;
pub const DEFAULT_SEED: u64 = 42;

pub const CHAR_P_NOTE: &str = "finite-field estimate: non-special verdicts are exact; special verdicts hold \
over F_p with the stated failure bound (char-0 speciality implied for generic p)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Special,
    NonSpecial,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Special => "special",
            Verdict::NonSpecial => "non-special",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub spec: SystemSpec,
    pub prime: u64,
    /// Seeds actually run; trials stop early once the rank is maximal.
    pub seeds: Vec<u64>,
    pub h0: i64,
    pub conditions: i64,
    pub rank_per_seed: Vec<usize>,
    pub l_est: i64,
    pub expected: i64,
    pub deficiency: i64,
    pub verdict: Verdict,
    /// Upper bound on the probability that a special verdict is wrong.
    pub failure_bound: f64,
    pub note: &'static str,
}

/// Points sampled in the torus with distinct `x`, as plain residues.
pub fn sample_points(r: usize, p: u64, rng: &mut impl Rng) -> Result<Vec<(u64, u64)>> {
    if r as u64 >= p {
        return Err(Error::InvalidInput(format!(
            "{r} points with distinct nonzero x need a field larger than {p}"
        )));
    }
    let mut pts: Vec<(u64, u64)> = Vec::with_capacity(r);
    while pts.len() < r {
        let x = rng.gen_range(1..p);
        let y = rng.gen_range(1..p);
        if pts.iter().all(|&(px, _)| px != x) {
            pts.push((x, y));
        }
    }
    Ok(pts)
}

pub fn condition_matrix(s: &SystemSpec, points: &[(u64, u64)], p: u64) -> Result<Matrix> {
    let f = Field::new(p)?;
    condition_matrix_in(&f, s, points)
}

fn condition_matrix_in(f: &Field, s: &SystemSpec, points: &[(u64, u64)]) -> Result<Matrix> {
    let max_mult = s.max_mult();
    if u64::try_from(max_mult).map_or(true, |m| f.modulus() <= m) {
        return Err(Error::FieldTooSmall {
            prime: f.modulus(),
            max_mult,
        });
    }
    if points.len() != s.r() {
        return Err(Error::InvalidInput(format!(
            "{} points supplied for {} base points",
            points.len(),
            s.r()
        )));
    }
    let basis = basis::staircase(s.n(), s.a(), s.b())?;
    let rows = usize::try_from(s.condition_count()?).expect("non-negative");
    let cols = basis.len();
    let mut m = Matrix::zeros(rows, cols);
    let max_x = basis.max_x_degree() as usize;
    let max_y = basis.max_y_degree() as usize;
    // falling[d][i] = i (i-1) ... (i-d+1)
    let top = max_x.max(max_y);
    let order = max_mult as usize;
    let mut falling = vec![vec![0u64; top + 1]; order];
    for (d, row) in falling.iter_mut().enumerate() {
        for (i, slot) in row.iter_mut().enumerate() {
            *slot = if i < d {
                0
            } else {
                ((i - d + 1)..=i).fold(f.one(), |acc, t| f.mul(acc, f.enter(t as u64)))
            };
        }
    }
    let mut row_index = 0;
    let mut xp = vec![0u64; max_x + 1];
    let mut yp = vec![0u64; max_y + 1];
    for (&mult, &(x, y)) in s.mults().iter().zip(points) {
        let (xm, ym) = (f.enter(x), f.enter(y));
        xp[0] = f.one();
        for i in 1..=max_x {
            xp[i] = f.mul(xp[i - 1], xm);
        }
        yp[0] = f.one();
        for k in 1..=max_y {
            yp[k] = f.mul(yp[k - 1], ym);
        }
        let mult = mult as usize;
        for al in 0..mult {
            for be in 0..mult - al {
                let out = m.row_mut(row_index);
                for (slot, &(i, k)) in out.iter_mut().zip(&basis.exponents) {
                    let (i, k) = (i as usize, k as usize);
                    if i < al || k < be {
                        continue;
                    }
                    let coeff = f.mul(falling[al][i], falling[be][k]);
                    *slot = f.mul(coeff, f.mul(xp[i - al], yp[k - be]));
                }
                row_index += 1;
            }
        }
    }
    debug_assert_eq!(row_index, rows);
    Ok(m)
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add((trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Estimate `l` over `F_p` from up to `trials` independent point samples.
pub fn effective_dim_mc(s: &SystemSpec, p: u64, trials: usize) -> Result<OracleReport> {
    effective_dim_seeded(s, p, trials, DEFAULT_SEED)
}

pub fn effective_dim_seeded(s: &SystemSpec, p: u64, trials: usize, seed: u64) -> Result<OracleReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is needed".into()));
    }
    let f = Field::new(p)?;
    let v = virtual_dim(s)?;
    let expected = expected_dim(s)?;
    let conditions = s.condition_count()?;
    let basis = basis::staircase(s.n(), s.a(), s.b())?;
    let h0 = basis.len() as i64;
    let full = (h0.min(conditions)) as usize;
    let mut seeds = Vec::new();
    let mut ranks = Vec::new();
    for t in 0..trials {
        let sd = trial_seed(seed, t);
        let mut rng = ChaCha8Rng::seed_from_u64(sd);
        let pts = sample_points(s.r(), p, &mut rng)?;
        let rk = rank::rank(&f, condition_matrix_in(&f, s, &pts)?);
        seeds.push(sd);
        ranks.push(rk);
        if rk == full {
            break;
        }
    }
    let best = *ranks.iter().max().expect("at least one trial");
    let l_est = h0 - 1 - best as i64;
    debug_assert!(v <= expected && expected <= l_est.max(expected));
    let verdict = if l_est == expected {
        Verdict::NonSpecial
    } else if l_est > expected && ranks.iter().all(|&x| x == best) {
        Verdict::Special
    } else {
        Verdict::Inconclusive
    };
    let degree = (basis.max_x_degree() + basis.max_y_degree()) as f64 * best.max(1) as f64;
    let failure_bound = match verdict {
        Verdict::NonSpecial => 0.0,
        _ => (degree / p as f64).min(1.0).powi(ranks.len() as i32),
    };
    Ok(OracleReport {
        spec: s.clone(),
        prime: p,
        seeds,
        h0,
        conditions,
        rank_per_seed: ranks,
        l_est,
        expected,
        deficiency: l_est - expected,
        verdict,
        failure_bound,
        note: CHAR_P_NOTE,
    })
}

/// Verdict at the default prime, trials and seed.
pub fn is_special_mc(s: &SystemSpec) -> Result<Verdict> {
    Ok(effective_dim_mc(s, DEFAULT_PRIME, DEFAULT_TRIALS)?.verdict)
}

/// Reports over several primes and the verdict they support together.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiPrimeReport {
    pub reports: Vec<OracleReport>,
    /// The common `l_est` when the confirming primes agree.
    pub l_est: Option<i64>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
    /// Primes that must agree before a special verdict is accepted.
    pub confirmations: usize,
    /// Total primes tried before giving up as inconclusive.
    pub max_primes: usize,
    /// Run `confirmations` primes even for non-special results.
    pub always_confirm: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            prime: DEFAULT_PRIME,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            confirmations: 2,
            max_primes: 4,
            always_confirm: false,
        }
    }
}

/// Run primes from the ladder until `confirmations` consecutive primes give
/// the same conclusive `l_est`. Non-special at one prime is already exact
/// unless `always_confirm` asks for more.
pub fn multi_prime(s: &SystemSpec, cfg: &OracleConfig) -> Result<MultiPrimeReport> {
    let ladder = prime_ladder(cfg.prime, cfg.max_primes.max(1));
    let need = cfg.confirmations.max(1);
    let mut reports: Vec<OracleReport> = Vec::new();
    let mut streak = 0usize;
    for &p in &ladder {
        let rep = effective_dim_seeded(s, p, cfg.trials, cfg.seed)?;
        let conclusive = rep.verdict != Verdict::Inconclusive;
        let same = reports
            .last()
            .is_some_and(|prev| prev.l_est == rep.l_est && prev.verdict == rep.verdict);
        streak = match (conclusive, same) {
            (false, _) => 0,
            (true, true) => streak + 1,
            (true, false) => 1,
        };
        let verdict = rep.verdict;
        let l = rep.l_est;
        reports.push(rep);
        let enough = if verdict == Verdict::NonSpecial && !cfg.always_confirm {
            true
        } else {
            streak >= need
        };
        if conclusive && enough {
            return Ok(MultiPrimeReport {
                reports,
                l_est: Some(l),
                verdict,
            });
        }
    }
    Ok(MultiPrimeReport {
        reports,
        l_est: None,
        verdict: Verdict::Inconclusive,
    })
}
