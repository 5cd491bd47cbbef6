//! Fixed-component reduction and the (-1)-speciality verdict.
//!
//! Starting from a system `L`, repeatedly remove `|L.E|` copies of a (-1)-curve
//! `E` meeting `L` negatively; when no such curve is left and `L` meets the
//! negative section `Gamma_n` negatively, remove one `Gamma_n` and start over.
//! The residual `M` predicts `l(L) = max(v(M), -1)`, and `L` is (-1)-special
//! when that exceeds the expected dimension, i.e. `v(M) > v(L)` with `M`
//! non-empty.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curves::{enumerate_shapes, exceptional_class, gamma_class, CandidateCap, CurveShape};
use crate::error::{Error, Result};
use crate::lattice::{expected_dim, intersect, virtual_dim, BlowupClass, SystemSpec};
use crate::table1::{classify_table1, Table1Match};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// A (-1)-curve through some of the points.
    MinusOne,
    /// The negative section `Gamma_n`.
    Gamma,
    /// An exceptional curve `E_i`, removed when a multiplicity went negative.
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub class: BlowupClass,
    pub coefficient: i64,
}

/// Why the residual is empty, when it is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Residual {
    Effective,
    /// The class left the effective cone: the original system is empty.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub initial: SystemSpec,
    pub steps: Vec<ReductionStep>,
    /// Residual class, on the same (possibly ruling-swapped) labels as the steps.
    pub final_class: BlowupClass,
    pub residual: Residual,
    /// On `F_0` the rulings are swapped so that `a <= b` before reducing.
    pub swapped_rulings: bool,
    pub cap: CandidateCap,
}

impl ReductionTrace {
    /// The class the steps start from: `initial`, after the ruling swap on `F_0`.
    pub fn start_class(&self) -> BlowupClass {
        oriented(&self.initial, self.swapped_rulings)
    }

    /// `start = final + sum coefficient * class`, exactly.
    pub fn conserves_class(&self) -> Result<bool> {
        let mut total = self.final_class.clone();
        for step in &self.steps {
            total = total.add_scaled(&step.class, step.coefficient)?;
        }
        Ok(total == self.start_class())
    }

    /// Residual as a system, when it is effective.
    pub fn residual_spec(&self) -> Option<SystemSpec> {
        match self.residual {
            Residual::Effective => SystemSpec::from_class(&self.final_class).ok(),
            Residual::Empty => None,
        }
    }
}

fn oriented(s: &SystemSpec, swap: bool) -> BlowupClass {
    let mut c = s.class();
    if swap {
        std::mem::swap(&mut c.base.a, &mut c.base.b);
    }
    c
}

/// How the next curve is chosen when several meet the class negatively.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveOrder {
    /// Most negative product first, ties by the canonical class order.
    Greedy,
    /// Uniformly among the negative ones; used to test order independence.
    Random(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct ReduceOptions {
    pub max_steps: usize,
    /// Overrides the default cap derived from the system.
    pub cap: Option<CandidateCap>,
    pub order: CurveOrder,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            max_steps: 10_000,
            cap: None,
            order: CurveOrder::Greedy,
        }
    }
}

pub fn reduce(s: &SystemSpec) -> Result<ReductionTrace> {
    reduce_with(s, ReduceOptions::default())
}

pub fn reduce_with(s: &SystemSpec, opts: ReduceOptions) -> Result<ReductionTrace> {
    let n = s.n();
    let r = s.r();
    let swapped_rulings = n == 0 && s.a() > s.b();
    let mut current = oriented(s, swapped_rulings);
    let cap = opts.cap.unwrap_or_else(|| CandidateCap {
        b_cap: current.b().max(0),
        mult_cap: s.max_mult(),
    });
    let shapes = enumerate_shapes(n, r, cap)?;
    let gamma = if n >= 1 { Some(gamma_class(n, r)?) } else { None };
    let mut rng = match opts.order {
        CurveOrder::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        CurveOrder::Greedy => None,
    };

    let mut trace = ReductionTrace {
        initial: s.clone(),
        steps: Vec::new(),
        final_class: current.clone(),
        residual: Residual::Effective,
        swapped_rulings,
        cap,
    };

    loop {
        if trace.steps.len() >= opts.max_steps {
            trace.final_class = current;
            return Err(Error::NonTermination {
                limit: opts.max_steps,
                partial: Box::new(trace),
            });
        }
        if current.b() < 0 || (n == 0 && current.a() < 0) {
            trace.residual = Residual::Empty;
            break;
        }

        // Step 1: a (-1)-curve with negative product.
        let negative = negative_curves(&current, &shapes, rng.as_mut())?;
        let pick = match rng.as_mut() {
            Some(rng) => negative.choose(rng).cloned(),
            None => negative.into_iter().next(),
        };
        if let Some((kind, class, product)) = pick {
            current = current.sub_scaled(&class, -product)?;
            trace.steps.push(ReductionStep {
                kind,
                class,
                coefficient: -product,
            });
            continue;
        }

        // Step 2: the negative section.
        if let Some(g) = &gamma {
            if intersect(&current, g)? < 0 {
                current = current.sub_scaled(g, 1)?;
                trace.steps.push(ReductionStep {
                    kind: StepKind::Gamma,
                    class: g.clone(),
                    coefficient: 1,
                });
                continue;
            }
        }
        break;
    }
    trace.final_class = current;
    Ok(trace)
}

/// Curves meeting `current` negatively, most negative first (greedy order
/// keeps the first minimum in canonical order). With an rng, placements break
/// ties among equal multiplicities at random.
fn negative_curves(
    current: &BlowupClass,
    shapes: &[CurveShape],
    mut rng: Option<&mut ChaCha8Rng>,
) -> Result<Vec<(StepKind, BlowupClass, i64)>> {
    let mut out = Vec::new();
    for (i, &m) in current.mults.iter().enumerate() {
        if m < 0 {
            out.push((StepKind::Exceptional, exceptional_class(current.n(), current.r(), i), m));
        }
    }
    for shape in shapes {
        let placed = match rng.as_deref_mut() {
            None => shape.place_against(current),
            Some(rng) => {
                let mut order: Vec<usize> = (0..current.r()).collect();
                order.shuffle(rng);
                order.sort_by(|&i, &j| current.mults[j].cmp(&current.mults[i]));
                shape.place_in_order(current.n(), &order)
            }
        };
        let d = intersect(current, &placed)?;
        if d < 0 {
            out.push((StepKind::MinusOne, placed, d));
        }
    }
    // Stable: equal products keep the canonical enumeration order.
    out.sort_by_key(|(_, _, d)| *d);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecialityVerdict {
    pub spec: SystemSpec,
    pub minus_one_special: bool,
    pub v_initial: i64,
    /// Riemann-Roch value of the residual class.
    pub v_final: i64,
    pub expected: i64,
    /// `max(v(M), -1)` for an effective residual, `-1` when the system is empty.
    pub predicted_l: i64,
    pub trace: ReductionTrace,
    pub table_row: Option<Table1Match>,
}

impl SpecialityVerdict {
    /// Predicted speciality: `l > e`.
    pub fn special(&self) -> bool {
        self.predicted_l > self.expected
    }
}

pub fn is_minus_one_special(s: &SystemSpec) -> Result<SpecialityVerdict> {
    verdict_from_trace(reduce(s)?)
}

pub fn verdict_from_trace(trace: ReductionTrace) -> Result<SpecialityVerdict> {
    let s = trace.initial.clone();
    let v_initial = virtual_dim(&s)?;
    let expected = expected_dim(&s)?;
    let v_final = trace.final_class.riemann_roch()?;
    let effective = trace.residual == Residual::Effective;
    let minus_one_special = effective && v_final > v_initial && v_final >= 0;
    let predicted_l = if effective { v_final.max(-1) } else { -1 };
    let table_row = match s.homogeneous_mult() {
        Some(m) if (1..=3).contains(&m) => classify_table1(&s)?,
        _ => None,
    };
    Ok(SpecialityVerdict {
        spec: s,
        minus_one_special,
        v_initial,
        v_final,
        expected,
        predicted_l,
        trace,
        table_row,
    })
}

/// `r! / (k_1! ... k_s!)`, the number of distinct placements of a curve whose
/// multiplicity pattern has `k_i` points of the `i`-th value.
pub fn orbit_count(r: u64, k: &[u64]) -> Result<u128> {
    check_composition(r, k)?;
    let mut total: u128 = 1;
    let mut placed: u64 = 0;
    for &ki in k {
        placed += ki;
        total = total
            .checked_mul(binomial(placed, ki)?)
            .ok_or(Error::Overflow("multinomial"))?;
    }
    Ok(total)
}

/// `k_1! ... k_s! <= (r - s + 1)!` for a composition of `r` into `s` parts.
pub fn orbit_bound_holds(r: u64, k: &[u64]) -> Result<bool> {
    check_composition(r, k)?;
    let lhs = k
        .iter()
        .try_fold(1u128, |acc, &ki| acc.checked_mul(factorial(ki)?).ok_or(Error::Overflow("factorial product")))?;
    let rhs = factorial(r + 1 - k.len() as u64)?;
    Ok(lhs <= rhs)
}

fn check_composition(r: u64, k: &[u64]) -> Result<()> {
    if k.is_empty() || k.contains(&0) {
        return Err(Error::InvalidInput("parts must be positive and non-empty".into()));
    }
    let sum = k.iter().try_fold(0u64, |acc, &x| acc.checked_add(x));
    if sum != Some(r) {
        return Err(Error::InvalidInput(format!("parts {k:?} do not sum to {r}")));
    }
    Ok(())
}

fn factorial(x: u64) -> Result<u128> {
    (1..=u128::from(x)).try_fold(1u128, |acc, i| acc.checked_mul(i).ok_or(Error::Overflow("factorial")))
}

fn binomial(n: u64, k: u64) -> Result<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..u128::from(k) {
        acc = acc
            .checked_mul(u128::from(n) - i)
            .ok_or(Error::Overflow("binomial"))?
            / (i + 1);
    }
    Ok(acc)
}

/// Final class of a greedy reduction, up to relabelling the points.
pub fn residual_key(s: &SystemSpec) -> Result<BlowupClass> {
    Ok(reduce(s)?.final_class.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> SystemSpec {
        text.parse().unwrap()
    }

    fn cls(n: u32, a: i64, b: i64, mults: &[i64]) -> BlowupClass {
        BlowupClass::new(n, a, b, mults.to_vec())
    }

    #[test]
    fn worked_example_on_f6() {
        let t = reduce(&spec("L6(0,4,3^11)")).unwrap();
        let e = cls(6, 2, 1, &[1; 11]);
        let g = gamma_class(6, 11).unwrap();
        let got: Vec<_> = t.steps.iter().map(|s| (s.kind, s.class.clone(), s.coefficient)).collect();
        assert_eq!(
            got,
            vec![
                (StepKind::MinusOne, e.clone(), 1),
                (StepKind::Gamma, g, 1),
                (StepKind::MinusOne, e, 2),
            ]
        );
        assert!(t.final_class.is_zero());
        assert!(t.conserves_class().unwrap());
    }

    #[test]
    fn nef_system_is_untouched() {
        for n in 0..4 {
            let s = SystemSpec::new(n, 1, 1, vec![]).unwrap();
            let t = reduce(&s).unwrap();
            assert!(t.steps.is_empty());
            assert_eq!(t.final_class, s.class());
        }
    }

    #[test]
    fn fibers_removed_twice() {
        let t = reduce(&spec("L3(7,0,2^2)")).unwrap();
        assert_eq!(t.steps.len(), 2);
        for step in &t.steps {
            assert_eq!(step.kind, StepKind::MinusOne);
            assert_eq!((step.class.a(), step.class.b()), (1, 0));
            assert_eq!(step.coefficient, 2);
        }
        assert_eq!(t.final_class, cls(3, 3, 0, &[0, 0]));
        assert!(t.conserves_class().unwrap());
    }

    #[test]
    fn verdict_examples() {
        let v = is_minus_one_special(&spec("L6(0,4,3^11)")).unwrap();
        assert!(v.minus_one_special);
        assert_eq!((v.v_initial, v.v_final, v.predicted_l), (-2, 0, 0));

        let v = is_minus_one_special(&spec("L3(2,1,1^8)")).unwrap();
        assert!(!v.minus_one_special);
        assert_eq!((v.v_initial, v.v_final), (0, 0));

        let v = is_minus_one_special(&spec("L2(0,3,2^5)")).unwrap();
        assert!(!v.minus_one_special);
        assert_eq!(v.predicted_l, 0);
    }

    #[test]
    fn empty_systems_are_not_special() {
        // Two double fibers exhaust a = 3 < 4: the system is empty.
        let v = is_minus_one_special(&spec("L2(3,0,2^2)")).unwrap();
        assert_eq!(v.trace.residual, Residual::Empty);
        assert!(!v.minus_one_special);
        assert_eq!(v.predicted_l, -1);
    }

    #[test]
    fn f0_rulings_are_symmetric() {
        let a = is_minus_one_special(&spec("L0(7,0,2^2)")).unwrap();
        let b = is_minus_one_special(&spec("L0(0,7,2^2)")).unwrap();
        assert!(a.trace.swapped_rulings);
        assert_eq!(a.predicted_l, 3);
        assert_eq!(a.predicted_l, b.predicted_l);
        assert!(a.minus_one_special && b.minus_one_special);
    }

    #[test]
    fn random_order_reaches_same_residual() {
        for text in ["L6(0,4,3^11)", "L5(1,4,3^10)", "L1(0,6,3^5)", "L2(4,3,3^6)"] {
            let s = spec(text);
            let greedy = reduce(&s).unwrap();
            for seed in 0..5 {
                let opts = ReduceOptions {
                    order: CurveOrder::Random(seed),
                    ..ReduceOptions::default()
                };
                let t = reduce_with(&s, opts).unwrap();
                assert!(t.conserves_class().unwrap());
                assert_eq!(t.residual, greedy.residual, "{text} seed {seed}");
                if t.residual == Residual::Effective {
                    assert!(t.final_class.canonical_eq(&greedy.final_class), "{text} seed {seed}");
                }
            }
        }
    }

    #[test]
    fn non_termination_guard_reports_partial_trace() {
        let opts = ReduceOptions {
            max_steps: 1,
            ..ReduceOptions::default()
        };
        match reduce_with(&spec("L6(0,4,3^11)"), opts) {
            Err(Error::NonTermination { limit, partial }) => {
                assert_eq!(limit, 1);
                assert_eq!(partial.steps.len(), 1);
            }
            other => panic!("expected guard, got {other:?}"),
        }
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(orbit_count(3, &[1, 2]).unwrap(), 3);
        assert_eq!(orbit_count(5, &[1, 4]).unwrap(), 5);
        assert_eq!(orbit_count(6, &[2, 2, 2]).unwrap(), 90);
        assert!(orbit_count(6, &[2, 2]).is_err());
    }

    #[test]
    fn orbit_bounds() {
        assert!(orbit_bound_holds(7, &[3, 4]).unwrap());
        assert!(orbit_bound_holds(4, &[1, 1, 1, 1]).unwrap());
        assert!(orbit_bound_holds(10, &[5, 5]).unwrap());
    }

    #[test]
    fn orbit_bound_exhaustive_up_to_twelve() {
        fn compositions(r: u64, prefix: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
            let used: u64 = prefix.iter().sum();
            if used == r {
                f(prefix);
                return;
            }
            for k in 1..=r - used {
                prefix.push(k);
                compositions(r, prefix, f);
                prefix.pop();
            }
        }
        for r in 1..=12 {
            let mut count = 0;
            compositions(r, &mut Vec::new(), &mut |k| {
                count += 1;
                assert!(orbit_bound_holds(r, k).unwrap(), "{r} {k:?}");
                let direct = factorial(r).unwrap()
                    / k.iter().map(|&x| factorial(x).unwrap()).product::<u128>();
                assert_eq!(orbit_count(r, k).unwrap(), direct);
            });
            assert_eq!(count, 1 << (r - 1));
        }
    }
}
