//! (-1)-curve classes on blow-ups of `F_n` and the negative section `Gamma_n`.
//!
//! A class `E` is a numerical (-1)-class when `E^2 = E.K = -1`. Irreducibility
//! is not decided here: general position of the points lets the lattice
//! conditions stand in for it, and the interpolation oracle checks every
//! conclusion that depends on it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{ck, Error, Result};
use crate::lattice::{canonical_class, intersect, BlowupClass, SystemSpec};

/// Witness of the rational parametrisation of the conic
/// `2b^2 - rmb - b + rm^2 - 1 = 0` through `(r, b) = (0, 1)`:
/// `b = (m^2 p + q)/(mp - 2q)`, `r = p (p(m^2 - m) + 3q) / (q (mp - 2q))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConicParam {
    pub p: i64,
    pub q: i64,
    pub b: i64,
    pub r: i64,
}

impl ConicParam {
    /// Evaluate the parametrisation; `None` when `b` or `r` is not integral.
    pub fn evaluate(m: i64, p: i64, q: i64) -> Option<ConicParam> {
        let den = m * p - 2 * q;
        if den == 0 || q == 0 {
            return None;
        }
        let b_num = m * m * p + q;
        if b_num % den != 0 {
            return None;
        }
        let r_num = p * (p * (m * m - m) + 3 * q);
        let r_den = q * den;
        if r_num % r_den != 0 {
            return None;
        }
        Some(ConicParam {
            p,
            q,
            b: b_num / den,
            r: r_num / r_den,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinusOneCurveClass {
    pub class: BlowupClass,
    pub witness: Option<ConicParam>,
}

impl MinusOneCurveClass {
    fn plain(class: BlowupClass) -> Self {
        MinusOneCurveClass {
            class,
            witness: None,
        }
    }

    /// Display as a system when every multiplicity is non-negative.
    pub fn label(&self) -> String {
        match SystemSpec::from_class(&self.class) {
            Ok(s) => s.to_string(),
            Err(_) => self.class.to_string(),
        }
    }
}

/// `E^2 = -1` and `E.K = -1`.
pub fn is_minus_one_class(c: &BlowupClass) -> bool {
    let k = canonical_class(c.n(), c.r());
    matches!(
        (intersect(c, c), intersect(c, &k)),
        (Ok(-1), Ok(-1))
    )
}

/// `Gamma_n = H - nF`, the negative section, with no multiplicity at the
/// (general) points.
pub fn gamma_class(n: u32, r: usize) -> Result<BlowupClass> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "F_0 has no negative section; both rulings play the same role".into(),
        ));
    }
    Ok(BlowupClass::new(n, -i64::from(n), 1, vec![0; r]))
}

/// The exceptional curve over point `i`, i.e. the class `E_i`.
pub fn exceptional_class(n: u32, r: usize, i: usize) -> BlowupClass {
    let mut mults = vec![0; r];
    mults[i] = -1;
    BlowupClass::new(n, 0, 0, mults)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn positive_divisors(x: i64) -> Vec<i64> {
    (1..=x).filter(|d| x % d == 0).collect()
}

/// Every homogeneous (-1)-class `L_n(a, b, m^r)` with `m >= 2`, `a >= 0`,
/// `0 <= b <= b_max`, found through the conic parametrisation.
///
/// Integrality of `r` forces `q | m(m-1)`; integrality of `b` bounds
/// `|p| <= 2 b_max + 1`. Output is sorted by `(b, r, a)`.
pub fn enumerate_homogeneous(n: u32, m: i64, b_max: i64) -> Result<Vec<MinusOneCurveClass>> {
    if m <= 1 {
        return Err(Error::InvalidInput(format!(
            "multiplicity {m}: the conic degenerates for m <= 1, use mult_one_catalogue"
        )));
    }
    if b_max < 1 {
        return Err(Error::InvalidInput(format!("b_max = {b_max} must be >= 1")));
    }
    let nn = i64::from(n);
    let p_max = ck::add(ck::mul(2, b_max)?, 1)?;
    let mut found: BTreeMap<(i64, i64, i64), ConicParam> = BTreeMap::new();
    for q in positive_divisors(m * (m - 1)) {
        for p in -p_max..=p_max {
            if gcd(p, q) != 1 {
                continue;
            }
            let Some(w) = ConicParam::evaluate(m, p, q) else {
                continue;
            };
            if w.r < 0 || w.b < 0 || w.b > b_max {
                continue;
            }
            let twice_a = w.r * m + 1 - nn * w.b - 2 * w.b;
            if twice_a < 0 || twice_a % 2 != 0 {
                continue;
            }
            let a = twice_a / 2;
            // Both equations of the (-1) system must hold, not only the conic.
            if 2 * a * w.b + nn * w.b * w.b - w.r * m * m + 1 != 0 {
                continue;
            }
            found
                .entry((w.b, w.r, a))
                .and_modify(|old| {
                    if (w.q, w.p) < (old.q, old.p) {
                        *old = w;
                    }
                })
                .or_insert(w);
        }
    }
    Ok(found
        .into_iter()
        .map(|((b, r, a), w)| {
            let class = BlowupClass::new(n, a, b, vec![m; r as usize]);
            debug_assert!(is_minus_one_class(&class));
            MinusOneCurveClass {
                class,
                witness: Some(w),
            }
        })
        .collect())
}

/// The multiplicity-one homogeneous (-1)-classes: `L_n(1,0,1)`,
/// `L_n(e,1,1^{2e+n+1})` for `e <= e_max`, and `L_1(0,2,1^5)` on `F_1`.
pub fn mult_one_catalogue(n: u32, e_max: i64) -> Vec<MinusOneCurveClass> {
    let nn = i64::from(n);
    let mut out = vec![MinusOneCurveClass::plain(BlowupClass::new(n, 1, 0, vec![1]))];
    for e in 0..=e_max.max(-1) {
        let r = (2 * e + nn + 1) as usize;
        out.push(MinusOneCurveClass::plain(BlowupClass::new(n, e, 1, vec![1; r])));
    }
    if n == 1 {
        out.push(MinusOneCurveClass::plain(BlowupClass::new(1, 0, 2, vec![1; 5])));
    }
    for c in &out {
        assert!(is_minus_one_class(&c.class), "catalogue entry {}", c.class);
    }
    out
}

/// Bounds on the (-1)-classes searched against a system: `b_E <= b_cap` and
/// every multiplicity `<= mult_cap`. A curve with `b_E` above the system's
/// `b` cannot be a fixed component of an effective system, and multiplicities
/// above the system's own are capped by convention (widen to explore).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateCap {
    pub b_cap: i64,
    pub mult_cap: i64,
}

impl CandidateCap {
    pub fn for_class(c: &BlowupClass) -> Self {
        CandidateCap {
            b_cap: c.b().max(0),
            mult_cap: c.mults.iter().copied().max().unwrap_or(0).max(0),
        }
    }

    pub fn for_spec(s: &SystemSpec) -> Self {
        CandidateCap {
            b_cap: s.b().max(0),
            mult_cap: s.max_mult(),
        }
    }
}

/// A numerical (-1)-class up to relabelling the points: `counts[j]` points
/// carry multiplicity `j` (index 0 counts the points the curve misses).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveShape {
    pub a: i64,
    pub b: i64,
    pub counts: Vec<usize>,
}

impl CurveShape {
    /// Multiplicities in descending order, one per point.
    pub fn sorted_mults(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.counts.iter().sum());
        for (j, &c) in self.counts.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(j as i64, c));
        }
        out
    }

    pub fn distinct_values(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Place the curve on the points of `target` so that large
    /// multiplicities meet large multiplicities; this minimises `E.target`
    /// over all placements. Ties among equal target multiplicities go to the
    /// lowest index.
    pub fn place_against(&self, target: &BlowupClass) -> BlowupClass {
        let r = target.r();
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&i, &j| target.mults[j].cmp(&target.mults[i]).then(i.cmp(&j)));
        self.place_in_order(target.n(), &order)
    }

    /// Assign the descending multiplicities to the points in `order`.
    pub fn place_in_order(&self, n: u32, order: &[usize]) -> BlowupClass {
        let sorted = self.sorted_mults();
        let mut mults = vec![0; order.len()];
        for (&point, &m) in order.iter().zip(&sorted) {
            mults[point] = m;
        }
        BlowupClass::new(n, self.a, self.b, mults)
    }

    /// Every distinct placement on `r` points (multinomial many).
    pub fn all_placements(&self, n: u32) -> Vec<BlowupClass> {
        let mut out = Vec::new();
        let mut current = vec![0i64; self.counts.iter().sum()];
        let mut remaining = self.counts.clone();
        fn rec(
            pos: usize,
            current: &mut Vec<i64>,
            remaining: &mut Vec<usize>,
            shape: &CurveShape,
            n: u32,
            out: &mut Vec<BlowupClass>,
        ) {
            if pos == current.len() {
                out.push(BlowupClass::new(n, shape.a, shape.b, current.clone()));
                return;
            }
            for j in (0..remaining.len()).rev() {
                if remaining[j] > 0 {
                    remaining[j] -= 1;
                    current[pos] = j as i64;
                    rec(pos + 1, current, remaining, shape, n, out);
                    remaining[j] += 1;
                }
            }
        }
        rec(0, &mut current, &mut remaining, self, n, &mut out);
        out
    }
}

/// All numerical (-1)-classes with `a >= 0`, `0 <= b <= cap.b_cap` and
/// multiplicities in `0..=cap.mult_cap` on `r` points.
pub fn enumerate_shapes(n: u32, r: usize, cap: CandidateCap) -> Result<Vec<CurveShape>> {
    let nn = i64::from(n);
    let top = cap.mult_cap.max(0) as usize;
    let mut count_vectors = Vec::new();
    let mut counts = vec![0usize; top + 1];
    fn rec(j: usize, left: usize, counts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j == 0 {
            counts[0] = left;
            out.push(counts.clone());
            return;
        }
        for c in 0..=left {
            counts[j] = c;
            rec(j - 1, left - c, counts, out);
        }
        counts[j] = 0;
    }
    rec(top, r, &mut counts, &mut count_vectors);

    let mut shapes = Vec::new();
    for counts in count_vectors {
        let (mut s1, mut s2) = (0i64, 0i64);
        for (j, &c) in counts.iter().enumerate() {
            let (j, c) = (j as i64, c as i64);
            s1 = ck::add(s1, ck::mul(j, c)?)?;
            s2 = ck::add(s2, ck::mul(ck::mul(j, j)?, c)?)?;
        }
        for b in 0..=cap.b_cap {
            let twice_a = ck::sub(ck::add(s1, 1)?, ck::mul(ck::add(nn, 2)?, b)?)?;
            if twice_a < 0 || twice_a % 2 != 0 {
                continue;
            }
            let a = twice_a / 2;
            let self_sq = ck::sub(
                ck::add(ck::mul(ck::mul(2, a)?, b)?, ck::mul(nn, ck::mul(b, b)?)?)?,
                s2,
            )?;
            if self_sq == -1 {
                shapes.push(CurveShape {
                    a,
                    b,
                    counts: counts.clone(),
                });
            }
        }
    }
    shapes.sort_by_key(|x| (x.b, x.a, x.sorted_mults()));
    Ok(shapes)
}

/// Candidate (-1)-curves that may meet `s` negatively.
///
/// Shapes with at most two distinct multiplicity values (a homogeneous family
/// on a subset of the points, or a compound family on all of them) are
/// returned in every placement; other shapes in the single placement that
/// minimises the product with `s`. Bounded by `cap`; duplicate-free.
pub fn candidate_curves(s: &SystemSpec, cap: CandidateCap) -> Result<Vec<MinusOneCurveClass>> {
    let target = s.class();
    let mut out: Vec<MinusOneCurveClass> = Vec::new();
    for shape in enumerate_shapes(s.n(), s.r(), cap)? {
        if shape.distinct_values() <= 2 {
            out.extend(shape.all_placements(s.n()).into_iter().map(MinusOneCurveClass::plain));
        } else {
            out.push(MinusOneCurveClass::plain(shape.place_against(&target)));
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|c| seen.insert((c.class.base, c.class.mults.clone())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(n: u32, a: i64, b: i64, mults: &[i64]) -> BlowupClass {
        BlowupClass::new(n, a, b, mults.to_vec())
    }

    #[test]
    fn minus_one_examples() {
        assert!(is_minus_one_class(&cls(3, 2, 1, &[1; 8])));
        assert!(is_minus_one_class(&cls(1, 0, 2, &[1; 5])));
        assert!(!is_minus_one_class(&cls(2, 0, 1, &[])));
        assert!(is_minus_one_class(&exceptional_class(4, 3, 1)));
    }

    #[test]
    fn gamma_properties() {
        let g = gamma_class(6, 11).unwrap();
        assert_eq!(g, cls(6, -6, 1, &[0; 11]));
        let s = cls(6, -2, 3, &[2; 11]);
        assert_eq!(intersect(&s, &g).unwrap(), -2);
        let g1 = gamma_class(1, 0).unwrap();
        assert_eq!(g1, cls(1, -1, 1, &[]));
        assert!(is_minus_one_class(&g1));
        for n in 1..=8 {
            let g = gamma_class(n, 2).unwrap();
            assert_eq!(intersect(&g, &g).unwrap(), -i64::from(n));
            let sys = cls(n, 5, 3, &[2, 1]);
            assert_eq!(intersect(&sys, &g).unwrap(), 5);
        }
        assert!(gamma_class(0, 3).is_err());
    }

    #[test]
    fn homogeneous_rejects_small_m() {
        assert!(matches!(enumerate_homogeneous(3, 1, 10), Err(Error::InvalidInput(_))));
        assert!(enumerate_homogeneous(3, 2, 0).is_err());
    }

    #[test]
    fn homogeneous_output_satisfies_both_equations() {
        for n in 0..=6u32 {
            for m in 2..=4 {
                for c in enumerate_homogeneous(n, m, 40).unwrap() {
                    let (a, b, r) = (c.class.a(), c.class.b(), c.class.r() as i64);
                    let nn = i64::from(n);
                    assert_eq!(2 * a * b + nn * b * b - r * m * m + 1, 0);
                    assert_eq!(2 * a + nn * b + 2 * b - r * m - 1, 0);
                    assert!(is_minus_one_class(&c.class));
                    let w = c.witness.unwrap();
                    assert_eq!(gcd(w.p, w.q), 1);
                    assert_eq!((m * (m - 1)) % w.q, 0);
                }
            }
        }
    }

    #[test]
    fn homogeneous_output_is_sorted_and_unique() {
        let found = enumerate_homogeneous(1, 2, 10).unwrap();
        for c in &found {
            assert!(c.class.a() >= 0);
        }
        let keys: Vec<_> = found.iter().map(|c| (c.class.a(), c.class.b(), c.class.r())).collect();
        let mut sorted = keys.clone();
        sorted.sort_by_key(|&(a, b, r)| (b, r, a));
        sorted.dedup();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn catalogue_contents() {
        let c = mult_one_catalogue(1, 0);
        let labels: Vec<_> = c.iter().map(|x| x.label()).collect();
        assert_eq!(labels, vec!["L1(1,0,1)", "L1(0,1,1^2)", "L1(0,2,1^5)"]);
        let c5 = mult_one_catalogue(5, 2);
        assert!(c5.iter().any(|x| x.label() == "L5(2,1,1^10)"));
    }

    #[test]
    fn candidates_for_fibered_system() {
        let s = SystemSpec::homogeneous(3, 7, 0, 2, 4).unwrap();
        let cands = candidate_curves(&s, CandidateCap::for_spec(&s)).unwrap();
        let fibers: Vec<_> = cands
            .iter()
            .filter(|c| c.class.a() == 1 && c.class.b() == 0)
            .collect();
        assert_eq!(fibers.len(), 4);
        for c in &cands {
            assert!(is_minus_one_class(&c.class));
        }
    }

    #[test]
    fn candidates_for_worked_example() {
        let s = SystemSpec::homogeneous(6, 0, 4, 3, 11).unwrap();
        let cands = candidate_curves(&s, CandidateCap::for_spec(&s)).unwrap();
        let e = cls(6, 2, 1, &[1; 11]);
        assert!(cands.iter().any(|c| c.class == e));
    }

    #[test]
    fn no_points_no_candidates() {
        let s = SystemSpec::new(2, 3, 3, vec![]).unwrap();
        let cands = candidate_curves(&s, CandidateCap { b_cap: 5, mult_cap: 3 }).unwrap();
        assert!(cands.iter().all(|c| c.class.mults.iter().all(|&m| m == 0)));
        assert!(cands.is_empty());
    }

    #[test]
    fn compound_placements_are_disjoint() {
        // Two placements of a compound family (one point of multiplicity m1,
        // the rest m2 = m1 -+ 1) never meet.
        for n in 0..=4u32 {
            for r in 2..=8usize {
                let cap = CandidateCap { b_cap: 6, mult_cap: 3 };
                for shape in enumerate_shapes(n, r, cap).unwrap() {
                    let nonzero: Vec<_> = shape
                        .counts
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .collect();
                    if nonzero.len() != 2 {
                        continue;
                    }
                    let singles: Vec<_> = nonzero.iter().filter(|(_, &c)| c == 1).collect();
                    if singles.is_empty() || (nonzero[0].0 as i64 - nonzero[1].0 as i64).abs() != 1 {
                        continue;
                    }
                    let m1 = singles[0].0 as i64;
                    let m2 = nonzero.iter().find(|(j, _)| *j as i64 != m1).unwrap().0 as i64;
                    let mut v1 = vec![m2; r];
                    v1[0] = m1;
                    let mut v2 = vec![m2; r];
                    v2[1] = m1;
                    let a1 = BlowupClass::new(n, shape.a, shape.b, v1);
                    let a2 = BlowupClass::new(n, shape.a, shape.b, v2);
                    assert_eq!(intersect(&a1, &a2).unwrap(), 0, "{a1} vs {a2}");
                }
            }
        }
    }

    #[test]
    fn placement_minimises_product() {
        let target = cls(2, 3, 4, &[1, 3, 2, 3]);
        let cap = CandidateCap::for_class(&target);
        for shape in enumerate_shapes(2, 4, cap).unwrap() {
            let best = intersect(&target, &shape.place_against(&target)).unwrap();
            for p in shape.all_placements(2) {
                assert!(intersect(&target, &p).unwrap() >= best);
            }
        }
    }
}
