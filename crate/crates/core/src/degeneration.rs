//! `(k, s)`-degenerations of `F_n` and a recursive dimension prover.
//!
//! Degenerating `F_n` to `F~ u F` glued along `R` (a section on `F~`, the
//! negative section on `F`) splits `L_n(a, b, m^r)` into four systems:
//!
//! ```text
//! L~  = L_n(a, b-k, m^(r-s))        L   = L_n(a + n(b-k), k, m^s)
//! L^~ = L_n(a, b-k-1, m^(r-s))      L^  = L_n(a + n(b-k+1), k-1, m^s)
//! ```
//!
//! with the `s` moved points on `F`, and the hatted systems the kernels of
//! restriction to `R`. Sections on the central fiber are pairs agreeing on
//! `R`; with transverse restrictions this gives `l0`, and semicontinuity
//! gives `l <= l0`. A node of a certificate proves `l = e` by exhibiting a
//! split with `l0 = e`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{ck, Error, Result};
use crate::lattice::{expected_dim, h0_nef, virtual_dim, DivisorClass, SystemSpec};
use crate::oracle::{multi_prime, OracleConfig, Verdict};
use crate::reduction::{is_minus_one_special, SpecialityVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerationSplit {
    pub parent: SystemSpec,
    pub k: i64,
    pub s: usize,
    pub l_tilde: SystemSpec,
    pub l_exc: SystemSpec,
    pub lhat_tilde: SystemSpec,
    pub lhat_exc: SystemSpec,
}

impl DegenerationSplit {
    /// Degree of the restrictions to `R`: `a + n(b - k)`.
    pub fn glue_degree(&self) -> i64 {
        self.parent.a() + i64::from(self.parent.n()) * (self.parent.b() - self.k)
    }

    /// `v~ + v = v(L) + a + n(b-k)`.
    pub fn identity_i(&self) -> Result<bool> {
        let lhs = ck::add(virtual_dim(&self.l_tilde)?, virtual_dim(&self.l_exc)?)?;
        Ok(lhs == ck::add(virtual_dim(&self.parent)?, self.glue_degree())?)
    }

    /// `v^ + v~ = v^~ + v = v(L) - 1`.
    pub fn identity_ii(&self) -> Result<bool> {
        let target = virtual_dim(&self.parent)? - 1;
        let left = ck::add(virtual_dim(&self.lhat_exc)?, virtual_dim(&self.l_tilde)?)?;
        let right = ck::add(virtual_dim(&self.lhat_tilde)?, virtual_dim(&self.l_exc)?)?;
        Ok(left == target && right == target)
    }

    pub fn pieces(&self) -> [&SystemSpec; 4] {
        [&self.l_tilde, &self.l_exc, &self.lhat_tilde, &self.lhat_exc]
    }
}

/// The four systems of a `(k, s)`-degeneration of a homogeneous system.
pub fn split(sys: &SystemSpec, k: i64, points_to_exc: usize) -> Result<DegenerationSplit> {
    let Some(m) = sys.homogeneous_mult() else {
        return Err(Error::InvalidInput(format!("{sys} is not homogeneous with r >= 1")));
    };
    let (n, a, b, r) = (sys.n(), sys.a(), sys.b(), sys.r());
    if k < 0 || k > b {
        return Err(Error::OutOfRange(format!("k = {k} outside 0..={b}")));
    }
    if points_to_exc > r {
        return Err(Error::OutOfRange(format!("s = {points_to_exc} outside 0..={r}")));
    }
    let nn = i64::from(n);
    let s = points_to_exc;
    let out = DegenerationSplit {
        parent: sys.clone(),
        k,
        s,
        l_tilde: SystemSpec::homogeneous(n, a, b - k, m, r - s)?,
        l_exc: SystemSpec::homogeneous(n, ck::add(a, ck::mul(nn, b - k)?)?, k, m, s)?,
        lhat_tilde: SystemSpec::homogeneous(n, a, b - k - 1, m, r - s)?,
        lhat_exc: SystemSpec::homogeneous(n, ck::add(a, ck::mul(nn, b - k + 1)?)?, k - 1, m, s)?,
    };
    assert!(out.identity_i()? && out.identity_ii()?, "Remark 6.2 identities fail for {sys}, k={k}, s={s}");
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Restrictions meet trivially: `l0 = l^~ + l^ + 1`.
    Kernels,
    /// Restrictions meet in the expected dimension: `l0 = l~ + l - a - n(b-k)`.
    Restrictions,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::Kernels => "(iii)",
            Rule::Restrictions => "(iv)",
        }
    }
}

/// `l0` of the central fiber from the four dimensions (`-1` for empty),
/// assuming transverse restrictions to `R`.
pub fn recombine_dim(
    sp: &DegenerationSplit,
    l_tilde: i64,
    l_exc: i64,
    lhat_tilde: i64,
    lhat_exc: i64,
) -> Result<(i64, Rule)> {
    let r_tilde = l_tilde - lhat_tilde - 1;
    let r_exc = l_exc - lhat_exc - 1;
    if [l_tilde, l_exc, lhat_tilde, lhat_exc].iter().any(|&l| l < -1) || r_tilde < -1 || r_exc < -1 {
        return Err(Error::InvalidInput(format!(
            "inconsistent dimensions ({l_tilde}, {l_exc}; {lhat_tilde}, {lhat_exc})"
        )));
    }
    let glue = sp.glue_degree();
    let threshold = glue - 1;
    let kernels = lhat_tilde + lhat_exc + 1;
    let restrictions = l_tilde + l_exc - glue;
    let sum = r_tilde + r_exc;
    if sum == threshold {
        assert_eq!(kernels, restrictions, "rules (iii) and (iv) disagree at the threshold");
    }
    Ok(if sum <= threshold {
        (kernels, Rule::Kernels)
    } else {
        (restrictions, Rule::Restrictions)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "leaf")]
pub enum LeafKind {
    /// Negative `H` coefficient.
    Empty,
    /// No base points: `l = h0 - 1`.
    NoPoints,
    TableRow { row: u8 },
    /// (-1)-special outside the table; `l` from the reduction.
    MinusOneSpecial,
    /// `b <= m + 1`.
    LowDegree,
    /// `r <= n + 3`.
    FewPoints,
    /// Dimension taken from the interpolation oracle.
    Oracle,
}

impl LeafKind {
    pub fn label(self) -> String {
        match self {
            LeafKind::Empty => "empty".into(),
            LeafKind::NoPoints => "no-points".into(),
            LeafKind::TableRow { row } => format!("table-row T1.{row}"),
            LeafKind::MinusOneSpecial => "(-1)-special".into(),
            LeafKind::LowDegree => "b<=m+1-base".into(),
            LeafKind::FewPoints => "few-points-base".into(),
            LeafKind::Oracle => "oracle-verified".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum NodeKind {
    Leaf {
        leaf: LeafKind,
    },
    Split {
        k: i64,
        s: usize,
        /// Whether `(k, s)` is the proof's choice rather than a search fallback.
        from_window: bool,
        rule: Rule,
        l0: i64,
        /// Indices of `L~, L, L^~, L^`.
        children: [usize; 4],
        transversality_assumed: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertNode {
    pub spec: SystemSpec,
    /// The node proves `l(spec) = claim`.
    pub claim: i64,
    pub kind: NodeKind,
}

/// A proof DAG; `nodes[root]` claims `l = e` for the root system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimCertificate {
    pub root: usize,
    pub nodes: Vec<CertNode>,
}

impl DimCertificate {
    pub fn root_node(&self) -> &CertNode {
        &self.nodes[self.root]
    }

    pub fn leaves(&self) -> impl Iterator<Item = (&CertNode, LeafKind)> {
        self.nodes.iter().filter_map(|node| match node.kind {
            NodeKind::Leaf { leaf } => Some((node, leaf)),
            NodeKind::Split { .. } => None,
        })
    }

    pub fn depth(&self) -> usize {
        fn go(c: &DimCertificate, i: usize) -> usize {
            match &c.nodes[i].kind {
                NodeKind::Leaf { .. } => 0,
                NodeKind::Split { children, .. } => 1 + children.iter().map(|&j| go(c, j)).max().unwrap_or(0),
            }
        }
        go(self, self.root)
    }

    /// Recompute every internal node from its children, and the arithmetic
    /// leaves from their formulas. Oracle-dependent leaves are left to
    /// [`verify_leaves`].
    pub fn check_structure(&self) -> Result<()> {
        let bad = |node: &CertNode, why: String| Err(Error::InvalidInput(format!("{}: {why}", node.spec)));
        for node in &self.nodes {
            match &node.kind {
                NodeKind::Split { k, s, rule, l0, children, .. } => {
                    let sp = split(&node.spec, *k, *s)?;
                    let specs = sp.pieces();
                    for (slot, want) in children.iter().zip(specs) {
                        if &self.nodes[*slot].spec != want {
                            return bad(node, format!("child {} is not {want}", self.nodes[*slot].spec));
                        }
                    }
                    let c = children.map(|i| self.nodes[i].claim);
                    let (got, got_rule) = recombine_dim(&sp, c[0], c[1], c[2], c[3])?;
                    if got != *l0 || got_rule != *rule || got != node.claim {
                        return bad(node, format!("recombination gives {got} {}, stored {l0} {}", got_rule.label(), rule.label()));
                    }
                    if node.claim != expected_dim(&node.spec)? {
                        return bad(node, "split nodes must claim the expected dimension".into());
                    }
                }
                NodeKind::Leaf { leaf: LeafKind::Empty } => {
                    if node.spec.b() >= 0 || node.claim != -1 {
                        return bad(node, "empty leaf needs b < 0 and claim -1".into());
                    }
                }
                NodeKind::Leaf { leaf: LeafKind::NoPoints } => {
                    let h0 = h0_nef(DivisorClass::new(node.spec.n(), node.spec.a(), node.spec.b()))?;
                    if node.spec.r() != 0 || node.claim != h0 - 1 {
                        return bad(node, "no-points leaf needs r = 0 and claim h0 - 1".into());
                    }
                }
                NodeKind::Leaf { .. } => {}
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafCheck {
    pub spec: SystemSpec,
    pub leaf: LeafKind,
    pub claim: i64,
    pub l_est: Option<i64>,
    pub ok: bool,
}

/// Re-run the oracle on every leaf of the certificate.
pub fn verify_leaves(cert: &DimCertificate, cfg: &OracleConfig) -> Result<Vec<LeafCheck>> {
    cert.leaves()
        .map(|(node, leaf)| {
            let rep = multi_prime(&node.spec, cfg)?;
            Ok(LeafCheck {
                spec: node.spec.clone(),
                leaf,
                claim: node.claim,
                l_est: rep.l_est,
                ok: rep.l_est == Some(node.claim),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct ProverOptions {
    /// Allow oracle leaves for sub-systems no split closes.
    pub oracle_fallback: bool,
    /// Largest `h0` an oracle leaf may have.
    pub oracle_max_h0: i64,
    pub oracle: OracleConfig,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions {
            oracle_fallback: true,
            oracle_max_h0: 3000,
            oracle: OracleConfig::default(),
        }
    }
}

/// Builds certificates, sharing sub-proofs between roots.
pub struct Prover {
    opts: ProverOptions,
    nodes: Vec<CertNode>,
    proven: HashMap<SystemSpec, Option<usize>>,
    verdicts: HashMap<SystemSpec, SpecialityVerdict>,
}

impl Default for Prover {
    fn default() -> Self {
        Prover::new(ProverOptions::default())
    }
}

impl Prover {
    pub fn new(opts: ProverOptions) -> Self {
        Prover {
            opts,
            nodes: Vec::new(),
            proven: HashMap::new(),
            verdicts: HashMap::new(),
        }
    }

    fn verdict(&mut self, s: &SystemSpec) -> Result<&SpecialityVerdict> {
        if !self.verdicts.contains_key(s) {
            let v = is_minus_one_special(s)?;
            self.verdicts.insert(s.clone(), v);
        }
        Ok(&self.verdicts[s])
    }

    /// Dimension a sub-system is expected to have, before proving it.
    fn predicted(&mut self, s: &SystemSpec) -> Result<i64> {
        if s.b() < 0 {
            return Ok(-1);
        }
        Ok(self.verdict(s)?.predicted_l)
    }

    fn push(&mut self, node: CertNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// A leaf, when one of the base regimes applies.
    fn leaf_for(&mut self, s: &SystemSpec) -> Result<Option<(LeafKind, i64)>> {
        if s.b() < 0 {
            return Ok(Some((LeafKind::Empty, -1)));
        }
        if s.r() == 0 {
            let h0 = h0_nef(DivisorClass::new(s.n(), s.a(), s.b()))?;
            return Ok(Some((LeafKind::NoPoints, h0 - 1)));
        }
        let m = s.max_mult();
        let v = self.verdict(s)?;
        let l = v.predicted_l;
        if let Some(t) = &v.table_row {
            assert_eq!(t.l_table, l, "Table 1 and reduction disagree on {s}");
            return Ok(Some((LeafKind::TableRow { row: t.row.number }, l)));
        }
        if v.minus_one_special {
            return Ok(Some((LeafKind::MinusOneSpecial, l)));
        }
        if s.b() <= m + 1 {
            return Ok(Some((LeafKind::LowDegree, l)));
        }
        if s.r() as i64 <= i64::from(s.n()) + 3 {
            return Ok(Some((LeafKind::FewPoints, l)));
        }
        Ok(None)
    }

    /// Certify `l(s)`, with a split if possible, else a leaf; `None` when
    /// nothing closes it.
    fn certify(&mut self, s: &SystemSpec, allow_oracle: bool) -> Result<Option<usize>> {
        if let Some(&done) = self.proven.get(s) {
            let oracle_leaf = done.is_some_and(|i| self.nodes[i].kind == NodeKind::Leaf { leaf: LeafKind::Oracle });
            match (done, allow_oracle) {
                (Some(_), false) if oracle_leaf => return self.certify_uncached(s, false),
                (Some(_), _) | (None, false) => return Ok(done),
                (None, true) => {}
            }
        }
        let found = self.certify_uncached(s, allow_oracle)?;
        if found.is_some() || !allow_oracle {
            self.proven.insert(s.clone(), found);
        }
        Ok(found)
    }

    fn certify_uncached(&mut self, s: &SystemSpec, allow_oracle: bool) -> Result<Option<usize>> {
        if let Some((leaf, claim)) = self.leaf_for(s)? {
            return Ok(Some(self.push(CertNode {
                spec: s.clone(),
                claim,
                kind: NodeKind::Leaf { leaf },
            })));
        }
        let claim = expected_dim(s)?;
        for (k, pts, from_window) in candidates(s)? {
            let sp = split(s, k, pts)?;
            let mut dims = [0i64; 4];
            for (slot, piece) in dims.iter_mut().zip(sp.pieces()) {
                *slot = self.predicted(piece)?;
            }
            let Ok((l0, rule)) = recombine_dim(&sp, dims[0], dims[1], dims[2], dims[3]) else {
                continue;
            };
            if l0 != claim {
                continue;
            }
            let mut children = [0usize; 4];
            let mut closed = true;
            for (slot, piece) in children.iter_mut().zip(sp.pieces()) {
                match self.certify(piece, true)? {
                    Some(i) if self.nodes[i].claim == self.predicted(piece)? => *slot = i,
                    _ => {
                        closed = false;
                        break;
                    }
                }
            }
            if closed {
                return Ok(Some(self.push(CertNode {
                    spec: s.clone(),
                    claim,
                    kind: NodeKind::Split {
                        k,
                        s: pts,
                        from_window,
                        rule,
                        l0,
                        children,
                        transversality_assumed: true,
                    },
                })));
            }
        }
        if allow_oracle && self.opts.oracle_fallback {
            let h0 = h0_nef(DivisorClass::new(s.n(), s.a(), s.b()))?;
            if h0 <= self.opts.oracle_max_h0 {
                let rep = multi_prime(s, &self.opts.oracle)?;
                if rep.verdict != Verdict::Inconclusive && rep.l_est == Some(claim) {
                    return Ok(Some(self.push(CertNode {
                        spec: s.clone(),
                        claim,
                        kind: NodeKind::Leaf { leaf: LeafKind::Oracle },
                    })));
                }
            }
        }
        Ok(None)
    }

    /// Certificate for `l = e` on a homogeneous, non-(-1)-special system with
    /// `m` in `{2, 3}`. The root is an oracle leaf only when no split closes
    /// it and the fallback is enabled.
    pub fn prove(&mut self, s: &SystemSpec) -> Result<DimCertificate> {
        match s.homogeneous_mult() {
            Some(2) | Some(3) => {}
            _ => {
                return Err(Error::Unsupported(format!(
                    "{s}: the prover covers homogeneous systems of multiplicity 2 or 3"
                )))
            }
        }
        let v = self.verdict(s)?;
        if v.minus_one_special || v.special() {
            return Err(Error::MinusOneSpecial(s.clone()));
        }
        let mut found = self.certify(s, false)?;
        if found.is_none() && self.opts.oracle_fallback {
            found = self.certify(s, true)?;
        }
        match found {
            Some(root) => Ok(self.extract(root)),
            None => Err(Error::OpenCase {
                root: s.clone(),
                stuck: s.clone(),
            }),
        }
    }

    /// The sub-DAG reachable from `root`, renumbered.
    fn extract(&self, root: usize) -> DimCertificate {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let mut order = Vec::new();
        fn visit(p: &Prover, i: usize, map: &mut HashMap<usize, usize>, order: &mut Vec<usize>) {
            if map.contains_key(&i) {
                return;
            }
            if let NodeKind::Split { children, .. } = &p.nodes[i].kind {
                for &c in children {
                    visit(p, c, map, order);
                }
            }
            map.insert(i, order.len());
            order.push(i);
        }
        visit(self, root, &mut map, &mut order);
        let nodes = order
            .iter()
            .map(|&i| {
                let mut node = self.nodes[i].clone();
                if let NodeKind::Split { children, .. } = &mut node.kind {
                    for c in children.iter_mut() {
                        *c = map[c];
                    }
                }
                node
            })
            .collect();
        DimCertificate {
            root: map[&root],
            nodes,
        }
    }
}

pub fn prove_dimension(s: &SystemSpec) -> Result<DimCertificate> {
    Prover::default().prove(s)
}

fn floor_div(x: i64, d: i64) -> i64 {
    x.div_euclid(d)
}

/// `(k, s, from_window)` in trial order: the proof's `k` with its window of
/// `s` (smallest first), then the other `s`, then every other `k`.
fn candidates(sys: &SystemSpec) -> Result<Vec<(i64, usize, bool)>> {
    let m = sys.max_mult();
    let (n, a, b, r) = (i64::from(sys.n()), sys.a(), sys.b(), sys.r() as i64);
    let v = virtual_dim(sys)?;
    let anb = a + n * b;
    let (k, lo, hi) = match (m, v < 0) {
        (2, true) => (1, floor_div(anb, 2) + 1, floor_div(2 * (anb - n + 1), 3)),
        (2, false) => (1, 0, floor_div(anb, 2)),
        (3, true) => (2, floor_div(2 * anb - n + 1, 5) + 1, floor_div(anb - n + 1, 2)),
        _ => {
            let base = a + n * (b - 1) + 1;
            let s0 = (base + base.rem_euclid(2)) / 2;
            (3, s0, s0 + 1)
        }
    };
    let allowed = |kk: i64, ss: i64| (1..=b).contains(&kk) && (0..=r).contains(&ss) && !(kk == b && ss == r);
    let mut out = Vec::new();
    if k <= b {
        for ss in lo.max(0)..=hi.min(r) {
            if allowed(k, ss) {
                out.push((k, ss as usize, true));
            }
        }
    }
    let mut ks: Vec<i64> = vec![k];
    ks.extend((1..=b).filter(|&x| x != k));
    for kk in ks {
        for ss in 0..=r {
            if allowed(kk, ss) && !out.iter().any(|&(x, y, _)| x == kk && y as i64 == ss) {
                out.push((kk, ss as usize, false));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn spec(text: &str) -> SystemSpec {
        text.parse().unwrap()
    }

    #[test]
    fn multiplicity_two_quadruple() {
        let sp = split(&spec("L2(3,5,2^9)"), 1, 4).unwrap();
        assert_eq!(sp.l_tilde.to_string(), "L2(3,4,2^5)");
        assert_eq!(sp.l_exc.to_string(), "L2(11,1,2^4)");
        assert_eq!(sp.lhat_tilde.to_string(), "L2(3,3,2^5)");
        assert_eq!(sp.lhat_exc.to_string(), "L2(13,0,2^4)");
    }

    #[test]
    fn k_zero_boundary() {
        let sp = split(&spec("L2(3,5,2^9)"), 0, 2).unwrap();
        assert_eq!(sp.l_exc.b(), 0);
        assert_eq!(sp.lhat_exc.b(), -1);
        assert!(split(&spec("L2(3,5,2^9)"), 6, 2).is_err());
        assert!(split(&spec("L2(3,5,2^9)"), 1, 10).is_err());
    }

    #[test]
    fn identities_on_random_splits() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let s = SystemSpec::homogeneous(
                rng.gen_range(0..7),
                rng.gen_range(0..20),
                rng.gen_range(0..10),
                rng.gen_range(1..5),
                rng.gen_range(1..15),
            )
            .unwrap();
            let sp = split(&s, rng.gen_range(0..=s.b()), rng.gen_range(0..=s.r())).unwrap();
            assert!(sp.identity_i().unwrap() && sp.identity_ii().unwrap(), "{s}");
        }
    }

    #[test]
    fn recombination_rules() {
        let sp = split(&spec("L2(3,5,2^9)"), 1, 4).unwrap();
        // all empty
        assert_eq!(recombine_dim(&sp, -1, -1, -1, -1).unwrap(), (-1, Rule::Kernels));
        // kernels 0 and 2, restrictions small
        assert_eq!(recombine_dim(&sp, 1, 3, 0, 2).unwrap(), (3, Rule::Kernels));
        // glue degree 11: l~ + l = 11 + v with v = -1
        assert_eq!(recombine_dim(&sp, 6, 4, -1, -1).unwrap(), (-1, Rule::Kernels));
        assert_eq!(recombine_dim(&sp, 8, 6, -1, -1).unwrap(), (3, Rule::Restrictions));
        assert!(recombine_dim(&sp, 0, 0, 2, -1).is_err());
    }

    #[test]
    fn rules_agree_at_threshold() {
        let sp = split(&spec("L1(4,6,3^7)"), 2, 3).unwrap();
        let glue = sp.glue_degree();
        for lhat_t in -1..4 {
            for lhat_f in -1..4 {
                for r_t in -1..glue {
                    let r_f = glue - 1 - r_t;
                    let (l_t, l_f) = (r_t + lhat_t + 1, r_f + lhat_f + 1);
                    let (l0, _) = recombine_dim(&sp, l_t, l_f, lhat_t, lhat_f).unwrap();
                    assert_eq!(l0, lhat_t + lhat_f + 1);
                    assert_eq!(l0, l_t + l_f - glue);
                }
            }
        }
    }

    #[test]
    fn special_root_is_rejected() {
        assert!(matches!(prove_dimension(&spec("L6(0,4,3^11)")), Err(Error::MinusOneSpecial(_))));
        assert!(matches!(prove_dimension(&spec("L2(3,4,1^5)")), Err(Error::Unsupported(_))));
    }

    #[test]
    fn negative_v_uses_window_with_empty_kernels() {
        let s = spec("L2(1,5,2^15)");
        assert!(virtual_dim(&s).unwrap() < 0);
        let cert = prove_dimension(&s).unwrap();
        cert.check_structure().unwrap();
        let root = cert.root_node();
        let NodeKind::Split { k, s: pts, from_window, children, .. } = &root.kind else {
            panic!("expected a split at the root");
        };
        assert_eq!(*k, 1);
        assert!(*from_window);
        let anb = 1 + 2 * 5;
        assert!(2 * *pts as i64 > anb && 3 * *pts as i64 <= 2 * (anb - 2 + 1));
        assert_eq!(cert.nodes[children[2]].claim, -1);
        assert_eq!(cert.nodes[children[3]].claim, -1);
    }

    #[test]
    fn certificates_check_and_verify() {
        let cfg = OracleConfig::default();
        for text in ["L4(3,6,2^9)", "L2(4,7,3^8)", "L3(2,6,2^12)", "L1(5,5,3^7)"] {
            let cert = prove_dimension(&spec(text)).unwrap();
            assert_eq!(cert.root_node().claim, expected_dim(&spec(text)).unwrap());
            cert.check_structure().unwrap();
            for check in verify_leaves(&cert, &cfg).unwrap() {
                assert!(check.ok, "{text}: leaf {check:?}");
            }
        }
    }

    #[test]
    fn unclosed_root_falls_back_to_the_oracle() {
        // The (2, 5) split the window offers has L = L2(7,2,3^5), a Table 1 row.
        let s = spec("L2(1,5,3^7)");
        let strict = ProverOptions {
            oracle_fallback: false,
            ..ProverOptions::default()
        };
        assert!(matches!(Prover::new(strict).prove(&s), Err(Error::OpenCase { .. })));
        let cert = prove_dimension(&s).unwrap();
        assert_eq!(cert.root_node().kind, NodeKind::Leaf { leaf: LeafKind::Oracle });
        assert_eq!(cert.root_node().claim, -1);
    }

    #[test]
    fn tampered_certificate_is_caught() {
        let mut cert = prove_dimension(&spec("L4(3,6,2^9)")).unwrap();
        let root = cert.root;
        cert.nodes[root].claim += 1;
        assert!(cert.check_structure().is_err());
    }
}
