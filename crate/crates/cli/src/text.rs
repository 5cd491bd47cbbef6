//! Human-readable rendering.

use std::fmt::Write;

use scrollsys_core::degeneration::{DimCertificate, NodeKind};
use scrollsys_core::lattice::SystemSpec;
use scrollsys_core::reduction::{ReductionStep, StepKind};

pub const NOTES: &str = "\
Documented discrepancies in the source formulas:

1. Eq. (4.1), elementary transformations: the image is printed with m^{n-k};
   dimension preservation and later usage (e.g. L_1(a+n-1, m+1, m^{r-n+1}, 1^{n-1}))
   need m^{r-k}. Implemented as m^{r-k}.
2. Definition 2.5, (-1)-special: printed as v(L) > v(M); the reduction only
   raises the virtual dimension, so the intended condition is v(M) > v(L)
   (with M non-empty). Implemented as v(M) > v(L).
3. Table 1, L_6(0,4,3^11): printed v = -1; h0 - 1 - 66 = 64 - 66 gives v = -2
   (expected dimension -1). The computed value is reported with this note.
4. Section 6, (k,s)-degeneration: the prose sends s points to the proper
   transform, the boxed formulas (and Section 7) put m^s on the exceptional
   surface: L = L_n(a+n(b-k), k, m^s). The boxed formulas are followed.
5. Section 2, reduction: subtracting (L.E)E for L.E < 0 would add E; the
   procedure removes |L.E| copies of E.
6. Section 3, conic parametrization: b = (m^2 p + q)/(mp - 2q) and
   r = p(p(m^2-m) + 3q)/(q(mp - 2q)) is the line of slope q/p through
   (r, b) = (0, 1), not p/q as stated.
";

pub fn step_label(step: &ReductionStep) -> String {
    let what = match step.kind {
        StepKind::Gamma => format!("Gamma_{}", step.class.n()),
        StepKind::Exceptional => {
            let i = step.class.mults.iter().position(|&m| m != 0).unwrap_or(0);
            format!("E_{}", i + 1)
        }
        StepKind::MinusOne => match SystemSpec::from_class(&step.class) {
            Ok(s) => format!("(-1)-curve {s}"),
            Err(_) => format!("(-1)-curve {}", step.class),
        },
    };
    format!("{} x {what}", step.coefficient)
}

pub fn certificate_tree(cert: &DimCertificate) -> String {
    let mut out = String::new();
    render(cert, cert.root, "", 0, &mut out);
    out
}

fn render(cert: &DimCertificate, i: usize, name: &str, depth: usize, out: &mut String) {
    let node = &cert.nodes[i];
    let pad = "  ".repeat(depth);
    let head = if name.is_empty() { String::new() } else { format!("{name:<4}") };
    match &node.kind {
        NodeKind::Leaf { leaf } => {
            let _ = writeln!(out, "{pad}{head}{}  l = {}  [{}]", node.spec, node.claim, leaf.label());
        }
        NodeKind::Split {
            k,
            s,
            from_window,
            rule,
            l0,
            children,
            ..
        } => {
            let _ = writeln!(
                out,
                "{pad}{head}{}  l = {}  split (k, s) = ({k}, {s}){} rule {} l0 = {l0}",
                node.spec,
                node.claim,
                if *from_window { " [window]" } else { " [search]" },
                rule.label()
            );
            for (child, label) in children.iter().zip(["L~", "L", "L^~", "L^"]) {
                render(cert, *child, label, depth + 1, out);
            }
        }
    }
}
