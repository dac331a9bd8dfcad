//! Check of the configurations allowed for a generic two-parameter family:
//! all points hyperbolic; or two non-hyperbolic points, both SN0 or AH0; or a
//! single non-hyperbolic point in `W`.

use serde::Serialize;

use crate::classify::Kind;

use super::roots::SingularPointRecord;
use super::scan::ScanReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "details")]
pub enum Verdict {
    /// Every singular point is hyperbolic.
    Case1,
    /// Exactly two non-hyperbolic points, each SN0 or AH0.
    Case2,
    /// Exactly one non-hyperbolic point, of a class in `W`.
    Case3,
    Violation(String),
    /// An unresolved label prevents a decision.
    Inconclusive(String),
}

/// `W = SN0 ∪ AH0 ∪ SN1 ∪ AH1 ∪ BT0`.
pub fn in_w(kind: &Kind) -> bool {
    matches!(kind, Kind::SN(0 | 1) | Kind::AH(0 | 1) | Kind::BT0)
}

/// Verdict for the records found at one parameter value. Boundary-uncertain
/// points are ignored; a point counts as non-hyperbolic when its Jacobian
/// says so or its label is anything other than `H`.
pub fn audit_records(records: &[SingularPointRecord]) -> Verdict {
    let nh: Vec<_> = records
        .iter()
        .filter(|r| !r.boundary_uncertain() && (r.nonhyperbolic || r.label.kind != Kind::H))
        .collect();
    let at = |r: &SingularPointRecord| format!("{} at ({}, {})", r.label.kind, r.x[0], r.x[1]);
    if nh.len() > 2 {
        let list: Vec<_> = nh.iter().map(|r| at(r)).collect();
        return Verdict::Violation(format!(
            "{} non-hyperbolic points: {}",
            nh.len(),
            list.join("; ")
        ));
    }
    if let Some(r) = nh.iter().find(|r| r.label.kind.is_unresolved()) {
        return Verdict::Inconclusive(at(r));
    }
    match nh.as_slice() {
        [] => Verdict::Case1,
        [r] if in_w(&r.label.kind) => Verdict::Case3,
        [r] => Verdict::Violation(format!("single point outside W: {}", at(r))),
        [a, b] => {
            let simple = |k: &Kind| matches!(k, Kind::SN(0) | Kind::AH(0));
            if simple(&a.label.kind) && simple(&b.label.kind) {
                Verdict::Case2
            } else {
                Verdict::Violation(format!("pair not both SN0/AH0: {}; {}", at(a), at(b)))
            }
        }
        _ => unreachable!(),
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AuditSummary {
    pub case1: usize,
    pub case2: usize,
    pub case3: usize,
    pub inconclusive: usize,
    /// Parameter values with a violation, and its description.
    pub violations: Vec<(Vec<f64>, String)>,
}

/// Recomputes every node verdict from its records and tallies them.
pub fn audit_main_theorem(report: &ScanReport) -> AuditSummary {
    let mut s = AuditSummary::default();
    for node in &report.nodes {
        match audit_records(&node.records) {
            Verdict::Case1 => s.case1 += 1,
            Verdict::Case2 => s.case2 += 1,
            Verdict::Case3 => s.case3 += 1,
            Verdict::Inconclusive(_) => s.inconclusive += 1,
            Verdict::Violation(d) => s.violations.push((node.eps.clone(), d)),
        }
    }
    s
}
