//! Grid scan over the parameter box, codimension-one locus bisection and
//! report assembly.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{Kind, Payload};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::audit::{audit_main_theorem, audit_records, AuditSummary, Verdict};
use super::roots::{singular_points_at, SingularPointRecord};
use super::{FamilySpec, ScanConfig};

/// Number of nodes per parameter axis; nodes include both box ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub shape: Vec<usize>,
}

impl GridSpec {
    pub fn new(shape: Vec<usize>) -> Result<Self> {
        if shape.is_empty() || shape.iter().any(|&n| n < 2) {
            return Err(Error::Invalid(format!(
                "grid {shape:?} needs at least 2 nodes per axis"
            )));
        }
        Ok(Self { shape })
    }

    fn len(&self) -> usize {
        self.shape.iter().product()
    }

    /// Multi-index of the `n`-th node, last axis fastest.
    fn index(&self, mut n: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for (a, &s) in self.shape.iter().enumerate().rev() {
            idx[a] = n % s;
            n /= s;
        }
        idx
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &s)| acc * s + i)
    }

    fn eps(&self, spec: &FamilySpec, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .zip(&self.shape)
            .zip(&spec.eps_box)
            .map(|((&i, &n), &[lo, hi])| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// Coarse phase portrait used to detect loci between neighboring nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct NodeState {
    pub saddles: usize,
    /// Antisaddles with `tr > 0`.
    pub repelling: usize,
    /// Antisaddles with `tr < 0`.
    pub attracting: usize,
    pub nonhyperbolic: usize,
}

impl NodeState {
    fn total(&self) -> usize {
        self.saddles + self.repelling + self.attracting + self.nonhyperbolic
    }
}

pub fn node_state(records: &[SingularPointRecord]) -> NodeState {
    let mut s = NodeState::default();
    for r in records.iter().filter(|r| !r.boundary_uncertain()) {
        if r.nonhyperbolic {
            s.nonhyperbolic += 1;
        } else if r.det < 0.0 {
            s.saddles += 1;
        } else if r.tr > 0.0 {
            s.repelling += 1;
        } else {
            s.attracting += 1;
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocusKind {
    /// Singular points are born or die.
    SN,
    /// An antisaddle changes stability with the saddle count fixed.
    AH,
    /// Several transitions within one grid edge.
    Other,
}

fn locus_kind(a: &NodeState, b: &NodeState) -> LocusKind {
    let gap = |x: usize, y: usize| x.abs_diff(y);
    if a.saddles != b.saddles || a.total() != b.total() {
        let sn_like = gap(a.total(), b.total()) <= 2 && gap(a.saddles, b.saddles) <= 1;
        return if sn_like { LocusKind::SN } else { LocusKind::Other };
    }
    // Same saddles and total: only antisaddle stability changed.
    if gap(a.repelling, b.repelling) <= 1 && gap(a.attracting, b.attracting) <= 1 {
        LocusKind::AH
    } else {
        LocusKind::Other
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusPoint {
    pub kind: LocusKind,
    pub eps: Vec<f64>,
    /// Grid indices of the edge that was bisected.
    pub edge: [Vec<usize>; 2],
    /// Final bracket length.
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeReport {
    pub index: Vec<usize>,
    pub eps: Vec<f64>,
    pub records: Vec<SingularPointRecord>,
    pub flagged_cells: Vec<[[f64; 2]; 2]>,
    pub state: NodeState,
    /// Non-hyperbolic points by `det = 0 ∨ (tr = 0 ∧ det > 0)`.
    pub nonhyperbolic: usize,
    /// Points with `det · tr = 0`.
    pub det_tr_zero: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub family: FamilySpec,
    pub grid: GridSpec,
    pub config: ScanConfig,
    pub nodes: Vec<NodeReport>,
    pub loci: Vec<LocusPoint>,
    pub summary: AuditSummary,
}

impl ScanReport {
    pub fn records(&self) -> impl Iterator<Item = &SingularPointRecord> {
        self.nodes.iter().flat_map(|n| &n.records)
    }

    pub fn unresolved(&self) -> usize {
        self.records().filter(|r| r.label.kind.is_unresolved()).count()
    }
}

fn node_report(
    spec: &FamilySpec,
    cfg: &ScanConfig,
    index: Vec<usize>,
    eps: Vec<f64>,
) -> Result<NodeReport> {
    let set = singular_points_at(spec, &eps, cfg)?;
    let counted = || set.records.iter().filter(|r| !r.boundary_uncertain());
    Ok(NodeReport {
        state: node_state(&set.records),
        nonhyperbolic: counted().filter(|r| r.nonhyperbolic).count(),
        det_tr_zero: counted().filter(|r| r.det_tr_zero).count(),
        verdict: audit_records(&set.records),
        index,
        eps,
        records: set.records,
        flagged_cells: set.flagged_cells,
    })
}

fn bisect(
    spec: &FamilySpec,
    cfg: &ScanConfig,
    a: &NodeReport,
    b: &NodeReport,
) -> Result<LocusPoint> {
    let (mut lo, mut hi) = (a.eps.clone(), b.eps.clone());
    let (s_lo, mut s_hi) = (a.state, b.state);
    let dist = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    while dist(&lo, &hi) > cfg.tau_loc {
        let mid: Vec<f64> = lo.iter().zip(&hi).map(|(x, y)| (x + y) / 2.0).collect();
        if mid == lo || mid == hi {
            break;
        }
        let s = node_state(&singular_points_at(spec, &mid, cfg)?.records);
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
            s_hi = s;
        }
    }
    Ok(LocusPoint {
        kind: locus_kind(&s_lo, &s_hi),
        eps: lo.iter().zip(&hi).map(|(x, y)| (x + y) / 2.0).collect(),
        edge: [a.index.clone(), b.index.clone()],
        width: dist(&lo, &hi),
    })
}

fn run<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?
            .install(f)),
        None => Ok(f()),
    }
}

/// Scans every grid node, bisects every grid edge whose endpoint states
/// differ, and audits each node. Output order depends only on the inputs.
pub fn scan(spec: &FamilySpec, grid: &GridSpec, cfg: &ScanConfig) -> Result<ScanReport> {
    if grid.shape.len() != spec.k {
        return Err(Error::Invalid(format!(
            "grid has {} axes for k = {}",
            grid.shape.len(),
            spec.k
        )));
    }
    run(cfg.threads, || {
        let nodes = (0..grid.len())
            .into_par_iter()
            .map(|n| {
                let idx = grid.index(n);
                node_report(spec, cfg, idx.clone(), grid.eps(spec, &idx))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut edges = vec![];
        for (n, node) in nodes.iter().enumerate() {
            for axis in 0..grid.shape.len() {
                let mut next = node.index.clone();
                next[axis] += 1;
                if next[axis] < grid.shape[axis] {
                    let m = grid.flat(&next);
                    if nodes[m].state != node.state {
                        edges.push((n, m));
                    }
                }
            }
        }
        let loci = edges
            .into_par_iter()
            .map(|(n, m)| bisect(spec, cfg, &nodes[n], &nodes[m]))
            .collect::<Result<Vec<_>>>()?;
        let mut report = ScanReport {
            family: spec.clone(),
            grid: grid.clone(),
            config: *cfg,
            nodes,
            loci,
            summary: AuditSummary::default(),
        };
        report.summary = audit_main_theorem(&report);
        Ok(report)
    })?
}

fn tag(kind: &Kind) -> String {
    match kind {
        Kind::AH(k) | Kind::SN(k) => format!("{}{k}", kind.name()),
        k => k.name().to_string(),
    }
}

fn payload_values(p: &Payload) -> Vec<f64> {
    let f = |v: &[Scalar]| v.iter().map(Scalar::to_f64).collect::<Vec<_>>();
    match p {
        Payload::Focus(fv) => f(&fv.re_a),
        Payload::SaddleNode { a, .. } => f(a.get(1..).unwrap_or(&[])),
        Payload::Nilpotent(b) => f(&[b.b11.clone(), b.b12.clone(), b.b22.clone()]),
        Payload::DeadZone { value, scale, .. } => vec![*value, *scale],
        Payload::Linear { .. } | Payload::None => vec![],
    }
}

/// Writes one row per singular point:
/// `eps1,eps2,x,y,det,tr,label,payload1,payload2,payload3,flags`.
pub fn write_csv<W: Write>(report: &ScanReport, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "eps1", "eps2", "x", "y", "det", "tr", "label", "payload1", "payload2", "payload3",
        "flags",
    ])
    .map_err(io)?;
    let num = |x: f64| format!("{x:?}");
    for r in report.records() {
        let mut row: Vec<String> = (0..2)
            .map(|i| r.eps.get(i).map(|&e| num(e)).unwrap_or_default())
            .collect();
        row.extend([num(r.x[0]), num(r.x[1]), num(r.det), num(r.tr), tag(&r.label.kind)]);
        let pv = payload_values(&r.label.payload);
        row.extend((0..3).map(|i| pv.get(i).map(|&v| num(v)).unwrap_or_default()));
        row.push(r.flags.join(";"));
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::super::bt_unfolding;
    use super::*;

    #[test]
    fn grid_indexing_round_trips() {
        let g = GridSpec::new(vec![3, 4]).unwrap();
        for n in 0..g.len() {
            assert_eq!(g.flat(&g.index(n)), n);
        }
        let f = bt_unfolding();
        assert_eq!(g.eps(&f, &[2, 0]), vec![1.0, -1.0]);
        assert!(GridSpec::new(vec![1, 3]).is_err());
    }

    #[test]
    fn coarse_scan_finds_both_loci() {
        let f = bt_unfolding();
        let cfg = ScanConfig {
            cells: 16,
            ..ScanConfig::default()
        };
        let r = scan(&f, &GridSpec::new(vec![6, 6]).unwrap(), &cfg).unwrap();
        assert!(r.summary.violations.is_empty());
        assert!(r.loci.iter().any(|l| l.kind == LocusKind::SN && l.eps[0].abs() < 1e-7));
        assert!(r
            .loci
            .iter()
            .any(|l| l.kind == LocusKind::AH && (l.eps[0] + l.eps[1] * l.eps[1]).abs() < 1e-6));
        let mut buf = vec![];
        write_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("eps1,eps2,x,y,det,tr,label,payload1,payload2,payload3,flags\n"));
        assert_eq!(text.lines().count(), 1 + r.records().count());
    }
}
