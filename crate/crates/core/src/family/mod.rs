//! Polynomial parameter families `v_ε`: locating and classifying every
//! singular point on a parameter grid, localizing codimension-one loci and
//! auditing the allowed configurations of non-hyperbolic points.

mod audit;
mod interval;
mod roots;
mod scan;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Poly;
use crate::scalar::{Scalar, Tolerances};

pub use audit::{audit_main_theorem, audit_records, in_w, AuditSummary, Verdict};
pub use interval::Interval;
pub use roots::{singular_points_at, PointSet, SingularPointRecord};
pub use scan::{
    node_state, scan, write_csv, GridSpec, LocusKind, LocusPoint, NodeReport, NodeState,
    ScanReport,
};

/// One monomial `c · ε^e · x^i y^j` of a family component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyTerm {
    pub eps: Vec<u32>,
    pub i: u32,
    pub j: u32,
    pub coeff: Scalar,
}

/// Polynomial family `V(ε, x)` with its parameter and phase boxes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySpec {
    pub k: usize,
    pub dx: Vec<FamilyTerm>,
    pub dy: Vec<FamilyTerm>,
    pub eps_box: Vec<[f64; 2]>,
    pub phase_box: [[f64; 2]; 2],
}

/// Largest total phase degree accepted in a family.
pub const MAX_DEGREE: u32 = 12;

impl FamilySpec {
    pub fn new(
        k: usize,
        dx: Vec<FamilyTerm>,
        dy: Vec<FamilyTerm>,
        eps_box: Vec<[f64; 2]>,
        phase_box: [[f64; 2]; 2],
    ) -> Result<Self> {
        if !(1..=2).contains(&k) {
            return Err(Error::Invalid(format!("parameter count {k} not in 1..=2")));
        }
        if eps_box.len() != k {
            return Err(Error::Invalid(format!(
                "parameter box has {} sides for k = {k}",
                eps_box.len()
            )));
        }
        for [lo, hi] in eps_box.iter().chain(phase_box.iter()) {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::NonFinite);
            }
            if lo >= hi {
                return Err(Error::Invalid(format!("empty box side [{lo}, {hi}]")));
            }
        }
        let mut backend: Option<&'static str> = None;
        for t in dx.iter().chain(&dy) {
            if t.eps.len() != k {
                return Err(Error::Invalid(format!(
                    "term has {} parameter exponents for k = {k}",
                    t.eps.len()
                )));
            }
            if t.i + t.j > MAX_DEGREE {
                return Err(Error::DegreeExceedsOrder {
                    i: t.i,
                    j: t.j,
                    order: MAX_DEGREE,
                });
            }
            let b = t.coeff.backend();
            match backend {
                Some(prev) if prev != b => return Err(Error::BackendMismatch(prev, b)),
                _ => backend = Some(b),
            }
        }
        Ok(Self {
            k,
            dx,
            dy,
            eps_box,
            phase_box,
        })
    }

    /// Components of `v_ε` as float polynomials.
    pub fn at(&self, eps: &[f64]) -> (Poly<f64>, Poly<f64>) {
        let eval = |terms: &[FamilyTerm]| {
            Poly::from_terms(terms.iter().map(|t| {
                let w: f64 = t.eps.iter().zip(eps).map(|(&e, &x)| x.powi(e as i32)).product();
                (t.i, t.j, t.coeff.to_f64() * w)
            }))
        };
        (eval(&self.dx), eval(&self.dy))
    }

    pub fn in_eps_box(&self, eps: &[f64]) -> bool {
        eps.len() == self.k
            && eps
                .iter()
                .zip(&self.eps_box)
                .all(|(&e, &[lo, hi])| lo <= e && e <= hi)
    }
}

/// Numeric settings of the scanner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    /// Seed cells per phase-box side.
    pub cells: usize,
    /// Subdivision depth for cells that may hold several zeros or where
    /// Newton fails.
    pub refine_depth: u32,
    /// Deduplication radius; also the width of the boundary-uncertain band.
    pub rho: f64,
    /// Residual tolerance, relative to `max(1, largest coefficient)`.
    pub tau_res: f64,
    /// Locus bisection tolerance in parameter space.
    pub tau_loc: f64,
    /// Threshold for counting a point as non-hyperbolic.
    pub tau_deg: f64,
    pub max_newton: usize,
    /// Order of the Taylor jet classified at each point.
    pub jet_order: u32,
    pub tol: Tolerances,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            cells: 32,
            refine_depth: 3,
            rho: 1e-6,
            tau_res: 1e-12,
            tau_loc: 1e-8,
            tau_deg: crate::degeneracy::TAU_DEG,
            max_newton: 200,
            jet_order: 5,
            tol: Tolerances::default(),
            threads: None,
        }
    }
}

/// `ẋ = y, ẏ = ε1 + ε2 y + x² + x y` over `[−1,1]²` with phase box `[−2,2]²`.
pub fn bt_unfolding() -> FamilySpec {
    let t = |eps: [u32; 2], i, j| FamilyTerm {
        eps: eps.to_vec(),
        i,
        j,
        coeff: Scalar::integer(1),
    };
    FamilySpec::new(
        2,
        vec![t([0, 0], 0, 1)],
        vec![t([1, 0], 0, 0), t([0, 1], 0, 1), t([0, 0], 2, 0), t([0, 0], 1, 1)],
        vec![[-1.0, 1.0], [-1.0, 1.0]],
        [[-2.0, 2.0], [-2.0, 2.0]],
    )
    .expect("valid family")
}
