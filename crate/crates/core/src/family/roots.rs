//! Zeros of `v_ε` in the phase box: sign-box exclusion, Newton from seed
//! cells, subdivision where the Jacobian may vanish or Newton fails.

use serde::Serialize;

use crate::classify::{classify_germ, ClassLabel};
use crate::degeneracy::{is_nonhyperbolic, nonhyperbolic_test};
use crate::error::{Error, Result};
use crate::jet::{Poly, PolyVF};
use crate::linalg::Mat2;

use super::interval::{self, Interval};
use super::{FamilySpec, ScanConfig};

pub const BOUNDARY_FLAG: &str = "boundary-uncertain";
pub const COLLISION_FLAG: &str = "collision";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPointRecord {
    pub eps: Vec<f64>,
    pub x: [f64; 2],
    pub residual: f64,
    pub det: f64,
    pub tr: f64,
    /// `det = 0`, or `tr = 0` with `det > 0`.
    pub nonhyperbolic: bool,
    /// `det · tr = 0`, reported alongside.
    pub det_tr_zero: bool,
    pub label: ClassLabel,
    pub flags: Vec<String>,
}

impl SingularPointRecord {
    pub fn boundary_uncertain(&self) -> bool {
        self.flags.iter().any(|f| f == BOUNDARY_FLAG)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct PointSet {
    pub records: Vec<SingularPointRecord>,
    /// Leaf cells that survived exclusion but where no Newton seed converged.
    pub flagged_cells: Vec<[[f64; 2]; 2]>,
}

struct System {
    f: Poly<f64>,
    g: Poly<f64>,
    fx: Poly<f64>,
    fy: Poly<f64>,
    gx: Poly<f64>,
    gy: Poly<f64>,
    jac_det: Poly<f64>,
    res_tol: f64,
}

impl System {
    fn new(f: Poly<f64>, g: Poly<f64>, tau_res: f64) -> Self {
        let (fx, fy, gx, gy) = (f.diff_x(), f.diff_y(), g.diff_x(), g.diff_y());
        let jac_det = fx.mul(&gy).sub(&fy.mul(&gx));
        let res_tol = tau_res * f.max_abs().max(g.max_abs()).max(1.0);
        Self {
            f,
            g,
            fx,
            fy,
            gx,
            gy,
            jac_det,
            res_tol,
        }
    }

    fn residual(&self, p: [f64; 2]) -> f64 {
        self.f.eval(&p[0], &p[1]).abs().max(self.g.eval(&p[0], &p[1]).abs())
    }

    fn jacobian(&self, p: [f64; 2]) -> Mat2<f64> {
        let e = |q: &Poly<f64>| q.eval(&p[0], &p[1]);
        Mat2::new(e(&self.fx), e(&self.fy), e(&self.gx), e(&self.gy))
    }

    fn newton(&self, mut p: [f64; 2], max_iter: usize, bound: f64) -> Option<[f64; 2]> {
        for _ in 0..max_iter {
            let (fv, gv) = (self.f.eval(&p[0], &p[1]), self.g.eval(&p[0], &p[1]));
            if fv == 0.0 && gv == 0.0 {
                return Some(p);
            }
            let j = self.jacobian(p);
            let d = j.det();
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let sx = (j.a[1][1] * fv - j.a[0][1] * gv) / d;
            let sy = (j.a[0][0] * gv - j.a[1][0] * fv) / d;
            p = [p[0] - sx, p[1] - sy];
            let size = p[0].abs().max(p[1].abs());
            if !size.is_finite() || size > bound {
                return None;
            }
            if sx.abs().max(sy.abs()) <= 1e-15 * (1.0 + size) {
                break;
            }
        }
        (self.residual(p) < self.res_tol).then_some(p)
    }
}

type Cell = [[f64; 2]; 2];

struct Search<'a> {
    sys: &'a System,
    cfg: &'a ScanConfig,
    bound: f64,
    found: Vec<[f64; 2]>,
    flagged: Vec<Cell>,
}

impl Search<'_> {
    fn explore(&mut self, c: Cell, depth: u32) {
        let (x, y) = (Interval::new(c[0][0], c[0][1]), Interval::new(c[1][0], c[1][1]));
        if !interval::eval(&self.sys.f, x, y).contains_zero()
            || !interval::eval(&self.sys.g, x, y).contains_zero()
        {
            return;
        }
        let unique = !interval::eval(&self.sys.jac_det, x, y).contains_zero();
        let mid = [(c[0][0] + c[0][1]) / 2.0, (c[1][0] + c[1][1]) / 2.0];
        let mut seeds = vec![mid];
        let leaf = depth >= self.cfg.refine_depth;
        if leaf && !unique {
            for cx in c[0] {
                for cy in c[1] {
                    seeds.push([(3.0 * cx + mid[0]) / 4.0, (3.0 * cy + mid[1]) / 4.0]);
                }
            }
        }
        let mut converged = false;
        let mut inside = false;
        for s in seeds {
            if let Some(r) = self.sys.newton(s, self.cfg.max_newton, self.bound) {
                converged = true;
                inside |= (c[0][0]..=c[0][1]).contains(&r[0]) && (c[1][0]..=c[1][1]).contains(&r[1]);
                self.found.push(r);
            }
        }
        if unique && inside {
            return;
        }
        if !leaf {
            for [x0, x1] in [[c[0][0], mid[0]], [mid[0], c[0][1]]] {
                for [y0, y1] in [[c[1][0], mid[1]], [mid[1], c[1][1]]] {
                    self.explore([[x0, x1], [y0, y1]], depth + 1);
                }
            }
        } else if !converged {
            self.flagged.push(c);
        }
    }
}

/// Signed distance from `p` to the boundary of `bx`, positive inside.
fn boundary_distance(p: [f64; 2], bx: &Cell) -> f64 {
    (0..2)
        .map(|i| (p[i] - bx[i][0]).min(bx[i][1] - p[i]))
        .fold(f64::INFINITY, f64::min)
}

/// All singular points of `v_ε` in the phase box, classified.
pub fn singular_points_at(spec: &FamilySpec, eps: &[f64], cfg: &ScanConfig) -> Result<PointSet> {
    if !spec.in_eps_box(eps) {
        return Err(Error::Invalid(format!("parameter {eps:?} outside the box")));
    }
    let (f, g) = spec.at(eps);
    let sys = System::new(f, g, cfg.tau_res);
    let bx = spec.phase_box;
    let extent = bx.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut search = Search {
        sys: &sys,
        cfg,
        bound: 1e3 * extent.max(1.0),
        found: vec![],
        flagged: vec![],
    };
    let n = cfg.cells.max(1);
    let step = |i: usize, k: usize| bx[i][0] + (bx[i][1] - bx[i][0]) * k as f64 / n as f64;
    for a in 0..n {
        for b in 0..n {
            search.explore([[step(0, a), step(0, a + 1)], [step(1, b), step(1, b + 1)]], 0);
        }
    }
    let Search { found, flagged, .. } = search;

    let mut found: Vec<_> = found
        .into_iter()
        .filter(|&p| boundary_distance(p, &bx) >= -cfg.rho)
        .collect();
    found.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    // Greedy clustering; the lowest-residual representative wins.
    let mut clusters: Vec<([f64; 2], bool)> = vec![];
    for p in found {
        let near = clusters
            .iter_mut()
            .find(|(q, _)| (p[0] - q[0]).hypot(p[1] - q[1]) < cfg.rho);
        match near {
            Some((q, collided)) => {
                let d = (p[0] - q[0]).hypot(p[1] - q[1]);
                if d > 1e-12 * (1.0 + q[0].abs().max(q[1].abs())) {
                    *collided = true;
                }
                if sys.residual(p) < sys.residual(*q) {
                    *q = p;
                }
            }
            None => clusters.push((p, false)),
        }
    }
    clusters.sort_by(|(p, _), (q, _)| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));

    let records = clusters
        .into_iter()
        .map(|(p, collided)| {
            let mut flags = vec![];
            if boundary_distance(p, &bx) < cfg.rho {
                flags.push(BOUNDARY_FLAG.to_string());
            }
            if collided {
                flags.push(COLLISION_FLAG.to_string());
            }
            let jac = sys.jacobian(p);
            Ok(SingularPointRecord {
                eps: eps.to_vec(),
                x: p,
                residual: sys.residual(p),
                det: jac.det(),
                tr: jac.trace(),
                nonhyperbolic: is_nonhyperbolic(&jac, cfg.tau_deg),
                det_tr_zero: nonhyperbolic_test(&jac, cfg.tau_deg),
                label: classify_germ(&local_jet(&sys, p, cfg.jet_order)?, &cfg.tol)?,
                flags,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PointSet {
        records,
        flagged_cells: flagged,
    })
}

/// Taylor jet of the system at `p`, moved to the origin, constant dropped.
fn local_jet(sys: &System, p: [f64; 2], order: u32) -> Result<PolyVF<f64>> {
    let sx = Poly::from_terms([(1, 0, 1.0), (0, 0, p[0])]);
    let sy = Poly::from_terms([(0, 1, 1.0), (0, 0, p[1])]);
    let shift = |q: &Poly<f64>| q.compose(&sx, &sy, order);
    Ok(PolyVF::new(order, shift(&sys.f), shift(&sys.g))?.without_constant())
}
