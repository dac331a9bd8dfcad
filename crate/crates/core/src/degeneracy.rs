//! Pointwise degeneracy tests: the `det·tr = 0` condition, a resultant that
//! vanishes exactly when a matrix has an eigenvalue on the imaginary axis,
//! local multiplicity of a singular point, and the Gabrielov–Khovanskii
//! bounds on it.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{Poly, PolyVF};
use crate::linalg::{self, Mat2};
use crate::scalar::{Field, Rational, Scalar};

/// Default relative tolerance of [`nonhyperbolic_test`] for floats.
pub const TAU_DEG: f64 = 1e-9;

/// `det(J)·tr(J) = 0`: exact for rationals, `|det·tr| ≤ τ‖J‖³` for floats.
///
/// This is necessary but not sufficient for non-hyperbolicity: a saddle
/// with zero trace passes. See [`is_nonhyperbolic`].
pub fn nonhyperbolic_test<S: Field>(j: &Mat2<S>, tau: f64) -> bool {
    let p = j.det() * j.trace();
    if S::EXACT {
        return p.is_zero();
    }
    p.to_f64().abs() <= tau * j.max_abs().powi(3)
}

/// Genuine non-hyperbolicity: `det = 0`, or `tr = 0` with `det > 0`.
pub fn is_nonhyperbolic<S: Field>(j: &Mat2<S>, tau: f64) -> bool {
    let n = j.max_abs();
    let det = j.det();
    let tr = j.trace();
    if S::EXACT {
        return det.is_zero() || (tr.is_zero() && det.is_positive());
    }
    let det_zero = det.to_f64().abs() <= tau * n * n;
    let tr_zero = tr.to_f64().abs() <= tau * n;
    det_zero || (tr_zero && det.to_f64() > 0.0)
}

/// Degeneracy of a germ at the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyVerdict {
    pub singular: bool,
    /// `det·tr = 0` at a singular point.
    pub nonhyperbolic: bool,
    /// `det = 0`, or `tr = 0` and `det > 0`, at a singular point.
    pub genuinely_nonhyperbolic: bool,
    pub det: Scalar,
    pub tr: Scalar,
}

pub fn degeneracy_verdict<S: Field>(v: &PolyVF<S>, tau: f64) -> DegeneracyVerdict {
    let [c0, c1] = v.constant();
    let a = v.linear_part();
    let singular = if S::EXACT {
        c0.is_zero() && c1.is_zero()
    } else {
        c0.to_f64().abs().max(c1.to_f64().abs()) <= tau * v.max_abs_coeff().max(1.0)
    };
    DegeneracyVerdict {
        singular,
        nonhyperbolic: singular && nonhyperbolic_test(&a, tau),
        genuinely_nonhyperbolic: singular && is_nonhyperbolic(&a, tau),
        det: a.det().to_scalar(),
        tr: a.trace().to_scalar(),
    }
}

/// Coefficients `c_0 .. c_N` of `det(λI − A)` (monic, `c_N = 1`), by the
/// Faddeev–LeVerrier recursion.
pub fn char_poly<S: Field>(a: &[Vec<S>]) -> Vec<S> {
    let n = a.len();
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    // M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = −tr(A M_k)/k
    let mut m: Vec<Vec<S>> = vec![vec![S::zero(); n]; n];
    for k in 1..=n {
        let mut next = matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].clone() + coeffs[n - k + 1].clone();
        }
        m = next;
        let am = matmul(a, &m);
        let tr = (0..n).fold(S::zero(), |acc, i| acc + am[i][i].clone());
        coeffs[n - k] = -tr / S::from_i64(k as i64);
    }
    coeffs
}

fn matmul<S: Field>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(S::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

/// Real and imaginary parts of `P(iμ)` as polynomials in `μ`.
pub fn split_imaginary<S: Field>(p: &[S]) -> (Vec<S>, Vec<S>) {
    let mut re = vec![S::zero(); p.len()];
    let mut im = vec![S::zero(); p.len()];
    for (k, c) in p.iter().enumerate() {
        // i^k cycles 1, i, −1, −i
        match k % 4 {
            0 => re[k] = c.clone(),
            1 => im[k] = c.clone(),
            2 => re[k] = -c.clone(),
            _ => im[k] = -c.clone(),
        }
    }
    (re, im)
}

/// Drops vanishing leading coefficients.
fn strip<S: Field>(mut p: Vec<S>) -> Vec<S> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Sylvester resultant of `f` and `g` (coefficients in ascending order).
///
/// Leading zeros are stripped first. The resultant is zero when either
/// polynomial is identically zero, and `c^{deg other}` when one is a nonzero
/// constant `c`.
pub fn sylvester_resultant<S: Field>(f: &[S], g: &[S]) -> S {
    let f = strip(f.to_vec());
    let g = strip(g.to_vec());
    if f.is_empty() || g.is_empty() {
        return S::zero();
    }
    let (n, m) = (f.len() - 1, g.len() - 1);
    if n == 0 {
        return pow(&f[0], m);
    }
    if m == 0 {
        return pow(&g[0], n);
    }
    let size = n + m;
    let mut rows = vec![vec![S::zero(); size]; size];
    // m shifted copies of f, then n shifted copies of g, highest power first.
    for r in 0..m {
        for (k, c) in f.iter().rev().enumerate() {
            rows[r][r + k] = c.clone();
        }
    }
    for r in 0..n {
        for (k, c) in g.iter().rev().enumerate() {
            rows[m + r][r + k] = c.clone();
        }
    }
    det_generic(rows)
}

fn pow<S: Field>(x: &S, n: usize) -> S {
    (0..n).fold(S::one(), |acc, _| acc * x.clone())
}

/// Determinant by Gaussian elimination with pivoting on magnitude.
pub(crate) fn det_generic<S: Field>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    let mut acc = S::one();
    for c in 0..n {
        let p = (c..n)
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&i, &j| m[i][c].to_f64().abs().total_cmp(&m[j][c].to_f64().abs()));
        let Some(p) = p else {
            return S::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        let pv = m[c][c].clone();
        acc = acc * pv.clone();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / pv.clone();
            for j in c..n {
                let t = f.clone() * m[c][j].clone();
                m[i][j] = m[i][j].clone() - t;
            }
        }
    }
    acc
}

/// `Res(P1, P2)` where `P(iμ) = P1(μ) + i·P2(μ)` and `P` is the characteristic
/// polynomial of `a`. Zero iff `a` has an eigenvalue `iμ` with `μ` real.
/// For 2×2 matrices it equals `det(a)·tr(a)²`.
pub fn imag_resultant<S: Field>(a: &[Vec<S>]) -> Result<S> {
    let n = a.len();
    if n < 2 || a.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid(format!(
            "resultant needs a square matrix of size at least 2, got {n} rows"
        )));
    }
    let (p1, p2) = split_imaginary(&char_poly(a));
    Ok(sylvester_resultant(&p1, &p2))
}

/// Local multiplicity of a singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Multiplicity {
    Finite(usize),
    /// The dual space kept growing up to the cutoff; the value is its
    /// dimension there, a lower bound.
    AtLeast(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityResult {
    pub multiplicity: Multiplicity,
    /// `dim D_d` for `d = 0, 1, ..`, where `D_d` is the space of
    /// differential functionals at 0 of order at most `d` annihilating the
    /// ideal `(f, g)`.
    pub dual_dims: Vec<usize>,
}

pub const DEFAULT_CUTOFF: u32 = 12;

/// Local intersection multiplicity at 0 of the two components of `v`, as the
/// dimension of the Macaulay dual space.
///
/// At degree `d` the Macaulay matrix has rows `x^a y^b f_i` (`a + b ≤ d − 1`)
/// and columns the monomials of degree at most `d`; its null space is `D_d`.
/// The dimension stabilises (`dim D_d = dim D_{d−1}`) exactly at the
/// multiplicity when it is finite. Float coefficients are converted to their
/// exact binary values.
pub fn multiplicity<S: Field>(v: &PolyVF<S>, cutoff: u32) -> Result<MultiplicityResult> {
    if !v.vanishes_at_origin() {
        return Err(Error::NonZeroConstant);
    }
    let to_q = |p: &Poly<S>| -> Result<Poly<Rational>> {
        let mut out = Poly::zero();
        for (i, j, c) in p.terms() {
            out.add_term(i, j, c.to_rational().ok_or(Error::NonFinite)?);
        }
        Ok(out)
    };
    let f = [to_q(v.dx())?, to_q(v.dy())?];
    let mut dual_dims = vec![1usize];
    for d in 1..=cutoff {
        let cols = monomials(d);
        let col_index: std::collections::HashMap<(u32, u32), usize> =
            cols.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut rows = Vec::new();
        for &(a, b) in &monomials(d - 1) {
            for fi in &f {
                let mut row = vec![Rational::zero(); cols.len()];
                for (i, j, c) in fi.terms() {
                    if let Some(&k) = col_index.get(&(i + a, j + b)) {
                        row[k] = c.clone();
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let dim = cols.len() - linalg::rank(&rows, cols.len());
        let prev = *dual_dims.last().expect("starts with D_0");
        dual_dims.push(dim);
        if dim == prev {
            return Ok(MultiplicityResult {
                multiplicity: Multiplicity::Finite(dim),
                dual_dims,
            });
        }
    }
    Ok(MultiplicityResult {
        multiplicity: Multiplicity::AtLeast(*dual_dims.last().expect("nonempty")),
        dual_dims,
    })
}

/// Monomials `(i, j)` with `i + j ≤ d`.
fn monomials(d: u32) -> Vec<(u32, u32)> {
    (0..=d)
        .flat_map(|t| (0..=t).map(move |i| (i, t - i)))
        .collect()
}

/// `2/(3√3)·(k+2)^{3/2}`: bound on the multiplicity of a singular point in a
/// generic k-parameter family.
pub fn gk_point_bound(k: u32) -> f64 {
    2.0 / (3.0 * 3f64.sqrt()) * ((k + 2) as f64).powf(1.5)
}

/// `k` times [`gk_point_bound`]: bound on the total multiplicity of the
/// non-hyperbolic singular points of one member of the family.
pub fn gk_sum_bound(k: u32) -> f64 {
    k as f64 * gk_point_bound(k)
}

/// `Some(2s³)` when `k + 2 = 3s²`, the only case where the point bound is an
/// integer.
pub fn gk_point_bound_exact(k: u32) -> Option<u64> {
    let n = k as u64 + 2;
    if !n.is_multiple_of(3) {
        return None;
    }
    let s2 = n / 3;
    let s = s2.sqrt();
    (s * s == s2).then_some(2 * s * s * s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub k: u32,
    pub point_bound: f64,
    pub sum_bound: f64,
    pub floor_point: u64,
    pub floor_sum: u64,
    /// Largest multiplicity allowed when the bound is read as strict.
    pub max_multiplicity_strict: u64,
    /// The point bound is an integer, so strict and non-strict readings differ.
    pub point_bound_is_integer: bool,
}

pub fn bounds_report(k: u32) -> BoundsReport {
    let point_bound = gk_point_bound(k);
    let sum_bound = gk_sum_bound(k);
    let exact = gk_point_bound_exact(k);
    let floor_point = exact.unwrap_or(point_bound.floor() as u64);
    let floor_sum = match exact {
        Some(p) => k as u64 * p,
        None => sum_bound.floor() as u64,
    };
    BoundsReport {
        k,
        point_bound,
        sum_bound,
        floor_point,
        floor_sum,
        max_multiplicity_strict: if exact.is_some() {
            floor_point.saturating_sub(1)
        } else {
            floor_point
        },
        point_bound_is_integer: exact.is_some(),
    }
}

/// Rational matrix from integer rows.
pub fn rational_matrix(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
        .collect()
}
