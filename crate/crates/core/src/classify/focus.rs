//! Rotational normal form `ż = z(iω + Σ a_j |z|^{2j})` and its focus values.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{pushforward, DiffeoJet, Poly, PolyVF};
use crate::linalg::Mat2;
use crate::scalar::{Field, Scalar};

use super::linear::{classify_linear, LinearClass};

/// Resonant coefficients `a_1 .. a_k` of the rotational normal form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FocusValues<S> {
    /// Rotation speed, always positive.
    pub omega: S,
    pub re_a: Vec<S>,
    pub im_a: Vec<S>,
}

impl<S: Field> FocusValues<S> {
    pub fn to_scalar(&self) -> FocusValues<Scalar> {
        FocusValues {
            omega: self.omega.to_scalar(),
            re_a: self.re_a.iter().map(Field::to_scalar).collect(),
            im_a: self.im_a.iter().map(Field::to_scalar).collect(),
        }
    }
}

/// Output of [`rotation_normalize`].
#[derive(Debug, Clone)]
pub struct RotationFrame<S> {
    /// `h_* v`, with linear part exactly `(−ωy, ωx)`.
    pub field: PolyVF<S>,
    /// Linear change of coordinates used.
    pub transform: DiffeoJet<S>,
    pub omega: S,
}

/// Brings a germ with a centre-type linear part to linear part `(−ωy, ωx)`,
/// `ω = √det > 0`.
pub fn rotation_normalize<S: Field>(v: &PolyVF<S>) -> Result<RotationFrame<S>> {
    if classify_linear(&v.linear_part()) != LinearClass::AHstar {
        return Err(Error::WrongLinearClass { expected: "AH*" });
    }
    rotation_frame(v)
}

/// [`rotation_normalize`] without the class check; the caller has decided
/// that the linear part has a pure imaginary pair.
pub(crate) fn rotation_frame<S: Field>(v: &PolyVF<S>) -> Result<RotationFrame<S>> {
    let a = v.linear_part();
    let det = a.det();
    let omega = det
        .sqrt()
        .ok_or_else(|| Error::IrrationalFrequency(format!("{det:?}")))?;
    if omega.is_zero() {
        return Err(Error::WrongLinearClass { expected: "AH*" });
    }
    // Basis (u, Au/ω) turns A into ω·rotation. Pick u to keep it well conditioned.
    let b = a.a[0][1].clone();
    let c = a.a[1][0].clone();
    let u = if c.to_f64().abs() >= b.to_f64().abs() {
        [S::one(), S::zero()]
    } else {
        [S::zero(), S::one()]
    };
    let au = a.apply(u.clone());
    let w = [au[0].clone() / omega.clone(), au[1].clone() / omega.clone()];
    let t = Mat2::from_columns(u, w);
    let tinv = t.inverse().ok_or(Error::SingularLinearPart)?;
    let transform = DiffeoJet::linear(v.order(), &tinv)?;
    let mut field = pushforward(&transform, v, v.order())?;
    let rot = Mat2::new(S::zero(), -omega.clone(), omega.clone(), S::zero());
    if !S::EXACT {
        field = field.with_linear_part(&rot);
    }
    debug_assert_eq!(field.linear_part(), rot);
    Ok(RotationFrame {
        field,
        transform,
        omega,
    })
}

/// Focus values `a_1 .. a_{k_max}` of a germ whose linear part has a pair of
/// nonzero pure imaginary eigenvalues.
///
/// All non-resonant monomials up to degree `2·k_max + 1` are removed by near-
/// identity changes of coordinates, degree by degree; the surviving resonant
/// terms `a_j z|z|^{2j}` are read off. Time is not rescaled, so `ω` stays
/// explicit and `Re a_j` carry the sign of the focus values.
pub fn focus_values<S: Field>(v: &PolyVF<S>, k_max: u32) -> Result<FocusValues<S>> {
    let need = 2 * k_max + 1;
    if v.order() < need {
        return Err(Error::InsufficientOrder {
            have: v.order(),
            need,
        });
    }
    let frame = rotation_normalize(v)?;
    Ok(focus_from_frame(&frame, k_max)?.0)
}

/// Normal-form reduction on an already normalized frame. Also returns the
/// normalized field, truncated to `2·k_max + 1`, in rotational normal form.
pub(crate) fn focus_from_frame<S: Field>(
    frame: &RotationFrame<S>,
    k_max: u32,
) -> Result<(FocusValues<S>, PolyVF<S>)> {
    let n = 2 * k_max + 1;
    let omega = frame.omega.clone();
    let mut w = frame.field.truncate(n)?;
    for d in 2..=n {
        let c = to_complex(&w.homogeneous(d));
        let mut h: BTreeMap<(u32, u32), Complex<S>> = BTreeMap::new();
        for (&(p, q), coef) in &c {
            let k = p as i64 - q as i64 - 1;
            if k != 0 {
                let denom = Complex::new(S::zero(), omega.clone() * S::from_i64(k));
                h.insert((p, q), coef.clone() / denom);
            }
        }
        if h.is_empty() {
            continue;
        }
        let (hx, hy) = from_complex(&h);
        let phi = DiffeoJet::new(n, Poly::x().sub(&hx), Poly::y().sub(&hy))?;
        w = pushforward(&phi, &w, n)?;
        if !S::EXACT {
            // Rounding leaves residue in the eliminated slots; clear it.
            let res = to_complex(&w.homogeneous(d));
            let kept: BTreeMap<_, _> = res
                .into_iter()
                .filter(|&((p, q), _)| p == q + 1)
                .collect();
            let (kx, ky) = from_complex(&kept);
            let lower = w.map_polys(|p| p.sub(&p.homogeneous(d)));
            w = PolyVF::new(n, lower.dx().add(&kx), lower.dy().add(&ky))?;
        }
    }
    let mut re_a = Vec::new();
    let mut im_a = Vec::new();
    for j in 1..=k_max {
        let c = to_complex(&w.homogeneous(2 * j + 1));
        let a = c
            .get(&(j + 1, j))
            .cloned()
            .unwrap_or_else(|| Complex::new(S::zero(), S::zero()));
        re_a.push(a.re);
        im_a.push(a.im);
    }
    Ok((FocusValues { omega, re_a, im_a }, w))
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, t| acc * (n - t) as i64 / (t + 1) as i64)
}

/// Complex coefficients `c_{pq}` of `ż = Σ c_{pq} z^p z̄^q` for the real field
/// `(P, Q)`, with `ż = P + iQ`, `x = (z + z̄)/2`, `y = (z − z̄)/(2i)`.
pub(crate) fn to_complex<S: Field>(v: &PolyVF<S>) -> BTreeMap<(u32, u32), Complex<S>> {
    let half = S::from_frac(1, 2);
    let mut out: BTreeMap<(u32, u32), Complex<S>> = BTreeMap::new();
    let mut monomials: BTreeMap<(u32, u32), Complex<S>> = BTreeMap::new();
    for (i, j, c) in v.dx().terms() {
        let e = monomials
            .entry((i, j))
            .or_insert_with(|| Complex::new(S::zero(), S::zero()));
        e.re = e.re.clone() + c.clone();
    }
    for (i, j, c) in v.dy().terms() {
        let e = monomials
            .entry((i, j))
            .or_insert_with(|| Complex::new(S::zero(), S::zero()));
        e.im = e.im.clone() + c.clone();
    }
    for ((i, j), coef) in monomials {
        // x^i y^j = 2^{-i-j} (-i)^j Σ C(i,a) C(j,b) (-1)^{j-b} z^{a+b} z̄^{i+j-a-b}
        let mut pre = Complex::new(S::one(), S::zero());
        for _ in 0..i + j {
            pre = pre * Complex::new(half.clone(), S::zero());
        }
        for _ in 0..j {
            pre = pre * Complex::new(S::zero(), -S::one());
        }
        let pre = pre * coef;
        for a in 0..=i {
            for b in 0..=j {
                let sign = if (j - b) % 2 == 0 { 1 } else { -1 };
                let k = S::from_i64(sign * binom(i, a) * binom(j, b));
                let term = Complex::new(pre.re.clone() * k.clone(), pre.im.clone() * k);
                let key = (a + b, i + j - a - b);
                let e = out
                    .entry(key)
                    .or_insert_with(|| Complex::new(S::zero(), S::zero()));
                *e = e.clone() + term;
            }
        }
    }
    out.retain(|_, c| !(c.re.is_zero() && c.im.is_zero()));
    out
}

/// Real field `(Re h, Im h)` for `h(z, z̄) = Σ h_{pq} z^p z̄^q`, `z = x + iy`.
pub(crate) fn from_complex<S: Field>(h: &BTreeMap<(u32, u32), Complex<S>>) -> (Poly<S>, Poly<S>) {
    let mut re = Poly::zero();
    let mut im = Poly::zero();
    for (&(p, q), coef) in h {
        // (x + iy)^p (x − iy)^q expanded term by term.
        for a in 0..=p {
            for b in 0..=q {
                // i^a (−i)^b
                let mut unit = Complex::new(S::one(), S::zero());
                for _ in 0..a {
                    unit = unit * Complex::new(S::zero(), S::one());
                }
                for _ in 0..b {
                    unit = unit * Complex::new(S::zero(), -S::one());
                }
                let k = S::from_i64(binom(p, a) * binom(q, b));
                let t = unit * coef.clone() * Complex::new(k, S::zero());
                let (xi, yj) = (p - a + q - b, a + b);
                re.add_term(xi, yj, t.re);
                im.add_term(xi, yj, t.im);
            }
        }
    }
    (re, im)
}

/// The real jet of `ż = z(iω + Σ_j a_j |z|^{2j})`, with `a = [(Re a_1, Im a_1), ..]`.
pub fn ah_normal_form<S: Field>(omega: S, a: &[(S, S)], order: u32) -> Result<PolyVF<S>> {
    let mut h: BTreeMap<(u32, u32), Complex<S>> = BTreeMap::new();
    h.insert((1, 0), Complex::new(S::zero(), omega));
    for (j, (re, im)) in a.iter().enumerate() {
        let j = j as u32 + 1;
        if 2 * j < order {
            h.insert((j + 1, j), Complex::new(re.clone(), im.clone()));
        }
    }
    let (dx, dy) = from_complex(&h);
    PolyVF::new(order, dx, dy)
}
