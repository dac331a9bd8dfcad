//! Saddle-node germs: center-manifold reduction and the full normal form
//! `(Σ a_k x^k) ∂x + y(λ + Σ b_k x^k) ∂y`.

use crate::error::{Error, Result};
use crate::jet::{pushforward, DiffeoJet, Poly, PolyVF};
use crate::linalg::Mat2;
use crate::scalar::{Field, Scalar};

use super::linear::{classify_linear, LinearClass};

/// Result of [`sn_reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct SnReduction<S> {
    /// Nonzero eigenvalue.
    pub lambda: S,
    /// `h_0 .. h_m` of the center manifold `y = h(x)`; `h_0 = h_1 = 0`.
    pub center_manifold: Vec<S>,
    /// `a_1 .. a_m` of the reduced equation `ẋ = Σ a_k x^k`; `a_1 = 0`.
    pub reduced: Vec<S>,
    /// The germ in eigen-coordinates, linear part `diag(0, λ)`.
    pub diagonal: PolyVF<S>,
    pub transform: DiffeoJet<S>,
}

impl<S: Field> SnReduction<S> {
    /// `a_k`, zero outside the computed range.
    pub fn a(&self, k: usize) -> S {
        k.checked_sub(1)
            .and_then(|i| self.reduced.get(i))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn to_scalar_payload(&self) -> (Scalar, Vec<Scalar>, Vec<Scalar>) {
        (
            self.lambda.to_scalar(),
            self.reduced.iter().map(Field::to_scalar).collect(),
            self.center_manifold.iter().map(Field::to_scalar).collect(),
        )
    }
}

/// Linear change to eigen-coordinates `(center, stable/unstable)`.
fn diagonalize<S: Field>(v: &PolyVF<S>) -> Result<(PolyVF<S>, DiffeoJet<S>, S)> {
    let a = v.linear_part();
    let lambda = a.trace();
    if lambda.is_zero() {
        return Err(Error::WrongLinearClass { expected: "SN*" });
    }
    // Kernel vector from the larger row, λ-eigenvector from the larger column
    // (A² = λA, so every nonzero column is one).
    let r0 = a.a[0][0].to_f64().abs().max(a.a[0][1].to_f64().abs());
    let r1 = a.a[1][0].to_f64().abs().max(a.a[1][1].to_f64().abs());
    let row = if r0 >= r1 { 0 } else { 1 };
    let kern = [-a.a[row][1].clone(), a.a[row][0].clone()];
    let c0 = a.a[0][0].to_f64().abs().max(a.a[1][0].to_f64().abs());
    let c1 = a.a[0][1].to_f64().abs().max(a.a[1][1].to_f64().abs());
    let col = if c0 >= c1 { 0 } else { 1 };
    let eig = [a.a[0][col].clone(), a.a[1][col].clone()];
    let t = Mat2::from_columns(orient(kern), orient(eig));
    let tinv = t.inverse().ok_or(Error::SingularLinearPart)?;
    let h = DiffeoJet::linear(v.order(), &tinv)?;
    let mut w = pushforward(&h, v, v.order())?;
    let diag = Mat2::new(S::zero(), S::zero(), S::zero(), lambda.clone());
    if !S::EXACT {
        w = w.with_linear_part(&diag);
    }
    debug_assert_eq!(w.linear_part(), diag);
    Ok((w, h, lambda))
}

/// Flips `u` so that its largest entry is positive.
fn orient<S: Field>(u: [S; 2]) -> [S; 2] {
    let big = if u[0].to_f64().abs() >= u[1].to_f64().abs() {
        &u[0]
    } else {
        &u[1]
    };
    if big.is_negative() {
        [-u[0].clone(), -u[1].clone()]
    } else {
        u
    }
}

/// Center-manifold reduction of a saddle-node germ through order `m`.
///
/// In eigen-coordinates `ẋ = f(x, y)`, `ẏ = λy + g(x, y)` the invariance
/// equation `h'(x) f(x, h) = λh + g(x, h)` is solved degree by degree: the
/// degree-n coefficient of the residual is affine in `h_n` with slope `−λ`.
pub fn sn_reduce<S: Field>(v: &PolyVF<S>, m: u32) -> Result<SnReduction<S>> {
    if !v.vanishes_at_origin() {
        return Err(Error::NonZeroConstant);
    }
    if classify_linear(&v.linear_part()) != LinearClass::SNstar {
        return Err(Error::WrongLinearClass { expected: "SN*" });
    }
    sn_reduce_unchecked(v, m)
}

pub(crate) fn sn_reduce_unchecked<S: Field>(v: &PolyVF<S>, m: u32) -> Result<SnReduction<S>> {
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    if m > v.order() {
        return Err(Error::OrderTooHigh {
            requested: m,
            available: v.order(),
        });
    }
    let (diagonal, transform, lambda) = diagonalize(&v.truncate(m)?)?;
    let f = diagonal.dx();
    let g = diagonal.dy();
    let mut h = Poly::zero();
    for n in 2..=m {
        let r = invariance_residual(f, g, &h, m);
        let c = r.coeff(n, 0);
        if !c.is_zero() {
            h.add_term(n, 0, c / lambda.clone());
        }
    }
    let reduced_poly = f.compose(&Poly::x(), &h, m);
    let center_manifold = (0..=m).map(|n| h.coeff(n, 0)).collect();
    let reduced = (1..=m).map(|n| reduced_poly.coeff(n, 0)).collect();
    Ok(SnReduction {
        lambda,
        center_manifold,
        reduced,
        diagonal,
        transform,
    })
}

/// `h'(x)·f(x, h(x)) − g(x, h(x))` through degree `m`, as a polynomial in `x`.
pub fn invariance_residual<S: Field>(f: &Poly<S>, g: &Poly<S>, h: &Poly<S>, m: u32) -> Poly<S> {
    let fh = f.compose(&Poly::x(), h, m);
    let gh = g.compose(&Poly::x(), h, m);
    h.diff_x().mul_trunc(&fh, m).sub(&gh)
}

/// Coefficients of the full saddle-node normal form through order `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnNormalForm<S> {
    pub lambda: S,
    /// `a_2 .. a_m`.
    pub a: Vec<S>,
    /// `b_1 .. b_{m-1}`.
    pub b: Vec<S>,
    pub field: PolyVF<S>,
}

/// Full normal form: every monomial outside `x^k ∂x` and `x^k y ∂y` is removed
/// by near-identity changes of coordinates, degree by degree.
pub fn sn_normal_form<S: Field>(v: &PolyVF<S>, m: u32) -> Result<SnNormalForm<S>> {
    if classify_linear(&v.linear_part()) != LinearClass::SNstar {
        return Err(Error::WrongLinearClass { expected: "SN*" });
    }
    if m > v.order() {
        return Err(Error::OrderTooHigh {
            requested: m,
            available: v.order(),
        });
    }
    let (mut w, _, lambda) = diagonalize(&v.truncate(m)?)?;
    for d in 2..=m {
        let mut hx = Poly::zero();
        let mut hy = Poly::zero();
        for (i, j, c) in w.dx().homogeneous(d).terms() {
            // eigenvalue of x^i y^j ∂x under ad of diag(0, λ): jλ
            if j != 0 {
                hx.add_term(i, j, c.clone() / (lambda.clone() * S::from_i64(j as i64)));
            }
        }
        for (i, j, c) in w.dy().homogeneous(d).terms() {
            if j != 1 {
                let e = lambda.clone() * S::from_i64(j as i64 - 1);
                hy.add_term(i, j, c.clone() / e);
            }
        }
        if hx.is_zero() && hy.is_zero() {
            continue;
        }
        let phi = DiffeoJet::new(m, Poly::x().sub(&hx), Poly::y().sub(&hy))?;
        w = pushforward(&phi, &w, m)?;
        if !S::EXACT {
            let keep = |p: &Poly<S>, jy: u32| {
                let lower = p.sub(&p.homogeneous(d));
                let top = Poly::from_terms(
                    p.homogeneous(d)
                        .terms()
                        .filter(|&(_, j, _)| j == jy)
                        .map(|(i, j, c)| (i, j, c.clone())),
                );
                lower.add(&top)
            };
            w = PolyVF::new(m, keep(w.dx(), 0), keep(w.dy(), 1))?;
        }
    }
    let a = (2..=m).map(|k| w.dx().coeff(k, 0)).collect();
    let b = (1..m).map(|k| w.dy().coeff(k, 1)).collect();
    Ok(SnNormalForm {
        lambda,
        a,
        b,
        field: w,
    })
}

/// The jet `(Σ a_k x^k) ∂x + y(λ + Σ b_k x^k) ∂y` with `a = [a_2, ..]`,
/// `b = [b_1, ..]`.
pub fn sn_jet<S: Field>(lambda: S, a: &[S], b: &[S], order: u32) -> Result<PolyVF<S>> {
    let mut dx = Poly::zero();
    let mut dy = Poly::monomial(0, 1, lambda);
    for (k, c) in a.iter().enumerate() {
        dx.add_term(k as u32 + 2, 0, c.clone());
    }
    for (k, c) in b.iter().enumerate() {
        dy.add_term(k as u32 + 1, 1, c.clone());
    }
    PolyVF::new(order, dx, dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    type V = PolyVF<Rational>;

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    #[test]
    fn normal_form_input() {
        let v = V::from_ints(2, &[(2, 0, 1)], &[(0, 1, -1)]);
        let r = sn_reduce(&v, 2).unwrap();
        assert_eq!(r.reduced, vec![q(0), q(1)]);
        assert!(r.center_manifold.iter().all(|c| *c == q(0)));
        assert_eq!(r.lambda, q(-1));
    }

    #[test]
    fn curved_center_manifold() {
        let v = V::from_ints(3, &[(1, 1, 1)], &[(0, 1, -1), (2, 0, 1)]);
        let r = sn_reduce(&v, 3).unwrap();
        assert_eq!(r.center_manifold[2], q(1));
        assert_eq!(r.reduced, vec![q(0), q(0), q(1)]);
        let res = invariance_residual(
            r.diagonal.dx(),
            r.diagonal.dy(),
            &Poly::from_terms((0..=3).map(|n| (n, 0, r.center_manifold[n as usize].clone()))),
            3,
        );
        assert!(res.is_zero());
    }

    #[test]
    fn cubic() {
        let v = V::from_ints(3, &[(3, 0, 1)], &[(0, 1, -1)]);
        assert_eq!(sn_reduce(&v, 3).unwrap().reduced, vec![q(0), q(0), q(1)]);
    }

    #[test]
    fn non_diagonal_linear_part() {
        // A = [[1, 1], [1, 1]]: λ = 2.
        let v = V::from_ints(2, &[(1, 0, 1), (0, 1, 1), (2, 0, 1)], &[(1, 0, 1), (0, 1, 1)]);
        let r = sn_reduce(&v, 2).unwrap();
        assert_eq!(r.lambda, q(2));
        assert_eq!(r.diagonal.linear_part(), Mat2::from_ints([[0, 0], [0, 2]]));
        assert_ne!(r.a(2), q(0));
    }

    #[test]
    fn rejects_other_classes() {
        let v = V::from_ints(2, &[(1, 0, 1)], &[(0, 1, -1)]);
        assert!(sn_reduce(&v, 2).is_err());
    }

    #[test]
    fn full_normal_form_round_trip() {
        let w = sn_jet(q(-1), &[q(0), q(2)], &[q(1), q(-3)], 3).unwrap();
        let nf = sn_normal_form(&w, 3).unwrap();
        assert_eq!(nf.a, vec![q(0), q(2)]);
        assert_eq!(nf.b, vec![q(1), q(-3)]);
    }

    #[test]
    fn full_normal_form_removes_non_resonant() {
        let v = V::from_ints(3, &[(1, 1, 1), (0, 2, 3)], &[(0, 1, -1), (2, 0, 1), (1, 2, 5)]);
        let nf = sn_normal_form(&v, 3).unwrap();
        for (i, j, _) in nf.field.dx().terms() {
            assert_eq!(j, 0, "x^{i} y^{j} left in first component");
        }
        for (i, j, _) in nf.field.dy().terms() {
            assert_eq!(j, 1, "x^{i} y^{j} left in second component");
        }
        // a_k agree with the center-manifold chain at the first nonzero index.
        let r = sn_reduce(&v, 3).unwrap();
        assert_eq!(nf.a[1], r.a(3));
    }
}
