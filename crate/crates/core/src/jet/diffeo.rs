use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::scalar::Field;

use super::field::PolyVF;
use super::poly::Poly;

/// An m-jet of a diffeomorphism fixing the origin: `(x, y) ↦ (hx, hy)`.
///
/// Constant terms are zero and the linear part is invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffeoJet<S> {
    order: u32,
    hx: Poly<S>,
    hy: Poly<S>,
}

impl<S: Field> DiffeoJet<S> {
    pub fn new(order: u32, hx: Poly<S>, hy: Poly<S>) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        for p in [&hx, &hy] {
            if let Some((i, j, _)) = p.terms().find(|&(i, j, _)| i + j > order) {
                return Err(Error::DegreeExceedsOrder { i, j, order });
            }
            if !p.coeff(0, 0).is_zero() {
                return Err(Error::MovesOrigin);
            }
        }
        let h = Self { order, hx, hy };
        if h.linear_part().det().is_zero() {
            return Err(Error::SingularLinearPart);
        }
        Ok(h)
    }

    pub fn identity(order: u32) -> Result<Self> {
        Self::new(order, Poly::x(), Poly::y())
    }

    pub fn linear(order: u32, a: &Mat2<S>) -> Result<Self> {
        let lin = PolyVF::linear(order, a)?;
        let (hx, hy) = lin.into_components();
        Self::new(order, hx, hy)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn hx(&self) -> &Poly<S> {
        &self.hx
    }

    pub fn hy(&self) -> &Poly<S> {
        &self.hy
    }

    pub fn linear_part(&self) -> Mat2<S> {
        Mat2::new(
            self.hx.coeff(1, 0),
            self.hx.coeff(0, 1),
            self.hy.coeff(1, 0),
            self.hy.coeff(0, 1),
        )
    }

    pub fn truncate(&self, m: u32) -> Result<Self> {
        if m > self.order {
            return Err(Error::OrderTooHigh {
                requested: m,
                available: self.order,
            });
        }
        Self::new(m, self.hx.truncate(m), self.hy.truncate(m))
    }

    pub fn map_coeffs<T: Field>(&self, f: impl Fn(&S) -> T) -> Result<DiffeoJet<T>> {
        DiffeoJet::new(self.order, self.hx.map_coeffs(&f), self.hy.map_coeffs(&f))
    }
}

/// Jet of `g ∘ h`, truncated to the common order.
pub fn compose<S: Field>(g: &DiffeoJet<S>, h: &DiffeoJet<S>) -> Result<DiffeoJet<S>> {
    if g.order != h.order {
        return Err(Error::Invalid(format!(
            "cannot compose jets of orders {} and {}",
            g.order, h.order
        )));
    }
    let m = g.order;
    DiffeoJet::new(
        m,
        g.hx.compose(&h.hx, &h.hy, m),
        g.hy.compose(&h.hx, &h.hy, m),
    )
}

/// Compositional inverse of `h` through order `h.order()`.
///
/// Solves `g = A⁻¹ (id − N∘g)` by fixed-point iteration, where `A` is the
/// linear part and `N` the nonlinear part of `h`; each sweep fixes one more
/// degree.
pub fn invert_jet<S: Field>(h: &DiffeoJet<S>) -> Result<DiffeoJet<S>> {
    let m = h.order;
    let ainv = h
        .linear_part()
        .inverse()
        .ok_or(Error::SingularLinearPart)?;
    let nx = h.hx.degree_range(2, m);
    let ny = h.hy.degree_range(2, m);
    let apply_ainv = |px: &Poly<S>, py: &Poly<S>| {
        (
            px.scale(&ainv.a[0][0]).add(&py.scale(&ainv.a[0][1])),
            px.scale(&ainv.a[1][0]).add(&py.scale(&ainv.a[1][1])),
        )
    };
    let (mut gx, mut gy) = apply_ainv(&Poly::x(), &Poly::y());
    if !(nx.is_zero() && ny.is_zero()) {
        for _ in 1..m {
            let rx = Poly::x().sub(&nx.compose(&gx, &gy, m));
            let ry = Poly::y().sub(&ny.compose(&gx, &gy, m));
            (gx, gy) = apply_ainv(&rx, &ry);
        }
    }
    DiffeoJet::new(m, gx, gy)
}

/// `h_* v`: the m-jet of `(Dh · v) ∘ h⁻¹`.
pub fn pushforward<S: Field>(h: &DiffeoJet<S>, v: &PolyVF<S>, m: u32) -> Result<PolyVF<S>> {
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    let avail = h.order.min(v.order());
    if m > avail {
        return Err(Error::OrderTooHigh {
            requested: m,
            available: avail,
        });
    }
    let h = h.truncate(m)?;
    let hinv = invert_jet(&h)?;
    let vx = v.dx().truncate(m);
    let vy = v.dy().truncate(m);
    let row = |p: &Poly<S>| {
        p.diff_x()
            .mul_trunc(&vx, m)
            .add(&p.diff_y().mul_trunc(&vy, m))
    };
    let wx = row(&h.hx).compose(&hinv.hx, &hinv.hy, m);
    let wy = row(&h.hy).compose(&hinv.hx, &hinv.hy, m);
    PolyVF::new(m, wx, wy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn q(p: i64) -> Rational {
        rational(p, 1)
    }

    fn dj(order: u32, hx: &[(u32, u32, i64)], hy: &[(u32, u32, i64)]) -> DiffeoJet<Rational> {
        let p = |t: &[(u32, u32, i64)]| Poly::from_terms(t.iter().map(|&(i, j, c)| (i, j, q(c))));
        DiffeoJet::new(order, p(hx), p(hy)).unwrap()
    }

    #[test]
    fn rejects_bad_jets() {
        let p = |t: &[(u32, u32, i64)]| Poly::from_terms(t.iter().map(|&(i, j, c)| (i, j, q(c))));
        assert_eq!(
            DiffeoJet::new(2, p(&[(0, 0, 1), (1, 0, 1)]), p(&[(0, 1, 1)])),
            Err(Error::MovesOrigin)
        );
        assert_eq!(
            DiffeoJet::new(2, p(&[(1, 0, 1)]), p(&[(1, 0, 2)])),
            Err(Error::SingularLinearPart)
        );
    }

    #[test]
    fn linear_inverse() {
        let h = dj(2, &[(1, 0, 2)], &[(0, 1, 1)]);
        let g = invert_jet(&h).unwrap();
        assert_eq!(g.hx(), &Poly::monomial(1, 0, rational(1, 2)));
        assert_eq!(g.hy(), &Poly::y());
    }

    #[test]
    fn quadratic_inverse() {
        let h = dj(2, &[(1, 0, 1), (0, 2, 1)], &[(0, 1, 1)]);
        assert_eq!(invert_jet(&h).unwrap(), dj(2, &[(1, 0, 1), (0, 2, -1)], &[(0, 1, 1)]));
    }

    #[test]
    fn compose_scaling_after_shear() {
        let g = dj(2, &[(1, 0, 2)], &[(0, 1, 2)]);
        let h = dj(2, &[(1, 0, 1), (0, 2, 1)], &[(0, 1, 1)]);
        assert_eq!(compose(&g, &h).unwrap(), dj(2, &[(1, 0, 2), (0, 2, 2)], &[(0, 1, 2)]));
    }

    #[test]
    fn pushforward_by_scaling() {
        let h = dj(2, &[(1, 0, 2)], &[(0, 1, 2)]);
        let v = PolyVF::from_ints(2, &[(2, 0, 1)], &[]);
        let w = pushforward(&h, &v, 2).unwrap();
        assert_eq!(w, PolyVF::from_terms(2, [(2, 0, rational(1, 2))], []));
    }

    #[test]
    fn pushforward_identity_and_zero() {
        let v = PolyVF::<Rational>::from_ints(3, &[(0, 1, -1), (3, 0, 2)], &[(1, 0, 1), (1, 1, 5)]);
        let id = DiffeoJet::identity(3).unwrap();
        assert_eq!(pushforward(&id, &v, 3).unwrap(), v);
        let h = dj(3, &[(1, 0, 1), (1, 1, 3)], &[(1, 0, 1), (0, 1, 1), (3, 0, -2)]);
        assert!(pushforward(&h, &PolyVF::zero(3).unwrap(), 3).unwrap().is_zero());
    }
}
