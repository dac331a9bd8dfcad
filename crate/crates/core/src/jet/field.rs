use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::scalar::Field;

use super::poly::Poly;

/// Component of a planar vector field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    X,
    Y,
}

/// An m-jet of a planar vector field at the origin: two polynomials of total
/// degree at most `order`, stored in canonical sparse form.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVF<S> {
    order: u32,
    dx: Poly<S>,
    dy: Poly<S>,
}

impl<S: Field> PolyVF<S> {
    pub fn new(order: u32, dx: Poly<S>, dy: Poly<S>) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        for p in [&dx, &dy] {
            if let Some((i, j, _)) = p.terms().find(|&(i, j, _)| i + j > order) {
                return Err(Error::DegreeExceedsOrder { i, j, order });
            }
        }
        Ok(Self { order, dx, dy })
    }

    /// Builds a jet from `(i, j, coeff)` triples; panics on invalid input.
    /// Meant for literals in tests and normal-form constructors.
    pub fn from_terms(
        order: u32,
        dx: impl IntoIterator<Item = (u32, u32, S)>,
        dy: impl IntoIterator<Item = (u32, u32, S)>,
    ) -> Self {
        Self::new(order, Poly::from_terms(dx), Poly::from_terms(dy)).expect("valid jet literal")
    }

    /// Like [`PolyVF::from_terms`] with integer coefficients.
    pub fn from_ints(order: u32, dx: &[(u32, u32, i64)], dy: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(
            order,
            dx.iter().map(|&(i, j, c)| (i, j, S::from_i64(c))),
            dy.iter().map(|&(i, j, c)| (i, j, S::from_i64(c))),
        )
    }

    pub fn zero(order: u32) -> Result<Self> {
        Self::new(order, Poly::zero(), Poly::zero())
    }

    /// Monomial field `x^i y^j ∂_c`.
    pub fn basis(order: u32, c: Component, i: u32, j: u32) -> Result<Self> {
        let m = Poly::monomial(i, j, S::one());
        match c {
            Component::X => Self::new(order, m, Poly::zero()),
            Component::Y => Self::new(order, Poly::zero(), m),
        }
    }

    /// Field given by a linear map.
    pub fn linear(order: u32, a: &Mat2<S>) -> Result<Self> {
        let row = |r: usize| {
            Poly::from_terms([(1, 0, a.a[r][0].clone()), (0, 1, a.a[r][1].clone())])
        };
        Self::new(order, row(0), row(1))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dx(&self) -> &Poly<S> {
        &self.dx
    }

    pub fn dy(&self) -> &Poly<S> {
        &self.dy
    }

    pub fn component(&self, c: Component) -> &Poly<S> {
        match c {
            Component::X => &self.dx,
            Component::Y => &self.dy,
        }
    }

    pub fn into_components(self) -> (Poly<S>, Poly<S>) {
        (self.dx, self.dy)
    }

    pub fn is_zero(&self) -> bool {
        self.dx.is_zero() && self.dy.is_zero()
    }

    pub fn degree(&self) -> Option<u32> {
        self.dx.degree().max(self.dy.degree())
    }

    /// Lowest degree present over both components.
    pub fn valuation(&self) -> Option<u32> {
        match (self.dx.valuation(), self.dy.valuation()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn constant(&self) -> [S; 2] {
        [self.dx.coeff(0, 0), self.dy.coeff(0, 0)]
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.dx.coeff(0, 0).is_zero() && self.dy.coeff(0, 0).is_zero()
    }

    /// Matrix of degree-1 coefficients, rows indexed by component.
    pub fn linear_part(&self) -> Mat2<S> {
        Mat2::new(
            self.dx.coeff(1, 0),
            self.dx.coeff(0, 1),
            self.dy.coeff(1, 0),
            self.dy.coeff(0, 1),
        )
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.dx.max_abs().max(self.dy.max_abs())
    }

    pub fn truncate(&self, m: u32) -> Result<Self> {
        if m > self.order {
            return Err(Error::OrderTooHigh {
                requested: m,
                available: self.order,
            });
        }
        Self::new(m, self.dx.truncate(m), self.dy.truncate(m))
    }

    /// Same polynomials viewed as a jet of a different order (truncating if lower).
    pub fn with_order(&self, m: u32) -> Result<Self> {
        Self::new(m, self.dx.truncate(m), self.dy.truncate(m))
    }

    pub fn homogeneous(&self, d: u32) -> Self {
        Self {
            order: self.order,
            dx: self.dx.homogeneous(d),
            dy: self.dy.homogeneous(d),
        }
    }

    pub fn without_constant(&self) -> Self {
        self.map_polys(|p| p.degree_range(1, u32::MAX))
    }

    pub fn map_polys(&self, f: impl Fn(&Poly<S>) -> Poly<S>) -> Self {
        Self {
            order: self.order,
            dx: f(&self.dx).truncate(self.order),
            dy: f(&self.dy).truncate(self.order),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            order: self.order.min(o.order),
            dx: self.dx.add(&o.dx).truncate(self.order.min(o.order)),
            dy: self.dy.add(&o.dy).truncate(self.order.min(o.order)),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            order: self.order,
            dx: self.dx.scale(s),
            dy: self.dy.scale(s),
        }
    }

    /// Replaces the linear part.
    pub fn with_linear_part(&self, a: &Mat2<S>) -> Self {
        let strip = |p: &Poly<S>| p.sub(&p.homogeneous(1));
        let lin = Self::linear(self.order, a).expect("order >= 1");
        Self {
            order: self.order,
            dx: strip(&self.dx).add(&lin.dx),
            dy: strip(&self.dy).add(&lin.dy),
        }
    }

    pub fn eval(&self, x: &S, y: &S) -> [S; 2] {
        [self.dx.eval(x, y), self.dy.eval(x, y)]
    }

    pub fn map_coeffs<T: Field>(&self, f: impl Fn(&S) -> T) -> PolyVF<T> {
        PolyVF {
            order: self.order,
            dx: self.dx.map_coeffs(&f),
            dy: self.dy.map_coeffs(&f),
        }
    }

    pub fn to_f64(&self) -> PolyVF<f64> {
        self.map_coeffs(|c| c.to_f64())
    }
}

/// `Dw·v − Dv·w` with no truncation.
fn bracket_raw<S: Field>(v: &PolyVF<S>, w: &PolyVF<S>, max_deg: u32) -> (Poly<S>, Poly<S>) {
    let lie = |a: &Poly<S>, b: &PolyVF<S>| {
        // (grad a) · b
        a.diff_x()
            .mul_trunc(&b.dx, max_deg)
            .add(&a.diff_y().mul_trunc(&b.dy, max_deg))
    };
    let x = lie(&w.dx, v).sub(&lie(&v.dx, w));
    let y = lie(&w.dy, v).sub(&lie(&v.dy, w));
    (x, y)
}

/// Lie bracket `[v, w] = Dw·v − Dv·w` of the polynomial representatives,
/// truncated to degree `m`.
///
/// For jets vanishing at the origin the result is independent of the chosen
/// representatives; otherwise the top degree is representative-dependent.
pub fn bracket<S: Field>(v: &PolyVF<S>, w: &PolyVF<S>, m: u32) -> Result<PolyVF<S>> {
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    let avail = v.order.min(w.order);
    if m > avail {
        return Err(Error::OrderTooHigh {
            requested: m,
            available: avail,
        });
    }
    let (x, y) = bracket_raw(v, w, m);
    PolyVF::new(m, x.truncate(m), y.truncate(m))
}

/// Lie bracket of the polynomial representatives without truncation. The
/// result is a jet of order `v.order + w.order - 1`.
pub fn bracket_full<S: Field>(v: &PolyVF<S>, w: &PolyVF<S>) -> PolyVF<S> {
    let order = (v.order + w.order).saturating_sub(1).max(1);
    let (x, y) = bracket_raw(v, w, u32::MAX);
    PolyVF::new(order, x, y).expect("degree bound of a polynomial bracket")
}
