//! Nilpotent germs: reduction to `y ∂x + (b11 x² + b12 xy + b22 y²) ∂y + O(3)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{pushforward, DiffeoJet, Poly, PolyVF};
use crate::linalg::Mat2;
use crate::scalar::{Field, Scalar};

use super::linear::{classify_linear, LinearClass};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BtCoefficients<S> {
    pub b11: S,
    pub b12: S,
    pub b22: S,
}

impl<S: Field> BtCoefficients<S> {
    pub fn to_scalar(&self) -> BtCoefficients<Scalar> {
        BtCoefficients {
            b11: self.b11.to_scalar(),
            b12: self.b12.to_scalar(),
            b22: self.b22.to_scalar(),
        }
    }

    /// `b11·b12 ≠ 0`, decided exactly.
    pub fn is_nondegenerate(&self) -> bool {
        !self.b11.is_zero() && !self.b12.is_zero()
    }
}

/// Result of [`bt_reduce_full`].
#[derive(Debug, Clone)]
pub struct BtReduction<S> {
    pub coeffs: BtCoefficients<S>,
    /// Reduced jet; its first component is exactly `y`.
    pub field: PolyVF<S>,
    /// Composite change of coordinates `field = transform_* v`.
    pub transform: DiffeoJet<S>,
}

pub fn bt_reduce<S: Field>(v: &PolyVF<S>) -> Result<BtCoefficients<S>> {
    Ok(bt_reduce_full(v)?.coeffs)
}

/// Brings the linear part to `y ∂x` with the basis `(Au, u)`, then substitutes
/// `y ↦ ẋ`, which makes the first component exactly `y` at every order.
pub fn bt_reduce_full<S: Field>(v: &PolyVF<S>) -> Result<BtReduction<S>> {
    if !v.vanishes_at_origin() {
        return Err(Error::NonZeroConstant);
    }
    if classify_linear(&v.linear_part()) != LinearClass::BTstar {
        return Err(Error::WrongLinearClass { expected: "BT*" });
    }
    bt_reduce_unchecked(v)
}

pub(crate) fn bt_reduce_unchecked<S: Field>(v: &PolyVF<S>) -> Result<BtReduction<S>> {
    if v.order() < 2 {
        return Err(Error::InsufficientOrder {
            have: v.order(),
            need: 2,
        });
    }
    let m = v.order();
    let a = v.linear_part();
    let c0 = a.a[0][0].to_f64().abs().max(a.a[1][0].to_f64().abs());
    let c1 = a.a[0][1].to_f64().abs().max(a.a[1][1].to_f64().abs());
    let u = if c0 >= c1 {
        [S::one(), S::zero()]
    } else {
        [S::zero(), S::one()]
    };
    let t = Mat2::from_columns(a.apply(u.clone()), u);
    let tinv = t.inverse().ok_or(Error::SingularLinearPart)?;
    let lin = DiffeoJet::linear(m, &tinv)?;
    let mut w = pushforward(&lin, v, m)?;
    let nil = Mat2::new(S::zero(), S::one(), S::zero(), S::zero());
    if !S::EXACT {
        w = w.with_linear_part(&nil);
    }
    debug_assert_eq!(w.linear_part(), nil);
    let sub = DiffeoJet::new(m, Poly::x(), w.dx().clone())?;
    let mut reduced = pushforward(&sub, &w, m)?;
    if !S::EXACT {
        reduced = PolyVF::new(m, Poly::y(), reduced.dy().clone())?;
    }
    debug_assert_eq!(reduced.dx(), &Poly::y());
    let transform = crate::jet::compose(&sub, &lin)?;
    let q = reduced.dy();
    Ok(BtReduction {
        coeffs: BtCoefficients {
            b11: q.coeff(2, 0),
            b12: q.coeff(1, 1),
            b22: q.coeff(0, 2),
        },
        field: reduced,
        transform,
    })
}

/// `y ∂x + (b11 x² + b12 xy + b22 y²) ∂y` as a jet of the given order.
pub fn bt_jet<S: Field>(b: &BtCoefficients<S>, order: u32) -> Result<PolyVF<S>> {
    PolyVF::new(
        order,
        Poly::y(),
        Poly::from_terms([
            (2, 0, b.b11.clone()),
            (1, 1, b.b12.clone()),
            (0, 2, b.b22.clone()),
        ]),
    )
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::scalar::{rational, Rational};

    type V = PolyVF<Rational>;

    fn coeffs(b11: i64, b12: i64, b22: i64) -> BtCoefficients<Rational> {
        BtCoefficients {
            b11: rational(b11, 1),
            b12: rational(b12, 1),
            b22: rational(b22, 1),
        }
    }

    #[test]
    fn normal_forms_read_off() {
        let v = V::from_ints(2, &[(0, 1, 1)], &[(2, 0, 1), (1, 1, 1)]);
        assert_eq!(bt_reduce(&v).unwrap(), coeffs(1, 1, 0));
        let v = V::from_ints(2, &[(0, 1, 1)], &[(2, 0, 1), (0, 2, 1)]);
        let b = bt_reduce(&v).unwrap();
        assert_eq!(b, coeffs(1, 0, 1));
        assert!(!b.is_nondegenerate());
    }

    #[test]
    fn substitution_example() {
        let v = V::from_ints(2, &[(0, 1, 1), (2, 0, 1)], &[(2, 0, 1)]);
        assert_eq!(bt_reduce(&v).unwrap(), coeffs(1, 2, 0));
    }

    #[test]
    fn first_component_is_exactly_y() {
        let v = V::from_ints(
            4,
            &[(0, 1, 1), (2, 0, 3), (1, 1, -1), (3, 0, 2), (0, 4, 1)],
            &[(2, 0, 1), (1, 2, 5)],
        );
        let r = bt_reduce_full(&v).unwrap();
        assert_eq!(r.field.dx(), &Poly::y());
        assert_eq!(pushforward(&r.transform, &v, 4).unwrap(), r.field);
    }

    #[test]
    fn other_nilpotent_matrices() {
        // A = [[1, 1], [-1, -1]], and lower-triangular x ∂y.
        let v = V::from_ints(2, &[(1, 0, 1), (0, 1, 1), (2, 0, 1)], &[(1, 0, -1), (0, 1, -1)]);
        let r = bt_reduce_full(&v).unwrap();
        assert_eq!(r.field.dx(), &Poly::y());
        let v = V::from_ints(2, &[(2, 0, 1)], &[(1, 0, 1), (1, 1, 1)]);
        let r = bt_reduce_full(&v).unwrap();
        assert_eq!(r.field.dx(), &Poly::y());
        // In coordinates (y, x) the substitution leaves ẏ_new = 2 y_new² + O(3).
        assert!(r.coeffs.b11.is_zero());
        assert_eq!(r.coeffs.b22, rational(2, 1));
    }
}
