//! Partition of 2×2 matrices by eigenvalue configuration.

use std::fmt;

use serde::Serialize;

use crate::linalg::Mat2;
use crate::scalar::{Decision, Field, Tolerances};

/// Relative tolerance of [`classify_linear`] in the float backend.
pub const TAU_LIN: f64 = 1e-12;

/// Classes of linear parts. Exactly one holds for every matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LinearClass {
    /// No eigenvalue on the imaginary axis.
    Hstar,
    /// Pure imaginary pair `±iω`, `ω > 0`.
    AHstar,
    /// One zero eigenvalue, one nonzero.
    SNstar,
    /// Nonzero nilpotent.
    BTstar,
    Zero,
}

impl LinearClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::Hstar => "Hstar",
            Self::AHstar => "AHstar",
            Self::SNstar => "SNstar",
            Self::BTstar => "BTstar",
            Self::Zero => "Zero",
        }
    }

    pub fn is_hyperbolic(self) -> bool {
        self == Self::Hstar
    }
}

impl fmt::Display for LinearClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Class of `a`: exact for rationals, with relative tolerance [`TAU_LIN`]
/// (trace against `‖A‖`, determinant against `‖A‖²`) for floats.
pub fn classify_linear<S: Field>(a: &Mat2<S>) -> LinearClass {
    let tol = Tolerances::sharp(TAU_LIN);
    classify_linear_with(a, 0.0, &tol).expect("sharp tolerances never defer")
}

/// Dead-zone version used by germ classification. `jet_scale` is the scale
/// against which a vanishing linear part is judged; with `jet_scale = 0` the
/// matrix is zero only if all entries are exactly zero. Returns `None` when
/// some decision falls in the dead zone.
pub fn classify_linear_with<S: Field>(
    a: &Mat2<S>,
    jet_scale: f64,
    tol: &Tolerances,
) -> Option<LinearClass> {
    let norm = a.max_abs();
    if a.is_zero() {
        return Some(LinearClass::Zero);
    }
    if !S::EXACT {
        match Field::decide(&norm, jet_scale, tol) {
            Decision::Zero => return Some(LinearClass::Zero),
            Decision::Uncertain => return None,
            Decision::NonZero => {}
        }
    }
    let tr = a.trace();
    let det = a.det();
    let det_d = det.decide(norm * norm, tol);
    let tr_d = tr.decide(norm, tol);
    match det_d {
        Decision::Uncertain => None,
        Decision::NonZero if det.is_negative() => Some(LinearClass::Hstar),
        Decision::NonZero => match tr_d {
            Decision::Zero => Some(LinearClass::AHstar),
            Decision::NonZero => Some(LinearClass::Hstar),
            Decision::Uncertain => None,
        },
        Decision::Zero => match tr_d {
            Decision::Zero => Some(LinearClass::BTstar),
            Decision::NonZero => Some(LinearClass::SNstar),
            Decision::Uncertain => None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(a: [[i64; 2]; 2]) -> LinearClass {
        classify_linear(&Mat2::<Rational>::from_ints(a))
    }

    #[test]
    fn canonical_representatives() {
        assert_eq!(q([[1, 0], [0, -1]]), LinearClass::Hstar);
        assert_eq!(q([[1, 0], [0, 2]]), LinearClass::Hstar);
        assert_eq!(q([[1, -1], [1, 1]]), LinearClass::Hstar);
        assert_eq!(q([[0, -1], [1, 0]]), LinearClass::AHstar);
        assert_eq!(q([[0, 1], [0, 0]]), LinearClass::BTstar);
        assert_eq!(q([[0, 0], [0, 3]]), LinearClass::SNstar);
        assert_eq!(q([[0, 0], [0, 0]]), LinearClass::Zero);
        assert_eq!(q([[1, -2], [1, -1]]), LinearClass::AHstar);
        assert_eq!(q([[1, 1], [-1, -1]]), LinearClass::BTstar);
    }

    #[test]
    fn float_tolerance() {
        let a = Mat2::new(1e-17, -1.0, 1.0, 0.0);
        assert_eq!(classify_linear(&a), LinearClass::AHstar);
        let a = Mat2::new(1e-3, -1.0, 1.0, 0.0);
        assert_eq!(classify_linear(&a), LinearClass::Hstar);
        let a = Mat2::new(1.0, 1.0, 1.0, 1.0 + 1e-15);
        assert_eq!(classify_linear(&a), LinearClass::SNstar);
    }

    #[test]
    fn dead_zone_defers() {
        let tol = Tolerances::default();
        let a = Mat2::new(1e-7, -1.0, 1.0, 0.0);
        assert_eq!(classify_linear_with(&a, 1.0, &tol), None);
        let a = Mat2::new(1e-12, 0.0, 0.0, 0.0);
        assert_eq!(classify_linear_with(&a, 1.0, &tol), Some(LinearClass::Zero));
        let a = Mat2::new(1e-7, 0.0, 0.0, 0.0);
        assert_eq!(classify_linear_with(&a, 1.0, &tol), None);
    }
}
