//! Seeded random rationals, matrices and diffeomorphism jets.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jet::{DiffeoJet, Poly};
use crate::linalg::Mat2;
use crate::scalar::{Field, Rational};

/// Largest denominator of sampled rationals.
pub const MAX_DENOM: i64 = 7;

/// Smallest `|det|` accepted for the linear part of a random diffeomorphism.
pub const MIN_DET: f64 = 0.1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational `p/q` in `[−bound, bound]` with `1 ≤ q ≤ 7`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let q = rng.random_range(1..=MAX_DENOM);
    let p = rng.random_range(-bound * q..=bound * q);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    loop {
        let r = small_rational(rng, bound);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Matrix with small integer entries, so that the degenerate classes
/// (zero trace, zero determinant) are hit with positive frequency.
pub fn small_int_matrix<R: Rng>(rng: &mut R, bound: i64) -> Mat2<Rational> {
    let mut e = || Rational::from_integer(BigInt::from(rng.random_range(-bound..=bound)));
    Mat2::new(e(), e(), e(), e())
}

/// Random diffeomorphism jet: every coefficient of degree 1..=order drawn by
/// [`small_rational`] in `[−2, 2]`, linear part resampled until
/// `|det| ≥ MIN_DET`.
pub fn random_diffeo<R: Rng>(rng: &mut R, order: u32) -> DiffeoJet<Rational> {
    let lin = loop {
        let a = Mat2::new(
            small_rational(rng, 2),
            small_rational(rng, 2),
            small_rational(rng, 2),
            small_rational(rng, 2),
        );
        if a.det().to_f64().abs() >= MIN_DET {
            break a;
        }
    };
    let mut hx = Poly::from_terms([(1, 0, lin.a[0][0].clone()), (0, 1, lin.a[0][1].clone())]);
    let mut hy = Poly::from_terms([(1, 0, lin.a[1][0].clone()), (0, 1, lin.a[1][1].clone())]);
    for d in 2..=order {
        for i in 0..=d {
            hx.add_term(i, d - i, small_rational(rng, 2));
            hy.add_term(i, d - i, small_rational(rng, 2));
        }
    }
    DiffeoJet::new(order, hx, hy).expect("nonsingular linear part")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_bounded() {
        let a: Vec<_> = (0..20).map(|_| small_rational(&mut rng(3), 2)).collect();
        let mut r = rng(3);
        let b = small_rational(&mut r, 2);
        assert_eq!(a[0], b);
        let mut r = rng(9);
        for _ in 0..200 {
            let x = small_rational(&mut r, 2);
            assert!(x.to_f64().abs() <= 2.0);
            assert!(*x.denom() <= BigInt::from(MAX_DENOM));
        }
    }

    #[test]
    fn diffeos_are_invertible() {
        let mut r = rng(1);
        for _ in 0..20 {
            let h = random_diffeo(&mut r, 3);
            assert!(h.linear_part().det().to_f64().abs() >= MIN_DET);
        }
    }
}
