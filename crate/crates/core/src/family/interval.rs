//! Naive interval evaluation of polynomials over boxes, used only to discard
//! cells that cannot contain a zero. No outward rounding: the exclusion is a
//! heuristic filter, not a certificate.

use std::ops::{Add, Mul};

use crate::jet::Poly;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn scale(self, s: f64) -> Self {
        if s >= 0.0 {
            Self::new(self.lo * s, self.hi * s)
        } else {
            Self::new(self.hi * s, self.lo * s)
        }
    }

    /// Exact range of `t^n` over the interval.
    pub fn powi(self, n: u32) -> Self {
        if n == 0 {
            return Self::point(1.0);
        }
        let a = self.lo.powi(n as i32);
        let b = self.hi.powi(n as i32);
        if n % 2 == 1 {
            Self::new(a, b)
        } else if self.contains_zero() {
            Self::new(0.0, a.max(b))
        } else {
            Self::new(a.min(b), a.max(b))
        }
    }
}

impl Add for Interval {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Mul for Interval {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Self::new(
            c.iter().copied().fold(f64::INFINITY, f64::min),
            c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    }
}

/// Enclosure of `p` over `x × y` by monomial-wise evaluation.
pub fn eval(p: &Poly<f64>, x: Interval, y: Interval) -> Interval {
    p.terms().fold(Interval::point(0.0), |acc, (i, j, &c)| {
        acc + (x.powi(i) * y.powi(j)).scale(c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_powers_straddling_zero() {
        let t = Interval::new(-1.0, 2.0);
        assert_eq!(t.powi(2), Interval::new(0.0, 4.0));
        assert_eq!(t.powi(3), Interval::new(-1.0, 8.0));
    }

    #[test]
    fn encloses_values() {
        let p = Poly::from_terms([(2, 0, 1.0), (1, 1, 1.0), (0, 0, 1.0)]);
        let r = eval(&p, Interval::new(-0.5, 0.5), Interval::new(-0.1, 0.1));
        assert!(!r.contains_zero());
        assert!(r.lo <= 1.0 && r.hi >= 1.25);
    }
}
