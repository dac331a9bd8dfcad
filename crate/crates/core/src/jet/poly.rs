use std::collections::BTreeMap;

use crate::scalar::Field;

/// Sparse bivariate polynomial in `x`, `y`. Zero coefficients are never stored,
/// so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S> {
    terms: BTreeMap<(u32, u32), S>,
}

impl<S: Field> Default for Poly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Field> Poly<S> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(i: u32, j: u32, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, S::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, S::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, S)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Adds `c x^i y^j`, dropping the entry if it cancels.
    pub fn add_term(&mut self, i: u32, j: u32, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((i, j)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> S {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &S)> + '_ {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Lowest total degree present; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn truncate(&self, max_deg: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j <= max_deg)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == d)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    /// Keeps the terms with total degree in `lo..=hi`.
    pub fn degree_range(&self, lo: u32, hi: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| (lo..=hi).contains(&(i + j)))
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, j, c) in other.terms() {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, j, c) in other.terms() {
            out.add_term(i, j, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, c.clone() * s.clone()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Product, keeping terms of total degree at most `max_deg`.
    pub fn mul_trunc(&self, other: &Self, max_deg: u32) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                if i1 + j1 + i2 + j2 <= max_deg {
                    out.add_term(i1 + i2, j1 + j2, c1.clone() * c2.clone());
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, u32::MAX)
    }

    pub fn diff_x(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|&(i, _, _)| i > 0)
                .map(|(i, j, c)| (i - 1, j, c.clone() * S::from_i64(i as i64))),
        )
    }

    pub fn diff_y(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|&(_, j, _)| j > 0)
                .map(|(i, j, c)| (i, j - 1, c.clone() * S::from_i64(j as i64))),
        )
    }

    pub fn eval(&self, x: &S, y: &S) -> S {
        let mut acc = S::zero();
        for (i, j, c) in self.terms() {
            acc = acc + c.clone() * pow(x, i) * pow(y, j);
        }
        acc
    }

    /// Substitutes `x -> p`, `y -> q`, keeping total degree at most `max_deg`.
    ///
    /// Truncation is only meaningful when `p` and `q` have no constant term;
    /// with constants present every term is expanded before truncating.
    pub fn compose(&self, p: &Self, q: &Self, max_deg: u32) -> Self {
        let Some(deg) = self.degree() else {
            return Self::zero();
        };
        let has_const = !p.coeff(0, 0).is_zero() || !q.coeff(0, 0).is_zero();
        let inner_cap = if has_const {
            // Shifts need the full expansion of every power.
            let dp = p.degree().unwrap_or(0).max(1);
            let dq = q.degree().unwrap_or(0).max(1);
            deg.saturating_mul(dp.max(dq))
        } else {
            max_deg
        };
        let px = powers(p, deg, inner_cap);
        let qy = powers(q, deg, inner_cap);
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            let m = px[i as usize].mul_trunc(&qy[j as usize], inner_cap);
            for (a, b, d) in m.terms() {
                if a + b <= max_deg {
                    out.add_term(a, b, c.clone() * d.clone());
                }
            }
        }
        out
    }

    pub fn map_coeffs<T: Field>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_terms(self.terms().map(|(i, j, c)| (i, j, f(c))))
    }
}

fn powers<S: Field>(p: &Poly<S>, n: u32, max_deg: u32) -> Vec<Poly<S>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Poly::constant(S::one()));
    for k in 1..=n as usize {
        let next = out[k - 1].mul_trunc(p, max_deg);
        out.push(next);
    }
    out
}

fn pow<S: Field>(x: &S, n: u32) -> S {
    let mut acc = S::one();
    for _ in 0..n {
        acc = acc * x.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn q(p: i64) -> Rational {
        rational(p, 1)
    }

    #[test]
    fn cancellation_is_canonical() {
        let a = Poly::from_terms([(1, 0, q(1)), (0, 1, q(2))]);
        let b = Poly::from_terms([(1, 0, q(1))]);
        assert_eq!(a.sub(&b), Poly::monomial(0, 1, q(2)));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn compose_shift_expands() {
        // (x^2)(x -> 1 + x) = 1 + 2x + x^2
        let p = Poly::monomial(2, 0, q(1));
        let shift = Poly::from_terms([(0, 0, q(1)), (1, 0, q(1))]);
        let r = p.compose(&shift, &Poly::y(), 2);
        assert_eq!(r, Poly::from_terms([(0, 0, q(1)), (1, 0, q(2)), (2, 0, q(1))]));
    }

    #[test]
    fn derivatives() {
        let p = Poly::from_terms([(2, 1, q(3)), (0, 2, q(1))]);
        assert_eq!(p.diff_x(), Poly::monomial(1, 1, q(6)));
        assert_eq!(p.diff_y(), Poly::from_terms([(2, 0, q(3)), (0, 1, q(2))]));
    }
}
