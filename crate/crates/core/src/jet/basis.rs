use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Field;

use super::field::{Component, PolyVF};
use super::poly::Poly;

/// Enumeration of the monomial fields `x^i y^j ∂_c` with `i + j ≤ m`, ordered
/// by component, then total degree, then exponent `(i, j)` lexicographically.
#[derive(Debug, Clone)]
pub struct JetBasisIndex {
    order: u32,
    entries: Vec<(Component, u32, u32)>,
    lookup: HashMap<(Component, u32, u32), usize>,
}

impl JetBasisIndex {
    pub fn new(order: u32) -> Self {
        let mut entries = Vec::new();
        for c in [Component::X, Component::Y] {
            for d in 0..=order {
                for i in 0..=d {
                    entries.push((c, i, d - i));
                }
            }
        }
        let lookup = entries.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        Self {
            order,
            entries,
            lookup,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `(m+1)(m+2)`, the dimension of the jet space.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Component, u32, u32)] {
        &self.entries
    }

    pub fn index_of(&self, c: Component, i: u32, j: u32) -> Option<usize> {
        self.lookup.get(&(c, i, j)).copied()
    }

    /// Indices of fields vanishing at the origin; their count is `dim D^m`.
    pub fn vanishing(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &(_, i, j))| i + j >= 1)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn vanishing_len(&self) -> usize {
        self.len() - 2
    }

    pub fn element<S: Field>(&self, k: usize) -> PolyVF<S> {
        let (c, i, j) = self.entries[k];
        PolyVF::basis(self.order, c, i, j).expect("basis monomial within order")
    }

    /// Coordinate vector of `v`. Fails if `v` has terms above the basis order.
    pub fn coords<S: Field>(&self, v: &PolyVF<S>) -> Result<Vec<S>> {
        let mut out = vec![S::zero(); self.len()];
        for c in [Component::X, Component::Y] {
            for (i, j, coef) in v.component(c).terms() {
                let k = self
                    .index_of(c, i, j)
                    .ok_or(Error::DegreeExceedsOrder {
                        i,
                        j,
                        order: self.order,
                    })?;
                out[k] = coef.clone();
            }
        }
        Ok(out)
    }

    pub fn field<S: Field>(&self, coords: &[S]) -> PolyVF<S> {
        let mut dx = Poly::zero();
        let mut dy = Poly::zero();
        for (&(c, i, j), a) in self.entries.iter().zip(coords) {
            match c {
                Component::X => dx.add_term(i, j, a.clone()),
                Component::Y => dy.add_term(i, j, a.clone()),
            }
        }
        PolyVF::new(self.order, dx, dy).expect("coordinates within order")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn ordering_and_counts() {
        let b = JetBasisIndex::new(2);
        assert_eq!(b.len(), 12);
        assert_eq!(b.vanishing_len(), 10);
        assert_eq!(b.vanishing().len(), 10);
        assert_eq!(b.entries()[0], (Component::X, 0, 0));
        assert_eq!(b.entries()[1], (Component::X, 0, 1));
        assert_eq!(b.entries()[2], (Component::X, 1, 0));
        assert_eq!(b.entries()[6], (Component::Y, 0, 0));
    }

    #[test]
    fn coords_round_trip() {
        let b = JetBasisIndex::new(3);
        let v = PolyVF::<Rational>::from_ints(3, &[(0, 1, -1), (2, 1, 4)], &[(1, 0, 1), (0, 3, 7)]);
        assert_eq!(b.field(&b.coords(&v).unwrap()), v);
    }
}
