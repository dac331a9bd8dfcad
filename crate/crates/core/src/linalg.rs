//! Small dense linear algebra: 2×2 matrices over any field, and
//! fraction-free (Bareiss) rank and kernel computations over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Field, Rational};

/// Row-major 2×2 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat2<S> {
    pub a: [[S; 2]; 2],
}

impl<S: Field> Mat2<S> {
    pub fn new(a00: S, a01: S, a10: S, a11: S) -> Self {
        Self {
            a: [[a00, a01], [a10, a11]],
        }
    }

    pub fn from_ints(a: [[i64; 2]; 2]) -> Self {
        Self::new(
            S::from_i64(a[0][0]),
            S::from_i64(a[0][1]),
            S::from_i64(a[1][0]),
            S::from_i64(a[1][1]),
        )
    }

    pub fn identity() -> Self {
        Self::new(S::one(), S::zero(), S::zero(), S::one())
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.a[i][j]
    }

    pub fn trace(&self) -> S {
        self.a[0][0].clone() + self.a[1][1].clone()
    }

    pub fn det(&self) -> S {
        self.a[0][0].clone() * self.a[1][1].clone() - self.a[0][1].clone() * self.a[1][0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().flatten().all(|c| c.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .iter()
            .flatten()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| {
            self.a[i][0].clone() * o.a[0][j].clone() + self.a[i][1].clone() * o.a[1][j].clone()
        };
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn apply(&self, v: [S; 2]) -> [S; 2] {
        let [x, y] = v;
        [
            self.a[0][0].clone() * x.clone() + self.a[0][1].clone() * y.clone(),
            self.a[1][0].clone() * x + self.a[1][1].clone() * y,
        ]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        Some(Self::new(
            self.a[1][1].clone() / d.clone(),
            -self.a[0][1].clone() / d.clone(),
            -self.a[1][0].clone() / d.clone(),
            self.a[0][0].clone() / d,
        ))
    }

    /// Matrix whose columns are `c0` and `c1`.
    pub fn from_columns(c0: [S; 2], c1: [S; 2]) -> Self {
        let [a00, a10] = c0;
        let [a01, a11] = c1;
        Self::new(a00, a01, a10, a11)
    }

    pub fn map<T: Field>(&self, f: impl Fn(&S) -> T) -> Mat2<T> {
        Mat2::new(
            f(&self.a[0][0]),
            f(&self.a[0][1]),
            f(&self.a[1][0]),
            f(&self.a[1][1]),
        )
    }
}

/// Integer row-echelon form produced by Bareiss elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Clears denominators row by row.
fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter()
                .map(|c| c.numer() * (&l / c.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free Gaussian elimination. Every intermediate entry is a minor of
/// the input, so all divisions are exact.
pub fn bareiss(rows: &[Vec<Rational>], ncols: usize) -> Echelon {
    let mut m = integer_rows(rows);
    debug_assert!(m.iter().all(|r| r.len() == ncols));
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // Smallest nonzero pivot keeps entries short.
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].bits())
        else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            if f.is_zero() {
                // Entry is still scaled by the pivot for the minor identity.
                for j in c + 1..ncols {
                    if !row[j].is_zero() {
                        row[j] = (&pv * &row[j]) / &prev;
                    }
                }
                continue;
            }
            for j in c + 1..ncols {
                let num = &pv * &row[j] - &f * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero());
                row[j] = num / &prev;
            }
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon {
        rows: m,
        pivots,
        ncols,
    }
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    bareiss(rows, ncols).rank()
}

/// Basis of the right kernel `{x : M x = 0}`, one vector per free column,
/// each scaled to a primitive integer vector with positive leading entry.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let ech = bareiss(rows, ncols);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &p in &ech.pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Rational::zero(); ncols];
        x[free] = Rational::one();
        for (r, &pc) in ech.pivots.iter().enumerate().rev() {
            let row = &ech.rows[r];
            let mut s = Rational::zero();
            for j in pc + 1..ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    s += Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = -s / Rational::from_integer(row[pc].clone());
        }
        basis.push(primitive(x));
    }
    basis
}

fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v;
    }
    let sign = ints
        .iter()
        .find(|c| !c.is_zero())
        .map_or(BigInt::one(), |c| c.signum());
    ints.into_iter()
        .map(|c| Rational::from_integer(c * &sign / &g))
        .collect()
}

/// Determinant of a square rational matrix.
pub fn det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    if n == 0 {
        return Rational::one();
    }
    // Eliminate with explicit row bookkeeping so the sign is tracked.
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut sign = Rational::one();
    let mut acc = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        let pv = m[c][c].clone();
        acc *= &pv;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    sign * acc
}

/// Rank of a float matrix by Gaussian elimination with partial pivoting and a
/// relative threshold.
pub fn rank_f64(rows: &[Vec<f64>], ncols: usize, rel_tol: f64) -> usize {
    let mut m = rows.to_vec();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(f64::MIN_POSITIVE);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let p = (r..m.len())
            .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
            .unwrap();
        if m[p][c].abs() <= rel_tol * scale {
            continue;
        }
        m.swap(r, p);
        for i in r + 1..m.len() {
            let f = m[i][c] / m[r][c];
            for j in c..ncols {
                m[i][j] -= f * m[r][j];
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn qm(a: &[&[i64]]) -> Vec<Vec<Rational>> {
        a.iter()
            .map(|r| r.iter().map(|&x| rational(x, 1)).collect())
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m, 3), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let s: Rational = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn skipped_columns_stay_exact() {
        let m = qm(&[&[0, 3, 1, 4], &[0, 6, 5, 1], &[0, 9, 2, 7]]);
        let e = bareiss(&m, 4);
        assert_eq!(e.pivots, vec![1, 2, 3]);
        assert_eq!(kernel(&m, 4), vec![qm(&[&[1, 0, 0, 0]])[0].clone()]);
    }

    #[test]
    fn determinant() {
        let m = qm(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        assert_eq!(det(&m), rational(0, 1));
        assert_eq!(det(&qm(&[&[0, 1], &[1, 0]])), rational(-1, 1));
    }

    #[test]
    fn mat2_inverse() {
        let a = Mat2::<Rational>::from_ints([[2, 1], [1, 1]]);
        assert_eq!(a.mul(&a.inverse().unwrap()), Mat2::identity());
        assert!(Mat2::<Rational>::from_ints([[1, 2], [2, 4]]).inverse().is_none());
    }
}
