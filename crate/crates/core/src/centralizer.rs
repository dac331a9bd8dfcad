//! Exact linear algebra of `ad_v : w ↦ [v, w]` on jet spaces: centralizers,
//! orbit dimensions and codimensions of normal-form strata.

use num_traits::Zero;
use serde::Serialize;

use crate::classify::{classify_germ, BtCoefficients, Kind};
use crate::error::{Error, Result};
use crate::jet::{bracket, bracket_full, Component, JetBasisIndex, PolyVF};
use crate::linalg;
use crate::scalar::{Rational, Tolerances};

/// Matrix of `ad_v` in the canonical basis: column `k` holds the coordinates
/// of `[v, e_k]` in the target basis.
#[derive(Debug, Clone)]
pub struct AdMatrix {
    pub order: u32,
    pub source: JetBasisIndex,
    pub target: JetBasisIndex,
    /// Row-major, `target.len()` rows by `source.len()` columns.
    pub rows: Vec<Vec<Rational>>,
}

impl AdMatrix {
    pub fn apply(&self, w: &PolyVF<Rational>) -> Result<PolyVF<Rational>> {
        let x = self.source.coords(w)?;
        let y: Vec<Rational> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(self.target.field(&y))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }
}

/// How brackets of jets are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BracketMode {
    /// `[v, w]` truncated to order `m`: the Lie algebra of `m`-jets. The
    /// matrix is square.
    Truncated,
    /// `[v, w]` of the polynomial representatives, kept to its full degree:
    /// `w` commutes with `v` as a polynomial field.
    Full,
}

/// `ad_v` on `J^m` with truncated brackets. `v` is read as a polynomial, so
/// its own order may differ from `m`.
pub fn ad_matrix(v: &PolyVF<Rational>, m: u32) -> Result<AdMatrix> {
    ad_matrix_with(v, m, BracketMode::Truncated)
}

pub fn ad_matrix_with(v: &PolyVF<Rational>, m: u32, mode: BracketMode) -> Result<AdMatrix> {
    if !v.vanishes_at_origin() {
        return Err(Error::NonZeroConstant);
    }
    let source = JetBasisIndex::new(m);
    let target_order = match mode {
        BracketMode::Truncated => m,
        BracketMode::Full => (m + v.degree().unwrap_or(1)).saturating_sub(1).max(m),
    };
    let target = JetBasisIndex::new(target_order);
    let v = v.with_order(target_order.max(v.order()))?;
    let mut rows = vec![vec![Rational::zero(); source.len()]; target.len()];
    for k in 0..source.len() {
        let e: PolyVF<Rational> = source.element(k);
        let b = match mode {
            BracketMode::Truncated => bracket(&v.with_order(m)?, &e, m)?,
            BracketMode::Full => bracket_full(&v, &e).with_order(target_order)?,
        };
        for (r, c) in target.coords(&b)?.into_iter().enumerate() {
            rows[r][k] = c;
        }
    }
    Ok(AdMatrix {
        order: m,
        source,
        target,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Centralizer {
    pub dim: usize,
    pub basis: Vec<PolyVF<Rational>>,
}

/// Kernel of `ad_v` on `J^m`, optionally restricted to jets vanishing at 0.
///
/// With [`BracketMode::Full`] this is the space of polynomial fields of
/// degree at most `m` commuting with `v`; with [`BracketMode::Truncated`] it
/// is the centralizer in the Lie algebra of `m`-jets.
pub fn centralizer(
    v: &PolyVF<Rational>,
    m: u32,
    restrict_vanishing: bool,
    mode: BracketMode,
) -> Result<Centralizer> {
    let ad = ad_matrix_with(v, m, mode)?;
    let cols: Vec<usize> = if restrict_vanishing {
        ad.source.vanishing()
    } else {
        (0..ad.source.len()).collect()
    };
    let sub: Vec<Vec<Rational>> = ad
        .rows
        .iter()
        .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let ker = linalg::kernel(&sub, cols.len());
    let basis = ker
        .into_iter()
        .map(|x| {
            let mut full = vec![Rational::zero(); ad.source.len()];
            for (&c, a) in cols.iter().zip(x) {
                full[c] = a;
            }
            ad.source.field(&full)
        })
        .collect::<Vec<_>>();
    Ok(Centralizer {
        dim: basis.len(),
        basis,
    })
}

/// Dimension of `ker ad_v` in the default (full-bracket) mode.
pub fn centralizer_dim(v: &PolyVF<Rational>, m: u32, restrict_vanishing: bool) -> Result<Centralizer> {
    centralizer(v, m, restrict_vanishing, BracketMode::Full)
}

/// Whether `span(basis) == span(expected)` inside `J^m`.
pub fn same_span(basis: &[PolyVF<Rational>], expected: &[PolyVF<Rational>], m: u32) -> Result<bool> {
    let idx = JetBasisIndex::new(m);
    let coords = |vs: &[PolyVF<Rational>]| -> Result<Vec<Vec<Rational>>> {
        vs.iter().map(|v| idx.coords(&v.with_order(m)?)).collect()
    };
    let a = coords(basis)?;
    let b = coords(expected)?;
    let ra = linalg::rank(&a, idx.len());
    let rb = linalg::rank(&b, idx.len());
    let both: Vec<_> = a.into_iter().chain(b).collect();
    Ok(ra == rb && linalg::rank(&both, idx.len()) == ra)
}

/// Normal-form strata whose codimension is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StratumKind {
    AH(u32),
    SN(u32),
    BT0,
    /// `b11 = 0`, `b12 ≠ 0`.
    BT1NoB11,
    /// `b12 = 0`, `b11 ≠ 0`.
    BT1NoB12,
}

impl StratumKind {
    pub fn name(&self) -> String {
        match self {
            Self::AH(k) => format!("AH{k}"),
            Self::SN(k) => format!("SN{k}"),
            Self::BT0 => "BT0".into(),
            Self::BT1NoB11 => "BT1(b11=0)".into(),
            Self::BT1NoB12 => "BT1(b12=0)".into(),
        }
    }

    /// Codimension in the space of jets vanishing at 0.
    pub fn expected_codim(&self) -> usize {
        match self {
            Self::AH(k) | Self::SN(k) => *k as usize + 1,
            Self::BT0 => 2,
            Self::BT1NoB11 | Self::BT1NoB12 => 3,
        }
    }

    /// Smallest order at which the stratum is defined in `J^m`.
    pub fn min_order(&self) -> u32 {
        match self {
            Self::AH(k) => 2 * k + 3,
            Self::SN(k) => (k + 2).max(2),
            _ => 2,
        }
    }
}

/// Tangent space of a normal-form family: derivatives of the normal form with
/// respect to each of its free parameters.
#[derive(Debug, Clone)]
pub struct StratumTangent {
    pub kind: StratumKind,
    pub order: u32,
    pub vectors: Vec<PolyVF<Rational>>,
}

impl StratumTangent {
    pub fn new(kind: StratumKind, m: u32) -> Result<Self> {
        if m < kind.min_order() {
            return Err(Error::InsufficientOrder {
                have: m,
                need: kind.min_order(),
            });
        }
        let mono = |c, i, j| PolyVF::<Rational>::basis(m, c, i, j).expect("degree within order");
        let mut vectors = Vec::new();
        match kind {
            StratumKind::AH(k) => {
                // ω: rotation; Re a_j: z|z|^{2j}; Im a_j: iz|z|^{2j}.
                vectors.push(PolyVF::from_ints(m, &[(0, 1, -1)], &[(1, 0, 1)]));
                for j in 1..=(m - 1) / 2 {
                    let r2j = r_pow(j);
                    if j > k {
                        vectors.push(times(&r2j, &[(1, 0, 1)], &[(0, 1, 1)], m));
                    }
                    vectors.push(times(&r2j, &[(0, 1, -1)], &[(1, 0, 1)], m));
                }
            }
            StratumKind::SN(k) => {
                vectors.push(mono(Component::Y, 0, 1));
                for j in (k + 2)..=m {
                    vectors.push(mono(Component::X, j, 0));
                }
                for j in 1..m {
                    vectors.push(mono(Component::Y, j, 1));
                }
            }
            StratumKind::BT0 | StratumKind::BT1NoB11 | StratumKind::BT1NoB12 => {
                if kind != StratumKind::BT1NoB11 {
                    vectors.push(mono(Component::Y, 2, 0));
                }
                if kind != StratumKind::BT1NoB12 {
                    vectors.push(mono(Component::Y, 1, 1));
                }
                vectors.push(mono(Component::Y, 0, 2));
                // Terms above the 2-jet are unconstrained.
                for d in 3..=m {
                    for i in 0..=d {
                        vectors.push(mono(Component::X, i, d - i));
                        vectors.push(mono(Component::Y, i, d - i));
                    }
                }
            }
        }
        Ok(Self {
            kind,
            order: m,
            vectors,
        })
    }

    /// Whether `v` lies in the stratum, decided by exact classification.
    pub fn contains(&self, v: &PolyVF<Rational>) -> Result<bool> {
        let label = classify_germ(&v.with_order(self.order)?, &Tolerances::default())?;
        Ok(match (self.kind, &label.kind) {
            (StratumKind::AH(k), Kind::AH(j)) | (StratumKind::SN(k), Kind::SN(j)) => k == *j,
            (StratumKind::BT0, Kind::BT0) => true,
            (StratumKind::BT1NoB11 | StratumKind::BT1NoB12, Kind::BT1) => {
                let b = crate::classify::bt_reduce(&v.with_order(self.order)?)?;
                let no_b11 = b.b11.is_zero() && !b.b12.is_zero();
                let no_b12 = b.b12.is_zero() && !b.b11.is_zero();
                (self.kind == StratumKind::BT1NoB11 && no_b11)
                    || (self.kind == StratumKind::BT1NoB12 && no_b12)
            }
            _ => false,
        })
    }
}

/// `(x² + y²)^j`.
fn r_pow(j: u32) -> crate::jet::Poly<Rational> {
    let r2 = crate::jet::Poly::from_terms([
        (2, 0, Rational::from_integer(1.into())),
        (0, 2, Rational::from_integer(1.into())),
    ]);
    (0..j).fold(crate::jet::Poly::constant(Rational::from_integer(1.into())), |acc, _| {
        acc.mul(&r2)
    })
}

fn times(
    p: &crate::jet::Poly<Rational>,
    dx: &[(u32, u32, i64)],
    dy: &[(u32, u32, i64)],
    m: u32,
) -> PolyVF<Rational> {
    let lin = PolyVF::<Rational>::from_ints(1, dx, dy);
    PolyVF::new(m, p.mul(lin.dx()), p.mul(lin.dy())).expect("degree within order")
}

/// Dimension of the orbit tangent `{[u, v] : u vanishing at 0}` in `J^m`.
pub fn orbit_rank(v: &PolyVF<Rational>, m: u32) -> Result<usize> {
    let ad = ad_matrix(v, m)?;
    let cols = ad.source.vanishing();
    let images: Vec<Vec<Rational>> = cols
        .iter()
        .map(|&c| ad.rows.iter().map(|row| row[c].clone()).collect())
        .collect();
    Ok(linalg::rank(&images, ad.target.len()))
}

/// Codimension of the stratum through `v` inside the jets vanishing at 0:
/// `dim J^m_0 − rank(orbit tangent + stratum tangent)`.
pub fn orbit_codim(v: &PolyVF<Rational>, stratum: &StratumTangent, m: u32) -> Result<usize> {
    if m != stratum.order {
        return Err(Error::Invalid(format!(
            "stratum tangent built for order {}, asked for {m}",
            stratum.order
        )));
    }
    if !stratum.contains(v)? {
        return Err(Error::Invalid(format!(
            "germ is not a point of stratum {}",
            stratum.kind.name()
        )));
    }
    let ad = ad_matrix(v, m)?;
    let mut stack: Vec<Vec<Rational>> = ad
        .source
        .vanishing()
        .iter()
        .map(|&c| ad.rows.iter().map(|row| row[c].clone()).collect())
        .collect();
    for t in &stratum.vectors {
        stack.push(ad.target.coords(t)?);
    }
    let rank = linalg::rank(&stack, ad.target.len());
    Ok(ad.target.vanishing_len() - rank)
}

/// A random point of the stratum, in normal form.
pub fn sample_normal_form<R: rand::Rng>(
    kind: StratumKind,
    m: u32,
    rng: &mut R,
) -> Result<PolyVF<Rational>> {
    use crate::classify::{ah_normal_form, bt_jet, sn_jet};
    use crate::sampling::{nonzero_rational, small_rational};
    let zero = Rational::zero;
    match kind {
        StratumKind::AH(k) => {
            // Positive ω, Re a_j = 0 for j ≤ k, Re a_{k+1} ≠ 0.
            let omega = loop {
                let w = nonzero_rational(rng, 2);
                if w > zero() {
                    break w;
                }
            };
            let a: Vec<(Rational, Rational)> = (1..=(m - 1) / 2)
                .map(|j| {
                    let re = match j.cmp(&(k + 1)) {
                        std::cmp::Ordering::Less => zero(),
                        std::cmp::Ordering::Equal => nonzero_rational(rng, 2),
                        std::cmp::Ordering::Greater => small_rational(rng, 2),
                    };
                    (re, small_rational(rng, 2))
                })
                .collect();
            ah_normal_form(omega, &a, m)
        }
        StratumKind::SN(k) => {
            let lambda = nonzero_rational(rng, 2);
            let a: Vec<Rational> = (2..=m)
                .map(|j| match j.cmp(&(k + 2)) {
                    std::cmp::Ordering::Less => zero(),
                    std::cmp::Ordering::Equal => nonzero_rational(rng, 2),
                    std::cmp::Ordering::Greater => small_rational(rng, 2),
                })
                .collect();
            let b: Vec<Rational> = (1..m).map(|_| small_rational(rng, 2)).collect();
            sn_jet(lambda, &a, &b, m)
        }
        StratumKind::BT0 | StratumKind::BT1NoB11 | StratumKind::BT1NoB12 => {
            let b = BtCoefficients {
                b11: if kind == StratumKind::BT1NoB11 {
                    zero()
                } else {
                    nonzero_rational(rng, 2)
                },
                b12: if kind == StratumKind::BT1NoB12 {
                    zero()
                } else {
                    nonzero_rational(rng, 2)
                },
                b22: small_rational(rng, 2),
            };
            bt_jet(&b, m)
        }
    }
}

/// One row of a codimension table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodimRow {
    pub stratum: String,
    pub order: u32,
    pub expected: usize,
    pub measured: Vec<usize>,
}

/// Codimension of `kind` in `J^m` at `samples` random normal-form points.
pub fn codim_table<R: rand::Rng>(
    kind: StratumKind,
    m: u32,
    samples: usize,
    rng: &mut R,
) -> Result<CodimRow> {
    let tangent = StratumTangent::new(kind, m)?;
    let measured = (0..samples)
        .map(|_| {
            let v = sample_normal_form(kind, m, rng)?;
            orbit_codim(&v, &tangent, m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CodimRow {
        stratum: kind.name(),
        order: m,
        expected: kind.expected_codim(),
        measured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{ah_normal_form, sn_jet};
    use crate::jet::pushforward;
    use crate::sampling::{random_diffeo, rng};
    use crate::scalar::rational;

    type V = PolyVF<Rational>;

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    #[test]
    fn zero_field_gives_zero_matrix() {
        assert!(ad_matrix(&V::zero(3).unwrap(), 3).unwrap().is_zero());
    }

    #[test]
    fn v_is_in_its_own_kernel() {
        let v = V::from_ints(3, &[(0, 1, -1), (2, 0, 1)], &[(1, 0, 1), (1, 2, 3)]);
        for mode in [BracketMode::Truncated, BracketMode::Full] {
            let ad = ad_matrix_with(&v, 3, mode).unwrap();
            assert!(ad.apply(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn rotation_linear_commutant() {
        let rot = V::from_ints(1, &[(0, 1, -1)], &[(1, 0, 1)]);
        let c = centralizer(&rot, 1, true, BracketMode::Truncated).unwrap();
        assert_eq!(c.dim, 2);
        let euler = V::from_ints(1, &[(1, 0, 1)], &[(0, 1, 1)]);
        assert!(same_span(&c.basis, &[rot, euler], 1).unwrap());
    }

    #[test]
    fn lemma_examples() {
        let ah = ah_normal_form(q(1), &[(q(-1), q(0))], 3).unwrap();
        let c = centralizer_dim(&ah, 3, false).unwrap();
        assert_eq!(c.dim, 2);
        let rot = V::from_ints(3, &[(0, 1, -1)], &[(1, 0, 1)]);
        assert!(same_span(&c.basis, &[ah, rot], 3).unwrap());

        let sn = V::from_ints(2, &[(2, 0, 1)], &[(0, 1, -1)]);
        let c = centralizer_dim(&sn, 2, false).unwrap();
        assert_eq!(c.dim, 2);
        let ydy = V::from_ints(2, &[], &[(0, 1, 1)]);
        assert!(same_span(&c.basis, &[sn, ydy], 2).unwrap());

        let sn1 = V::from_ints(4, &[(3, 0, 1)], &[(0, 1, -1)]);
        assert_eq!(centralizer_dim(&sn1, 4, false).unwrap().dim, 2);
    }

    #[test]
    fn truncated_kernel_is_larger() {
        // x² ∂x, y ∂y and xy ∂y all commute with (x², −y) modulo degree 3.
        let sn = V::from_ints(2, &[(2, 0, 1)], &[(0, 1, -1)]);
        let c = centralizer(&sn, 2, true, BracketMode::Truncated).unwrap();
        assert_eq!(c.dim, 3);
    }

    #[test]
    fn codimension_examples() {
        let ah = ah_normal_form(q(1), &[(q(-1), q(0))], 3).unwrap();
        let t = StratumTangent::new(StratumKind::AH(0), 3).unwrap();
        assert_eq!(orbit_codim(&ah, &t, 3).unwrap(), 1);

        let sn1 = sn_jet(q(-1), &[q(0), q(1)], &[], 3).unwrap();
        let t = StratumTangent::new(StratumKind::SN(1), 3).unwrap();
        assert_eq!(orbit_codim(&sn1, &t, 3).unwrap(), 2);

        let bt0 = V::from_ints(2, &[(0, 1, 1)], &[(2, 0, 1), (1, 1, 1)]);
        let t = StratumTangent::new(StratumKind::BT0, 2).unwrap();
        assert_eq!(orbit_codim(&bt0, &t, 2).unwrap(), 2);

        let t = StratumTangent::new(StratumKind::SN(0), 3).unwrap();
        assert!(orbit_codim(&sn1, &t, 3).is_err());
    }

    #[test]
    fn truncated_restricted_dim_is_conjugation_invariant() {
        let v = V::from_ints(3, &[(3, 0, 1)], &[(0, 1, -1), (1, 1, 2)]);
        let base = centralizer(&v, 3, true, BracketMode::Truncated).unwrap().dim;
        let mut r = rng(5);
        for _ in 0..3 {
            let h = random_diffeo(&mut r, 3);
            let w = pushforward(&h, &v, 3).unwrap();
            assert_eq!(centralizer(&w, 3, true, BracketMode::Truncated).unwrap().dim, base);
        }
    }
}
