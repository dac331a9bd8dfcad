//! Classification of a germ at a singular point: linear-part partition, then
//! focus values, center-manifold coefficients or the nilpotent 2-jet.

mod bt;
mod focus;
mod linear;
mod saddle_node;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jet::PolyVF;
use crate::scalar::{Decision, Field, Scalar, Tolerances};

pub use bt::{bt_jet, bt_reduce, bt_reduce_full, BtCoefficients, BtReduction};
pub use focus::{ah_normal_form, focus_values, rotation_normalize, FocusValues, RotationFrame};
pub use linear::{classify_linear, classify_linear_with, LinearClass, TAU_LIN};
pub use saddle_node::{
    invariance_residual, sn_jet, sn_normal_form, sn_reduce, SnNormalForm, SnReduction,
};

/// Why a germ could not be placed in a class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Reason {
    /// Every computed invariant vanished; a jet of order `need` might decide.
    InsufficientOrder { have: u32, need: u32 },
    /// The named quantity fell between the zero and nonzero thresholds.
    DeadZone(String),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InsufficientOrder { have, need } => {
                write!(f, "jet order {have} insufficient, need at least {need}")
            }
            Self::DeadZone(q) => write!(f, "{q} inside the numeric dead zone"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    H,
    AH(u32),
    SN(u32),
    BT0,
    BT1,
    ZL,
    Unresolved(Reason),
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::H => "H",
            Self::AH(_) => "AH",
            Self::SN(_) => "SN",
            Self::BT0 => "BT0",
            Self::BT1 => "BT1",
            Self::ZL => "ZL",
            Self::Unresolved(_) => "Unresolved",
        }
    }

    pub fn k(&self) -> Option<u32> {
        match self {
            Self::AH(k) | Self::SN(k) => Some(*k),
            _ => None,
        }
    }

    pub fn is_unresolved(&self) -> bool {
        matches!(self, Self::Unresolved(_))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AH(k) | Self::SN(k) => write!(f, "{}{k}", self.name()),
            Self::Unresolved(r) => write!(f, "Unresolved ({r})"),
            _ => f.write_str(self.name()),
        }
    }
}

/// Diagnostic values backing a label.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Linear { trace: Scalar, det: Scalar },
    Focus(FocusValues<Scalar>),
    SaddleNode {
        lambda: Scalar,
        /// `a_1, a_2, ..` of the reduced equation.
        a: Vec<Scalar>,
        /// `h_0, h_1, ..` of the center manifold.
        center_manifold: Vec<Scalar>,
    },
    Nilpotent(BtCoefficients<Scalar>),
    DeadZone { quantity: String, value: f64, scale: f64 },
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassLabel {
    pub kind: Kind,
    pub payload: Payload,
    /// Order of the jet that was classified.
    pub order: u32,
}

impl Serialize for ClassLabel {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = s.serialize_struct("ClassLabel", 5)?;
        st.serialize_field("kind", self.kind.name())?;
        st.serialize_field("k", &self.kind.k())?;
        st.serialize_field("payload", &self.payload)?;
        st.serialize_field("order", &self.order)?;
        let reason = match &self.kind {
            Kind::Unresolved(r) => Some(r.to_string()),
            _ => None,
        };
        st.serialize_field("reason", &reason)?;
        st.end()
    }
}

/// Absolute scale for deciding that a float linear part vanishes. Nothing in
/// the jet supplies one: `x -> rx` fixes the linear part and rescales every
/// nonlinear coefficient.
pub const LINEAR_UNIT: f64 = 1.0;

/// Classifies the germ at the origin of `v`.
///
/// In the float backend each zero test uses a dead zone: a quantity below
/// `tol.zero · scale` is zero, above `tol.nonzero · scale` nonzero, and
/// anything between yields `Unresolved`. Scales come from the jet itself:
/// with `ν` the linear rate and `ρ = max_d (max|coeff_d| / ν)^{1/(d−1)}`,
/// a degree-d invariant is compared against `ν ρ^{d−1}`.
pub fn classify_germ<S: Field>(v: &PolyVF<S>, tol: &Tolerances) -> Result<ClassLabel> {
    if !v.vanishes_at_origin() {
        return Err(Error::NonZeroConstant);
    }
    let order = v.order();
    let a = v.linear_part();
    let label = |kind, payload| ClassLabel {
        kind,
        payload,
        order,
    };
    let linear_payload = || Payload::Linear {
        trace: a.trace().to_scalar(),
        det: a.det().to_scalar(),
    };
    let Some(class) = classify_linear_with(&a, LINEAR_UNIT, tol) else {
        return Ok(label(
            Kind::Unresolved(Reason::DeadZone("linear part".into())),
            linear_payload(),
        ));
    };
    match class {
        LinearClass::Hstar => Ok(label(Kind::H, linear_payload())),
        LinearClass::Zero => Ok(label(Kind::ZL, Payload::None)),
        LinearClass::AHstar => ah_label(v, tol),
        LinearClass::SNstar => sn_label(v, tol),
        LinearClass::BTstar => bt_label(v, tol),
    }
}

/// `max_{d≥2} (max|coeff_d| / ν)^{1/(d−1)}`: the radius at which the
/// nonlinear terms become comparable with the linear rate `ν`.
fn radius<S: Field>(w: &PolyVF<S>, nu: f64) -> f64 {
    let top = w.degree().unwrap_or(0);
    (2..=top)
        .map(|d| (w.homogeneous(d).max_abs_coeff() / nu).powf(1.0 / (d - 1) as f64))
        .fold(0.0, f64::max)
}

fn dead_zone<S: Field>(quantity: String, value: &S, scale: f64, order: u32) -> ClassLabel {
    ClassLabel {
        kind: Kind::Unresolved(Reason::DeadZone(quantity.clone())),
        payload: Payload::DeadZone {
            quantity,
            value: value.to_f64(),
            scale,
        },
        order,
    }
}

fn ah_label<S: Field>(v: &PolyVF<S>, tol: &Tolerances) -> Result<ClassLabel> {
    let order = v.order();
    if order < 3 {
        return Ok(ClassLabel {
            kind: Kind::Unresolved(Reason::InsufficientOrder {
                have: order,
                need: 3,
            }),
            payload: Payload::None,
            order,
        });
    }
    let frame = match focus::rotation_frame(v) {
        Ok(f) => f,
        // √det outside the rationals: continue in floating point.
        Err(Error::IrrationalFrequency(_)) if S::EXACT => return ah_label(&v.to_f64(), tol),
        Err(e) => return Err(e),
    };
    let k_max = (order - 1) / 2;
    let (mut fv, _) = focus::focus_from_frame(&frame, k_max)?;
    let nu = frame.omega.to_f64().abs();
    let rho = radius(&frame.field.truncate(2 * k_max + 1)?, nu);
    for j in 1..=k_max as usize {
        let scale = nu * rho.powi(2 * j as i32);
        match fv.re_a[j - 1].decide(scale, tol) {
            Decision::Zero => {}
            Decision::NonZero => {
                fv.re_a.truncate(j);
                fv.im_a.truncate(j);
                return Ok(ClassLabel {
                    kind: Kind::AH(j as u32 - 1),
                    payload: Payload::Focus(fv.to_scalar()),
                    order,
                });
            }
            Decision::Uncertain => {
                return Ok(dead_zone(format!("Re a_{j}"), &fv.re_a[j - 1], scale, order))
            }
        }
    }
    Ok(ClassLabel {
        kind: Kind::Unresolved(Reason::InsufficientOrder {
            have: order,
            need: 2 * k_max + 3,
        }),
        payload: Payload::Focus(fv.to_scalar()),
        order,
    })
}

fn sn_label<S: Field>(v: &PolyVF<S>, tol: &Tolerances) -> Result<ClassLabel> {
    let order = v.order();
    let r = saddle_node::sn_reduce_unchecked(v, order)?;
    let nu = r.lambda.to_f64().abs();
    let rho = radius(&r.diagonal, nu);
    let payload = |n: usize| {
        let (lambda, a, center_manifold) = r.to_scalar_payload();
        Payload::SaddleNode {
            lambda,
            a: a.into_iter().take(n).collect(),
            center_manifold,
        }
    };
    for j in 2..=order as usize {
        let scale = nu * rho.powi(j as i32 - 1);
        let aj = r.a(j);
        match aj.decide(scale, tol) {
            Decision::Zero => {}
            Decision::NonZero => {
                return Ok(ClassLabel {
                    kind: Kind::SN(j as u32 - 2),
                    payload: payload(j),
                    order,
                })
            }
            Decision::Uncertain => return Ok(dead_zone(format!("a_{j}"), &aj, scale, order)),
        }
    }
    Ok(ClassLabel {
        kind: Kind::Unresolved(Reason::InsufficientOrder {
            have: order,
            need: order + 1,
        }),
        payload: payload(order as usize),
        order,
    })
}

fn bt_label<S: Field>(v: &PolyVF<S>, tol: &Tolerances) -> Result<ClassLabel> {
    let order = v.order();
    if order < 2 {
        return Ok(ClassLabel {
            kind: Kind::Unresolved(Reason::InsufficientOrder { have: 1, need: 2 }),
            payload: Payload::None,
            order,
        });
    }
    let r = bt::bt_reduce_unchecked(v)?;
    let scale = radius(&r.field, 1.0);
    let c = &r.coeffs;
    let d11 = c.b11.decide(scale, tol);
    let d12 = c.b12.decide(scale, tol);
    let kind = match (d11, d12) {
        (Decision::Zero, _) | (_, Decision::Zero) => Kind::BT1,
        (Decision::NonZero, Decision::NonZero) => Kind::BT0,
        (Decision::Uncertain, _) => return Ok(dead_zone("b11".into(), &c.b11, scale, order)),
        (_, Decision::Uncertain) => return Ok(dead_zone("b12".into(), &c.b12, scale, order)),
    };
    Ok(ClassLabel {
        kind,
        payload: Payload::Nilpotent(c.to_scalar()),
        order,
    })
}
