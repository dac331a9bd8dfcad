//! JSON schemas for fields, families and matrices, and the report envelope.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::{FamilySpec, FamilyTerm};
use crate::jet::{Poly, PolyVF};
use crate::scalar::{Field, Rational, Scalar, Tolerances};

/// Largest jet order accepted on input.
pub const MAX_ORDER: u32 = 12;

/// A parsed field in whichever backend its coefficients selected.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyField {
    Exact(PolyVF<Rational>),
    Float(PolyVF<f64>),
}

impl AnyField {
    pub fn order(&self) -> u32 {
        match self {
            Self::Exact(v) => v.order(),
            Self::Float(v) => v.order(),
        }
    }

    pub fn backend(&self) -> &'static str {
        match self {
            Self::Exact(_) => Rational::BACKEND,
            Self::Float(_) => f64::BACKEND,
        }
    }

    pub fn to_float(&self) -> PolyVF<f64> {
        match self {
            Self::Exact(v) => v.to_f64(),
            Self::Float(v) => v.clone(),
        }
    }

    /// Re-truncates or extends the jet to order `m`.
    pub fn with_order(&self, m: u32) -> Result<Self> {
        Ok(match self {
            Self::Exact(v) => Self::Exact(v.with_order(m)?),
            Self::Float(v) => Self::Float(v.with_order(m)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| invalid(format!("malformed JSON: {e}")))
}

/// Coefficient given as a string, or as a JSON number (integers exact,
/// others float).
fn scalar(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string().parse(),
        Value::Number(n) => Ok(Scalar::Float(n.as_f64().ok_or(Error::NonFinite)?)),
        _ => Err(invalid(format!("expected a coefficient, got {v}"))),
    }
}

fn exponent(v: &Value) -> Result<u32> {
    let n = v
        .as_u64()
        .ok_or_else(|| invalid(format!("expected a nonnegative exponent, got {v}")))?;
    u32::try_from(n)
        .ok()
        .filter(|&e| e <= 4 * MAX_ORDER)
        .ok_or_else(|| invalid(format!("exponent {n} out of range")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| invalid(format!("{what} must be an array")))
}

fn field_key<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| invalid(format!("missing key {key:?}")))
}

/// Checks that every scalar uses the same backend; returns it, or `None` for
/// an empty list.
fn common_backend<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Result<Option<&'static str>> {
    let mut backend = None;
    for x in xs {
        match backend {
            Some(b) if b != x.backend() => return Err(Error::BackendMismatch(b, x.backend())),
            _ => backend = Some(x.backend()),
        }
    }
    Ok(backend)
}

fn build<S: Field>(order: u32, dx: &[(u32, u32, Scalar)], dy: &[(u32, u32, Scalar)]) -> Result<PolyVF<S>> {
    let poly = |terms: &[(u32, u32, Scalar)]| -> Result<Poly<S>> {
        let mut p = Poly::zero();
        for (i, j, c) in terms {
            p.add_term(*i, *j, S::from_scalar(c)?);
        }
        Ok(p)
    };
    PolyVF::new(order, poly(dx)?, poly(dy)?)
}

/// Parses `{"order": m, "dx": [[i, j, "c"], ..], "dy": [..]}`. Rational or
/// integer coefficients select the exact backend, decimals the float one;
/// mixing them is an error. Repeated monomials are summed.
pub fn parse_field(text: &str) -> Result<AnyField> {
    field_from_value(&parse_json(text)?)
}

pub fn field_from_value(v: &Value) -> Result<AnyField> {
    let order = field_key(v, "order")?
        .as_u64()
        .ok_or_else(|| invalid("order must be a nonnegative integer"))?;
    if order == 0 || order > MAX_ORDER as u64 {
        return Err(invalid(format!("order {order} not in 1..={MAX_ORDER}")));
    }
    let terms = |key: &str| -> Result<Vec<(u32, u32, Scalar)>> {
        array(field_key(v, key)?, key)?
            .iter()
            .map(|t| match array(t, "term")?.as_slice() {
                [i, j, c] => Ok((exponent(i)?, exponent(j)?, scalar(c)?)),
                _ => Err(invalid(format!("term {t} must be [i, j, coeff]"))),
            })
            .collect()
    };
    let (dx, dy) = (terms("dx")?, terms("dy")?);
    let order = order as u32;
    match common_backend(dx.iter().chain(&dy).map(|t| &t.2))? {
        Some("float") => Ok(AnyField::Float(build(order, &dx, &dy)?)),
        _ => Ok(AnyField::Exact(build(order, &dx, &dy)?)),
    }
}

fn poly_json<S: Field>(p: &Poly<S>) -> Value {
    Value::Array(
        p.terms()
            .map(|(i, j, c)| json!([i, j, c.to_scalar().to_string()]))
            .collect(),
    )
}

pub fn field_to_value<S: Field>(v: &PolyVF<S>) -> Value {
    json!({"order": v.order(), "dx": poly_json(v.dx()), "dy": poly_json(v.dy())})
}

pub fn any_field_to_value(v: &AnyField) -> Value {
    match v {
        AnyField::Exact(v) => field_to_value(v),
        AnyField::Float(v) => field_to_value(v),
    }
}

pub fn emit_field(v: &AnyField) -> String {
    any_field_to_value(v).to_string()
}

fn bounds(v: &Value, what: &str) -> Result<[f64; 2]> {
    match array(v, what)?.as_slice() {
        [lo, hi] => {
            let (lo, hi) = (scalar(lo)?.to_f64(), scalar(hi)?.to_f64());
            Ok([lo, hi])
        }
        _ => Err(invalid(format!("{what} side must be [lo, hi]"))),
    }
}

/// Parses `{"k": 2, "dx": [[[e1, e2], [i, j], "c"], ..], "dy": [..],
/// "eps_box": [[lo, hi], ..], "phase_box": [[lo, hi], [lo, hi]]}`.
pub fn parse_family(text: &str) -> Result<FamilySpec> {
    let v = parse_json(text)?;
    let k = field_key(&v, "k")?
        .as_u64()
        .ok_or_else(|| invalid("k must be a positive integer"))? as usize;
    let terms = |key: &str| -> Result<Vec<FamilyTerm>> {
        array(field_key(&v, key)?, key)?
            .iter()
            .map(|t| match array(t, "term")?.as_slice() {
                [e, ij, c] => {
                    let eps = array(e, "parameter exponents")?
                        .iter()
                        .map(exponent)
                        .collect::<Result<Vec<_>>>()?;
                    let [i, j] = match array(ij, "phase exponents")?.as_slice() {
                        [i, j] => [exponent(i)?, exponent(j)?],
                        _ => return Err(invalid("phase exponents must be [i, j]")),
                    };
                    Ok(FamilyTerm {
                        eps,
                        i,
                        j,
                        coeff: scalar(c)?,
                    })
                }
                _ => Err(invalid(format!("term {t} must be [[e..], [i, j], coeff]"))),
            })
            .collect()
    };
    let eps_box = array(field_key(&v, "eps_box")?, "eps_box")?
        .iter()
        .map(|s| bounds(s, "eps_box"))
        .collect::<Result<Vec<_>>>()?;
    let phase_box = match array(field_key(&v, "phase_box")?, "phase_box")?.as_slice() {
        [a, b] => [bounds(a, "phase_box")?, bounds(b, "phase_box")?],
        _ => return Err(invalid("phase_box must have two sides")),
    };
    FamilySpec::new(k, terms("dx")?, terms("dy")?, eps_box, phase_box)
}

/// Parses a square matrix given as rows of coefficients, either bare or as
/// `{"matrix": [..]}`.
pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    let v = parse_json(text)?;
    let rows = array(v.get("matrix").unwrap_or(&v), "matrix")?;
    let rows: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| array(r, "matrix row")?.iter().map(scalar).collect())
        .collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(invalid("matrix must be square and nonempty"));
    }
    fn convert<S: Field>(rows: &[Vec<Scalar>]) -> Result<Vec<Vec<S>>> {
        rows.iter().map(|r| r.iter().map(S::from_scalar).collect()).collect()
    }
    match common_backend(rows.iter().flatten())? {
        Some("float") => Ok(AnyMatrix::Float(convert(&rows)?)),
        _ => Ok(AnyMatrix::Exact(convert(&rows)?)),
    }
}

/// Options of one command-line run, echoed in every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub order: Option<u32>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    /// Forced backend, if any.
    pub backend: Option<String>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: vec![],
            outputs: vec![],
            order: None,
            tolerances: Tolerances::default(),
            seed: None,
            backend: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(m) = self.order {
            if !(1..=MAX_ORDER).contains(&m) {
                return Err(invalid(format!("order {m} not in 1..={MAX_ORDER}")));
            }
        }
        Tolerances::new(self.tolerances.zero, self.tolerances.nonzero)?;
        if let Some(b) = &self.backend {
            if b != Rational::BACKEND && b != f64::BACKEND {
                return Err(invalid(format!("unknown backend {b:?}")));
            }
        }
        Ok(())
    }
}

/// Envelope written by every subcommand.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(config: RunConfig, result: T) -> Self {
        Self {
            tool: "jetclass",
            version: env!("CARGO_PKG_VERSION"),
            config,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
