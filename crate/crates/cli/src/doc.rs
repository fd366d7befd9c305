//! JSON documents for tuples, Fuchsian systems and Okubo systems.
//!
//! Exact scalars are strings (`"7/288"`); an element of ℚ(ζ_N) is the list of
//! its φ(N) power-basis coordinates.

use katz_core::field::{euler_phi, parse_rational};
use katz_core::fuchsian::{FuchsianSystem, OkuboSystem};
use katz_core::tuple::MatTuple;
use katz_core::{Cyclo, Field, Matrix, Q};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Cyclotomic { order: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Rational(String),
    Cyclotomic(Vec<String>),
}

type RawMatrix = Vec<Vec<Scalar>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub kind: String,
    pub field: FieldSpec,
    pub n: usize,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<RawMatrix>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<RawMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    RationalTuple(MatTuple<Q>),
    /// Entries are written in ℚ(ζ_order).
    CyclotomicTuple { order: u32, tuple: MatTuple<Cyclo> },
    Fuchsian(FuchsianSystem<Q>),
    Okubo(OkuboSystem<Q>),
}

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid document: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, DocError> {
    Err(DocError::Invalid(msg.into()))
}

fn check<T>(r: katz_core::Result<T>) -> Result<T, DocError> {
    r.map_err(|e| DocError::Invalid(e.to_string()))
}

fn rational(s: &str) -> Result<Q, DocError> {
    parse_rational(s).map_err(|e| DocError::Invalid(e.to_string()))
}

fn rationals(v: &[String]) -> Result<Vec<Q>, DocError> {
    v.iter().map(|s| rational(s)).collect()
}

fn format_rational(x: &Q) -> String {
    x.to_string()
}

fn parse_matrix<F>(raw: &RawMatrix, n: usize, scalar: &impl Fn(&Scalar) -> Result<F, DocError>) -> Result<Matrix<F>, DocError>
where
    F: Field,
{
    if raw.len() != n || raw.iter().any(|row| row.len() != n) {
        return invalid(format!("expected a {n}x{n} matrix"));
    }
    let rows = raw.iter().map(|row| row.iter().map(scalar).collect::<Result<Vec<F>, _>>()).collect::<Result<Vec<_>, _>>()?;
    Ok(if n == 0 { Matrix::zeros(0, 0) } else { Matrix::from_rows(rows) })
}

fn rational_scalar(s: &Scalar) -> Result<Q, DocError> {
    match s {
        Scalar::Rational(v) => rational(v),
        Scalar::Cyclotomic(_) => invalid("list scalar in a rational document"),
    }
}

fn cyclo_scalar(order: u32) -> impl Fn(&Scalar) -> Result<Cyclo, DocError> {
    let phi = euler_phi(order);
    move |s| match s {
        Scalar::Cyclotomic(v) if v.len() == phi => Ok(Cyclo::from_coeffs(order, rationals(v)?)),
        Scalar::Cyclotomic(v) => invalid(format!("cyclotomic scalar has {} coordinates, expected {phi}", v.len())),
        Scalar::Rational(_) => invalid("cyclotomic scalars are lists of coordinates"),
    }
}

fn write_matrix<F: Field>(m: &Matrix<F>, scalar: &impl Fn(&F) -> Scalar) -> RawMatrix {
    (0..m.rows()).map(|i| m.row(i).iter().map(scalar).collect()).collect()
}

/// Smallest order `N` (a multiple of `base`) with every entry in ℚ(ζ_N).
pub fn common_order<'a>(base: u32, entries: impl IntoIterator<Item = &'a Cyclo>) -> u32 {
    entries.into_iter().fold(base.max(1), |acc, z| acc.lcm(&z.order()))
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::RationalTuple(_) | Document::CyclotomicTuple { .. } => "mat-tuple",
            Document::Fuchsian(_) => "fuchsian",
            Document::Okubo(_) => "okubo",
        }
    }

    pub fn cyclotomic(tuple: MatTuple<Cyclo>) -> Self {
        let order = common_order(1, tuple.matrices().iter().flat_map(|m| m.entries()));
        Document::CyclotomicTuple { order, tuple }
    }

    pub fn parse(text: &str) -> Result<Self, DocError> {
        let env: Envelope = serde_json::from_str(text)?;
        Self::from_envelope(&env)
    }

    pub fn from_envelope(env: &Envelope) -> Result<Self, DocError> {
        let n = env.n;
        match env.kind.as_str() {
            "mat-tuple" => {
                if env.points.is_some() || env.t.is_some() || env.b.is_some() {
                    return invalid("mat-tuple documents carry only matrices");
                }
                let raw = env.matrices.as_ref().ok_or_else(|| DocError::Invalid("missing matrices".into()))?;
                if raw.len() != env.r {
                    return invalid(format!("r = {} but {} matrices", env.r, raw.len()));
                }
                match env.field {
                    FieldSpec::Rational => {
                        let ms = raw.iter().map(|m| parse_matrix(m, n, &rational_scalar)).collect::<Result<_, _>>()?;
                        Ok(Document::RationalTuple(check(MatTuple::new(ms))?))
                    }
                    FieldSpec::Cyclotomic { order } => {
                        if order == 0 {
                            return invalid("cyclotomic order must be positive");
                        }
                        let scalar = cyclo_scalar(order);
                        let ms = raw.iter().map(|m| parse_matrix(m, n, &scalar)).collect::<Result<_, _>>()?;
                        Ok(Document::CyclotomicTuple { order, tuple: check(MatTuple::new(ms))? })
                    }
                }
            }
            "fuchsian" => {
                if env.field != FieldSpec::Rational {
                    return invalid("fuchsian documents must be rational");
                }
                if env.t.is_some() || env.b.is_some() {
                    return invalid("fuchsian documents carry points and matrices");
                }
                let points = rationals(env.points.as_deref().ok_or_else(|| DocError::Invalid("missing points".into()))?)?;
                let raw = env.matrices.as_ref().ok_or_else(|| DocError::Invalid("missing matrices".into()))?;
                if points.len() != env.r || raw.len() != env.r {
                    return invalid(format!("r = {} but {} points and {} residues", env.r, points.len(), raw.len()));
                }
                let residues = raw.iter().map(|m| parse_matrix(m, n, &rational_scalar)).collect::<Result<_, _>>()?;
                FuchsianSystem::new(points, residues).map(Document::Fuchsian).map_err(|e| DocError::Invalid(e.to_string()))
            }
            "okubo" => {
                if env.field != FieldSpec::Rational {
                    return invalid("okubo documents must be rational");
                }
                if env.matrices.is_some() {
                    return invalid("okubo documents carry T and b");
                }
                let t = rationals(env.t.as_deref().ok_or_else(|| DocError::Invalid("missing T".into()))?)?;
                if t.len() != n {
                    return invalid(format!("n = {n} but T has {} entries", t.len()));
                }
                let b = parse_matrix(env.b.as_ref().ok_or_else(|| DocError::Invalid("missing b".into()))?, n, &rational_scalar)?;
                let ok = OkuboSystem::new(t, b).map_err(|e| DocError::Invalid(e.to_string()))?;
                let distinct = ok.distinct_points();
                if distinct.len() != env.r {
                    return invalid(format!("r = {} but T has {} distinct entries", env.r, distinct.len()));
                }
                if let Some(points) = &env.points {
                    if rationals(points)? != distinct {
                        return invalid("points must list the distinct entries of T in order of appearance");
                    }
                }
                Ok(Document::Okubo(ok))
            }
            other => invalid(format!("unknown document kind {other:?}")),
        }
    }

    pub fn to_envelope(&self) -> Envelope {
        let rat = |x: &Q| Scalar::Rational(format_rational(x));
        match self {
            Document::RationalTuple(tuple) => Envelope {
                kind: self.kind().into(),
                field: FieldSpec::Rational,
                n: tuple.n(),
                r: tuple.r(),
                points: None,
                matrices: Some(tuple.matrices().iter().map(|m| write_matrix(m, &rat)).collect()),
                t: None,
                b: None,
            },
            Document::CyclotomicTuple { order, tuple } => {
                let order = common_order(*order, tuple.matrices().iter().flat_map(|m| m.entries()));
                let cyc = |z: &Cyclo| Scalar::Cyclotomic(z.lift_to(order).coeffs().iter().map(format_rational).collect());
                Envelope {
                    kind: self.kind().into(),
                    field: FieldSpec::Cyclotomic { order },
                    n: tuple.n(),
                    r: tuple.r(),
                    points: None,
                    matrices: Some(tuple.matrices().iter().map(|m| write_matrix(m, &cyc)).collect()),
                    t: None,
                    b: None,
                }
            }
            Document::Fuchsian(sys) => Envelope {
                kind: self.kind().into(),
                field: FieldSpec::Rational,
                n: sys.n(),
                r: sys.r(),
                points: Some(sys.points().iter().map(format_rational).collect()),
                matrices: Some(sys.residues().iter().map(|m| write_matrix(m, &rat)).collect()),
                t: None,
                b: None,
            },
            Document::Okubo(ok) => Envelope {
                kind: self.kind().into(),
                field: FieldSpec::Rational,
                n: ok.size(),
                r: ok.distinct_points().len(),
                points: Some(ok.distinct_points().iter().map(format_rational).collect()),
                matrices: None,
                t: Some(ok.t().iter().map(format_rational).collect()),
                b: Some(write_matrix(ok.b(), &rat)),
            },
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_envelope()).expect("envelopes serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_envelope()).expect("envelopes serialize")
    }
}
