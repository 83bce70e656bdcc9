//! JSON datum and report files. Vertex indices in files are 1-based.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::capacity::SpdTuple;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quiver::{from_ajn, AjnDatum, Arrow, BipartiteQuiver, DimensionVector, QuiverDatum, Weight};

pub type Rows = Vec<Vec<f64>>;

/// Input file, tagged by `"kind"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DatumFile {
    Ajn(AjnFile),
    Quiver(QuiverFile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AjnFile {
    pub d: Vec<usize>,
    pub n: Vec<usize>,
    pub c: Vec<u32>,
    pub p: Vec<u32>,
    /// `A[i][j]` is `n_j × d_i`, row-major.
    #[serde(rename = "A")]
    pub a: Vec<Vec<Rows>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverFile {
    pub beta_plus: Vec<usize>,
    pub beta_minus: Vec<usize>,
    pub sigma_plus: Vec<u32>,
    pub sigma_minus: Vec<u32>,
    pub arrows: Vec<ArrowFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowFile {
    pub i: usize,
    pub j: usize,
    pub matrix: Rows,
}

/// A parsed datum; AJN data keep their exponents for entropy reporting.
#[derive(Debug, Clone, PartialEq)]
pub enum Datum {
    Ajn(AjnDatum),
    Quiver(QuiverDatum),
}

impl Datum {
    pub fn to_quiver(&self) -> Result<QuiverDatum> {
        match self {
            Datum::Ajn(a) => from_ajn(a),
            Datum::Quiver(q) => Ok(q.clone()),
        }
    }

    pub fn as_ajn(&self) -> Option<&AjnDatum> {
        match self {
            Datum::Ajn(a) => Some(a),
            Datum::Quiver(_) => None,
        }
    }
}

pub fn matrix_from_rows(rows: usize, cols: usize, data: &Rows, what: &str) -> Result<Matrix> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        let found_cols = data.first().map_or(0, |r| r.len());
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected {rows}x{cols}, found {}x{found_cols}",
            data.len()
        )));
    }
    Ok(Matrix::from_row_major(rows, cols, data.concat())?)
}

pub fn matrix_to_rows(m: &Matrix) -> Rows {
    m.to_rows()
}

impl DatumFile {
    pub fn into_datum(self) -> Result<Datum> {
        match self {
            DatumFile::Ajn(AjnFile { d, n, c, p, a }) => {
                if a.len() != d.len() || a.iter().any(|row| row.len() != n.len()) {
                    return Err(Error::InvalidAjn(format!("A must be {}x{} blocks", d.len(), n.len())));
                }
                let a = a
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, m)| matrix_from_rows(n[j], d[i], m, &format!("A[{}][{}]", i + 1, j + 1)))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Datum::Ajn(AjnDatum { d, n, c, p, a }))
            }
            DatumFile::Quiver(QuiverFile { beta_plus, beta_minus, sigma_plus, sigma_minus, arrows }) => {
                let (k, m) = (beta_plus.len(), beta_minus.len());
                let mut quiver = BipartiteQuiver { sources: k, sinks: m, arrows: Vec::new() };
                let mut maps = Vec::new();
                for (id, a) in arrows.iter().enumerate() {
                    if a.i == 0 || a.i > k || a.j == 0 || a.j > m {
                        return Err(Error::DimensionMismatch(format!(
                            "arrow {}: endpoints ({}, {}) out of range 1..={k}, 1..={m}",
                            id + 1,
                            a.i,
                            a.j
                        )));
                    }
                    quiver.arrows.push(Arrow { source: a.i - 1, sink: a.j - 1 });
                    let what = format!("arrow {} matrix", id + 1);
                    maps.push(matrix_from_rows(beta_minus[a.j - 1], beta_plus[a.i - 1], &a.matrix, &what)?);
                }
                Ok(Datum::Quiver(QuiverDatum {
                    quiver,
                    beta: DimensionVector { plus: beta_plus, minus: beta_minus },
                    sigma: Weight { plus: sigma_plus, minus: sigma_minus },
                    maps,
                }))
            }
        }
    }

    pub fn from_ajn(ajn: &AjnDatum) -> Self {
        DatumFile::Ajn(AjnFile {
            d: ajn.d.clone(),
            n: ajn.n.clone(),
            c: ajn.c.clone(),
            p: ajn.p.clone(),
            a: ajn.a.iter().map(|row| row.iter().map(matrix_to_rows).collect()).collect(),
        })
    }

    pub fn from_quiver(q: &QuiverDatum) -> Self {
        DatumFile::Quiver(QuiverFile {
            beta_plus: q.beta.plus.clone(),
            beta_minus: q.beta.minus.clone(),
            sigma_plus: q.sigma.plus.clone(),
            sigma_minus: q.sigma.minus.clone(),
            arrows: q
                .quiver
                .arrows
                .iter()
                .zip(&q.maps)
                .map(|(a, m)| ArrowFile { i: a.source + 1, j: a.sink + 1, matrix: matrix_to_rows(m) })
                .collect(),
        })
    }
}

fn with_path<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T, String> {
    serde_path_to_error::deserialize(value).map_err(|e| match e.path().to_string().as_str() {
        "." => e.inner().to_string(),
        path => format!("{path}: {}", e.inner()),
    })
}

/// Parses a datum file. Syntax errors carry line and column, schema errors
/// the JSON path of the offending field.
pub fn parse_datum(text: &str) -> Result<Datum, String> {
    let mut value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let kind =
        value.as_object_mut().ok_or("datum must be a JSON object")?.remove("kind").ok_or("missing field `kind`")?;
    let file = match kind.as_str() {
        Some("ajn") => DatumFile::Ajn(with_path(value)?),
        Some("quiver") => DatumFile::Quiver(with_path(value)?),
        _ => return Err(format!("kind: expected \"ajn\" or \"quiver\", found {kind}")),
    };
    file.into_datum().map_err(|e| e.to_string())
}

/// Parses a JSON list of SPD matrices.
pub fn parse_tuple(text: &str) -> Result<SpdTuple, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let blocks: Vec<Rows> = with_path(value)?;
    let ms = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let n = b.len();
            matrix_from_rows(n, n, b, &format!("covariance {}", i + 1))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    SpdTuple::from_matrices(ms).map_err(|e| e.to_string())
}

/// `f64` that may be infinite, written as `"inf"` / `"-inf"` / `"nan"` since
/// JSON has no such literals.
pub mod extended_real {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            None => s.serialize_none(),
            Some(v) if v.is_nan() => s.serialize_str("nan"),
            Some(v) if *v == f64::INFINITY => s.serialize_str("inf"),
            Some(v) if *v == f64::NEG_INFINITY => s.serialize_str("-inf"),
            Some(v) => s.serialize_f64(*v),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::Number(v)) => Ok(Some(v)),
            Some(Raw::Text(t)) => match t.as_str() {
                "inf" => Ok(Some(f64::INFINITY)),
                "-inf" => Ok(Some(f64::NEG_INFINITY)),
                "nan" => Ok(Some(f64::NAN)),
                other => Err(serde::de::Error::custom(format!("expected a number or \"inf\", found {other:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElementFile {
    pub gv: Vec<Rows>,
    pub gw: Vec<Rows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolatorFile {
    /// Orthonormal basis columns of each `V′(v_i)`, as rows of an `β × k` matrix.
    pub subspaces: Vec<Rows>,
    pub lhs: i64,
    pub rhs: i64,
    pub slack: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualsFile {
    pub source: Vec<f64>,
    pub sink: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub first: Vec<Rows>,
    pub second: Vec<Rows>,
    pub first_residual: f64,
    pub second_residual: f64,
    pub deviation: f64,
}

/// Output of every CLI command; absent fields are omitted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "extended_real")]
    pub ajn_constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extremizer: Option<Vec<Rows>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_element: Option<GroupElementFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violator: Option<ViolatorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometric: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled_datum: Option<DatumFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ds_residuals: Option<ResidualsFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_at: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFile>,
}

pub fn tuple_to_rows(t: &SpdTuple) -> Vec<Rows> {
    t.iter().map(|s| s.to_rows()).collect()
}
