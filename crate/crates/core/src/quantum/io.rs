//! JSON file formats for measurements, measurement sets and states.
//!
//! * complex number: `[re, im]` (a bare number is read as a real value)
//! * matrix: row-major nested arrays of complex numbers
//! * measurement: `{"label", "kind", "vectors" | "elements"}`
//! * measurement set: `{"dim", "weights"?, "measurements": [...]}`
//! * density state: `{"dim", "split"?: [dA, dB], "matrix", "label"?}`

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use super::linalg::ComplexMatrix;
use super::measurement::{Measurement, MeasurementKind, MeasurementSet};
use super::state::DensityState;
use crate::error::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{context}{}: {source}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Invalid {
        context: String,
        line: Option<usize>,
        #[source]
        source: Error,
    },
}

impl InputError {
    fn invalid(context: impl Into<String>, line: Option<usize>, source: Error) -> Self {
        InputError::Invalid { context: context.into(), line, source }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum ComplexRepr {
    Pair([f64; 2]),
    Real(f64),
}

impl From<ComplexRepr> for Complex64 {
    fn from(c: ComplexRepr) -> Self {
        match c {
            ComplexRepr::Pair([re, im]) => Complex64::new(re, im),
            ComplexRepr::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

type RawVector = Vec<ComplexRepr>;
type RawMatrix = Vec<Vec<ComplexRepr>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasurement {
    #[serde(default)]
    label: Option<String>,
    kind: String,
    #[serde(default)]
    vectors: Option<Vec<RawVector>>,
    #[serde(default)]
    elements: Option<Vec<RawMatrix>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasurementSet {
    dim: usize,
    #[serde(default)]
    weights: Option<Vec<f64>>,
    measurements: Vec<RawMeasurement>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    dim: usize,
    #[serde(default)]
    split: Option<[usize; 2]>,
    matrix: RawMatrix,
    #[serde(default)]
    label: Option<String>,
}

fn to_vector(v: RawVector) -> Vec<Complex64> {
    v.into_iter().map(Complex64::from).collect()
}

fn to_matrix(m: RawMatrix) -> Result<ComplexMatrix, Error> {
    ComplexMatrix::from_rows(m.into_iter().map(to_vector).collect())
}

/// 1-based line of the `nth` (0-based) occurrence of `needle`.
fn line_of_occurrence(text: &str, needle: &str, nth: usize) -> Option<usize> {
    let (offset, _) = text.match_indices(needle).nth(nth)?;
    Some(text[..offset].matches('\n').count() + 1)
}

fn parse_kind(kind: &str) -> Option<MeasurementKind> {
    match kind.to_ascii_lowercase().as_str() {
        "projectivebasis" | "projective" | "basis" => Some(MeasurementKind::ProjectiveBasis),
        "povm" => Some(MeasurementKind::Povm),
        _ => None,
    }
}

fn build_measurement(raw: RawMeasurement, index: usize) -> Result<Measurement, Error> {
    let label = raw.label.unwrap_or_else(|| format!("m{index}"));
    match parse_kind(&raw.kind) {
        Some(MeasurementKind::ProjectiveBasis) => {
            let vectors = raw
                .vectors
                .ok_or_else(|| Error::BadParameter("projective measurement needs \"vectors\"".into()))?;
            Measurement::projective(label, vectors.into_iter().map(to_vector).collect())
        }
        Some(MeasurementKind::Povm) => {
            let elements = raw
                .elements
                .ok_or_else(|| Error::BadParameter("POVM needs \"elements\"".into()))?;
            let elements = elements.into_iter().map(to_matrix).collect::<Result<Vec<_>, _>>()?;
            Measurement::povm(label, elements)
        }
        None => Err(Error::BadParameter(format!("unknown measurement kind '{}'", raw.kind))),
    }
}

pub fn parse_measurement_set(text: &str) -> Result<MeasurementSet, InputError> {
    let raw: RawMeasurementSet = serde_json::from_str(text)?;
    let declared = raw.dim;
    let mut measurements = Vec::with_capacity(raw.measurements.len());
    for (i, m) in raw.measurements.into_iter().enumerate() {
        let label = m.label.clone().unwrap_or_else(|| format!("m{i}"));
        let line = line_of_occurrence(text, "\"kind\"", i);
        let built = build_measurement(m, i)
            .map_err(|e| InputError::invalid(format!("measurement #{i} ('{label}')"), line, e))?;
        if built.dim() != declared {
            return Err(InputError::invalid(
                format!("measurement #{i} ('{label}')"),
                line,
                Error::DimensionMismatch { expected: declared, found: built.dim() },
            ));
        }
        measurements.push(built);
    }
    let set = match raw.weights {
        Some(w) => MeasurementSet::with_weights(measurements, w),
        None => MeasurementSet::new(measurements),
    };
    set.map_err(|e| InputError::invalid("measurement set", line_of_occurrence(text, "\"measurements\"", 0), e))
}

pub fn parse_state(text: &str) -> Result<DensityState, InputError> {
    let raw: RawState = serde_json::from_str(text)?;
    let line = line_of_occurrence(text, "\"matrix\"", 0);
    let matrix = to_matrix(raw.matrix).map_err(|e| InputError::invalid("state matrix", line, e))?;
    if matrix.rows() != raw.dim {
        return Err(InputError::invalid(
            "state matrix",
            line,
            Error::DimensionMismatch { expected: raw.dim, found: matrix.rows() },
        ));
    }
    let state = DensityState::new(matrix, raw.label.unwrap_or_else(|| "state".into()))
        .map_err(|e| InputError::invalid("density state", line, e))?;
    match raw.split {
        Some([a, b]) => state
            .with_split(a, b)
            .map_err(|e| InputError::invalid("state split", line_of_occurrence(text, "\"split\"", 0), e)),
        None => Ok(state),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(complex_json).collect()))
            .collect(),
    )
}

pub fn measurement_json(m: &Measurement) -> Value {
    match m.vectors() {
        Some(vs) => json!({
            "label": m.label(),
            "kind": "ProjectiveBasis",
            "vectors": vs.iter().map(|v| v.iter().copied().map(complex_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        None => json!({
            "label": m.label(),
            "kind": "POVM",
            "elements": m.elements().iter().map(matrix_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn measurement_set_json(set: &MeasurementSet) -> Value {
    json!({
        "dim": set.dim(),
        "weights": set.setting_weights(),
        "measurements": set.measurements().iter().map(measurement_json).collect::<Vec<_>>(),
    })
}

pub fn state_json(state: &DensityState) -> Value {
    let mut v = json!({
        "dim": state.dim(),
        "label": state.label(),
        "matrix": matrix_json(state.matrix()),
    });
    if let Some((a, b)) = state.split() {
        v["split"] = json!([a, b]);
    }
    v
}
