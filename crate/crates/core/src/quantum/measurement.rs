use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::{inner, ComplexMatrix};
use super::state::DensityState;
use crate::error::{Error, Result};

pub const MEASUREMENT_TOL: f64 = 1e-9;
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasurementKind {
    ProjectiveBasis,
    #[serde(rename = "POVM")]
    Povm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    label: String,
    dim: usize,
    kind: MeasurementKind,
    elements: Vec<ComplexMatrix>,
    /// Basis vectors; present only for `ProjectiveBasis`.
    vectors: Option<Vec<Vec<Complex64>>>,
}

fn identity_deviation(sum: &ComplexMatrix) -> f64 {
    sum.max_abs_diff(&ComplexMatrix::identity(sum.rows()))
}

impl Measurement {
    /// A complete orthonormal basis measurement.
    pub fn projective(label: impl Into<String>, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(Error::IncompleteBasis { count: vectors.len(), dim: d });
        }
        if let Some(bad) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: bad.len() });
        }
        let mut deviation: f64 = 0.0;
        for (i, u) in vectors.iter().enumerate() {
            for (j, v) in vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((inner(u, v) - target).norm());
            }
        }
        if deviation > MEASUREMENT_TOL || vectors.len() > d {
            return Err(Error::NonOrthonormal { deviation });
        }
        if vectors.len() < d {
            return Err(Error::IncompleteBasis { count: vectors.len(), dim: d });
        }
        let elements = vectors.iter().map(|v| ComplexMatrix::outer(v)).collect();
        Ok(Self {
            label: label.into(),
            dim: d,
            kind: MeasurementKind::ProjectiveBasis,
            elements,
            vectors: Some(vectors),
        })
    }

    /// Real-amplitude convenience constructor.
    pub fn projective_real(label: impl Into<String>, vectors: &[&[f64]]) -> Result<Self> {
        Self::projective(
            label,
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn povm(label: impl Into<String>, elements: Vec<ComplexMatrix>) -> Result<Self> {
        let d = match elements.first() {
            Some(e) => e.ensure_square()?,
            None => return Err(Error::NotCompleteToIdentity { deviation: 1.0 }),
        };
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in &elements {
            let n = e.ensure_square()?;
            if n != d {
                return Err(Error::DimensionMismatch { expected: d, found: n });
            }
            let deviation = e.hermitian_deviation();
            if deviation > MEASUREMENT_TOL {
                return Err(Error::NotHermitian { deviation });
            }
            let min_eigenvalue = *e.hermitian_eigen()?.values.last().expect("nonempty");
            if min_eigenvalue < -MEASUREMENT_TOL {
                return Err(Error::NotPsd { min_eigenvalue });
            }
            sum = &sum + e;
        }
        let deviation = identity_deviation(&sum);
        if deviation > MEASUREMENT_TOL {
            return Err(Error::NotCompleteToIdentity { deviation });
        }
        Ok(Self {
            label: label.into(),
            dim: d,
            kind: MeasurementKind::Povm,
            elements,
            vectors: None,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn outcome_count(&self) -> usize {
        self.elements.len()
    }

    pub fn vectors(&self) -> Option<&[Vec<Complex64>]> {
        self.vectors.as_deref()
    }

    pub fn is_projective(&self) -> bool {
        self.kind == MeasurementKind::ProjectiveBasis
    }

    pub fn require_vectors(&self) -> Result<&[Vec<Complex64>]> {
        self.vectors().ok_or_else(|| Error::NotProjective(self.label.clone()))
    }

    /// Same measurement with outcomes relabeled: new outcome `a` is old `order[a]`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let n = self.outcome_count();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::BadParameter(format!("{order:?} is not a permutation of 0..{n}")));
        }
        Ok(Self {
            label: self.label.clone(),
            dim: self.dim,
            kind: self.kind,
            elements: order.iter().map(|&i| self.elements[i].clone()).collect(),
            vectors: self
                .vectors
                .as_ref()
                .map(|vs| order.iter().map(|&i| vs[i].clone()).collect()),
        })
    }
}

/// Tr(Π_a ρ) for each outcome. Values within 1e-9 below zero clip to 0 and
/// values above one clip to 1; larger violations are errors.
pub fn born_probabilities(state: &DensityState, m: &Measurement) -> Result<Vec<f64>> {
    if state.dim() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: state.dim() });
    }
    let mut probs = Vec::with_capacity(m.outcome_count());
    for e in m.elements() {
        let p = e.trace_product(state.matrix()).re;
        if !(-MEASUREMENT_TOL..=1.0 + MEASUREMENT_TOL).contains(&p) {
            return Err(Error::InvalidProbability { value: p });
        }
        probs.push(p.clamp(0.0, 1.0));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > MEASUREMENT_TOL {
        return Err(Error::InvalidProbability { value: total });
    }
    Ok(probs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSet {
    dim: usize,
    measurements: Vec<Measurement>,
    setting_weights: Vec<f64>,
}

impl MeasurementSet {
    /// Uniform setting weights 1/N.
    pub fn new(measurements: Vec<Measurement>) -> Result<Self> {
        let n = measurements.len();
        Self::with_weights(measurements, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn with_weights(measurements: Vec<Measurement>, weights: Vec<f64>) -> Result<Self> {
        let dim = match measurements.first() {
            Some(m) => m.dim(),
            None => return Err(Error::TooFewSettings { required: 1, found: 0 }),
        };
        if let Some(m) = measurements.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
        }
        if weights.len() != measurements.len() {
            return Err(Error::LengthMismatch { expected: measurements.len(), found: weights.len() });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::BadWeights("setting weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::BadWeights(format!("setting weights sum to {total}, not 1")));
        }
        Ok(Self { dim, measurements, setting_weights: weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    pub fn len(&self) -> usize {
        self.measurements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measurements.is_empty()
    }

    pub fn setting_weights(&self) -> &[f64] {
        &self.setting_weights
    }

    pub fn is_projective(&self) -> bool {
        self.measurements.iter().all(Measurement::is_projective)
    }

    /// Total number of POVM elements across all settings.
    pub fn pool_size(&self) -> usize {
        self.measurements.iter().map(Measurement::outcome_count).sum()
    }

    /// Max outcome count over the settings.
    pub fn max_outcomes(&self) -> usize {
        self.measurements.iter().map(Measurement::outcome_count).max().unwrap_or(0)
    }

    /// Born vectors per setting.
    pub fn born_vectors(&self, state: &DensityState) -> Result<Vec<Vec<f64>>> {
        self.measurements.iter().map(|m| born_probabilities(state, m)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::c64;
    use crate::quantum::state::DensityState;
    use std::f64::consts::FRAC_1_SQRT_2;

    const H: f64 = FRAC_1_SQRT_2;

    #[test]
    fn computational_and_hadamard_bases() {
        let z = Measurement::projective_real("z", &[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(z.kind(), MeasurementKind::ProjectiveBasis);
        let x = Measurement::projective_real("x", &[&[H, H], &[H, -H]]).unwrap();
        let sum = &x.elements()[0] + &x.elements()[1];
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn qutrit_m2_basis_is_valid() {
        let m2 = Measurement::projective_real(
            "M2",
            &[&[1.0, 0.0, 0.0], &[0.0, H, H], &[0.0, H, -H]],
        )
        .unwrap();
        assert_eq!(m2.outcome_count(), 3);
    }

    #[test]
    fn rejects_bad_bases() {
        let r = Measurement::projective_real("bad", &[&[1.0, 0.0], &[H, H]]);
        assert!(matches!(r, Err(Error::NonOrthonormal { .. })));
        let r = Measurement::projective_real("short", &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        assert!(matches!(r, Err(Error::IncompleteBasis { count: 2, dim: 3 })));
    }

    #[test]
    fn povm_examples() {
        let p0 = ComplexMatrix::diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diagonal(&[0.0, 1.0]);
        let m = Measurement::povm("z", vec![p0, p1]).unwrap();
        assert_eq!(m.kind(), MeasurementKind::Povm);

        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(Measurement::povm("trivial", vec![half.clone(), half]).is_ok());

        let a = ComplexMatrix::diagonal(&[0.6, 0.0]);
        let b = ComplexMatrix::diagonal(&[0.4, 1.0]);
        assert!(Measurement::povm("mixed-rank", vec![a, b]).is_ok());
    }

    #[test]
    fn povm_errors() {
        let neg = ComplexMatrix::diagonal(&[1.5, 0.0]);
        let comp = ComplexMatrix::diagonal(&[-0.5, 1.0]);
        assert!(matches!(Measurement::povm("neg", vec![neg, comp]), Err(Error::NotPsd { .. })));
        let a = ComplexMatrix::diagonal(&[0.5, 0.0]);
        let b = ComplexMatrix::diagonal(&[0.0, 1.0]);
        assert!(matches!(
            Measurement::povm("short", vec![a, b]),
            Err(Error::NotCompleteToIdentity { .. })
        ));
    }

    #[test]
    fn born_examples() {
        let z = Measurement::projective_real("z", &[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let x = Measurement::projective_real("x", &[&[H, H], &[H, -H]]).unwrap();
        let mixed = DensityState::maximally_mixed(2);
        let zero = DensityState::pure(&[c64(1.0, 0.0), c64(0.0, 0.0)], "|0>").unwrap();

        let p = born_probabilities(&mixed, &z).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        let p = born_probabilities(&zero, &x).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        let p = born_probabilities(&zero, &z).unwrap();
        assert_eq!(p, vec![1.0, 0.0]);

        let big = DensityState::maximally_mixed(3);
        assert!(matches!(born_probabilities(&big, &z), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn set_weights_validated() {
        let z = Measurement::projective_real("z", &[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let set = MeasurementSet::new(vec![z.clone(), z.clone()]).unwrap();
        assert_eq!(set.setting_weights(), &[0.5, 0.5]);
        assert!(MeasurementSet::with_weights(vec![z.clone(), z.clone()], vec![0.7, 0.7]).is_err());
        assert!(MeasurementSet::with_weights(vec![z.clone(), z], vec![-0.5, 1.5]).is_err());
    }

    #[test]
    fn reordering_permutes_outcomes() {
        let z = Measurement::projective_real("z", &[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let flipped = z.reordered(&[1, 0]).unwrap();
        assert_eq!(flipped.elements()[0], z.elements()[1]);
        assert!(z.reordered(&[0, 0]).is_err());
    }
}
