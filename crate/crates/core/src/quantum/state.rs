use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::linalg::{c64, normalize, ComplexMatrix, Spectrum, HERMITIAN_TOL};
use crate::error::{Error, Result};

pub const STATE_TOL: f64 = 1e-9;

/// A validated density matrix. `split` records a bipartite factorization
/// `(d_A, d_B)` with A as the slow (left) tensor index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityState {
    dim: usize,
    matrix: ComplexMatrix,
    label: String,
    split: Option<(usize, usize)>,
}

impl DensityState {
    pub fn new(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let dim = matrix.ensure_square()?;
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {:.12}{:+.3e}i differs from 1",
                trace.re, trace.im
            )));
        }
        let min_eigenvalue = matrix.hermitian_eigen()?.values[dim - 1];
        if min_eigenvalue < -STATE_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self {
            dim,
            matrix,
            label: label.into(),
            split: None,
        })
    }

    /// Declares the bipartite split `(d_a, d_b)`.
    pub fn with_split(mut self, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a * d_b != self.dim || d_a == 0 {
            return Err(Error::BadFactorization {
                d_a,
                d_b,
                total: self.dim,
            });
        }
        self.split = Some((d_a, d_b));
        Ok(self)
    }

    pub fn pure(vector: &[Complex64], label: impl Into<String>) -> Result<Self> {
        let mut v = vector.to_vec();
        if normalize(&mut v) == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        Self::new(ComplexMatrix::outer(&v), label)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
            label: format!("I/{dim}"),
            split: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn split(&self) -> Option<(usize, usize)> {
        self.split
    }

    /// ρ ⊗ τ, split recorded.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            dim: self.dim * other.dim,
            matrix: self.matrix.kron(&other.matrix),
            label: format!("{}⊗{}", self.label, other.label),
            split: Some((self.dim, other.dim)),
        }
    }

    pub fn spectrum(&self) -> Spectrum {
        let mut values = self.matrix.hermitian_eigen().expect("validated Hermitian").values;
        for v in &mut values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Spectrum::new(values).expect("finite eigenvalues")
    }

    fn resolve_split(&self, d_a: Option<usize>) -> Result<(usize, usize)> {
        match (self.split, d_a) {
            (Some((a, _)), Some(expected)) if a != expected => Err(Error::DimensionMismatch {
                expected,
                found: a,
            }),
            (Some(split), _) => Ok(split),
            (None, Some(a)) if a > 0 && self.dim.is_multiple_of(a) => Ok((a, self.dim / a)),
            (None, Some(a)) => Err(Error::BadFactorization {
                d_a: a,
                d_b: self.dim / a.max(1),
                total: self.dim,
            }),
            (None, None) => {
                let d = (self.dim as f64).sqrt().round() as usize;
                if d * d == self.dim {
                    Ok((d, d))
                } else {
                    Err(Error::BadFactorization {
                        d_a: d,
                        d_b: d,
                        total: self.dim,
                    })
                }
            }
        }
    }

    /// The bipartite split, inferring `(d, d)` for square total dimensions.
    pub fn bipartite_split(&self) -> Result<(usize, usize)> {
        self.resolve_split(None)
    }

    pub(crate) fn split_for_alice(&self, d_a: usize) -> Result<(usize, usize)> {
        self.resolve_split(Some(d_a))
    }

    /// Tr_A ρ_AB.
    pub fn reduced_b(&self) -> Result<Self> {
        let (d_a, d_b) = self.bipartite_split()?;
        let mut m = ComplexMatrix::zeros(d_b, d_b);
        for i in 0..d_a {
            for j in 0..d_b {
                for l in 0..d_b {
                    m[(j, l)] += self.matrix[(i * d_b + j, i * d_b + l)];
                }
            }
        }
        Self::new(m, format!("Tr_A[{}]", self.label))
    }

    /// Tr_B ρ_AB.
    pub fn reduced_a(&self) -> Result<Self> {
        let (d_a, d_b) = self.bipartite_split()?;
        let mut m = ComplexMatrix::zeros(d_a, d_a);
        for i in 0..d_a {
            for k in 0..d_a {
                for j in 0..d_b {
                    m[(i, k)] += self.matrix[(i * d_b + j, k * d_b + j)];
                }
            }
        }
        Self::new(m, format!("Tr_B[{}]", self.label))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WernerFamily {
    Qubit,
    Qutrit,
}

impl WernerFamily {
    pub fn local_dim(self) -> usize {
        match self {
            WernerFamily::Qubit => 2,
            WernerFamily::Qutrit => 3,
        }
    }

    /// The entangled pure component: the singlet (|01⟩−|10⟩)/√2 for qubits,
    /// (|00⟩+|11⟩+|22⟩)/√3 for qutrits.
    pub fn entangled_vector(self) -> Vec<Complex64> {
        match self {
            WernerFamily::Qubit => vec![
                c64(0.0, 0.0),
                c64(FRAC_1_SQRT_2, 0.0),
                c64(-FRAC_1_SQRT_2, 0.0),
                c64(0.0, 0.0),
            ],
            WernerFamily::Qutrit => {
                let amp = 1.0 / 3f64.sqrt();
                let mut v = vec![c64(0.0, 0.0); 9];
                for i in 0..3 {
                    v[i * 3 + i] = c64(amp, 0.0);
                }
                v
            }
        }
    }
}

impl std::str::FromStr for WernerFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qubit" => Ok(Self::Qubit),
            "qutrit" => Ok(Self::Qutrit),
            other => Err(Error::BadParameter(format!("unknown Werner family '{other}'"))),
        }
    }
}

impl std::fmt::Display for WernerFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WernerFamily::Qubit => "qubit",
            WernerFamily::Qutrit => "qutrit",
        })
    }
}

/// p·|ψ⟩⟨ψ| + (1−p)·I/d².
pub fn werner_state(family: WernerFamily, p: f64) -> Result<DensityState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParameter(format!("Werner weight p = {p} outside [0, 1]")));
    }
    let d = family.local_dim();
    let n = d * d;
    let pure = ComplexMatrix::outer(&family.entangled_vector()).scale(p);
    let noise = ComplexMatrix::identity(n).scale((1.0 - p) / n as f64);
    let state = DensityState {
        dim: n,
        matrix: &pure + &noise,
        label: format!("werner-{family}:{p}"),
        split: Some((d, d)),
    };
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Purity {
    Pure,
    Mixed,
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64(re, im)
}

/// Pure or mixed random state drawn from a caller-owned generator.
pub fn random_state_with(rng: &mut ChaCha8Rng, dim: usize, purity: Purity) -> DensityState {
    assert!(dim >= 1, "dimension must be positive");
    let matrix = match purity {
        Purity::Pure => {
            let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
            normalize(&mut v);
            ComplexMatrix::outer(&v)
        }
        Purity::Mixed => {
            let g = ComplexMatrix::new(dim, dim, (0..dim * dim).map(|_| gaussian_complex(rng)).collect())
                .expect("finite gaussian samples");
            let gg = &g * &g.adjoint();
            let tr = gg.trace().re;
            gg.scale(1.0 / tr)
        }
    };
    DensityState {
        dim,
        matrix,
        label: format!("random-{}", if purity == Purity::Pure { "pure" } else { "mixed" }),
        split: None,
    }
}

/// Random unit vector with complex Gaussian amplitudes.
pub fn random_pure_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    normalize(&mut v);
    v
}

/// Deterministic in `(dim, purity, seed)`.
pub fn random_state(dim: usize, purity: Purity, seed: u64) -> Result<DensityState> {
    if dim < 2 {
        return Err(Error::BadParameter(format!("random state dimension {dim} < 2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_state_with(&mut rng, dim, purity))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_valid(s: &DensityState) {
        assert!(s.matrix().hermitian_deviation() <= 1e-9);
        assert!((s.matrix().trace().re - 1.0).abs() <= 1e-9);
        assert!(s.spectrum().min() >= -1e-9);
    }

    #[test]
    fn werner_qubit_endpoints() {
        let w0 = werner_state(WernerFamily::Qubit, 0.0).unwrap();
        assert!(w0.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);

        let w1 = werner_state(WernerFamily::Qubit, 1.0).unwrap();
        let singlet = ComplexMatrix::outer(&WernerFamily::Qubit.entangled_vector());
        assert!(w1.matrix().max_abs_diff(&singlet) < 1e-15);
        assert!((w1.matrix()[(1, 2)].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn werner_qutrit_pure_block() {
        let w = werner_state(WernerFamily::Qutrit, 1.0).unwrap();
        for &i in &[0, 4, 8] {
            for &j in &[0, 4, 8] {
                assert!((w.matrix()[(i, j)].re - 1.0 / 3.0).abs() < 1e-15);
            }
        }
        assert_eq!(w.matrix()[(1, 1)].re, 0.0);
        assert_valid(&w);
    }

    #[test]
    fn werner_rejects_bad_p() {
        assert!(matches!(werner_state(WernerFamily::Qubit, 1.5), Err(Error::BadParameter(_))));
        assert!(werner_state(WernerFamily::Qubit, f64::NAN).is_err());
    }

    #[test]
    fn random_pure_is_rank_one() {
        let s = random_state(2, Purity::Pure, 7).unwrap();
        assert_valid(&s);
        let spec = s.spectrum();
        assert!((spec.max() - 1.0).abs() < 1e-12);
        assert!(spec.min().abs() < 1e-12);
    }

    #[test]
    fn random_mixed_is_full_rank() {
        let s = random_state(3, Purity::Mixed, 11).unwrap();
        assert_valid(&s);
        assert!(s.spectrum().min() > 1e-6);
    }

    #[test]
    fn random_state_is_deterministic() {
        let a = random_state(3, Purity::Mixed, 99).unwrap();
        let b = random_state(3, Purity::Mixed, 99).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let c = random_state(3, Purity::Mixed, 100).unwrap();
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn rejects_invalid_states() {
        let m = ComplexMatrix::diagonal(&[0.7, 0.7]);
        assert!(matches!(DensityState::new(m, "x"), Err(Error::InvalidState(_))));
        let m = ComplexMatrix::diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityState::new(m, "x"), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn partial_traces_of_singlet_are_maximally_mixed() {
        let w = werner_state(WernerFamily::Qubit, 1.0).unwrap();
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(w.reduced_a().unwrap().matrix().max_abs_diff(&half) < 1e-15);
        assert!(w.reduced_b().unwrap().matrix().max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn split_must_factor_dimension() {
        let s = DensityState::maximally_mixed(6);
        assert!(s.clone().with_split(2, 3).is_ok());
        assert!(matches!(s.with_split(2, 2), Err(Error::BadFactorization { .. })));
    }
}
