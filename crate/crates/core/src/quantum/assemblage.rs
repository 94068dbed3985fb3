use serde::{Deserialize, Serialize};

use super::linalg::ComplexMatrix;
use super::measurement::{MeasurementSet, MEASUREMENT_TOL};
use super::state::DensityState;
use crate::error::{Error, Result};

pub const NO_SIGNALING_TOL: f64 = 1e-8;

/// Bob's subnormalized conditional states σ_x^a, indexed `[x][a]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assemblage {
    dim: usize,
    entries: Vec<Vec<ComplexMatrix>>,
}

impl Assemblage {
    /// Validates positivity, trace bounds and no-signaling.
    pub fn new(dim: usize, entries: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let mut reduced: Option<ComplexMatrix> = None;
        for setting in &entries {
            let mut sum = ComplexMatrix::zeros(dim, dim);
            for sigma in setting {
                let n = sigma.ensure_square()?;
                if n != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: n });
                }
                let eig = sigma.hermitian_eigen()?;
                let min_eigenvalue = *eig.values.last().expect("nonempty");
                if min_eigenvalue < -MEASUREMENT_TOL {
                    return Err(Error::NotPsd { min_eigenvalue });
                }
                let tr = sigma.trace().re;
                if !(-MEASUREMENT_TOL..=1.0 + MEASUREMENT_TOL).contains(&tr) {
                    return Err(Error::InvalidProbability { value: tr });
                }
                sum = &sum + sigma;
            }
            match &reduced {
                None => reduced = Some(sum),
                Some(r) => {
                    let dev = r.max_abs_diff(&sum);
                    if dev > NO_SIGNALING_TOL {
                        return Err(Error::PreconditionFailed(format!(
                            "assemblage violates no-signaling (deviation {dev:.3e})"
                        )));
                    }
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn settings(&self) -> usize {
        self.entries.len()
    }

    pub fn outcomes(&self, x: usize) -> usize {
        self.entries[x].len()
    }

    pub fn get(&self, x: usize, a: usize) -> &ComplexMatrix {
        &self.entries[x][a]
    }

    pub fn setting(&self, x: usize) -> &[ComplexMatrix] {
        &self.entries[x]
    }

    /// Σ_a σ_x^a for setting `x`.
    pub fn reduced_state(&self, x: usize) -> ComplexMatrix {
        self.entries[x]
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, s| &acc + s)
    }
}

/// σ_x^a = Tr_A[(Π_x^a ⊗ 1) ρ_AB], with A as the slow tensor index.
pub fn conditional_assemblage(rho_ab: &DensityState, alice_set: &MeasurementSet) -> Result<Assemblage> {
    let (d_a, d_b) = rho_ab.split_for_alice(alice_set.dim())?;
    if d_a != alice_set.dim() {
        return Err(Error::DimensionMismatch { expected: alice_set.dim(), found: d_a });
    }
    let rho = rho_ab.matrix();
    let entries = alice_set
        .measurements()
        .iter()
        .map(|m| {
            m.elements()
                .iter()
                .map(|pi| {
                    // σ_{j,l} = Σ_{i,i'} Π_{i,i'} ρ_{(i',j),(i,l)}
                    let mut sigma = ComplexMatrix::zeros(d_b, d_b);
                    for i in 0..d_a {
                        for ip in 0..d_a {
                            let pii = pi[(i, ip)];
                            if pii.norm_sqr() == 0.0 {
                                continue;
                            }
                            for j in 0..d_b {
                                for l in 0..d_b {
                                    sigma[(j, l)] += pii * rho[(ip * d_b + j, i * d_b + l)];
                                }
                            }
                        }
                    }
                    sigma
                })
                .collect()
        })
        .collect();
    Assemblage::new(d_b, entries)
}
