//! Fine-grained bounds ζ: the exact maximum over all (bipartite or single)
//! states, and a seesaw lower bound over product states.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_distribution, check_permutation_dim, OutcomeTuple};
use crate::error::{Error, Result};
use crate::majorization::{omega_assemble, MajorizationVector};
use crate::quantum::state::random_pure_vector;
use crate::quantum::{ComplexMatrix, Measurement, MeasurementSet};

pub const SEESAW_GAIN_TOL: f64 = 1e-12;
pub const SEESAW_MAX_ITERS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self { restarts: 50, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    Quantum,
    Separable,
}

fn element(set: &MeasurementSet, x: usize, a: usize) -> Result<&ComplexMatrix> {
    set.measurements()[x]
        .elements()
        .get(a)
        .ok_or_else(|| Error::BadParameter(format!("outcome {a} out of range for setting {x}")))
}

fn check_outcomes(set: &MeasurementSet, outcomes: &[usize]) -> Result<()> {
    if outcomes.len() != set.len() {
        return Err(Error::LengthMismatch { expected: set.len(), found: outcomes.len() });
    }
    for (x, &a) in outcomes.iter().enumerate() {
        element(set, x, a)?;
    }
    Ok(())
}

fn lambda_max(m: &ComplexMatrix) -> f64 {
    m.max_eigenvalue().expect("weighted sums of Hermitian elements are Hermitian")
}

/// `λ_max(Σ_{x,y} p(x,y) Π_x^{a(x)} ⊗ Φ_y^{b(y)})`, the maximum over all
/// bipartite states.
pub fn zeta_quantum(
    alice_set: &MeasurementSet,
    bob_set: &MeasurementSet,
    joint_weights: &[Vec<f64>],
    a: &[usize],
    b: &[usize],
) -> Result<f64> {
    check_outcomes(alice_set, a)?;
    check_outcomes(bob_set, b)?;
    if joint_weights.len() != alice_set.len() {
        return Err(Error::LengthMismatch { expected: alice_set.len(), found: joint_weights.len() });
    }
    if let Some(row) = joint_weights.iter().find(|r| r.len() != bob_set.len()) {
        return Err(Error::LengthMismatch { expected: bob_set.len(), found: row.len() });
    }
    let flat: Vec<f64> = joint_weights.iter().flatten().copied().collect();
    check_distribution(&flat, "joint weights")?;
    let n = alice_set.dim() * bob_set.dim();
    let mut m = ComplexMatrix::zeros(n, n);
    for (x, row) in joint_weights.iter().enumerate() {
        for (y, &w) in row.iter().enumerate() {
            if w != 0.0 {
                let term = element(alice_set, x, a[x])?.kron(element(bob_set, y, b[y])?);
                m = &m + &term.scale(w);
            }
        }
    }
    Ok(lambda_max(&m))
}

fn diagonal_terms<'a>(
    alice_set: &'a MeasurementSet,
    bob_set: &'a MeasurementSet,
    weights: &[f64],
    tuple: &OutcomeTuple,
) -> Result<Vec<(f64, &'a ComplexMatrix, &'a ComplexMatrix)>> {
    if alice_set.len() != bob_set.len() {
        return Err(Error::SettingCountMismatch { left: alice_set.len(), right: bob_set.len() });
    }
    if weights.len() != alice_set.len() {
        return Err(Error::LengthMismatch { expected: alice_set.len(), found: weights.len() });
    }
    check_distribution(weights, "setting weights")?;
    check_outcomes(alice_set, tuple.outcomes())?;
    (0..alice_set.len())
        .map(|x| Ok((weights[x], element(alice_set, x, tuple.outcomes()[x])?, element(bob_set, x, tuple.paired(x))?)))
        .collect()
}

/// Diagonal `p(x,y) = p(x) δ_xy` case of [`zeta_quantum`] with Bob's outcome
/// `π(a(x))`.
pub fn zeta_qfgur_quantum(
    alice_set: &MeasurementSet,
    bob_set: &MeasurementSet,
    weights: &[f64],
    tuple: &OutcomeTuple,
) -> Result<f64> {
    let terms = diagonal_terms(alice_set, bob_set, weights, tuple)?;
    let n = alice_set.dim() * bob_set.dim();
    let m = terms
        .iter()
        .fold(ComplexMatrix::zeros(n, n), |acc, (w, pa, pb)| &acc + &pa.kron(pb).scale(*w));
    Ok(lambda_max(&m))
}

/// `λ_max(Σ_x p(x) Π_x^{a(x)})` with the set's own setting weights.
pub fn zeta_fgur(alice_set: &MeasurementSet, a: &[usize]) -> Result<f64> {
    check_outcomes(alice_set, a)?;
    let d = alice_set.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for (x, &w) in alice_set.setting_weights().iter().enumerate() {
        m = &m + &element(alice_set, x, a[x])?.scale(w);
    }
    Ok(lambda_max(&m))
}

/// Seesaw maximization of `⟨α⊗β| Σ w_i A_i⊗B_i |α⊗β⟩` over pure product states.
/// Returns the best value over the seeded restarts; a lower bound on the
/// separable maximum.
pub fn seesaw_product_max(terms: &[(f64, &ComplexMatrix, &ComplexMatrix)], config: SeesawConfig) -> Result<f64> {
    let (d_a, d_b) = match terms.first() {
        Some((_, a, b)) => (a.rows(), b.rows()),
        None => return Err(Error::BadParameter("seesaw needs at least one term".into())),
    };
    if terms.iter().any(|(_, a, b)| a.rows() != d_a || b.rows() != d_b) {
        return Err(Error::BadParameter("seesaw terms must share dimensions".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let starts: Vec<_> = (0..config.restarts.max(1)).map(|_| random_pure_vector(&mut rng, d_b)).collect();
    let values: Vec<f64> = starts
        .into_par_iter()
        .map(|beta| seesaw_from(terms, d_a, d_b, beta))
        .collect();
    Ok(values.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn seesaw_from(
    terms: &[(f64, &ComplexMatrix, &ComplexMatrix)],
    d_a: usize,
    d_b: usize,
    mut beta: Vec<num_complex::Complex64>,
) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for _ in 0..SEESAW_MAX_ITERS {
        let m_a = terms
            .iter()
            .fold(ComplexMatrix::zeros(d_a, d_a), |acc, (w, a, b)| &acc + &a.scale(w * b.expectation(&beta)));
        let eig_a = m_a.hermitian_eigen().expect("Hermitian by construction");
        let alpha = eig_a.vector(0);
        let m_b = terms
            .iter()
            .fold(ComplexMatrix::zeros(d_b, d_b), |acc, (w, a, b)| &acc + &b.scale(w * a.expectation(&alpha)));
        let eig_b = m_b.hermitian_eigen().expect("Hermitian by construction");
        beta = eig_b.vector(0);
        let value = eig_b.values[0];
        let gain = value - best;
        best = best.max(value);
        if gain < SEESAW_GAIN_TOL {
            break;
        }
    }
    best
}

/// Seesaw lower bound on the product-state maximum of the diagonal functional.
pub fn zeta_separable(
    alice_set: &MeasurementSet,
    bob_set: &MeasurementSet,
    weights: &[f64],
    tuple: &OutcomeTuple,
    config: SeesawConfig,
) -> Result<f64> {
    let terms = diagonal_terms(alice_set, bob_set, weights, tuple)?;
    seesaw_product_max(&terms, config)
}

fn pair_zeta(pa: &ComplexMatrix, pb: &ComplexMatrix, class: StateClass, config: SeesawConfig) -> Result<f64> {
    match class {
        StateClass::Quantum => Ok(lambda_max(&pa.kron(pb))),
        StateClass::Separable => seesaw_product_max(&[(1.0, pa, pb)], config),
    }
}

/// `Ω_k = max_π` (sum of the `k` largest `ζ_{a,π(a)}`), assembled into
/// `ω = (Ω_1, Ω_2 − Ω_1, …)`.
pub fn omega_chain(alice_m: &Measurement, bob_m: &Measurement, class: StateClass, config: SeesawConfig) -> Result<MajorizationVector> {
    let d = alice_m.outcome_count();
    if bob_m.outcome_count() != d {
        return Err(Error::LengthMismatch { expected: d, found: bob_m.outcome_count() });
    }
    check_permutation_dim(d)?;
    let mut zeta = vec![vec![0.0; d]; d];
    for (a, pa) in alice_m.elements().iter().enumerate() {
        for (b, pb) in bob_m.elements().iter().enumerate() {
            zeta[a][b] = pair_zeta(pa, pb, class, config)?;
        }
    }
    let mut omegas = vec![0.0f64; d];
    for perm in (0..d).permutations(d) {
        let mut vals: Vec<f64> = perm.iter().enumerate().map(|(a, &b)| zeta[a][b]).collect();
        vals.sort_by(|x, y| y.total_cmp(x));
        let mut acc = 0.0;
        for (k, v) in vals.iter().enumerate() {
            acc += v;
            omegas[k] = omegas[k].max(acc);
        }
    }
    omega_assemble(&omegas)
}
