//! Functionals evaluated on quantum assemblages, local-hidden-state models and
//! separable ensembles, plus the witnesses and fine-grained bounds built on them.

mod werner;
mod witness;
mod zeta;

pub use werner::{werner_sweep, werner_thresholds, WernerPoint, WernerThresholds, BISECTION_TOL};
pub use witness::{witness, witness_with, WitnessBounds, WitnessReport, FLAG_MARGIN};
pub use zeta::{
    omega_chain, seesaw_product_max, zeta_fgur, zeta_qfgur_quantum, zeta_quantum, zeta_separable, SeesawConfig,
    StateClass, SEESAW_GAIN_TOL, SEESAW_MAX_ITERS,
};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bounds::w_vector;
use crate::error::{Error, Result};
use crate::quantum::{born_probabilities, Assemblage, DensityState, MeasurementSet};

/// Largest outcome count for which permutations are enumerated.
pub const PERMUTATION_DIM_LIMIT: usize = 7;
const DISTRIBUTION_TOL: f64 = 1e-12;

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::BadWeights(format!("{what} must be finite and nonnegative")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::BadWeights(format!("{what} sum to {total}, not 1")));
    }
    Ok(())
}

fn check_permutation_dim(d: usize) -> Result<()> {
    if d > PERMUTATION_DIM_LIMIT {
        return Err(Error::DTooLarge { dim: d, limit: PERMUTATION_DIM_LIMIT });
    }
    Ok(())
}

/// One outcome per setting together with a relabelling of outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeTuple {
    outcomes: Vec<usize>,
    permutation: Vec<usize>,
}

impl OutcomeTuple {
    pub fn new(outcomes: Vec<usize>, permutation: Vec<usize>, d: usize) -> Result<Self> {
        if let Some(&a) = outcomes.iter().find(|&&a| a >= d) {
            return Err(Error::BadParameter(format!("outcome index {a} out of range for d = {d}")));
        }
        if permutation.len() != d {
            return Err(Error::LengthMismatch { expected: d, found: permutation.len() });
        }
        let mut seen = vec![false; d];
        for &p in &permutation {
            if p >= d || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadParameter(format!("{permutation:?} is not a permutation of 0..{d}")));
            }
        }
        Ok(Self { outcomes, permutation })
    }

    /// Identity relabelling.
    pub fn identity(outcomes: Vec<usize>, d: usize) -> Result<Self> {
        Self::new(outcomes, (0..d).collect(), d)
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Bob's outcome for setting `x`.
    pub fn paired(&self, x: usize) -> usize {
        self.permutation[self.outcomes[x]]
    }
}

/// How Alice's outcome `a` is matched with Bob's outcome in `S_Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// Outcome `a` with outcome `a`.
    #[default]
    AsGiven,
    /// Best relabelling per setting (d! candidates each).
    Maximize,
}

fn check_assemblage_alignment(assemblage: &Assemblage, bob_set: &MeasurementSet) -> Result<()> {
    if assemblage.dim() != bob_set.dim() {
        return Err(Error::DimensionMismatch { expected: bob_set.dim(), found: assemblage.dim() });
    }
    if assemblage.settings() != bob_set.len() {
        return Err(Error::SettingCountMismatch { left: assemblage.settings(), right: bob_set.len() });
    }
    for (x, m) in bob_set.measurements().iter().enumerate() {
        if assemblage.outcomes(x) != m.outcome_count() {
            return Err(Error::LengthMismatch { expected: m.outcome_count(), found: assemblage.outcomes(x) });
        }
    }
    Ok(())
}

/// `Tr(Φ_x^b σ_x^a)` for every `(a, b)` of setting `x`.
fn correlation_table(assemblage: &Assemblage, bob_set: &MeasurementSet, x: usize) -> Vec<Vec<f64>> {
    let phis = bob_set.measurements()[x].elements();
    assemblage
        .setting(x)
        .iter()
        .map(|sigma| phis.iter().map(|phi| phi.trace_product(sigma).re).collect())
        .collect()
}

/// `S_Q = Σ_x Σ_a Tr(Φ_x^a σ_x^a)`, outcomes paired by index.
pub fn quantum_functional(assemblage: &Assemblage, bob_set: &MeasurementSet) -> Result<f64> {
    Ok(quantum_functional_paired(assemblage, bob_set, Pairing::AsGiven)?.0)
}

/// `S_Q` under the chosen pairing, with the per-setting permutation used
/// (`perm[a]` is Bob's outcome matched with Alice's `a`).
pub fn quantum_functional_paired(
    assemblage: &Assemblage,
    bob_set: &MeasurementSet,
    pairing: Pairing,
) -> Result<(f64, Vec<Vec<usize>>)> {
    check_assemblage_alignment(assemblage, bob_set)?;
    let mut total = 0.0;
    let mut perms = Vec::with_capacity(bob_set.len());
    for x in 0..bob_set.len() {
        let table = correlation_table(assemblage, bob_set, x);
        let d = table.len();
        match pairing {
            Pairing::AsGiven => {
                total += (0..d).map(|a| table[a][a]).sum::<f64>();
                perms.push((0..d).collect());
            }
            Pairing::Maximize => {
                check_permutation_dim(d)?;
                let mut best = (f64::NEG_INFINITY, Vec::new());
                for perm in (0..d).permutations(d) {
                    let v: f64 = perm.iter().enumerate().map(|(a, &b)| table[a][b]).sum();
                    if v > best.0 + 1e-12 {
                        best = (v, perm);
                    }
                }
                total += best.0;
                perms.push(best.1);
            }
        }
    }
    Ok((total, perms))
}

/// Local-hidden-state model: hidden states `σ_λ` with weights `p(λ)` and
/// response tables `p_λ(a|x)` indexed `[λ][x][a]`.
#[derive(Debug, Clone)]
pub struct LhsModel {
    hidden_weights: Vec<f64>,
    hidden_states: Vec<DensityState>,
    response: Vec<Vec<Vec<f64>>>,
}

impl LhsModel {
    pub fn new(hidden_weights: Vec<f64>, hidden_states: Vec<DensityState>, response: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        check_distribution(&hidden_weights, "hidden weights")?;
        if hidden_states.len() != hidden_weights.len() {
            return Err(Error::LengthMismatch { expected: hidden_weights.len(), found: hidden_states.len() });
        }
        if response.len() != hidden_weights.len() {
            return Err(Error::LengthMismatch { expected: hidden_weights.len(), found: response.len() });
        }
        if let Some(s) = hidden_states.iter().find(|s| s.dim() != hidden_states[0].dim()) {
            return Err(Error::DimensionMismatch { expected: hidden_states[0].dim(), found: s.dim() });
        }
        for table in &response {
            for row in table {
                check_distribution(row, "response probabilities")?;
            }
        }
        Ok(Self { hidden_weights, hidden_states, response })
    }

    /// Deterministic response: `strategy[x]` is the announced outcome.
    pub fn deterministic_table(strategy: &[usize], outcomes: usize) -> Vec<Vec<f64>> {
        strategy
            .iter()
            .map(|&a| (0..outcomes).map(|b| if a == b { 1.0 } else { 0.0 }).collect())
            .collect()
    }

    pub fn hidden_weights(&self) -> &[f64] {
        &self.hidden_weights
    }

    pub fn hidden_states(&self) -> &[DensityState] {
        &self.hidden_states
    }

    pub fn response(&self) -> &[Vec<Vec<f64>>] {
        &self.response
    }
}

/// `S_E = Σ_λ p(λ) Σ_x Σ_a p_λ(a|x) q_{σ_λ}(a|x)`.
pub fn lhs_functional(model: &LhsModel, bob_set: &MeasurementSet) -> Result<f64> {
    let mut total = 0.0;
    for ((w, sigma), table) in model.hidden_weights.iter().zip(&model.hidden_states).zip(&model.response) {
        if table.len() != bob_set.len() {
            return Err(Error::SettingCountMismatch { left: table.len(), right: bob_set.len() });
        }
        for (row, m) in table.iter().zip(bob_set.measurements()) {
            let q = born_probabilities(sigma, m)?;
            if row.len() != q.len() {
                return Err(Error::LengthMismatch { expected: q.len(), found: row.len() });
            }
            total += w * row.iter().zip(&q).map(|(p, q)| p * q).sum::<f64>();
        }
    }
    Ok(total)
}

/// `S_S = Σ_λ p(λ) Σ_x Σ_a p_{ρ_λ^A}(a|x) q_{ρ_λ^B}(a|x)`.
pub fn separable_functional(
    weights: &[f64],
    alice_states: &[DensityState],
    bob_states: &[DensityState],
    alice_set: &MeasurementSet,
    bob_set: &MeasurementSet,
) -> Result<f64> {
    check_distribution(weights, "ensemble weights")?;
    if alice_states.len() != weights.len() || bob_states.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            found: alice_states.len().min(bob_states.len()),
        });
    }
    if alice_set.len() != bob_set.len() {
        return Err(Error::SettingCountMismatch { left: alice_set.len(), right: bob_set.len() });
    }
    let mut total = 0.0;
    for ((w, ra), rb) in weights.iter().zip(alice_states).zip(bob_states) {
        for (ma, mb) in alice_set.measurements().iter().zip(bob_set.measurements()) {
            let p = born_probabilities(ra, ma)?;
            let q = born_probabilities(rb, mb)?;
            if p.len() != q.len() {
                return Err(Error::LengthMismatch { expected: p.len(), found: q.len() });
            }
            total += w * p.iter().zip(&q).map(|(a, b)| a * b).sum::<f64>();
        }
    }
    Ok(total)
}

/// Coefficients `a^(x)` per setting and observable eigenvalues `b` per outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearInequalitySpec {
    pub coefficients: Vec<f64>,
    pub outcome_values: Vec<f64>,
}

impl LinearInequalitySpec {
    pub fn new(coefficients: Vec<f64>, outcome_values: Vec<f64>) -> Result<Self> {
        if coefficients.iter().chain(&outcome_values).any(|v| !v.is_finite()) {
            return Err(Error::BadParameter("linear inequality entries must be finite".into()));
        }
        if coefficients.iter().all(|&c| c == 0.0) {
            return Err(Error::BadParameter("at least one coefficient must be nonzero".into()));
        }
        Ok(Self { coefficients, outcome_values })
    }
}

/// `C·W^B / N` with `C` the `N·d` products `a^(x) b` sorted nonincreasing.
pub fn linear_steering_bound(spec: &LinearInequalitySpec, bob_set: &MeasurementSet) -> Result<f64> {
    if !bob_set.is_projective() {
        return Err(Error::NotProjective("linear steering bound needs projective measurements".into()));
    }
    let n = bob_set.len();
    if spec.coefficients.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: spec.coefficients.len() });
    }
    for m in bob_set.measurements() {
        if spec.outcome_values.len() != m.outcome_count() {
            return Err(Error::LengthMismatch { expected: m.outcome_count(), found: spec.outcome_values.len() });
        }
    }
    let mut c: Vec<f64> = spec
        .coefficients
        .iter()
        .flat_map(|&a| spec.outcome_values.iter().map(move |&b| a * b))
        .collect();
    c.sort_by(|a, b| b.total_cmp(a));
    let w = w_vector(bob_set)?;
    Ok(w.dot(&c) / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::builtin::{gellmann_148, pauli_zx, pauli_zx_anti, werner_sets};
    use crate::quantum::{c64, conditional_assemblage, werner_state, WernerFamily};
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn werner_quantum_functional() {
        for p in [0.0, 0.3, 0.8, 1.0] {
            let (a, b) = werner_sets(WernerFamily::Qubit);
            let asm = conditional_assemblage(&werner_state(WernerFamily::Qubit, p).unwrap(), &a).unwrap();
            assert!(close(quantum_functional(&asm, &b).unwrap(), 1.0 + p));

            let (a, b) = werner_sets(WernerFamily::Qutrit);
            let asm = conditional_assemblage(&werner_state(WernerFamily::Qutrit, p).unwrap(), &a).unwrap();
            assert!(close(quantum_functional(&asm, &b).unwrap(), 1.0 + 2.0 * p));
        }
    }

    #[test]
    fn maximized_pairing_recovers_anti_alignment() {
        let singlet = werner_state(WernerFamily::Qubit, 1.0).unwrap();
        let asm = conditional_assemblage(&singlet, &pauli_zx()).unwrap();
        assert!(close(quantum_functional(&asm, &pauli_zx()).unwrap(), 0.0));
        let (v, perms) = quantum_functional_paired(&asm, &pauli_zx(), Pairing::Maximize).unwrap();
        assert!(close(v, 2.0));
        assert_eq!(perms, vec![vec![1, 0], vec![1, 0]]);
        assert!(close(quantum_functional(&asm, &pauli_zx_anti()).unwrap(), 2.0));
    }

    #[test]
    fn mutually_unbiased_bases_reach_n() {
        // σ_z, σ_x, σ_y with |ψ+⟩: y needs the conjugate pairing, found by maximization.
        let s = H;
        let y = crate::quantum::Measurement::projective(
            "sigma_y",
            vec![vec![c64(s, 0.0), c64(0.0, s)], vec![c64(s, 0.0), c64(0.0, -s)]],
        )
        .unwrap();
        let mut ms = pauli_zx().measurements().to_vec();
        ms.push(y);
        let set = MeasurementSet::new(ms).unwrap();
        let phi_plus = DensityState::pure(&[c64(H, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(H, 0.0)], "phi+")
            .unwrap()
            .with_split(2, 2)
            .unwrap();
        let asm = conditional_assemblage(&phi_plus, &set).unwrap();
        let (v, _) = quantum_functional_paired(&asm, &set, Pairing::Maximize).unwrap();
        assert!(close(v, 3.0));
    }

    #[test]
    fn lhs_examples() {
        let zero = DensityState::pure(&[c64(1.0, 0.0), c64(0.0, 0.0)], "0").unwrap();
        let model = LhsModel::new(vec![1.0], vec![zero.clone()], vec![LhsModel::deterministic_table(&[0, 0], 2)]).unwrap();
        assert!(close(lhs_functional(&model, &pauli_zx()).unwrap(), 1.5));
        let uniform = LhsModel::new(vec![1.0], vec![zero], vec![vec![vec![0.5, 0.5]; 2]]).unwrap();
        assert!(close(lhs_functional(&uniform, &pauli_zx()).unwrap(), 1.0));
        assert!(LhsModel::new(vec![0.5], vec![], vec![]).is_err());
    }

    #[test]
    fn separable_examples() {
        let zero = [DensityState::pure(&[c64(1.0, 0.0), c64(0.0, 0.0)], "0").unwrap()];
        let v = separable_functional(&[1.0], &zero, &zero, &pauli_zx(), &pauli_zx()).unwrap();
        assert!(close(v, 1.5));
        let mixed = [DensityState::maximally_mixed(3)];
        let set = gellmann_148();
        let v = separable_functional(&[1.0], &mixed, &mixed, &set, &set).unwrap();
        assert!(close(v, 1.0));
    }

    #[test]
    fn linear_bound_examples() {
        let set = pauli_zx();
        let spec = LinearInequalitySpec::new(vec![1.0, 1.0], vec![1.0, -1.0]).unwrap();
        assert!(close(linear_steering_bound(&spec, &set).unwrap(), H));
        // C sorted = (1, 0, 0, −1)
        let spec = LinearInequalitySpec::new(vec![1.0, 0.0], vec![1.0, -1.0]).unwrap();
        assert!(close(linear_steering_bound(&spec, &set).unwrap(), 0.5));
        let spec = LinearInequalitySpec::new(vec![1.0, 1.0], vec![0.3, 0.3]).unwrap();
        assert!(close(linear_steering_bound(&spec, &set).unwrap(), 0.3));
        let spec = LinearInequalitySpec::new(vec![1.0], vec![1.0, -1.0]).unwrap();
        assert!(matches!(linear_steering_bound(&spec, &set), Err(Error::LengthMismatch { .. })));
        assert!(LinearInequalitySpec::new(vec![0.0, 0.0], vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn outcome_tuple_validation() {
        assert!(OutcomeTuple::new(vec![0, 1], vec![1, 0], 2).is_ok());
        assert!(OutcomeTuple::new(vec![0, 2], vec![1, 0], 2).is_err());
        assert!(OutcomeTuple::new(vec![0], vec![1, 1], 2).is_err());
        assert_eq!(OutcomeTuple::new(vec![0, 1], vec![1, 0], 2).unwrap().paired(1), 0);
    }
}
