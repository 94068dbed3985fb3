use serde::Serialize;

use super::{quantum_functional_paired, Pairing};
use crate::bounds::{entanglement_bound, rutkowski_bound, steering_bound};
use crate::error::{Error, Result};
use crate::quantum::{conditional_assemblage, DensityState, MeasurementSet};

/// A flag is raised only when `S_Q` exceeds its bound by more than this.
pub const FLAG_MARGIN: f64 = 1e-9;

/// Bounds that depend only on the measurement sets, computed once per sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessBounds {
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub steering: f64,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub entanglement: f64,
    #[serde(serialize_with = "crate::numfmt::ser12_opt")]
    pub rutkowski: Option<f64>,
}

impl WitnessBounds {
    pub fn compute(alice_set: &MeasurementSet, bob_set: &MeasurementSet) -> Result<Self> {
        if alice_set.len() != bob_set.len() {
            return Err(Error::SettingCountMismatch { left: alice_set.len(), right: bob_set.len() });
        }
        let rutkowski = if bob_set.is_projective() && bob_set.len() >= 2 { Some(rutkowski_bound(bob_set)?) } else { None };
        Ok(Self {
            steering: steering_bound(bob_set)?,
            entanglement: entanglement_bound(alice_set, bob_set)?,
            rutkowski,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub s_q: f64,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub steering_bound: f64,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub entanglement_bound: f64,
    #[serde(serialize_with = "crate::numfmt::ser12_opt")]
    pub rutkowski_bound: Option<f64>,
    pub steerable: bool,
    pub entangled: bool,
    /// Flag from the overlap bound alone.
    pub steerable_rutkowski: Option<bool>,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub steering_margin: f64,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub entanglement_margin: f64,
    #[serde(serialize_with = "crate::numfmt::ser12_opt")]
    pub rutkowski_margin: Option<f64>,
    pub pairing: Pairing,
    /// `permutations[x][a]`: Bob's outcome matched with Alice's outcome `a`.
    pub permutations: Vec<Vec<usize>>,
}

pub fn witness(rho_ab: &DensityState, alice_set: &MeasurementSet, bob_set: &MeasurementSet, pairing: Pairing) -> Result<WitnessReport> {
    let bounds = WitnessBounds::compute(alice_set, bob_set)?;
    witness_with(rho_ab, alice_set, bob_set, &bounds, pairing)
}

pub fn witness_with(
    rho_ab: &DensityState,
    alice_set: &MeasurementSet,
    bob_set: &MeasurementSet,
    bounds: &WitnessBounds,
    pairing: Pairing,
) -> Result<WitnessReport> {
    let (d_a, d_b) = rho_ab.bipartite_split()?;
    if d_a != alice_set.dim() || d_b != bob_set.dim() {
        return Err(Error::BadFactorization { d_a: alice_set.dim(), d_b: bob_set.dim(), total: rho_ab.dim() });
    }
    let assemblage = conditional_assemblage(rho_ab, alice_set)?;
    let (s_q, permutations) = quantum_functional_paired(&assemblage, bob_set, pairing)?;
    let steering_margin = s_q - bounds.steering;
    let entanglement_margin = s_q - bounds.entanglement;
    let rutkowski_margin = bounds.rutkowski.map(|r| s_q - r);
    Ok(WitnessReport {
        s_q,
        steering_bound: bounds.steering,
        entanglement_bound: bounds.entanglement,
        rutkowski_bound: bounds.rutkowski,
        steerable: steering_margin > FLAG_MARGIN,
        entangled: entanglement_margin > FLAG_MARGIN,
        steerable_rutkowski: rutkowski_margin.map(|m| m > FLAG_MARGIN),
        steering_margin,
        entanglement_margin,
        rutkowski_margin,
        pairing,
        permutations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::builtin::werner_sets;
    use crate::quantum::{werner_state, WernerFamily};

    fn qubit(p: f64) -> WitnessReport {
        let (a, b) = werner_sets(WernerFamily::Qubit);
        witness(&werner_state(WernerFamily::Qubit, p).unwrap(), &a, &b, Pairing::AsGiven).unwrap()
    }

    #[test]
    fn qubit_werner_flags() {
        let r = qubit(0.8);
        assert!(r.steerable && r.entangled);
        let r = qubit(0.6);
        assert!(!r.steerable && r.entangled);
        let r = qubit(0.5);
        assert!(!r.steerable && !r.entangled);
    }

    #[test]
    fn rejects_mismatched_split() {
        let (a, b) = werner_sets(WernerFamily::Qutrit);
        let rho = werner_state(WernerFamily::Qubit, 0.5).unwrap();
        assert!(witness(&rho, &a, &b, Pairing::AsGiven).is_err());
    }
}
