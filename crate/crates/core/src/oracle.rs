//! Independent brute-force and sampling checks. Every routine here recomputes
//! its quantity by a different path than the main modules and is fully
//! determined by its seed.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{entanglement_bound, maximizing_subsets, steering_bound, w_vector};
use crate::error::{Error, Result};
use crate::functionals::{
    lhs_functional, separable_functional, zeta_qfgur_quantum, zeta_separable, LhsModel, OutcomeTuple, SeesawConfig,
};
use crate::majorization::{direct_sum, dot_sorted_bound, majorization_margin};
use crate::quantum::builtin::{gellmann_148, pauli_zx};
use crate::quantum::state::{random_pure_vector, random_state_with};
use crate::quantum::{c64, ComplexMatrix, DensityState, MeasurementSet, Purity};

pub const BRUTE_POOL_LIMIT: usize = 18;
pub const GRID_LIMIT: usize = 400;
pub const STRATEGY_LIMIT: u128 = 100_000;
/// Allowed shortfall of the seesaw against the Bloch grid.
pub const GRID_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub samples: usize,
    /// Azimuthal points per qubit; the polar direction gets half as many.
    pub grid_points: usize,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { seed: 42, samples: 1000, grid_points: 200, tolerance: 1e-9 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::BadParameter("samples must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::BadParameter("tolerance must be positive".into()));
        }
        if self.grid_points > GRID_LIMIT {
            return Err(Error::GridTooLarge { points: self.grid_points, limit: GRID_LIMIT });
        }
        Ok(())
    }
}

/// Plain bitmask loop over every subset of size `k`. Projective sets use the
/// Gram matrix of the picked vectors, POVMs the summed operator.
pub fn brute_subset_norm(set: &MeasurementSet, k: usize) -> Result<f64> {
    let pool = set.pool_size();
    if pool > BRUTE_POOL_LIMIT {
        return Err(Error::PoolTooLarge { pool, limit: BRUTE_POOL_LIMIT });
    }
    if k == 0 || k > pool {
        return Err(Error::KOutOfRange { k, pool });
    }
    let elements: Vec<&ComplexMatrix> = set.measurements().iter().flat_map(|m| m.elements()).collect();
    let vectors: Option<Vec<&Vec<num_complex::Complex64>>> = set
        .measurements()
        .iter()
        .map(|m| m.vectors())
        .collect::<Option<Vec<_>>>()
        .map(|vs| vs.into_iter().flatten().collect());
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1u32 << pool) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let picked: Vec<usize> = (0..pool).filter(|i| mask & (1 << i) != 0).collect();
        let value = match &vectors {
            Some(vs) => {
                let mut entries = Vec::with_capacity(k * k);
                for &i in &picked {
                    for &j in &picked {
                        entries.push(crate::quantum::linalg::inner(vs[i], vs[j]));
                    }
                }
                ComplexMatrix::new(k, k, entries)?.max_eigenvalue()?
            }
            None => {
                let d = set.dim();
                let sum = picked.iter().fold(ComplexMatrix::zeros(d, d), |acc, &i| &acc + elements[i]);
                sum.max_eigenvalue()?
            }
        };
        best = best.max(value);
    }
    Ok(best)
}

/// Bloch-sphere grid: `grid_points` azimuths × `grid_points / 2` polar
/// angles, both poles included.
pub fn bloch_grid(grid_points: usize) -> Vec<[num_complex::Complex64; 2]> {
    let n_phi = grid_points.max(1);
    let n_theta = (grid_points / 2).max(2);
    let mut out = Vec::with_capacity(n_phi * n_theta);
    for i in 0..n_theta {
        let theta = PI * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            let (s, c) = (theta / 2.0).sin_cos();
            out.push([c64(c, 0.0), c64(s * phi.cos(), s * phi.sin())]);
        }
    }
    out
}

/// Grid maximum of `Σ_x p(x) ⟨α|Π_x^{a(x)}|α⟩⟨β|Φ_x^{π(a(x))}|β⟩` over pure
/// qubit product states.
pub fn grid_zeta_separable(
    alice_set: &MeasurementSet,
    bob_set: &MeasurementSet,
    weights: &[f64],
    tuple: &OutcomeTuple,
    grid_points: usize,
) -> Result<f64> {
    for set in [alice_set, bob_set] {
        if set.dim() != 2 {
            return Err(Error::DimTooLarge(set.dim()));
        }
    }
    if grid_points > GRID_LIMIT {
        return Err(Error::GridTooLarge { points: grid_points, limit: GRID_LIMIT });
    }
    if alice_set.len() != bob_set.len() || weights.len() != alice_set.len() || tuple.outcomes().len() != alice_set.len() {
        return Err(Error::SettingCountMismatch { left: alice_set.len(), right: bob_set.len() });
    }
    let grid = bloch_grid(grid_points);
    let n = alice_set.len();
    let side = |set: &MeasurementSet, pick: &dyn Fn(usize) -> usize| -> Result<Vec<Vec<f64>>> {
        let ops = (0..n)
            .map(|x| {
                set.measurements()[x]
                    .elements()
                    .get(pick(x))
                    .ok_or_else(|| Error::BadParameter(format!("outcome out of range for setting {x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(grid.iter().map(|v| ops.iter().map(|op| op.expectation(v)).collect()).collect())
    };
    let a_side = side(alice_set, &|x| tuple.outcomes()[x])?;
    let b_side: Vec<Vec<f64>> = side(bob_set, &|x| tuple.paired(x))?
        .into_iter()
        .map(|row| row.iter().zip(weights).map(|(v, w)| v * w).collect())
        .collect();
    Ok(a_side
        .par_iter()
        .map(|a| {
            b_side
                .iter()
                .map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max))
}

/// Best `S_E` over every deterministic response table, each supplied hidden
/// state taken alone with weight 1.
pub fn enumerate_lhs_extremal(bob_set: &MeasurementSet, hidden_states: &[DensityState]) -> Result<f64> {
    let counts: Vec<usize> = bob_set.measurements().iter().map(|m| m.outcome_count()).collect();
    let total: u128 = counts.iter().map(|&c| c as u128).product();
    if total > STRATEGY_LIMIT {
        return Err(Error::TooManyStrategies { count: total, limit: STRATEGY_LIMIT });
    }
    let mut best = f64::NEG_INFINITY;
    for sigma in hidden_states {
        for strategy in counts.iter().map(|&c| 0..c).multi_cartesian_product() {
            let table: Vec<Vec<f64>> = strategy
                .iter()
                .zip(&counts)
                .map(|(&a, &c)| (0..c).map(|b| if a == b { 1.0 } else { 0.0 }).collect())
                .collect();
            let model = LhsModel::new(vec![1.0], vec![sigma.clone()], vec![table])?;
            best = best.max(lhs_functional(&model, bob_set)?);
        }
    }
    Ok(best)
}

/// Top eigenvectors of every subset attaining `s(N)`: the hidden states that
/// saturate the steering bound.
pub fn aligned_hidden_states(bob_set: &MeasurementSet, tol: f64) -> Result<Vec<DensityState>> {
    let (_, winners) = maximizing_subsets(bob_set, bob_set.len(), tol)?;
    winners
        .iter()
        .map(|w| {
            let eig = w.operator(bob_set)?.hermitian_eigen()?;
            DensityState::pure(&eig.vector(0), "aligned")
        })
        .collect()
}

/// `S_Q = Σ_x Σ_a Tr[(Π_x^a ⊗ Φ_x^a) ρ_AB]` on the joint space.
pub fn joint_operator_sq(rho_ab: &DensityState, alice_set: &MeasurementSet, bob_set: &MeasurementSet) -> Result<f64> {
    if alice_set.len() != bob_set.len() {
        return Err(Error::SettingCountMismatch { left: alice_set.len(), right: bob_set.len() });
    }
    let n = alice_set.dim() * bob_set.dim();
    if rho_ab.dim() != n {
        return Err(Error::BadFactorization { d_a: alice_set.dim(), d_b: bob_set.dim(), total: rho_ab.dim() });
    }
    let mut op = ComplexMatrix::zeros(n, n);
    for (ma, mb) in alice_set.measurements().iter().zip(bob_set.measurements()) {
        if ma.outcome_count() != mb.outcome_count() {
            return Err(Error::LengthMismatch { expected: ma.outcome_count(), found: mb.outcome_count() });
        }
        for (pa, pb) in ma.elements().iter().zip(mb.elements()) {
            op = &op + &pa.kron(pb);
        }
    }
    Ok(op.trace_product(rho_ab.matrix()).re)
}

/// Flat Dirichlet sample.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

fn random_purity(rng: &mut ChaCha8Rng) -> Purity {
    if rng.random_bool(0.5) {
        Purity::Pure
    } else {
        Purity::Mixed
    }
}

/// Random LHS model: 1–5 hidden states, each with either a deterministic or a
/// stochastic response table.
pub fn random_lhs_model(rng: &mut ChaCha8Rng, bob_set: &MeasurementSet) -> Result<LhsModel> {
    let n_hidden = rng.random_range(1..=5);
    let weights = random_distribution(rng, n_hidden);
    let mut states = Vec::with_capacity(n_hidden);
    let mut tables = Vec::with_capacity(n_hidden);
    for _ in 0..n_hidden {
        let purity = random_purity(rng);
        states.push(random_state_with(rng, bob_set.dim(), purity));
        let deterministic = rng.random_bool(0.5);
        let table = bob_set
            .measurements()
            .iter()
            .map(|m| {
                let d = m.outcome_count();
                if deterministic {
                    let a = rng.random_range(0..d);
                    (0..d).map(|b| if a == b { 1.0 } else { 0.0 }).collect()
                } else {
                    random_distribution(rng, d)
                }
            })
            .collect();
        tables.push(table);
    }
    LhsModel::new(weights, states, tables)
}

/// Random separable ensemble of 1–5 product states.
pub fn random_separable_ensemble(
    rng: &mut ChaCha8Rng,
    d_a: usize,
    d_b: usize,
) -> (Vec<f64>, Vec<DensityState>, Vec<DensityState>) {
    let n = rng.random_range(1..=5);
    let weights = random_distribution(rng, n);
    let mut alice = Vec::with_capacity(n);
    let mut bob = Vec::with_capacity(n);
    for _ in 0..n {
        let pa = random_purity(rng);
        alice.push(random_state_with(rng, d_a, pa));
        let pb = random_purity(rng);
        bob.push(random_state_with(rng, d_b, pb));
    }
    (weights, alice, bob)
}

/// `(p, q, w)` with `p ≺ w`: `p` is a random doubly stochastic image of `w`,
/// scaled into the weak order.
pub fn random_majorized_triple(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let mixture = random_distribution(rng, 3);
    let mut p = vec![0.0; n];
    for c in mixture {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        for (i, &j) in perm.iter().enumerate() {
            p[i] += c * w[j];
        }
    }
    let scale: f64 = rng.random();
    let p = p.into_iter().map(|v| v * scale).collect();
    let q = (0..n).map(|_| rng.random::<f64>()).collect();
    (p, q, w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub samples: usize,
    pub violations: usize,
    /// Smallest `bound − value` seen; negative beyond the tolerance is a violation.
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub worst_margin: f64,
    pub seed: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct Tally {
    samples: usize,
    violations: usize,
    worst: f64,
    tolerance: f64,
}

impl Tally {
    fn new(tolerance: f64) -> Self {
        Self { samples: 0, violations: 0, worst: f64::INFINITY, tolerance }
    }

    fn record(&mut self, margin: f64) {
        self.record_with(margin, self.tolerance);
    }

    fn record_with(&mut self, margin: f64, tolerance: f64) {
        self.samples += 1;
        self.worst = self.worst.min(margin);
        if margin < -tolerance || margin.is_nan() {
            self.violations += 1;
        }
    }

    fn finish(self, suite: &str, seed: u64) -> VerificationReport {
        VerificationReport {
            suite: suite.into(),
            samples: self.samples,
            violations: self.violations,
            worst_margin: self.worst,
            seed,
        }
    }
}

/// Born vectors of `samples` random states, concatenated over settings, are
/// weakly majorized by `W` of the set.
pub fn sample_majorization_suite(config: &OracleConfig, set: &MeasurementSet) -> Result<VerificationReport> {
    config.validate()?;
    let w = w_vector(set)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tally = Tally::new(config.tolerance);
    for _ in 0..config.samples {
        let purity = random_purity(&mut rng);
        let rho = random_state_with(&mut rng, set.dim(), purity);
        let p = direct_sum(&set.born_vectors(&rho)?);
        tally.record(majorization_margin(w.components(), &p)?);
    }
    Ok(tally.finish("majorization", config.seed))
}

/// Bound overrides for the named builtin sets, read by the steering and
/// entanglement suites in place of the computed bounds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundOverrides {
    #[serde(default)]
    pub steering: BTreeMap<String, f64>,
    #[serde(default)]
    pub entanglement: BTreeMap<String, f64>,
}

fn suite_sets() -> Vec<(&'static str, MeasurementSet)> {
    vec![("pauli-zx", pauli_zx()), ("gellmann-148", gellmann_148())]
}

fn check_override_names(map: &BTreeMap<String, f64>) -> Result<()> {
    let known: Vec<&str> = suite_sets().iter().map(|(n, _)| *n).collect();
    match map.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(Error::BadParameter(format!("bound override for unknown set '{k}'"))),
        None => Ok(()),
    }
}

/// Majorization by `W` on both builtin sets, and `P·Q ≤ W↓·Q↓` on random
/// majorized triples.
pub fn run_majorization_suite(config: &OracleConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut tally = Tally::new(config.tolerance);
    for (i, (_, set)) in suite_sets().into_iter().enumerate() {
        let sub = OracleConfig { seed: config.seed.wrapping_add(i as u64), ..*config };
        let r = sample_majorization_suite(&sub, &set)?;
        tally.samples += r.samples;
        tally.violations += r.violations;
        tally.worst = tally.worst.min(r.worst_margin);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xA5A5);
    for _ in 0..config.samples {
        let n = rng.random_range(1..=8);
        let (p, q, w) = random_majorized_triple(&mut rng, n);
        let (lhs, rhs) = dot_sorted_bound(&p, &q, &w)?;
        tally.record(rhs - lhs);
    }
    Ok(tally.finish("majorization", config.seed))
}

/// Random LHS models never exceed the steering bound.
pub fn run_steering_suite(config: &OracleConfig, overrides: &BoundOverrides) -> Result<VerificationReport> {
    config.validate()?;
    check_override_names(&overrides.steering)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tally = Tally::new(config.tolerance);
    for (name, set) in suite_sets() {
        let bound = match overrides.steering.get(name) {
            Some(&b) => b,
            None => steering_bound(&set)?,
        };
        for _ in 0..config.samples {
            let model = random_lhs_model(&mut rng, &set)?;
            tally.record(bound - lhs_functional(&model, &set)?);
        }
        let hidden: Vec<DensityState> = (0..20)
            .map(|_| {
                let purity = random_purity(&mut rng);
                random_state_with(&mut rng, set.dim(), purity)
            })
            .collect();
        tally.record(bound - enumerate_lhs_extremal(&set, &hidden)?);
    }
    Ok(tally.finish("steering", config.seed))
}

/// Random separable ensembles never exceed the entanglement bound.
pub fn run_entanglement_suite(config: &OracleConfig, overrides: &BoundOverrides) -> Result<VerificationReport> {
    config.validate()?;
    check_override_names(&overrides.entanglement)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tally = Tally::new(config.tolerance);
    for (name, set) in suite_sets() {
        let bound = match overrides.entanglement.get(name) {
            Some(&b) => b,
            None => entanglement_bound(&set, &set)?,
        };
        for _ in 0..config.samples {
            let (w, a, b) = random_separable_ensemble(&mut rng, set.dim(), set.dim());
            tally.record(bound - separable_functional(&w, &a, &b, &set, &set)?);
        }
    }
    Ok(tally.finish("entanglement", config.seed))
}

/// Random outcome tuple with a random relabelling on `set`.
pub fn random_outcome_tuple(rng: &mut ChaCha8Rng, set: &MeasurementSet) -> Result<OutcomeTuple> {
    let d = set.max_outcomes();
    let outcomes = set.measurements().iter().map(|m| rng.random_range(0..m.outcome_count())).collect();
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    OutcomeTuple::new(outcomes, perm, d)
}

/// Seesaw ≤ exact quantum ζ on both builtin sets; on qubit instances also
/// grid ≤ exact and seesaw ≥ grid − [`GRID_SLACK`].
pub fn run_zeta_suite(config: &OracleConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tally = Tally::new(config.tolerance);
    let sets = suite_sets();
    let grid_instances = config.samples.min(50);
    for i in 0..config.samples {
        let (_, set) = &sets[i % sets.len()];
        let weights = random_distribution(&mut rng, set.len());
        let tuple = random_outcome_tuple(&mut rng, set)?;
        let seesaw = SeesawConfig { restarts: 10, seed: rng.random() };
        let sep = zeta_separable(set, set, &weights, &tuple, seesaw)?;
        let quantum = zeta_qfgur_quantum(set, set, &weights, &tuple)?;
        tally.record(quantum - sep);
        if set.dim() == 2 && i / sets.len() < grid_instances {
            let grid = grid_zeta_separable(set, set, &weights, &tuple, config.grid_points)?;
            tally.record(quantum - grid);
            tally.record_with(sep - grid, GRID_SLACK);
        }
    }
    Ok(tally.finish("zeta", config.seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Majorization,
    Steering,
    Entanglement,
    Zeta,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "majorization" => Ok(Suite::Majorization),
            "steering" => Ok(Suite::Steering),
            "entanglement" => Ok(Suite::Entanglement),
            "zeta" => Ok(Suite::Zeta),
            "all" => Ok(Suite::All),
            other => Err(Error::BadParameter(format!("unknown suite '{other}'"))),
        }
    }
}

pub fn run_suite(suite: Suite, config: &OracleConfig, overrides: &BoundOverrides) -> Result<Vec<VerificationReport>> {
    Ok(match suite {
        Suite::Majorization => vec![run_majorization_suite(config)?],
        Suite::Steering => vec![run_steering_suite(config, overrides)?],
        Suite::Entanglement => vec![run_entanglement_suite(config, overrides)?],
        Suite::Zeta => vec![run_zeta_suite(config)?],
        Suite::All => vec![
            run_majorization_suite(config)?,
            run_steering_suite(config, overrides)?,
            run_entanglement_suite(config, overrides)?,
            run_zeta_suite(config)?,
        ],
    })
}

/// Random projective set: `n` bases of `C^d`, each the eigenbasis of a random
/// Hermitian matrix.
pub fn random_projective_set(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Result<MeasurementSet> {
    let measurements = (0..n)
        .map(|x| {
            let g: Vec<_> = (0..d).map(|_| random_pure_vector(rng, d)).collect();
            let h = g.iter().fold(ComplexMatrix::zeros(d, d), |acc, v| &acc + &ComplexMatrix::outer(v).scale(rng.random::<f64>()));
            let eig = h.hermitian_eigen()?;
            crate::quantum::Measurement::projective(format!("random{x}"), (0..d).map(|i| eig.vector(i)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    MeasurementSet::new(measurements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::subset_norm;
    use crate::quantum::builtin::{fig2_family, sigma_z};
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    #[test]
    fn brute_matches_examples() {
        assert!((brute_subset_norm(&pauli_zx(), 2).unwrap() - (1.0 + H)).abs() < 1e-10);
        assert!((brute_subset_norm(&gellmann_148(), 3).unwrap() - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
        assert!((brute_subset_norm(&fig2_family(0.4), 9).unwrap() - 3.0).abs() < 1e-10);
        let many = MeasurementSet::new((0..10).map(|_| sigma_z()).collect()).unwrap();
        assert!(matches!(brute_subset_norm(&many, 1), Err(Error::PoolTooLarge { pool: 20, .. })));
    }

    #[test]
    fn brute_matches_main_path_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let set = random_projective_set(&mut rng, 3, 2).unwrap();
            for k in 1..=6 {
                let a = brute_subset_norm(&set, k).unwrap();
                let b = subset_norm(&set, k).unwrap().0;
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn grid_is_below_quantum() {
        let set = pauli_zx();
        let t = OutcomeTuple::identity(vec![0, 0], 2).unwrap();
        let g = grid_zeta_separable(&set, &set, &[0.5, 0.5], &t, 60).unwrap();
        assert!(g <= 0.75 + 1e-9);
        let single = MeasurementSet::new(vec![sigma_z()]).unwrap();
        let t = OutcomeTuple::identity(vec![0], 2).unwrap();
        assert!((grid_zeta_separable(&single, &single, &[1.0], &t, 20).unwrap() - 1.0).abs() < 1e-12);
        let q = gellmann_148();
        let t = OutcomeTuple::identity(vec![0, 0, 0], 3).unwrap();
        assert!(matches!(grid_zeta_separable(&q, &q, &[1.0 / 3.0; 3], &t, 10), Err(Error::DimTooLarge(3))));
    }

    #[test]
    fn lhs_enumeration_saturates_the_bound() {
        for set in [pauli_zx(), gellmann_148()] {
            let hidden = aligned_hidden_states(&set, 1e-9).unwrap();
            let best = enumerate_lhs_extremal(&set, &hidden).unwrap();
            let bound = steering_bound(&set).unwrap();
            assert!(best <= bound + 1e-9);
            assert!(best >= bound - 1e-6);
        }
        let v = enumerate_lhs_extremal(&pauli_zx(), &[DensityState::maximally_mixed(2)]).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn suites_pass_at_small_sample_counts() {
        let config = OracleConfig { samples: 40, grid_points: 40, ..Default::default() };
        for r in run_suite(Suite::All, &config, &BoundOverrides::default()).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn deflated_bound_is_caught() {
        let config = OracleConfig { samples: 50, ..Default::default() };
        let overrides = BoundOverrides { steering: [("pauli-zx".to_string(), 1.0)].into(), ..Default::default() };
        let r = run_steering_suite(&config, &overrides).unwrap();
        assert!(r.violations > 0);
    }

    #[test]
    fn joint_operator_route_agrees() {
        let (a, b) = crate::quantum::builtin::werner_sets(crate::quantum::WernerFamily::Qutrit);
        let rho = crate::quantum::werner_state(crate::quantum::WernerFamily::Qutrit, 0.37).unwrap();
        assert!((joint_operator_sq(&rho, &a, &b).unwrap() - (1.0 + 2.0 * 0.37)).abs() < 1e-9);
    }
}
