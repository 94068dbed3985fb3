//! Subset-norm ladders and the bounds built from them.
//!
//! Convention: `s(k)` is the maximum, over all k-element subsets of the pool of
//! POVM elements (all outcomes of all settings), of the largest eigenvalue of
//! the summed elements. `k` runs over `1..=pool`. The steering bound for `N`
//! settings is `s(N)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorization::{w_from_s_sequence, MajorizationVector};
use crate::quantum::{singular_values, ComplexMatrix, Measurement, MeasurementSet, Spectrum};

/// Largest pool that is enumerated exhaustively.
pub const POOL_LIMIT: usize = 24;
/// A later subset replaces the current best only if it beats it by more than this.
pub const TIE_TOL: f64 = 1e-12;
const RANK1_TOL: f64 = 1e-9;

pub const CONVENTION: &str =
    "s(k) = max over k-element subsets of all POVM elements of the largest eigenvalue of their sum, k = 1..pool; \
     steering bound = s(N); picks are 0-based (setting, outcome) pairs";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetSelection {
    picks: Vec<(usize, usize)>,
}

impl SubsetSelection {
    pub fn new(mut picks: Vec<(usize, usize)>) -> Result<Self> {
        picks.sort_unstable();
        if picks.is_empty() {
            return Err(Error::BadParameter("empty subset".into()));
        }
        if picks.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadParameter("duplicate (setting, outcome) pick".into()));
        }
        Ok(Self { picks })
    }

    pub fn picks(&self) -> &[(usize, usize)] {
        &self.picks
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    /// Sum of the picked elements.
    pub fn operator(&self, set: &MeasurementSet) -> Result<ComplexMatrix> {
        let mut sum = ComplexMatrix::zeros(set.dim(), set.dim());
        for &(x, a) in &self.picks {
            let m = set
                .measurements()
                .get(x)
                .ok_or_else(|| Error::BadParameter(format!("setting {x} out of range")))?;
            let e = m
                .elements()
                .get(a)
                .ok_or_else(|| Error::BadParameter(format!("outcome {a} out of range for setting {x}")))?;
            sum = &sum + e;
        }
        Ok(sum)
    }
}

/// The element pool in lexicographic (setting, outcome) order.
struct Pool<'a> {
    labels: Vec<(usize, usize)>,
    elements: Vec<&'a ComplexMatrix>,
    dim: usize,
}

impl<'a> Pool<'a> {
    fn new(set: &'a MeasurementSet) -> Result<Self> {
        let pool = set.pool_size();
        if pool > POOL_LIMIT {
            return Err(Error::PoolTooLarge { pool, limit: POOL_LIMIT });
        }
        let mut labels = Vec::with_capacity(pool);
        let mut elements = Vec::with_capacity(pool);
        for (x, m) in set.measurements().iter().enumerate() {
            for (a, e) in m.elements().iter().enumerate() {
                labels.push((x, a));
                elements.push(e);
            }
        }
        Ok(Self { labels, elements, dim: set.dim() })
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.labels.len() {
            return Err(Error::KOutOfRange { k, pool: self.labels.len() });
        }
        Ok(())
    }

    fn selection(&self, idx: &[usize]) -> SubsetSelection {
        SubsetSelection { picks: idx.iter().map(|&i| self.labels[i]).collect() }
    }
}

fn top_eigenvalue(m: &ComplexMatrix) -> f64 {
    m.max_eigenvalue().expect("a sum of Hermitian elements is Hermitian")
}

fn full_spectrum(m: &ComplexMatrix) -> Vec<f64> {
    crate::quantum::hermitian_spectrum(m)
        .expect("a sum of Hermitian elements is Hermitian")
        .values()
        .to_vec()
}

/// Depth-first enumeration of k-combinations that extend `idx`, in
/// lexicographic order, carrying the partial operator sum.
fn visit<F>(pool: &Pool, k: usize, idx: &mut Vec<usize>, partial: &ComplexMatrix, f: &mut F)
where
    F: FnMut(&[usize], &ComplexMatrix),
{
    if idx.len() == k {
        f(idx, partial);
        return;
    }
    let start = idx.last().map_or(0, |&i| i + 1);
    let remaining = k - idx.len();
    for i in start..=(pool.elements.len() - remaining) {
        let next = partial + pool.elements[i];
        idx.push(i);
        visit(pool, k, idx, &next, f);
        idx.pop();
    }
}

/// Deterministic arg-max over all k-subsets of `score(sum)`. Partitions by the
/// first pick run in parallel and are folded back in order.
fn best_subset<S>(pool: &Pool, k: usize, score: S) -> (f64, Vec<usize>)
where
    S: Fn(&ComplexMatrix) -> f64 + Sync,
{
    let n = pool.elements.len();
    let zero = ComplexMatrix::zeros(pool.dim, pool.dim);
    let partitions: Vec<(f64, Vec<usize>)> = (0..=(n - k))
        .into_par_iter()
        .map(|first| {
            let mut best = (f64::NEG_INFINITY, Vec::new());
            let mut idx = vec![first];
            let start = &zero + pool.elements[first];
            visit(pool, k, &mut idx, &start, &mut |picks, sum| {
                let v = score(sum);
                if v > best.0 + TIE_TOL {
                    best = (v, picks.to_vec());
                }
            });
            best
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for p in partitions {
        if p.0 > best.0 + TIE_TOL {
            best = p;
        }
    }
    best
}

/// `s(k)` and its lexicographically first maximizing subset.
pub fn subset_norm(set: &MeasurementSet, k: usize) -> Result<(f64, SubsetSelection)> {
    let pool = Pool::new(set)?;
    pool.check_k(k)?;
    let (value, idx) = best_subset(&pool, k, top_eigenvalue);
    let selection = pool.selection(&idx);
    if set.is_projective() {
        rank1_check(set, &selection, value)?;
    }
    Ok((value, selection))
}

/// σ_1² of the eigenvector column matrix must match the operator eigenvalue.
fn rank1_check(set: &MeasurementSet, selection: &SubsetSelection, value: f64) -> Result<()> {
    let columns: Vec<_> = selection
        .picks()
        .iter()
        .map(|&(x, a)| set.measurements()[x].require_vectors().map(|v| v[a].clone()))
        .collect::<Result<_>>()?;
    let sigma1 = singular_values(&ComplexMatrix::from_columns(&columns)?).max();
    let dev = (sigma1 * sigma1 - value).abs();
    if dev > RANK1_TOL {
        return Err(Error::PreconditionFailed(format!(
            "rank-1 cross-check failed: sigma_1^2 differs from the subset norm by {dev:e}"
        )));
    }
    Ok(())
}

/// Every subset whose value lies within `tol` of `s(k)`, in lexicographic order.
pub fn maximizing_subsets(set: &MeasurementSet, k: usize, tol: f64) -> Result<(f64, Vec<SubsetSelection>)> {
    let pool = Pool::new(set)?;
    pool.check_k(k)?;
    let mut scored = Vec::new();
    let zero = ComplexMatrix::zeros(pool.dim, pool.dim);
    visit(&pool, k, &mut Vec::new(), &zero, &mut |idx, sum| {
        scored.push((top_eigenvalue(sum), idx.to_vec()));
    });
    let max = scored.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let winners = scored
        .into_iter()
        .filter(|(v, _)| *v >= max - tol)
        .map(|(_, idx)| pool.selection(&idx))
        .collect();
    Ok((max, winners))
}

/// The full ladder with arg-max subsets.
pub fn s_ladder(set: &MeasurementSet) -> Result<Vec<(f64, SubsetSelection)>> {
    (1..=set.pool_size()).map(|k| subset_norm(set, k)).collect()
}

/// `(s(1), …, s(pool))`.
pub fn s_sequence(set: &MeasurementSet) -> Result<Vec<f64>> {
    Ok(s_ladder(set)?.into_iter().map(|(v, _)| v).collect())
}

pub fn w_vector(set: &MeasurementSet) -> Result<MajorizationVector> {
    w_from_s_sequence(&s_sequence(set)?)
}

pub fn steering_bound(bob_set: &MeasurementSet) -> Result<f64> {
    Ok(subset_norm(bob_set, bob_set.len())?.0)
}

/// `W^A · W^B`, zero-padded.
pub fn entanglement_bound(alice_set: &MeasurementSet, bob_set: &MeasurementSet) -> Result<f64> {
    let wa = w_vector(alice_set)?;
    let wb = w_vector(bob_set)?;
    Ok(entanglement_bound_from_w(&wa, &wb))
}

pub fn entanglement_bound_from_w(wa: &MajorizationVector, wb: &MajorizationVector) -> f64 {
    wa.dot(wb.components())
}

fn check_lambda(set: &MeasurementSet, lambda: &Spectrum) -> Result<()> {
    if lambda.len() != set.dim() {
        return Err(Error::BadSpectrum(format!(
            "spectrum has {} entries, measurement dimension is {}",
            lambda.len(),
            set.dim()
        )));
    }
    Spectrum::density(lambda.values().to_vec()).map(|_| ())
}

/// max over k-subsets of `λ↓ · eig↓(Σ elements)`.
pub fn spectrum_weighted_s(set: &MeasurementSet, lambda: &Spectrum, k: usize) -> Result<f64> {
    check_lambda(set, lambda)?;
    let pool = Pool::new(set)?;
    pool.check_k(k)?;
    let weights = lambda.values();
    let (value, _) = best_subset(&pool, k, |sum| {
        full_spectrum(sum).iter().zip(weights).map(|(e, l)| e * l).sum()
    });
    Ok(value)
}

/// `C_xy = max_{a,b} |⟨φ_a^x|φ_b^y⟩|`.
pub fn overlap_c(mx: &Measurement, my: &Measurement) -> Result<f64> {
    let vx = mx.require_vectors()?;
    let vy = my.require_vectors()?;
    if mx.dim() != my.dim() {
        return Err(Error::DimensionMismatch { expected: mx.dim(), found: my.dim() });
    }
    let mut best: f64 = 0.0;
    for a in vx {
        for b in vy {
            best = best.max(crate::quantum::linalg::inner(a, b).norm());
        }
    }
    Ok(best)
}

/// `1 + Σ_{i=1}^{N−1} max_x C_{x, y}` with 0-based `y = (x + N − i) mod N`.
pub fn rutkowski_bound(bob_set: &MeasurementSet) -> Result<f64> {
    let ms = bob_set.measurements();
    let n = ms.len();
    if n < 2 {
        return Err(Error::TooFewSettings { required: 2, found: n });
    }
    let mut c = vec![vec![0.0; n]; n];
    for x in 0..n {
        for y in 0..n {
            c[x][y] = overlap_c(&ms[x], &ms[y])?;
        }
    }
    let mut total = 1.0;
    for i in 1..n {
        total += (0..n).map(|x| c[x][(x + n - i) % n]).fold(0.0, f64::max);
    }
    Ok(total)
}

/// `(N / steering_bound, N / entanglement_bound)`: lower bounds on the maximal
/// quantum-to-classical violation ratios.
pub fn violation_ratios(n_settings: usize, steering_bound: f64, entanglement_bound: f64) -> Result<(f64, f64)> {
    for b in [steering_bound, entanglement_bound] {
        if b.is_nan() || b <= 0.0 {
            return Err(Error::NonPositiveBound(b));
        }
    }
    let n = n_settings as f64;
    Ok((n / steering_bound, n / entanglement_bound))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumWeighted {
    #[serde(serialize_with = "crate::numfmt::ser12_vec")]
    pub lambda: Vec<f64>,
    #[serde(serialize_with = "crate::numfmt::ser12_vec")]
    pub s_sequence_lambda: Vec<f64>,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub steering_bound_lambda: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub convention: &'static str,
    pub settings: usize,
    pub dim: usize,
    #[serde(serialize_with = "crate::numfmt::ser12_vec")]
    pub s_sequence: Vec<f64>,
    pub w_vector: MajorizationVector,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub steering_bound: f64,
    #[serde(serialize_with = "crate::numfmt::ser12_opt")]
    pub entanglement_bound: Option<f64>,
    /// Absent when the set is not projective or has a single setting.
    #[serde(serialize_with = "crate::numfmt::ser12_opt")]
    pub rutkowski_bound: Option<f64>,
    pub argmax_subsets: Vec<SubsetSelection>,
    pub spectrum_weighted: Option<SpectrumWeighted>,
}

impl BoundReport {
    /// Bounds for Bob's set; `alice_set` adds the entanglement bound and
    /// `lambda` the spectrum-weighted ladder.
    pub fn compute(bob_set: &MeasurementSet, alice_set: Option<&MeasurementSet>, lambda: Option<&Spectrum>) -> Result<Self> {
        let ladder = s_ladder(bob_set)?;
        let s_sequence: Vec<f64> = ladder.iter().map(|(v, _)| *v).collect();
        let argmax_subsets = ladder.into_iter().map(|(_, s)| s).collect();
        let w_bob = w_from_s_sequence(&s_sequence)?;
        let n = bob_set.len();
        let steering_bound = s_sequence[n - 1];
        let entanglement_bound = match alice_set {
            Some(a) => {
                if a.len() != n {
                    return Err(Error::SettingCountMismatch { left: a.len(), right: n });
                }
                Some(entanglement_bound_from_w(&w_vector(a)?, &w_bob))
            }
            None => None,
        };
        let rutkowski_bound = if bob_set.is_projective() && n >= 2 { Some(rutkowski_bound(bob_set)?) } else { None };
        let spectrum_weighted = match lambda {
            Some(l) => {
                let s_lambda = (1..=bob_set.pool_size())
                    .map(|k| spectrum_weighted_s(bob_set, l, k))
                    .collect::<Result<Vec<_>>>()?;
                Some(SpectrumWeighted {
                    lambda: l.values().to_vec(),
                    steering_bound_lambda: s_lambda[n - 1],
                    s_sequence_lambda: s_lambda,
                })
            }
            None => None,
        };
        Ok(Self {
            convention: CONVENTION,
            settings: n,
            dim: bob_set.dim(),
            s_sequence,
            w_vector: w_bob,
            steering_bound,
            entanglement_bound,
            rutkowski_bound,
            argmax_subsets,
            spectrum_weighted,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::builtin::{fig2_family, gellmann_148, pauli_zx, sigma_x, sigma_z};
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn qubit_ladder() {
        let s = s_sequence(&pauli_zx()).unwrap();
        for (a, b) in s.iter().zip([1.0, 1.0 + H, 2.0, 2.0]) {
            assert!(close(*a, b), "{s:?}");
        }
        let (v, sel) = subset_norm(&pauli_zx(), 2).unwrap();
        assert!(close(v, 1.0 + H));
        assert_eq!(sel.picks(), &[(0, 0), (1, 0)]);
    }

    #[test]
    fn qutrit_ladder() {
        let r5 = 5f64.sqrt();
        let s = s_sequence(&gellmann_148()).unwrap();
        let expected = [1.0, 2.0, (3.0 + r5) / 2.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0];
        for (a, b) in s.iter().zip(expected) {
            assert!(close(*a, b), "{s:?}");
        }
    }

    #[test]
    fn single_measurement_ladder_is_flat() {
        let set = MeasurementSet::new(vec![gellmann_148().measurements()[0].clone()]).unwrap();
        assert!(s_sequence(&set).unwrap().iter().all(|&v| close(v, 1.0)));
        let bound = entanglement_bound(&set, &set).unwrap();
        assert!(close(bound, 1.0));
    }

    #[test]
    fn k_and_pool_limits() {
        assert!(matches!(subset_norm(&pauli_zx(), 0), Err(Error::KOutOfRange { .. })));
        assert!(matches!(subset_norm(&pauli_zx(), 5), Err(Error::KOutOfRange { k: 5, pool: 4 })));
        let many = MeasurementSet::new((0..13).map(|_| sigma_z()).collect()).unwrap();
        assert!(matches!(subset_norm(&many, 1), Err(Error::PoolTooLarge { pool: 26, .. })));
    }

    #[test]
    fn steering_and_entanglement_bounds() {
        assert!(close(steering_bound(&pauli_zx()).unwrap(), 1.0 + H));
        assert!(close(steering_bound(&gellmann_148()).unwrap(), (3.0 + 5f64.sqrt()) / 2.0));
        assert!(close(steering_bound(&fig2_family(0.0)).unwrap(), 3.0));
        assert!(close(entanglement_bound(&pauli_zx(), &pauli_zx()).unwrap(), 3.0 - 2f64.sqrt()));
        assert!(close(entanglement_bound(&gellmann_148(), &gellmann_148()).unwrap(), 7.0 - 2.0 * 5f64.sqrt()));
    }

    #[test]
    fn spectrum_weighted_examples() {
        let set = pauli_zx();
        let point = Spectrum::new(vec![1.0, 0.0]).unwrap();
        assert!(close(spectrum_weighted_s(&set, &point, 2).unwrap(), 1.0 + H));
        let flat = Spectrum::new(vec![0.5, 0.5]).unwrap();
        assert!(close(spectrum_weighted_s(&set, &flat, 2).unwrap(), 1.0));
        let third = Spectrum::new(vec![1.0 / 3.0; 3]).unwrap();
        for k in 1..=9 {
            assert!(close(spectrum_weighted_s(&gellmann_148(), &third, k).unwrap(), k as f64 / 3.0));
        }
        assert!(matches!(spectrum_weighted_s(&set, &third, 1), Err(Error::BadSpectrum(_))));
    }

    #[test]
    fn overlaps() {
        assert!(close(overlap_c(&sigma_z(), &sigma_x()).unwrap(), H));
        assert!(close(overlap_c(&sigma_x(), &sigma_x()).unwrap(), 1.0));
        let f = fig2_family(0.7);
        assert!(close(overlap_c(&f.measurements()[0], &f.measurements()[1]).unwrap(), 1.0));
    }

    #[test]
    fn rutkowski_examples() {
        assert!(close(rutkowski_bound(&pauli_zx()).unwrap(), 1.0 + H));
        assert!(close(rutkowski_bound(&gellmann_148()).unwrap(), 3.0));
        for i in 0..20 {
            let r = rutkowski_bound(&fig2_family(i as f64 * 0.16)).unwrap();
            assert!((1.0..=3.0 + 1e-12).contains(&r));
        }
        let single = MeasurementSet::new(vec![sigma_z()]).unwrap();
        assert!(matches!(rutkowski_bound(&single), Err(Error::TooFewSettings { .. })));
    }

    #[test]
    fn violation_ratio_examples() {
        let (ve, vs) = violation_ratios(2, 1.0 + H, 3.0 - 2f64.sqrt()).unwrap();
        assert!((ve - 1.17157).abs() < 1e-5 && (vs - 1.26120).abs() < 1e-5);
        let r5 = 5f64.sqrt();
        let (ve, vs) = violation_ratios(3, (3.0 + r5) / 2.0, 7.0 - 2.0 * r5).unwrap();
        assert!((ve - 1.14590).abs() < 1e-5 && (vs - 1.18677).abs() < 1e-5);
        assert_eq!(violation_ratios(3, 3.0, 2.0).unwrap().0, 1.0);
        assert!(matches!(violation_ratios(2, 0.0, 1.0), Err(Error::NonPositiveBound(_))));
    }

    #[test]
    fn report_is_consistent() {
        let r = BoundReport::compute(&gellmann_148(), Some(&gellmann_148()), None).unwrap();
        assert_eq!(r.argmax_subsets.len(), 9);
        assert!(close(r.rutkowski_bound.unwrap(), 3.0));
        assert!(close(r.w_vector.total(), 3.0));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["s_sequence"][1], 2.0);
    }

    #[test]
    fn maximizing_subsets_at_n_pick_one_per_setting() {
        let (max, winners) = maximizing_subsets(&gellmann_148(), 3, 1e-9).unwrap();
        assert!(close(max, (3.0 + 5f64.sqrt()) / 2.0));
        for w in &winners {
            let settings: Vec<usize> = w.picks().iter().map(|p| p.0).collect();
            assert_eq!(settings, vec![0, 1, 2]);
        }
    }
}
