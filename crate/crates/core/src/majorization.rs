//! Vector-order machinery: the (weak) majorization predicate, direct sums and
//! products of distributions, Shannon entropy and the first-difference bound
//! vectors built from monotone sequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack absorbed by every prefix-sum comparison.
pub const MAJORIZATION_SLACK: f64 = 1e-9;
const NEGATIVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorKind {
    WBound,
    Omega,
    RSelector,
    Generic,
}

/// A nonnegative bound vector. Components in `[-1e-9, 0)` are clipped to 0 on
/// construction; more negative components are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVector {
    #[serde(serialize_with = "crate::numfmt::ser12_vec")]
    components: Vec<f64>,
    kind: VectorKind,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    total: f64,
}

impl MajorizationVector {
    pub fn new(components: Vec<f64>, kind: VectorKind) -> Result<Self> {
        check_nonnegative(&components)?;
        let components: Vec<f64> = components.into_iter().map(|c| c.max(0.0)).collect();
        let total = components.iter().sum();
        Ok(Self { components, kind, total })
    }

    /// R = (1, …, 1, 0, …, 0) with `ones` leading ones, padded to `len`.
    pub fn r_selector(ones: usize, len: usize) -> Self {
        let components: Vec<f64> = (0..len.max(ones)).map(|i| if i < ones { 1.0 } else { 0.0 }).collect();
        Self { total: ones as f64, components, kind: VectorKind::RSelector }
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn kind(&self) -> VectorKind {
        self.kind
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Dot product, zero-padding the shorter vector.
    pub fn dot(&self, other: &[f64]) -> f64 {
        self.components.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

fn check_nonnegative(v: &[f64]) -> Result<()> {
    match v.iter().position(|&x| x.is_nan() || x < -NEGATIVE_TOL) {
        Some(index) => Err(Error::NegativeComponent { index, value: v[index] }),
        None => Ok(()),
    }
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Prefix sums of `v` sorted nonincreasing, zero-padded to `len`.
fn sorted_prefix_sums(v: &[f64], len: usize) -> Vec<f64> {
    let s = sorted_desc(v);
    let mut acc = 0.0;
    (0..len)
        .map(|i| {
            acc += s.get(i).copied().unwrap_or(0.0);
            acc
        })
        .collect()
}

/// Smallest `(prefix of w↓) − (prefix of p↓)` over all prefix lengths.
/// Nonnegative (up to slack) exactly when `p ≺ w` in the weak sense.
pub fn majorization_margin(w: &[f64], p: &[f64]) -> Result<f64> {
    check_nonnegative(w)?;
    check_nonnegative(p)?;
    let len = w.len().max(p.len());
    let pw = sorted_prefix_sums(w, len);
    let pp = sorted_prefix_sums(p, len);
    Ok(pw.iter().zip(&pp).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min))
}

/// `p ≺ w`: every prefix sum of p↓ is at most that of w↓ (within 1e-9).
/// Equal totals are not required, and unequal lengths are zero-padded.
pub fn majorizes(w: &[f64], p: &[f64]) -> Result<bool> {
    let margin = majorization_margin(w, p)?;
    Ok(margin >= -MAJORIZATION_SLACK || margin == f64::INFINITY)
}

/// Returns `(P·Q, W↓·Q↓)` for `P ≺ W`; the first never exceeds the second
/// beyond 1e-9.
pub fn dot_sorted_bound(p: &[f64], q: &[f64], w: &[f64]) -> Result<(f64, f64)> {
    check_nonnegative(q)?;
    if !majorizes(w, p)? {
        return Err(Error::PreconditionFailed("p is not majorized by w".into()));
    }
    let lhs = p.iter().zip(q).map(|(a, b)| a * b).sum();
    let ws = sorted_desc(w);
    let qs = sorted_desc(q);
    let rhs = ws.iter().zip(&qs).map(|(a, b)| a * b).sum();
    Ok((lhs, rhs))
}

/// ⊕: concatenation in setting order.
pub fn direct_sum<V: AsRef<[f64]>>(vectors: &[V]) -> Vec<f64> {
    vectors.iter().flat_map(|v| v.as_ref().iter().copied()).collect()
}

/// ⊗: flattened outer product `p_i q_j`, row-major in `p`.
pub fn direct_product(p: &[f64], q: &[f64]) -> Vec<f64> {
    p.iter().flat_map(|&a| q.iter().map(move |&b| a * b)).collect()
}

/// −Σ p log₂ p with 0·log 0 = 0. The input need not be normalized.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    check_nonnegative(p)?;
    Ok(-p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>())
}

fn first_differences(s: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(s.len());
    let mut prev = 0.0;
    for (i, &v) in s.iter().enumerate() {
        let d = v - prev;
        if i > 0 && d < -MAJORIZATION_SLACK {
            return Err(Error::NotMonotone { index: i });
        }
        out.push(d);
        prev = v;
    }
    Ok(out)
}

/// ω = (Ω_1, Ω_2 − Ω_1, …, Ω_d − Ω_{d−1}).
pub fn omega_assemble(omegas: &[f64]) -> Result<MajorizationVector> {
    MajorizationVector::new(first_differences(omegas)?, VectorKind::Omega)
}

/// W = (s(1), s(2) − s(1), …, s(n) − s(n−1)).
pub fn w_from_s_sequence(s: &[f64]) -> Result<MajorizationVector> {
    MajorizationVector::new(first_differences(s)?, VectorKind::WBound)
}
