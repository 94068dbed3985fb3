//! Acceptance criteria 1–10. Every criterion prints one PASS/FAIL line; the
//! test fails if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steerbound::bounds::{entanglement_bound, rutkowski_bound, s_sequence, steering_bound, subset_norm};
use steerbound::functionals::{
    lhs_functional, linear_steering_bound, quantum_functional, separable_functional, werner_thresholds,
    zeta_qfgur_quantum, zeta_separable, LinearInequalitySpec, SeesawConfig,
};
use steerbound::majorization::dot_sorted_bound;
use steerbound::numfmt::sig7_text;
use steerbound::oracle::{
    aligned_hidden_states, brute_subset_norm, enumerate_lhs_extremal, grid_zeta_separable, random_distribution,
    random_lhs_model, random_majorized_triple, random_outcome_tuple, random_projective_set,
    random_separable_ensemble, sample_majorization_suite, OracleConfig,
};
use steerbound::quantum::builtin::{fig2_family, gellmann_148, pauli_zx, werner_sets};
use steerbound::quantum::state::random_state_with;
use steerbound::quantum::{conditional_assemblage, werner_state, Purity, WernerFamily};

const SEQ_TOL: f64 = 1e-9;
const THRESHOLD_TOL: f64 = 1e-6;
const INEQ_TOL: f64 = 1e-9;
const SATURATION_TOL: f64 = 1e-6;
const ORACLE_TOL: f64 = 1e-10;
const GRID_SLACK: f64 = 1e-3;
const GRID_POINTS: usize = 100;
const SEED: u64 = 20_240_601;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close_seq(got: &[f64], want: &[f64], tol: f64) -> Result<(), String> {
    ensure(got.len() == want.len(), || format!("length {} != {}", got.len(), want.len()))?;
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        ensure((g - w).abs() <= tol, || format!("s({}) = {g}, expected {w}", i + 1))?;
    }
    Ok(())
}

fn p_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

fn check_sq_line(family: WernerFamily, slope: f64) -> Result<(), String> {
    let (a, b) = werner_sets(family);
    for p in p_grid() {
        let rho = werner_state(family, p).map_err(|e| e.to_string())?;
        let asm = conditional_assemblage(&rho, &a).map_err(|e| e.to_string())?;
        let sq = quantum_functional(&asm, &b).map_err(|e| e.to_string())?;
        ensure((sq - (1.0 + slope * p)).abs() <= SEQ_TOL, || format!("S_Q({p}) = {sq}"))?;
    }
    Ok(())
}

fn criterion_1() -> Check {
    let h = FRAC_1_SQRT_2;
    close_seq(&s_sequence(&pauli_zx()).map_err(|e| e.to_string())?, &[1.0, 1.0 + h, 2.0, 2.0], SEQ_TOL)?;
    check_sq_line(WernerFamily::Qubit, 1.0)?;
    let t = werner_thresholds(WernerFamily::Qubit).map_err(|e| e.to_string())?;
    let (s, e) = (t.steering_p.unwrap_or(f64::NAN), t.entanglement_p.unwrap_or(f64::NAN));
    ensure((s - FRAC_1_SQRT_2).abs() <= THRESHOLD_TOL && sig7_text(s) == "0.7071068", || format!("steering threshold {s}"))?;
    ensure((e - (2.0 - SQRT_2)).abs() <= THRESHOLD_TOL && sig7_text(e) == "0.5857864", || format!("entanglement threshold {e}"))?;
    Ok(format!("steering p* = {s:.7}, entanglement p* = {e:.7}"))
}

fn criterion_2() -> Check {
    let r5 = 5f64.sqrt();
    let mut want = vec![1.0, 2.0, (3.0 + r5) / 2.0];
    want.extend([3.0; 6]);
    close_seq(&s_sequence(&gellmann_148()).map_err(|e| e.to_string())?, &want, SEQ_TOL)?;
    check_sq_line(WernerFamily::Qutrit, 2.0)?;
    let t = werner_thresholds(WernerFamily::Qutrit).map_err(|e| e.to_string())?;
    let (s, e) = (t.steering_p.unwrap_or(f64::NAN), t.entanglement_p.unwrap_or(f64::NAN));
    ensure((s - 0.809017).abs() <= THRESHOLD_TOL, || format!("steering threshold {s}"))?;
    ensure((e - 0.763932).abs() <= THRESHOLD_TOL, || format!("entanglement threshold {e}"))?;
    let r = rutkowski_bound(&gellmann_148()).map_err(|e| e.to_string())?;
    ensure((r - 3.0).abs() <= SEQ_TOL, || format!("rutkowski bound {r}"))?;
    ensure(t.rutkowski_p.is_none(), || "overlap-bound threshold should be trivial (p > 1)".into())?;
    Ok(format!("steering p* = {s:.7}, entanglement p* = {e:.7}, overlap bound = {r}"))
}

fn criterion_3() -> Check {
    let steps = 100;
    for i in 0..steps {
        let theta = FRAC_PI_2 * i as f64 / (steps - 1) as f64;
        let set = fig2_family(theta);
        let st = steering_bound(&set).map_err(|e| e.to_string())?;
        let en = entanglement_bound(&set, &set).map_err(|e| e.to_string())?;
        let ru = rutkowski_bound(&set).map_err(|e| e.to_string())?;
        ensure(en <= st + INEQ_TOL, || format!("theta {theta}: entanglement {en} > steering {st}"))?;
        ensure(st <= ru + INEQ_TOL, || format!("theta {theta}: steering {st} > overlap bound {ru}"))?;
    }
    let s0 = steering_bound(&fig2_family(0.0)).map_err(|e| e.to_string())?;
    ensure((s0 - 3.0).abs() <= SEQ_TOL, || format!("steering bound at theta = 0 is {s0}"))?;
    Ok(format!("{steps} grid points ordered, steering(0) = {s0}"))
}

fn criterion_4() -> Check {
    let spec = LinearInequalitySpec::new(vec![1.0, 1.0], vec![1.0, -1.0]).map_err(|e| e.to_string())?;
    let b = linear_steering_bound(&spec, &pauli_zx()).map_err(|e| e.to_string())?;
    ensure((b - FRAC_1_SQRT_2).abs() <= SEQ_TOL, || format!("linear bound {b}"))?;
    Ok(format!("bound = {b:.12}"))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = f64::INFINITY;
    for set in [pauli_zx(), gellmann_148()] {
        let bound = steering_bound(&set).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let model = random_lhs_model(&mut rng, &set).map_err(|e| e.to_string())?;
            let v = lhs_functional(&model, &set).map_err(|e| e.to_string())?;
            worst = worst.min(bound - v);
            ensure(v <= bound + INEQ_TOL, || format!("LHS model reached {v} > {bound}"))?;
        }
        let hidden: Vec<_> = (0..20).map(|_| random_state_with(&mut rng, set.dim(), Purity::Mixed)).collect();
        let v = enumerate_lhs_extremal(&set, &hidden).map_err(|e| e.to_string())?;
        ensure(v <= bound + INEQ_TOL, || format!("deterministic strategy reached {v} > {bound}"))?;
        let aligned = aligned_hidden_states(&set, 1e-9).map_err(|e| e.to_string())?;
        let v = enumerate_lhs_extremal(&set, &aligned).map_err(|e| e.to_string())?;
        ensure(v <= bound + INEQ_TOL && v >= bound - SATURATION_TOL, || {
            format!("aligned construction gave {v}, bound {bound}")
        })?;
    }
    Ok(format!("2000 models + extremal strategies, worst margin {worst:.3e}, both bounds saturated"))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst = f64::INFINITY;
    for set in [pauli_zx(), gellmann_148()] {
        let bound = entanglement_bound(&set, &set).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let (w, a, b) = random_separable_ensemble(&mut rng, set.dim(), set.dim());
            let v = separable_functional(&w, &a, &b, &set, &set).map_err(|e| e.to_string())?;
            worst = worst.min(bound - v);
            ensure(v <= bound + INEQ_TOL, || format!("separable ensemble reached {v} > {bound}"))?;
        }
    }
    Ok(format!("2000 ensembles, worst margin {worst:.3e}"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut violations = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=8);
        let (p, q, w) = random_majorized_triple(&mut rng, n);
        let (lhs, rhs) = dot_sorted_bound(&p, &q, &w).map_err(|e| e.to_string())?;
        if lhs > rhs + INEQ_TOL {
            violations += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} triples violate P·Q ≤ W↓·Q↓"))?;
    for (i, set) in [pauli_zx(), gellmann_148()].into_iter().enumerate() {
        let config = OracleConfig { seed: SEED + 10 + i as u64, samples: 10_000, grid_points: 0, tolerance: INEQ_TOL };
        let r = sample_majorization_suite(&config, &set).map_err(|e| e.to_string())?;
        ensure(r.violations == 0, || format!("{} Born vectors escape W", r.violations))?;
    }
    Ok("10000 triples, 2 x 10000 states, 0 violations".into())
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let sets = [pauli_zx(), gellmann_148()];
    let mut worst_gap = f64::INFINITY;
    for i in 0..200 {
        let set = &sets[i % 2];
        let weights = random_distribution(&mut rng, set.len());
        let tuple = random_outcome_tuple(&mut rng, set).map_err(|e| e.to_string())?;
        let cfg = SeesawConfig { restarts: 50, seed: SEED + i as u64 };
        let sep = zeta_separable(set, set, &weights, &tuple, cfg).map_err(|e| e.to_string())?;
        let q = zeta_qfgur_quantum(set, set, &weights, &tuple).map_err(|e| e.to_string())?;
        ensure(sep <= q + INEQ_TOL, || format!("seesaw {sep} exceeds quantum zeta {q}"))?;
        if set.dim() == 2 && i / 2 < 50 {
            let grid = grid_zeta_separable(set, set, &weights, &tuple, GRID_POINTS).map_err(|e| e.to_string())?;
            worst_gap = worst_gap.min(sep - grid);
            ensure(grid <= q + INEQ_TOL, || format!("grid {grid} exceeds quantum zeta {q}"))?;
            ensure(sep >= grid - GRID_SLACK, || format!("seesaw {sep} below grid {grid}"))?;
        }
    }
    Ok(format!("200 tuples ordered, 50 qubit grid checks, min(seesaw − grid) = {worst_gap:.3e}"))
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut sets = vec![pauli_zx(), gellmann_148()];
    for i in 0..20 {
        let d = 2 + i % 2;
        let n = 1 + (i / 2) % 3;
        sets.push(random_projective_set(&mut rng, d, n).map_err(|e| e.to_string())?);
    }
    let mut checks = 0;
    for set in &sets {
        for k in 1..=set.pool_size() {
            let main = subset_norm(set, k).map_err(|e| e.to_string())?.0;
            let brute = brute_subset_norm(set, k).map_err(|e| e.to_string())?;
            ensure((main - brute).abs() <= ORACLE_TOL, || format!("k={k}: {main} vs brute {brute}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (set, k) pairs agree"))
}

/// Reference curve values for the three-setting family are not tabulated, so nothing beyond criterion 3's
/// ordering and theta = 0 anchor is asserted; this only confirms the curves
/// are computable over the whole range.
fn criterion_10() -> Check {
    for i in 0..=10 {
        let set = fig2_family(FRAC_PI_2 * i as f64 / 10.0);
        let st = steering_bound(&set).map_err(|e| e.to_string())?;
        ensure(st.is_finite() && (1.0..=3.0 + SEQ_TOL).contains(&st), || format!("steering bound {st}"))?;
    }
    Ok("curve values not tabulated; ordering and anchor substitute (see criterion 3)".into())
}

type Criterion = (&'static str, fn() -> Check);

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("qubit Werner reproduction", criterion_1),
        ("qutrit Werner reproduction", criterion_2),
        ("three-setting qubit family ordering", criterion_3),
        ("linear steering inequality", criterion_4),
        ("LHS models below the steering bound", criterion_5),
        ("separable ensembles below the entanglement bound", criterion_6),
        ("majorization sampling", criterion_7),
        ("separable vs quantum zeta", criterion_8),
        ("brute-force subset norm equivalence", criterion_9),
        ("untabulated curve values", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
