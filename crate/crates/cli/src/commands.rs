use std::fs;

use anyhow::anyhow;
use serde_json::{json, Value};

use steerbound::bounds::{entanglement_bound, rutkowski_bound, steering_bound, violation_ratios, BoundReport};
use steerbound::functionals::{
    werner_sweep, werner_thresholds, witness, zeta_fgur, zeta_qfgur_quantum, zeta_quantum, zeta_separable, OutcomeTuple,
    Pairing, SeesawConfig, WernerPoint,
};
use steerbound::numfmt::{round12, sig7_text};
use steerbound::oracle::{run_suite, BoundOverrides, OracleConfig, Suite};
use steerbound::quantum::builtin::{fig2_family, werner_sets};
use steerbound::quantum::{MeasurementSet, Spectrum, WernerFamily};
use steerbound::Error;

use crate::failure::{Failure, InputContext};
use crate::inputs::{load_state, parse_list, parse_matrix, parse_werner, resolve_set};
use crate::output::{csv_document, display_path, json_document, num, write_output, Format, RunManifest, Table};
use crate::{BoundsArgs, Cli, Command, SweepArgs, VerifyArgs, WernerArgs, WitnessArgs, ZetaArgs, ZetaClass};

type Outcome = Result<(), Failure>;

/// Slack on the per-row ordering checks of the family sweep.
const ORDER_SLACK: f64 = 1e-9;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Bounds(args) => bounds(cli, args),
        Command::Witness(args) => witness_cmd(cli, args),
        Command::SweepFig2(args) => sweep_fig2(cli, args),
        Command::Werner(args) => werner(cli, args),
        Command::Zeta(args) => zeta(cli, args),
        Command::Verify(args) => verify(cli, args),
    }
}

fn invocation() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn emit(cli: &Cli, manifest: &RunManifest, result: Value, table: impl FnOnce(&Value) -> Table) -> Outcome {
    let text = match cli.global.format {
        Format::Json => json_document(manifest, result),
        Format::Csv => csv_document(manifest, &table(&result)),
    };
    write_output(cli.global.out.as_deref(), &text).input()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn require_set(set: Option<MeasurementSet>, what: &str) -> Result<MeasurementSet, Failure> {
    set.ok_or_else(|| Failure::Input(anyhow!("no {what} measurement set: pass a file or --builtin")))
}

fn bounds(cli: &Cli, args: &BoundsArgs) -> Outcome {
    let mut inputs = Vec::new();
    let bob = resolve_set(args.measurements.as_deref(), cli.global.builtin.as_deref(), "measurement", &mut inputs)
        .input()?;
    let bob = require_set(bob, "measurement")?;
    let alice =
        resolve_set(args.alice.as_deref(), args.alice_builtin.as_deref(), "Alice's", &mut inputs).input()?;
    let lambda = match &args.spectrum {
        Some(text) => Some(Spectrum::new(parse_list(text, "spectrum").input()?)?),
        None => None,
    };
    let report = BoundReport::compute(&bob, alice.as_ref(), lambda.as_ref())?;
    let mut result = to_value(&report);
    if let Some(ent) = report.entanglement_bound {
        let (rs, re) = violation_ratios(report.settings, report.steering_bound, ent)?;
        result["violation_ratios"] = json!({ "steering": round12(rs), "entanglement": round12(re) });
    }
    let manifest = RunManifest::new(&invocation(), inputs, cli.global.seed);
    emit(cli, &manifest, result, Table::key_value)
}

fn witness_cmd(cli: &Cli, args: &WitnessArgs) -> Outcome {
    let mut inputs = Vec::new();
    let (state, family) = match (&args.state, &args.werner) {
        (Some(path), _) => {
            inputs.push(display_path(path));
            (load_state(path).input()?, None)
        }
        (None, Some(spec)) => {
            inputs.push(format!("werner:{spec}"));
            let (family, _, state) = parse_werner(spec).input()?;
            (state, Some(family))
        }
        (None, None) => return Err(Failure::Input(anyhow!("pass --state or --werner"))),
    };
    let defaults = family.map(werner_sets);
    let alice = resolve_set(args.alice.as_deref(), args.alice_builtin.as_deref(), "Alice's", &mut inputs).input()?;
    let bob = resolve_set(args.bob.as_deref(), cli.global.builtin.as_deref(), "Bob's", &mut inputs).input()?;
    let alice = require_set(alice.or_else(|| defaults.as_ref().map(|d| d.0.clone())), "Alice's")?;
    let bob = require_set(bob.or_else(|| defaults.as_ref().map(|d| d.1.clone())), "Bob's")?;
    let pairing = if args.maximize_pairing { Pairing::Maximize } else { Pairing::AsGiven };
    let report = witness(&state, &alice, &bob, pairing)?;
    let manifest = RunManifest::new(&invocation(), inputs, cli.global.seed);
    emit(cli, &manifest, to_value(&report), Table::key_value)
}

fn sweep_fig2(cli: &Cli, args: &SweepArgs) -> Outcome {
    let (lo, hi) = (args.theta_min, args.theta_max);
    let pi = std::f64::consts::PI;
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi && hi <= pi + 1e-12) {
        return Err(Error::RangeError(format!("theta range [{lo}, {hi}] must satisfy 0 <= min <= max <= pi")).into());
    }
    if args.steps < 2 {
        return Err(Error::RangeError(format!("steps must be at least 2, got {}", args.steps)).into());
    }
    let mut rows = Vec::with_capacity(args.steps);
    let mut broken = Vec::new();
    for i in 0..args.steps {
        let theta = lo + (hi - lo) * i as f64 / (args.steps - 1) as f64;
        let set = fig2_family(theta);
        let rut = rutkowski_bound(&set)?;
        let st = steering_bound(&set)?;
        let ent = entanglement_bound(&set, &set)?;
        if ent > st + ORDER_SLACK || st > rut + ORDER_SLACK {
            broken.push(format!("theta={theta}: entanglement {ent}, steering {st}, rutkowski {rut}"));
        }
        rows.push([theta, rut, st, ent]);
    }
    let result = json!({
        "rows": rows.iter().map(|r| json!({
            "theta": round12(r[0]),
            "rutkowski": round12(r[1]),
            "steering_bound": round12(r[2]),
            "entanglement_bound": round12(r[3]),
        })).collect::<Vec<_>>(),
    });
    let manifest = RunManifest::new(&invocation(), vec!["builtin:fig2".into()], cli.global.seed);
    emit(cli, &manifest, result, |_| {
        let mut table = Table::new(&["theta", "rutkowski", "steering_bound", "entanglement_bound"]);
        table.rows = rows.iter().map(|r| r.iter().map(|&x| num(x)).collect()).collect();
        table
    })?;
    if broken.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(format!("bound ordering violated at {}", broken.join("; "))))
    }
}

fn threshold_text(p: Option<f64>) -> String {
    p.map(sig7_text).unwrap_or_else(|| "none ≤ 1".into())
}

fn werner_table(points: &[WernerPoint]) -> Table {
    let mut table = Table::new(&[
        "p",
        "s_q",
        "steering_bound",
        "entanglement_bound",
        "steerable",
        "entangled",
        "steerable_rutkowski",
    ]);
    for pt in points {
        let r = &pt.report;
        table.rows.push(vec![
            num(pt.p),
            num(r.s_q),
            num(r.steering_bound),
            num(r.entanglement_bound),
            r.steerable.to_string(),
            r.entangled.to_string(),
            r.steerable_rutkowski.map(|b| b.to_string()).unwrap_or_default(),
        ]);
    }
    table
}

fn werner(cli: &Cli, args: &WernerArgs) -> Outcome {
    let family: WernerFamily = args.family.parse()?;
    if args.grid < 2 {
        return Err(Error::RangeError(format!("grid must have at least 2 points, got {}", args.grid)).into());
    }
    let ps: Vec<f64> = (0..args.grid).map(|i| i as f64 / (args.grid - 1) as f64).collect();
    let thresholds = werner_thresholds(family)?;
    let points = werner_sweep(family, &ps)?;
    let result = json!({
        "thresholds": to_value(&thresholds),
        "display": {
            "steering": threshold_text(thresholds.steering_p),
            "entanglement": threshold_text(thresholds.entanglement_p),
            "rutkowski": threshold_text(thresholds.rutkowski_p),
        },
        "sweep": to_value(&points),
    });
    let manifest = RunManifest::new(&invocation(), vec![format!("werner:{family}")], cli.global.seed);
    if let Some(path) = &args.sweep_out {
        fs::write(path, csv_document(&manifest, &werner_table(&points))).map_err(|e| Failure::Input(e.into()))?;
    }
    emit(cli, &manifest, result, |_| werner_table(&points))
}

fn zeta(cli: &Cli, args: &ZetaArgs) -> Outcome {
    let mut inputs = Vec::new();
    let bob = resolve_set(args.bob.as_deref(), cli.global.builtin.as_deref(), "Bob's", &mut inputs).input()?;
    let bob = require_set(bob, "Bob's")?;
    let alice = resolve_set(args.alice.as_deref(), args.alice_builtin.as_deref(), "Alice's", &mut inputs).input()?;
    let alice = alice.unwrap_or_else(|| bob.clone());
    let outcomes: Vec<usize> = parse_list(&args.outcomes, "outcome").input()?;
    let d = bob.max_outcomes();
    let tuple = match &args.permutation {
        Some(text) => OutcomeTuple::new(outcomes, parse_list(text, "permutation").input()?, d)?,
        None => OutcomeTuple::identity(outcomes, d)?,
    };
    let weights = match &args.weights {
        Some(text) => parse_list(text, "weight").input()?,
        None => alice.setting_weights().to_vec(),
    };
    let quantum = match &args.joint_weights {
        Some(text) => {
            let joint = parse_matrix(text, "joint weight").input()?;
            let b: Vec<usize> = (0..tuple.outcomes().len()).map(|x| tuple.paired(x)).collect();
            zeta_quantum(&alice, &bob, &joint, tuple.outcomes(), &b)?
        }
        None => zeta_qfgur_quantum(&alice, &bob, &weights, &tuple)?,
    };
    let fgur = zeta_fgur(&alice, tuple.outcomes())?;
    let separable = match args.class {
        ZetaClass::Separable | ZetaClass::All => {
            let config = SeesawConfig { restarts: args.restarts, seed: cli.global.seed };
            Some(zeta_separable(&alice, &bob, &weights, &tuple, config)?)
        }
        _ => None,
    };
    let value = match args.class {
        ZetaClass::Quantum | ZetaClass::All => quantum,
        ZetaClass::Separable => separable.unwrap_or(f64::NAN),
        ZetaClass::Fgur => fgur,
    };
    let separable_le_quantum = separable.map(|s| s <= quantum + ORDER_SLACK);
    let result = json!({
        "class": format!("{:?}", args.class).to_lowercase(),
        "outcomes": tuple.outcomes(),
        "permutation": tuple.permutation(),
        "value": round12(value),
        "zeta_quantum": round12(quantum),
        "zeta_separable": separable.map(round12),
        "zeta_fgur": round12(fgur),
        "separable_le_quantum": separable_le_quantum,
    });
    let manifest = RunManifest::new(&invocation(), inputs, cli.global.seed);
    emit(cli, &manifest, result, Table::key_value)?;
    match separable_le_quantum {
        Some(false) => Err(Failure::Assertion(format!(
            "separable maximum {} exceeds the quantum maximum {quantum}",
            separable.unwrap_or(f64::NAN)
        ))),
        _ => Ok(()),
    }
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Outcome {
    let suite: Suite = args.suite.parse()?;
    let config =
        OracleConfig { seed: cli.global.seed, samples: args.samples, grid_points: args.grid_points, tolerance: args.tolerance };
    config.validate()?;
    let mut inputs = Vec::new();
    let overrides = match &args.bounds_file {
        Some(path) => {
            inputs.push(display_path(path));
            let text = fs::read_to_string(path).map_err(|e| Failure::Input(anyhow!("reading {}: {e}", path.display())))?;
            serde_json::from_str::<BoundOverrides>(&text)
                .map_err(|e| Failure::Input(anyhow!("{}: {e}", path.display())))?
        }
        None => BoundOverrides::default(),
    };
    let reports = run_suite(suite, &config, &overrides)?;
    let passed = reports.iter().all(|r| r.passed());
    let result = json!({ "passed": passed, "reports": to_value(&reports) });
    let manifest = RunManifest::new(&invocation(), inputs, cli.global.seed);
    emit(cli, &manifest, result, |_| {
        let mut table = Table::new(&["suite", "samples", "violations", "worst_margin", "seed"]);
        table.rows = reports
            .iter()
            .map(|r| {
                vec![r.suite.clone(), r.samples.to_string(), r.violations.to_string(), num(r.worst_margin), r.seed.to_string()]
            })
            .collect();
        table
    })?;
    if passed {
        return Ok(());
    }
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} suite: {} of {} samples violated, worst margin {}", r.suite, r.violations, r.samples, num(r.worst_margin)))
        .collect();
    Err(Failure::Verification(failing.join("; ")))
}
