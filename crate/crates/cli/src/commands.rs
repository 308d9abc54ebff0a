//! The four subcommands and what each one computes.

use hankel_lab::criteria::{box_condition4, carleson_box, carleson_kernel_sup, condition2_sup, moment_decay_test};
use hankel_lab::hankel::{HankelOperator, NormSpace, PowerIteration};
use hankel_lab::harness::{
    run_counterexample, run_hilbert_convergence, run_identity_check, run_pairing_probe, run_power_family_scan,
    Provenance,
};
use hankel_lab::quadrature::{DiskGrid, GridParams, QuadratureParams, QuadratureScheme};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::settings::Settings;
use crate::spec::MeasureSpec;

pub const CRITERIA: [&str; 5] = ["condition2", "carleson-kernel", "carleson-box", "box4", "moment-decay"];
pub const EXPERIMENTS: [&str; 5] = ["identity", "counterexample", "family-scan", "hilbert", "pairing"];

const GRID: [&str; 4] = ["grid_levels", "grid_angles", "grid_uniform", "max_radius"];
const QUAD: [&str; 4] = ["quad_radial", "quad_angular", "panel_order", "panel_depth"];
const ITERATION: [&str; 2] = ["tol", "max_iter"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Moments,
    Criterion,
    Opnorm,
    Experiment,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Moments => "moments",
            Subcommand::Criterion => "criterion",
            Subcommand::Opnorm => "opnorm",
            Subcommand::Experiment => "experiment",
        }
    }
}

/// What a run produced.
pub struct Outcome {
    pub payload: Value,
    pub provenance: Vec<Provenance>,
    /// `false` when an experiment assertion failed.
    pub passed: bool,
}

/// Settings that influence the payload of `subcommand`/`target`; exactly
/// these are echoed.
pub fn relevant_keys(subcommand: Subcommand, target: Option<&str>) -> Vec<&'static str> {
    let mut keys = Vec::new();
    match (subcommand, target) {
        (Subcommand::Moments, _) => keys.extend(["measure", "n"]),
        (Subcommand::Criterion, Some("condition2")) => {
            keys.push("measure");
            keys.extend(GRID);
        }
        (Subcommand::Criterion, Some("carleson-kernel")) => {
            keys.push("measure");
            keys.extend(GRID);
            keys.extend(QUAD);
        }
        (Subcommand::Criterion, Some("carleson-box")) => keys.extend(["measure", "depth"]),
        (Subcommand::Criterion, Some("box4")) => {
            keys.extend(["measure", "depth"]);
            keys.extend(QUAD);
        }
        (Subcommand::Criterion, Some("moment-decay")) => keys.extend(["measure", "n", "threshold"]),
        (Subcommand::Opnorm, _) => {
            keys.extend(["measure", "space", "n"]);
            keys.extend(ITERATION);
        }
        (Subcommand::Experiment, Some("identity")) => keys.extend(["measure", "samples", "seed"]),
        (Subcommand::Experiment, Some("counterexample")) => {
            keys.push("k");
            keys.extend(GRID);
            keys.extend(QUAD);
        }
        (Subcommand::Experiment, Some("family-scan")) => {
            keys.extend(["s_list", "n", "depth"]);
            keys.extend(GRID);
            keys.extend(QUAD);
            keys.extend(ITERATION);
        }
        (Subcommand::Experiment, Some("hilbert")) => {
            keys.push("n");
            keys.extend(ITERATION);
        }
        (Subcommand::Experiment, Some("pairing")) => keys.extend(["measure", "degree", "trials", "seed"]),
        _ => {}
    }
    keys.push("format");
    keys
}

/// Checks `target` against the valid names for `subcommand`.
pub fn check_target(subcommand: Subcommand, target: Option<&str>) -> Result<(), CliError> {
    let (what, valid): (&str, &[&str]) = match subcommand {
        Subcommand::Criterion => ("criterion", &CRITERIA),
        Subcommand::Experiment => ("experiment", &EXPERIMENTS),
        _ => return Ok(()),
    };
    match target {
        Some(t) if valid.contains(&t) => Ok(()),
        Some(t) => Err(CliError::Usage(format!(
            "unknown {what} `{t}`; valid: {}",
            valid.join(", ")
        ))),
        None => Err(CliError::Usage(format!("missing {what} name; valid: {}", valid.join(", ")))),
    }
}

fn measure(settings: &Settings) -> Result<MeasureSpec, CliError> {
    Ok(MeasureSpec::parse(settings.raw("measure"))?)
}

fn radial(settings: &Settings, what: &str) -> Result<hankel_lab::measure::RadialMeasure, CliError> {
    let spec = measure(settings)?;
    spec.radial().cloned().ok_or_else(|| CliError::Param {
        field: "measure",
        reason: format!("{what} needs a radial measure, not `{spec}`"),
    })
}

fn grid(settings: &Settings) -> Result<DiskGrid, CliError> {
    let grid = DiskGrid::new(GridParams {
        levels: settings.count("grid_levels")?,
        angles: settings.count("grid_angles")?,
        uniform: settings.count("grid_uniform")?,
    })?;
    Ok(match settings.optional_real("max_radius")? {
        Some(r) => grid.truncated(r)?,
        None => grid,
    })
}

fn quad(settings: &Settings) -> Result<QuadratureScheme, CliError> {
    Ok(QuadratureScheme::new(QuadratureParams {
        radial: settings.count("quad_radial")?,
        angular: settings.count("quad_angular")?,
        panel_order: settings.count("panel_order")?,
        panel_depth: settings.count("panel_depth")?,
    })?)
}

fn iteration(settings: &Settings) -> Result<PowerIteration, CliError> {
    Ok(PowerIteration {
        tol: settings.real("tol")?,
        max_iter: settings.count("max_iter")?,
    })
}

pub fn parse_space(raw: &str) -> Result<NormSpace, CliError> {
    if raw == "h2" {
        return Ok(NormSpace::H2);
    }
    raw.strip_prefix("dalpha:")
        .and_then(|a| a.parse::<f64>().ok())
        .filter(|a| a.is_finite())
        .map(|alpha| NormSpace::Dalpha { alpha })
        .ok_or_else(|| CliError::Param {
            field: "space",
            reason: format!("`{raw}` is neither `h2` nor `dalpha:<number>`"),
        })
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

pub fn run(subcommand: Subcommand, target: Option<&str>, settings: &Settings) -> Result<Outcome, CliError> {
    match subcommand {
        Subcommand::Moments => moments(settings),
        Subcommand::Criterion => criterion(target.expect("checked by check_target"), settings),
        Subcommand::Opnorm => opnorm(settings),
        Subcommand::Experiment => experiment(target.expect("checked by check_target"), settings),
    }
}

fn moments(settings: &Settings) -> Result<Outcome, CliError> {
    let spec = measure(settings)?;
    let n = settings.count("n")?;
    let m = spec.moments(n)?;
    let rows: Vec<Value> = m.values()[..=n]
        .iter()
        .enumerate()
        .map(|(k, h)| json!({"n": k, "moment": h.re, "scaled": (k as f64 + 1.0) * h.re}))
        .collect();
    Ok(Outcome {
        payload: json!({"measure": spec.to_string(), "n": n, "rows": rows}),
        provenance: vec![Provenance::ClosedForm],
        passed: true,
    })
}

fn criterion(name: &str, settings: &Settings) -> Result<Outcome, CliError> {
    let spec = measure(settings)?;
    let (report, provenance) = match name {
        "condition2" => (to_value(condition2_sup(&spec.moments(0)?, &grid(settings)?)?), Provenance::Series),
        "carleson-kernel" => {
            let mu = radial(settings, name)?;
            (to_value(carleson_kernel_sup(&mu, &grid(settings)?, &quad(settings)?)?), Provenance::Quadrature)
        }
        "carleson-box" => {
            let mu = radial(settings, name)?;
            (to_value(carleson_box(&mu, settings.count("depth")?)), Provenance::ClosedForm)
        }
        "box4" => {
            let m = spec.moments(0)?;
            (to_value(box_condition4(&m, settings.count("depth")?, &quad(settings)?)?), Provenance::Quadrature)
        }
        "moment-decay" => {
            let n = settings.count("n")?;
            let m = spec.moments(n)?;
            let decay = moment_decay_test(&m, settings.real("threshold")?)?;
            let profile: Vec<Value> = m.values()[..=n]
                .iter()
                .enumerate()
                .map(|(k, h)| json!({"n": k, "scaled": (k as f64 + 1.0) * h.re}))
                .collect();
            let mut v = to_value(decay);
            v["threshold"] = settings.real("threshold")?.into();
            v["profile"] = profile.into();
            (v, Provenance::ClosedForm)
        }
        _ => unreachable!("checked by check_target"),
    };
    let mut payload = report;
    payload["criterion"] = name.into();
    payload["measure"] = spec.to_string().into();
    Ok(Outcome {
        payload,
        provenance: vec![provenance],
        passed: true,
    })
}

fn opnorm(settings: &Settings) -> Result<Outcome, CliError> {
    let spec = measure(settings)?;
    let space = parse_space(settings.raw("space"))?;
    let sizes = settings.count_list("n")?;
    let iteration = iteration(settings)?;
    let top = sizes.iter().copied().max().unwrap_or(0);
    let m = spec.moments(2 * top)?;
    let mut results = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let op = HankelOperator::from_moments(&m, n)?;
        let report = match space {
            NormSpace::H2 => op.operator_norm_h2(&iteration)?,
            NormSpace::Dalpha { alpha } => op.operator_norm_dalpha(alpha, &iteration)?,
        };
        let mut v = to_value(report);
        v["n"] = n.into();
        results.push(v);
    }
    Ok(Outcome {
        payload: json!({"measure": spec.to_string(), "space": space.to_string(), "results": results}),
        provenance: vec![Provenance::Iteration],
        passed: true,
    })
}

fn experiment(name: &str, settings: &Settings) -> Result<Outcome, CliError> {
    let report = match name {
        "identity" => run_identity_check(
            &measure(settings)?.moments(0)?,
            settings.count("samples")?,
            settings.integer("seed")?,
        )?,
        "counterexample" => {
            let k = settings.integer("k")?;
            let k = u32::try_from(k).map_err(|_| CliError::Param {
                field: "k",
                reason: format!("{k} is too large"),
            })?;
            run_counterexample(k, &grid(settings)?, &quad(settings)?)?
        }
        "family-scan" => run_power_family_scan(
            &settings.real_list("s_list")?,
            settings.count("n")?,
            &grid(settings)?,
            &quad(settings)?,
            settings.count("depth")?,
            &iteration(settings)?,
        )?,
        "hilbert" => run_hilbert_convergence(&settings.count_list("n")?, &iteration(settings)?)?,
        "pairing" => run_pairing_probe(
            &radial(settings, name)?,
            settings.count("degree")?,
            settings.count("trials")?,
            settings.integer("seed")?,
        )?,
        _ => unreachable!("checked by check_target"),
    };
    let mut provenance = Vec::new();
    for step in &report.steps {
        if !provenance.contains(&step.provenance) {
            provenance.push(step.provenance);
        }
    }
    Ok(Outcome {
        passed: report.passed,
        payload: to_value(&report),
        provenance,
    })
}
