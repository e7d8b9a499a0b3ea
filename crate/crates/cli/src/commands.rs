use std::ops::RangeInclusive;
use std::path::Path;

use meterbench_core::backaction::{characteristic_function, decoherence_curve, decoherence_free_distance, tradeoff_report, TradeoffReport};
use meterbench_core::interaction::MeasurementScenario;
use meterbench_core::scenarios::{load_scenario, make_random_scenario, LoadedScenario, QubitMeterOracle};
use meterbench_core::sensitivity::{resolution_curve, sensitivity_report, ReadoutPOVM};
use meterbench_core::{Error, Tolerances};

use crate::error::{CliError, CliResult};
use crate::plot::plot_report;
use crate::report::Report;

pub const PROFILE_VAR: &str = "METERBENCH_TOLERANCE_PROFILE";

/// Offsets audited for seeded random scenarios, which carry no sweep.
pub const RANDOM_AUDIT_OFFSETS: RangeInclusive<usize> = 0..=200;
const RANDOM_AUDIT_STEP: f64 = 0.05;

pub fn tolerances() -> CliResult<Tolerances> {
    match std::env::var(PROFILE_VAR) {
        Err(_) => Ok(Tolerances::default()),
        Ok(name) => Tolerances::profile(&name)
            .ok_or_else(|| CliError::Usage(format!("{PROFILE_VAR}: unknown profile `{name}` (expected default or strict)"))),
    }
}

fn load(path: &Path, tol: &Tolerances) -> CliResult<LoadedScenario> {
    Ok(load_scenario(path, tol)?)
}

pub fn resolve(path: &Path, log_eps: bool) -> CliResult<Report> {
    let s = load(path, &tolerances()?)?;
    let meter = s.scenario.meter();
    let phi_b = s.sweep.phi_b;
    let eps = s.sweep.grid(log_eps);
    let r = resolution_curve(meter, &s.povm, phi_b, &eps)?;
    let d = decoherence_curve(meter, &eps);

    let mut out = Report::new("resolve", &s.name);
    out.column("eps", eps.iter().copied());
    out.column("R", r.values);
    out.column("D", d.values);
    if let Some(alpha) = s.qubit_alpha() {
        out.column("R_qubit_oracle", eps.iter().map(|&e| QubitMeterOracle::resolution_at(alpha, phi_b, e)));
    }

    let rep = sensitivity_report(&s.scenario, &s.povm, phi_b)?;
    out.scalar("phi_b", phi_b);
    out.scalar("fisher", rep.fisher);
    out.scalar("second_derivative", rep.second_derivative);
    out.scalar("delta_epsilon", rep.delta_epsilon);
    out.scalar("sensitivity", rep.sensitivity);
    out.scalar("resolution_at_delta_epsilon", rep.resolution_at_delta_epsilon);
    out.scalar("crossing_one_eighth", rep.crossing_one_eighth);
    out.scalar("delta_b", rep.delta_b);
    out.scalar("qfi_bound", rep.qfi_bound);
    out.scalar("qcrb_satisfied", rep.bound_satisfied);
    out.scalar("qcrb_gap", rep.bound_gap);
    out.scalar("coupling", s.scenario.coupling());
    out.scalar("delta_a", rep.delta_a);
    Ok(out)
}

pub fn decohere(path: &Path, log_eps: bool) -> CliResult<Report> {
    let s = load(path, &tolerances()?)?;
    let meter = s.scenario.meter();
    let eps = s.sweep.grid(log_eps);
    let d = decoherence_curve(meter, &eps);
    let r = resolution_curve(meter, &s.povm, s.sweep.phi_b, &eps)?;

    let mut out = Report::new("decohere", &s.name);
    out.column("eps", eps.iter().copied());
    out.column("D", d.values);
    out.column("abs_chi", eps.iter().map(|&e| characteristic_function(meter, e).norm()));
    out.column("R", r.values);
    if s.is_qubit_meter() {
        out.column("D_qubit_oracle", eps.iter().map(|&e| QubitMeterOracle::decoherence(e)));
    }

    let (closed, numeric) = match decoherence_free_distance(&s.scenario) {
        Ok(c) => (c.closed, c.numeric),
        Err(Error::ZeroUncertainty { .. }) => (f64::INFINITY, f64::INFINITY),
        Err(e) => return Err(e.into()),
    };
    out.scalar("delta_b", meter.generator_uncertainty());
    out.scalar("coupling", s.scenario.coupling());
    out.scalar("c_a_closed", closed);
    out.scalar("c_a_numeric", numeric);
    let gap = if closed.is_finite() { (numeric - closed).abs() / closed } else { 0.0 };
    out.scalar("c_a_relative_gap", gap);
    Ok(out)
}

struct AuditRow {
    name: String,
    report: TradeoffReport,
}

fn audit(name: String, sc: &MeasurementScenario, povm: &ReadoutPOVM, phi_b: f64, offsets: &[f64]) -> CliResult<AuditRow> {
    Ok(AuditRow {
        name,
        report: tradeoff_report(sc, povm, phi_b, offsets)?,
    })
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// Returns the report and whether every audit passed.
pub fn bounds(
    path: Option<&Path>,
    seeds: Option<RangeInclusive<u64>>,
    dims: (usize, usize),
    log_eps: bool,
) -> CliResult<(Report, bool)> {
    let tol = tolerances()?;
    let mut rows = Vec::new();
    let label;
    match (path, seeds) {
        (Some(path), None) => {
            let s = load(path, &tol)?;
            label = s.name.clone();
            rows.push(audit(s.name.clone(), &s.scenario, &s.povm, s.sweep.phi_b, &s.sweep.grid(log_eps))?);
        }
        (None, Some(seeds)) => {
            label = format!("random {}..{} {}x{}", seeds.start(), seeds.end(), dims.0, dims.1);
            let offsets: Vec<f64> = RANDOM_AUDIT_OFFSETS.map(|k| k as f64 * RANDOM_AUDIT_STEP).collect();
            for seed in seeds {
                let (sc, povm) = make_random_scenario(seed, dims.0, dims.1)?;
                rows.push(audit(format!("seed-{seed}"), &sc, &povm, 0.0, &offsets)?);
            }
        }
        _ => return Err(CliError::Usage("bounds needs either a scenario file or --random A..B".into())),
    }

    let mut out = Report::new("bounds", &label);
    out.column("scenario", rows.iter().map(|r| r.name.clone()));
    out.column("fisher", rows.iter().map(|r| r.report.sensitivity.fisher));
    out.column("qfi_bound", rows.iter().map(|r| r.report.sensitivity.qfi_bound));
    out.column("qcrb_gap", rows.iter().map(|r| r.report.sensitivity.bound_gap));
    out.column("qcrb", rows.iter().map(|r| pass_fail(r.report.sensitivity.bound_satisfied)));
    out.column("min_d_minus_r", rows.iter().map(|r| r.report.min_d_minus_r));
    out.column("argmin_eps", rows.iter().map(|r| r.report.argmin_eps));
    out.column("d_geq_r", rows.iter().map(|r| pass_fail(r.report.d_geq_r_satisfied)));
    out.column("delta_epsilon", rows.iter().map(|r| r.report.sensitivity.delta_epsilon));
    out.column("delta_a", rows.iter().map(|r| r.report.delta_a));
    out.column("c_a", rows.iter().map(|r| r.report.c_a_closed));
    out.column("resolution_gap", rows.iter().map(|r| r.report.resolution_gap));
    out.column("resolution_bound", rows.iter().map(|r| r.report.resolution_bound.as_str()));

    let passed = rows.iter().filter(|r| r.report.all_passed()).count();
    out.scalar("scenarios", rows.len());
    out.scalar("passed", passed);
    out.scalar("failed", rows.len() - passed);
    Ok((out, passed == rows.len()))
}

pub fn plot(path: &Path) -> CliResult<String> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: origin.clone(),
        source,
    })?;
    let report = Report::parse(&text, &origin)?;
    plot_report(&report).map_err(|message| CliError::BadInput { path: origin, message })
}
