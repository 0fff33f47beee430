//! Execution of each command against a validated configuration.

use std::path::Path;

use membrane_core::equations::ExplicitSolution;
use membrane_core::evolution::{
    detect_blowup, evolve, BlowupFit, EvolveControls, EvolveTermination, FieldState, Geometry, RadialGrid,
};
use membrane_core::selfsimilar_ode::{
    integrate_profile, parity_check, ProfileControls, TaylorSeed, Termination,
};
use membrane_core::similarity_evolution::{
    evolve_similarity, explicit_profile_samples, perturbed_initial_data, Bump, SimilarityControls,
    SimilarityGrid, SimilarityState,
};
use membrane_core::spectral::{fit_growth_rate, mode_audit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::config::{Command, IcKind, RunConfig};
use crate::error::{exit, usage, CliError};
use crate::output::Artifacts;
use crate::verify::{format_table, run_suite};

/// How a command finished, before the manifest is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: String,
    pub exit_code: i32,
    /// Human-readable summary printed to standard output.
    pub summary: String,
}

impl Outcome {
    fn ok(summary: String) -> Self {
        Self { status: "ok".into(), exit_code: exit::OK, summary }
    }
}

/// Work that must happen before anything is written: reading inputs.
#[derive(Debug, Clone)]
pub enum Prepared {
    None,
    FitSeries { times: Vec<f64>, axis_urr: Vec<f64>, synthetic: bool },
}

/// Reads the inputs a command needs. Failures here are usage errors and
/// leave the output directory untouched.
pub fn prepare(config: &RunConfig) -> Result<Prepared, CliError> {
    if config.command != Command::Fit {
        return Ok(Prepared::None);
    }
    match &config.fit.input {
        Some(path) => {
            let (times, axis_urr) = read_series(path)?;
            Ok(Prepared::FitSeries { times, axis_urr, synthetic: false })
        }
        None => {
            let (times, axis_urr) = synthetic_series(config)?;
            Ok(Prepared::FitSeries { times, axis_urr, synthetic: true })
        }
    }
}

fn read_series(path: &Path) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let bad = |msg: String| usage(format!("`fit.input` {}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        header.iter().position(|h| h.trim() == name).ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let (ti, ui) = (col("t")?, col("axis_urr")?);
    let mut times = Vec::new();
    let mut curv = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let cell = |i: usize| -> Result<f64, CliError> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| bad(format!("row {} is not numeric", line + 2)))
        };
        times.push(cell(ti)?);
        curv.push(cell(ui)?);
    }
    Ok((times, curv))
}

/// Axis curvature of the `+` explicit solution on the fit window, with
/// seeded multiplicative noise.
fn synthetic_series(config: &RunConfig) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let f = &config.fit;
    let u = ExplicitSolution::new(membrane_core::equations::Branch::Plus, f.blowup_time)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = f.samples;
    let mut times = Vec::with_capacity(n);
    let mut curv = Vec::with_capacity(n);
    for k in 0..n {
        let t = f.window_lo + (f.window_hi - f.window_lo) * k as f64 / (n - 1) as f64;
        let noise = if f.noise > 0.0 { rng.gen_range(-f.noise..=f.noise) } else { 0.0 };
        times.push(t);
        curv.push(u.axis_second_derivative(t)? * (1.0 + noise));
    }
    Ok((times, curv))
}

pub fn execute(config: &RunConfig, prepared: Prepared, out: &mut Artifacts) -> Result<Outcome, CliError> {
    match config.command {
        Command::Verify => run_verify(out),
        Command::Profile => run_profile(config, out),
        Command::Evolve => run_evolve(config, out),
        Command::Similarity => run_similarity(config, out),
        Command::Modes => run_modes(out),
        Command::Fit => match prepared {
            Prepared::FitSeries { times, axis_urr, synthetic } => {
                run_fit(config, &times, &axis_urr, synthetic, out)
            }
            Prepared::None => unreachable!("fit inputs are prepared before execution"),
        },
    }
}

fn run_verify(out: &mut Artifacts) -> Result<Outcome, CliError> {
    let rows = run_suite();
    let records: Vec<Json> = rows.iter().map(|r| r.to_json()).collect();
    out.write_jsonl("verify.jsonl", &records)?;
    let failed = rows.iter().filter(|r| !r.passed).count();
    let summary = format!("{}{} of {} checks passed", format_table(&rows), rows.len() - failed, rows.len());
    Ok(if failed == 0 {
        Outcome::ok(summary)
    } else {
        Outcome { status: "verify_failed".into(), exit_code: exit::VERIFY_FAILED, summary }
    })
}

fn run_profile(config: &RunConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let p = &config.profile;
    let seed = TaylorSeed::new(p.a, p.b, p.order, p.start_rho)?;
    let controls = ProfileControls {
        atol: config.tol.atol,
        rtol: config.tol.rtol,
        degeneracy_threshold: config.tol.degeneracy,
        ..Default::default()
    };
    let sol = integrate_profile(&seed, p.rho_end, &controls)?;
    let indicator = sol.degeneracy_indicator();
    out.write_csv(
        "profile.csv",
        ["rho", "phi", "dphi", "degeneracy_indicator"],
        (0..sol.len()).map(|i| [sol.rho()[i], sol.phi()[i], sol.dphi()[i], indicator[i]]),
    )?;
    let parity = parity_check(&sol)?;
    let (rho, phi, dphi) = sol.last();
    out.write_jsonl(
        "profile_summary.jsonl",
        &[json!({
            "termination": sol.termination().to_string(),
            "samples": sol.len(),
            "rho_final": rho,
            "phi_final": phi,
            "dphi_final": dphi,
            "parity_first": parity.first,
            "parity_third": parity.third,
        })],
    )?;
    let summary = format!(
        "profile {}: {} samples, phi({rho}) = {phi}, parity defect {:.3e}",
        sol.termination(),
        sol.len(),
        parity.max_abs
    );
    Ok(match sol.termination() {
        Termination::ReachedEnd => Outcome::ok(summary),
        other => Outcome { status: other.to_string(), exit_code: exit::NUMERICAL, summary },
    })
}

fn initial_state(config: &RunConfig, grid: &RadialGrid<f64>) -> Result<FieldState<f64>, CliError> {
    let (a, w) = (config.ic.amplitude, config.ic.width);
    let u = move |r: f64| a * (-(r / w) * (r / w)).exp();
    let u_r = move |r: f64| -2.0 * r / (w * w) * u(r);
    Ok(match config.ic.kind {
        IcKind::Gaussian => grid.sample(0.0, u, |_| 0.0)?,
        // Velocity on the light cone of the data: h = 1 - w^2 + u_r^2 = 0.
        IcKind::Lightlike => grid.sample(0.0, u, move |r| (1.0 + u_r(r) * u_r(r)).sqrt())?,
    })
}

fn blowup_json(fit: &Option<BlowupFit<f64>>) -> Json {
    match fit {
        Some(f) => json!({
            "t_est": f.t_est,
            "amplitude_c": f.amplitude_c,
            "fit_residual": f.fit_residual,
            "window": [f.window.0, f.window.1],
            "samples": f.samples,
        }),
        None => Json::Null,
    }
}

fn run_evolve(config: &RunConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let grid = RadialGrid::new(config.grid.r_max, config.grid.n)?;
    let initial = initial_state(config, &grid)?;
    let controls = EvolveControls {
        cfl: config.time.cfl,
        h_floor: config.tol.h_floor,
        stencil_order: config.grid.stencil_order,
        max_steps: config.time.max_steps,
        snapshot_every: config.time.snapshot_every,
        geometry: Geometry::Radial,
        ..Default::default()
    };
    let ev = evolve(&initial, &grid, config.time.t_end, &controls)?;
    let r = &grid.coordinates();
    out.write_csv(
        "trajectory.csv",
        ["t", "r", "u", "w"],
        ev.snapshots.iter().flat_map(|s| (0..s.len()).map(move |i| [s.t, r[i], s.u[i], s.w[i]])),
    )?;
    out.write_csv(
        "monitors.csv",
        ["t", "min_h", "axis_urr", "max_abs_u"],
        ev.monitors.iter().map(|m| [m.t, m.min_h, m.axis_urr, m.max_abs_u]),
    )?;
    let times: Vec<f64> = ev.monitors.iter().map(|m| m.t).collect();
    let curv: Vec<f64> = ev.monitors.iter().map(|m| m.axis_urr).collect();
    let fit = detect_blowup(&times, &curv).ok();
    let last = ev.monitors[ev.monitors.len() - 1];
    let (t_halt, min_h) = match &ev.termination {
        EvolveTermination::Degeneracy { t, min_h } => (Json::from(*t), Json::from(*min_h)),
        _ => (Json::Null, Json::from(last.min_h)),
    };
    out.write_jsonl(
        "evolve_summary.jsonl",
        &[json!({
            "termination": ev.termination.label(),
            "message": ev.termination.to_string(),
            "steps": ev.steps,
            "t_final": ev.state.t,
            "degeneracy_time": t_halt,
            "min_h": min_h,
            "blowup_fit": blowup_json(&fit),
        })],
    )?;
    let summary = format!(
        "evolve {} after {} steps at t = {} (min h {:.3e})",
        ev.termination, ev.steps, ev.state.t, last.min_h
    );
    Ok(if ev.termination.is_complete() {
        Outcome::ok(summary)
    } else {
        Outcome { status: ev.termination.label().into(), exit_code: exit::NUMERICAL, summary }
    })
}

fn run_similarity(config: &RunConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let g = &config.grid;
    let grid = SimilarityGrid::new(g.rho_min, g.rho_max, g.n)?;
    let reference = explicit_profile_samples(config.ic.branch, &grid)?;
    let initial = if config.ic.epsilon == 0.0 {
        SimilarityState::new(0.0, grid, reference.clone(), vec![0.0; grid.nodes()])?
    } else {
        let bump = Bump::new(config.ic.bump_center, config.ic.bump_width)?;
        perturbed_initial_data(config.ic.branch, grid, bump, config.ic.epsilon)?
    };
    let controls = SimilarityControls {
        cfl: config.time.cfl,
        stencil_order: g.stencil_order,
        max_steps: config.time.max_steps,
        snapshot_every: config.time.snapshot_every,
        ..Default::default()
    };
    let ev = evolve_similarity(&initial, &reference, config.time.tau_end, &controls)?;
    let rho = &grid.coordinates();
    out.write_csv(
        "similarity.csv",
        ["tau", "rho", "v_tilde", "v_tilde_tau"],
        ev.snapshots
            .iter()
            .flat_map(|s| (0..rho.len()).map(move |i| [s.tau, rho[i], s.v_tilde[i], s.v_tilde_tau[i]])),
    )?;
    out.write_csv(
        "norms.csv",
        ["tau", "perturbation_sup_norm"],
        ev.norms.iter().map(|n| [n.tau, n.sup_norm]),
    )?;
    let mut report = mode_audit();
    let mut summary = format!(
        "similarity {} after {} steps at tau = {}: max deviation {:.3e}",
        ev.termination,
        ev.steps,
        ev.state.tau,
        ev.max_sup_norm()
    );
    if config.ic.epsilon != 0.0 && ev.termination.is_complete() {
        let window = (config.fit.window_lo, config.fit.window_hi);
        let fit = fit_growth_rate(&ev.taus(), &ev.sup_norms(), window)?;
        summary.push_str(&format!(", growth rate {} on tau in [{}, {}]", fit.rate, window.0, window.1));
        report = report.with_measured_rate(fit.rate);
    }
    out.write_jsonl("modes.jsonl", &[report.to_json()])?;
    Ok(if ev.termination.is_complete() {
        Outcome::ok(summary)
    } else {
        Outcome { status: ev.termination.label().into(), exit_code: exit::NUMERICAL, summary }
    })
}

fn run_modes(out: &mut Artifacts) -> Result<Outcome, CliError> {
    let report = mode_audit();
    out.write_jsonl("modes.jsonl", &[report.to_json()])?;
    Ok(Outcome::ok(report.to_json_line()))
}

fn run_fit(
    config: &RunConfig,
    times: &[f64],
    curv: &[f64],
    synthetic: bool,
    out: &mut Artifacts,
) -> Result<Outcome, CliError> {
    out.write_csv("fit_series.csv", ["t", "axis_urr"], times.iter().zip(curv).map(|(&t, &u)| [t, u]))?;
    let fit = detect_blowup(times, curv)?;
    let truth = synthetic.then_some(config.fit.blowup_time);
    out.write_jsonl(
        "blowup.jsonl",
        &[json!({
            "t_est": fit.t_est,
            "amplitude_c": fit.amplitude_c,
            "fit_residual": fit.fit_residual,
            "window": [fit.window.0, fit.window.1],
            "samples": fit.samples,
            "synthetic_blowup_time": truth,
        })],
    )?;
    Ok(Outcome::ok(format!(
        "blow-up time {} (amplitude {}, {} samples)",
        fit.t_est, fit.amplitude_c, fit.samples
    )))
}
