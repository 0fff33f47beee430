//! Residual and invariant suite behind the `verify` command. Each check
//! compares one measured quantity against a fixed limit.

use membrane_core::equations::{
    from_similarity, membrane_residual, membrane_residual_scale, ode_residual, ode_residual_regrouped,
    scaling_transform, similarity_field, to_similarity, Branch, ExplicitSolution, Field, JetField,
    ProfileJet, SecondOrderJet,
};
use membrane_core::evolution::detect_blowup;
use membrane_core::selfsimilar_ode::{integrate_ivp, integrate_profile, ProfileControls, TaylorSeed};
use membrane_core::similarity_evolution::{linearized_coefficients, reduced_linear_solution};
use membrane_core::spectral::mode_audit;
use serde_json::{json, Value as Json};

/// Outcome of one check: `passed` is `measured <= limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
}

impl CheckRow {
    fn at_most(name: &'static str, measured: f64, limit: f64) -> Self {
        Self { name, measured, limit, passed: measured <= limit }
    }

    /// A yes/no check recorded as a count of violations.
    fn holds(name: &'static str, ok: bool) -> Self {
        Self::at_most(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn to_json(&self) -> Json {
        json!({
            "check": self.name,
            "measured": self.measured,
            "limit": self.limit,
            "passed": self.passed,
        })
    }
}

/// `index`-th element of the van der Corput sequence in `base`.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

const CONE_POINTS: u64 = 10_000;
const BLOWUP_TIMES: [f64; 3] = [0.5, 1.0, 3.0];
/// Fraction of the cone sampled by the absolute residual check.
const CONE_MARGIN: f64 = 0.95;

fn worst(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

fn explicit_residuals(sub_cone: bool) -> (f64, f64) {
    let mut abs = 0.0f64;
    let mut rel = 0.0f64;
    let shrink = if sub_cone { CONE_MARGIN } else { 1.0 };
    for branch in Branch::BOTH {
        for blowup in BLOWUP_TIMES {
            let u = ExplicitSolution::new(branch, blowup).expect("positive blow-up time");
            for k in 1..=CONE_POINTS {
                let t = shrink * halton(k, 2) * blowup;
                let r = shrink * halton(k, 3) * (blowup - t);
                let Some(j) = u.jet(t, r).ok().and_then(|e| e.jet()) else { continue };
                if r <= 0.0 {
                    continue;
                }
                let res = membrane_residual(&j, r).expect("interior jet").abs();
                abs = abs.max(res);
                rel = rel.max(res / membrane_residual_scale(&j, r).expect("interior jet"));
            }
        }
    }
    (abs, rel)
}

fn regrouping_gap() -> f64 {
    worst((1..=2000u64).map(|k| {
        let rho = halton(k, 2);
        let phi = 4.0 * halton(k, 3) - 2.0;
        let d1 = 6.0 * halton(k, 5) - 3.0;
        let d2 = 10.0 * halton(k, 7) - 5.0;
        let p = ProfileJet::new(phi, d1, d2).expect("finite");
        let a = ode_residual(&p, rho).expect("rho in [0, 1]");
        let b = ode_residual_regrouped(&p, rho).expect("rho in [0, 1]");
        let scale = 1.0
            + rho * d2.abs() * (1.0 + rho * rho + phi * phi)
            + d1.abs() * (1.0 + phi * phi)
            + 2.0 * rho * (phi * d1 * d1).abs()
            + (1.0 + rho * rho) * d1.abs().powi(3);
        (a - b).abs() / scale
    }))
}

fn coordinate_round_trip() -> f64 {
    worst((1..=2000u64).map(|k| {
        let blowup = 0.1 + 4.9 * halton(k, 2);
        let t = 0.99 * blowup * halton(k, 3);
        let r = 10.0 * halton(k, 5);
        let (tau, rho) = to_similarity(blowup, t, r).expect("t < T");
        let (t2, r2) = from_similarity(blowup, tau, rho).expect("finite");
        ((t2 - t).abs() / blowup.max(1.0)).max((r2 - r).abs() / r.max(1.0))
    }))
}

fn similarity_variance() -> f64 {
    let mut out = 0.0f64;
    for branch in Branch::BOTH {
        let view = similarity_field(1.0, ExplicitSolution::new(branch, 1.0).expect("T = 1")).expect("T = 1");
        for k in 1..=200u64 {
            let rho = 0.95 * halton(k, 2);
            let vals: Vec<f64> = (0..8).map(|m| view.value(-1.0 + m as f64, rho).expect("inside")).collect();
            let mean = vals.iter().sum::<f64>() / 8.0;
            out = out.max(vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 8.0);
        }
    }
    out
}

/// Polynomial field that does not solve the membrane equation.
#[derive(Clone, Copy)]
struct Probe;

impl Field<f64> for Probe {
    fn value(&self, t: f64, r: f64) -> membrane_core::Result<f64> {
        Ok(0.3 * t * t + 0.2 * r * r * (1.0 + t) + 0.1 * r.powi(4))
    }
}

impl JetField<f64> for Probe {
    fn jet(&self, t: f64, r: f64) -> membrane_core::Result<SecondOrderJet<f64>> {
        SecondOrderJet::new(
            self.value(t, r)?,
            0.6 * t + 0.2 * r * r,
            0.4 * r * (1.0 + t) + 0.4 * r.powi(3),
            0.6,
            0.4 * r,
            0.4 * (1.0 + t) + 1.2 * r * r,
        )
    }
}

fn scaling_gap() -> f64 {
    let mut out = 0.0f64;
    for lambda in [0.5, 2.0, 7.3] {
        let scaled = scaling_transform(Probe, lambda).expect("positive scale");
        for k in 1..=200u64 {
            let (t, r) = (2.0 * halton(k, 2), 0.05 + 1.5 * halton(k, 3));
            let lhs = membrane_residual(&scaled.jet(lambda * t, lambda * r).expect("polynomial"), lambda * r)
                .expect("r > 0");
            let rhs = membrane_residual(&Probe.jet(t, r).expect("polynomial"), r).expect("r > 0") / lambda;
            out = out.max((lhs - rhs).abs());
        }
    }
    out
}

fn tangent_line_error() -> f64 {
    let beta = 0.5f64;
    let alpha = (1.0 + beta * beta).sqrt();
    let line = |rho: f64| alpha + beta * rho;
    match integrate_ivp(0.3, line(0.3), beta, 0.9, &ProfileControls::default()) {
        Ok(sol) => sol.max_deviation_from(0.9, line),
        Err(_) => f64::INFINITY,
    }
}

fn hyperbola_error() -> f64 {
    let seed = TaylorSeed::new(1.0, 1.0, 8, 0.05).expect("regular seed");
    match integrate_profile(&seed, 0.9, &ProfileControls::default()) {
        Ok(sol) => sol.max_deviation_from(0.9, |r| (1.0 + r * r).sqrt()),
        Err(_) => f64::INFINITY,
    }
}

fn linearized_degeneracy() -> f64 {
    let mut out = 0.0f64;
    for branch in Branch::BOTH {
        for k in 1..=1000u64 {
            let rho = 0.01 + 0.98 * halton(k, 2);
            let c = linearized_coefficients(branch, rho).expect("rho in (0, 1)");
            out = out.max(c.c_trho.abs()).max(c.c_rhorho.abs());
        }
    }
    out
}

fn reduced_equation_residual() -> f64 {
    let h = 1e-3;
    let mut out = 0.0f64;
    for (v0, vt0) in [(1.0, 0.0), (0.0, 1.0), (0.3, -2.0)] {
        let v = |tau: f64| reduced_linear_solution(v0, vt0, tau);
        for k in 0..=50 {
            let tau = 0.1 * k as f64;
            let f = [v(tau - 2.0 * h), v(tau - h), v(tau), v(tau + h), v(tau + 2.0 * h)];
            let d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
            let d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
            let scale = (d2.abs() + 3.0 * d1.abs() + 4.0 * f[2].abs()).max(1.0);
            out = out.max((d2 + 3.0 * d1 - 4.0 * f[2]).abs() / scale);
        }
    }
    out
}

fn blowup_fit_error() -> f64 {
    let u = ExplicitSolution::new(Branch::Plus, 1.0).expect("T = 1");
    let times: Vec<f64> = (0..21).map(|k| 0.5 + 0.02 * k as f64).collect();
    let curv: Vec<f64> = times.iter().map(|&t| u.axis_second_derivative(t).expect("t < T")).collect();
    match detect_blowup(&times, &curv) {
        Ok(fit) => (fit.t_est - 1.0).abs(),
        Err(_) => f64::INFINITY,
    }
}

/// Runs every check.
pub fn run_suite() -> Vec<CheckRow> {
    let (sub_abs, _) = explicit_residuals(true);
    let (_, full_rel) = explicit_residuals(false);
    let report = mode_audit();
    vec![
        CheckRow::at_most("explicit_residual_interior", sub_abs, 1e-10),
        CheckRow::at_most("explicit_residual_relative_full_cone", full_rel, 1e-14),
        CheckRow::at_most("profile_equation_regrouping", regrouping_gap(), 1e-14),
        CheckRow::at_most("similarity_coordinates_round_trip", coordinate_round_trip(), 1e-12),
        CheckRow::at_most("similarity_frame_tau_variance", similarity_variance(), 1e-20),
        CheckRow::at_most("scaling_equivariance", scaling_gap(), 1e-10),
        CheckRow::at_most("profile_tangent_line", tangent_line_error(), 1e-9),
        CheckRow::at_most("profile_hyperbola", hyperbola_error(), 1e-8),
        CheckRow::at_most("linearized_principal_part_vanishes", linearized_degeneracy(), 1e-12),
        CheckRow::at_most("eigenvalue_back_substitution", report.back_substitution_residual(), 1e-12),
        CheckRow::holds("unstable_mode_present", report.has_unstable_mode()),
        CheckRow::holds("stated_pair_flagged", !report.agreement),
        CheckRow::at_most("reduced_equation_residual", reduced_equation_residual(), 1e-8),
        CheckRow::at_most("blowup_time_fit", blowup_fit_error(), 1e-6),
    ]
}

/// Plain-text table of the suite.
pub fn format_table(rows: &[CheckRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        out.push_str(&format!(
            "{:<width$}  {}  measured {:.3e}  limit {:.1e}\n",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.measured,
            r.limit,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_prefix() {
        let b2: Vec<f64> = (1..=4).map(|k| halton(k, 2)).collect();
        assert_eq!(b2, [0.5, 0.25, 0.75, 0.125]);
        assert_eq!(halton(1, 3), 1.0 / 3.0);
        assert_eq!(halton(0, 5), 0.0);
    }
}
