//! The linearized similarity-frame operator against finite-difference
//! partials of the full residual, its degeneracy on the explicit profiles,
//! and the reduced linear equation.

use membrane_core::equations::{
    explicit_profile, similarity_field, similarity_residual, Branch, ExplicitSolution, ProfileJet,
    SecondOrderJet,
};
use membrane_core::similarity_evolution::{
    linearized_coefficients, linearized_coefficients_at, reduced_linear_solution,
};
use membrane_core::spectral::fit_growth_rate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Central-difference partials of the similarity residual at the static jet
/// of `p`, one per jet slot `(v, v_tau, v_rho, v_tautau, v_taurho, v_rhorho)`.
fn residual_partials(p: &ProfileJet<f64>, rho: f64) -> [f64; 6] {
    let base = p.to_static_jet().as_array();
    let mut out = [0.0; 6];
    for (k, slot) in out.iter_mut().enumerate() {
        let h = 1e-5 * base[k].abs().max(1.0);
        let eval = |shift: f64| {
            let mut a = base;
            a[k] += shift;
            similarity_residual(&SecondOrderJet::from_array(a).unwrap(), rho).unwrap()
        };
        *slot = (eval(h) - eval(-h)) / (2.0 * h);
    }
    out
}

#[test]
fn coefficients_are_the_partials_of_the_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let rho = rng.gen_range(0.05..0.95);
        let p = ProfileJet::new(rng.gen_range(-1.5..1.5), rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0))
            .unwrap();
        let c = linearized_coefficients_at(&p, rho).unwrap();
        // Slot order of the jet is (v, v_tau, v_rho, v_tautau, v_taurho, v_rhorho).
        let ours = [c.c_0, c.c_t, c.c_rho, c.c_tt, c.c_trho, c.c_rhorho];
        for (k, (a, b)) in ours.iter().zip(residual_partials(&p, rho)).enumerate() {
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0), "slot {k} at rho {rho}: {a} vs {b}");
        }
    }
}

#[test]
fn principal_coefficients_vanish_on_the_explicit_profiles() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let rho: f64 = rng.gen_range(0.01..0.99);
        let q = 1.0 - rho * rho;
        for branch in Branch::BOTH {
            let c = linearized_coefficients(branch, rho).unwrap();
            assert!(c.c_trho.abs() <= 1e-12 && c.c_rhorho.abs() <= 1e-12, "rho {rho}");
            assert!(c.c_rho.abs() <= 1e-12 * q.recip().powi(2));
            let reduced = [c.c_tt * q, c.c_t * q, c.c_0 * q];
            for (got, want) in reduced.iter().zip([1.0, 3.0, -4.0]) {
                assert!((got - want).abs() <= 1e-10, "rho {rho}: {reduced:?}");
            }
        }
    }
}

/// Shifting the blow-up time of an explicit solution perturbs the profile in
/// similarity variables along the `e^tau / sqrt(1 - rho^2)` direction, a
/// solution of the reduced equation with rate one.
#[test]
fn blowup_time_shift_is_the_unit_rate_mode() {
    let delta = 1e-7;
    let shifted = similarity_field(1.0, ExplicitSolution::new(Branch::Plus, 1.0 + delta).unwrap()).unwrap();
    for rho in [0.1f64, 0.4, 0.7] {
        let phi = explicit_profile(Branch::Plus, rho).unwrap().phi();
        for tau in [0.0f64, 1.0, 2.0] {
            let v = shifted.value(tau, rho).unwrap() - phi;
            let mode = delta * tau.exp() / (1.0 - rho * rho).sqrt();
            assert!((v - mode).abs() <= 1e-3 * mode.abs(), "tau {tau}, rho {rho}: {v} vs {mode}");
        }
    }
}

#[test]
fn reduced_solution_satisfies_its_equation() {
    // Fourth-order central differences; the residual is measured against
    // the size of the three terms because the growing mode reaches e^5.
    let h = 1e-3;
    for (v0, vt0) in [(1.0, 0.0), (0.0, 1.0), (0.3, -2.0), (1.0, 1.0)] {
        let v = |tau: f64| reduced_linear_solution(v0, vt0, tau);
        assert!((v(0.0) - v0).abs() <= 1e-15);
        for k in 0..=50 {
            let tau = 0.1 * k as f64;
            let (m2, m1, c, p1, p2) = (v(tau - 2.0 * h), v(tau - h), v(tau), v(tau + h), v(tau + 2.0 * h));
            let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
            let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
            let scale = d2.abs() + 3.0 * d1.abs() + 4.0 * c.abs();
            let res = d2 + 3.0 * d1 - 4.0 * c;
            assert!(res.abs() <= 1e-8 * scale.max(1.0), "tau {tau}: residual {res}");
        }
    }
}

#[test]
fn growth_fit_recovers_the_dominant_root() {
    let taus: Vec<f64> = (0..=300).map(|k| 2.0 + 0.01 * k as f64).collect();
    let norms: Vec<f64> = taus.iter().map(|&t| reduced_linear_solution(1.0, 0.5, t).abs()).collect();
    let fit = fit_growth_rate(&taus, &norms, (2.0, 5.0)).unwrap();
    assert!((fit.rate - 1.0).abs() <= 1e-3, "rate {}", fit.rate);
    assert_eq!(fit.samples, 301);
}
