//! Convergence, reversibility and reproducibility of the two evolution
//! solvers, and the blow-up fit on synthetic series.

use membrane_core::equations::{Branch, ExplicitSolution};
use membrane_core::evolution::{detect_blowup, evolve, EvolveControls, FieldState, RadialGrid};
use membrane_core::similarity_evolution::{
    evolve_similarity, explicit_profile_samples, perturbed_initial_data, Bump, SimilarityControls,
    SimilarityGrid, SimilarityState,
};
use membrane_core::spectral::fit_growth_rate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gaussian_state(grid: &RadialGrid<f64>) -> FieldState<f64> {
    grid.sample(0.0, |r| 0.01 * (-r * r).exp(), |_| 0.0).unwrap()
}

fn evolve_gaussian(n: usize, t_end: f64) -> FieldState<f64> {
    let grid = RadialGrid::new(5.0, n).unwrap();
    let ev = evolve(&gaussian_state(&grid), &grid, t_end, &EvolveControls::default()).unwrap();
    assert!(ev.termination.is_complete(), "{}", ev.termination);
    ev.state
}

/// Largest difference between a coarse state and the fine state restricted
/// to the coarse nodes.
fn restricted_difference(coarse: &FieldState<f64>, fine: &FieldState<f64>) -> f64 {
    let ratio = (fine.len() - 1) / (coarse.len() - 1);
    (0..coarse.len()).map(|i| (coarse.u[i] - fine.u[ratio * i]).abs()).fold(0.0, f64::max)
}

#[test]
fn physical_solver_converges_at_second_order() {
    let s = [256, 512, 1024].map(|n| evolve_gaussian(n, 0.2));
    let d1 = restricted_difference(&s[0], &s[1]);
    let d2 = restricted_difference(&s[1], &s[2]);
    let order = (d1 / d2).log2();
    assert!((1.7..=2.3).contains(&order), "observed order {order} ({d1:e}, {d2:e})");
}

#[test]
fn physical_solver_is_time_reversible() {
    let grid = RadialGrid::new(5.0, 256).unwrap();
    let start = gaussian_state(&grid);
    let c = EvolveControls::default();
    let forward = evolve(&start, &grid, 0.2, &c).unwrap().state;
    let flipped = FieldState::new(0.0, forward.u.clone(), forward.w.iter().map(|w| -w).collect()).unwrap();
    let back = evolve(&flipped, &grid, 0.2, &c).unwrap().state;
    let err = (0..start.len())
        .map(|i| (back.u[i] - start.u[i]).abs().max((back.w[i] + start.w[i]).abs()))
        .fold(0.0, f64::max);
    assert!(err <= 1e-9, "round trip error {err:e}");
}

#[test]
fn evolutions_are_bitwise_reproducible() {
    let a = evolve_gaussian(128, 0.3);
    let b = evolve_gaussian(128, 0.3);
    assert_eq!(a, b);
}

#[test]
fn explicit_solution_curvature_series_fits_its_blowup_time() {
    let u = ExplicitSolution::new(Branch::Plus, 1.0f64).unwrap();
    let times: Vec<f64> = (0..21).map(|k| 0.5 + 0.02 * k as f64).collect();
    let clean: Vec<f64> = times.iter().map(|&t| u.axis_second_derivative(t).unwrap()).collect();
    let fit = detect_blowup(&times, &clean).unwrap();
    assert!((fit.t_est - 1.0).abs() <= 1e-6 && (fit.amplitude_c - 1.0).abs() <= 1e-6);

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let noisy: Vec<f64> = clean.iter().map(|v| v * (1.0 + rng.gen_range(-0.01..0.01))).collect();
    let fit = detect_blowup(&times, &noisy).unwrap();
    assert!((fit.t_est - 1.0).abs() <= 1e-2, "noisy estimate {}", fit.t_est);
}

fn similarity_grid(n: usize) -> SimilarityGrid<f64> {
    SimilarityGrid::new(0.01, 0.99, n).unwrap()
}

#[test]
fn explicit_profile_is_static_under_similarity_evolution() {
    let devs = [256, 512].map(|n| {
        let grid = similarity_grid(n);
        let phi = explicit_profile_samples(Branch::Plus, &grid).unwrap();
        let s0 = SimilarityState::new(0.0, grid, phi.clone(), vec![0.0; grid.nodes()]).unwrap();
        let ev = evolve_similarity(&s0, &phi, 1.0, &SimilarityControls::default()).unwrap();
        assert!(ev.termination.is_complete());
        ev.max_sup_norm()
    });
    assert!(devs[1] <= 1e-8, "deviation {:e}", devs[1]);
    assert!((devs[0] / devs[1]).log2() >= 1.7);
}

#[test]
fn small_perturbations_grow_at_the_unit_rate() {
    let grid = similarity_grid(256);
    let phi = explicit_profile_samples(Branch::Minus, &grid).unwrap();
    let bump = Bump::new(0.5, 0.2).unwrap();
    let s0 = perturbed_initial_data(Branch::Minus, grid, bump, 1e-5).unwrap();
    let ev = evolve_similarity(&s0, &phi, 4.0, &SimilarityControls::default()).unwrap();
    assert!(ev.termination.is_complete());
    let fit = fit_growth_rate(&ev.taus(), &ev.sup_norms(), (2.0, 4.0)).unwrap();
    assert!((fit.rate - 1.0).abs() <= 1e-2, "rate {}", fit.rate);
}
