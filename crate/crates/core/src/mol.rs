//! Method-of-lines time stepping shared by the physical and similarity-frame
//! solvers. Both evolve a pair `(u, w = u_t)` under `u_t = w`,
//! `w_t = a(u, w)` with the classical fourth-order Runge-Kutta scheme.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Semi-discrete second-order-in-time system.
pub trait SecondOrderSystem<T: Real> {
    /// Writes the acceleration `u_tt` at every node into `out`.
    fn acceleration(&self, u: &[T], w: &[T], out: &mut [T]) -> Result<()>;
}

/// Scratch space for [`Rk4::step`].
#[derive(Debug, Clone)]
pub struct Rk4<T> {
    ku: [Vec<T>; 4],
    kw: [Vec<T>; 4],
    u_stage: Vec<T>,
    w_stage: Vec<T>,
}

impl<T: Real> Rk4<T> {
    pub fn new(n: usize) -> Self {
        let z = || vec![T::zero(); n];
        Self { ku: [z(), z(), z(), z()], kw: [z(), z(), z(), z()], u_stage: z(), w_stage: z() }
    }

    /// Advances `(u, w)` by `dt` in place. On error the state is untouched.
    pub fn step<S: SecondOrderSystem<T>>(&mut self, sys: &S, u: &mut [T], w: &mut [T], dt: T) -> Result<()> {
        let half = T::lit(0.5) * dt;
        let n = u.len();
        let coeff = [T::zero(), half, half, dt];
        for stage in 0..4 {
            if stage == 0 {
                self.u_stage.copy_from_slice(u);
                self.w_stage.copy_from_slice(w);
            } else {
                let c = coeff[stage];
                for i in 0..n {
                    self.u_stage[i] = u[i] + c * self.ku[stage - 1][i];
                    self.w_stage[i] = w[i] + c * self.kw[stage - 1][i];
                }
            }
            self.ku[stage].copy_from_slice(&self.w_stage);
            let (kw, _) = self.kw.split_at_mut(stage + 1);
            sys.acceleration(&self.u_stage, &self.w_stage, &mut kw[stage])?;
        }
        let sixth = dt / T::lit(6.0);
        let two = T::lit(2.0);
        for i in 0..n {
            let du = self.ku[0][i] + two * self.ku[1][i] + two * self.ku[2][i] + self.ku[3][i];
            let dw = self.kw[0][i] + two * self.kw[1][i] + two * self.kw[2][i] + self.kw[3][i];
            let un = u[i] + sixth * du;
            let wn = w[i] + sixth * dw;
            if !(un.is_finite() && wn.is_finite()) {
                return Err(Error::NumericalFailure(format!("non-finite value at node {i}")));
            }
            self.u_stage[i] = un;
            self.w_stage[i] = wn;
        }
        u.copy_from_slice(&self.u_stage);
        w.copy_from_slice(&self.w_stage);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Oscillator;
    impl SecondOrderSystem<f64> for Oscillator {
        fn acceleration(&self, u: &[f64], _w: &[f64], out: &mut [f64]) -> Result<()> {
            out[0] = -u[0];
            Ok(())
        }
    }

    #[test]
    fn fourth_order_on_harmonic_oscillator() {
        let run = |steps: usize| {
            let mut rk = Rk4::new(1);
            let (mut u, mut w) = (vec![1.0], vec![0.0]);
            let dt = 1.0 / steps as f64;
            for _ in 0..steps {
                rk.step(&Oscillator, &mut u, &mut w, dt).unwrap();
            }
            (u[0] - 1f64.cos()).abs()
        };
        let p = (run(20) / run(40)).log2();
        assert!((p - 4.0).abs() < 0.2, "observed order {p}");
    }
}
