//! Pointwise acceleration laws and characteristic speeds of the membrane and
//! string equations, solved for `u_tt`.

use crate::scalar::Real;

/// `u_tt` from the radial membrane equation at `r > 0`:
///
/// ```text
/// u_tt = [(1 - w^2) u_rr + u_r / r + 2 w u_r w_r - u_r w^2 / r + u_r^3 / r] / (1 + u_r^2)
/// ```
///
/// with `w = u_t`, `w_r = u_tr`. The denominator is at least one.
pub fn interior_acceleration<T: Real>(u_r: T, u_rr: T, w: T, w_r: T, r: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let num = (one - w * w) * u_rr + u_r / r + two * w * u_r * w_r - u_r * w * w / r + u_r * u_r * u_r / r;
    num / (one + u_r * u_r)
}

/// `u_tt` on the axis of an even field. With `u_r -> 0`, the quotients
/// `u_r / r` and `u_r w^2 / r` tend to `u_rr` and `u_rr w^2`, the cubic term
/// vanishes, and the equation reduces to `u_tt = 2 (1 - w^2) u_rr`.
pub fn axis_acceleration<T: Real>(u_rr0: T, w0: T) -> T {
    T::lit(2.0) * (T::one() - w0 * w0) * u_rr0
}

/// `u_tt` from the planar Born-Infeld string equation.
pub fn planar_acceleration<T: Real>(u_x: T, u_xx: T, w: T, w_x: T) -> T {
    let one = T::one();
    ((one - w * w) * u_xx + T::lit(2.0) * w * u_x * w_x) / (one + u_x * u_x)
}

/// Hyperbolicity monitor `1 - w^2 + u_r^2` from nodal values.
pub fn hyperbolicity<T: Real>(u_r: T, w: T) -> T {
    T::one() - w * w + u_r * u_r
}

/// Largest characteristic speed magnitude of the frozen-coefficient
/// principal part, `(-w u_r +- sqrt(h)) / (1 + u_r^2)`. Where `h < 0` the
/// roots are complex and only the real part is used.
pub fn max_characteristic_speed<T: Real>(u_r: T, w: T) -> T {
    let h = hyperbolicity(u_r, w).max(T::zero()).sqrt();
    let den = T::one() + u_r * u_r;
    let c = -w * u_r;
    ((c + h).abs().max((c - h).abs())) / den
}
