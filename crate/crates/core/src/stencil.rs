//! Finite-difference weights on arbitrary nodes and precomputed first/second
//! derivative stencils on uniform grids.

use crate::error::{validation, Result};
use crate::scalar::Real;

/// Fornberg's recursion for finite-difference weights.
///
/// Returns `w[k][j]`, the weight of `f(nodes[j])` in the approximation of the
/// `k`-th derivative at `z`, for `k = 0..=max_derivative`.
pub fn fornberg_weights<T: Real>(z: T, nodes: &[T], max_derivative: usize) -> Vec<Vec<T>> {
    let n = nodes.len();
    let m = max_derivative;
    let mut c = vec![vec![T::zero(); n]; m + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = T::one();
    let mut c4 = nodes[0] - z;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (T::from_index(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - T::from_index(k) * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Treatment of the left end of a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeftEnd {
    /// Node 0 is a symmetry axis: ghost values mirror interior ones,
    /// `f(-x) = f(x)`.
    EvenReflection,
    /// Shifted one-sided stencils, no ghost data.
    OneSided,
}

#[derive(Debug, Clone)]
struct NodeStencil<T> {
    /// Node index of each weight; negative indices are mirrored.
    offsets: Vec<isize>,
    d1: Vec<T>,
    d2: Vec<T>,
}

/// Centered stencils of accuracy `order` in the interior, shifted one-sided
/// stencils with one extra node at non-reflecting ends.
#[derive(Debug, Clone)]
pub struct UniformStencils<T> {
    order: usize,
    spacing: T,
    nodes: Vec<NodeStencil<T>>,
}

impl<T: Real> UniformStencils<T> {
    pub fn new(n_nodes: usize, spacing: T, order: usize, left: LeftEnd) -> Result<Self> {
        if !matches!(order, 2 | 4 | 6 | 8) {
            return Err(validation(format!("stencil order must be 2, 4, 6 or 8, got {order}")));
        }
        if n_nodes < order + 3 {
            return Err(validation(format!("{n_nodes} nodes are too few for order-{order} stencils")));
        }
        if !(spacing.is_finite() && spacing > T::zero()) {
            return Err(validation(format!("grid spacing must be positive, got {spacing}")));
        }
        let half = (order / 2) as isize;
        let last = n_nodes as isize - 1;
        let wide = order as isize + 2;
        let mut nodes = Vec::with_capacity(n_nodes);
        for i in 0..n_nodes as isize {
            let offsets: Vec<isize> = if i + half > last {
                (last - wide + 1..=last).collect()
            } else if i - half >= 0 || left == LeftEnd::EvenReflection {
                (i - half..=i + half).collect()
            } else {
                (0..wide).collect()
            };
            let xs: Vec<T> = offsets.iter().map(|&k| T::from_isize(k).unwrap()).collect();
            let w = fornberg_weights(T::from_isize(i).unwrap(), &xs, 2);
            let d1 = w[1].iter().map(|&c| c / spacing).collect();
            let d2 = w[2].iter().map(|&c| c / (spacing * spacing)).collect();
            nodes.push(NodeStencil { offsets, d1, d2 });
        }
        Ok(Self { order, spacing, nodes })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// First and second derivatives of `f` at every node.
    ///
    /// The weights sum to zero, so they are applied to differences from the
    /// centre value; constants then differentiate to exactly zero.
    pub fn apply(&self, f: &[T], d1: &mut [T], d2: &mut [T]) {
        debug_assert_eq!(f.len(), self.nodes.len());
        for (i, st) in self.nodes.iter().enumerate() {
            let mut a = T::zero();
            let mut b = T::zero();
            for (k, &off) in st.offsets.iter().enumerate() {
                let v = f[off.unsigned_abs()] - f[i];
                a = a + st.d1[k] * v;
                b = b + st.d2[k] * v;
            }
            d1[i] = a;
            d2[i] = b;
        }
    }

    /// First derivative only.
    pub fn apply_d1(&self, f: &[T], d1: &mut [T]) {
        for (i, st) in self.nodes.iter().enumerate() {
            let mut a = T::zero();
            for (k, &off) in st.offsets.iter().enumerate() {
                a = a + st.d1[k] * (f[off.unsigned_abs()] - f[i]);
            }
            d1[i] = a;
        }
    }
}

/// Lagrange interpolation of uniformly sampled data `f` (node `i` at
/// `x0 + i h`) at `x`, using the `points` nodes closest to `x`.
pub fn interpolate_uniform<T: Real>(x0: T, h: T, f: &[T], x: T, points: usize) -> Result<T> {
    let n = f.len();
    if points < 2 || points > n {
        return Err(validation(format!("cannot interpolate with {points} of {n} samples")));
    }
    let pos = (x - x0) / h;
    let last = T::from_index(n - 1);
    if pos < -T::epsilon() || pos > last + T::lit(1e-9) {
        return Err(validation(format!("interpolation point {x} outside the sampled range")));
    }
    let centre = pos.floor().to_isize().unwrap_or(0);
    let start = (centre - (points as isize - 1) / 2).clamp(0, (n - points) as isize) as usize;
    let xs: Vec<T> = (start..start + points).map(T::from_index).collect();
    let w = fornberg_weights(pos, &xs, 0);
    Ok(w[0].iter().zip(&f[start..start + points]).fold(T::zero(), |acc, (&c, &v)| acc + c * v))
}
