//! Discrete error norms and observed orders.

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::problem::ProblemSpec;

/// The three reported error norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl ErrorNorms {
    /// `l1 = w sum |d|`, `l2 = (w sum d^2)^(1/2)`, `linf = max |d|`.
    pub fn weighted(diffs: impl IntoIterator<Item = f64>, weight: f64) -> Self {
        let (mut s1, mut s2, mut inf) = (0.0, 0.0, 0.0f64);
        for d in diffs {
            let a = d.abs();
            s1 += a;
            s2 += a * a;
            inf = inf.max(a);
        }
        Self { l1: weight * s1, l2: (weight * s2).sqrt(), linf: inf }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.l1, self.l2, self.linf]
    }
}

/// Grid norms `(h sum |u_i - v_i|^p)^(1/p)` and the maximum over the interior
/// nodes, against the problem's exact solution at time `t`.
pub fn errors_exact(u: &[f64], problem: &ProblemSpec, grid: &SpatialGrid, t: f64) -> Result<ErrorNorms> {
    let exact = problem.exact.as_ref().ok_or(Error::MissingExactSolution)?;
    if u.len() != grid.interior() {
        return Err(Error::DimensionMismatch { expected: grid.interior(), got: u.len() });
    }
    let xs = grid.interior_nodes();
    Ok(ErrorNorms::weighted(u.iter().zip(&xs).map(|(u, &x)| u - exact(t, x)), grid.h()))
}

/// `log2(e_coarse / e_fine)`; `None` when either error is not positive.
pub fn estimate_order(e_coarse: f64, e_fine: f64) -> Option<f64> {
    (e_coarse > 0.0 && e_fine > 0.0 && e_coarse.is_finite() && e_fine.is_finite()).then(|| (e_coarse / e_fine).log2())
}

/// Four-point centered Lagrange interpolation of nodal values.
///
/// `values` holds all `J + 2` nodes `x_0 ..= x_{J+1}`. For `x` in
/// `[x_k, x_{k+1}]` the stencil is `x_{k-1} ..= x_{k+2}`, shifted inward at
/// the ends of the grid. Exact for cubics, and reproduces node values.
pub fn interpolate_cubic(grid: &SpatialGrid, values: &[f64], x: f64) -> Result<f64> {
    let nodes = grid.interior() + 2;
    if values.len() != nodes {
        return Err(Error::DimensionMismatch { expected: nodes, got: values.len() });
    }
    let (lo, hi) = (grid.xmin(), grid.xmax());
    if !(x >= lo && x <= hi) {
        return Err(Error::WindowOutsideGrid { lo: x, hi: x, xmin: lo, xmax: hi });
    }
    let s = (x - lo) / grid.h();
    let k = (s.floor() as usize).min(nodes - 2);
    if s == k as f64 {
        return Ok(values[k]);
    }
    if nodes < 4 {
        // Too few nodes for a cubic; fall back to linear.
        let w = s - k as f64;
        return Ok((1.0 - w) * values[k] + w * values[k + 1]);
    }
    let start = k.saturating_sub(1).min(nodes - 4);
    let mut acc = 0.0;
    for i in start..start + 4 {
        let mut w = 1.0;
        for m in start..start + 4 {
            if m != i {
                w *= (s - m as f64) / (i as f64 - m as f64);
            }
        }
        acc += w * values[i];
    }
    Ok(acc)
}
