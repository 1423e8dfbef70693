//! Data of an obstacle problem `min(v_t + A v, v - phi) = f` on a bounded
//! interval with Dirichlet boundary values, where
//! `A v = -1/2 sigma^2 v_xx + b v_x + r v`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;

/// Function of `(t, x)`.
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Function of a single variable (time for boundary data, space for initial data).
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Wraps a closure into a [`SpaceTimeFn`].
pub fn space_time(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> SpaceTimeFn {
    Arc::new(f)
}

pub fn scalar(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

pub fn constant(c: f64) -> SpaceTimeFn {
    Arc::new(move |_, _| c)
}

/// Coefficients, data and boundary handling of one obstacle problem.
///
/// `ghost_left` / `ghost_right` receive `(t, x)` with `x` the position of
/// the ghost node (`xmin - h` or `xmax + h`); they are only consulted by
/// the fourth-order operator.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub xmin: f64,
    pub xmax: f64,
    pub horizon: f64,
    pub sigma: SpaceTimeFn,
    pub drift: SpaceTimeFn,
    pub rate: SpaceTimeFn,
    pub source: SpaceTimeFn,
    pub obstacle: SpaceTimeFn,
    pub initial: ScalarFn,
    pub dirichlet_left: ScalarFn,
    pub dirichlet_right: ScalarFn,
    pub ghost_left: SpaceTimeFn,
    pub ghost_right: SpaceTimeFn,
    pub exact: Option<SpaceTimeFn>,
    /// `sigma`, `drift` and `rate` do not depend on time, so the assembled
    /// matrix can be reused across steps. Boundary data may still move.
    pub autonomous: bool,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("domain", &(self.xmin, self.xmax))
            .field("horizon", &self.horizon)
            .field("has_exact", &self.exact.is_some())
            .field("autonomous", &self.autonomous)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// Pure diffusion `v_t - 1/2 sigma^2 v_xx = 0` with zero data and a slack
    /// obstacle. Meant as a starting point; override fields as needed.
    pub fn heat(name: &str, xmin: f64, xmax: f64, horizon: f64, sigma: f64) -> Self {
        Self {
            name: name.to_string(),
            xmin,
            xmax,
            horizon,
            sigma: constant(sigma),
            drift: constant(0.0),
            rate: constant(0.0),
            source: constant(0.0),
            obstacle: constant(-1e6),
            initial: scalar(|_| 0.0),
            dirichlet_left: scalar(|_| 0.0),
            dirichlet_right: scalar(|_| 0.0),
            ghost_left: constant(0.0),
            ghost_right: constant(0.0),
            exact: None,
            autonomous: true,
        }
    }

    /// Diffusion coefficient `a = sigma^2 / 2`.
    pub fn diffusion(&self, t: f64, x: f64) -> f64 {
        let s = (self.sigma)(t, x);
        0.5 * s * s
    }

    /// Lower obstacle of the discrete scheme, `phi + f`.
    pub fn lower_obstacle(&self, t: f64, x: f64) -> f64 {
        (self.obstacle)(t, x) + (self.source)(t, x)
    }

    /// Values of `f(t, .)` at the given points.
    pub fn sample_source(&self, t: f64, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| (self.source)(t, x)).collect()
    }

    pub fn sample_lower_obstacle(&self, t: f64, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.lower_obstacle(t, x)).collect()
    }

    /// Checks `sigma > 0` at the interior nodes at time `t`.
    pub fn check_ellipticity(&self, grid: &SpatialGrid, t: f64) -> Result<()> {
        for x in grid.interior_nodes() {
            let s = (self.sigma)(t, x);
            if !(s > 0.0) {
                return Err(Error::InvalidParameter(format!("{}: sigma({t}, {x}) = {s} is not positive", self.name)));
            }
        }
        Ok(())
    }

    /// Compatibility `v0(x_j) >= phi(0, x_j) + f(0, x_j)` at interior nodes.
    pub fn check_compatibility(&self, grid: &SpatialGrid) -> Result<()> {
        for x in grid.interior_nodes() {
            let v0 = (self.initial)(x);
            let g = self.lower_obstacle(0.0, x);
            if v0 < g - 1e-12 * (1.0 + g.abs()) {
                return Err(Error::InvalidParameter(format!(
                    "{}: initial data {v0} below obstacle {g} at x = {x}",
                    self.name
                )));
            }
        }
        Ok(())
    }
}
