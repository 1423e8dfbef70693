//! Uniform space and time meshes.

use crate::error::{Error, Result};

/// Uniform mesh of `[xmin, xmax]` with `j` interior nodes.
///
/// Nodes are `x_k = xmin + k h` for `k = 0..=j+1`, with `h = (xmax - xmin) / (j + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    xmin: f64,
    xmax: f64,
    interior: usize,
    h: f64,
}

impl SpatialGrid {
    pub fn new(xmin: f64, xmax: f64, interior: usize) -> Result<Self> {
        if !(xmin < xmax) || !xmin.is_finite() || !xmax.is_finite() {
            return Err(Error::InvalidParameter(format!("need xmin < xmax, got ({xmin}, {xmax})")));
        }
        if interior == 0 {
            return Err(Error::InvalidParameter("need at least one interior node".into()));
        }
        let h = (xmax - xmin) / (interior as f64 + 1.0);
        Ok(Self { xmin, xmax, interior, h })
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    /// Number of interior (unknown) nodes `J`.
    pub fn interior(&self) -> usize {
        self.interior
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Coordinate of node `k`, `0 <= k <= J + 1`. Negative or larger
    /// indices give the ghost positions used by wide stencils.
    #[inline]
    pub fn node(&self, k: isize) -> f64 {
        if k == self.interior as isize + 1 {
            self.xmax
        } else {
            self.xmin + k as f64 * self.h
        }
    }

    /// All `J + 2` node coordinates, boundaries included.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.interior as isize + 1).map(|k| self.node(k)).collect()
    }

    /// Interior node coordinates `x_1 ..= x_J`.
    pub fn interior_nodes(&self) -> Vec<f64> {
        (1..=self.interior as isize).map(|k| self.node(k)).collect()
    }
}

/// Uniform time mesh `t_n = n tau`, `tau = T / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
    tau: f64,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidParameter(format!("horizon must be > 0, got {horizon}")));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("need at least one time step".into()));
        }
        Ok(Self { horizon, steps, tau: horizon / steps as f64 })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps {
            self.horizon
        } else {
            n as f64 * self.tau
        }
    }
}
