//! Finite difference schemes for one-dimensional obstacle problems
//!
//! ```text
//! min(v_t + A v, v - phi) = f,   A v = -1/2 sigma^2 v_xx + b v_x + r v,
//! ```
//!
//! on `(xmin, xmax) x (0, T)` with Dirichlet data, discretized by second or
//! fourth order central differences in space and Crank-Nicolson or BDF1-3
//! in time. Each implicit step is a linear complementarity problem solved by
//! semi-smooth Newton on banded matrices.
//!
//! The typical flow: build a [`ProblemSpec`] (see [`problems`]), pick a
//! [`SpatialGrid`] and [`TimeGrid`], and call [`march`]. Convergence studies
//! live in [`experiments`].

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod banded;
pub mod discretization;
mod error;
pub mod experiments;
pub mod grid;
pub mod lcp;
pub mod problem;
pub mod problems;
pub mod stepping;

pub use banded::{banded_solve, BandedMatrix};
pub use discretization::{AssembledOperator, SpatialOrder};
pub use error::{Error, Result};
pub use grid::{SpatialGrid, TimeGrid};
pub use lcp::{NewtonReport, ObstacleLcp};
pub use problem::ProblemSpec;
pub use stepping::{march, MarchOptions, MarchOutcome, SchemeKind};
