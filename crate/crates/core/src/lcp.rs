//! Obstacle problems `min(B x - rhs, x - g) = 0` solved by semi-smooth
//! Newton (primal active-set) iteration.
//!
//! Each iteration picks, per row, the branch attaining the minimum at the
//! current iterate and solves the resulting mixed linear system: identity
//! row with value `g_i` where the obstacle branch is smaller, row `i` of `B`
//! with value `rhs_i` otherwise. Ties go to the `B` row. For strictly
//! diagonally dominant M-matrices the iteration terminates after at most
//! `n + 1` solves.

use crate::banded::{banded_solve, BandedMatrix};
use crate::error::{Error, Result};

/// One implicit obstacle step: find `x` with `min(B x - rhs, x - g) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleLcp {
    pub matrix: BandedMatrix,
    pub rhs: Vec<f64>,
    pub obstacle: Vec<f64>,
}

impl ObstacleLcp {
    pub fn new(matrix: BandedMatrix, rhs: Vec<f64>, obstacle: Vec<f64>) -> Result<Self> {
        let n = matrix.n();
        for len in [rhs.len(), obstacle.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        Ok(Self { matrix, rhs, obstacle })
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Componentwise `min(B x - rhs, x - g)`.
    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let bx = self.matrix.matvec(x)?;
        Ok(self.residual_from(x, &bx))
    }

    fn residual_from(&self, x: &[f64], bx: &[f64]) -> Vec<f64> {
        bx.iter()
            .zip(&self.rhs)
            .zip(x.iter().zip(&self.obstacle))
            .map(|((bx, b), (x, g))| (bx - b).min(x - g))
            .collect()
    }

    /// Default absolute stopping tolerance `1e-10 (1 + |rhs|_inf)`.
    pub fn default_tolerance(&self) -> f64 {
        self.scaled_tolerance(1e-10)
    }

    /// `rel (1 + |rhs|_inf)`.
    pub fn scaled_tolerance(&self, rel: f64) -> f64 {
        rel * (1.0 + inf_norm(&self.rhs))
    }

    pub fn default_max_iter(&self) -> usize {
        self.n() + 5
    }

    /// Active set at `x`: rows where `x - g < B x - rhs`.
    fn active_set(&self, x: &[f64], bx: &[f64]) -> Vec<bool> {
        x.iter().zip(&self.obstacle).zip(bx.iter().zip(&self.rhs)).map(|((x, g), (bx, b))| x - g < bx - b).collect()
    }

    /// Solve the linear system where rows in `active` are pinned to the obstacle.
    pub fn solve_mixed(&self, active: &[bool]) -> Result<Vec<f64>> {
        let m = self.matrix.with_identity_rows(active)?;
        let rhs: Vec<f64> = active
            .iter()
            .zip(self.rhs.iter().zip(&self.obstacle))
            .map(|(&a, (&b, &g))| if a { g } else { b })
            .collect();
        banded_solve(&m, &rhs)
    }
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Outcome of a Newton solve.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    /// Number of linear solves performed.
    pub iterations: usize,
    pub residual_inf: f64,
    pub converged: bool,
    /// Rows pinned to the obstacle in the last linear solve.
    pub active_set_final: Vec<bool>,
}

/// Semi-smooth Newton iteration started from `x0`.
///
/// Stops when the active set repeats or `|residual|_inf <= tol`. Fails
/// with [`Error::NewtonNotConverged`] after `max_iter` solves.
pub fn solve(lcp: &ObstacleLcp, x0: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, NewtonReport)> {
    if x0.len() != lcp.n() {
        return Err(Error::DimensionMismatch { expected: lcp.n(), got: x0.len() });
    }
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidParameter(format!(
            "need tol > 0 and max_iter >= 1 (tol = {tol}, max_iter = {max_iter})"
        )));
    }

    let mut x = x0.to_vec();
    let mut bx = lcp.matrix.matvec(&x)?;
    let mut active = lcp.active_set(&x, &bx);
    let mut residual_inf = inf_norm(&lcp.residual_from(&x, &bx));

    for it in 1..=max_iter {
        x = lcp.solve_mixed(&active)?;
        lcp.matrix.matvec_into(&x, &mut bx);
        let next = lcp.active_set(&x, &bx);
        residual_inf = inf_norm(&lcp.residual_from(&x, &bx));
        let stable = next == active;
        let last_active = std::mem::replace(&mut active, next);
        if stable || residual_inf <= tol {
            let report = NewtonReport {
                iterations: it,
                residual_inf,
                converged: residual_inf <= tol,
                active_set_final: last_active,
            };
            if report.converged {
                return Ok((x, report));
            }
            return Err(Error::NewtonNotConverged { report });
        }
    }
    Err(Error::NewtonNotConverged {
        report: NewtonReport { iterations: max_iter, residual_inf, converged: false, active_set_final: active },
    })
}

/// [`solve`] with the default tolerance and iteration cap.
pub fn solve_default(lcp: &ObstacleLcp, x0: &[f64]) -> Result<(Vec<f64>, NewtonReport)> {
    solve(lcp, x0, lcp.default_tolerance(), lcp.default_max_iter())
}

/// Largest system accepted by [`brute_force`].
pub const BRUTE_FORCE_MAX_N: usize = 16;

/// Exhaustive search over all `2^n` active sets.
///
/// Returns the first solution of a mixed system that is feasible
/// (`x >= g - tol`, `B x - rhs >= -tol`) with `|min(.)|_inf <= tol`.
/// Intended as a verification oracle for small instances.
pub fn brute_force(lcp: &ObstacleLcp, tol: f64) -> Result<Vec<f64>> {
    let n = lcp.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::InvalidParameter(format!("brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")));
    }
    let total = 1usize << n;
    let mut active = vec![false; n];
    for mask in 0..total {
        for (i, a) in active.iter_mut().enumerate() {
            *a = mask >> i & 1 == 1;
        }
        let Ok(x) = lcp.solve_mixed(&active) else { continue };
        let bx = lcp.matrix.matvec(&x)?;
        let feasible = x
            .iter()
            .zip(&lcp.obstacle)
            .zip(bx.iter().zip(&lcp.rhs))
            .all(|((x, g), (bx, b))| x - g >= -tol && bx - b >= -tol);
        if feasible && inf_norm(&lcp.residual_from(&x, &bx)) <= tol {
            return Ok(x);
        }
    }
    Err(Error::NoFeasibleActiveSet { tried: total })
}
