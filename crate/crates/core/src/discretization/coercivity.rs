//! Numerical check of the discrete Garding inequality
//! `<e, A e> >= eta N(e/h)^2 - gamma |e|^2`.
//!
//! Constants for the three-point operator, with `a_i = a(x_i)` at the
//! interior nodes:
//!
//! * `eta0 = min_i a_i`, `eta = eta0 / 2`;
//! * `C = max_i |a_i - a_{i-1}| / h` over consecutive nodes;
//! * `C' = C + |b|_inf`;
//! * `gamma = C + r_- + C'^2 / (2 eta0)` where `r_- = max(0, -min_i r_i)`.
//!
//! For the five-point operator two terms change. The drift stencil
//! `(1, -8, 0, 8, -1) / (12h)` is bounded by `(5/3) |b|_inf |e| N(e/h)`,
//! so `C' = C + (5/3) |b|_inf`. The fourth-difference correction
//! `(1/12h^2) diag(a) B0` satisfies
//! `<., .> >= -(2C)^2 / (24 eta0) |e|^2 = -C^2 / (6 eta0) |e|^2`
//! (commutator `[A0, diag(a)]` has norm at most `2 C h`); the larger
//! admissible bound `C^2 / (2 eta0)` is added to `gamma`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{assemble, n_seminorm, SpatialOrder};
use crate::banded::BandedMatrix;
use crate::grid::SpatialGrid;
use crate::problem::ProblemSpec;

/// Constants of the coercivity bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoercivityConstants {
    pub eta: f64,
    pub gamma: f64,
}

impl CoercivityConstants {
    /// Compute `(eta, gamma)` from the coefficient samples at the interior
    /// nodes `x_1..x_J`.
    pub fn from_coefficients(diffusion: &[f64], drift: &[f64], rate: &[f64], h: f64, order: SpatialOrder) -> Self {
        let eta0 = diffusion.iter().copied().fold(f64::INFINITY, f64::min);
        let lip = diffusion.windows(2).map(|w| (w[1] - w[0]).abs() / h).fold(0.0, f64::max);
        let b_inf = drift.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        let r_minus = rate.iter().fold(0.0f64, |m, &r| m.max(-r));
        let drift_factor = match order {
            SpatialOrder::Second => 1.0,
            SpatialOrder::Fourth => 5.0 / 3.0,
        };
        let c_prime = lip + drift_factor * b_inf;
        let mut gamma = lip + r_minus + c_prime * c_prime / (2.0 * eta0);
        if order == SpatialOrder::Fourth {
            gamma += lip * lip / (2.0 * eta0);
        }
        Self { eta: eta0 / 2.0, gamma }
    }

    /// Constants for `problem` at time `t` on `grid`.
    pub fn for_problem(problem: &ProblemSpec, grid: &SpatialGrid, t: f64, order: SpatialOrder) -> Self {
        let xs = grid.interior_nodes();
        let a: Vec<f64> = xs.iter().map(|&x| problem.diffusion(t, x)).collect();
        let b: Vec<f64> = xs.iter().map(|&x| (problem.drift)(t, x)).collect();
        let r: Vec<f64> = xs.iter().map(|&x| (problem.rate)(t, x)).collect();
        Self::from_coefficients(&a, &b, &r, grid.h(), order)
    }

    /// Slack `<e, A e> - (eta N(e/h)^2 - gamma |e|^2)`; nonnegative when the
    /// bound holds for `e`.
    pub fn slack(&self, a: &BandedMatrix, e: &[f64], h: f64) -> f64 {
        let ae = a.matvec(e).expect("vector length matches matrix");
        let quad: f64 = e.iter().zip(&ae).map(|(x, y)| x * y).sum();
        let n = n_seminorm(e, h).expect("h > 0");
        let norm2: f64 = e.iter().map(|x| x * x).sum();
        quad - (self.eta * n * n - self.gamma * norm2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoercivityReport {
    pub constants: CoercivityConstants,
    pub trials: usize,
    pub violations: usize,
    /// Smallest slack relative to `|<e, A e>| + eta N^2 + gamma |e|^2`.
    pub min_relative_slack: f64,
}

impl CoercivityReport {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Test the bound on `trials` random unit vectors (plus the zero vector).
pub fn coercivity_check(
    a: &BandedMatrix,
    constants: CoercivityConstants,
    grid: &SpatialGrid,
    trials: usize,
    seed: u64,
) -> CoercivityReport {
    let n = a.n();
    let h = grid.h();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut violations = 0;
    let mut min_rel = f64::INFINITY;

    let zero = vec![0.0; n];
    if constants.slack(a, &zero, h) < 0.0 {
        violations += 1;
    }

    for trial in 0..trials {
        let mut e: Vec<f64> = match trial % 3 {
            // rough vectors
            0 => (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            // smooth random Fourier mode
            1 => {
                let k = rng.gen_range(1..=n.max(1)) as f64;
                let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                (1..=n).map(|j| (k * std::f64::consts::PI * j as f64 / (n as f64 + 1.0) + phase).sin()).collect()
            }
            // random walk, low frequency content
            _ => {
                let mut acc = 0.0;
                (0..n)
                    .map(|_| {
                        acc += rng.gen_range(-1.0..1.0);
                        acc
                    })
                    .collect()
            }
        };
        let norm = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            e.iter_mut().for_each(|x| *x /= norm);
        }
        let slack = constants.slack(a, &e, h);
        let ae = a.matvec(&e).expect("length");
        let quad: f64 = e.iter().zip(&ae).map(|(x, y)| x * y).sum();
        let nn = n_seminorm(&e, h).expect("h > 0");
        let scale = quad.abs() + constants.eta * nn * nn + constants.gamma;
        min_rel = min_rel.min(slack / scale);
        if slack < -1e-12 * scale {
            violations += 1;
        }
    }
    CoercivityReport { constants, trials, violations, min_relative_slack: min_rel }
}

/// Assemble the operator of `problem` at `t` and run [`coercivity_check`].
pub fn coercivity_check_problem(
    problem: &ProblemSpec,
    grid: &SpatialGrid,
    t: f64,
    order: SpatialOrder,
    trials: usize,
    seed: u64,
) -> CoercivityReport {
    let (a, _) = assemble(problem, grid, t, order);
    let constants = CoercivityConstants::for_problem(problem, grid, t, order);
    coercivity_check(&a, constants, grid, trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_laplacian_is_exact_identity() {
        let n = 20;
        let grid = SpatialGrid::new(0.0, 1.0, n).unwrap();
        let h = grid.h();
        let a = BandedMatrix::tridiag(n, -1.0, 2.0, -1.0).unwrap().shifted_scaled(0.0, 1.0 / (h * h));
        let c = CoercivityConstants::from_coefficients(
            &vec![1.0; n],
            &vec![0.0; n],
            &vec![0.0; n],
            h,
            SpatialOrder::Second,
        );
        assert_eq!(c.eta, 0.5);
        assert_eq!(c.gamma, 0.0);

        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let e: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let ae = a.matvec(&e).unwrap();
            let quad: f64 = e.iter().zip(&ae).map(|(x, y)| x * y).sum();
            let nn = n_seminorm(&e, h).unwrap();
            assert_relative_eq!(quad, nn * nn, max_relative = 1e-12);
        }
        let report = coercivity_check(&a, c, &grid, 100, 1);
        assert!(report.ok());
    }

    #[test]
    fn zero_vector_has_zero_slack() {
        let grid = SpatialGrid::new(0.0, 1.0, 5).unwrap();
        let a = BandedMatrix::tridiag(5, -1.0, 2.0, -1.0).unwrap();
        let c = CoercivityConstants { eta: 0.5, gamma: 0.0 };
        assert_eq!(c.slack(&a, &[0.0; 5], grid.h()), 0.0);
    }

    #[test]
    fn wrong_constants_are_detected() {
        // eta far too large: the check must notice.
        let grid = SpatialGrid::new(0.0, 1.0, 30).unwrap();
        let h = grid.h();
        let a = BandedMatrix::tridiag(30, -1.0, 2.0, -1.0).unwrap().shifted_scaled(0.0, 1.0 / (h * h));
        let c = CoercivityConstants { eta: 2.0, gamma: 0.0 };
        let report = coercivity_check(&a, c, &grid, 50, 3);
        assert!(!report.ok());
    }
}
