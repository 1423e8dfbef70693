//! Finite difference approximation of `A v = -a v_xx + b v_x + r v`
//! (`a = sigma^2 / 2`) on a uniform grid.
//!
//! The discrete operator acting on the interior values `u_1..u_J` is
//! `A u + q`, where `A` is banded and `q` collects the contributions of the
//! Dirichlet values `u_0`, `u_{J+1}` and, at fourth order, the ghost values
//! `u_{-1}`, `u_{J+2}`.

mod coercivity;

pub use coercivity::{coercivity_check, coercivity_check_problem, CoercivityConstants, CoercivityReport};

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use log::warn;

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::problem::ProblemSpec;

/// Consistency order of the spatial stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpatialOrder {
    /// Three-point centered differences (tridiagonal).
    Second,
    /// Five-point centered differences (pentadiagonal).
    Fourth,
}

impl SpatialOrder {
    pub fn as_u8(self) -> u8 {
        match self {
            SpatialOrder::Second => 2,
            SpatialOrder::Fourth => 4,
        }
    }
}

impl fmt::Display for SpatialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

impl FromStr for SpatialOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "2" => Ok(SpatialOrder::Second),
            "4" => Ok(SpatialOrder::Fourth),
            other => Err(Error::InvalidParameter(format!("space order must be 2 or 4, got {other:?}"))),
        }
    }
}

/// Weights of the fourth-order `-u_xx` stencil on offsets -2..=2, in units of `1 / (12 h^2)`.
pub const NEG_SECOND_DERIVATIVE_4: [f64; 5] = [1.0, -16.0, 30.0, -16.0, 1.0];
/// Weights of the fourth-order `u_x` stencil on offsets -2..=2, in units of `1 / (12 h)`.
pub const FIRST_DERIVATIVE_4: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];

/// Value of the extended grid function at node `k` outside `1..=J`.
fn boundary_value(problem: &ProblemSpec, grid: &SpatialGrid, t: f64, k: isize) -> f64 {
    let j = grid.interior() as isize;
    match k {
        0 => (problem.dirichlet_left)(t),
        -1 => (problem.ghost_left)(t, grid.node(-1)),
        k if k == j + 1 => (problem.dirichlet_right)(t),
        k if k == j + 2 => (problem.ghost_right)(t, grid.node(j + 2)),
        _ => unreachable!("node {k} is not a boundary or ghost node"),
    }
}

fn check_advection_dominance(name: &str, offending: usize, t: f64) {
    if offending > 0 {
        warn!(
            "{name}: advection dominates diffusion at {offending} node(s) at t = {t}; \
             the centered scheme may lose monotonicity"
        );
    }
}

/// Three-point weights on offsets -1..=1 at node `x`: `-beta - gamma`,
/// `2 beta + r`, `-beta + gamma` with `beta = a / h^2`, `gamma = b / (2h)`.
/// The flag reports advection dominance (`beta < |gamma|`).
fn weights_2nd(problem: &ProblemSpec, t: f64, x: f64, h: f64) -> ([f64; 3], bool) {
    let beta = problem.diffusion(t, x) / (h * h);
    let gamma = (problem.drift)(t, x) / (2.0 * h);
    ([-beta - gamma, 2.0 * beta + (problem.rate)(t, x), -beta + gamma], beta < gamma.abs())
}

/// Five-point weights on offsets -2..=2 at node `x`; flag as in [`weights_2nd`].
fn weights_4th(problem: &ProblemSpec, t: f64, x: f64, h: f64) -> ([f64; 5], bool) {
    let diff = problem.diffusion(t, x) / (12.0 * h * h);
    let adv = (problem.drift)(t, x) / (12.0 * h);
    let r = (problem.rate)(t, x);
    let mut w = [0.0; 5];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = diff * NEG_SECOND_DERIVATIVE_4[i] + adv * FIRST_DERIVATIVE_4[i];
    }
    w[2] += r;
    // same dominance test as the three-point operator: a / h^2 >= |b| / (2h)
    (w, 2.0 * diff < adv.abs())
}

fn row_weights(problem: &ProblemSpec, grid: &SpatialGrid, t: f64, k: isize, order: SpatialOrder) -> (Vec<f64>, bool) {
    let x = grid.node(k);
    match order {
        SpatialOrder::Second => {
            let (w, flag) = weights_2nd(problem, t, x, grid.h());
            (w.to_vec(), flag)
        }
        SpatialOrder::Fourth => {
            let (w, flag) = weights_4th(problem, t, x, grid.h());
            (w.to_vec(), flag)
        }
    }
}

fn half_width(order: SpatialOrder) -> isize {
    match order {
        SpatialOrder::Second => 1,
        SpatialOrder::Fourth => 2,
    }
}

fn assemble_order(problem: &ProblemSpec, grid: &SpatialGrid, t: f64, order: SpatialOrder) -> (BandedMatrix, Vec<f64>) {
    let n = grid.interior();
    let hw = half_width(order);
    let bw = (hw as usize).min(n - 1);
    let mut a = BandedMatrix::zeros(n, bw, bw).expect("n >= 1");
    let mut q = vec![0.0; n];
    let mut offending = 0;
    for row in 0..n {
        let k = row as isize + 1;
        let (weights, flag) = row_weights(problem, grid, t, k, order);
        offending += usize::from(flag);
        for (d, w) in (-hw..=hw).zip(weights) {
            let col = k + d;
            if (1..=n as isize).contains(&col) {
                a.set(row, (col - 1) as usize, w);
            } else {
                q[row] += w * boundary_value(problem, grid, t, col);
            }
        }
    }
    check_advection_dominance(&problem.name, offending, t);
    (a, q)
}

/// Assemble the three-point operator `(A, q)` at time `t`.
pub fn assemble_2nd(problem: &ProblemSpec, grid: &SpatialGrid, t: f64) -> (BandedMatrix, Vec<f64>) {
    assemble_order(problem, grid, t, SpatialOrder::Second)
}

/// Assemble the five-point fourth-order operator `(A, q)` at time `t`.
///
/// Rows 1, 2, J-1 and J fold the Dirichlet and ghost values into `q`.
pub fn assemble_4th(problem: &ProblemSpec, grid: &SpatialGrid, t: f64) -> (BandedMatrix, Vec<f64>) {
    assemble_order(problem, grid, t, SpatialOrder::Fourth)
}

/// Boundary vector `q(t)` alone; only the rows next to the boundary are touched.
pub fn boundary_vector(problem: &ProblemSpec, grid: &SpatialGrid, t: f64, order: SpatialOrder) -> Vec<f64> {
    let n = grid.interior();
    let ni = n as isize;
    let hw = half_width(order);
    let mut q = vec![0.0; n];
    let rows = (1..=hw.min(ni)).chain((ni - hw + 1).max(hw + 1)..=ni);
    for k in rows {
        let (weights, _) = row_weights(problem, grid, t, k, order);
        for (d, w) in (-hw..=hw).zip(weights) {
            let col = k + d;
            if !(1..=ni).contains(&col) {
                q[(k - 1) as usize] += w * boundary_value(problem, grid, t, col);
            }
        }
    }
    q
}

pub fn assemble(problem: &ProblemSpec, grid: &SpatialGrid, t: f64, order: SpatialOrder) -> (BandedMatrix, Vec<f64>) {
    match order {
        SpatialOrder::Second => assemble_2nd(problem, grid, t),
        SpatialOrder::Fourth => assemble_4th(problem, grid, t),
    }
}

/// The discrete operator `t -> (A(t), q(t))` of a problem on a grid.
///
/// For autonomous problems the matrix is assembled once and reused; the
/// boundary vector is always evaluated at the requested time because
/// Dirichlet and ghost data may move even when the coefficients do not.
#[derive(Debug, Clone)]
pub struct AssembledOperator<'p> {
    problem: &'p ProblemSpec,
    grid: SpatialGrid,
    order: SpatialOrder,
    frozen: Option<BandedMatrix>,
}

impl<'p> AssembledOperator<'p> {
    pub fn new(problem: &'p ProblemSpec, grid: SpatialGrid, order: SpatialOrder) -> Self {
        let frozen = problem.autonomous.then(|| assemble(problem, &grid, 0.0, order).0);
        Self { problem, grid, order, frozen }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn order(&self) -> SpatialOrder {
        self.order
    }

    pub fn problem(&self) -> &'p ProblemSpec {
        self.problem
    }

    /// `A(t)` and `q(t)`.
    pub fn at(&self, t: f64) -> (Cow<'_, BandedMatrix>, Cow<'_, [f64]>) {
        match &self.frozen {
            Some(a) => (Cow::Borrowed(a), Cow::Owned(self.boundary_at(t))),
            None => {
                let (a, q) = assemble(self.problem, &self.grid, t, self.order);
                (Cow::Owned(a), Cow::Owned(q))
            }
        }
    }

    pub fn matrix_at(&self, t: f64) -> Cow<'_, BandedMatrix> {
        match &self.frozen {
            Some(a) => Cow::Borrowed(a),
            None => Cow::Owned(assemble(self.problem, &self.grid, t, self.order).0),
        }
    }

    pub fn boundary_at(&self, t: f64) -> Vec<f64> {
        boundary_vector(self.problem, &self.grid, t, self.order)
    }
}

/// Discrete `H^1` seminorm `N(x / scale)` with zero extension at both ends:
/// `(sum_{j=1}^{J+1} ((x_j - x_{j-1}) / scale)^2)^{1/2}`, `x_0 = x_{J+1} = 0`.
pub fn n_seminorm(x: &[f64], scale: f64) -> Result<f64> {
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::InvalidParameter(format!("seminorm scale must be finite and nonzero, got {scale}")));
    }
    let first = x.first().copied().unwrap_or(0.0);
    let last = x.last().copied().unwrap_or(0.0);
    let inner: f64 = x.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    let total = first * first + inner + last * last;
    Ok(total.sqrt() / scale.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{constant, scalar, space_time};
    use approx::assert_relative_eq;

    fn laplace_problem() -> ProblemSpec {
        let mut p = ProblemSpec::heat("laplace", 0.0, 4.0, 1.0, 2f64.sqrt());
        p.dirichlet_left = scalar(|_| 1.0);
        p
    }

    #[test]
    fn second_order_constant_coefficients() {
        let p = laplace_problem();
        let g = SpatialGrid::new(0.0, 4.0, 3).unwrap();
        let (a, q) = assemble_2nd(&p, &g, 0.0);
        let expected = BandedMatrix::tridiag(3, -1.0, 2.0, -1.0).unwrap().to_dense();
        for (row, want) in a.to_dense().iter().zip(&expected) {
            for (x, y) in row.iter().zip(want) {
                assert_relative_eq!(x, y, epsilon = 1e-14);
            }
        }
        assert_relative_eq!(q[0], -1.0, epsilon = 1e-14);
        assert_eq!(&q[1..], &[0.0, 0.0]);
    }

    #[test]
    fn american_put_row_values() {
        let lambda = 0.2;
        let r = 0.1;
        let mut p = ProblemSpec::heat("put", 99.0, 101.0, 1.0, 1.0);
        p.sigma = space_time(move |_, x| lambda * x);
        p.drift = space_time(move |_, x| -r * x);
        p.rate = constant(r);
        let g = SpatialGrid::new(99.0, 101.0, 1).unwrap();
        assert_eq!(g.h(), 1.0);
        let (a, _) = assemble_2nd(&p, &g, 0.0);
        // beta = 200, gamma = -5
        assert_relative_eq!(a.get(0, 0), 400.1, epsilon = 1e-9);

        let g3 = SpatialGrid::new(98.0, 102.0, 3).unwrap();
        let (a3, _) = assemble_2nd(&p, &g3, 0.0);
        assert_relative_eq!(a3.get(1, 0), -200.0 + 5.0, epsilon = 1e-9);
        assert_relative_eq!(a3.get(1, 2), -200.0 - 5.0, epsilon = 1e-9);
    }

    /// Dense evaluation of the fourth-order stencils on a polynomial.
    fn stencil_on(poly: impl Fn(f64) -> f64, weights: [f64; 5], x: f64, h: f64) -> f64 {
        (-2..=2).zip(weights).map(|(d, w)| w * poly(x + d as f64 * h)).sum()
    }

    #[test]
    fn fourth_order_stencils_on_monomials() {
        let h = 1.0;
        for &x in &[0.0, 1.0, 3.0, -2.0] {
            let d2 = stencil_on(|y| y * y, NEG_SECOND_DERIVATIVE_4, x, h) / 12.0;
            assert_relative_eq!(d2, -2.0, epsilon = 1e-12);
            let d4 = stencil_on(|y| y.powi(4), NEG_SECOND_DERIVATIVE_4, x, h) / 12.0;
            assert_relative_eq!(d4, -12.0 * x * x, epsilon = 1e-10);
            let d3 = stencil_on(|y| y.powi(3), FIRST_DERIVATIVE_4, x, h) / 12.0;
            assert_relative_eq!(d3, 3.0 * x * x, epsilon = 1e-10);
        }
    }

    #[test]
    fn fourth_order_boundary_rows_use_ghosts() {
        let mut p = ProblemSpec::heat("ghosts", 0.0, 6.0, 1.0, 2f64.sqrt());
        p.dirichlet_left = scalar(|_| 1.0);
        p.ghost_left = space_time(|_, x| 10.0 * x);
        p.dirichlet_right = scalar(|_| 2.0);
        p.ghost_right = space_time(|_, x| x);
        let g = SpatialGrid::new(0.0, 6.0, 5).unwrap();
        let (a, q) = assemble_4th(&p, &g, 0.0);
        assert_eq!(a.lower(), 2);
        let c = 1.0 / 12.0;
        // row 1: u_{-1} at x=-1 -> -10, u_0 = 1
        assert_relative_eq!(q[0], c * (-10.0) - 16.0 * c * 1.0, epsilon = 1e-12);
        assert_relative_eq!(q[1], c * 1.0, epsilon = 1e-12);
        assert_eq!(q[2], 0.0);
        assert_relative_eq!(q[3], c * 2.0, epsilon = 1e-12);
        // row J: u_{J+1} = 2, u_{J+2} at x=7 -> 7
        assert_relative_eq!(q[4], -16.0 * c * 2.0 + c * 7.0, epsilon = 1e-12);
        assert_relative_eq!(a.get(2, 2), 30.0 * c, epsilon = 1e-14);
    }

    #[test]
    fn seminorm_examples() {
        assert_relative_eq!(n_seminorm(&[1.0, 1.0], 1.0).unwrap(), 2f64.sqrt());
        assert_eq!(n_seminorm(&[0.0; 5], 1.0).unwrap(), 0.0);
        assert_relative_eq!(n_seminorm(&[1.0], 0.5).unwrap(), 2.0 * 2f64.sqrt());
        assert!(n_seminorm(&[1.0], 0.0).is_err());
    }

    #[test]
    fn order_parsing() {
        assert_eq!("4".parse::<SpatialOrder>().unwrap(), SpatialOrder::Fourth);
        assert!("3".parse::<SpatialOrder>().is_err());
    }

    #[test]
    fn autonomous_operator_is_frozen() {
        let p = laplace_problem();
        let g = SpatialGrid::new(0.0, 4.0, 7).unwrap();
        let op = AssembledOperator::new(&p, g, SpatialOrder::Fourth);
        let (a0, q0) = op.at(0.0);
        let (a1, q1) = op.at(0.7);
        assert_eq!(a0, a1);
        assert_eq!(q0, q1);
        assert!(matches!(a0, Cow::Borrowed(_)));
    }

    #[test]
    fn boundary_vector_matches_full_assembly() {
        let mut p = crate::problems::american_put_benchmark();
        p.ghost_right = crate::problem::space_time(|t, x| t * x);
        p.dirichlet_right = crate::problem::scalar(|t| 3.0 * t);
        for order in [SpatialOrder::Second, SpatialOrder::Fourth] {
            for n in [1, 2, 3, 4, 9] {
                let g = SpatialGrid::new(75.0, 275.0, n).unwrap();
                let (_, q) = assemble(&p, &g, 0.4, order);
                assert_eq!(boundary_vector(&p, &g, 0.4, order), q, "order {order}, n {n}");
                // the frozen operator still follows moving boundary data
                let op = AssembledOperator::new(&p, g, order);
                assert_eq!(op.boundary_at(0.4), q);
            }
        }
    }
}
