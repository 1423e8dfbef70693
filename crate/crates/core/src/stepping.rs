//! Time discretizations of the obstacle problem.
//!
//! Every scheme reduces one time step to an [`ObstacleLcp`]
//! `min(B u^{n+1} - rhs, u^{n+1} - g) = 0` solved by semi-smooth Newton,
//! warm-started from `u^n`. With `A`, `q` from the spatial operator and
//! `phi`, `f` sampled at the interior nodes:
//!
//! | scheme | `B` | `rhs` | `g` |
//! |--------|-----|-------|-----|
//! | CN1  | `I + tau/2 A^{n+1}` | `(I - tau/2 A^n) u^n - tau q^{n+1/2} + tau f^{n+1/2}` | `phi^{n+1} + f^{n+1}` |
//! | CN2  | as CN1 | as CN1 | `u^n + tau f^{n+1/2}` |
//! | BDF1 | `I + tau A^{n+1}` | `u^n - tau q^{n+1} + tau f^{n+1}` | `phi^{n+1} + f^{n+1}` |
//! | BDF2 | `I + 2tau/3 A^{n+1}` | `4/3 u^n - 1/3 u^{n-1} - 2tau/3 q^{n+1} + 2tau/3 f^{n+1}` | `phi^{n+1} + f^{n+1}` |
//! | BDF3 | `11 I + 6 tau A^{n+1}` | `18 u^n - 9 u^{n-1} + 2 u^{n-2} - 6 tau q^{n+1} + 6 tau f^{n+1}` | `phi^{n+1} + f^{n+1}` |
//!
//! CN2 is the Crank-Nicolson scheme for the equivalent form
//! `v_t + min(0, A v - f) = f`-type equation whose obstacle is the previous
//! time level.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::banded::BandedMatrix;
use crate::discretization::{AssembledOperator, SpatialOrder};
use crate::error::{Error, Result};
use crate::grid::{SpatialGrid, TimeGrid};
use crate::lcp::{self, inf_norm, NewtonReport, ObstacleLcp};
use crate::problem::ProblemSpec;

/// Time discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Crank-Nicolson with the fixed obstacle `phi + f`.
    Cn1,
    /// Crank-Nicolson with the moving obstacle `u^n + tau f`.
    Cn2,
    /// Implicit Euler.
    Bdf1,
    /// Two-step BDF; first step per [`MarchOptions::bdf2_init`].
    Bdf2,
    /// Three-step BDF; `u^1` by CN1, `u^2` by BDF2.
    Bdf3,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] =
        [SchemeKind::Cn1, SchemeKind::Cn2, SchemeKind::Bdf1, SchemeKind::Bdf2, SchemeKind::Bdf3];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Cn1 => "cn1",
            SchemeKind::Cn2 => "cn2",
            SchemeKind::Bdf1 => "bdf1",
            SchemeKind::Bdf2 => "bdf2",
            SchemeKind::Bdf3 => "bdf3",
        }
    }

    /// Number of past levels the scheme reads.
    pub fn steps(self) -> usize {
        match self {
            SchemeKind::Cn1 | SchemeKind::Cn2 | SchemeKind::Bdf1 => 1,
            SchemeKind::Bdf2 => 2,
            SchemeKind::Bdf3 => 3,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        match key.as_str() {
            "cn" | "cn1" => Ok(SchemeKind::Cn1),
            "cn2" => Ok(SchemeKind::Cn2),
            "bdf1" | "ie" | "euler" => Ok(SchemeKind::Bdf1),
            "bdf2" => Ok(SchemeKind::Bdf2),
            "bdf3" => Ok(SchemeKind::Bdf3),
            _ => Err(Error::InvalidParameter(format!("unknown scheme {s:?}"))),
        }
    }
}

/// One-step scheme used for `u^1` before BDF2 takes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartupStep {
    #[default]
    CrankNicolson,
    ImplicitEuler,
}

/// Newton settings for every implicit step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSettings {
    /// Absolute tolerance is `rel_tol * (1 + |rhs|_inf)`.
    pub rel_tol: f64,
    /// Iteration cap; `None` means `n + 5`.
    pub max_iter: Option<usize>,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_iter: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MarchOptions {
    pub bdf2_init: StartupStep,
    pub newton: NewtonSettings,
    /// Keep every time level in [`MarchState::levels`].
    pub keep_levels: bool,
}

/// Running state of a time march.
#[derive(Debug, Clone, PartialEq)]
pub struct MarchState {
    /// Index of the newest level `u^n`.
    pub n: usize,
    pub tau: f64,
    /// `u^n, u^{n-1}, u^{n-2}`, newest first.
    pub history: VecDeque<Vec<f64>>,
    /// Newton iterations of each step, in order.
    pub newton_iterations: Vec<usize>,
    /// Largest final Newton residual over all steps.
    pub max_newton_residual: f64,
    /// All levels `u^0 ..= u^n` when requested.
    pub levels: Option<Vec<Vec<f64>>>,
}

impl MarchState {
    pub fn new(u0: Vec<f64>, tau: f64, keep_levels: bool) -> Self {
        let levels = keep_levels.then(|| vec![u0.clone()]);
        Self {
            n: 0,
            tau,
            history: VecDeque::from([u0]),
            newton_iterations: Vec::new(),
            max_newton_residual: 0.0,
            levels,
        }
    }

    /// Time `t_n` of the newest level.
    pub fn time(&self) -> f64 {
        self.n as f64 * self.tau
    }

    /// The level `u^{n-lag}`.
    pub fn level(&self, lag: usize) -> Result<&[f64]> {
        self.history.get(lag).map(Vec::as_slice).ok_or_else(|| {
            Error::InvalidParameter(format!("scheme needs level n-{lag}, only {} stored", self.history.len()))
        })
    }

    pub fn current(&self) -> &[f64] {
        &self.history[0]
    }

    /// Append `u^{n+1}`.
    pub fn push(&mut self, u: Vec<f64>, report: &NewtonReport) {
        if let Some(levels) = self.levels.as_mut() {
            levels.push(u.clone());
        }
        self.history.push_front(u);
        self.history.truncate(3);
        self.n += 1;
        self.newton_iterations.push(report.iterations);
        self.max_newton_residual = self.max_newton_residual.max(report.residual_inf);
    }
}

fn sample(f: impl Fn(f64) -> f64, xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|&x| f(x)).collect()
}

fn newton_step(lcp: ObstacleLcp, x0: &[f64], newton: &NewtonSettings) -> Result<(Vec<f64>, NewtonReport)> {
    let tol = lcp.scaled_tolerance(newton.rel_tol);
    let max_iter = newton.max_iter.unwrap_or_else(|| lcp.default_max_iter());
    lcp::solve(&lcp, x0, tol, max_iter)
}

/// `B`, `rhs` shared by both Crank-Nicolson variants.
fn crank_nicolson_system(state: &MarchState, op: &AssembledOperator<'_>, tau: f64) -> (BandedMatrix, Vec<f64>) {
    let problem = op.problem();
    let xs = op.grid().interior_nodes();
    let t0 = state.time();
    let t1 = t0 + tau;
    let th = t0 + 0.5 * tau;
    let u = state.current();

    let b = op.matrix_at(t1).shifted_scaled(1.0, 0.5 * tau);
    let a0u = op.matrix_at(t0).matvec(u).expect("level length matches grid");
    let q_half = op.boundary_at(th);
    let f_half = sample(|x| (problem.source)(th, x), &xs);
    let rhs = (0..u.len()).map(|i| u[i] - 0.5 * tau * a0u[i] - tau * q_half[i] + tau * f_half[i]).collect();
    (b, rhs)
}

fn fixed_obstacle(problem: &ProblemSpec, xs: &[f64], t: f64) -> Vec<f64> {
    problem.sample_lower_obstacle(t, xs)
}

/// Crank-Nicolson step with obstacle `phi^{n+1} + f^{n+1}`.
pub fn step_cn1(
    state: &MarchState,
    op: &AssembledOperator<'_>,
    tau: f64,
    newton: &NewtonSettings,
) -> Result<(Vec<f64>, NewtonReport)> {
    let (b, rhs) = crank_nicolson_system(state, op, tau);
    let g = fixed_obstacle(op.problem(), &op.grid().interior_nodes(), state.time() + tau);
    newton_step(ObstacleLcp::new(b, rhs, g)?, state.current(), newton)
}

/// Crank-Nicolson step with the moving obstacle `u^n + tau f^{n+1/2}`.
pub fn step_cn2(
    state: &MarchState,
    op: &AssembledOperator<'_>,
    tau: f64,
    newton: &NewtonSettings,
) -> Result<(Vec<f64>, NewtonReport)> {
    let (b, rhs) = crank_nicolson_system(state, op, tau);
    let th = state.time() + 0.5 * tau;
    let problem = op.problem();
    let g = op
        .grid()
        .interior_nodes()
        .iter()
        .zip(state.current())
        .map(|(&x, &u)| u + tau * (problem.source)(th, x))
        .collect();
    newton_step(ObstacleLcp::new(b, rhs, g)?, state.current(), newton)
}

/// Backward differentiation step. `weights[k]` multiplies `u^{n-k}` in the
/// right-hand side; the operator part is scaled by `op_scale` and the
/// identity by `diag`.
fn bdf_step(
    state: &MarchState,
    op: &AssembledOperator<'_>,
    tau: f64,
    newton: &NewtonSettings,
    diag: f64,
    op_scale: f64,
    weights: &[f64],
) -> Result<(Vec<f64>, NewtonReport)> {
    let problem = op.problem();
    let xs = op.grid().interior_nodes();
    let t1 = state.time() + tau;
    let (a1, q1) = op.at(t1);
    let b = a1.shifted_scaled(diag, op_scale);
    let f1 = problem.sample_source(t1, &xs);
    let mut rhs: Vec<f64> = q1.iter().zip(&f1).map(|(q, f)| op_scale * (f - q)).collect();
    for (lag, &w) in weights.iter().enumerate() {
        let u = state.level(lag)?;
        rhs.iter_mut().zip(u).for_each(|(r, u)| *r += w * u);
    }
    let g = fixed_obstacle(problem, &xs, t1);
    newton_step(ObstacleLcp::new(b, rhs, g)?, state.current(), newton)
}

/// Implicit Euler step.
pub fn step_bdf1(
    state: &MarchState,
    op: &AssembledOperator<'_>,
    tau: f64,
    newton: &NewtonSettings,
) -> Result<(Vec<f64>, NewtonReport)> {
    bdf_step(state, op, tau, newton, 1.0, tau, &[1.0])
}

/// Two-step BDF step; needs `u^n` and `u^{n-1}`.
pub fn step_bdf2(
    state: &MarchState,
    op: &AssembledOperator<'_>,
    tau: f64,
    newton: &NewtonSettings,
) -> Result<(Vec<f64>, NewtonReport)> {
    bdf_step(state, op, tau, newton, 1.0, 2.0 * tau / 3.0, &[4.0 / 3.0, -1.0 / 3.0])
}

/// Three-step BDF step in the `11 I + 6 tau A` scaling; needs three levels.
pub fn step_bdf3(
    state: &MarchState,
    op: &AssembledOperator<'_>,
    tau: f64,
    newton: &NewtonSettings,
) -> Result<(Vec<f64>, NewtonReport)> {
    bdf_step(state, op, tau, newton, 11.0, 6.0 * tau, &[18.0, -9.0, 2.0])
}

/// Which single-step rule advances level `n` for `scheme`, honoring the startup chains.
fn rule_for(scheme: SchemeKind, n: usize, bdf2_init: StartupStep) -> SchemeKind {
    let first_step = match bdf2_init {
        StartupStep::CrankNicolson => SchemeKind::Cn1,
        StartupStep::ImplicitEuler => SchemeKind::Bdf1,
    };
    match (scheme, n) {
        (SchemeKind::Bdf2, 0) => first_step,
        (SchemeKind::Bdf3, 0) => SchemeKind::Cn1,
        (SchemeKind::Bdf3, 1) => SchemeKind::Bdf2,
        (s, _) => s,
    }
}

/// Advance `state` by one step of `scheme` (startup rules included).
pub fn advance(
    state: &mut MarchState,
    op: &AssembledOperator<'_>,
    scheme: SchemeKind,
    options: &MarchOptions,
) -> Result<()> {
    let tau = state.tau;
    let rule = rule_for(scheme, state.n, options.bdf2_init);
    let newton = &options.newton;
    let (u, report) = match rule {
        SchemeKind::Cn1 => step_cn1(state, op, tau, newton),
        SchemeKind::Cn2 => step_cn2(state, op, tau, newton),
        SchemeKind::Bdf1 => step_bdf1(state, op, tau, newton),
        SchemeKind::Bdf2 => step_bdf2(state, op, tau, newton),
        SchemeKind::Bdf3 => step_bdf3(state, op, tau, newton),
    }
    .map_err(|e| Error::MarchFailed { step: state.n + 1, source: Box::new(e) })?;
    state.push(u, &report);
    Ok(())
}

/// Result of a full march to the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct MarchOutcome {
    /// Interior values `u^N_1 ..= u^N_J`.
    pub solution: Vec<f64>,
    pub state: MarchState,
}

impl MarchOutcome {
    /// Final level with the Dirichlet values appended at both ends.
    pub fn with_boundary(&self, problem: &ProblemSpec, t: f64) -> Vec<f64> {
        let mut full = Vec::with_capacity(self.solution.len() + 2);
        full.push((problem.dirichlet_left)(t));
        full.extend_from_slice(&self.solution);
        full.push((problem.dirichlet_right)(t));
        full
    }
}

/// March from `u^0_j = v0(x_j)` to `t_N = T` with `scheme`.
pub fn march(
    problem: &ProblemSpec,
    grid: &SpatialGrid,
    tgrid: &TimeGrid,
    scheme: SchemeKind,
    order: SpatialOrder,
    options: &MarchOptions,
) -> Result<MarchOutcome> {
    problem.check_ellipticity(grid, 0.0)?;
    problem.check_compatibility(grid)?;
    let op = AssembledOperator::new(problem, *grid, order);
    march_with_operator(&op, tgrid, scheme, options)
}

/// [`march`] on an already constructed operator; skips the input checks.
pub fn march_with_operator(
    op: &AssembledOperator<'_>,
    tgrid: &TimeGrid,
    scheme: SchemeKind,
    options: &MarchOptions,
) -> Result<MarchOutcome> {
    let problem = op.problem();
    let u0: Vec<f64> = op.grid().interior_nodes().iter().map(|&x| (problem.initial)(x)).collect();
    let mut state = MarchState::new(u0, tgrid.tau(), options.keep_levels);
    for _ in 0..tgrid.steps() {
        advance(&mut state, op, scheme, options)?;
    }
    Ok(MarchOutcome { solution: state.current().to_vec(), state })
}

/// Tolerance of [`monotone_check`].
pub const MONOTONE_TOL: f64 = 1e-12;

/// True when `u^{n+1} >= u^n - 1e-12` componentwise for every consecutive
/// pair. Sequences with fewer than two levels are trivially monotone.
pub fn monotone_check(levels: &[Vec<f64>]) -> bool {
    levels.windows(2).all(|w| w[1].iter().zip(&w[0]).all(|(next, prev)| *next >= prev - MONOTONE_TOL))
}

/// Largest componentwise gap `max |u - w|` between two level sequences.
pub fn max_level_difference(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().zip(b).map(|(u, w)| inf_norm(&u.iter().zip(w).map(|(x, y)| x - y).collect::<Vec<_>>())).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{constant, scalar, space_time};
    use approx::assert_relative_eq;

    /// `A = 0`, `q = 0`, `f = 0`, obstacle given.
    fn inert_problem(obstacle: f64) -> ProblemSpec {
        let mut p = ProblemSpec::heat("inert", 0.0, 3.0, 1.0, 0.0);
        p.obstacle = constant(obstacle);
        p.initial = scalar(|x| x);
        p
    }

    fn state_with(levels: &[&[f64]], tau: f64) -> MarchState {
        // levels newest first
        let mut s = MarchState::new(levels.last().unwrap().to_vec(), tau, false);
        for l in levels.iter().rev().skip(1) {
            s.history.push_front(l.to_vec());
            s.n += 1;
        }
        s
    }

    type StepFn = fn(&MarchState, &AssembledOperator<'_>, f64, &NewtonSettings) -> Result<(Vec<f64>, NewtonReport)>;

    fn run(step: StepFn, p: &ProblemSpec, levels: &[&[f64]], tau: f64) -> Vec<f64> {
        let n = levels[0].len();
        let grid = SpatialGrid::new(0.0, 3.0, n).unwrap();
        let op = AssembledOperator::new(p, grid, SpatialOrder::Second);
        step(&state_with(levels, tau), &op, tau, &NewtonSettings::default()).unwrap().0
    }

    #[test]
    fn cn_identity_evolution() {
        let slack = inert_problem(-1e6);
        assert_eq!(run(step_cn1, &slack, &[&[1.0, 2.0]], 0.1), vec![1.0, 2.0]);
        assert_eq!(run(step_cn2, &slack, &[&[1.0, 2.0]], 0.1), vec![1.0, 2.0]);
        let binding = inert_problem(5.0);
        assert_eq!(run(step_cn1, &binding, &[&[1.0, 2.0]], 0.1), vec![5.0, 5.0]);
    }

    #[test]
    fn bdf1_examples() {
        let slack = inert_problem(-1e6);
        assert_eq!(run(step_bdf1, &slack, &[&[4.0]], 1.0), vec![4.0]);

        let mut reaction = inert_problem(-1e6);
        reaction.rate = constant(1.0);
        assert_eq!(run(step_bdf1, &reaction, &[&[4.0]], 1.0), vec![2.0]);
        reaction.obstacle = constant(3.0);
        assert_eq!(run(step_bdf1, &reaction, &[&[4.0]], 1.0), vec![3.0]);
    }

    #[test]
    fn bdf2_examples() {
        let slack = inert_problem(-1e6);
        let u = run(step_bdf2, &slack, &[&[4.0], &[1.0]], 0.5);
        assert_relative_eq!(u[0], 5.0, epsilon = 1e-14);
        let binding = inert_problem(10.0);
        assert_eq!(run(step_bdf2, &binding, &[&[4.0], &[1.0]], 0.5), vec![10.0]);
    }

    #[test]
    fn bdf3_examples() {
        let slack = inert_problem(-1e6);
        let u = run(step_bdf3, &slack, &[&[11.0], &[11.0], &[11.0]], 0.5);
        assert_relative_eq!(u[0], 11.0, epsilon = 1e-13);
        let binding = inert_problem(20.0);
        assert_eq!(run(step_bdf3, &binding, &[&[11.0], &[11.0], &[11.0]], 0.5), vec![20.0]);
    }

    #[test]
    fn bdf2_needs_two_levels() {
        let slack = inert_problem(-1e6);
        let grid = SpatialGrid::new(0.0, 3.0, 1).unwrap();
        let op = AssembledOperator::new(&slack, grid, SpatialOrder::Second);
        let s = MarchState::new(vec![1.0], 0.1, false);
        assert!(step_bdf2(&s, &op, 0.1, &NewtonSettings::default()).is_err());
    }

    #[test]
    fn bdf2_linear_extrapolation_when_slack() {
        // With A = 0 the recurrence u^{n+1} = (4u^n - u^{n-1})/3 holds exactly.
        let slack = inert_problem(-1e6);
        let u = run(step_bdf2, &slack, &[&[3.0, -1.0], &[1.5, 2.0]], 0.25);
        assert_relative_eq!(u[0], (4.0 * 3.0 - 1.5) / 3.0, epsilon = 1e-14);
        assert_relative_eq!(u[1], (-4.0 - 2.0) / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn march_single_step_keeps_initial_data() {
        let slack = inert_problem(-1e6);
        let grid = SpatialGrid::new(0.0, 3.0, 2).unwrap();
        let tg = TimeGrid::new(1.0, 1).unwrap();
        let op = AssembledOperator::new(&slack, grid, SpatialOrder::Second);
        let out = march_with_operator(&op, &tg, SchemeKind::Bdf1, &MarchOptions::default()).unwrap();
        assert_eq!(out.solution, vec![1.0, 2.0]);
        assert_eq!(out.state.n, 1);
    }

    #[test]
    fn startup_chains() {
        assert_eq!(rule_for(SchemeKind::Bdf2, 0, StartupStep::CrankNicolson), SchemeKind::Cn1);
        assert_eq!(rule_for(SchemeKind::Bdf2, 0, StartupStep::ImplicitEuler), SchemeKind::Bdf1);
        assert_eq!(rule_for(SchemeKind::Bdf2, 1, StartupStep::CrankNicolson), SchemeKind::Bdf2);
        assert_eq!(rule_for(SchemeKind::Bdf3, 0, StartupStep::ImplicitEuler), SchemeKind::Cn1);
        assert_eq!(rule_for(SchemeKind::Bdf3, 1, StartupStep::ImplicitEuler), SchemeKind::Bdf2);
        assert_eq!(rule_for(SchemeKind::Bdf3, 2, StartupStep::CrankNicolson), SchemeKind::Bdf3);
    }

    #[test]
    fn bdf2_march_matches_manual_chain() {
        let mut p = ProblemSpec::heat("heat", 0.0, 1.0, 0.2, 0.5);
        p.initial = scalar(|x| (std::f64::consts::PI * x).sin());
        p.exact = None;
        let grid = SpatialGrid::new(0.0, 1.0, 9).unwrap();
        let tg = TimeGrid::new(0.2, 2).unwrap();
        let opts = MarchOptions::default();
        let out = march(&p, &grid, &tg, SchemeKind::Bdf2, SpatialOrder::Second, &opts).unwrap();

        let op = AssembledOperator::new(&p, grid, SpatialOrder::Second);
        let u0: Vec<f64> = grid.interior_nodes().iter().map(|&x| (p.initial)(x)).collect();
        let mut s = MarchState::new(u0, tg.tau(), false);
        let (u1, r1) = step_cn1(&s, &op, tg.tau(), &opts.newton).unwrap();
        s.push(u1, &r1);
        let (u2, _) = step_bdf2(&s, &op, tg.tau(), &opts.newton).unwrap();
        assert_eq!(out.solution, u2);
    }

    #[test]
    fn monotone_examples() {
        assert!(monotone_check(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]]));
        assert!(!monotone_check(&[vec![1.0, 2.0], vec![1.0, 2.0 - 1e-3]]));
        assert!(monotone_check(&[vec![1.0]]));
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in SchemeKind::ALL {
            assert_eq!(s.name().parse::<SchemeKind>().unwrap(), s);
        }
        assert!("bdf4".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn incompatible_initial_data_rejected() {
        let mut p = inert_problem(10.0);
        p.sigma = space_time(|_, _| 1.0);
        let grid = SpatialGrid::new(0.0, 3.0, 2).unwrap();
        let tg = TimeGrid::new(1.0, 2).unwrap();
        assert!(march(&p, &grid, &tg, SchemeKind::Bdf2, SpatialOrder::Second, &MarchOptions::default()).is_err());
    }
}
