//! Define a new obstacle problem and step it by hand, one scheme step at a
//! time, inspecting the Newton reports.
//!
//! The problem is pure diffusion `v_t - v_xx = f` on `(0, 1)` with the
//! obstacle `v >= 0.1 - (x - 1/2)^2` and a source that pushes the solution
//! down, so contact spreads from the middle.
//!
//! ```bash
//! cargo run --example custom_problem
//! ```

use obstacle_bdf::discretization::AssembledOperator;
use obstacle_bdf::problem::{constant, scalar, space_time, ProblemSpec};
use obstacle_bdf::stepping::{advance, MarchOptions, MarchState};
use obstacle_bdf::{SchemeKind, SpatialGrid, SpatialOrder, TimeGrid};

fn main() -> obstacle_bdf::Result<()> {
    let obstacle = |x: f64| 0.1 - (x - 0.5).powi(2);
    let mut problem = ProblemSpec::heat("dome", 0.0, 1.0, 0.5, 2f64.sqrt());
    problem.obstacle = space_time(move |_, x| obstacle(x));
    problem.initial = scalar(move |x| obstacle(x).max(0.0) + 0.2 * (std::f64::consts::PI * x).sin());
    problem.source = constant(-2.0);
    problem.dirichlet_left = scalar(move |_| obstacle(0.0).max(0.0));
    problem.dirichlet_right = scalar(move |_| obstacle(1.0).max(0.0));

    let grid = SpatialGrid::new(0.0, 1.0, 99)?;
    let tgrid = TimeGrid::new(problem.horizon, 50)?;
    problem.check_ellipticity(&grid, 0.0)?;
    problem.check_compatibility(&grid)?;

    let op = AssembledOperator::new(&problem, grid, SpatialOrder::Second);
    let xs = grid.interior_nodes();
    let u0 = xs.iter().map(|&x| (problem.initial)(x)).collect();
    let mut state = MarchState::new(u0, tgrid.tau(), false);
    let options = MarchOptions::default();
    while state.n < tgrid.steps() {
        advance(&mut state, &op, SchemeKind::Bdf2, &options)?;
        if state.n.is_multiple_of(10) {
            let contact = state.current().iter().zip(&xs).filter(|(&u, &x)| u - obstacle(x) <= 1e-12).count();
            let solves = state.newton_iterations.last().unwrap();
            println!("t = {:.2}: {solves} Newton solves, {contact} nodes in contact", state.time());
        }
    }
    println!("max Newton residual over the run: {:.1e}", state.max_newton_residual);
    Ok(())
}
