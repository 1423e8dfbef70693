//! Check the discrete coercivity bound `(A e, e) >= eta |e|_1^2 - gamma |e|^2`
//! of the American put operator on random vectors, for both stencils.
//!
//! ```bash
//! cargo run --example coercivity
//! ```

use obstacle_bdf::discretization::coercivity_check_problem;
use obstacle_bdf::problems::american_put_benchmark;
use obstacle_bdf::{SpatialGrid, SpatialOrder};

fn main() -> obstacle_bdf::Result<()> {
    let problem = american_put_benchmark();
    let grid = SpatialGrid::new(problem.xmin, problem.xmax, 200)?;
    for order in [SpatialOrder::Second, SpatialOrder::Fourth] {
        let report = coercivity_check_problem(&problem, &grid, 0.0, order, 1000, 7);
        println!(
            "{order:?}: eta = {:.4}, gamma = {:.4}, {} of 1000 random vectors violate the bound",
            report.constants.eta, report.constants.gamma, report.violations
        );
    }
    Ok(())
}
