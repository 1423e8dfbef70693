//! BDF3 on a problem whose solution is twice continuously differentiable
//! across the free boundary, where third order in time is attainable.
//!
//! ```bash
//! cargo run --release --example high_order_bdf3
//! ```

use obstacle_bdf::experiments::{errors_exact, estimate_order};
use obstacle_bdf::problems::{model2, GhostPolicy, ModelParams};
use obstacle_bdf::{march, MarchOptions, SchemeKind, SpatialGrid, SpatialOrder, TimeGrid};

fn main() -> obstacle_bdf::Result<()> {
    let problem = model2(ModelParams::model2_default(), GhostPolicy::ExactSolution)?;
    println!("{:>6} {:>6} {:>12} {:>6}", "J", "N", "L-inf", "order");
    let mut previous: Option<f64> = None;
    for j in [640, 1280, 2560, 5120] {
        let grid = SpatialGrid::new(problem.xmin, problem.xmax, j)?;
        let tgrid = TimeGrid::new(problem.horizon, j / 10)?;
        let out = march(&problem, &grid, &tgrid, SchemeKind::Bdf3, SpatialOrder::Fourth, &MarchOptions::default())?;
        let e = errors_exact(&out.solution, &problem, &grid, problem.horizon)?.linf;
        let order = previous.and_then(|p| estimate_order(p, e)).map(|o| format!("{o:.2}")).unwrap_or_default();
        println!("{j:>6} {:>6} {e:>12.4e} {order:>6}", j / 10);
        previous = Some(e);
    }
    Ok(())
}
