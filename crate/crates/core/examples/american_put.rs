//! Price an American put with BDF2 and fourth-order differences, then read
//! off prices and the early-exercise boundary.
//!
//! ```bash
//! cargo run --release --example american_put
//! ```

use obstacle_bdf::experiments::interpolate_cubic;
use obstacle_bdf::problems::{american_put, put_payoff};
use obstacle_bdf::{march, MarchOptions, SchemeKind, SpatialGrid, SpatialOrder, TimeGrid};

fn main() -> obstacle_bdf::Result<()> {
    let (lambda, rate, strike, maturity) = (0.2, 0.1, 100.0, 1.0);
    let problem = american_put(lambda, rate, strike, maturity, 75.0, 275.0)?;
    let grid = SpatialGrid::new(problem.xmin, problem.xmax, 640)?;
    let tgrid = TimeGrid::new(problem.horizon, 640)?;

    let out = march(&problem, &grid, &tgrid, SchemeKind::Bdf2, SpatialOrder::Fourth, &MarchOptions::default())?;
    let values = out.with_boundary(&problem, problem.horizon);

    println!("American put, K = {strike}, r = {rate}, volatility {lambda}, T = {maturity}");
    println!("{:>8} {:>12} {:>12}", "spot", "price", "payoff");
    for spot in [80.0, 90.0, 100.0, 110.0, 120.0] {
        let price = interpolate_cubic(&grid, &values, spot)?;
        println!("{spot:>8.1} {price:>12.6} {:>12.6}", put_payoff(strike, spot));
    }

    // The exercise region is where the solution sits on the payoff.
    let boundary = grid
        .interior_nodes()
        .iter()
        .zip(&out.solution)
        .filter(|(&x, &u)| u - put_payoff(strike, x) <= 1e-9)
        .map(|(&x, _)| x)
        .fold(f64::NAN, f64::max);
    println!("exercise boundary at T: about {boundary:.2} (grid spacing {:.3})", grid.h());
    let iters = &out.state.newton_iterations;
    println!(
        "Newton iterations per step: mean {:.2}, max {}",
        iters.iter().sum::<usize>() as f64 / iters.len() as f64,
        iters.iter().max().unwrap()
    );
    Ok(())
}
