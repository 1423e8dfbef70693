//! Solve a small obstacle complementarity problem
//! `min(B x - b, x - g) = 0` with the semi-smooth Newton method and compare
//! with exhaustive active-set search.
//!
//! ```bash
//! cargo run --example lcp_newton
//! ```

use obstacle_bdf::banded::BandedMatrix;
use obstacle_bdf::lcp::{brute_force, solve, ObstacleLcp};

fn main() -> obstacle_bdf::Result<()> {
    let n = 8;
    // Discrete Laplacian plus a shift: a strictly diagonally dominant M-matrix.
    let b = BandedMatrix::tridiag(n, -1.0, 2.5, -1.0)?;
    let rhs: Vec<f64> = (0..n).map(|i| if i < n / 2 { -1.0 } else { 1.0 }).collect();
    let obstacle = vec![0.0; n];
    let lcp = ObstacleLcp::new(b, rhs, obstacle)?;

    let (x, report) = solve(&lcp, &vec![0.0; n], lcp.default_tolerance(), lcp.default_max_iter())?;
    let oracle = brute_force(&lcp, 1e-12)?;
    let residual = lcp.residual(&x)?;

    println!("{:>3} {:>12} {:>12} {:>7}", "i", "x", "Bx - b", "active");
    for i in 0..n {
        println!("{i:>3} {:>12.6} {:>12.3e} {:>7}", x[i], residual[i], report.active_set_final[i]);
    }
    let diff = x.iter().zip(&oracle).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!(
        "converged {} after {} linear solves, residual {:.1e}, distance to exhaustive search {diff:.1e}",
        report.converged, report.iterations, report.residual_inf
    );
    Ok(())
}
