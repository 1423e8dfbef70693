//! Banded storage, products and the pivoted banded solver.
//!
//! ```bash
//! cargo run --example banded_solve
//! ```

use obstacle_bdf::{banded_solve, BandedMatrix};

fn main() -> obstacle_bdf::Result<()> {
    // Fourth-order second-difference stencil: two diagonals on each side.
    let m = BandedMatrix::pentadiag(6, [1.0, -16.0, 30.0, -16.0, 1.0])?;
    for row in m.to_dense() {
        println!("{}", row.iter().map(|v| format!("{v:6.1}")).collect::<String>());
    }
    println!(
        "bandwidths ({}, {}), M-matrix: {}, strictly dominant: {}",
        m.lower(),
        m.upper(),
        m.is_m_matrix(),
        m.is_strictly_diag_dominant()
    );

    let x: Vec<f64> = (0..6).map(|i| (i as f64 + 1.0).sin()).collect();
    let b = m.matvec(&x)?;
    let y = banded_solve(&m, &b)?;
    let err = x.iter().zip(&y).fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
    println!("solve(A, A x) recovers x to {err:.1e}");
    Ok(())
}
