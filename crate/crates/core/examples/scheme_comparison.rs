//! Crank-Nicolson versus BDF2 on an obstacle problem with a known solution,
//! with large time steps (N = J/10). The obstacle makes the solution
//! non-smooth in time at the free boundary; Crank-Nicolson loses its second
//! order there while BDF2 keeps it.
//!
//! ```bash
//! cargo run --release --example scheme_comparison
//! ```

use obstacle_bdf::experiments::{run_table, ProblemId, RunConfig};

fn main() -> obstacle_bdf::Result<()> {
    for scheme in ["cn1", "bdf2"] {
        let mut config = RunConfig::new(ProblemId::Model1);
        config.set("scheme", scheme)?;
        config.set("mesh", "320:32,640:64,1280:128,2560:256")?;
        let table = run_table(&config)?;
        print!("{}", table.to_markdown());
        let orders: Vec<String> = table.linf_orders().iter().map(|o| format!("{o:.2}")).collect();
        println!("{scheme}: L-inf orders {}\n", orders.join(", "));
    }
    Ok(())
}
