//! Temporal orders of all five schemes on a smooth solution with an inactive
//! obstacle, refining space and time together.
//!
//! ```bash
//! cargo run --release --example manufactured_orders
//! ```

use obstacle_bdf::experiments::{run_table, ProblemId, RunConfig};
use obstacle_bdf::SchemeKind;

fn main() -> obstacle_bdf::Result<()> {
    for scheme in SchemeKind::ALL {
        // The second Crank-Nicolson variant uses u^n as its obstacle, so it
        // needs a solution that increases in time.
        let problem =
            if scheme == SchemeKind::Cn2 { ProblemId::ManufacturedRising } else { ProblemId::ManufacturedDecaying };
        let mut config = RunConfig::new(problem);
        config.set("scheme", scheme.name())?;
        config.set("mesh", "20:20,40:40,80:80,160:160")?;
        let table = run_table(&config)?;
        let orders: Vec<String> = table.linf_orders().iter().map(|o| format!("{o:.2}")).collect();
        println!("{:>5} on {:<22} L-inf orders {}", scheme.name(), problem.name(), orders.join(", "));
    }
    Ok(())
}
