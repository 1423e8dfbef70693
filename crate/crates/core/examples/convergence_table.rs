//! Build a convergence table programmatically and render it as Markdown and
//! CSV, exactly as the `obstacle-tables` binary does.
//!
//! ```bash
//! cargo run --release --example convergence_table
//! ```

use obstacle_bdf::experiments::{run_table, ConvergenceTable, ProblemId, RunConfig};

fn main() -> obstacle_bdf::Result<()> {
    // Settings use the same `key = value` syntax as configuration files.
    let config = RunConfig::from_text(
        "problem = model1\n\
         scheme = bdf2\n\
         space-order = 4\n\
         base-J = 80\n\
         base-N = 80\n\
         doublings = 3\n\
         timing = false\n",
    )?;
    assert_eq!(config.problem, ProblemId::Model1);

    let table = run_table(&config)?;
    print!("{}", table.to_markdown());
    println!();
    let csv = table.to_csv();
    print!("{csv}");

    // The CSV form parses back into the same rows.
    let parsed = ConvergenceTable::from_csv(&csv)?;
    assert_eq!(parsed.rows.len(), table.rows.len());
    Ok(())
}
