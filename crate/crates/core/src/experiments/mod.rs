//! Convergence studies: error norms, reference solutions, tables and their
//! configuration.
//!
//! Problems with a closed-form solution are measured in the grid norms
//! `(h sum |e_i|^p)^(1/p)` over the interior nodes. The American put is
//! measured against a fine-mesh reference on an evaluation window with
//! window-averaged norms `(1/M) sum |d_k|`, `((1/M) sum d_k^2)^(1/2)` and
//! `max |d_k|`, where coarse solutions are carried to the window points by
//! four-point Lagrange interpolation.

mod config;
mod norms;
mod reference;
mod table;

pub use config::{
    parse_mesh_list, MeshPlan, OutputFormat, ProblemId, ReferencePolicy, RunConfig, DEFAULT_REFERENCE_MESH,
};
pub use norms::{errors_exact, estimate_order, interpolate_cubic, ErrorNorms};
pub use reference::{errors_vs_reference, make_reference, EvalWindow, ReferenceSolution};
pub use table::{reference_for, run_table, run_table_with_reference, ConvergenceRow, ConvergenceTable, CSV_HEADER};
