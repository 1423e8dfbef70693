//! Convergence tables: one march per mesh, errors, observed orders, and
//! markdown / CSV emission.

use std::fmt::Write as _;
use std::time::Instant;

use log::{info, warn};

use super::config::{ReferencePolicy, RunConfig};
use super::norms::{errors_exact, estimate_order, ErrorNorms};
use super::reference::{errors_vs_reference, make_reference, EvalWindow, ReferenceSolution};
use crate::error::{Error, Result};
use crate::grid::{SpatialGrid, TimeGrid};
use crate::problem::ProblemSpec;
use crate::stepping::{march, MarchOptions};

/// CSV header of every table.
pub const CSV_HEADER: &str = "J,N,e_l1,ord_l1,e_l2,ord_l2,e_linf,ord_linf,time_s";

/// One mesh of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub j: usize,
    pub n: usize,
    /// `None` when the march failed.
    pub errors: Option<ErrorNorms>,
    /// Orders `[l1, l2, linf]` against the previous row; `None` on the first
    /// row of a doubling block or when an error is zero.
    pub orders: [Option<f64>; 3],
    pub wall_seconds: Option<f64>,
    pub failure: Option<String>,
}

impl ConvergenceRow {
    pub fn ok(&self) -> bool {
        self.failure.is_none() && self.errors.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub title: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// True when every row produced errors.
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(ConvergenceRow::ok)
    }

    /// Recompute the order columns. A row continues the block of the previous
    /// row when both `J` and `N` doubled; otherwise it starts a new block.
    pub fn fill_orders(&mut self) {
        for i in 0..self.rows.len() {
            let orders = match i.checked_sub(1).map(|p| &self.rows[p]) {
                Some(prev) if self.rows[i].j == 2 * prev.j && self.rows[i].n == 2 * prev.n => {
                    match (prev.errors, self.rows[i].errors) {
                        (Some(c), Some(f)) => {
                            let (c, f) = (c.as_array(), f.as_array());
                            [0, 1, 2].map(|k| estimate_order(c[k], f[k]))
                        }
                        _ => [None; 3],
                    }
                }
                _ => [None; 3],
            };
            self.rows[i].orders = orders;
        }
    }

    /// Observed `L_inf` orders in row order (blank entries skipped).
    pub fn linf_orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.orders[2]).collect()
    }

    /// Table in the layout `J | N | L1 error | order | L2 error | order | Linf error | order | time(s)`.
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        if !self.title.is_empty() {
            let _ = writeln!(s, "**{}**\n", self.title);
        }
        s.push_str("| J | N | L1 error | order | L2 error | order | Linf error | order | time(s) |\n");
        s.push_str("|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n");
        for r in &self.rows {
            let cells = row_cells(r);
            let _ = writeln!(s, "| {} |", cells.join(" | "));
        }
        for r in self.rows.iter().filter(|r| r.failure.is_some()) {
            let _ = writeln!(s, "\nJ = {}, N = {} failed: {}", r.j, r.n, r.failure.as_deref().unwrap_or(""));
        }
        s
    }

    /// CSV with header [`CSV_HEADER`]; blank cells for missing values.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&row_cells(r).join(","));
            s.push('\n');
        }
        s
    }

    /// Parse the output of [`ConvergenceTable::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => return Err(Error::Config(format!("unexpected CSV header {other:?}"))),
        }
        let rows = lines.map(|l| parse_cells(&l.split(',').collect::<Vec<_>>())).collect::<Result<Vec<_>>>()?;
        Ok(Self { title: String::new(), rows })
    }

    /// Parse the table rows of [`ConvergenceTable::to_markdown`].
    pub fn from_markdown(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| l.starts_with('|'))
            .skip(2)
            .map(|l| {
                let cells: Vec<&str> = l.trim().trim_matches('|').split('|').collect();
                parse_cells(&cells)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { title: String::new(), rows })
    }
}

fn fmt_error(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.5E}")).unwrap_or_default()
}

fn fmt_order(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.3}")).unwrap_or_default()
}

fn row_cells(r: &ConvergenceRow) -> Vec<String> {
    let e = r.errors.map(|e| e.as_array());
    let err = |k: usize| fmt_error(e.map(|e| e[k]));
    vec![
        r.j.to_string(),
        r.n.to_string(),
        err(0),
        fmt_order(r.orders[0]),
        err(1),
        fmt_order(r.orders[1]),
        err(2),
        fmt_order(r.orders[2]),
        r.wall_seconds.map(|t| format!("{t:.3}")).unwrap_or_default(),
    ]
}

fn parse_cells(cells: &[&str]) -> Result<ConvergenceRow> {
    if cells.len() != 9 {
        return Err(Error::Config(format!("expected 9 cells, got {}", cells.len())));
    }
    let num = |s: &str| -> Result<Option<f64>> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(None);
        }
        s.parse().map(Some).map_err(|e| Error::Config(format!("bad number {s:?}: {e}")))
    };
    let int =
        |s: &str| -> Result<usize> { s.trim().parse().map_err(|e| Error::Config(format!("bad integer {s:?}: {e}"))) };
    let (l1, l2, linf) = (num(cells[2])?, num(cells[4])?, num(cells[6])?);
    let errors = match (l1, l2, linf) {
        (Some(l1), Some(l2), Some(linf)) => Some(ErrorNorms { l1, l2, linf }),
        _ => None,
    };
    Ok(ConvergenceRow {
        j: int(cells[0])?,
        n: int(cells[1])?,
        errors,
        orders: [num(cells[3])?, num(cells[5])?, num(cells[7])?],
        wall_seconds: num(cells[8])?,
        failure: None,
    })
}

/// Error of one march at the final time, by the configured policy.
fn row_errors(
    problem: &ProblemSpec,
    j: usize,
    n: usize,
    config: &RunConfig,
    options: &MarchOptions,
    reference: Option<&ReferenceSolution>,
) -> Result<ErrorNorms> {
    let grid = SpatialGrid::new(problem.xmin, problem.xmax, j)?;
    let tgrid = TimeGrid::new(problem.horizon, n)?;
    let out = march(problem, &grid, &tgrid, config.scheme, config.space_order, options)?;
    match reference {
        None => errors_exact(&out.solution, problem, &grid, problem.horizon),
        Some(r) => errors_vs_reference(&out.with_boundary(problem, problem.horizon), &grid, r),
    }
}

/// Build the reference a configuration asks for, if any.
pub fn reference_for(config: &RunConfig, problem: &ProblemSpec) -> Result<Option<ReferenceSolution>> {
    match config.reference {
        ReferencePolicy::Exact => Ok(None),
        ReferencePolicy::SelfReference { j, n } => {
            let window = EvalWindow::new(config.window.lo, config.window.hi, config.window.spacing)?;
            let start = Instant::now();
            let r = make_reference(problem, config.scheme, config.space_order, j, n, window, &config.march_options())?;
            info!("reference J = {j}, N = {n} in {:.2} s", start.elapsed().as_secs_f64());
            Ok(Some(r))
        }
    }
}

/// Run every mesh of `config`.
///
/// Failures of individual marches are recorded on their rows and the table
/// continues; configuration and reference errors abort.
pub fn run_table(config: &RunConfig) -> Result<ConvergenceTable> {
    config.validate()?;
    let problem = config.problem.build(config.ghosts)?;
    let reference = reference_for(config, &problem)?;
    run_table_with_reference(config, &problem, reference.as_ref())
}

/// [`run_table`] with a prebuilt problem and optional reference.
pub fn run_table_with_reference(
    config: &RunConfig,
    problem: &ProblemSpec,
    reference: Option<&ReferenceSolution>,
) -> Result<ConvergenceTable> {
    let options = config.march_options();
    let mut rows = Vec::new();
    for (j, n) in config.mesh.pairs() {
        let start = Instant::now();
        let result = row_errors(problem, j, n, config, &options, reference);
        let elapsed = start.elapsed().as_secs_f64();
        let (errors, failure) = match result {
            Ok(e) => {
                info!("J = {j}, N = {n}: linf = {:.3e} ({elapsed:.2} s)", e.linf);
                (Some(e), None)
            }
            Err(e) => {
                warn!("J = {j}, N = {n} failed: {e}");
                (None, Some(e.to_string()))
            }
        };
        rows.push(ConvergenceRow {
            j,
            n,
            errors,
            orders: [None; 3],
            wall_seconds: config.timing.then_some(elapsed),
            failure,
        });
    }
    let title = format!("{} {} order {}", problem.name, config.scheme, config.space_order);
    let mut table = ConvergenceTable { title, rows };
    table.fill_orders();
    Ok(table)
}
