//! Run configuration for convergence tables and its `key = value` text form.
//!
//! Keys (case-insensitive, `_` and `-` interchangeable), one per line, `#`
//! starts a comment:
//!
//! ```text
//! problem      = american-put | model1 | model2 | manufactured | manufactured-rising
//! scheme       = cn1 | cn2 | bdf1 | bdf2 | bdf3
//! space-order  = 2 | 4
//! mesh         = 80:80, 160:160, 320:320
//! base-J       = 80        # with base-N and doublings, replaces `mesh`
//! base-N       = 8
//! doublings    = 4
//! ref-mode     = exact | self
//! ref-J        = 5120      # ref-N defaults to ref-J
//! window       = 80:120
//! spacing      = 0.01
//! newton-tol   = 1e-10     # relative to 1 + |rhs|_inf
//! newton-max-iter = 50     # default: system size + 5
//! bdf2-init    = cn | ie
//! ghosts       = exact | payoff
//! timing       = true | false
//! format       = markdown | csv
//! out          = table.csv
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::reference::EvalWindow;
use crate::discretization::SpatialOrder;
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::problems::{
    american_put_benchmark, manufactured_smooth, model1, model2, GhostPolicy, ManufacturedKind, ModelParams,
};
use crate::stepping::{MarchOptions, NewtonSettings, SchemeKind, StartupStep};

/// Built-in problems addressable from a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemId {
    AmericanPut,
    Model1,
    Model2,
    ManufacturedDecaying,
    ManufacturedRising,
}

impl ProblemId {
    pub fn name(self) -> &'static str {
        match self {
            ProblemId::AmericanPut => "american-put",
            ProblemId::Model1 => "model1",
            ProblemId::Model2 => "model2",
            ProblemId::ManufacturedDecaying => "manufactured",
            ProblemId::ManufacturedRising => "manufactured-rising",
        }
    }

    pub fn has_exact_solution(self) -> bool {
        self != ProblemId::AmericanPut
    }

    pub fn build(self, ghosts: GhostPolicy) -> Result<ProblemSpec> {
        match self {
            ProblemId::AmericanPut => Ok(american_put_benchmark()),
            ProblemId::Model1 => model1(ModelParams::model1_default(), ghosts),
            ProblemId::Model2 => model2(ModelParams::model2_default(), ghosts),
            ProblemId::ManufacturedDecaying => Ok(manufactured_smooth(ManufacturedKind::Decaying)),
            ProblemId::ManufacturedRising => Ok(manufactured_smooth(ManufacturedKind::Rising)),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "american-put" | "american" | "put" => Ok(ProblemId::AmericanPut),
            "model1" | "model-1" => Ok(ProblemId::Model1),
            "model2" | "model-2" => Ok(ProblemId::Model2),
            "manufactured" | "manufactured-decaying" => Ok(ProblemId::ManufacturedDecaying),
            "manufactured-rising" => Ok(ProblemId::ManufacturedRising),
            _ => Err(Error::Config(format!("unknown problem {s:?}"))),
        }
    }
}

/// Sequence of `(J, N)` meshes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeshPlan {
    Pairs(Vec<(usize, usize)>),
    /// `(J0 2^k, N0 2^k)` for `k = 0..=doublings`.
    Doubling {
        base_j: usize,
        base_n: usize,
        doublings: usize,
    },
}

impl MeshPlan {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        match *self {
            MeshPlan::Pairs(ref p) => p.clone(),
            MeshPlan::Doubling { base_j, base_n, doublings } => {
                (0..=doublings).map(|k| (base_j << k, base_n << k)).collect()
            }
        }
    }

    fn as_doubling(&self) -> (usize, usize, usize) {
        match *self {
            MeshPlan::Doubling { base_j, base_n, doublings } => (base_j, base_n, doublings),
            MeshPlan::Pairs(ref p) => {
                let (j, n) = p.first().copied().unwrap_or((80, 80));
                (j, n, p.len().saturating_sub(1))
            }
        }
    }
}

/// Parse `"J:N, J:N, ..."`.
pub fn parse_mesh_list(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|pair| {
            let (j, n) =
                pair.split_once(':').ok_or_else(|| Error::Config(format!("mesh entry {pair:?} is not J:N")))?;
            Ok((parse_value(j)?, parse_value(n)?))
        })
        .collect()
}

fn parse_value<T: FromStr>(s: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    s.trim().parse().map_err(|e| Error::Config(format!("cannot parse {s:?}: {e}")))
}

/// Where the error of each row is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferencePolicy {
    /// Closed-form solution, grid norms over the interior nodes.
    Exact,
    /// A fine-mesh run of the same problem, window-averaged norms.
    SelfReference { j: usize, n: usize },
}

/// Default fine mesh of the self reference.
pub const DEFAULT_REFERENCE_MESH: usize = 5120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Markdown,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

fn parse_ghosts(s: &str) -> Result<GhostPolicy> {
    match s.trim().to_ascii_lowercase().as_str() {
        "exact" => Ok(GhostPolicy::ExactSolution),
        "payoff" => Ok(GhostPolicy::PayoffExtension),
        _ => Err(Error::Config(format!("unknown ghost policy {s:?}"))),
    }
}

fn parse_startup(s: &str) -> Result<StartupStep> {
    match s.trim().to_ascii_lowercase().as_str() {
        "cn" | "cn1" | "crank-nicolson" => Ok(StartupStep::CrankNicolson),
        "ie" | "bdf1" | "euler" => Ok(StartupStep::ImplicitEuler),
        _ => Err(Error::Config(format!("unknown startup step {s:?}"))),
    }
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("expected a boolean, got {s:?}"))),
    }
}

/// Everything needed to produce one convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub scheme: SchemeKind,
    pub space_order: SpatialOrder,
    pub mesh: MeshPlan,
    pub reference: ReferencePolicy,
    /// Evaluation window of the self reference.
    pub window: EvalWindow,
    /// Relative Newton tolerance.
    pub newton_tol: f64,
    /// Newton iteration cap per step; `None` means system size + 5.
    pub newton_max_iter: Option<usize>,
    pub bdf2_init: StartupStep,
    pub ghosts: GhostPolicy,
    /// Record wall times; disable for byte-reproducible output.
    pub timing: bool,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for `problem`: BDF2, fourth order, `N = J` from 80 with four
    /// doublings; exact errors when available, otherwise a 5120 self
    /// reference on `[80, 120]` with spacing 0.01.
    pub fn new(problem: ProblemId) -> Self {
        let reference = if problem.has_exact_solution() {
            ReferencePolicy::Exact
        } else {
            ReferencePolicy::SelfReference { j: DEFAULT_REFERENCE_MESH, n: DEFAULT_REFERENCE_MESH }
        };
        Self {
            problem,
            scheme: SchemeKind::Bdf2,
            space_order: SpatialOrder::Fourth,
            mesh: MeshPlan::Doubling { base_j: 80, base_n: 80, doublings: 4 },
            reference,
            window: EvalWindow { lo: 80.0, hi: 120.0, spacing: 0.01 },
            newton_tol: NewtonSettings::default().rel_tol,
            newton_max_iter: None,
            bdf2_init: StartupStep::CrankNicolson,
            ghosts: GhostPolicy::default(),
            timing: true,
            format: OutputFormat::Markdown,
            out: None,
        }
    }

    pub fn march_options(&self) -> MarchOptions {
        MarchOptions {
            bdf2_init: self.bdf2_init,
            newton: NewtonSettings { rel_tol: self.newton_tol, max_iter: self.newton_max_iter },
            keep_levels: false,
        }
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase().replace('_', "-");
        match key.as_str() {
            "problem" => {
                let id: ProblemId = value.parse()?;
                // Switching problems resets the reference to the new default.
                if id != self.problem {
                    self.reference = RunConfig::new(id).reference;
                }
                self.problem = id;
            }
            "scheme" => self.scheme = value.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
            "space-order" => self.space_order = value.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
            "mesh" => self.mesh = MeshPlan::Pairs(parse_mesh_list(value)?),
            "base-j" | "base-n" | "doublings" => {
                let (mut j, mut n, mut d) = self.mesh.as_doubling();
                let v: usize = parse_value(value)?;
                match key.as_str() {
                    "base-j" => j = v,
                    "base-n" => n = v,
                    _ => d = v,
                }
                self.mesh = MeshPlan::Doubling { base_j: j, base_n: n, doublings: d };
            }
            "ref-mode" => {
                self.reference = match value.trim().to_ascii_lowercase().as_str() {
                    "exact" => ReferencePolicy::Exact,
                    "self" => match self.reference {
                        r @ ReferencePolicy::SelfReference { .. } => r,
                        ReferencePolicy::Exact => {
                            ReferencePolicy::SelfReference { j: DEFAULT_REFERENCE_MESH, n: DEFAULT_REFERENCE_MESH }
                        }
                    },
                    other => return Err(Error::Config(format!("unknown ref-mode {other:?}"))),
                }
            }
            "ref-j" | "ref-n" => {
                let v: usize = parse_value(value)?;
                let (j, n) = match self.reference {
                    ReferencePolicy::SelfReference { j, n } => (j, n),
                    ReferencePolicy::Exact => (DEFAULT_REFERENCE_MESH, DEFAULT_REFERENCE_MESH),
                };
                self.reference = if key == "ref-j" {
                    // ref-N follows ref-J unless it was set to something else
                    ReferencePolicy::SelfReference { j: v, n: if n == j { v } else { n } }
                } else {
                    ReferencePolicy::SelfReference { j, n: v }
                };
            }
            "window" => {
                let (lo, hi) = value
                    .split_once(':')
                    .or_else(|| value.split_once(','))
                    .ok_or_else(|| Error::Config(format!("window {value:?} is not lo:hi")))?;
                self.window = EvalWindow { lo: parse_value(lo)?, hi: parse_value(hi)?, spacing: self.window.spacing };
            }
            "spacing" => self.window.spacing = parse_value(value)?,
            "newton-tol" => self.newton_tol = parse_value(value)?,
            "newton-max-iter" => self.newton_max_iter = Some(parse_value(value)?),
            "bdf2-init" => self.bdf2_init = parse_startup(value)?,
            "ghosts" => self.ghosts = parse_ghosts(value)?,
            "timing" => self.timing = parse_bool(value)?,
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Apply every setting of a `key = value` text.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got {raw:?}", lineno + 1)))?;
            self.set(key, value).map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    /// Parse a full configuration; `problem` defaults to the American put.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut config = RunConfig::new(ProblemId::AmericanPut);
        // Apply the problem first so the other keys refine its defaults.
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if let Some((k, v)) = line.split_once('=') {
                if k.trim().eq_ignore_ascii_case("problem") {
                    config = RunConfig::new(v.parse()?);
                }
            }
        }
        config.apply_text(text)?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let pairs = self.mesh.pairs();
        if pairs.is_empty() {
            return Err(Error::Config("mesh list is empty".into()));
        }
        if let Some(&(j, n)) = pairs.iter().find(|&&(j, n)| j == 0 || n == 0) {
            return Err(Error::Config(format!("mesh pairs must be positive, got {j}:{n}")));
        }
        if self.newton_max_iter == Some(0) {
            return Err(Error::Config("newton-max-iter must be at least 1".into()));
        }
        if !(self.newton_tol > 0.0) {
            return Err(Error::Config(format!("newton-tol must be positive, got {}", self.newton_tol)));
        }
        match self.reference {
            ReferencePolicy::Exact if !self.problem.has_exact_solution() => {
                Err(Error::Config(format!("{} has no exact solution; use ref-mode = self", self.problem)))
            }
            ReferencePolicy::SelfReference { j, n } => {
                if j == 0 || n == 0 {
                    return Err(Error::Config("reference mesh must be positive".into()));
                }
                let w = EvalWindow::new(self.window.lo, self.window.hi, self.window.spacing)?;
                let p = self.problem.build(self.ghosts)?;
                if w.lo < p.xmin || w.hi > p.xmax {
                    return Err(Error::WindowOutsideGrid { lo: w.lo, hi: w.hi, xmin: p.xmin, xmax: p.xmax });
                }
                Ok(())
            }
            ReferencePolicy::Exact => Ok(()),
        }
    }
}
