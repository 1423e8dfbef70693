//! Convergence tables for the built-in obstacle problems.
//!
//! Settings come from an optional `key = value` file (`--config`) and are
//! overridden by flags. Exit status: 0 when every row succeeded, 2 when any
//! row failed, 1 on configuration or I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use obstacle_bdf::experiments::{run_table, OutputFormat, ProblemId, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "obstacle-tables", version, about = "Convergence tables for 1D obstacle problems")]
struct Cli {
    /// `key = value` configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// american-put | model1 | model2 | manufactured | manufactured-rising
    #[arg(long)]
    problem: Option<String>,
    /// cn1 | cn2 | bdf1 | bdf2 | bdf3
    #[arg(long)]
    scheme: Option<String>,
    /// 2 | 4
    #[arg(long = "space-order")]
    space_order: Option<String>,
    /// Mesh list "J:N,J:N,..."
    #[arg(long)]
    mesh: Option<String>,
    #[arg(long = "base-J")]
    base_j: Option<String>,
    #[arg(long = "base-N")]
    base_n: Option<String>,
    #[arg(long)]
    doublings: Option<String>,
    /// exact | self
    #[arg(long = "ref-mode")]
    ref_mode: Option<String>,
    /// Reference mesh size (J = N)
    #[arg(long = "ref-J")]
    ref_j: Option<String>,
    /// Evaluation window "lo:hi"
    #[arg(long)]
    window: Option<String>,
    #[arg(long)]
    spacing: Option<String>,
    /// Relative Newton tolerance
    #[arg(long = "newton-tol")]
    newton_tol: Option<String>,
    /// Newton iteration cap per step
    #[arg(long = "newton-max-iter")]
    newton_max_iter: Option<String>,
    /// cn | ie
    #[arg(long = "bdf2-init")]
    bdf2_init: Option<String>,
    /// exact | payoff
    #[arg(long)]
    ghosts: Option<String>,
    /// Omit wall times so the output is reproducible byte for byte.
    #[arg(long = "no-timing")]
    no_timing: bool,
    /// markdown | csv
    #[arg(long)]
    format: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let flags = [
            ("problem", &self.problem),
            ("scheme", &self.scheme),
            ("space-order", &self.space_order),
            ("mesh", &self.mesh),
            ("base-j", &self.base_j),
            ("base-n", &self.base_n),
            ("doublings", &self.doublings),
            ("ref-mode", &self.ref_mode),
            ("ref-j", &self.ref_j),
            ("window", &self.window),
            ("spacing", &self.spacing),
            ("newton-tol", &self.newton_tol),
            ("newton-max-iter", &self.newton_max_iter),
            ("bdf2-init", &self.bdf2_init),
            ("ghosts", &self.ghosts),
            ("format", &self.format),
        ];
        let mut out: Vec<_> = flags.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect();
        if self.no_timing {
            out.push(("timing", "false".into()));
        }
        if let Some(p) = &self.out {
            out.push(("out", p.display().to_string()));
        }
        out
    }
}

fn build_config(cli: &Cli) -> obstacle_bdf::Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_text(&std::fs::read_to_string(path)?)?,
        None => RunConfig::new(ProblemId::AmericanPut),
    };
    for (key, value) in cli.overrides() {
        config.set(key, &value)?;
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let table = match run_table(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = match config.format {
        OutputFormat::Markdown => table.to_markdown(),
        OutputFormat::Csv => table.to_csv(),
    };
    let written = match &config.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if table.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
