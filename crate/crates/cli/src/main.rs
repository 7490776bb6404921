use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod error;
mod expr;
mod green;
mod gridfile;
mod norms;
mod pencil;
mod solve;
mod spec;

use error::CliError;
use spec::{Format, SpecFile};

/// Nonlocal elliptic problems in plane angles.
#[derive(Debug, Parser)]
#[command(name = "nlangle", version)]
struct Cli {
    /// Problem file (TOML, or JSON with a `.json` extension).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; overrides `[output] format`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Do not print reports to stdout. Files are still written.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Dd,
    Nonlocal,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pencil eigenvalues, closed form and numeric.
    Eigs {
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        im_min: f64,
        #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
        im_max: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        re_min: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        re_max: f64,
    },
    /// Unique solvability in the weighted scale (a, l).
    Solvability {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long)]
        l: Option<u32>,
    },
    /// Solve the differential-difference or the nonlocal problem on the grid.
    Solve {
        #[arg(long, value_enum)]
        problem: Problem,
        /// Number of grid doublings.
        #[arg(long, default_value_t = 0)]
        refine: u32,
    },
    /// Check the Green formula on the built-in test pairs.
    Green {
        /// 1 for the Dirichlet-type problem, 2 for the Neumann-type problem.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        example: u8,
    },
    /// The matrix of the difference operator and its properties.
    Spectrum,
    /// Weighted norms and trace ratios of a grid function.
    Norms {
        /// Grid CSV with header `r,phi,re,im`.
        #[arg(long)]
        input: PathBuf,
    },
}

/// Settings shared by every subcommand.
pub struct Ctx {
    pub spec: SpecFile,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub quiet: bool,
}

impl Ctx {
    /// `[output] path` (under `--out` when relative), else `--out/default_name`.
    pub fn destination(&self, default_name: &str) -> Option<PathBuf> {
        let configured = self.spec.output.as_ref().and_then(|o| o.path.clone());
        match (configured, &self.out) {
            (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
            (Some(p), _) => Some(p),
            (None, Some(dir)) => Some(dir.join(default_name)),
            (None, None) => None,
        }
    }

    pub fn write_file(&self, path: &std::path::Path, contents: &[u8]) -> Result<(), CliError> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, contents)?;
        Ok(())
    }

    /// Prints `text` unless quiet and writes it to the destination, if any.
    pub fn emit(&self, text: &str, default_name: &str) -> Result<(), CliError> {
        if !self.quiet {
            print!("{text}");
        }
        if let Some(path) = self.destination(default_name) {
            self.write_file(&path, text.as_bytes())?;
        }
        Ok(())
    }

    pub fn warn(&self, msg: &str) {
        if !self.quiet {
            eprintln!("warning: {msg}");
        }
    }
}

/// Shortest round-trip representation.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let path = cli.spec.ok_or_else(|| CliError::Spec("--spec <file> is required".into()))?;
    let spec = SpecFile::load(&path)?;
    let format = cli.format.or(spec.output.as_ref().and_then(|o| o.format)).unwrap_or(Format::Csv);
    let ctx = Ctx { spec, out: cli.out, format, quiet: cli.quiet };
    match cli.command {
        Command::Eigs { im_min, im_max, re_min, re_max } => pencil::eigs(&ctx, re_min, re_max, im_min, im_max),
        Command::Solvability { a, l } => pencil::solvability(&ctx, a, l),
        Command::Solve { problem, refine } => solve::run(&ctx, problem, refine),
        Command::Green { example } => green::run(&ctx, example),
        Command::Spectrum => pencil::spectrum(&ctx),
        Command::Norms { input } => norms::run(&ctx, &input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
