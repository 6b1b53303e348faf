use clap::{Args, Parser, Subcommand};
use couette_cli::commands::{self, ProfileRequest};
use couette_cli::config::SimulateConfig;
use couette_cli::emit::{json_string, write_out, Format};
use couette_cli::grid::Range;
use couette_cli::{CliError, Result};
use couette_core::axisym::Parity;
use couette_core::glsteady::Start;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "couette", version, about = "Small-gap Couette-Taylor onset and amplitude-equation tables")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Output file (stdout when absent; required by surface and simulate).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Overrides the seed of a simulate config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance of the emitter's self-checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long, default_value_t = 2.0)]
    alpha_min: f64,
    #[arg(long, default_value_t = 6.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 0.25)]
    alpha_step: f64,
}

#[derive(Args)]
struct BbetaArgs {
    #[arg(long, default_value_t = 0.0)]
    bbeta_min: f64,
    #[arg(long, default_value_t = 2.0)]
    bbeta_max: f64,
    #[arg(long, default_value_t = 0.5)]
    bbeta_step: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Axisymmetric neutral curve T(alpha).
    #[command(allow_negative_numbers = true)]
    Neutral {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long, default_value = "even")]
        parity: Parity,
    },
    /// Critical Taylor number over (alpha, B) plus the per-B minima.
    #[command(allow_negative_numbers = true)]
    Surface {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[command(flatten)]
        bbeta: BbetaArgs,
    },
    /// Dispersion and Landau coefficients at the critical point.
    Coeffs,
    /// Classify steady orbits over an (H, K) grid or along the region boundary.
    #[command(allow_negative_numbers = true)]
    Orbits {
        #[arg(long)]
        tau: f64,
        #[arg(long = "H", value_delimiter = ',')]
        h: Vec<f64>,
        #[arg(long = "K", value_delimiter = ',')]
        k: Vec<f64>,
        /// Scan the boundary with this many points instead of a grid.
        #[arg(long, conflicts_with_all = ["h", "k"])]
        boundary: Option<usize>,
    },
    /// Reconstruct A(y) for one (H, K); without --H the homoclinic orbit of K.
    #[command(allow_negative_numbers = true)]
    Profile {
        #[arg(long)]
        tau: f64,
        #[arg(long = "H")]
        h: Option<f64>,
        #[arg(long = "K")]
        k: f64,
        #[arg(long, default_value_t = -10.0)]
        y_min: f64,
        #[arg(long, default_value_t = 10.0)]
        y_max: f64,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        #[arg(long, default_value_t = 0.0)]
        theta0: f64,
        #[arg(long, value_enum, default_value = "inner")]
        start: StartArg,
    },
    /// Run the time-dependent equation from a TOML config and measure a rate.
    Simulate { config: PathBuf },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum StartArg {
    Inner,
    Outer,
}

/// `dir/name.csv` -> `dir/name.<suffix>`.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn need_out<'a>(out: &'a Option<PathBuf>, cmd: &str) -> Result<&'a Path> {
    out.as_deref().ok_or_else(|| CliError::Usage(format!("{cmd} writes two files and needs --out")))
}

fn run(cli: Cli) -> Result<()> {
    if !(cli.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let out = cli.out.as_deref();
    match cli.cmd {
        Cmd::Neutral { alpha, parity } => {
            let grid = Range { min: alpha.alpha_min, max: alpha.alpha_max, step: alpha.alpha_step }.points("alpha")?;
            write_out(out, &commands::neutral(&grid, parity).render(cli.format))
        }
        Cmd::Surface { alpha, bbeta } => {
            let a = Range { min: alpha.alpha_min, max: alpha.alpha_max, step: alpha.alpha_step }.points("alpha")?;
            let b = Range { min: bbeta.bbeta_min, max: bbeta.bbeta_max, step: bbeta.bbeta_step }.points("bbeta")?;
            let path = need_out(&cli.out, "surface")?;
            let (t, m) = commands::surface(&a, &b)?;
            let ext = match cli.format {
                Format::Csv => "minima.csv",
                Format::Json => "minima.json",
            };
            write_out(Some(path), &t.render(cli.format))?;
            write_out(Some(&sibling(path, ext)), &m.render(cli.format))
        }
        Cmd::Coeffs => write_out(out, &commands::render_coeffs(&commands::coeffs()?, cli.format)),
        Cmd::Orbits { tau, h, k, boundary } => {
            let t = match boundary {
                Some(n) => commands::orbits_boundary(tau, n)?,
                None if h.is_empty() || k.is_empty() => {
                    return Err(CliError::Usage("orbits needs --H and --K lists or --boundary".into()))
                }
                None => commands::orbits_grid(tau, &h, &k),
            };
            write_out(out, &t.render(cli.format))
        }
        Cmd::Profile { tau, h, k, y_min, y_max, samples, theta0, start } => {
            if !(y_max > y_min) || samples < 2 {
                return Err(CliError::Usage("profile needs y_min < y_max and at least 2 samples".into()));
            }
            let start = match start {
                StartArg::Inner => Start::Inner,
                StartArg::Outer => Start::Outer,
            };
            let req = ProfileRequest { tau, h, k, window: (y_min, y_max), samples, theta0, start, tol: cli.tol };
            write_out(out, &commands::profile(&req)?.render(cli.format))
        }
        Cmd::Simulate { config } => {
            let path = need_out(&cli.out, "simulate")?;
            let cfg = SimulateConfig::load(&config)?;
            let (t, report) = commands::run_simulation(&cfg, cli.seed)?;
            write_out(Some(path), &t.render(cli.format))?;
            write_out(Some(&sibling(path, "rate.json")), &json_string(&report))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
