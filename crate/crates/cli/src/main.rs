use amlj::aml::{AmlScaling, Functional, ScaleMode};
use amlj::commands::{self, RlParams};
use amlj::io::classes_csv;
use amlj::manifold::{parse_class, parse_complex, ManifoldSpec};
use amlj::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Asymptotically Mittag-Leffler analysis of J-function coefficient streams.
#[derive(Parser)]
#[command(name = "amlj", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct FitArgs {
    /// Index window `m0:m1`; defaults to `M/2:M`.
    #[arg(long, value_parser = parse_window)]
    window: Option<(usize, usize)>,
    /// `pt`, `top`, or `idx:<k>`.
    #[arg(long, default_value = "pt")]
    functional: Functional,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a coefficient stream and write it to a cache file.
    Gen {
        /// `P<N>`, `X3`, `product A B`, `hypersurface P<N> d`, or a config file.
        #[arg(required = true, num_args = 1..)]
        manifold: Vec<String>,
        #[arg(long = "M")]
        m: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit `(T, θ, A)` to a cached stream.
    Fit {
        cache: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scaled coefficients `J_{rm} Γ(1+rm+β) / (T e^{iθ})^{rm+β}` over a window.
    Scale {
        cache: PathBuf,
        /// JSON scaling from `fit`; otherwise `--T` and `--theta` are used.
        #[arg(long)]
        scaling: Option<PathBuf>,
        #[arg(long = "T")]
        t: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, default_value = "gamma")]
        mode: ScaleMode,
        #[arg(long, value_parser = parse_window)]
        window: Option<(usize, usize)>,
        #[command(flatten)]
        output: Output,
    },
    /// The X3 table: scaled values times 10^3 at the given rows.
    TableX3 {
        cache: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![14usize, 15, 16, 17, 30])]
        rows: Vec<usize>,
        /// Full-precision columns instead of the 6-digit presentation.
        #[arg(long)]
        machine: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Eigenvalues of `c1 ⋆` and the predicted `T`.
    Spectra {
        #[arg(required = true, num_args = 1..)]
        manifold: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the summed series along rays with the fitted limit.
    Continuous {
        cache: PathBuf,
        #[arg(long)]
        scaling: Option<PathBuf>,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![0.0])]
        phi: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        tgrid: Option<Vec<f64>>,
        #[command(flatten)]
        output: Output,
    },
    /// The Gamma class, and for X3 the predicted limit direction.
    GammaClass {
        #[arg(required = true, num_args = 1..)]
        manifold: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residuals of the Riemann–Liouville identities.
    RlCheck {
        #[arg(long, default_value = "P1")]
        manifold: String,
        /// Coordinates `re` or `re:im`, comma separated; one value means a scalar.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![5.0, 10.0, 20.0])]
        tgrid: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit, verify and compare with the predicted `T`; exits with 3 if residuals do not decrease.
    Report {
        cache: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_window(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected m0:m1")?;
    let a = a.parse().map_err(|_| format!("bad m0 {a:?}"))?;
    let b = b.parse().map_err(|_| format!("bad m1 {b:?}"))?;
    if a >= b {
        return Err("need m0 < m1".into());
    }
    Ok((a, b))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn spec(words: &[String]) -> Result<ManifoldSpec> {
    ManifoldSpec::resolve(&words.join(" "))
}

fn scaling_for(cache: &Path, file: Option<&Path>, fit: &FitArgs) -> Result<AmlScaling> {
    match file {
        Some(p) => Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?),
        None => commands::cmd_fit(cache, fit.window, fit.functional),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Gen { manifold, m, out } => {
            let spec = spec(&manifold)?;
            let m = m.or(spec.m).ok_or_else(|| Error::Config("--M is required".into()))?;
            let s = commands::cmd_gen(&spec, m, &out)?;
            eprintln!("wrote {} coefficients (r = {}) to {}", s.len(), s.r, out.display());
            Ok(())
        }
        Cmd::Fit { cache, fit, out } => emit(&json(&commands::cmd_fit(&cache, fit.window, fit.functional)?)?, out.as_deref()),
        Cmd::Scale { cache, scaling, t, theta, mode, window, output } => {
            let (t, theta) = match (scaling, t) {
                (Some(p), _) => {
                    let sc: AmlScaling = serde_json::from_str(&std::fs::read_to_string(p)?)?;
                    (sc.t, sc.theta)
                }
                (None, Some(t)) => (t, theta),
                (None, None) => return Err(Error::Config("give --scaling or --T".into())),
            };
            let rows = commands::cmd_scale(&cache, t, theta, mode, window)?;
            let text = match output.format {
                Format::Json => json(&rows)?,
                Format::Csv => classes_csv(&amlj::io::read_stream(&cache)?.ring, &rows.rows),
            };
            emit(&text, output.out.as_deref())
        }
        Cmd::TableX3 { cache, rows, machine, output } => {
            let table = commands::cmd_table_x3(&cache, &rows)?;
            let text = match (output.format, machine) {
                (Format::Json, _) => json(&table)?,
                (Format::Csv, true) => table.to_csv(),
                (Format::Csv, false) => table.to_presentation_csv(),
            };
            emit(&text, output.out.as_deref())
        }
        Cmd::Spectra { manifold, out } => emit(&json(&commands::cmd_spectra(&spec(&manifold)?)?)?, out.as_deref()),
        Cmd::Continuous { cache, scaling, fit, phi, tgrid, output } => {
            let sc = scaling_for(&cache, scaling.as_deref(), &fit)?;
            let rows = commands::cmd_continuous(&cache, &sc, &phi, tgrid.as_deref())?;
            let text = match output.format {
                Format::Json => json(&rows)?,
                Format::Csv => commands::continuous_csv(&rows),
            };
            emit(&text, output.out.as_deref())
        }
        Cmd::GammaClass { manifold, out } => {
            emit(&json(&commands::cmd_gamma_class(&spec(&manifold)?)?)?, out.as_deref())
        }
        Cmd::RlCheck { manifold, alpha, beta, lambda, tgrid, out } => {
            let p = RlParams {
                spec: ManifoldSpec::resolve(&manifold)?,
                alpha: parse_class(&alpha)?,
                beta: parse_class(&beta)?,
                lambda: parse_complex(&lambda)?,
                t_grid: tgrid,
            };
            emit(&json(&commands::cmd_rl_check(&p)?)?, out.as_deref())
        }
        Cmd::Report { cache, fit, out } => {
            emit(&json(&commands::cmd_report(&cache, fit.window, fit.functional)?)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
