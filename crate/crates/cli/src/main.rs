// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use giant_atoms::sweep::{
    evolve_series, find_peak, format_number, parse_phi, run_sweep, series_csv, Model, SweepAxes,
    DEFAULT_PEAK_HORIZON, DEFAULT_PHI_POINTS, DEFAULT_T_MAX, DEFAULT_T_POINTS,
};
use giant_atoms::verify::run_suite;
use giant_atoms::{Configuration, ConnectionLayout, InitialSign, Method, PairId};

#[derive(Parser)]
#[command(name = "giant-atoms", version, about = "Entanglement transfer between giant atoms on two waveguides")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coupling coefficients at one phase as JSON.
    Coeffs {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = phase)]
        phi: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time series of every pairwise concurrence and the excited population.
    Evolve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = phase)]
        phi: f64,
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        t_max: f64,
        /// Number of intervals; the series has `steps + 1` rows.
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// φ×t grid of one pair's concurrence, long format.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "ac", value_parser = pair)]
        pair: PairId,
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = phase)]
        phi_min: f64,
        #[arg(long, default_value = "2pi", allow_hyphen_values = true, value_parser = phase)]
        phi_max: f64,
        /// Number of φ points, endpoints included.
        #[arg(long, default_value_t = DEFAULT_PHI_POINTS)]
        phi_steps: usize,
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        t_max: f64,
        /// Number of t points, endpoints included.
        #[arg(long, default_value_t = DEFAULT_T_POINTS)]
        t_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest concurrence of one pair over `[0, t_horizon]`.
    Peaks {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = phase)]
        phi: f64,
        #[arg(long, value_parser = pair)]
        pair: PairId,
        #[arg(long, default_value_t = DEFAULT_PEAK_HORIZON)]
        t_horizon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite; exits 1 if any check fails.
    Verify {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConfigName {
    Small,
    Separated,
    Braided,
    Nested,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodName {
    Amplitude,
    Lindblad,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "small")]
    config: ConfigName,
    /// Connection-point JSON, e.g. {"a":[0,2],"b":[1,3],"c":[0,2],"d":[1,3]}.
    #[arg(long)]
    layout: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, value_enum, default_value = "amplitude")]
    method: MethodName,
    #[arg(long, default_value = "+", allow_hyphen_values = true, value_parser = sign)]
    initial_sign: InitialSign,
}

fn phase(s: &str) -> Result<f64, String> {
    parse_phi(s).map_err(|e| e.to_string())
}

fn pair(s: &str) -> Result<PairId, String> {
    s.parse().map_err(|e: giant_atoms::Error| e.to_string())
}

fn sign(s: &str) -> Result<InitialSign, String> {
    s.parse().map_err(|e: giant_atoms::Error| e.to_string())
}

impl ModelArgs {
    fn model(&self) -> anyhow::Result<Model> {
        let config = match (self.config, &self.layout) {
            (ConfigName::Custom, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading layout {}", path.display()))?;
                let layout = ConnectionLayout::from_json(&text)
                    .with_context(|| format!("parsing layout {}", path.display()))?;
                Configuration::Custom(layout)
            }
            (ConfigName::Custom, None) => bail!("--config custom needs --layout FILE"),
            (_, Some(_)) => bail!("--layout only applies to --config custom"),
            (ConfigName::Small, None) => Configuration::Small,
            (ConfigName::Separated, None) => Configuration::Separated,
            (ConfigName::Braided, None) => Configuration::Braided,
            (ConfigName::Nested, None) => Configuration::Nested,
        };
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            bail!("--gamma must be a positive finite number, got {}", self.gamma);
        }
        Ok(Model {
            config,
            gamma: self.gamma,
            sign: self.initial_sign,
            method: match self.method {
                MethodName::Amplitude => Method::Amplitude,
                MethodName::Lindblad => Method::Lindblad,
            },
        })
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Coeffs { model, phi, out } => {
            let model = model.model()?;
            let k = model.config.coefficients(phi, model.gamma)?;
            let mut json = serde_json::to_string_pretty(&k)?;
            json.push('\n');
            emit(out.as_deref(), &json)?;
        }
        Command::Evolve { model, phi, t_max, steps, out } => {
            let rows = evolve_series(&model.model()?, phi, t_max, steps)?;
            emit(out.as_deref(), &series_csv(&rows))?;
        }
        Command::Sweep {
            model,
            pair,
            phi_min,
            phi_max,
            phi_steps,
            t_max,
            t_steps,
            out,
        } => {
            let axes = SweepAxes {
                phi_min,
                phi_max,
                phi_points: phi_steps,
                t_max,
                t_points: t_steps,
            };
            let grid = run_sweep(&model.model()?, pair, &axes)?;
            emit(out.as_deref(), &grid.to_csv())?;
        }
        Command::Peaks { model, phi, pair, t_horizon, out } => {
            let model = model.model()?;
            if model.method == Method::Lindblad {
                bail!("peaks evaluates C(t) pointwise and only supports --method amplitude");
            }
            let r = find_peak(&model, pair, phi, t_horizon)?;
            let row = [
                r.phi,
                r.t_at_peak,
                r.value,
                r.t_horizon,
                r.coarse_samples as f64,
                r.bracket.0,
                r.bracket.1,
                r.time_tolerance,
            ]
            .map(format_number)
            .join(",");
            let text = format!(
                "config,pair,phi,t_at_peak,value,t_horizon,coarse_samples,bracket_lo,bracket_hi,time_tolerance\n{},{},{row}\n",
                r.config, r.pair
            );
            emit(out.as_deref(), &text)?;
        }
        Command::Verify { json, out } => {
            let report = run_suite();
            let text = if json {
                let mut s = serde_json::to_string_pretty(&report)?;
                s.push('\n');
                s
            } else {
                let mut s = String::new();
                for check in &report.checks {
                    s.push_str(&check.to_string());
                    s.push('\n');
                }
                for note in &report.notes {
                    s.push_str(&format!("note: {note}\n"));
                }
                s.push_str(&format!("{} passed, {} failed\n", report.passed, report.failed));
                s
            };
            emit(out.as_deref(), &text)?;
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
