//! `adfsim`: command-line front end to `adf-core`.
//!
//! Every table is CSV with a one-line header, LF endings and floats at 12
//! significant digits. Columns per subcommand:
//!
//! | subcommand | columns |
//! |---|---|
//! | `optimize` | `iteration,rate,delta_norm` (`--adf`: `index,p,w`; `--placement`: `index,p`) |
//! | `closed-form` | `index,p,w`, or `index,p` with `--positions` |
//! | `evaluate` | `trial,z0,rate_bits` |
//! | `sweep` | `scheme,M,z0,alpha,trial,rate_bits,wall_time_ms,seed` |
//! | `montecarlo` | `key,rate_bits,fraction` |
//! | `asymptotics` | `N,exact_logdet,fh_logdet,abs_error` (nats) |
//! | `curve` | `index,x,y` |
//!
//! Tables go to `--out`, else to the config's `output`, else to stdout.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adf_core::asymptotics::{exact_log_det, fh_log_det, two_edge_symbol, FhVariant};
use adf_core::closedform::{nearfield_factors, optimal_adf, simplified_adf, AdfFamilyParams};
use adf_core::geometry::{discretize_adf, flexible_curve, place_on_curve, Placement};
use adf_core::harness::{
    aggregate_cdf, arrays, emit_cdf, emit_records, emit_records_to, parse_config, run_scenario, trial_scenario, CdfKey,
    ExperimentConfig, SchemeKind,
};
use adf_core::io::{
    adf_rows, curve_rows, format_float, placement_rows, read_placement_from, trace_rows, write_adf, write_placement,
    write_table, ADF_HEADER, CURVE_HEADER, PLACEMENT_HEADER, TRACE_HEADER,
};
use adf_core::rate::achievable_rate_discrete;
use adf_core::variational::{optimize_adf, OptimizerConfig};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "adfsim", version, about = "Antenna-density placement simulator")]
struct Cli {
    /// Experiment description (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Runs the projected gradient ascent and writes its trace.
    Optimize {
        /// Number of antennas; defaults to the first sweep value.
        #[arg(long)]
        m: Option<usize>,
        /// Array distance; defaults to the first sweep value.
        #[arg(long)]
        z0: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        iterations: Option<usize>,
        /// Also write the best density here.
        #[arg(long, value_name = "PATH")]
        adf: Option<PathBuf>,
        /// Also write its discretized positions here.
        #[arg(long, value_name = "PATH")]
        placement: Option<PathBuf>,
    },
    /// Emits the order-alpha density or its positions. With --config the
    /// full family (bias included) is used, otherwise the simplified one.
    ClosedForm {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        z0: Option<f64>,
        /// Write positions instead of the density.
        #[arg(long)]
        positions: bool,
    },
    /// Rate of a placement file at every sweep distance and trial.
    Evaluate {
        #[arg(long, value_name = "PATH")]
        placement: PathBuf,
    },
    /// Rate of every scheme over the sweep grid.
    Sweep,
    /// Empirical rate CDFs over random channel draws.
    Montecarlo {
        /// Overrides the config trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Also write the raw records here.
        #[arg(long, value_name = "PATH")]
        records: Option<PathBuf>,
    },
    /// Exact Toeplitz log-determinants against the Fisher–Hartwig formula
    /// for two edge singularities of order alpha at ±beta.
    Asymptotics {
        #[arg(long, allow_negative_numbers = true, default_value_t = -0.25)]
        alpha: f64,
        /// Constant smooth part.
        #[arg(long, default_value_t = 2.0)]
        b: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        beta: f64,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64,128,256")]
        n: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Variant::Logarithmic)]
        variant: Variant,
    },
    /// Samples the flexible curve, or places M elements on it.
    Curve {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    Printed,
    Logarithmic,
}

impl From<Variant> for FhVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Printed => FhVariant::Printed,
            Variant::Logarithmic => FhVariant::Logarithmic,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("adfsim: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let config = cli.config.as_deref().map(|p| load_config(p, cli.seed)).transpose()?;
    let out = cli.out.clone().or_else(|| config.as_ref().and_then(|c| c.output.clone()));
    let out = out.as_deref();

    match cli.command {
        Command::Optimize { m, z0, step, iterations, adf, placement } => {
            let cfg = require(&config, "optimize")?;
            let (m, z0) = sweep_point(cfg, m, z0)?;
            let mut opt = cfg
                .schemes
                .iter()
                .find_map(|s| match &s.kind {
                    SchemeKind::Variational(c) => Some(*c),
                    _ => None,
                })
                .unwrap_or(OptimizerConfig { snr: cfg.scenario.snr(), ..Default::default() });
            if let Some(s) = step {
                opt.step_size = s;
            }
            if let Some(i) = iterations {
                opt.max_iterations = i;
            }
            let (tx, rx) = arrays(&cfg.scenario, m, z0)?;
            let trace = optimize_adf(&opt, &tx, &rx, &trial_scenario(cfg, 0)?)?;
            log::info!(
                "best rate {:.6} bits at iteration {} of {} (converged: {})",
                trace.best_rate(),
                trace.best_iteration,
                trace.iterations,
                trace.converged
            );
            if let Some(path) = adf {
                write_adf(&path, &trace.best)?;
            }
            if let Some(path) = placement {
                write_placement(&path, &discretize_adf(&trace.best, m)?)?;
            }
            emit_table(out, &TRACE_HEADER, trace_rows(&trace))
        }
        Command::ClosedForm { alpha, m, z0, positions } => {
            let w = match &config {
                Some(cfg) => {
                    let (m, z0) = sweep_point(cfg, m, z0)?;
                    let (tx, rx) = arrays(&cfg.scenario, m, z0)?;
                    let factors = nearfield_factors(&tx, &rx, cfg.scenario.wavelength, cfg.scenario.snr())?;
                    optimal_adf(&AdfFamilyParams::new(alpha, m, factors)?)?
                }
                None => {
                    if z0.is_some() {
                        bail!("--z0 needs --config to describe the arrays");
                    }
                    simplified_adf(alpha, m.ok_or_else(|| anyhow!("closed-form needs --m or --config"))?)?
                }
            };
            if positions {
                let m = ((w.integral() + 1.0).round()) as usize;
                emit_table(out, &PLACEMENT_HEADER, placement_rows(&discretize_adf(&w, m)?))
            } else {
                emit_table(out, &ADF_HEADER, adf_rows(&w))
            }
        }
        Command::Evaluate { placement } => {
            let cfg = require(&config, "evaluate")?;
            let p = read_placement_from(&placement)?;
            let rows = evaluate(cfg, &p)?;
            emit_table(out, &["trial", "z0", "rate_bits"], rows)
        }
        Command::Sweep => {
            let cfg = require(&config, "sweep")?;
            let records = run_scenario(cfg)?;
            log::info!("{} records", records.len());
            match out {
                Some(path) => emit_records_to(&records, path)?,
                None => emit_records(&records, io::stdout().lock())?,
            }
            Ok(())
        }
        Command::Montecarlo { trials, records } => {
            let mut cfg = require(&config, "montecarlo")?.clone();
            if let Some(t) = trials {
                if t == 0 {
                    bail!("--trials must be positive");
                }
                cfg.trials = t;
            }
            let recs = run_scenario(&cfg)?;
            if let Some(path) = records {
                emit_records_to(&recs, &path)?;
            }
            let tables = aggregate_cdf(&recs, CdfKey::SchemePoint)?;
            for t in &tables {
                log::info!("{}: median {:.4} bits", t.key, t.median());
            }
            let mut buf = Vec::new();
            emit_cdf(&tables, &mut buf)?;
            emit_bytes(out, &buf)
        }
        Command::Asymptotics { alpha, b, beta, n, variant } => {
            if n.is_empty() {
                bail!("--n needs at least one size");
            }
            let symbol = two_edge_symbol(alpha, alpha, b, beta)?;
            let rows = n
                .iter()
                .map(|&n| {
                    let exact = exact_log_det(&symbol, n)?;
                    let fh = fh_log_det(&symbol, n, variant.into())?;
                    Ok(vec![n.to_string(), format_float(exact), format_float(fh), format_float((fh - exact).abs())])
                })
                .collect::<Result<Vec<_>>>()?;
            emit_table(out, &["N", "exact_logdet", "fh_logdet", "abs_error"], rows)
        }
        Command::Curve { alpha, radius, samples, m } => {
            let curve = flexible_curve(alpha, radius, samples)?;
            let points = match m {
                Some(m) => place_on_curve(&curve, m)?,
                None => curve.samples().to_vec(),
            };
            emit_table(out, &CURVE_HEADER, curve_rows(&points))
        }
    }
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg = parse_config(&text).with_context(|| format!("in {}", path.display()))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn require<'a>(config: &'a Option<ExperimentConfig>, command: &str) -> Result<&'a ExperimentConfig> {
    config.as_ref().ok_or_else(|| anyhow!("{command} needs --config"))
}

fn sweep_point(cfg: &ExperimentConfig, m: Option<usize>, z0: Option<f64>) -> Result<(usize, f64)> {
    let m = m.or_else(|| cfg.sweep.m.first().copied()).ok_or_else(|| anyhow!("no M given"))?;
    let z0 = z0.or_else(|| cfg.sweep.z0.first().copied()).ok_or_else(|| anyhow!("no z0 given"))?;
    Ok((m, z0))
}

fn evaluate(cfg: &ExperimentConfig, p: &Placement) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::new();
    for trial in 0..cfg.trial_count() {
        let channel = trial_scenario(cfg, trial)?;
        for &z0 in &cfg.sweep.z0 {
            let (tx, rx) = arrays(&cfg.scenario, p.len(), z0)?;
            let h = adf_core::channel::channel_matrix(p, &tx, &rx, &channel)?;
            let rate = achievable_rate_discrete(&h, cfg.scenario.snr())?;
            rows.push(vec![trial.to_string(), format_float(z0), format_float(rate)]);
        }
    }
    Ok(rows)
}

fn emit_table(out: Option<&Path>, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut buf = Vec::new();
    write_table(&mut buf, header, rows)?;
    emit_bytes(out, &buf)
}

fn emit_bytes(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
