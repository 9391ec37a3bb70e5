mod error;
mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nlsubspace::baselines::{bayes_rayleigh, l2_fit, mle_rayleigh, moment_rayleigh, L2FitConfig};
use nlsubspace::bench::{
    campaign_csv, emit_residual_curve, moment_init, residual_csv, run_campaign, sweep_bins,
    sweep_record_size, CampaignConfig, EstimatorId, Xi0Policy,
};
use nlsubspace::distributions::{sample, ModelKind, ParamVector, SampleGrid};
use nlsubspace::measurement::{measure, GridPolicy, MeasurementVector, RangeRule};
use nlsubspace::subspace::{estimate, EstimateResult, SolverConfig, Termination};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "nlsubspace",
    version,
    about = "Nonlinear-subspace density parameter estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate parameters from one record (file, inline values, synthetic or noise-free).
    Estimate(EstimateArgs),
    /// Seeded Monte-Carlo campaign over record sizes and estimators.
    Bench(BenchArgs),
    /// Subspace accuracy versus record size K.
    SweepK(SweepKArgs),
    /// Subspace accuracy versus histogram size N at fixed K.
    SweepN(SweepNArgs),
    /// Tabulate the continuous equilibrium residual of the Rayleigh flow.
    Residual(ResidualArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// rayleigh | normal | lognormal
    #[arg(long, default_value = "rayleigh")]
    model: ModelKind,
    /// True (or synthetic) scale parameter.
    #[arg(long, default_value_t = 1.0)]
    sigma0: f64,
    /// True location parameter; lognormal only.
    #[arg(long, allow_negative_numbers = true)]
    mu0: Option<f64>,
}

impl ModelArgs {
    fn truth(&self) -> Result<ParamVector, CliError> {
        let values = match (self.model, self.mu0) {
            (ModelKind::Lognormal, mu) => vec![self.sigma0, mu.unwrap_or(0.0)],
            (_, Some(_)) => {
                return Err(CliError::Usage(
                    "--mu0 only applies to --model lognormal".into(),
                ))
            }
            (_, None) => vec![self.sigma0],
        };
        Ok(ParamVector::new(self.model, &values)?)
    }
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Sample file, one value per line; `-` reads standard input.
    #[arg(long, conflicts_with_all = ["values", "exact"])]
    input: Option<String>,
    /// Inline sample values.
    #[arg(allow_negative_numbers = true, conflicts_with = "exact")]
    values: Vec<f64>,
    /// Draw a synthetic record of this size from the true parameters.
    #[arg(long)]
    k: Option<usize>,
    /// Use the noise-free model vector instead of a histogram.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 15)]
    n_bins: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated estimators: subspace, l2, mle, bayes, moment.
    #[arg(long, value_delimiter = ',', default_value = "subspace")]
    estimators: Vec<EstimatorId>,
    /// Starting parameters for the subspace flow, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    xi0: Option<Vec<f64>>,
    /// Write the subspace trace (iteration, parameters, V) as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CampaignArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed subspace start, comma-separated; defaults to a moment start per record.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    xi0: Option<Vec<f64>>,
    /// Write results as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    campaign: CampaignArgs,
    /// Record sizes, comma-separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "30,50,100,200,300,400,500,600"
    )]
    k: Vec<usize>,
    #[arg(long, default_value_t = 15)]
    n_bins: usize,
    /// Comma-separated estimators; defaults to every estimator the model supports.
    #[arg(long, value_delimiter = ',')]
    estimators: Option<Vec<EstimatorId>>,
}

#[derive(Args)]
struct SweepKArgs {
    #[command(flatten)]
    campaign: CampaignArgs,
    #[arg(long, value_delimiter = ',', default_value = "25,50,100,200,400")]
    k: Vec<usize>,
    #[arg(long, default_value_t = 15)]
    n_bins: usize,
}

#[derive(Args)]
struct SweepNArgs {
    #[command(flatten)]
    campaign: CampaignArgs,
    #[arg(long, default_value_t = 500)]
    k: usize,
    /// Histogram sizes, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "10,15,25,40,60")]
    n_bins: Vec<usize>,
}

#[derive(Args)]
struct ResidualArgs {
    #[arg(long, default_value_t = 1.0)]
    sigma0: f64,
    #[arg(long, default_value_t = 0.2)]
    lo: f64,
    #[arg(long, default_value_t = 3.0)]
    hi: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Estimate(a) => cmd_estimate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::SweepK(a) => cmd_sweep_k(a),
        Command::SweepN(a) => cmd_sweep_n(a),
        Command::Residual(a) => cmd_residual(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nlsubspace: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// Noise-free grids cover the bulk of each density.
fn exact_grid(
    model: ModelKind,
    truth: &ParamVector,
    n_bins: usize,
) -> Result<SampleGrid, CliError> {
    let s = truth[0];
    let (lo, hi) = match model {
        ModelKind::Rayleigh => (0.0, 4.0 * s),
        ModelKind::NormalZeroMean => (-4.0 * s, 4.0 * s),
        ModelKind::Lognormal => (0.0, (truth[1] + 2.0 * s).exp()),
    };
    Ok(SampleGrid::uniform(lo, hi, n_bins)?)
}

/// Moment start read off a histogram, for when no raw record exists.
fn histogram_start(model: ModelKind, m: &MeasurementVector) -> Result<ParamVector, CliError> {
    let weights: Vec<f64> = m
        .values()
        .iter()
        .zip(m.grid().widths())
        .map(|(v, w)| v * w)
        .collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(CliError::Data("measurement has no mass".into()));
    }
    let moment = |f: &dyn Fn(f64) -> f64| {
        m.grid()
            .points()
            .iter()
            .zip(&weights)
            .map(|(&x, w)| w * f(x))
            .sum::<f64>()
            / total
    };
    let values = match model {
        ModelKind::Rayleigh => vec![(moment(&|x| x * x) / 2.0).sqrt()],
        ModelKind::NormalZeroMean => vec![moment(&|x| x * x).sqrt()],
        ModelKind::Lognormal => {
            let mu = moment(&|x| x.ln());
            vec![moment(&|x| (x.ln() - mu).powi(2)).sqrt(), mu]
        }
    };
    Ok(ParamVector::new(model, &values)?)
}

fn trace_csv(model: ModelKind, fit: &EstimateResult) -> String {
    let mut s = format!("iteration,{},lyapunov\n", model.param_names().join(","));
    for p in &fit.trace {
        let xi: Vec<String> = p.xi.values().iter().map(|v| v.to_string()).collect();
        s.push_str(&format!(
            "{},{},{}\n",
            p.iteration,
            xi.join(","),
            p.lyapunov
        ));
    }
    s
}

fn format_params(model: ModelKind, values: &[f64]) -> String {
    model
        .param_names()
        .iter()
        .zip(values)
        .map(|(n, v)| format!("{n}={v:.6}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_estimate(a: EstimateArgs) -> Result<(), CliError> {
    let model = a.model.model;
    let truth = a.model.truth()?;
    if let Some(e) = a.estimators.iter().find(|e| !e.supports(model)) {
        return Err(CliError::Usage(format!(
            "estimator {e} only supports the Rayleigh model"
        )));
    }
    let wants_subspace = a.estimators.contains(&EstimatorId::Subspace);
    if a.out.is_some() && !wants_subspace {
        return Err(CliError::Usage(
            "--out writes the subspace trace; add subspace to --estimators".into(),
        ));
    }
    let xi0 = a
        .xi0
        .as_deref()
        .map(|v| ParamVector::new(model, v))
        .transpose()?;

    let samples = if a.exact {
        if a.k.is_some() {
            return Err(CliError::Usage("--exact does not take --k".into()));
        }
        None
    } else if let Some(path) = &a.input {
        Some(input::read_samples(path)?)
    } else if !a.values.is_empty() {
        Some(a.values.clone())
    } else if let Some(k) = a.k {
        Some(sample(model, &truth, k, a.seed)?)
    } else {
        return Err(CliError::Usage(
            "no data: give --input, inline values, --k or --exact".into(),
        ));
    };

    let needs_histogram = a
        .estimators
        .iter()
        .any(|e| matches!(e, EstimatorId::Subspace | EstimatorId::L2));
    let measurement = match &samples {
        None => Some(MeasurementVector::exact(
            model,
            exact_grid(model, &truth, a.n_bins)?,
            &truth,
        )?),
        Some(xs) if needs_histogram => {
            let policy = GridPolicy::new(a.n_bins, RangeRule::DataMinMax)?;
            Some(measure(xs, &policy, model)?)
        }
        Some(_) => None,
    };
    let start = |m: &MeasurementVector| -> Result<ParamVector, CliError> {
        match (&xi0, &samples) {
            (Some(x), _) => Ok(x.clone()),
            (None, Some(xs)) => {
                moment_init(model, xs).map_err(|e| CliError::Estimator(e.to_string()))
            }
            (None, None) => histogram_start(model, m),
        }
    };
    let record = |id: EstimatorId| {
        samples
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("{id} needs a sample record, not --exact")))
    };
    let failed = |id: EstimatorId, e: nlsubspace::Error| CliError::Estimator(format!("{id}: {e}"));

    let mut failure = None;
    for &id in &a.estimators {
        match id {
            EstimatorId::Subspace => {
                let m = measurement.as_ref().expect("histogram built for subspace");
                let fit = estimate(m, model, &start(m)?, &SolverConfig::default())
                    .map_err(|e| failed(id, e))?;
                println!(
                    "{id:<9} {}  iterations={}  termination={}",
                    format_params(model, fit.xi_final.values()),
                    fit.iterations,
                    fit.termination.as_str()
                );
                if let Some(out) = &a.out {
                    write_or_print(Some(out), &trace_csv(model, &fit))?;
                }
                if fit.termination == Termination::MaxIters {
                    failure = Some(CliError::Estimator(format!(
                        "{id}: iteration limit reached"
                    )));
                }
            }
            EstimatorId::L2 => {
                let m = measurement.as_ref().expect("histogram built for l2");
                let pilot = start(m)?[0];
                let s = L2FitConfig::around(pilot)
                    .and_then(|cfg| l2_fit(m, &cfg))
                    .map_err(|e| failed(id, e))?;
                println!("{id:<9} sigma={s:.6}");
            }
            EstimatorId::Mle | EstimatorId::Bayes | EstimatorId::Moment => {
                let xs = record(id)?;
                let s = match id {
                    EstimatorId::Mle => mle_rayleigh(xs),
                    EstimatorId::Bayes => bayes_rayleigh(xs),
                    _ => moment_rayleigh(xs),
                }
                .map_err(|e| failed(id, e))?;
                println!("{id:<9} sigma={s:.6}");
            }
        }
    }
    failure.map_or(Ok(()), Err)
}

fn campaign_config(
    args: &CampaignArgs,
    record_sizes: Vec<usize>,
    n_bins: usize,
    estimators: Vec<EstimatorId>,
) -> Result<CampaignConfig, CliError> {
    let model = args.model.model;
    let mut cfg = CampaignConfig::new(model, args.model.truth()?, record_sizes);
    cfg.n_bins = n_bins;
    cfg.trials = args.trials;
    cfg.master_seed = args.seed;
    cfg.estimators = estimators;
    if let Some(x) = &args.xi0 {
        cfg.xi0_policy = Xi0Policy::Fixed(ParamVector::new(model, x)?);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    let model = a.campaign.model.model;
    let estimators = a.estimators.unwrap_or_else(|| {
        EstimatorId::ALL
            .into_iter()
            .filter(|e| e.supports(model))
            .collect()
    });
    let cfg = campaign_config(&a.campaign, a.k, a.n_bins, estimators)?;
    let stats = run_campaign(&cfg)?;
    print!("{}", report::campaign_table(model, &stats));
    if let Some(out) = &a.campaign.out {
        write_or_print(Some(out), &campaign_csv(model, &stats))?;
    }
    Ok(())
}

fn cmd_sweep_k(a: SweepKArgs) -> Result<(), CliError> {
    let cfg = campaign_config(&a.campaign, a.k, a.n_bins, vec![EstimatorId::Subspace])?;
    let stats = sweep_record_size(&cfg)?;
    write_or_print(a.campaign.out.as_deref(), &campaign_csv(cfg.model, &stats))
}

fn cmd_sweep_n(a: SweepNArgs) -> Result<(), CliError> {
    let first = *a
        .n_bins
        .first()
        .ok_or_else(|| CliError::Usage("--n-bins needs at least one value".into()))?;
    let cfg = campaign_config(&a.campaign, vec![a.k], first, vec![EstimatorId::Subspace])?;
    let stats = sweep_bins(&cfg, &a.n_bins)?;
    write_or_print(a.campaign.out.as_deref(), &campaign_csv(cfg.model, &stats))
}

fn cmd_residual(a: ResidualArgs) -> Result<(), CliError> {
    let rows = emit_residual_curve(a.sigma0, a.lo, a.hi, a.step)?;
    write_or_print(a.out.as_deref(), &residual_csv(&rows))
}
