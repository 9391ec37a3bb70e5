//! Seeded Monte-Carlo campaigns comparing the estimators.
//!
//! Every trial draws its record from a seed derived from
//! `(master_seed, K, trial)` by [`trial_seed`], so cells are reproducible,
//! independent of scheduling, and paired: each estimator in a cell sees the
//! same record for a given trial index.

use std::fmt;
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::baselines::{bayes_rayleigh, l2_fit, mle_rayleigh, moment_rayleigh, L2FitConfig};
use crate::distributions::{sample, ModelKind, ParamVector};
use crate::error::{Error, Result};
use crate::measurement::{measure, GridPolicy, MeasurementVector, RangeRule};
use crate::subspace::{equilibrium_residual, estimate, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorId {
    Subspace,
    L2,
    Mle,
    Bayes,
    Moment,
}

impl EstimatorId {
    pub const ALL: [EstimatorId; 5] = [
        EstimatorId::Subspace,
        EstimatorId::L2,
        EstimatorId::Mle,
        EstimatorId::Bayes,
        EstimatorId::Moment,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorId::Subspace => "subspace",
            EstimatorId::L2 => "l2",
            EstimatorId::Mle => "mle",
            EstimatorId::Bayes => "bayes",
            EstimatorId::Moment => "moment",
        }
    }

    /// Only the subspace estimator handles families other than Rayleigh.
    pub fn supports(self, model: ModelKind) -> bool {
        self == EstimatorId::Subspace || model == ModelKind::Rayleigh
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EstimatorId::ALL
            .into_iter()
            .find(|e| e.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown estimator '{s}'")))
    }
}

/// Starting point for the subspace iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum Xi0Policy {
    Fixed(ParamVector),
    MomentInit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub model: ModelKind,
    pub true_params: ParamVector,
    pub record_sizes: Vec<usize>,
    pub n_bins: usize,
    pub trials: usize,
    pub estimators: Vec<EstimatorId>,
    pub master_seed: u64,
    pub xi0_policy: Xi0Policy,
    pub range_rule: RangeRule,
    pub solver: SolverConfig,
}

impl CampaignConfig {
    /// Benchmark defaults: `N = 15`, 10000 trials, moment start,
    /// min-max binning, curvature-scaled starting step.
    pub fn new(model: ModelKind, true_params: ParamVector, record_sizes: Vec<usize>) -> Self {
        CampaignConfig {
            model,
            true_params,
            record_sizes,
            n_bins: 15,
            trials: 10_000,
            estimators: vec![EstimatorId::Subspace],
            master_seed: 0,
            xi0_policy: Xi0Policy::MomentInit,
            range_rule: RangeRule::DataMinMax,
            solver: SolverConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if self.record_sizes.is_empty() || self.record_sizes.contains(&0) {
            return Err(Error::InvalidConfig(
                "record sizes must be a nonempty list of K >= 1".into(),
            ));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidConfig("no estimators selected".into()));
        }
        if let Some(e) = self.estimators.iter().find(|e| !e.supports(self.model)) {
            return Err(Error::InvalidConfig(format!(
                "estimator {e} only supports the Rayleigh model"
            )));
        }
        if self.true_params.len() != self.model.param_count() {
            return Err(Error::InvalidParameter(format!(
                "{} expects {} parameter(s)",
                self.model,
                self.model.param_count()
            )));
        }
        if let Xi0Policy::Fixed(xi0) = &self.xi0_policy {
            if xi0.len() != self.model.param_count() {
                return Err(Error::InvalidParameter(
                    "xi0 length does not match the model".into(),
                ));
            }
        }
        GridPolicy::new(self.n_bins, self.range_rule)?;
        self.solver.validate()
    }

    fn grid_policy(&self) -> Result<GridPolicy> {
        GridPolicy::new(self.n_bins, self.range_rule)
    }
}

/// Mean and variance of one estimator's estimates over a cell.
///
/// `mean` and `variance` hold one entry per model parameter; variance uses
/// the `n − 1` denominator and is 0 with fewer than two successes.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub estimator: EstimatorId,
    pub k: usize,
    pub n_bins: usize,
    pub trials: usize,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub failures: usize,
}

impl TrialStats {
    pub fn successes(&self) -> usize {
        self.trials - self.failures
    }
}

/// splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` in the `K = k` cell:
/// `splitmix64(splitmix64(splitmix64(master) ^ k) ^ trial)`.
pub fn trial_seed(master_seed: u64, k: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ k as u64) ^ trial as u64)
}

/// Pilot parameters computed from the raw record.
pub fn moment_init(model: ModelKind, samples: &[f64]) -> Result<ParamVector> {
    match model {
        ModelKind::Rayleigh => ParamVector::sigma(moment_rayleigh(samples)?),
        ModelKind::NormalZeroMean => {
            if samples.is_empty() {
                return Err(Error::InsufficientData("empty sample record".into()));
            }
            let m2 = samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64;
            ParamVector::new(model, &[m2.sqrt()])
        }
        ModelKind::Lognormal => {
            if samples.len() < 2 || samples.iter().any(|&x| x.is_nan() || x <= 0.0) {
                return Err(Error::InsufficientData(
                    "lognormal start needs >= 2 positive samples".into(),
                ));
            }
            let logs: Vec<f64> = samples.iter().map(|x| x.ln()).collect();
            let k = logs.len() as f64;
            let mu = logs.iter().sum::<f64>() / k;
            let var = logs.iter().map(|l| (l - mu) * (l - mu)).sum::<f64>() / (k - 1.0);
            ParamVector::new(model, &[var.sqrt(), mu])
        }
    }
}

/// Runs the subspace estimator on one record and returns the parameters,
/// or `None` when it errors or stops on the iteration cap.
fn subspace_estimate(
    config: &CampaignConfig,
    samples: &[f64],
    measurement: &MeasurementVector,
) -> Option<Vec<f64>> {
    let xi0 = match &config.xi0_policy {
        Xi0Policy::Fixed(xi0) => xi0.clone(),
        Xi0Policy::MomentInit => moment_init(config.model, samples).ok()?,
    };
    let r = estimate(measurement, config.model, &xi0, &config.solver).ok()?;
    r.termination
        .is_converged()
        .then(|| r.xi_final.values().to_vec())
}

fn run_estimator(
    id: EstimatorId,
    config: &CampaignConfig,
    samples: &[f64],
    measurement: Option<&MeasurementVector>,
) -> Option<Vec<f64>> {
    let out = match id {
        EstimatorId::Subspace => subspace_estimate(config, samples, measurement?)?,
        EstimatorId::L2 => {
            let pilot = moment_rayleigh(samples).ok()?;
            vec![l2_fit(measurement?, &L2FitConfig::around(pilot).ok()?).ok()?]
        }
        EstimatorId::Mle => vec![mle_rayleigh(samples).ok()?],
        EstimatorId::Bayes => vec![bayes_rayleigh(samples).ok()?],
        EstimatorId::Moment => vec![moment_rayleigh(samples).ok()?],
    };
    out.iter().all(|v| v.is_finite()).then_some(out)
}

// One trial: estimates per estimator in `config.estimators` order.
fn run_trial(config: &CampaignConfig, k: usize, trial: usize) -> Vec<Option<Vec<f64>>> {
    let seed = trial_seed(config.master_seed, k, trial);
    let Ok(samples) = sample(config.model, &config.true_params, k, seed) else {
        return vec![None; config.estimators.len()];
    };
    let needs_histogram = config
        .estimators
        .iter()
        .any(|e| matches!(e, EstimatorId::Subspace | EstimatorId::L2));
    let measurement = if needs_histogram {
        config
            .grid_policy()
            .and_then(|p| measure(&samples, &p, config.model))
            .ok()
    } else {
        None
    };
    config
        .estimators
        .iter()
        .map(|&id| run_estimator(id, config, &samples, measurement.as_ref()))
        .collect()
}

fn run_cell(config: &CampaignConfig, k: usize) -> Vec<Vec<Option<Vec<f64>>>> {
    #[cfg(feature = "parallel")]
    {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, k, t))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..config.trials)
            .map(|t| run_trial(config, k, t))
            .collect()
    }
}

/// Fixed-order mean and `n − 1` variance of each parameter.
fn reduce(estimates: &[&Vec<f64>], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let n = estimates.len();
    if n == 0 {
        return (vec![f64::NAN; dim], vec![f64::NAN; dim]);
    }
    let mut mean = vec![0.0; dim];
    for e in estimates {
        for (m, v) in mean.iter_mut().zip(e.iter()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut var = vec![0.0; dim];
    if n > 1 {
        for e in estimates {
            for ((s, v), m) in var.iter_mut().zip(e.iter()).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        var.iter_mut().for_each(|s| *s /= (n - 1) as f64);
    }
    (mean, var)
}

/// Runs every `(K, estimator)` cell and returns one [`TrialStats`] each, in
/// `record_sizes × estimators` order.
pub fn run_campaign(config: &CampaignConfig) -> Result<Vec<TrialStats>> {
    config.validate()?;
    let dim = config.model.param_count();
    let mut out = Vec::with_capacity(config.record_sizes.len() * config.estimators.len());
    for &k in &config.record_sizes {
        let results = run_cell(config, k);
        for (e, &id) in config.estimators.iter().enumerate() {
            let ok: Vec<&Vec<f64>> = results.iter().filter_map(|r| r[e].as_ref()).collect();
            let (mean, variance) = reduce(&ok, dim);
            out.push(TrialStats {
                estimator: id,
                k,
                n_bins: config.n_bins,
                trials: config.trials,
                mean,
                variance,
                failures: config.trials - ok.len(),
            });
        }
    }
    Ok(out)
}

/// Subspace statistics for each `K` in `config.record_sizes`.
pub fn sweep_record_size(config: &CampaignConfig) -> Result<Vec<TrialStats>> {
    let cfg = CampaignConfig {
        estimators: vec![EstimatorId::Subspace],
        ..config.clone()
    };
    run_campaign(&cfg)
}

/// Subspace statistics for each bin count at the single `K` of
/// `config.record_sizes`.
pub fn sweep_bins(config: &CampaignConfig, bin_counts: &[usize]) -> Result<Vec<TrialStats>> {
    if config.record_sizes.len() != 1 {
        return Err(Error::InvalidConfig(format!(
            "bin sweep needs exactly one record size, got {}",
            config.record_sizes.len()
        )));
    }
    if bin_counts.is_empty() {
        return Err(Error::InvalidConfig("empty bin-count list".into()));
    }
    let mut rows = Vec::with_capacity(bin_counts.len());
    for &n in bin_counts {
        let cfg = CampaignConfig {
            n_bins: n,
            estimators: vec![EstimatorId::Subspace],
            ..config.clone()
        };
        rows.extend(run_campaign(&cfg)?);
    }
    Ok(rows)
}

pub const RESIDUAL_QUAD_POINTS: usize = 4000;

/// Tabulates [`equilibrium_residual`] at `lo + i·step` for every such
/// point not beyond `hi`.
pub fn emit_residual_curve(sigma0: f64, lo: f64, hi: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    if !(lo > 0.0 && hi >= lo && step > 0.0 && hi.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "invalid scan lo={lo} hi={hi} step={step}; need 0 < lo <= hi and step > 0"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|i| {
            let xi = lo + i as f64 * step;
            equilibrium_residual(xi, sigma0, RESIDUAL_QUAD_POINTS).map(|r| (xi, r))
        })
        .collect()
}

/// Number of strict sign changes in a sequence, ignoring exact zeros.
pub fn sign_changes(values: impl IntoIterator<Item = f64>) -> usize {
    let mut last = 0.0_f64;
    let mut changes = 0;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_sig(value: f64, digits: usize) -> String {
    if !value.is_finite() {
        return format!("{value}");
    }
    if value == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CAMPAIGN_CSV_HEADER: &str = "estimator,K,N,trials,mean,variance,failures";

/// Campaign rows as CSV; multi-parameter models get one row per parameter
/// named `estimator.param`.
pub fn campaign_csv(model: ModelKind, stats: &[TrialStats]) -> String {
    let names = model.param_names();
    let mut out = String::from(CAMPAIGN_CSV_HEADER);
    out.push('\n');
    for s in stats {
        for (p, name) in names.iter().enumerate() {
            let label = if names.len() == 1 {
                s.estimator.to_string()
            } else {
                format!("{}.{}", s.estimator, name)
            };
            out.push_str(&format!(
                "{label},{},{},{},{},{},{}\n",
                s.k,
                s.n_bins,
                s.trials,
                format_sig(s.mean[p], 6),
                format_sig(s.variance[p], 6),
                s.failures
            ));
        }
    }
    out
}

pub fn residual_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("xi,residual\n");
    for (xi, r) in rows {
        out.push_str(&format!("{},{}\n", format_sig(*xi, 6), format_sig(*r, 6)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rayleigh_cfg(ks: Vec<usize>) -> CampaignConfig {
        CampaignConfig::new(ModelKind::Rayleigh, ParamVector::sigma(1.0).unwrap(), ks)
    }

    #[test]
    fn seeds_differ_across_cells_and_trials() {
        let a = trial_seed(1, 30, 0);
        assert_ne!(a, trial_seed(1, 30, 1));
        assert_ne!(a, trial_seed(1, 31, 0));
        assert_ne!(a, trial_seed(2, 30, 0));
        assert_eq!(a, trial_seed(1, 30, 0));
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn single_trial_is_reproducible() {
        let mut cfg = rayleigh_cfg(vec![40]);
        cfg.trials = 1;
        cfg.master_seed = 17;
        cfg.estimators = EstimatorId::ALL.to_vec();
        assert_eq!(run_campaign(&cfg).unwrap(), run_campaign(&cfg).unwrap());
    }

    #[test]
    fn mle_cell_matches_direct_recomputation() {
        let mut cfg = rayleigh_cfg(vec![4]);
        cfg.trials = 3;
        cfg.master_seed = 5;
        cfg.estimators = vec![EstimatorId::Mle];
        let stats = run_campaign(&cfg).unwrap();
        let direct: Vec<f64> = (0..3)
            .map(|t| {
                let xs = sample(
                    ModelKind::Rayleigh,
                    &cfg.true_params,
                    4,
                    trial_seed(5, 4, t),
                )
                .unwrap();
                mle_rayleigh(&xs).unwrap()
            })
            .collect();
        let mean = direct.iter().sum::<f64>() / 3.0;
        let var = direct.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 2.0;
        assert!((stats[0].mean[0] - mean).abs() < 1e-15);
        assert!((stats[0].variance[0] - var).abs() < 1e-15);
        assert_eq!(stats[0].failures, 0);
    }

    #[test]
    fn failures_are_counted_not_fatal() {
        // K = 1 leaves the moment estimator and the histogram undefined.
        let mut cfg = rayleigh_cfg(vec![1]);
        cfg.trials = 4;
        cfg.estimators = vec![EstimatorId::Moment, EstimatorId::Mle, EstimatorId::Subspace];
        let stats = run_campaign(&cfg).unwrap();
        assert_eq!(stats[0].failures, 4);
        assert!(stats[0].mean[0].is_nan());
        assert_eq!(stats[1].failures, 0);
        assert_eq!(stats[2].failures, 4);
        for s in &stats {
            assert_eq!(s.successes() + s.failures, s.trials);
        }
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = rayleigh_cfg(vec![]);
        assert!(run_campaign(&cfg).is_err());
        cfg.record_sizes = vec![10];
        cfg.trials = 0;
        assert!(run_campaign(&cfg).is_err());
        cfg.trials = 2;
        cfg.estimators.clear();
        assert!(run_campaign(&cfg).is_err());
        let mut ln = CampaignConfig::new(
            ModelKind::Lognormal,
            ParamVector::new(ModelKind::Lognormal, &[1.0, 2.0]).unwrap(),
            vec![50],
        );
        ln.estimators = vec![EstimatorId::Mle];
        assert!(run_campaign(&ln).is_err());
        assert!(sweep_bins(&rayleigh_cfg(vec![10, 20]), &[10]).is_err());
        assert!(sweep_bins(&rayleigh_cfg(vec![10]), &[]).is_err());
    }

    #[test]
    fn sweeps_emit_one_row_per_entry() {
        let mut cfg = rayleigh_cfg(vec![60]);
        cfg.trials = 5;
        assert_eq!(sweep_record_size(&cfg).unwrap().len(), 1);
        let rows = sweep_bins(&cfg, &[12]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n_bins, 12);
    }

    #[test]
    fn residual_curve_rows() {
        let rows = emit_residual_curve(1.0, 0.2, 3.0, 0.01).unwrap();
        assert_eq!(rows.len(), 281);
        assert!((rows[280].0 - 3.0).abs() < 1e-12);
        assert!(emit_residual_curve(1.0, 2.0, 1.0, 0.1).is_err());
        assert!(emit_residual_curve(1.0, 0.5, 1.0, 0.0).is_err());
        assert!(emit_residual_curve(1.0, 0.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn sign_change_counting() {
        assert_eq!(sign_changes([1.0, 0.5, 0.0, -0.2, -1.0]), 1);
        assert_eq!(sign_changes([1.0, -1.0, 1.0]), 2);
        assert_eq!(sign_changes([0.0, 0.0]), 0);
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.995_612_34, 6), "0.995612");
        assert_eq!(format_sig(1.0, 6), "1");
        assert_eq!(format_sig(0.000_570_123_4, 6), "0.000570123");
        assert_eq!(format_sig(1.234_567_8e-7, 6), "1.23457e-7");
        assert_eq!(format_sig(1_234_567.0, 6), "1.23457e6");
        assert_eq!(format_sig(-2.5, 6), "-2.5");
        assert_eq!(format_sig(0.0, 6), "0");
    }

    #[test]
    fn csv_layout() {
        let stats = vec![TrialStats {
            estimator: EstimatorId::Subspace,
            k: 100,
            n_bins: 15,
            trials: 200,
            mean: vec![1.013, 1.96],
            variance: vec![0.01, 0.02],
            failures: 1,
        }];
        let csv = campaign_csv(ModelKind::Lognormal, &stats);
        assert_eq!(
            csv,
            "estimator,K,N,trials,mean,variance,failures\n\
             subspace.sigma,100,15,200,1.013,0.01,1\n\
             subspace.mu,100,15,200,1.96,0.02,1\n"
        );
    }

    #[test]
    fn moment_init_per_model() {
        let xs = [0.5, 1.0, 2.0, 4.0];
        let ln = moment_init(ModelKind::Lognormal, &xs).unwrap();
        assert!((ln[1] - (0.5f64 * 1.0 * 2.0 * 4.0).ln() / 4.0).abs() < 1e-12);
        assert!(moment_init(ModelKind::Lognormal, &[1.0, -1.0]).is_err());
        let n = moment_init(ModelKind::NormalZeroMean, &[-1.0, 1.0]).unwrap();
        assert_eq!(n[0], 1.0);
    }
}
