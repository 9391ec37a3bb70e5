//! WebAssembly bindings for the interactive demo page in `www/`.
//!
//! Three operations are exported: fitting one synthetic record
//! ([`fit_demo`]), the equilibrium residual curve ([`residual_curve`]) and
//! a small paired Monte-Carlo comparison of the estimators
//! ([`compare_estimators`]). Each has a plain-Rust twin (`run_*`) returning
//! `Result<_, String>` so the logic can be tested off the browser.

use nlsubspace::baselines::mle_rayleigh;
use nlsubspace::bench::{
    emit_residual_curve, moment_init, run_campaign, CampaignConfig, EstimatorId,
};
use nlsubspace::distributions::{pdf_value, sample, ModelKind, ParamVector};
use nlsubspace::measurement::{measure, GridPolicy, RangeRule};
use nlsubspace::subspace::{estimate, SolverConfig};
use wasm_bindgen::prelude::*;

const CURVE_POINTS: usize = 200;
const MAX_RECORD: usize = 100_000;
const MAX_TRIALS: usize = 5_000;

/// One fitted record: histogram, density curves and the descent trace.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct FitDemo {
    centers: Vec<f64>,
    widths: Vec<f64>,
    histogram: Vec<f64>,
    curve_x: Vec<f64>,
    curve_true: Vec<f64>,
    curve_start: Vec<f64>,
    curve_fit: Vec<f64>,
    trace_sigma: Vec<f64>,
    trace_lyapunov: Vec<f64>,
    estimate: Vec<f64>,
    start: Vec<f64>,
    mle: f64,
    iterations: usize,
    termination: String,
}

#[wasm_bindgen]
impl FitDemo {
    #[wasm_bindgen(getter)]
    pub fn centers(&self) -> Vec<f64> {
        self.centers.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn widths(&self) -> Vec<f64> {
        self.widths.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn histogram(&self) -> Vec<f64> {
        self.histogram.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn curve_x(&self) -> Vec<f64> {
        self.curve_x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn curve_true(&self) -> Vec<f64> {
        self.curve_true.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn curve_start(&self) -> Vec<f64> {
        self.curve_start.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn curve_fit(&self) -> Vec<f64> {
        self.curve_fit.clone()
    }
    /// Scale parameter at every accepted iterate.
    #[wasm_bindgen(getter)]
    pub fn trace_sigma(&self) -> Vec<f64> {
        self.trace_sigma.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn trace_lyapunov(&self) -> Vec<f64> {
        self.trace_lyapunov.clone()
    }
    /// Final parameters: `[σ]`, or `[σ, μ]` for the lognormal.
    #[wasm_bindgen(getter)]
    pub fn estimate(&self) -> Vec<f64> {
        self.estimate.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn start(&self) -> Vec<f64> {
        self.start.clone()
    }
    /// Unbiased Rayleigh MLE of the same record; NaN for other models.
    #[wasm_bindgen(getter)]
    pub fn mle(&self) -> f64 {
        self.mle
    }
    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.iterations
    }
    #[wasm_bindgen(getter)]
    pub fn termination(&self) -> String {
        self.termination.clone()
    }
}

/// Sampled curve `ys(xs)`.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn ys(&self) -> Vec<f64> {
        self.ys.clone()
    }
}

/// Per-estimator mean, variance and failure count at one record size.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Comparison {
    names: Vec<String>,
    means: Vec<f64>,
    variances: Vec<f64>,
    failures: Vec<u32>,
}

#[wasm_bindgen]
impl Comparison {
    #[wasm_bindgen(getter)]
    pub fn names(&self) -> Vec<String> {
        self.names.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn means(&self) -> Vec<f64> {
        self.means.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn variances(&self) -> Vec<f64> {
        self.variances.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn failures(&self) -> Vec<u32> {
        self.failures.clone()
    }
}

fn params(model: ModelKind, sigma: f64, mu: f64) -> Result<ParamVector, String> {
    let values: &[f64] = match model {
        ModelKind::Lognormal => &[sigma, mu],
        _ => &[sigma],
    };
    ParamVector::new(model, values).map_err(|e| e.to_string())
}

fn density_curve(model: ModelKind, xs: &[f64], xi: &ParamVector) -> Vec<f64> {
    xs.iter()
        .map(|&x| pdf_value(model, x, xi).unwrap_or(0.0))
        .collect()
}

/// Draws `k` samples from `model(sigma0, mu0)`, bins them into `n_bins`
/// bins over the sample range and runs the subspace flow.
///
/// A non-positive `xi0_sigma` starts from the moment estimate of the record.
#[allow(clippy::too_many_arguments)]
pub fn run_fit(
    model: &str,
    sigma0: f64,
    mu0: f64,
    k: usize,
    n_bins: usize,
    xi0_sigma: f64,
    xi0_mu: f64,
    seed: u64,
) -> Result<FitDemo, String> {
    let model: ModelKind = model
        .parse()
        .map_err(|e: nlsubspace::Error| e.to_string())?;
    if k > MAX_RECORD {
        return Err(format!("record size is capped at {MAX_RECORD} in the demo"));
    }
    let truth = params(model, sigma0, mu0)?;
    let xs = sample(model, &truth, k, seed).map_err(|e| e.to_string())?;
    let policy = GridPolicy::new(n_bins, RangeRule::DataMinMax).map_err(|e| e.to_string())?;
    let psi = measure(&xs, &policy, model).map_err(|e| e.to_string())?;
    let start = if xi0_sigma > 0.0 {
        params(model, xi0_sigma, xi0_mu)?
    } else {
        moment_init(model, &xs).map_err(|e| e.to_string())?
    };
    let fit = estimate(&psi, model, &start, &SolverConfig::default()).map_err(|e| e.to_string())?;

    let grid = psi.grid();
    let (lo, hi) = (grid.lo(), grid.hi());
    let curve_x: Vec<f64> = (0..CURVE_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64)
        .collect();
    let mle = match model {
        ModelKind::Rayleigh => mle_rayleigh(&xs).unwrap_or(f64::NAN),
        _ => f64::NAN,
    };
    Ok(FitDemo {
        centers: grid.points().to_vec(),
        widths: grid.widths().to_vec(),
        histogram: psi.values().to_vec(),
        curve_true: density_curve(model, &curve_x, &truth),
        curve_start: density_curve(model, &curve_x, &start),
        curve_fit: density_curve(model, &curve_x, &fit.xi_final),
        curve_x,
        trace_sigma: fit.trace.iter().map(|p| p.xi[0]).collect(),
        trace_lyapunov: fit.trace.iter().map(|p| p.lyapunov).collect(),
        estimate: fit.xi_final.values().to_vec(),
        start: start.values().to_vec(),
        mle,
        iterations: fit.iterations,
        termination: fit.termination.as_str().to_string(),
    })
}

pub fn run_residual(sigma0: f64, lo: f64, hi: f64, step: f64) -> Result<Curve, String> {
    if (hi - lo) / step > 10_000.0 {
        return Err("scan is limited to 10000 points".into());
    }
    let rows = emit_residual_curve(sigma0, lo, hi, step).map_err(|e| e.to_string())?;
    Ok(Curve {
        xs: rows.iter().map(|r| r.0).collect(),
        ys: rows.iter().map(|r| r.1).collect(),
    })
}

/// Paired Rayleigh campaign at one record size over every estimator.
pub fn run_comparison(
    sigma0: f64,
    k: usize,
    n_bins: usize,
    trials: usize,
    seed: u64,
) -> Result<Comparison, String> {
    if trials > MAX_TRIALS || k > MAX_RECORD {
        return Err(format!(
            "the demo allows at most {MAX_TRIALS} trials and K <= {MAX_RECORD}"
        ));
    }
    let mut cfg = CampaignConfig::new(
        ModelKind::Rayleigh,
        params(ModelKind::Rayleigh, sigma0, 0.0)?,
        vec![k],
    );
    cfg.n_bins = n_bins;
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.estimators = EstimatorId::ALL.to_vec();
    let stats = run_campaign(&cfg).map_err(|e| e.to_string())?;
    Ok(Comparison {
        names: stats.iter().map(|s| s.estimator.to_string()).collect(),
        means: stats.iter().map(|s| s.mean[0]).collect(),
        variances: stats.iter().map(|s| s.variance[0]).collect(),
        failures: stats.iter().map(|s| s.failures as u32).collect(),
    })
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn fit_demo(
    model: &str,
    sigma0: f64,
    mu0: f64,
    k: usize,
    n_bins: usize,
    xi0_sigma: f64,
    xi0_mu: f64,
    seed: u64,
) -> Result<FitDemo, JsError> {
    run_fit(model, sigma0, mu0, k, n_bins, xi0_sigma, xi0_mu, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn residual_curve(sigma0: f64, lo: f64, hi: f64, step: f64) -> Result<Curve, JsError> {
    run_residual(sigma0, lo, hi, step).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare_estimators(
    sigma0: f64,
    k: usize,
    n_bins: usize,
    trials: usize,
    seed: u64,
) -> Result<Comparison, JsError> {
    run_comparison(sigma0, k, n_bins, trials, seed).map_err(|e| JsError::new(&e))
}
