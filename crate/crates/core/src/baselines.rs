//! Comparison estimators for the Rayleigh scale: a direct L2 fit of the
//! histogram and the closed-form MLE, Bayes and moment estimators.

use std::f64::consts::PI;

use libm::lgamma;

use crate::distributions::ModelKind;
use crate::error::{Error, Result};
use crate::measurement::MeasurementVector;

/// `1 − Γ²(3/2) = 1 − π/4`, the Rayleigh variance in units of `2σ²`.
pub const MOMENT_CONSTANT: f64 = 1.0 - PI / 4.0;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Search window for [`l2_fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L2FitConfig {
    pub search_lo: f64,
    pub search_hi: f64,
    pub coarse_points: usize,
    pub refine_iters: usize,
}

impl L2FitConfig {
    pub fn new(search_lo: f64, search_hi: f64) -> Result<Self> {
        let cfg = L2FitConfig {
            search_lo,
            search_hi,
            coarse_points: 200,
            refine_iters: 60,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Window `[0.05·m, 5·m]` around a pilot scale `m`.
    pub fn around(pilot: f64) -> Result<Self> {
        L2FitConfig::new(0.05 * pilot, 5.0 * pilot)
    }

    fn validate(&self) -> Result<()> {
        if !(self.search_lo > 0.0 && self.search_hi > self.search_lo && self.search_hi.is_finite())
        {
            return Err(Error::InvalidConfig(format!(
                "need 0 < search_lo < search_hi, got [{}, {}]",
                self.search_lo, self.search_hi
            )));
        }
        if self.coarse_points < 3 {
            return Err(Error::InvalidConfig("coarse_points must be >= 3".into()));
        }
        Ok(())
    }
}

/// `L2(σ) = ‖Ψ̂ − Ψ(σ)‖₂` for the Rayleigh model.
pub fn l2_objective(measurement: &MeasurementVector, sigma: f64) -> f64 {
    let p = [sigma];
    measurement
        .grid()
        .points()
        .iter()
        .zip(measurement.values())
        .map(|(&x, &m)| {
            let d = m - ModelKind::Rayleigh.density(x, &p);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Minimizes [`l2_objective`] over the configured window.
///
/// A geometric coarse scan picks the best bracket, which golden-section
/// search then refines. Ties in the scan go to the smaller `σ`.
pub fn l2_fit(measurement: &MeasurementVector, config: &L2FitConfig) -> Result<f64> {
    config.validate()?;
    if measurement.is_empty() || measurement.values().iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateMeasurement(
            "measurement is identically zero".into(),
        ));
    }
    measurement.grid().check_support(ModelKind::Rayleigh)?;

    let n = config.coarse_points;
    let ratio = (config.search_hi / config.search_lo).ln() / (n - 1) as f64;
    let node = |k: usize| {
        if k + 1 == n {
            config.search_hi
        } else {
            config.search_lo * (ratio * k as f64).exp()
        }
    };
    let f = |s: f64| l2_objective(measurement, s);

    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for k in 0..n {
        let v = f(node(k));
        if v < best_val {
            best_val = v;
            best = k;
        }
    }

    let mut a = node(best.saturating_sub(1));
    let mut b = node((best + 1).min(n - 1));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..config.refine_iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
    // The refined point can only lose to the coarse node at a bracket edge.
    Ok(if fx <= best_val { x } else { node(best) })
}

fn check_rayleigh_record(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("empty sample record".into()));
    }
    if samples.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InsufficientData(
            "Rayleigh samples must be finite and >= 0".into(),
        ));
    }
    let sum_sq: f64 = samples.iter().map(|x| x * x).sum();
    if sum_sq == 0.0 {
        return Err(Error::InsufficientData("all samples are zero".into()));
    }
    Ok(sum_sq)
}

/// `ln c(K)` with `c(K) = 4^K K! (K−1)! √K / ((2K)! √π)`.
pub fn ln_mle_coefficient(k: usize) -> f64 {
    let kf = k as f64;
    kf * 4f64.ln() + lgamma(kf + 1.0) + lgamma(kf) + 0.5 * kf.ln()
        - lgamma(2.0 * kf + 1.0)
        - 0.5 * PI.ln()
}

/// Unbiasing coefficient `c(K)` of the Rayleigh MLE.
pub fn mle_coefficient(k: usize) -> f64 {
    ln_mle_coefficient(k).exp()
}

/// `√(K·Γ(K+½)/Γ(K+3/2))`.
pub fn bayes_factor(k: usize) -> f64 {
    let kf = k as f64;
    (0.5 * (kf.ln() + lgamma(kf + 0.5) - lgamma(kf + 1.5))).exp()
}

/// Unbiased maximum-likelihood scale `c(K)·√(Σx²/2K)`.
pub fn mle_rayleigh(samples: &[f64]) -> Result<f64> {
    let sum_sq = check_rayleigh_record(samples)?;
    let k = samples.len();
    Ok(mle_coefficient(k) * (sum_sq / (2.0 * k as f64)).sqrt())
}

/// Bayes scale `√(K·Γ(K+½)/Γ(K+3/2)) · √(Σx²/2K)`.
pub fn bayes_rayleigh(samples: &[f64]) -> Result<f64> {
    let sum_sq = check_rayleigh_record(samples)?;
    let k = samples.len();
    Ok(bayes_factor(k) * (sum_sq / (2.0 * k as f64)).sqrt())
}

/// Moment scale `√(s² / (2(1 − Γ²(3/2))))` with `s²` the unbiased sample
/// variance.
pub fn moment_rayleigh(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "moment estimator needs K >= 2, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InsufficientData("non-finite sample".into()));
    }
    let k = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / k;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
    if var == 0.0 {
        return Err(Error::InsufficientData("zero sample variance".into()));
    }
    Ok((var / (2.0 * MOMENT_CONSTANT)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{ParamVector, SampleGrid};

    fn exact_measurement(sigma0: f64) -> MeasurementVector {
        let grid = SampleGrid::uniform(0.0, 4.0 * sigma0, 15).unwrap();
        MeasurementVector::exact(
            ModelKind::Rayleigh,
            grid,
            &ParamVector::sigma(sigma0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn l2_recovers_exact_model() {
        let m = exact_measurement(1.0);
        let s = l2_fit(&m, &L2FitConfig::around(1.1).unwrap()).unwrap();
        assert!((s - 1.0).abs() < 1e-4, "{s}");
        let f = |x| l2_objective(&m, x);
        assert!(f(s) <= f(s + 1e-3) && f(s) <= f(s - 1e-3));
    }

    #[test]
    fn l2_rejects_zero_measurement_and_bad_window() {
        let grid = SampleGrid::uniform(0.0, 1.0, 4).unwrap();
        let m = MeasurementVector::from_values(grid, vec![0.0; 4]).unwrap();
        assert!(l2_fit(&m, &L2FitConfig::around(1.0).unwrap()).is_err());
        assert!(L2FitConfig::new(2.0, 1.0).is_err());
        assert!(L2FitConfig::new(0.0, 1.0).is_err());
    }

    #[test]
    fn closed_form_constants() {
        let c1 = mle_coefficient(1);
        assert!((c1 - 2.0 / PI.sqrt()).abs() < 1e-12);
        assert!(
            (mle_rayleigh(&[2f64.sqrt()]).unwrap() - std::f64::consts::FRAC_2_SQRT_PI).abs()
                < 1e-12
        );
        assert!((bayes_rayleigh(&[2f64.sqrt()]).unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let c100 = mle_coefficient(100);
        assert!(c100 > 1.0 && c100 < 1.01, "{c100}");
        assert!((MOMENT_CONSTANT - 0.214_601_836_602_551_7).abs() < 1e-15);
    }

    #[test]
    fn moment_hand_computed() {
        // {1, 3}: s² = 2, σ̂ = √(2 / (2(1 − π/4))).
        let s = moment_rayleigh(&[1.0, 3.0]).unwrap();
        assert!((s - (1.0 / MOMENT_CONSTANT).sqrt()).abs() < 1e-12);
        assert!((s - 2.158_655_2).abs() < 1e-6);
    }

    #[test]
    fn error_paths() {
        assert!(mle_rayleigh(&[]).is_err());
        assert!(mle_rayleigh(&[0.0, 0.0]).is_err());
        assert!(bayes_rayleigh(&[-1.0, 2.0]).is_err());
        assert!(moment_rayleigh(&[1.0]).is_err());
        assert!(moment_rayleigh(&[2.0, 2.0, 2.0]).is_err());
    }

    #[test]
    fn bayes_to_mle_ratio_depends_only_on_k() {
        let a = [0.3, 1.2, 2.2, 0.9];
        let b = [1.7, 0.1, 0.4, 3.3];
        let ra = bayes_rayleigh(&a).unwrap() / mle_rayleigh(&a).unwrap();
        let rb = bayes_rayleigh(&b).unwrap() / mle_rayleigh(&b).unwrap();
        assert!((ra - rb).abs() < 1e-14);
        assert!(ra < 1.0);
    }
}
