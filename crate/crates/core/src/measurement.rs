//! Histogram measurement vectors `Ψ̂` built from finite sample records.

use crate::distributions::{model_vector, ModelKind, ParamVector, SampleGrid};
use crate::error::{Error, Result};

/// How the binned range is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RangeRule {
    /// `[0, max sample]` for one-sided models; `[-max|x|, max|x|]` for
    /// two-sided ones.
    DataMax,
    /// `[min sample, max sample]`.
    DataMinMax,
    Fixed {
        lo: f64,
        hi: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy {
    n_bins: usize,
    range_rule: RangeRule,
}

impl GridPolicy {
    pub fn new(n_bins: usize, range_rule: RangeRule) -> Result<Self> {
        if n_bins < 2 {
            return Err(Error::InvalidConfig(format!(
                "n_bins must be >= 2, got {n_bins}"
            )));
        }
        if let RangeRule::Fixed { lo, hi } = range_rule {
            if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
                return Err(Error::DegenerateRange { lo, hi });
            }
        }
        Ok(GridPolicy { n_bins, range_rule })
    }

    /// `DataMax` binning with `n_bins` bins.
    pub fn data_max(n_bins: usize) -> Result<Self> {
        GridPolicy::new(n_bins, RangeRule::DataMax)
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn range_rule(&self) -> RangeRule {
        self.range_rule
    }
}

/// Histogram density estimate on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementVector {
    grid: SampleGrid,
    values: Vec<f64>,
    record_size: usize,
    dropped: usize,
}

impl MeasurementVector {
    /// Wraps externally supplied density values (e.g. a noise-free model
    /// vector) as a measurement.
    pub fn from_values(grid: SampleGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::DegenerateMeasurement(
                "values must be finite and nonnegative".into(),
            ));
        }
        Ok(MeasurementVector {
            grid,
            values,
            record_size: 0,
            dropped: 0,
        })
    }

    /// Noise-free measurement `Ψ(ξ)` on `grid`.
    pub fn exact(model: ModelKind, grid: SampleGrid, xi: &ParamVector) -> Result<Self> {
        grid.check_support(model)?;
        let mv = model_vector(model, &grid, xi)?;
        MeasurementVector::from_values(grid, mv.0)
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of samples `K` the histogram was built from (0 for synthetic
    /// measurements).
    pub fn record_size(&self) -> usize {
        self.record_size
    }

    /// Samples that fell outside every bin.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    /// `Σ values_i · widths_i`.
    pub fn mass(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.widths())
            .map(|(v, w)| v * w)
            .sum()
    }
}

/// Equal-width grid over the range selected by `policy`; points are bin
/// centers.
pub fn build_grid(samples: &[f64], policy: &GridPolicy, model: ModelKind) -> Result<SampleGrid> {
    let (lo, hi) = match policy.range_rule {
        RangeRule::Fixed { lo, hi } => (lo, hi),
        rule => {
            if samples.len() < 2 {
                return Err(Error::InsufficientData(format!(
                    "need at least 2 samples for a data-driven range, got {}",
                    samples.len()
                )));
            }
            if samples.iter().any(|x| !x.is_finite()) {
                return Err(Error::InsufficientData("non-finite sample".into()));
            }
            let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
            match (rule, model.is_one_sided()) {
                (RangeRule::DataMax, true) => (0.0, max),
                (RangeRule::DataMax, false) => {
                    let m = max.abs().max(min.abs());
                    (-m, m)
                }
                _ => (min, max),
            }
        }
    };
    if hi.is_nan()
        || lo.is_nan()
        || hi <= lo
        || (matches!(policy.range_rule, RangeRule::DataMinMax) && samples_all_equal(samples))
    {
        return Err(Error::DegenerateRange { lo, hi });
    }
    let grid = SampleGrid::uniform(lo, hi, policy.n_bins)?;
    grid.check_support(model)?;
    Ok(grid)
}

fn samples_all_equal(samples: &[f64]) -> bool {
    samples.windows(2).all(|w| w[0] == w[1])
}

/// Normalized histogram: `values_i = count_i / (K · Δx_i)`.
///
/// Samples outside every bin are dropped and reported via
/// [`MeasurementVector::dropped`].
pub fn histogram_density(samples: &[f64], grid: &SampleGrid) -> Result<MeasurementVector> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("empty sample record".into()));
    }
    let mut counts = vec![0usize; grid.len()];
    let mut dropped = 0;
    for &x in samples {
        match grid.locate(x) {
            Some(i) => counts[i] += 1,
            None => dropped += 1,
        }
    }
    let k = samples.len() as f64;
    let values = counts
        .iter()
        .zip(grid.widths())
        .map(|(&c, &w)| c as f64 / (k * w))
        .collect();
    Ok(MeasurementVector {
        grid: grid.clone(),
        values,
        record_size: samples.len(),
        dropped,
    })
}

/// Grid construction followed by histogram binning.
pub fn measure(
    samples: &[f64],
    policy: &GridPolicy,
    model: ModelKind,
) -> Result<MeasurementVector> {
    let grid = build_grid(samples, policy, model)?;
    histogram_density(samples, &grid)
}
