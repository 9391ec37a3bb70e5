//! Parametric density families, their parameter gradients, and seeded
//! samplers.
//!
//! Three families are supported:
//!
//! | model            | parameters | support |
//! |------------------|------------|---------|
//! | `Rayleigh`       | `[σ]`      | x ≥ 0   |
//! | `NormalZeroMean` | `[σ]`      | ℝ       |
//! | `Lognormal`      | `[σ, μ]`   | x > 0   |
//!
//! Densities and gradients evaluate to exactly zero outside the support.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// A supported density family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Rayleigh,
    NormalZeroMean,
    Lognormal,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::Rayleigh,
        ModelKind::NormalZeroMean,
        ModelKind::Lognormal,
    ];

    /// Number of free parameters `L`.
    pub fn param_count(self) -> usize {
        match self {
            ModelKind::Rayleigh | ModelKind::NormalZeroMean => 1,
            ModelKind::Lognormal => 2,
        }
    }

    /// Parameter names in vector order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Rayleigh | ModelKind::NormalZeroMean => &["sigma"],
            ModelKind::Lognormal => &["sigma", "mu"],
        }
    }

    /// Whether parameter `l` is a scale that must stay strictly positive.
    pub fn is_scale_param(self, l: usize) -> bool {
        l == 0
    }

    /// True when the support is bounded below at zero.
    pub fn is_one_sided(self) -> bool {
        !matches!(self, ModelKind::NormalZeroMean)
    }

    /// Whether `x` lies in the support of the family.
    #[inline]
    pub fn in_support(self, x: f64) -> bool {
        match self {
            ModelKind::Rayleigh => x >= 0.0,
            ModelKind::NormalZeroMean => x.is_finite(),
            ModelKind::Lognormal => x > 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Rayleigh => "rayleigh",
            ModelKind::NormalZeroMean => "normal",
            ModelKind::Lognormal => "lognormal",
        }
    }

    // Density with parameters assumed validated.
    #[inline]
    pub(crate) fn density(self, x: f64, p: &[f64]) -> f64 {
        if !self.in_support(x) {
            return 0.0;
        }
        let sigma = p[0];
        match self {
            ModelKind::Rayleigh => {
                let s2 = sigma * sigma;
                x / s2 * (-x * x / (2.0 * s2)).exp()
            }
            ModelKind::NormalZeroMean => {
                INV_SQRT_2PI / sigma * (-x * x / (2.0 * sigma * sigma)).exp()
            }
            ModelKind::Lognormal => {
                let u = x.ln() - p[1];
                INV_SQRT_2PI / (x * sigma) * (-u * u / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    // Analytic ∂P/∂ξ written into `out` (length L).
    #[inline]
    pub(crate) fn density_gradient(self, x: f64, p: &[f64], out: &mut [f64]) {
        if !self.in_support(x) {
            out.iter_mut().for_each(|g| *g = 0.0);
            return;
        }
        let sigma = p[0];
        match self {
            ModelKind::Rayleigh => {
                let s2 = sigma * sigma;
                let e = (-x * x / (2.0 * s2)).exp();
                out[0] = x * e * (x * x - 2.0 * s2) / (s2 * s2 * sigma);
            }
            ModelKind::NormalZeroMean => {
                let s2 = sigma * sigma;
                let pdf = INV_SQRT_2PI / sigma * (-x * x / (2.0 * s2)).exp();
                out[0] = pdf * (x * x - s2) / (s2 * sigma);
            }
            ModelKind::Lognormal => {
                let s2 = sigma * sigma;
                let u = x.ln() - p[1];
                let pdf = INV_SQRT_2PI / (x * sigma) * (-u * u / (2.0 * s2)).exp();
                out[0] = pdf * (u * u - s2) / (s2 * sigma);
                out[1] = pdf * u / s2;
            }
        }
    }

    fn check_len(self, xi: &ParamVector) -> Result<()> {
        if xi.len() != self.param_count() {
            return Err(Error::InvalidParameter(format!(
                "{} expects {} parameter(s), got {}",
                self.name(),
                self.param_count(),
                xi.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rayleigh" => Ok(ModelKind::Rayleigh),
            "normal" | "normal-zero-mean" => Ok(ModelKind::NormalZeroMean),
            "lognormal" => Ok(ModelKind::Lognormal),
            other => Err(Error::InvalidConfig(format!("unknown model '{other}'"))),
        }
    }
}

/// Parameter vector `ξ` for one of the families.
///
/// Construction validates the length against the model and requires
/// `σ > 0`, so the evaluation routines never re-check values.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(model: ModelKind, values: &[f64]) -> Result<Self> {
        if values.len() != model.param_count() {
            return Err(Error::InvalidParameter(format!(
                "{} expects {} parameter(s), got {}",
                model,
                model.param_count(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite parameter".into()));
        }
        if values[0].is_nan() || values[0] <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma must be > 0, got {}",
                values[0]
            )));
        }
        Ok(ParamVector(values.to_vec()))
    }

    /// Shorthand for a one-parameter `[σ]` vector.
    pub fn sigma(sigma: f64) -> Result<Self> {
        ParamVector::new(ModelKind::Rayleigh, &[sigma])
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        ParamVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inf_norm(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<usize> for ParamVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Ordered abscissae `x_i` with the bin each one stands for.
///
/// Every point owns a bin `[left_i, right_i)` of width `widths[i]`; the bins
/// of a grid never overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    points: Vec<f64>,
    widths: Vec<f64>,
    lefts: Vec<f64>,
    rights: Vec<f64>,
}

impl SampleGrid {
    /// Builds a grid from centers and widths; bin `i` is `x_i ± w_i/2`.
    pub fn new(points: Vec<f64>, widths: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid has no points".into()));
        }
        if points.len() != widths.len() {
            return Err(Error::InvalidGrid(format!(
                "{} points but {} widths",
                points.len(),
                widths.len()
            )));
        }
        if points.iter().chain(&widths).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite grid value".into()));
        }
        if widths.iter().any(|&w| w <= 0.0) {
            return Err(Error::InvalidGrid("bin widths must be > 0".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(
                "points must be strictly increasing".into(),
            ));
        }
        let lefts: Vec<f64> = points
            .iter()
            .zip(&widths)
            .map(|(c, w)| c - 0.5 * w)
            .collect();
        let rights: Vec<f64> = points
            .iter()
            .zip(&widths)
            .map(|(c, w)| c + 0.5 * w)
            .collect();
        for i in 1..points.len() {
            let slack = 1e-9 * (rights[i - 1].abs() + lefts[i].abs()).max(1.0);
            if rights[i - 1] > lefts[i] + slack {
                return Err(Error::InvalidGrid(format!(
                    "bins {} and {} overlap",
                    i - 1,
                    i
                )));
            }
        }
        Ok(SampleGrid {
            points,
            widths,
            lefts,
            rights,
        })
    }

    /// `n` equal-width bins covering `[lo, hi]`; points are bin centers.
    ///
    /// Interior edges are `lo + k·Δ` and the last edge is exactly `hi`, so a
    /// sample equal to `hi` always lands in the final bin.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("need at least one bin".into()));
        }
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::DegenerateRange { lo, hi });
        }
        let delta = (hi - lo) / n as f64;
        let points = (0..n).map(|k| lo + (k as f64 + 0.5) * delta).collect();
        let widths = vec![delta; n];
        let lefts: Vec<f64> = (0..n).map(|k| lo + k as f64 * delta).collect();
        let mut rights: Vec<f64> = lefts[1..].to_vec();
        rights.push(hi);
        Ok(SampleGrid {
            points,
            widths,
            lefts,
            rights,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(left, right)` edges of bin `i`.
    pub fn bin(&self, i: usize) -> (f64, f64) {
        (self.lefts[i], self.rights[i])
    }

    pub fn lo(&self) -> f64 {
        self.lefts[0]
    }

    pub fn hi(&self) -> f64 {
        self.rights[self.rights.len() - 1]
    }

    /// Index of the bin holding `x`. Bins are half-open except the last,
    /// which includes its right edge.
    pub fn locate(&self, x: f64) -> Option<usize> {
        let i = self.lefts.partition_point(|&l| l <= x).checked_sub(1)?;
        let last = i + 1 == self.len();
        if x < self.rights[i] || (last && x <= self.rights[i]) {
            Some(i)
        } else {
            None
        }
    }

    /// Checks that every grid point lies inside the model's support.
    pub fn check_support(&self, model: ModelKind) -> Result<()> {
        match self.points.iter().find(|&&x| !model.in_support(x)) {
            Some(x) => Err(Error::InvalidGrid(format!(
                "point {x} lies outside the {model} support"
            ))),
            None => Ok(()),
        }
    }
}

/// `Ψ(ξ)`: the model density sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelVector(pub Vec<f64>);

impl ModelVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// `N×L` matrix of parameter partials, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl JacobianMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, l: usize) -> f64 {
        self.data[i * self.cols + l]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, l: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, l)).collect()
    }

    /// `Jᵀ v` for an `N`-vector `v`.
    pub fn transpose_mul(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows, "vector length must equal row count");
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &j) in out.iter_mut().zip(self.row(i)) {
                *o += j * vi;
            }
        }
        out
    }

    /// `J c` for an `L`-vector `c`.
    pub fn mul(&self, c: &[f64]) -> Vec<f64> {
        assert_eq!(c.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(c).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// The `L×L` Gram matrix `JᵀJ`, row-major.
    pub fn gram(&self) -> Vec<f64> {
        let l = self.cols;
        let mut g = vec![0.0; l * l];
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..l {
                for b in 0..l {
                    g[a * l + b] += r[a] * r[b];
                }
            }
        }
        g
    }
}

/// Closed-form density `P_X(x, ξ)`; zero outside the support.
pub fn pdf_value(model: ModelKind, x: f64, xi: &ParamVector) -> Result<f64> {
    model.check_len(xi)?;
    Ok(model.density(x, xi.values()))
}

/// Analytic gradient `∂P_X(x, ξ)/∂ξ`; the zero vector outside the support.
pub fn pdf_gradient(model: ModelKind, x: f64, xi: &ParamVector) -> Result<Vec<f64>> {
    model.check_len(xi)?;
    let mut g = vec![0.0; xi.len()];
    model.density_gradient(x, xi.values(), &mut g);
    Ok(g)
}

pub fn model_vector(model: ModelKind, grid: &SampleGrid, xi: &ParamVector) -> Result<ModelVector> {
    model.check_len(xi)?;
    Ok(ModelVector(
        grid.points()
            .iter()
            .map(|&x| model.density(x, xi.values()))
            .collect(),
    ))
}

pub fn jacobian(model: ModelKind, grid: &SampleGrid, xi: &ParamVector) -> Result<JacobianMatrix> {
    model.check_len(xi)?;
    let cols = xi.len();
    let mut data = vec![0.0; grid.len() * cols];
    for (row, &x) in data.chunks_exact_mut(cols).zip(grid.points()) {
        model.density_gradient(x, xi.values(), row);
    }
    Ok(JacobianMatrix {
        rows: grid.len(),
        cols,
        data,
    })
}

/// Draws `count` i.i.d. variates, deterministic in `seed`.
///
/// Rayleigh uses the inverse transform `σ√(−2 ln U)` with `U` on `(0, 1]`;
/// the normal families use a standard normal variate.
pub fn sample(model: ModelKind, xi: &ParamVector, count: usize, seed: u64) -> Result<Vec<f64>> {
    model.check_len(xi)?;
    if count == 0 {
        return Err(Error::InsufficientData("sample count must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = xi[0];
    let draws = match model {
        ModelKind::Rayleigh => (0..count)
            .map(|_| {
                let u = 1.0 - rng.random::<f64>();
                sigma * (-2.0 * u.ln()).sqrt()
            })
            .collect(),
        ModelKind::NormalZeroMean => (0..count)
            .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
            .collect(),
        ModelKind::Lognormal => {
            let mu = xi[1];
            (0..count)
                .map(|_| (mu + sigma * rng.sample::<f64, _>(StandardNormal)).exp())
                .collect()
        }
    };
    Ok(draws)
}

/// Rayleigh mean `σ√(π/2)`.
pub fn rayleigh_mean(sigma: f64) -> f64 {
    sigma * (PI / 2.0).sqrt()
}
