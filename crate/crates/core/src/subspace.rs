//! The nonlinear-subspace estimator.
//!
//! The parameters follow the gradient flow `ξ̇ = Jᵀ(ξ) D(ξ)` where
//! `D = Ψ̂ − Ψ(ξ)` is the distance between the measurement and the model
//! vector and `J` is the Jacobian of `Ψ`. The flow only sees the component
//! of `D` lying in the tangent space of the model manifold; any error
//! orthogonal to every column of `J` produces no motion.
//!
//! [`estimate`] discretizes the flow with explicit Euler steps and a
//! backtracking line search on the Lyapunov function `V = ½‖D‖²`, which
//! makes `V` strictly decrease along the returned trace.

use crate::distributions::{jacobian, ModelKind, ParamVector, SampleGrid};
use crate::error::{Error, Result};
use crate::measurement::MeasurementVector;
use crate::quadrature::simpson;

/// Step control for the discrete flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub initial_step: f64,
    pub max_halvings: u32,
    pub grad_tol: f64,
    pub max_iters: usize,
    /// Lower bound kept by every scale parameter.
    pub param_floor: f64,
    /// Raise the starting step to the power of two just above
    /// `1 / trace(JᵀJ)` at the initial point when that exceeds
    /// `initial_step`. Helps families whose densities are small on the grid.
    pub auto_step: bool,
    /// Armijo constant `c`: a step must achieve
    /// `V_new < V − c·η·‖JᵀD‖²`. Zero accepts any strict decrease.
    pub sufficient_decrease: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            initial_step: 1.0,
            max_halvings: 60,
            grad_tol: 1e-8,
            max_iters: 10_000,
            param_floor: 1e-6,
            auto_step: true,
            sufficient_decrease: 0.25,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.initial_step, self.grad_tol, self.param_floor]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        let armijo_ok = (0.0..1.0).contains(&self.sufficient_decrease);
        if !positive || !armijo_ok || self.max_halvings == 0 || self.max_iters == 0 {
            return Err(Error::InvalidConfig(format!(
                "solver settings must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Why the iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    /// `‖JᵀD‖∞ < grad_tol · max(1, ‖ξ‖∞)`.
    GradientTol,
    MaxIters,
    /// No step of any admissible length decreased `V`.
    StepFloor,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::GradientTol => "gradient-tol",
            Termination::MaxIters => "max-iters",
            Termination::StepFloor => "step-floor",
        }
    }

    /// `GradientTol` and `StepFloor` both mean the iterate is stationary to
    /// working precision; `MaxIters` does not.
    pub fn is_converged(self) -> bool {
        !matches!(self, Termination::MaxIters)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub xi: ParamVector,
    pub lyapunov: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub xi_final: ParamVector,
    pub iterations: usize,
    pub trace: Vec<TracePoint>,
    pub termination: Termination,
}

/// Split of an error vector into its tangent and normal parts at `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorDecomposition {
    pub tangent: Vec<f64>,
    pub normal: Vec<f64>,
}

fn check_measurement(
    measurement: &MeasurementVector,
    model: ModelKind,
    xi: &ParamVector,
) -> Result<()> {
    if measurement.is_empty() {
        return Err(Error::InsufficientData("empty measurement".into()));
    }
    if xi.len() != model.param_count() {
        return Err(Error::InvalidParameter(format!(
            "{model} expects {} parameter(s), got {}",
            model.param_count(),
            xi.len()
        )));
    }
    Ok(())
}

// D = Ψ̂ − Ψ(ξ) for raw parameters.
fn distance_raw(measurement: &MeasurementVector, model: ModelKind, p: &[f64], out: &mut Vec<f64>) {
    out.clear();
    out.extend(
        measurement
            .grid()
            .points()
            .iter()
            .zip(measurement.values())
            .map(|(&x, &m)| m - model.density(x, p)),
    );
}

fn lyapunov_raw(measurement: &MeasurementVector, model: ModelKind, p: &[f64]) -> f64 {
    0.5 * measurement
        .grid()
        .points()
        .iter()
        .zip(measurement.values())
        .map(|(&x, &m)| {
            let d = m - model.density(x, p);
            d * d
        })
        .sum::<f64>()
}

// JᵀD accumulated row by row without materializing J.
fn force_raw(measurement: &MeasurementVector, model: ModelKind, p: &[f64], out: &mut [f64]) {
    let mut grad = [0.0; 2];
    let grad = &mut grad[..p.len()];
    out.iter_mut().for_each(|f| *f = 0.0);
    for (&x, &m) in measurement.grid().points().iter().zip(measurement.values()) {
        let d = m - model.density(x, p);
        model.density_gradient(x, p, grad);
        for (f, g) in out.iter_mut().zip(grad.iter()) {
            *f += g * d;
        }
    }
}

/// `D(ξ) = Ψ̂ − Ψ(ξ)`.
pub fn distance(
    measurement: &MeasurementVector,
    model: ModelKind,
    xi: &ParamVector,
) -> Result<Vec<f64>> {
    check_measurement(measurement, model, xi)?;
    let mut d = Vec::with_capacity(measurement.len());
    distance_raw(measurement, model, xi.values(), &mut d);
    Ok(d)
}

/// `D_t = Jᵀ(ξ) D(ξ)`, the right-hand side of the flow and `−∇V`.
pub fn tangent_force(
    measurement: &MeasurementVector,
    model: ModelKind,
    xi: &ParamVector,
) -> Result<Vec<f64>> {
    check_measurement(measurement, model, xi)?;
    let mut f = vec![0.0; xi.len()];
    force_raw(measurement, model, xi.values(), &mut f);
    Ok(f)
}

/// `V(ξ) = ½ DᵀD`.
pub fn lyapunov_value(
    measurement: &MeasurementVector,
    model: ModelKind,
    xi: &ParamVector,
) -> Result<f64> {
    check_measurement(measurement, model, xi)?;
    Ok(lyapunov_raw(measurement, model, xi.values()))
}

/// Runs the safeguarded discrete flow from `xi0`.
///
/// Each iteration tries `ξ + η·JᵀD` with `η = initial_step`, halving `η`
/// until `V` strictly decreases and every scale parameter stays above
/// `param_floor`, with the optional Armijo margin of
/// [`SolverConfig::sufficient_decrease`]. A gradient test that coincides with the iteration cap
/// reports [`Termination::GradientTol`].
pub fn estimate(
    measurement: &MeasurementVector,
    model: ModelKind,
    xi0: &ParamVector,
    config: &SolverConfig,
) -> Result<EstimateResult> {
    check_measurement(measurement, model, xi0)?;
    config.validate()?;
    let l = xi0.len();
    let floor_ok = |p: &[f64]| {
        p.iter()
            .enumerate()
            .all(|(i, &v)| v.is_finite() && (!model.is_scale_param(i) || v > config.param_floor))
    };
    if !floor_ok(xi0.values()) {
        return Err(Error::InvalidParameter(format!(
            "initial parameters {:?} violate the floor {}",
            xi0.values(),
            config.param_floor
        )));
    }

    let step0 = if config.auto_step {
        config
            .initial_step
            .max(curvature_step(measurement, model, xi0.values()))
    } else {
        config.initial_step
    };
    let mut xi = xi0.values().to_vec();
    let mut v = lyapunov_raw(measurement, model, &xi);
    let mut trace = vec![TracePoint {
        iteration: 0,
        xi: xi0.clone(),
        lyapunov: v,
    }];
    let mut force = vec![0.0; l];
    let mut cand = vec![0.0; l];
    let mut iterations = 0;

    let termination = loop {
        force_raw(measurement, model, &xi, &mut force);
        let scale = xi.iter().fold(1.0_f64, |m, p| m.max(p.abs()));
        let f_inf = force.iter().fold(0.0_f64, |m, f| m.max(f.abs()));
        if f_inf < config.grad_tol * scale {
            break Termination::GradientTol;
        }
        if iterations >= config.max_iters {
            break Termination::MaxIters;
        }

        let f_sq: f64 = force.iter().map(|f| f * f).sum();
        let mut eta = step0;
        let mut accepted = None;
        for _ in 0..=config.max_halvings {
            for ((c, p), f) in cand.iter_mut().zip(&xi).zip(&force) {
                *c = p + eta * f;
            }
            if floor_ok(&cand) {
                let v_new = lyapunov_raw(measurement, model, &cand);
                if v_new < v - config.sufficient_decrease * eta * f_sq {
                    accepted = Some(v_new);
                    break;
                }
            }
            eta *= 0.5;
        }
        let Some(v_new) = accepted else {
            break Termination::StepFloor;
        };

        std::mem::swap(&mut xi, &mut cand);
        v = v_new;
        iterations += 1;
        trace.push(TracePoint {
            iteration: iterations,
            xi: ParamVector::from_raw(xi.clone()),
            lyapunov: v,
        });
    };

    Ok(EstimateResult {
        xi_final: ParamVector::from_raw(xi),
        iterations,
        trace,
        termination,
    })
}

// 2^⌈log2(1 / trace(JᵀJ))⌉, or 0 when J vanishes.
fn curvature_step(measurement: &MeasurementVector, model: ModelKind, p: &[f64]) -> f64 {
    let mut grad = [0.0; 2];
    let grad = &mut grad[..p.len()];
    let mut trace = 0.0;
    for &x in measurement.grid().points() {
        model.density_gradient(x, p, grad);
        trace += grad.iter().map(|g| g * g).sum::<f64>();
    }
    if trace > 0.0 && trace.is_finite() {
        (-trace.log2()).ceil().exp2()
    } else {
        0.0
    }
}

/// Orthogonal projection of `error` onto the column space of `J(ξ)`.
pub fn decompose_error(
    error: &[f64],
    model: ModelKind,
    grid: &SampleGrid,
    xi: &ParamVector,
) -> Result<ErrorDecomposition> {
    if error.len() != grid.len() {
        return Err(Error::InvalidGrid(format!(
            "error has {} entries for {} grid points",
            error.len(),
            grid.len()
        )));
    }
    let j = jacobian(model, grid, xi)?;
    // Pivots are judged against the squared size of Ψ(ξ) per unit of ξ.
    let psi = crate::distributions::model_vector(model, grid, xi)?;
    let reference = psi.0.iter().map(|v| v * v).sum::<f64>() / xi.inf_norm().max(1.0).powi(2);
    let coeffs = solve_spd(j.gram(), j.transpose_mul(error), j.cols(), reference)?;
    let tangent = j.mul(&coeffs);
    let normal = error.iter().zip(&tangent).map(|(e, t)| e - t).collect();
    Ok(ErrorDecomposition { tangent, normal })
}

// Gaussian elimination with partial pivoting on a small L×L system.
fn solve_spd(mut a: Vec<f64>, mut b: Vec<f64>, n: usize, reference: f64) -> Result<Vec<f64>> {
    let scale = (0..n).map(|i| a[i * n + i].abs()).fold(reference, f64::max);
    if scale == 0.0 {
        return Err(Error::RankDeficient { pivot: 0.0 });
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap_or(col);
        let rel = a[piv * n + col].abs() / scale;
        if rel < 1e-12 {
            return Err(Error::RankDeficient { pivot: rel });
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        for r in col + 1..n {
            let factor = a[r * n + col] / a[col * n + col];
            for k in col..n {
                a[r * n + k] -= factor * a[col * n + k];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|k| a[r * n + k] * x[k]).sum();
        x[r] = (b[r] - tail) / a[r * n + r];
    }
    Ok(x)
}

/// Continuous-limit equilibrium function of the Rayleigh flow:
///
/// `∫₀^∞ ∂P(x,ξ)/∂ξ · (P(x,σ₀) − P(x,ξ)) dx`
///
/// with unit scale, integrated by composite Simpson over
/// `[0, 8·max(ξ, σ₀)]`. Its sign is the direction the flow moves `ξ`.
pub fn equilibrium_residual(xi: f64, sigma0: f64, quad_points: usize) -> Result<f64> {
    if !(xi > 0.0 && xi.is_finite()) || !(sigma0 > 0.0 && sigma0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "xi and sigma0 must be positive, got {xi} and {sigma0}"
        )));
    }
    if quad_points < 100 {
        return Err(Error::InvalidConfig(format!(
            "quad_points must be >= 100, got {quad_points}"
        )));
    }
    let model = ModelKind::Rayleigh;
    let cand = [xi];
    let truth = [sigma0];
    let integrand = |x: f64| {
        let mut g = [0.0];
        model.density_gradient(x, &cand, &mut g);
        g[0] * (model.density(x, &truth) - model.density(x, &cand))
    };
    Ok(simpson(integrand, 0.0, 8.0 * xi.max(sigma0), quad_points))
}
