use nlsubspace::bench::{format_sig, sign_changes, trial_seed};
use nlsubspace::distributions::{jacobian, sample, ModelKind, ParamVector, SampleGrid};
use nlsubspace::measurement::{
    histogram_density, measure, GridPolicy, MeasurementVector, RangeRule,
};
use nlsubspace::subspace::{decompose_error, distance, lyapunov_value, tangent_force};
use proptest::prelude::*;

fn model_and_params() -> impl Strategy<Value = (ModelKind, ParamVector)> {
    prop_oneof![
        (0.3f64..3.0).prop_map(|s| (ModelKind::Rayleigh, ParamVector::sigma(s).unwrap())),
        (0.3f64..3.0).prop_map(|s| (ModelKind::NormalZeroMean, ParamVector::sigma(s).unwrap())),
        (0.3f64..1.5, -1.0f64..2.0).prop_map(|(s, m)| (
            ModelKind::Lognormal,
            ParamVector::new(ModelKind::Lognormal, &[s, m]).unwrap()
        )),
    ]
}

fn grid_for(model: ModelKind, xi: &ParamVector, n: usize) -> SampleGrid {
    match model {
        ModelKind::Rayleigh => SampleGrid::uniform(0.0, 4.0 * xi[0], n).unwrap(),
        ModelKind::NormalZeroMean => SampleGrid::uniform(-4.0 * xi[0], 4.0 * xi[0], n).unwrap(),
        ModelKind::Lognormal => SampleGrid::uniform(0.0, (xi[1] + 2.0 * xi[0]).exp(), n).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tangent_force_is_negative_lyapunov_gradient(
        (model, truth) in model_and_params(),
        shift in 0.7f64..1.4,
    ) {
        let psi = MeasurementVector::exact(model, grid_for(model, &truth, 20), &truth).unwrap();
        let mut p = truth.values().to_vec();
        p[0] *= shift;
        let xi = ParamVector::new(model, &p).unwrap();
        let force = tangent_force(&psi, model, &xi).unwrap();
        for l in 0..xi.len() {
            let h = 1e-6 * p[l].abs().max(1.0);
            let mut plus = p.clone();
            let mut minus = p.clone();
            plus[l] += h;
            minus[l] -= h;
            let vp = lyapunov_value(&psi, model, &ParamVector::new(model, &plus).unwrap()).unwrap();
            let vm = lyapunov_value(&psi, model, &ParamVector::new(model, &minus).unwrap()).unwrap();
            let grad = (vp - vm) / (2.0 * h);
            let scale = force.iter().fold(1e-6_f64, |m, f| m.max(f.abs()));
            prop_assert!((force[l] + grad).abs() / scale < 1e-5, "l={l}: force {} grad {grad}", force[l]);
        }
    }

    #[test]
    fn decomposition_is_an_orthogonal_split(
        (model, xi) in model_and_params(),
        raw in prop::collection::vec(-1.0f64..1.0, 12),
    ) {
        let grid = grid_for(model, &xi, 12);
        let parts = decompose_error(&raw, model, &grid, &xi).unwrap();
        let j = jacobian(model, &grid, &xi).unwrap();
        for ((t, n), e) in parts.tangent.iter().zip(&parts.normal).zip(&raw) {
            prop_assert!((t + n - e).abs() < 1e-12);
        }
        let jt_normal = j.transpose_mul(&parts.normal);
        let col_norm: f64 = (0..j.cols())
            .map(|c| j.column(c).iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        for v in jt_normal {
            prop_assert!(v.abs() <= 1e-9 * col_norm, "Jᵀn = {v}");
        }
        let dot: f64 = parts.tangent.iter().zip(&parts.normal).map(|(a, b)| a * b).sum();
        prop_assert!(dot.abs() < 1e-9);
    }

    #[test]
    fn distance_vanishes_on_the_model((model, xi) in model_and_params()) {
        let psi = MeasurementVector::exact(model, grid_for(model, &xi, 15), &xi).unwrap();
        prop_assert!(distance(&psi, model, &xi).unwrap().iter().all(|d| *d == 0.0));
        prop_assert_eq!(lyapunov_value(&psi, model, &xi).unwrap(), 0.0);
    }

    #[test]
    fn samples_are_deterministic_and_in_support(
        (model, xi) in model_and_params(),
        k in 1usize..200,
        seed in any::<u64>(),
    ) {
        let a = sample(model, &xi, k, seed).unwrap();
        let b = sample(model, &xi, k, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.len(), k);
        prop_assert!(a.iter().all(|&x| x.is_finite() && model.in_support(x)));
    }

    #[test]
    fn histogram_conserves_kept_mass(
        xs in prop::collection::vec(-1.0f64..3.0, 1..300),
        lo in -0.5f64..0.5,
        width in 0.5f64..3.0,
        n in 2usize..40,
    ) {
        let grid = SampleGrid::uniform(lo, lo + width, n).unwrap();
        let m = histogram_density(&xs, &grid).unwrap();
        let kept = xs.len() - m.dropped();
        let expected = kept as f64 / xs.len() as f64;
        prop_assert!((m.mass() - expected).abs() < 1e-12);
        let inside = xs.iter().filter(|&&x| x >= lo && x <= grid.hi()).count();
        prop_assert_eq!(kept, inside);
    }

    #[test]
    fn data_driven_ranges_keep_every_sample(
        xs in prop::collection::vec(0.0f64..10.0, 2..300),
        n in 2usize..40,
    ) {
        prop_assume!(xs.iter().any(|&x| x != xs[0]));
        for rule in [RangeRule::DataMax, RangeRule::DataMinMax] {
            let m = measure(&xs, &GridPolicy::new(n, rule).unwrap(), ModelKind::Rayleigh).unwrap();
            prop_assert_eq!(m.dropped(), 0);
            prop_assert!((m.mass() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trial_seeds_differ_across_trials(master in any::<u64>(), k in 1usize..1000, t in 0usize..10_000) {
        prop_assert_ne!(trial_seed(master, k, t), trial_seed(master, k, t + 1));
        prop_assert_ne!(trial_seed(master, k, t), trial_seed(master, k + 1, t));
    }

    #[test]
    fn six_significant_digits_round_trip(x in -1e9f64..1e9) {
        prop_assume!(x != 0.0);
        let back: f64 = format_sig(x, 6).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-6 * x.abs(), "{x} -> {back}");
    }

    #[test]
    fn sign_changes_ignores_scaling(values in prop::collection::vec(-1.0f64..1.0, 0..50), c in 0.1f64..10.0) {
        let a = sign_changes(values.iter().copied());
        let b = sign_changes(values.iter().map(|v| v * c));
        prop_assert_eq!(a, b);
        prop_assert!(a <= values.len().saturating_sub(1));
    }
}

// Spread of the histogram around the density shrinks as the record grows.
#[test]
fn histogram_variance_falls_with_record_size() {
    let model = ModelKind::Rayleigh;
    let xi = ParamVector::sigma(1.0).unwrap();
    let grid = SampleGrid::uniform(0.0, 4.0, 15).unwrap();
    let per_bin_variance = |k: usize| {
        let runs: Vec<Vec<f64>> = (0..400)
            .map(|t| {
                let xs = sample(model, &xi, k, trial_seed(9, k, t)).unwrap();
                histogram_density(&xs, &grid).unwrap().values().to_vec()
            })
            .collect();
        (0..grid.len())
            .map(|i| {
                let mean = runs.iter().map(|r| r[i]).sum::<f64>() / runs.len() as f64;
                runs.iter().map(|r| (r[i] - mean).powi(2)).sum::<f64>() / (runs.len() - 1) as f64
            })
            .sum::<f64>()
    };
    let (v50, v500) = (per_bin_variance(50), per_bin_variance(500));
    assert!(v500 < v50 / 5.0, "K=50: {v50}, K=500: {v500}");
}
