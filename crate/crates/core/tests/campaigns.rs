use nlsubspace::bench::{
    campaign_csv, run_campaign, sweep_bins, sweep_record_size, CampaignConfig, EstimatorId,
    TrialStats,
};
use nlsubspace::distributions::{ModelKind, ParamVector};

fn rayleigh_config(sigma0: f64, record_sizes: Vec<usize>, trials: usize) -> CampaignConfig {
    let mut cfg = CampaignConfig::new(
        ModelKind::Rayleigh,
        ParamVector::sigma(sigma0).unwrap(),
        record_sizes,
    );
    cfg.trials = trials;
    cfg.master_seed = 77;
    cfg
}

#[test]
fn record_size_sweep_settles_near_truth() {
    let rows = sweep_record_size(&rayleigh_config(4.0, vec![25, 50, 100, 200, 400], 2000)).unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows.iter().filter(|r| r.k >= 100) {
        assert!(
            (r.mean[0] - 4.0).abs() < 0.2,
            "K={}: mean {}",
            r.k,
            r.mean[0]
        );
    }
    let inversions = rows
        .windows(2)
        .filter(|w| w[1].variance[0] > w[0].variance[0])
        .count();
    assert!(inversions <= 1, "{rows:?}");
}

#[test]
fn bin_sweep_is_flat_and_larger_records_are_tighter() {
    let bins = [10, 15, 25, 40, 60];
    let big = sweep_bins(&rayleigh_config(4.0, vec![500], 2000), &bins).unwrap();
    let small = sweep_bins(&rayleigh_config(4.0, vec![50], 2000), &bins).unwrap();
    assert_eq!(big.len(), bins.len());
    for (b, s) in big.iter().zip(&small) {
        assert_eq!(b.n_bins, s.n_bins);
        assert!(
            (b.mean[0] - 4.0).abs() < 0.4,
            "N={}: mean {}",
            b.n_bins,
            b.mean[0]
        );
        assert!(
            b.variance[0] < s.variance[0],
            "N={}: {} vs {}",
            b.n_bins,
            b.variance[0],
            s.variance[0]
        );
    }
}

#[test]
fn single_entry_sweeps_give_one_row() {
    assert_eq!(
        sweep_record_size(&rayleigh_config(1.0, vec![40], 20))
            .unwrap()
            .len(),
        1
    );
    assert_eq!(
        sweep_bins(&rayleigh_config(1.0, vec![40], 20), &[15])
            .unwrap()
            .len(),
        1
    );
}

fn all_estimators(trials: usize) -> Vec<TrialStats> {
    let mut cfg = rayleigh_config(1.0, vec![5, 30], trials);
    cfg.estimators = EstimatorId::ALL.to_vec();
    run_campaign(&cfg).unwrap()
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let a = campaign_csv(ModelKind::Rayleigh, &all_estimators(200));
    let b = campaign_csv(ModelKind::Rayleigh, &all_estimators(200));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 1 + 2 * EstimatorId::ALL.len());
}

#[test]
fn failures_and_successes_account_for_every_trial() {
    for s in all_estimators(150) {
        assert_eq!(s.trials, 150);
        assert!(s.failures <= s.trials);
        assert_eq!(s.successes() + s.failures, s.trials);
        assert!(s.variance.iter().all(|v| *v >= 0.0));
    }
}

#[test]
fn lognormal_campaign_recovers_both_parameters() {
    let model = ModelKind::Lognormal;
    let mut cfg = CampaignConfig::new(
        model,
        ParamVector::new(model, &[1.0, 2.0]).unwrap(),
        vec![100],
    );
    cfg.trials = 200;
    cfg.master_seed = 5;
    let s = &run_campaign(&cfg).unwrap()[0];
    assert!(
        (s.mean[0] - 1.0).abs() < 0.1 && (s.mean[1] - 2.0).abs() < 0.1,
        "{s:?}"
    );
    let csv = campaign_csv(model, std::slice::from_ref(s));
    assert!(csv.contains("subspace.sigma,100,15,200,"));
    assert!(csv.contains("subspace.mu,100,15,200,"));
}
