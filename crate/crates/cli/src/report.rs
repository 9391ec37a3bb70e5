//! Console table for campaign results: one row per `K`, a
//! variance/mean column pair per estimator.

use std::fmt::Write;

use nlsubspace::bench::{format_sig, TrialStats};
use nlsubspace::distributions::ModelKind;

const COL: usize = 12;

pub fn campaign_table(model: ModelKind, stats: &[TrialStats]) -> String {
    let mut columns: Vec<(String, usize)> = Vec::new();
    let mut seen = Vec::new();
    for s in stats {
        if !seen.contains(&s.estimator) {
            seen.push(s.estimator);
        }
    }
    for id in &seen {
        if model.param_count() == 1 {
            columns.push((id.to_string(), 0));
        } else {
            for (i, name) in model.param_names().iter().enumerate() {
                columns.push((format!("{id}.{name}"), i));
            }
        }
    }

    let mut out = String::new();
    let _ = write!(out, "{:<8}", "K");
    for (name, _) in &columns {
        let _ = write!(out, "{:<width$}", name, width = 2 * COL);
    }
    out.push('\n');
    let _ = write!(out, "{:<8}", "");
    for _ in &columns {
        let _ = write!(out, "{:<COL$}{:<COL$}", "variance", "mean");
    }
    out.push('\n');

    let mut ks: Vec<usize> = stats.iter().map(|s| s.k).collect();
    ks.dedup();
    for k in ks {
        let _ = write!(out, "{k:<8}");
        for (name, p) in &columns {
            let id = name.split('.').next().unwrap_or(name);
            match stats
                .iter()
                .find(|s| s.k == k && s.estimator.as_str() == id)
            {
                Some(s) => {
                    let _ = write!(
                        out,
                        "{:<COL$}{:<COL$}",
                        format_sig(s.variance[*p], 4),
                        format_sig(s.mean[*p], 5)
                    );
                }
                None => {
                    let _ = write!(out, "{:<width$}", "-", width = 2 * COL);
                }
            }
        }
        out.push('\n');
    }

    let failed: Vec<String> = stats
        .iter()
        .filter(|s| s.failures > 0)
        .map(|s| format!("{} K={}: {}/{}", s.estimator, s.k, s.failures, s.trials))
        .collect();
    if !failed.is_empty() {
        let _ = writeln!(out, "failed trials: {}", failed.join(", "));
    }
    out.lines().map(|l| format!("{}\n", l.trim_end())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlsubspace::bench::EstimatorId;

    fn stats(id: EstimatorId, k: usize, mean: Vec<f64>, failures: usize) -> TrialStats {
        let variance = vec![0.0123; mean.len()];
        TrialStats {
            estimator: id,
            k,
            n_bins: 15,
            trials: 100,
            mean,
            variance,
            failures,
        }
    }

    #[test]
    fn one_row_per_k() {
        let rows = [
            stats(EstimatorId::Subspace, 30, vec![0.99], 0),
            stats(EstimatorId::Mle, 30, vec![1.0], 0),
            stats(EstimatorId::Subspace, 50, vec![0.995], 2),
            stats(EstimatorId::Mle, 50, vec![1.001], 0),
        ];
        let t = campaign_table(ModelKind::Rayleigh, &rows);
        let lines: Vec<&str> = t.lines().collect();
        assert!(
            lines[0].starts_with("K") && lines[0].contains("subspace") && lines[0].contains("mle")
        );
        assert!(lines[2].starts_with("30") && lines[2].contains("0.99"));
        assert!(lines[3].starts_with("50") && lines[3].contains("1.001"));
        assert_eq!(lines[4], "failed trials: subspace K=50: 2/100");
    }

    #[test]
    fn two_parameter_columns() {
        let t = campaign_table(
            ModelKind::Lognormal,
            &[stats(EstimatorId::Subspace, 100, vec![1.01, 1.98], 0)],
        );
        assert!(t.contains("subspace.sigma") && t.contains("subspace.mu"));
        assert!(t.contains("1.98"));
    }
}
