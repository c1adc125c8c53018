//! Statistical properties of the sampler, builders and ensembles at the sizes
//! used by the operation examples.

use capgraph::graph::build_graph_zoned_with_stats;
use capgraph::model::{expected_isolated_count, radius_from_probability, ModelParams};
use capgraph::monte_carlo::{
    coverage_probability, regime_sweep, run_ensemble, SweepConfig, Verdict,
};
use capgraph::sphere::RandomStream;
use capgraph::Claim;

#[test]
fn sample_mean_vector_near_origin() {
    let mut s = RandomStream::new(42, 0);
    let mut sum = [0.0f64; 3];
    let n = 1_000_000;
    for _ in 0..n {
        let u = s.next_unit_vector().to_array();
        for k in 0..3 {
            sum[k] += u[k];
        }
    }
    let norm = sum
        .iter()
        .map(|x| (x / n as f64).powi(2))
        .sum::<f64>()
        .sqrt();
    assert!(norm <= 0.005, "mean vector norm {norm}");
}

#[test]
fn mean_isolated_matches_exact_formula() {
    let params = ModelParams::new(50, 0.01).unwrap();
    let s = run_ensemble(&params, 20_000, 13).unwrap();
    let oracle = expected_isolated_count(50, 0.01).unwrap();
    assert!(
        (s.mean_isolated - oracle).abs() <= 3.0 * s.se_isolated(),
        "{} vs {oracle} (se {})",
        s.mean_isolated,
        s.se_isolated()
    );
    assert!((s.mean_edges - 48.51).abs() <= 3.0 * s.se_edges());
}

#[test]
fn zoned_builder_evaluates_a_quarter_of_pairs_or_less() {
    let a = radius_from_probability(1e-4).unwrap();
    let all = 500 * 499 / 2;
    for seed in 0..20 {
        let centers = RandomStream::new(seed, 0).unit_vectors(500);
        let (_, stats) = build_graph_zoned_with_stats(&centers, a).unwrap();
        assert!(
            stats.distance_evaluations * 4 <= all,
            "seed {seed}: {stats:?}"
        );
    }
}

#[test]
fn regime_sweep_examples() {
    let cfg = |n, alpha, r| SweepConfig {
        n_list: vec![n],
        alpha_grid: vec![alpha],
        c: 1.0,
        r,
        master_seed: 99,
        delta: 0.01,
    };

    let dense = regime_sweep(&cfg(500, 0.5, 1_000)).unwrap();
    let row = &dense.rows[0];
    assert!(row.summary.frac_no_isolated >= 0.999);
    assert_eq!(row.verdicts[&Claim::NoIsolatedAs], Verdict::Pass);
    assert_eq!(row.verdicts[&Claim::AtLeastHalfNEdges], Verdict::Pass);

    let empty = regime_sweep(&cfg(200, 3.5, 10_000)).unwrap();
    let row = &empty.rows[0];
    assert!(row.summary.frac_no_edges >= 0.998);
    assert_eq!(row.verdicts[&Claim::NoEdgesAs], Verdict::Pass);
    assert_eq!(row.verdicts[&Claim::AllIsolatedAs], Verdict::Pass);

    let mid = regime_sweep(&cfg(200, 1.5, 1_000)).unwrap();
    let row = &mid.rows[0];
    assert_eq!(row.summary.frac_all_isolated, 0.0);
    let oracle = expected_isolated_count(200, row.p).unwrap();
    let se = (row.summary.var_isolated / 1_000.0).sqrt();
    assert!((row.summary.mean_isolated - oracle).abs() <= 3.0 * se);
    assert_eq!(
        row.verdicts[&Claim::NotAllIsolatedEventually],
        Verdict::Pass
    );
    assert!(dense.all_pass() && empty.all_pass() && mid.all_pass());
}

#[test]
fn coverage_grows_across_threshold() {
    let below = ModelParams::new(200, 0.005).unwrap();
    let above = ModelParams::new(200, 0.03).unwrap();
    let pb = coverage_probability(&below, 200, 5000, 3).unwrap();
    let pa = coverage_probability(&above, 200, 5000, 3).unwrap();
    assert!(pa > pb, "p=0.03 → {pa}, p=0.005 → {pb}");
}
