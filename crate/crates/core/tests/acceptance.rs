//! Acceptance criteria A1–A11.
//!
//! Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p capgraph --test acceptance -- --nocapture --test-threads=1`
//! to see them in order.

use std::f64::consts::PI;
use std::process::Command;

use capgraph::graph::{build_graph_naive, build_graph_zoned};
use capgraph::model::{
    cap_probability_from_radius, chen_stein_bounds, expected_isolated_count,
    radius_from_probability, ModelParams,
};
use capgraph::monte_carlo::run_ensemble;
use capgraph::sphere::{angular_distance, RandomStream};

const SEED: u64 = 20_260_601;

fn verdict(id: &str, title: &str, pass: bool, detail: String) {
    println!(
        "[{}] {id} {title}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{id} {title} failed: {detail}");
}

#[test]
fn a01_edge_probability_oracle() {
    let r = 1_000_000u64;
    let mut lines = Vec::new();
    let mut pass = true;
    for (i, &p) in [0.01, 0.1, 0.3].iter().enumerate() {
        let q = 4.0 * p * (1.0 - p);
        let s = run_ensemble(&ModelParams::new(2, p).unwrap(), r, SEED + i as u64).unwrap();
        let se = (q * (1.0 - q) / r as f64).sqrt();
        let z = (s.mean_edges - q) / se;
        pass &= z.abs() <= 4.0;
        lines.push(format!(
            "p={p}: freq={:.6} q={q:.6} z={z:+.2}",
            s.mean_edges
        ));
    }
    verdict("A1", "edge probability 4p(1-p)", pass, lines.join("; "));
}

#[test]
fn a02_expected_edges() {
    let s = run_ensemble(&ModelParams::new(50, 0.01).unwrap(), 20_000, SEED).unwrap();
    // 2·50·49·0.01·0.99
    let target = 48.51;
    let se = s.se_edges();
    let pass = (s.mean_edges - target).abs() <= 3.0 * se;
    verdict(
        "A2",
        "expected edge count",
        pass,
        format!("mean={:.4} target={target} se={se:.4}", s.mean_edges),
    );
}

#[test]
fn a03_poisson_approximation() {
    let r = 100_000u64;
    let mut rows = Vec::new();
    for n in [50u64, 100, 200] {
        let params = ModelParams::from_alpha(n, 1.0, 2.5).unwrap();
        let s = run_ensemble(&params, r, SEED).unwrap();
        let bound = chen_stein_bounds(n, params.p).unwrap().bound_corrected;
        rows.push((n, s.tv_distance, s.tv_mc_error, bound));
    }
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, &(n, tv, err, bound)) in rows.iter().enumerate() {
        let within = tv <= bound + err;
        let monotone = i == 0 || {
            let (_, prev_tv, prev_err, _) = rows[i - 1];
            // Allowance for the difference of two independent estimates.
            tv <= prev_tv + err + prev_err
        };
        pass &= within && monotone;
        detail.push(format!(
            "n={n}: tv={tv:.5} mc={err:.5} bound={bound:.5} within={within} monotone={monotone}"
        ));
    }
    verdict(
        "A3",
        "Poisson approximation, alpha=2.5",
        pass,
        detail.join("; "),
    );
}

#[test]
fn a04_dense_regime() {
    let params = ModelParams::from_alpha(500, 1.0, 0.5).unwrap();
    let oracle = expected_isolated_count(500, params.p).unwrap();
    let s = run_ensemble(&params, 1_000, SEED).unwrap();
    let pass = s.frac_no_isolated >= 0.999 && s.frac_at_least_half_n_edges == 1.0;
    verdict(
        "A4",
        "dense regime alpha=0.5",
        pass,
        format!(
            "frac_no_isolated={} frac_half_n_edges={} E[isolated]={oracle:.3e}",
            s.frac_no_isolated, s.frac_at_least_half_n_edges
        ),
    );
}

#[test]
fn a05_empty_regime() {
    let params = ModelParams::from_alpha(200, 1.0, 3.5).unwrap();
    let s = run_ensemble(&params, 10_000, SEED).unwrap();
    let pass = s.frac_no_edges >= 0.998;
    verdict(
        "A5",
        "empty regime alpha=3.5",
        pass,
        format!(
            "frac_no_edges={} lambda={:.3e}",
            s.frac_no_edges, params.lambda
        ),
    );
}

#[test]
fn a06_intermediate_regime() {
    let params = ModelParams::from_alpha(200, 1.0, 1.5).unwrap();
    let oracle = expected_isolated_count(200, params.p).unwrap();
    let s = run_ensemble(&params, 1_000, SEED).unwrap();
    let se = s.se_isolated();
    let pass = s.frac_all_isolated == 0.0 && (s.mean_isolated - oracle).abs() <= 3.0 * se;
    verdict(
        "A6",
        "intermediate regime alpha=1.5",
        pass,
        format!(
            "frac_all_isolated={} mean_isolated={:.3} oracle={oracle:.3} se={se:.3}",
            s.frac_all_isolated, s.mean_isolated
        ),
    );
}

#[test]
fn a07_builder_equivalence() {
    let ns = [10usize, 100, 500];
    let ps = [1e-4, 1e-2, 0.3, 0.6];
    let mut mismatches = 0;
    let mut edges_seen = 0usize;
    for t in 0..1000u64 {
        let n = ns[t as usize % 3];
        let p = ps[(t as usize / 3) % 4];
        let a = radius_from_probability(p).unwrap();
        let centers = RandomStream::new(SEED, t).unit_vectors(n);
        let naive = build_graph_naive(&centers, a).unwrap();
        let zoned = build_graph_zoned(&centers, a).unwrap();
        edges_seen += naive.edges.len();
        if naive.edges != zoned.edges || naive.degrees != zoned.degrees {
            mismatches += 1;
        }
    }
    verdict(
        "A7",
        "zoned builder equals naive builder",
        mismatches == 0,
        format!("1000 trials, {mismatches} mismatches, {edges_seen} edges compared"),
    );
}

#[test]
fn a08_formula_layer() {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let a = PI * i as f64 / 999.0;
        let back = radius_from_probability(cap_probability_from_radius(a).unwrap()).unwrap();
        worst = worst.max((back - a).abs());
    }

    // Hand evaluation at n = 10, p = 0.01:
    //   q = 0.0396, q² = 0.00156816, λ = 45·q = 1.782, prefactor = 1/1.782
    //   bound_paper = (10·9³/2 + 45)·q² / λ = 3690·0.00156816 / 1.782 = 3.2472
    //   bound_corrected = 45·q²·(4·10 − 7) / λ = 1485·0.00156816 / 1.782 = 1.3068
    let b = chen_stein_bounds(10, 0.01).unwrap();
    let rel = |x: f64, y: f64| ((x - y) / y).abs();
    let (e_cubic, e_corr) = (rel(b.bound_paper, 3.2472), rel(b.bound_corrected, 1.3068));
    let pass = worst <= 1e-10 && e_cubic <= 1e-9 && e_corr <= 1e-9;
    verdict(
        "A8",
        "formula layer",
        pass,
        format!(
            "round-trip max err={worst:.2e}; bound_paper={} (rel {e_cubic:.1e}); bound_corrected={} (rel {e_corr:.1e})",
            b.bound_paper, b.bound_corrected
        ),
    );
}

#[test]
fn a09_sampler_uniformity() {
    let n = 1_000_000usize;
    let mut s = RandomStream::new(SEED, 0);
    let pts = s.unit_vectors(n);
    let nf = n as f64;

    let mut z: Vec<f64> = pts.iter().map(|u| u.z()).collect();
    z.sort_by(f64::total_cmp);
    let ks = z
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = (v + 1.0) / 2.0;
            (f - i as f64 / nf).max((i + 1) as f64 / nf - f)
        })
        .fold(0.0, f64::max);
    let ks_limit = 1.95 / nf.sqrt();

    // Coordinate moments: mean 0 with sd √(1/3n); variance 1/3 with
    // sd ≈ √((1/5 − 1/9)/n) since E[x⁴] = 1/5.
    let sd_mean = (1.0 / (3.0 * nf)).sqrt();
    let sd_var = ((1.0 / 5.0 - 1.0 / 9.0) / nf).sqrt();
    let mut moments_ok = true;
    let mut moment_desc = Vec::new();
    for axis in 0..3 {
        let xs: Vec<f64> = pts.iter().map(|u| u.to_array()[axis]).collect();
        let mean = xs.iter().sum::<f64>() / nf;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        let zm = mean / sd_mean;
        let zv = (var - 1.0 / 3.0) / sd_var;
        moments_ok &= zm.abs() <= 4.0 && zv.abs() <= 4.0;
        moment_desc.push(format!(
            "{}: zmean={zm:+.2} zvar={zv:+.2}",
            ["x", "y", "z"][axis]
        ));
    }
    let pass = ks <= ks_limit && moments_ok;
    verdict(
        "A9",
        "sampler uniformity",
        pass,
        format!(
            "KS={ks:.2e} (limit {ks_limit:.2e}); {}",
            moment_desc.join(", ")
        ),
    );
}

#[test]
fn a10_determinism_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in [1, 4, 8] {
        let path = dir.path().join(format!("summary-{threads}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_capgraph"))
            .args([
                "simulate", "--n", "200", "--c", "1", "--alpha", "2.5", "--trials", "20000",
            ])
            .args(["--seed", "7", "--threads", &threads.to_string()])
            .arg("--out")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    let pass = outputs.windows(2).all(|w| w[0] == w[1]);
    verdict(
        "A10",
        "byte-identical JSON for 1/4/8 threads",
        pass,
        format!("{} bytes each", outputs[0].len()),
    );
}

#[test]
fn a11_dependence_structure() {
    let r = 100_000u64;
    let p = 0.1;
    let a = radius_from_probability(p).unwrap();
    let q = 4.0 * p * (1.0 - p);
    let (mut both_shared, mut x12, mut x34, mut x12_x34) = (0u64, 0u64, 0u64, 0u64);
    for t in 0..r {
        let c = RandomStream::new(SEED, t).unit_vectors(4);
        let g = build_graph_naive(&c, a).unwrap();
        let has = |i: u32, j: u32| g.edges.binary_search(&(i, j)).is_ok();
        let (e12, e13, e34) = (has(0, 1), has(0, 2), has(2, 3));
        debug_assert_eq!(e12, angular_distance(&c[0], &c[1]) < 2.0 * a);
        both_shared += u64::from(e12 && e13);
        x12 += u64::from(e12);
        x34 += u64::from(e34);
        x12_x34 += u64::from(e12 && e34);
    }
    let rf = r as f64;
    let joint = both_shared as f64 / rf;
    let q2 = q * q;
    let z_joint = (joint - q2) / (q2 * (1.0 - q2) / rf).sqrt();

    let (m12, m34) = (x12 as f64 / rf, x34 as f64 / rf);
    let cov = x12_x34 as f64 / rf - m12 * m34;
    let corr = cov / (m12 * (1.0 - m12) * m34 * (1.0 - m34)).sqrt();
    let z_corr = corr * rf.sqrt();

    let pass = z_joint.abs() <= 4.0 && z_corr.abs() <= 4.0;
    verdict(
        "A11",
        "shared-vertex joint = q², disjoint pairs uncorrelated",
        pass,
        format!("P[x12 x13]={joint:.5} q²={q2:.5} z={z_joint:+.2}; corr(x12,x34)={corr:+.5} z={z_corr:+.2}"),
    );
}
