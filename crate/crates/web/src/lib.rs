//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Each exported function returns a JSON string; the page parses it and draws
//! on a canvas. The `*_json` functions hold the logic so they can be tested
//! natively.

use std::collections::BTreeMap;

use capgraph::build_graph_zoned;
use capgraph::model::{self, regime_classify, ModelParams};
use capgraph::monte_carlo::{run_ensemble, PoissonTable};
use capgraph::sphere::RandomStream;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Ensembles in the browser run on one thread; keep them interactive.
pub const MAX_TRIALS: u64 = 200_000;
pub const MAX_VERTICES: u64 = 2_000;

fn params(n: u64, p: Option<f64>, c: f64, alpha: f64) -> Result<ModelParams, String> {
    if n > MAX_VERTICES {
        return Err(format!("n is limited to {MAX_VERTICES} in the demo"));
    }
    match p {
        Some(p) => ModelParams::new(n, p),
        None => ModelParams::from_alpha(n, c, alpha),
    }
    .map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct PmfPoint {
    pub k: u64,
    pub empirical: f64,
    pub poisson: f64,
}

#[derive(Debug, Serialize)]
pub struct Distribution {
    pub params: ModelParams,
    pub trials: u64,
    pub points: Vec<PmfPoint>,
    pub mean_edges: f64,
    pub var_edges: f64,
    pub tv_distance: f64,
    pub tv_mc_error: f64,
    pub bound_corrected: Option<f64>,
    pub bound_paper: Option<f64>,
}

/// Empirical edge-count pmf next to Poisson(λ) for `p = c/n^α`.
pub fn edge_distribution_json(
    n: u64,
    c: f64,
    alpha: f64,
    trials: u64,
    seed: u64,
) -> Result<String, String> {
    if trials > MAX_TRIALS {
        return Err(format!("trials is limited to {MAX_TRIALS} in the demo"));
    }
    let m = params(n, None, c, alpha)?;
    let s = run_ensemble(&m, trials, seed).map_err(|e| e.to_string())?;
    let poisson = PoissonTable::new(m.lambda).map_err(|e| e.to_string())?;
    let hi = s
        .pmf
        .keys()
        .next_back()
        .copied()
        .unwrap_or(0)
        .max(poisson.k_max());
    let lo = s.pmf.keys().next().copied().unwrap_or(0);
    // Trim the plotted window to where either curve has visible mass.
    let lo = (0..=lo)
        .find(|&k| poisson.pmf(k) > 1e-6)
        .unwrap_or(lo)
        .min(lo);
    let points = (lo..=hi)
        .map(|k| PmfPoint {
            k,
            empirical: s.pmf.get(&k).copied().unwrap_or(0.0),
            poisson: poisson.pmf(k),
        })
        .collect();
    let bounds = (n >= 2)
        .then(|| model::chen_stein_bounds(n, m.p))
        .transpose()
        .map_err(|e| e.to_string())?;
    let out = Distribution {
        params: m,
        trials,
        points,
        mean_edges: s.mean_edges,
        var_edges: s.var_edges,
        tv_distance: s.tv_distance,
        tv_mc_error: s.tv_mc_error,
        bound_corrected: bounds.map(|b| b.bound_corrected),
        bound_paper: bounds.map(|b| b.bound_paper),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct Regime {
    pub alpha: f64,
    pub claims: Vec<&'static str>,
    pub expected_edges: f64,
    pub expected_isolated: f64,
    pub isolated_exists_bound: Option<f64>,
    pub edge_existence_bound: f64,
}

/// Closed-form curves over an α range at fixed `n` and `c`.
pub fn regime_curves_json(
    n: u64,
    c: f64,
    alpha_min: f64,
    alpha_max: f64,
    steps: u32,
) -> Result<String, String> {
    if steps < 2 || !alpha_min.is_finite() || !alpha_max.is_finite() || alpha_max <= alpha_min {
        return Err("need steps ≥ 2 and alpha_max > alpha_min".into());
    }
    let mut rows = Vec::with_capacity(steps as usize);
    for i in 0..steps {
        let alpha = alpha_min + (alpha_max - alpha_min) * i as f64 / (steps - 1) as f64;
        let m = params(n, None, c, alpha)?;
        let err = |e: capgraph::Error| e.to_string();
        rows.push(Regime {
            alpha,
            claims: regime_classify(alpha).iter().map(|c| c.label()).collect(),
            expected_edges: m.lambda,
            expected_isolated: model::expected_isolated_count(n, m.p).map_err(err)?,
            isolated_exists_bound: (n >= 2)
                .then(|| model::isolated_exists_upper_bound(n, m.p))
                .transpose()
                .map_err(err)?,
            edge_existence_bound: model::edge_existence_upper_bound(n, m.p).map_err(err)?,
        });
    }
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct SampledGraph {
    pub a: f64,
    pub centers: Vec<[f64; 3]>,
    pub edges: Vec<(u32, u32)>,
    pub degree_histogram: BTreeMap<u32, u64>,
    pub isolated: usize,
}

/// One realization for drawing on the sphere.
pub fn sample_graph_json(n: u64, p: f64, seed: u64) -> Result<String, String> {
    let m = params(n, Some(p), 0.0, 0.0)?;
    let centers = RandomStream::new(seed, 0).unit_vectors(n as usize);
    let g = build_graph_zoned(&centers, m.a).map_err(|e| e.to_string())?;
    let out = SampledGraph {
        a: g.a,
        centers: g.centers.iter().map(|u| u.to_array()).collect(),
        degree_histogram: g.degree_histogram(),
        isolated: g.isolated_count(),
        edges: g.edges,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn edge_distribution(
    n: u32,
    c: f64,
    alpha: f64,
    trials: u32,
    seed: u32,
) -> Result<String, JsValue> {
    edge_distribution_json(n.into(), c, alpha, trials.into(), seed.into())
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn regime_curves(
    n: u32,
    c: f64,
    alpha_min: f64,
    alpha_max: f64,
    steps: u32,
) -> Result<String, JsValue> {
    regime_curves_json(n.into(), c, alpha_min, alpha_max, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sample_graph(n: u32, p: f64, seed: u32) -> Result<String, JsValue> {
    sample_graph_json(n.into(), p, seed.into()).map_err(|e| JsValue::from_str(&e))
}
