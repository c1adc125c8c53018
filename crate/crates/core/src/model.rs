//! Closed-form quantities of the spherical-cap intersection graph.
//!
//! A cap of angular radius `a` covers the fraction `p = sin²(a/2)` of the
//! sphere. Two caps of radius `a` overlap iff their centers are closer than
//! `2a`, so the pairwise edge probability is the area fraction of the doubled
//! cap, `q = sin²(a) = 4p(1 − p)`, valid while the doubled cap does not exceed
//! a hemisphere (`p ≤ 1/2`). Past that point every pair is adjacent and
//! `q = 1`.
//!
//! All functions are pure.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

fn check_p(p: f64) -> Result<f64> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")
}

/// Area fraction `sin²(a/2)` of a cap with angular radius `a`.
pub fn cap_probability_from_radius(a: f64) -> Result<f64> {
    let a = check_range("a", a, 0.0, PI, "[0, π]")?;
    let s = (a / 2.0).sin();
    Ok((s * s).min(1.0))
}

/// Angular radius `2·asin(√p)` of a cap covering the fraction `p`.
pub fn radius_from_probability(p: f64) -> Result<f64> {
    let p = check_p(p)?;
    Ok((2.0 * p.sqrt().asin()).min(PI))
}

/// Probability that two independent caps of area fraction `p` overlap.
pub fn edge_probability(p: f64) -> Result<f64> {
    let p = check_p(p)?;
    if p > 0.5 {
        Ok(1.0)
    } else {
        Ok(4.0 * p * (1.0 - p))
    }
}

/// Number of unordered vertex pairs, `n(n − 1)/2`, as a float.
pub fn pair_count(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        (n as u128 * (n as u128 - 1) / 2) as f64
    }
}

/// `E|E| = [n(n−1)/2]·q`; this is also the Poisson intensity λ.
pub fn expected_edge_count(n: u64, p: f64) -> Result<f64> {
    Ok(pair_count(n) * edge_probability(p)?)
}

/// Same as [`expected_edge_count`].
pub fn poisson_lambda(n: u64, p: f64) -> Result<f64> {
    expected_edge_count(n, p)
}

/// Exact expected number of isolated vertices, `n(1 − q)^(n−1)`.
///
/// Given the center of one cap, the other `n − 1` centers land in its doubled
/// cap independently, so isolation of a fixed vertex has probability
/// `(1 − q)^(n−1)`.
pub fn expected_isolated_count(n: u64, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::TooFewVertices { n, min: 1 });
    }
    let q = edge_probability(p)?;
    Ok(n as f64 * (1.0 - q).powf((n - 1) as f64))
}

/// Raw union bound `(n−1)·exp(−4(n−1)p(1−p))` on P[some vertex is isolated].
/// May exceed 1.
pub fn isolated_exists_union_bound(n: u64, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewVertices { n, min: 2 });
    }
    let p = check_p(p)?;
    let m = (n - 1) as f64;
    Ok(m * (-4.0 * m * p * (1.0 - p)).exp())
}

/// [`isolated_exists_union_bound`] clamped to `[0, 1]`.
pub fn isolated_exists_upper_bound(n: u64, p: f64) -> Result<f64> {
    Ok(isolated_exists_union_bound(n, p)?.min(1.0))
}

/// `exp(−4(n−1)²p(1−p))`, the product formula for P[every vertex isolated].
///
/// The product treats the isolation events as independent, which they are
/// not, so this number is reported as the formula value only. Never rely on
/// it as a proven bound.
pub fn all_isolated_upper_bound(n: u64, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewVertices { n, min: 2 });
    }
    let p = check_p(p)?;
    let m = (n - 1) as f64;
    Ok((-4.0 * m * m * p * (1.0 - p)).exp())
}

/// First-moment bound `P[E ≠ ∅] ≤ min(1, E|E|)`.
pub fn edge_existence_upper_bound(n: u64, p: f64) -> Result<f64> {
    Ok(expected_edge_count(n, p)?.min(1.0))
}

/// `Np / ln N`, compared against 1/2 for the coverage threshold. `None` for
/// `n < 2` where `ln N` vanishes.
pub fn coverage_ratio(n: u64, p: f64) -> Result<Option<f64>> {
    let p = check_p(p)?;
    if n < 2 {
        return Ok(None);
    }
    let n = n as f64;
    Ok(Some(n * p / n.ln()))
}

/// Terms of the Chen–Stein total-variation bound for the edge count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChenSteinBound {
    pub lambda: f64,
    /// `min(3, 1/λ)`, taken as 3 when λ = 0.
    pub prefactor: f64,
    /// Σ_e Σ_{f ∈ N(e)} p_e·p_f with N(e) the pairs sharing a vertex with e
    /// (including e).
    pub b1: f64,
    /// Σ_e Σ_{f ∈ N(e) \ {e}} p_ef.
    pub b2: f64,
    /// `prefactor·[(N(N−1)³/2)·q² + (N(N−1)/2)·q²]`, the closed form
    /// with the cubic first term, kept for comparison.
    pub bound_paper: f64,
    /// `prefactor·(b1 + b2) = prefactor·(N(N−1)/2)·q²·(4N−7)`.
    pub bound_corrected: f64,
}

/// Chen–Stein bounds on `d_TV(|E|, Poisson(λ))`.
///
/// The corrected neighborhood of a pair `{i, j}` is every pair sharing a
/// vertex with it: `2(n − 2)` pairs besides itself. Indicators of disjoint
/// pairs are independent, so the third Chen–Stein term vanishes. For two
/// pairs sharing a center, conditioning on that center makes both
/// memberships independent, hence `p_ef = q²`.
pub fn chen_stein_bounds(n: u64, p: f64) -> Result<ChenSteinBound> {
    if n < 2 {
        return Err(Error::TooFewVertices { n, min: 2 });
    }
    let q = edge_probability(p)?;
    let pairs = pair_count(n);
    let lambda = pairs * q;
    let prefactor = if lambda == 0.0 {
        3.0
    } else {
        (1.0 / lambda).min(3.0)
    };
    let nf = n as f64;
    let q2 = q * q;

    let b1 = pairs * (2.0 * nf - 3.0) * q2;
    let b2 = pairs * 2.0 * (nf - 2.0) * q2;

    let cubic_term = nf * (nf - 1.0).powi(3) / 2.0 * q2;
    let bound_paper = prefactor * (cubic_term + pairs * q2);
    let bound_corrected = prefactor * (pairs * q2 * (4.0 * nf - 7.0));

    Ok(ChenSteinBound {
        lambda,
        prefactor,
        b1: b1.max(0.0),
        b2: b2.max(0.0),
        bound_paper: bound_paper.max(0.0),
        bound_corrected: bound_corrected.max(0.0),
    })
}

/// Model parameters `(N, p)` with their derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u64,
    /// Cap area fraction; the cap area is `4πp`.
    pub p: f64,
    /// Angular radius in radians.
    pub a: f64,
    /// Pairwise edge probability.
    pub q: f64,
    /// Expected edge count / Poisson intensity.
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
}

impl ModelParams {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        let p = check_p(p)?;
        let q = edge_probability(p)?;
        Ok(Self {
            n,
            p,
            a: radius_from_probability(p)?,
            q,
            lambda: pair_count(n) * q,
            c: None,
            alpha: None,
        })
    }

    /// `p = min(1, c·n^(−α))`.
    pub fn from_alpha(n: u64, c: f64, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewVertices { n, min: 1 });
        }
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::OutOfRange {
                name: "c",
                value: c,
                range: "(0, ∞)",
            });
        }
        if !alpha.is_finite() {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                range: "finite reals",
            });
        }
        let p = (c * (n as f64).powf(-alpha)).clamp(0.0, 1.0);
        Ok(Self {
            c: Some(c),
            alpha: Some(alpha),
            ..Self::new(n, p)?
        })
    }
}

/// Shorthand for [`ModelParams::from_alpha`].
pub fn params_from_alpha(n: u64, c: f64, alpha: f64) -> Result<ModelParams> {
    ModelParams::from_alpha(n, c, alpha)
}

/// Asymptotic statements about `G_N` under `p = c/N^α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Claim {
    /// α < 1: no isolated vertex, almost surely.
    NoIsolatedAs,
    /// α < 1: at least N/2 edges, almost surely.
    AtLeastHalfNEdges,
    /// α < 2: eventually not every vertex is isolated.
    NotAllIsolatedEventually,
    /// α > 2: d_TV(|E|, Poisson(λ)) → 0.
    PoissonTvConverges,
    /// α > 3: every vertex isolated, almost surely.
    AllIsolatedAs,
    /// α > 3: no edges, almost surely.
    NoEdgesAs,
    /// α ∈ {1, 2, 3}: no claim covers the boundary.
    UnresolvedBoundary,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::NoIsolatedAs,
        Claim::AtLeastHalfNEdges,
        Claim::NotAllIsolatedEventually,
        Claim::PoissonTvConverges,
        Claim::AllIsolatedAs,
        Claim::NoEdgesAs,
        Claim::UnresolvedBoundary,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Claim::NoIsolatedAs => "NO_ISOLATED_AS",
            Claim::AtLeastHalfNEdges => "AT_LEAST_HALF_N_EDGES",
            Claim::NotAllIsolatedEventually => "NOT_ALL_ISOLATED_EVENTUALLY",
            Claim::PoissonTvConverges => "POISSON_TV_CONVERGES",
            Claim::AllIsolatedAs => "ALL_ISOLATED_AS",
            Claim::NoEdgesAs => "NO_EDGES_AS",
            Claim::UnresolvedBoundary => "UNRESOLVED_BOUNDARY",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Claims that apply at exponent `alpha`.
pub fn regime_classify(alpha: f64) -> BTreeSet<Claim> {
    let mut claims = BTreeSet::new();
    if alpha < 1.0 {
        claims.insert(Claim::NoIsolatedAs);
        claims.insert(Claim::AtLeastHalfNEdges);
    }
    if alpha < 2.0 {
        claims.insert(Claim::NotAllIsolatedEventually);
    }
    if alpha > 2.0 {
        claims.insert(Claim::PoissonTvConverges);
    }
    if alpha > 3.0 {
        claims.insert(Claim::AllIsolatedAs);
        claims.insert(Claim::NoEdgesAs);
    }
    if alpha == 1.0 || alpha == 2.0 || alpha == 3.0 {
        claims.insert(Claim::UnresolvedBoundary);
    }
    claims
}
