//! Random intersection graphs generated by spherical caps.
//!
//! `N` caps of area `4πp` are dropped with independent uniform centers on the
//! unit sphere; two vertices are adjacent when their caps overlap. The crate
//! provides the closed-form quantities of the model ([`model`]), seeded
//! sampling on the sphere ([`sphere`]), two equivalent graph builders
//! ([`graph`]) and Monte Carlo ensembles that compare the edge count against
//! its Poisson approximation ([`monte_carlo`]). The `capgraph` binary wraps
//! all of it behind the [`cli`] module.

pub mod error;
pub mod graph;
pub mod model;
pub mod monte_carlo;
pub mod sphere;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use graph::{build_graph_naive, build_graph_zoned, CapGraph};
pub use model::{ChenSteinBound, Claim, ModelParams};
pub use monte_carlo::{run_ensemble, run_trial, EnsembleSummary, TrialStats};
pub use sphere::{angular_distance, RandomStream, UnitVector};
