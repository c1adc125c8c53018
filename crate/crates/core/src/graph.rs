//! Cap-intersection graph construction.
//!
//! Caps are open: vertices `i` and `j` are adjacent iff the angular distance
//! between their centers is strictly less than `2a`. Both builders evaluate
//! the same predicate and return the same normalized, sorted edge list.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Result};
use crate::sphere::{angular_distance, UnitVector};

/// Below this many vertices the zoned builder defers to the naive one.
pub const ZONED_MIN_VERTICES: usize = 64;

/// Narrowest latitude band used by the zoned builder.
pub const MIN_BAND_WIDTH: f64 = PI / 64.0;

// Added to the band width so that float rounding in the latitude cannot push
// a qualifying pair two bands apart.
const BAND_SLACK: f64 = 1e-9;

/// One realization of `G_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapGraph {
    pub n: usize,
    /// Angular radius of every cap.
    pub a: f64,
    pub centers: Vec<UnitVector>,
    /// Pairs `(i, j)` with `i < j`, ascending lexicographically.
    pub edges: Vec<(u32, u32)>,
    pub degrees: Vec<u32>,
}

/// Instrumentation from a zoned build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildStats {
    pub distance_evaluations: u64,
    pub bands: usize,
    pub used_fallback: bool,
}

#[inline]
fn caps_intersect(u: &UnitVector, v: &UnitVector, a: f64) -> bool {
    angular_distance(u, v) < 2.0 * a
}

fn check_radius(a: f64) -> Result<f64> {
    check_range("a", a, 0.0, PI, "[0, π]")
}

impl CapGraph {
    fn from_edges(centers: Vec<UnitVector>, a: f64, mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable();
        let mut degrees = vec![0u32; centers.len()];
        for &(i, j) in &edges {
            degrees[i as usize] += 1;
            degrees[j as usize] += 1;
        }
        Self {
            n: centers.len(),
            a,
            centers,
            edges,
            degrees,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn isolated_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d == 0).count()
    }

    /// Degree → number of vertices with that degree.
    pub fn degree_histogram(&self) -> BTreeMap<u32, u64> {
        let mut hist = BTreeMap::new();
        for &d in &self.degrees {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }

    /// Writes one `i j` line per edge, `i < j`, in ascending order.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for &(i, j) in &self.edges {
            writeln!(out, "{i} {j}")?;
        }
        Ok(())
    }

    pub fn edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

/// Tests all `n(n−1)/2` pairs.
pub fn build_graph_naive(centers: &[UnitVector], a: f64) -> Result<CapGraph> {
    let a = check_radius(a)?;
    Ok(naive(centers, a).0)
}

fn naive(centers: &[UnitVector], a: f64) -> (CapGraph, u64) {
    let mut edges = Vec::new();
    let mut evaluations = 0u64;
    for (i, u) in centers.iter().enumerate() {
        for (j, v) in centers.iter().enumerate().skip(i + 1) {
            evaluations += 1;
            if caps_intersect(u, v, a) {
                edges.push((i as u32, j as u32));
            }
        }
    }
    (
        CapGraph::from_edges(centers.to_vec(), a, edges),
        evaluations,
    )
}

/// Same output as [`build_graph_naive`], testing only pairs in the same or
/// adjacent latitude bands.
pub fn build_graph_zoned(centers: &[UnitVector], a: f64) -> Result<CapGraph> {
    Ok(build_graph_zoned_with_stats(centers, a)?.0)
}

pub fn build_graph_zoned_with_stats(
    centers: &[UnitVector],
    a: f64,
) -> Result<(CapGraph, BuildStats)> {
    let a = check_radius(a)?;
    if 2.0 * a >= FRAC_PI_2 || centers.len() < ZONED_MIN_VERTICES {
        let (g, distance_evaluations) = naive(centers, a);
        return Ok((
            g,
            BuildStats {
                distance_evaluations,
                bands: 1,
                used_fallback: true,
            },
        ));
    }
    Ok(banded(centers, a))
}

/// Latitude-band index without the fallback rules.
///
/// Two points whose latitudes differ by `Δφ` are at least `Δφ` apart, so with
/// bands at least `2a` wide only pairs in the same or neighboring bands can
/// be adjacent.
pub(crate) fn banded(centers: &[UnitVector], a: f64) -> (CapGraph, BuildStats) {
    let width = (2.0 * a + BAND_SLACK).max(MIN_BAND_WIDTH);
    let band_count = ((PI / width).ceil() as usize).max(1);
    let mut bands: Vec<Vec<u32>> = vec![Vec::new(); band_count];
    for (i, u) in centers.iter().enumerate() {
        let b = ((u.latitude() + FRAC_PI_2) / width) as usize;
        bands[b.min(band_count - 1)].push(i as u32);
    }

    let mut edges = Vec::new();
    let mut evaluations = 0u64;
    let mut test = |i: u32, j: u32, edges: &mut Vec<(u32, u32)>| {
        evaluations += 1;
        if caps_intersect(&centers[i as usize], &centers[j as usize], a) {
            edges.push((i.min(j), i.max(j)));
        }
    };
    for b in 0..band_count {
        let here = &bands[b];
        for (k, &i) in here.iter().enumerate() {
            for &j in &here[k + 1..] {
                test(i, j, &mut edges);
            }
        }
        if let Some(next) = bands.get(b + 1) {
            for &i in here {
                for &j in next {
                    test(i, j, &mut edges);
                }
            }
        }
    }

    (
        CapGraph::from_edges(centers.to_vec(), a, edges),
        BuildStats {
            distance_evaluations: evaluations,
            bands: band_count,
            used_fallback: false,
        },
    )
}

pub fn isolated_count(g: &CapGraph) -> usize {
    g.isolated_count()
}

pub fn degree_histogram(g: &CapGraph) -> BTreeMap<u32, u64> {
    g.degree_histogram()
}
