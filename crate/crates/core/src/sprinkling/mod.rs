//! Uniform-by-volume sampling and the statistics built on it.

mod covering;
mod uniformity;

pub use covering::{covering_radius, hausdorff_covering_prefix, hausdorff_covering_sequence, CoveringSequence};
pub use uniformity::{
    check_s_uniform, check_s_uniform_regions, probe_regions, random_diamonds, volume_law_check, ProbeFamily, Tolerance,
    UniformityReport, VolumeLawReport, VolumeLawRow,
};

use crate::error::{Error, Result};
use crate::order::{canonical_class, ClassDistribution, FiniteOrder};
use crate::parallel::map_indexed;
use crate::rng::{derive_seed, stream, substream};
use crate::spacetime::{Point, Spacetime};
use crate::stats::Estimate;
use rand::seq::SliceRandom;
use std::collections::BTreeMap;

/// Cap on redraws after coincident points.
const MAX_RESAMPLES: u32 = 16;

/// `K` uniform points together with the order they induce.
#[derive(Debug, Clone, PartialEq)]
pub struct Sprinkle {
    pub seed: u64,
    pub points: Vec<Point>,
    pub order: FiniteOrder,
    /// Redraws caused by coincident points.
    pub resamples: u32,
}

impl Sprinkle {
    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// CSV with columns `index,x0,x1,…` (time first).
    pub fn points_csv(&self) -> String {
        points_csv(&self.points)
    }
}

/// `n` independent uniform points drawn from the stream seeded by `seed`.
pub fn sprinkle_points<M: Spacetime + ?Sized>(model: &M, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = stream(seed);
    (0..n).map(|_| model.sample_uniform(&mut rng)).collect()
}

pub fn sprinkle<M: Spacetime + ?Sized>(model: &M, k: usize, seed: u64) -> Result<Sprinkle> {
    if k == 0 {
        return Err(Error::Argument("a sprinkle needs K ≥ 1".into()));
    }
    let mut draw_seed = seed;
    for resamples in 0..=MAX_RESAMPLES {
        let points = sprinkle_points(model, k, draw_seed);
        match FiniteOrder::from_points(model, &points) {
            Ok(order) => return Ok(Sprinkle { seed, points, order, resamples }),
            Err(Error::DegenerateSample(_)) => draw_seed = derive_seed(seed, resamples as u64 + 1),
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateSample(format!("{MAX_RESAMPLES} redraws all produced coincident points")))
}

pub fn points_csv(points: &[Point]) -> String {
    let dim = points.first().map_or(0, |p| p.dim());
    let mut s = String::from("index");
    for i in 0..dim {
        s.push_str(&format!(",x{i}"));
    }
    s.push('\n');
    for (i, p) in points.iter().enumerate() {
        s.push_str(&i.to_string());
        for c in p.coords() {
            s.push_str(&format!(",{c}"));
        }
        s.push('\n');
    }
    s
}

pub fn points_from_csv(text: &str) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1).filter(|(_, l)| !l.trim().is_empty()) {
        let err = |msg: String| Error::Parse { line: n + 1, msg };
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() < 2 || fields.len() > 5 {
            return Err(err(format!("expected 2 to 5 fields, got {}", fields.len())));
        }
        let coords = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| err(format!("bad coordinate {f:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        out.push(Point::new(&coords));
    }
    Ok(out)
}

/// Empirical distribution of order classes over `n_trials` sprinkles of `K`
/// points; trial `i` uses seed `derive_seed(seed, i)`.
pub fn estimate_class_distribution<M: Spacetime + Sync + ?Sized>(
    model: &M,
    k: usize,
    n_trials: u64,
    seed: u64,
) -> Result<ClassDistribution> {
    class_distribution_impl(model, k, n_trials, seed, None)
}

/// As [`estimate_class_distribution`], but each sprinkle is relabeled by a
/// random permutation drawn from `relabel_seed` before classification.
pub fn estimate_class_distribution_relabeled<M: Spacetime + Sync + ?Sized>(
    model: &M,
    k: usize,
    n_trials: u64,
    seed: u64,
    relabel_seed: u64,
) -> Result<ClassDistribution> {
    class_distribution_impl(model, k, n_trials, seed, Some(relabel_seed))
}

pub const MAX_DISTRIBUTION_SIZE: usize = 8;

fn class_distribution_impl<M: Spacetime + Sync + ?Sized>(
    model: &M,
    k: usize,
    n_trials: u64,
    seed: u64,
    relabel: Option<u64>,
) -> Result<ClassDistribution> {
    if k == 0 || k > MAX_DISTRIBUTION_SIZE {
        return Err(Error::Capability(format!(
            "class distributions support 1 ≤ K ≤ {MAX_DISTRIBUTION_SIZE}, got K = {k}"
        )));
    }
    if n_trials == 0 {
        return Err(Error::Argument("n_trials must be at least 1".into()));
    }
    let classes = map_indexed(n_trials, |i| {
        let s = sprinkle(model, k, derive_seed(seed, i))?;
        let order = match relabel {
            Some(r) => {
                let mut sigma: Vec<usize> = (0..k).collect();
                sigma.shuffle(&mut substream(r, i));
                s.order.permute(&sigma)?
            }
            None => s.order,
        };
        canonical_class(&order)
    });
    let mut counts = BTreeMap::new();
    for c in classes {
        *counts.entry(c?).or_insert(0u64) += 1;
    }
    ClassDistribution::from_counts(k, counts)
}

/// Σ |p − q| between two class distributions of the same `K`.
pub fn l1_distance(p: &ClassDistribution, q: &ClassDistribution) -> Result<f64> {
    p.l1_distance(q)
}

/// Fraction of sprinkles of `K` points whose order is a chain.
pub fn total_order_probability<M: Spacetime + Sync + ?Sized>(
    model: &M,
    k: usize,
    n_trials: u64,
    seed: u64,
) -> Result<Estimate> {
    if n_trials == 0 {
        return Err(Error::Argument("n_trials must be at least 1".into()));
    }
    let hits = map_indexed(n_trials, |i| sprinkle(model, k, derive_seed(seed, i)).map(|s| s.order.is_chain()));
    let mut n = 0;
    for h in hits {
        n += u64::from(h?);
    }
    Ok(Estimate::proportion(n, n_trials))
}
