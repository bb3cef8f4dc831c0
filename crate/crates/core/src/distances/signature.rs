//! Matching net points of two sprinkled models through their cone signatures.

use super::search::{exact_min_distortion, local_search_min_distortion, EXACT_NET_LIMIT};
use super::{metric_distortion, Correspondence, PhiTimes};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::spacetime::{Point, Spacetime};
use crate::sprinkling::Sprinkle;
use serde::{Deserialize, Serialize};

/// Sprinkle indices in the causal past and future of a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeSignature {
    pub down: Vec<usize>,
    pub up: Vec<usize>,
}

impl ConeSignature {
    /// Size of the symmetric differences of the down and up sets.
    pub fn distance(&self, other: &ConeSignature) -> usize {
        sym_diff(&self.down, &other.down) + sym_diff(&self.up, &other.up)
    }
}

fn sym_diff(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => {
                n += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                n += 1;
                j += 1;
            }
        }
    }
    n + (a.len() - i) + (b.len() - j)
}

pub fn cone_signature<M: Spacetime + ?Sized>(model: &M, points: &[Point], p: &Point) -> ConeSignature {
    ConeSignature {
        down: (0..points.len()).filter(|&i| model.leq(&points[i], p)).collect(),
        up: (0..points.len()).filter(|&i| model.leq(p, &points[i])).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedCorrespondence {
    pub correspondence: Correspondence,
    /// Largest signature distance among fallback pairs (0 if none).
    pub slack: usize,
    pub fallback_pairs: usize,
}

/// Pairs net points whose cone signatures relative to the two sprinkles
/// coincide. Points without an exact partner are matched to the nearest
/// signature and the mismatch is reported as slack.
pub fn order_correspondence<M: Spacetime + ?Sized, N: Spacetime + ?Sized>(
    model_x: &M,
    sprinkle_x: &Sprinkle,
    net_x: &[Point],
    model_y: &N,
    sprinkle_y: &Sprinkle,
    net_y: &[Point],
) -> Result<MatchedCorrespondence> {
    if sprinkle_x.order != sprinkle_y.order {
        return Err(Error::Precondition("the two sprinkles induce different orders".into()));
    }
    if net_x.is_empty() || net_y.is_empty() {
        return Err(Error::Argument("empty net".into()));
    }
    let sx: Vec<ConeSignature> = net_x.iter().map(|p| cone_signature(model_x, &sprinkle_x.points, p)).collect();
    let sy: Vec<ConeSignature> = net_y.iter().map(|p| cone_signature(model_y, &sprinkle_y.points, p)).collect();
    let mut pairs = Vec::new();
    for (i, a) in sx.iter().enumerate() {
        for (j, b) in sy.iter().enumerate() {
            if a == b {
                pairs.push((i, j));
            }
        }
    }
    let (mut slack, mut fallback) = (0, 0);
    let nearest = |s: &ConeSignature, others: &[ConeSignature]| {
        others
            .iter()
            .enumerate()
            .map(|(j, o)| (s.distance(o), j))
            .min()
            .expect("nets are nonempty")
    };
    for (i, a) in sx.iter().enumerate() {
        if !pairs.iter().any(|p| p.0 == i) {
            let (d, j) = nearest(a, &sy);
            pairs.push((i, j));
            slack = slack.max(d);
            fallback += 1;
        }
    }
    for (j, b) in sy.iter().enumerate() {
        if !pairs.iter().any(|p| p.1 == j) {
            let (d, i) = nearest(b, &sx);
            pairs.push((i, j));
            slack = slack.max(d);
            fallback += 1;
        }
    }
    Ok(MatchedCorrespondence {
        correspondence: Correspondence::new(pairs, net_x.len(), net_y.len())?,
        slack,
        fallback_pairs: fallback,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtimesResult {
    /// Largest distortion of the shared correspondence over the three metrics.
    pub shared: f64,
    pub shared_components: [f64; 3],
    /// Combined standard error of the two entries behind `shared`.
    pub std_error: f64,
    /// Separately minimized distortion per metric, when requested.
    pub independent: Option<[f64; 3]>,
}

/// Distortion of one correspondence on all three cone metrics. With
/// `independent_budget`, each metric is also minimized on its own (exactly
/// for small nets, by local search from `corr` otherwise).
pub fn dtimes_upper(
    corr: &Correspondence,
    phi_x: &PhiTimes,
    phi_y: &PhiTimes,
    independent_budget: Option<u64>,
    seed: u64,
) -> Result<DtimesResult> {
    let n_x = phi_x.metrics[0].n;
    let n_y = phi_y.metrics[0].n;
    if corr.pairs().iter().any(|&(a, b)| a >= n_x || b >= n_y) {
        return Err(Error::Argument("correspondence does not fit the nets".into()));
    }
    let mut shared_components = [0.0; 3];
    let (mut shared, mut std_error) = (-1.0, 0.0);
    for c in 0..3 {
        let (dx, dy) = (&phi_x.metrics[c], &phi_y.metrics[c]);
        shared_components[c] = metric_distortion(corr, dx, dy);
        for &(a1, b1) in corr.pairs() {
            for &(a2, b2) in corr.pairs() {
                let diff = (dx.d[a1][a2] - dy.d[b1][b2]).abs();
                if diff > shared {
                    shared = diff;
                    std_error = phi_x.std_errors[c][a1][a2].hypot(phi_y.std_errors[c][b1][b2]);
                }
            }
        }
    }
    let independent = match independent_budget {
        None => None,
        Some(budget) => {
            let mut out = [0.0; 3];
            for (c, slot) in out.iter_mut().enumerate() {
                let (a, b) = (&phi_x.metrics[c].d, &phi_y.metrics[c].d);
                *slot = if n_x <= EXACT_NET_LIMIT && n_y <= EXACT_NET_LIMIT {
                    exact_min_distortion(a, b)?.distortion
                } else {
                    local_search_min_distortion(a, b, corr, budget, derive_seed(seed, c as u64))?.distortion
                };
            }
            Some(out)
        }
    };
    Ok(DtimesResult { shared: shared.max(0.0), shared_components, std_error, independent })
}
