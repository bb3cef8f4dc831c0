//! Monte Carlo volumes of the cells cut out by the light cones of net points.

use super::FiniteMetric;
use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::rng::substream;
use crate::spacetime::{Point, Spacetime};
use crate::stats::Estimate;
use serde::{Deserialize, Serialize};

/// The three exponents `r` of the cone metrics that make up the triple.
pub const PHI_EXPONENTS: [f64; 3] = [-0.5, 0.0, 0.5];

const CHUNK: u64 = 4096;

/// 0 = past of `x`, 1 = spacelike to it, 2 = future of it.
fn cone_class<M: Spacetime + ?Sized>(model: &M, x: &Point, z: &Point) -> usize {
    if model.leq(z, x) {
        0
    } else if model.leq(x, z) {
        2
    } else {
        1
    }
}

/// Volumes of the nine cells (class relative to `x`, class relative to `y`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellVolumes {
    pub counts: [[u64; 3]; 3],
    pub n_mc: u64,
}

impl CellVolumes {
    pub fn volume(&self, i: usize, j: usize) -> Estimate {
        Estimate::proportion(self.counts[i][j], self.n_mc)
    }

    pub fn transpose(&self) -> CellVolumes {
        let mut counts = [[0; 3]; 3];
        for (i, row) in counts.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = self.counts[j][i];
            }
        }
        CellVolumes { counts, n_mc: self.n_mc }
    }

    /// `D_r(x, y)` with its standard error.
    pub fn dr(&self, r: f64) -> Estimate {
        let f = [-(1.0 - r) / 2.0, 0.0, (1.0 + r) / 2.0];
        let n = self.n_mc as f64;
        let (mut mean, mut second) = (0.0, 0.0);
        // transposed cells are added as integers first, so swapping the
        // two points gives a bitwise identical result
        for i in 0..3 {
            for j in i + 1..3 {
                let w = (f[i] - f[j]).powi(2);
                let p = (self.counts[i][j] + self.counts[j][i]) as f64 / n;
                mean += w * p;
                second += w * w * p;
            }
        }
        let sq_err = ((second - mean * mean).max(0.0) / n).sqrt();
        let d = mean.sqrt();
        // delta method away from zero, √σ bound near it
        let err = if d > 0.0 { (sq_err / (2.0 * d)).min(sq_err.sqrt()) } else { sq_err.sqrt() };
        Estimate { value: d, std_error: err }
    }
}

fn check_budget(n_mc: u64) -> Result<()> {
    if n_mc == 0 {
        return Err(Error::Argument("n_mc must be at least 1".into()));
    }
    Ok(())
}

/// Cell counts for every unordered pair `a < b` of `net`, from one shared set
/// of `n_mc` uniform samples (split into chunks with derived seeds).
fn pair_counts<M: Spacetime + Sync + ?Sized>(model: &M, net: &[Point], n_mc: u64, seed: u64) -> Vec<[u64; 9]> {
    let k = net.len();
    let n_pairs = k * (k.saturating_sub(1)) / 2;
    let chunks = n_mc.div_ceil(CHUNK);
    let partial = map_indexed(chunks, |c| {
        let mut rng = substream(seed, c);
        let len = CHUNK.min(n_mc - c * CHUNK);
        let mut acc = vec![[0u64; 9]; n_pairs];
        let mut cls = vec![0usize; k];
        for _ in 0..len {
            let z = model.sample_uniform(&mut rng);
            for (a, p) in net.iter().enumerate() {
                cls[a] = cone_class(model, p, &z);
            }
            let mut idx = 0;
            for a in 0..k {
                for b in a + 1..k {
                    acc[idx][3 * cls[a] + cls[b]] += 1;
                    idx += 1;
                }
            }
        }
        acc
    });
    let mut total = vec![[0u64; 9]; n_pairs];
    for acc in partial {
        for (t, a) in total.iter_mut().zip(acc) {
            for (x, y) in t.iter_mut().zip(a) {
                *x += y;
            }
        }
    }
    total
}

fn to_cells(c: &[u64; 9], n_mc: u64) -> CellVolumes {
    let mut counts = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            counts[i][j] = c[3 * i + j];
        }
    }
    CellVolumes { counts, n_mc }
}

pub fn cone_cell_volumes<M: Spacetime + Sync + ?Sized>(
    model: &M,
    x: &Point,
    y: &Point,
    n_mc: u64,
    seed: u64,
) -> Result<CellVolumes> {
    check_budget(n_mc)?;
    model.check_domain(x)?;
    model.check_domain(y)?;
    let counts = pair_counts(model, &[*x, *y], n_mc, seed);
    Ok(to_cells(&counts[0], n_mc))
}

pub fn dr_metric<M: Spacetime + Sync + ?Sized>(
    model: &M,
    x: &Point,
    y: &Point,
    r: f64,
    n_mc: u64,
    seed: u64,
) -> Result<Estimate> {
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::Argument(format!("r = {r} outside [-1, 1]")));
    }
    Ok(cone_cell_volumes(model, x, y, n_mc, seed)?.dr(r))
}

/// The three cone metrics `D_{-1/2}`, `D_0`, `D_{1/2}` on a net.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiTimes {
    pub metrics: [FiniteMetric; 3],
    pub std_errors: [Vec<Vec<f64>>; 3],
    pub n_mc: u64,
}

pub fn phi_times_metrics<M: Spacetime + Sync + ?Sized>(
    model: &M,
    net: &[Point],
    n_mc: u64,
    seed: u64,
) -> Result<PhiTimes> {
    check_budget(n_mc)?;
    if net.is_empty() {
        return Err(Error::Argument("empty net".into()));
    }
    for p in net {
        model.check_domain(p)?;
    }
    let k = net.len();
    let counts = pair_counts(model, net, n_mc, seed);
    let mut metrics = [FiniteMetric::zeros(k), FiniteMetric::zeros(k), FiniteMetric::zeros(k)];
    let mut std_errors = [vec![vec![0.0; k]; k], vec![vec![0.0; k]; k], vec![vec![0.0; k]; k]];
    let mut idx = 0;
    for a in 0..k {
        for b in a + 1..k {
            let cells = to_cells(&counts[idx], n_mc);
            for (c, &r) in PHI_EXPONENTS.iter().enumerate() {
                let e = cells.dr(r);
                metrics[c].d[a][b] = e.value;
                metrics[c].d[b][a] = e.value;
                std_errors[c][a][b] = e.std_error;
                std_errors[c][b][a] = e.std_error;
            }
            idx += 1;
        }
    }
    Ok(PhiTimes { metrics, std_errors, n_mc })
}
