//! Time-separation distortion and cone-volume metrics between models.

mod cells;
mod search;
mod signature;

pub use cells::{cone_cell_volumes, dr_metric, phi_times_metrics, CellVolumes, PhiTimes, PHI_EXPONENTS};
pub use search::{
    dminus_upper, exact_min_distortion, local_search_min_distortion, DminusOutcome, SearchResult, TraceEntry,
    EXACT_NET_LIMIT,
};
pub use signature::{cone_signature, dtimes_upper, order_correspondence, ConeSignature, DtimesResult, MatchedCorrespondence};

use crate::error::{Error, Result};
use crate::spacetime::{Point, Spacetime};
use serde::{Deserialize, Serialize};

/// A relation between two finite nets that is left- and right-total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(mut pairs: Vec<(usize, usize)>, n_x: usize, n_y: usize) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Argument("empty correspondence".into()));
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut left = vec![false; n_x];
        let mut right = vec![false; n_y];
        for &(a, b) in &pairs {
            if a >= n_x || b >= n_y {
                return Err(Error::Argument(format!("pair ({a}, {b}) out of range for nets of {n_x} and {n_y}")));
            }
            left[a] = true;
            right[b] = true;
        }
        if let Some(a) = left.iter().position(|&c| !c) {
            return Err(Error::Argument(format!("X point {a} has no partner")));
        }
        if let Some(b) = right.iter().position(|&c| !c) {
            return Err(Error::Argument(format!("Y point {b} has no partner")));
        }
        Ok(Correspondence { pairs })
    }

    pub fn identity(n: usize) -> Self {
        Correspondence { pairs: (0..n).map(|i| (i, i)).collect() }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// Symmetric, zero-diagonal distance matrix on `n` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetric {
    pub n: usize,
    pub d: Vec<Vec<f64>>,
}

impl FiniteMetric {
    pub fn zeros(n: usize) -> Self {
        FiniteMetric { n, d: vec![vec![0.0; n]; n] }
    }

    /// Comma-separated rows, no header.
    pub fn to_csv(&self) -> String {
        self.d
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",") + "\n")
            .collect()
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let d = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(n, l)| {
                l.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::Parse { line: n + 1, msg: format!("bad entry {v:?}: {e}") })
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = d.len();
        if let Some(i) = d.iter().position(|r| r.len() != n) {
            return Err(Error::Parse { line: i + 1, msg: format!("expected {n} entries") });
        }
        Ok(FiniteMetric { n, d })
    }
}

/// Signed time separations `τ(net[i], net[j])`.
pub fn tau_matrix<M: Spacetime + ?Sized>(model: &M, net: &[Point]) -> Result<Vec<Vec<f64>>> {
    net.iter()
        .map(|x| net.iter().map(|y| model.signed_tau(x, y)).collect())
        .collect()
}

/// `max |τX(x₁,x₂) − τY(y₁,y₂)|` over pairs of pairs of `corr`, where
/// negative entries (past-directed separations) count as 0.
pub fn distortion(corr: &Correspondence, tau_x: &[Vec<f64>], tau_y: &[Vec<f64>]) -> Result<f64> {
    if corr.pairs.is_empty() {
        return Err(Error::Argument("empty correspondence".into()));
    }
    let mut worst: f64 = 0.0;
    for &(a1, b1) in &corr.pairs {
        for &(a2, b2) in &corr.pairs {
            let tx = tau_x[a1][a2].max(0.0);
            let ty = tau_y[b1][b2].max(0.0);
            worst = worst.max((tx - ty).abs());
        }
    }
    Ok(worst)
}

/// Same maximum for two metric matrices.
pub fn metric_distortion(corr: &Correspondence, dx: &FiniteMetric, dy: &FiniteMetric) -> f64 {
    let mut worst: f64 = 0.0;
    for &(a1, b1) in &corr.pairs {
        for &(a2, b2) in &corr.pairs {
            worst = worst.max((dx.d[a1][a2] - dy.d[b1][b2]).abs());
        }
    }
    worst
}

/// `|tdiam X − tdiam Y|` from certified bounds: the larger lower bound minus
/// the other model's upper bound, floored at 0.
pub fn dminus_lower_tdiam<A: Spacetime + ?Sized, B: Spacetime + ?Sized>(x: &A, y: &B) -> f64 {
    let (tx, ty) = (x.tdiam(), y.tdiam());
    let ux = tx.upper.unwrap_or(f64::INFINITY);
    let uy = ty.upper.unwrap_or(f64::INFINITY);
    (ty.lower - ux).max(tx.lower - uy).max(0.0)
}

/// The JSON report written for every distance estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub estimate: f64,
    pub lower_bound: f64,
    pub net_size: usize,
    pub n_mc: u64,
    pub seed: u64,
    pub standard_error: f64,
    pub search_trace_path: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::{FlatCylinder, NeedleSlab};

    #[test]
    fn correspondence_totality() {
        assert!(Correspondence::new(vec![(0, 0), (1, 0)], 2, 2).is_err());
        assert!(Correspondence::new(vec![(0, 0), (0, 1)], 2, 2).is_err());
        assert!(Correspondence::new(vec![], 1, 1).is_err());
        let c = Correspondence::new(vec![(1, 0), (0, 1), (0, 1)], 2, 2).unwrap();
        assert_eq!(c.pairs(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn three_point_distortion_by_exhaustive_loop() {
        let tx: Vec<Vec<f64>> = vec![vec![0.0, 1.0, 2.5], vec![-1.0, 0.0, 1.2], vec![-2.5, -1.2, 0.0]];
        let ty: Vec<Vec<f64>> = vec![vec![0.0, 0.7, 0.0], vec![-0.7, 0.0, 0.0], vec![0.0, 0.0, 0.0]];
        let corr = Correspondence::new(vec![(0, 0), (1, 1), (2, 2)], 3, 3).unwrap();
        let mut brute: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                brute = brute.max((tx[i][j].max(0.0) - ty[i][j].max(0.0)).abs());
            }
        }
        assert_eq!(distortion(&corr, &tx, &ty).unwrap(), brute);
        assert_eq!(brute, 2.5);
        assert_eq!(distortion(&Correspondence::identity(3), &tx, &tx).unwrap(), 0.0);
        let one = vec![vec![0.0]];
        assert_eq!(distortion(&Correspondence::identity(1), &one, &one).unwrap(), 0.0);
    }

    #[test]
    fn tdiam_lower_bounds() {
        let c1 = FlatCylinder::new(1.0, 1).unwrap();
        let c2 = FlatCylinder::new(2.0, 1).unwrap();
        assert_eq!(dminus_lower_tdiam(&c1, &c2), 1.0);
        assert_eq!(dminus_lower_tdiam(&c2, &c2), 0.0);
        let needle = NeedleSlab::new(2.0, 0.3, 0.05, 1.0, 20.0).unwrap();
        let lb = dminus_lower_tdiam(&needle, &c2);
        assert!((lb - (needle.needle_length() - 2.0)).abs() < 1e-12, "{lb}");
        assert!(lb > 0.0);
    }

    #[test]
    fn metric_csv_round_trip() {
        let m = FiniteMetric { n: 2, d: vec![vec![0.0, 0.25], vec![0.25, 0.0]] };
        assert_eq!(FiniteMetric::from_csv(&m.to_csv()).unwrap(), m);
        assert!(FiniteMetric::from_csv("0,1\n1\n").is_err());
    }
}
