use crate::error::{Error, Result};
use crate::rng::substream;
use crate::spacetime::{Point, Spacetime};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

/// Concatenated coverings by flip-metric balls of radius `1/k`,
/// `k = 1..=k_max`. Block `k` occupies `points[boundaries[k-1]..boundaries[k]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringSequence {
    pub points: Vec<Point>,
    pub boundaries: Vec<usize>,
}

impl CoveringSequence {
    pub fn block(&self, k: usize) -> &[Point] {
        &self.points[self.boundaries[k - 1]..self.boundaries[k]]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.boundaries.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Within each block the covering points are shuffled by a seed derived from
/// `(seed, k)`, so prefixes that cut a block are not spatially biased, and
/// the block is moved by a random isometry of the model (where there is
/// one) so successive grids do not share their alignment.
pub fn hausdorff_covering_sequence<M: Spacetime + ?Sized>(
    model: &M,
    k_max: usize,
    seed: u64,
) -> Result<CoveringSequence> {
    let mut points = Vec::new();
    let mut boundaries = vec![0];
    for k in 1..=k_max {
        let mut block = model
            .covering_block(1.0 / k as f64)
            .ok_or_else(|| Error::Capability(format!("no flip-metric coverings for {}", model.kind())))?;
        let mut rng = substream(seed, k as u64);
        block.shuffle(&mut rng);
        model.random_isometry(&mut block, &mut rng);
        points.extend(block);
        boundaries.push(points.len());
    }
    Ok(CoveringSequence { points, boundaries })
}

/// The first `n` points of the covering sequence, extending `k` as far as
/// needed.
pub fn hausdorff_covering_prefix<M: Spacetime + ?Sized>(model: &M, n: usize, seed: u64) -> Result<CoveringSequence> {
    let mut points = Vec::with_capacity(n);
    let mut boundaries = vec![0];
    let mut k = 0;
    while points.len() < n {
        k += 1;
        let mut block = model
            .covering_block(1.0 / k as f64)
            .ok_or_else(|| Error::Capability(format!("no flip-metric coverings for {}", model.kind())))?;
        let mut rng = substream(seed, k as u64);
        block.shuffle(&mut rng);
        model.random_isometry(&mut block, &mut rng);
        block.truncate(n - points.len());
        points.extend(block);
        boundaries.push(points.len());
    }
    Ok(CoveringSequence { points, boundaries })
}

/// Largest flip distance from a grid point of the chart (spacing `step`) to
/// the nearest of `points`.
pub fn covering_radius<M: Spacetime + ?Sized>(model: &M, points: &[Point], step: f64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Argument("empty point set".into()));
    }
    let bounds = model.chart_box();
    let counts: Vec<usize> = bounds.iter().map(|(lo, hi)| ((hi - lo) / step).ceil() as usize + 1).collect();
    let total: usize = counts.iter().product();
    let mut worst: f64 = 0.0;
    let mut c = vec![0.0; bounds.len()];
    for idx in 0..total {
        let mut rest = idx;
        for (d, ((lo, hi), n)) in bounds.iter().zip(&counts).enumerate() {
            c[d] = (lo + (rest % n) as f64 * step).min(*hi);
            rest /= n;
        }
        let z = Point::new(&c);
        let mut best = f64::INFINITY;
        for p in points {
            best = best.min(model.flip_distance(&z, p)?);
        }
        worst = worst.max(best);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::{FlatCylinder, LightconeSquare, NeedleSlab};

    #[test]
    fn blocks_cover_the_square() {
        let seq = hausdorff_covering_sequence(&LightconeSquare, 4, 1).unwrap();
        for k in 1..=4 {
            let r = covering_radius(&LightconeSquare, seq.block(k), 0.01).unwrap();
            assert!(r <= 1.0 / k as f64 + 1e-12, "k = {k}: {r}");
        }
        let sizes = seq.block_sizes();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn prefix_agrees_with_full_blocks() {
        let full = hausdorff_covering_sequence(&LightconeSquare, 6, 3).unwrap();
        let n = full.boundaries[5] + 2;
        let pre = hausdorff_covering_prefix(&LightconeSquare, n, 3).unwrap();
        assert_eq!(pre.points.len(), n);
        assert_eq!(pre.points[..], full.points[..n]);
    }

    #[test]
    fn needle_has_no_coverings() {
        let m = NeedleSlab::new(1.0, 0.5, 0.1, 0.2, 2.0).unwrap();
        assert!(matches!(hausdorff_covering_sequence(&m, 2, 0), Err(Error::Capability(_))));
        let c = FlatCylinder::new(1.0, 1).unwrap();
        assert_eq!(hausdorff_covering_sequence(&c, 3, 0).unwrap().boundaries.len(), 4);
    }
}
