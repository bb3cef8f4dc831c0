use super::{fmt, model_or};
use crate::config::ExperimentConfig;
use crate::result::{csv_table, dat_table, ExperimentResult};
use causet::order::{interval_measure_estimate, PointOrder};
use causet::rng::{derive_seed, stream};
use causet::spacetime::{analytic_volume, ModelSpec, Region, Spacetime};
use causet::sprinkling::sprinkle_points;
use causet::stats::{median, ols_slope};
use causet::{Error, Result};
use rand::Rng;

/// Draws per diamond when searching the anchor pool.
const ANCHOR_ATTEMPTS: usize = 10_000;

/// Interval counts on growing prefixes of one sprinkled sequence against
/// the exact diamond volumes.
pub fn cmd_reconstruct(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let model = model_or(config, ModelSpec::LightconeSquare)?;
    let p = &config.reconstruct;
    let mut prefixes = p.prefixes.clone();
    prefixes.sort_unstable();
    prefixes.dedup();
    let n_max = *prefixes.last().ok_or_else(|| Error::Config("[reconstruct] prefixes must not be empty".into()))?;
    if prefixes[0] < p.anchor_pool || p.anchor_pool < 2 {
        return Err(Error::Config(format!(
            "anchor_pool = {} must be at least 2 and at most the smallest prefix {}",
            p.anchor_pool, prefixes[0]
        )));
    }
    let points = sprinkle_points(&model, n_max, derive_seed(config.seed, 0));

    let mut rng = stream(derive_seed(config.seed, 1));
    let mut anchors = Vec::new();
    let mut attempts = 0;
    while anchors.len() < p.diamonds {
        attempts += 1;
        if attempts > ANCHOR_ATTEMPTS * p.diamonds.max(1) {
            return Err(Error::Config(format!(
                "found only {} of {} anchor diamonds with volume ≥ {}",
                anchors.len(),
                p.diamonds,
                p.min_volume
            )));
        }
        let u = rng.random_range(0..p.anchor_pool);
        let v = rng.random_range(0..p.anchor_pool);
        if u == v || !model.leq(&points[u], &points[v]) || anchors.contains(&(u, v)) {
            continue;
        }
        let vol = analytic_volume(&model, &Region::diamond(points[u], points[v]))
            .ok_or_else(|| Error::Config(format!("no closed-form diamond volume on {}", model.kind())))?;
        if vol >= p.min_volume {
            anchors.push((u, v));
        }
    }
    let volumes: Vec<f64> = anchors
        .iter()
        .map(|&(u, v)| analytic_volume(&model, &Region::diamond(points[u], points[v])).unwrap_or(f64::NAN))
        .collect();

    let mut res = ExperimentResult::new("reconstruct", config);
    let mut detail_rows = Vec::new();
    let mut curve = Vec::new();
    for &n in &prefixes {
        let order = PointOrder { model: &model, points: &points[..n] };
        let mut errs = Vec::with_capacity(anchors.len());
        for (d, (&(u, v), &vol)) in anchors.iter().zip(&volumes).enumerate() {
            let est = interval_measure_estimate(&order, u, v)?;
            errs.push((est - vol).abs());
            detail_rows.push(vec![n.to_string(), d.to_string(), fmt(vol), fmt(est), fmt((est - vol).abs())]);
        }
        let med = median(&errs);
        res.exact(format!("median_error[n={n}]"), med);
        curve.push((n, med));
    }
    let (lx, ly): (Vec<f64>, Vec<f64>) =
        curve.iter().filter(|c| c.1 > 0.0).map(|&(n, e)| ((n as f64).log10(), e.log10())).unzip();
    if lx.len() >= 2 {
        let slope = ols_slope(&lx, &ly);
        res.exact("log_log_slope", slope);
        res.check("slope_near_minus_half", (-0.65..=-0.35).contains(&slope), format!("slope = {slope:.4}"));
    } else {
        res.check("slope_near_minus_half", false, "fewer than two non-zero median errors");
    }
    let at = |n: usize| curve.iter().find(|c| c.0 == n).map(|c| c.1);
    if let (Some(e3), Some(e5)) = (at(1000), at(100_000)) {
        res.check("error_ratio_1e5_vs_1e3", e5 <= e3 / 4.0, format!("{e5:.3e} ≤ {e3:.3e}/4"));
    }
    let curve_rows: Vec<Vec<String>> = curve.iter().map(|&(n, e)| vec![n.to_string(), fmt(e)]).collect();
    res.artifact("convergence.csv", csv_table(&["n", "median_error"], &curve_rows));
    res.artifact("convergence.dat", dat_table(&["n", "median_error"], &curve_rows));
    res.artifact("estimates.csv", csv_table(&["n", "diamond", "volume", "estimate", "error"], &detail_rows));
    Ok(res)
}
