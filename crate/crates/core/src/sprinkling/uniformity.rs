use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream};
use crate::spacetime::{analytic_volume, region_volume, Point, Region, Spacetime};
use serde::{Deserialize, Serialize};

/// Shapes used to probe how evenly a point set fills a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeFamily {
    Diamonds,
    PastCones,
    FutureCones,
    PastIntersections,
    /// The four families above in rotation.
    All,
}

/// Redraws allowed per probe when looking for one above the volume floor.
const PROBE_ATTEMPTS: usize = 256;

/// `n_probes` random regions of the given family. Each probe is redrawn (up
/// to a fixed number of attempts) until its exact volume is at least
/// `min_volume`; the floor only applies where the model has a closed form.
pub fn probe_regions<M: Spacetime + ?Sized>(
    model: &M,
    family: ProbeFamily,
    n_probes: usize,
    min_volume: f64,
    seed: u64,
) -> Vec<Region> {
    let families = [
        ProbeFamily::Diamonds,
        ProbeFamily::PastCones,
        ProbeFamily::FutureCones,
        ProbeFamily::PastIntersections,
    ];
    (0..n_probes)
        .map(|i| {
            let fam = if family == ProbeFamily::All { families[i % 4] } else { family };
            let mut rng = stream(derive_seed(seed, i as u64));
            let mut region = Region::Whole;
            for _ in 0..PROBE_ATTEMPTS {
                let p = model.sample_uniform(&mut rng);
                let q = model.sample_uniform(&mut rng);
                region = match fam {
                    ProbeFamily::Diamonds if model.leq(&q, &p) => Region::diamond(q, p),
                    ProbeFamily::Diamonds => Region::diamond(p, q),
                    ProbeFamily::PastCones => Region::Past(p),
                    ProbeFamily::FutureCones => Region::Future(p),
                    _ => Region::intersection(Region::Past(p), Region::Past(q)),
                };
                if analytic_volume(model, &region).is_none_or(|v| v >= min_volume) {
                    break;
                }
            }
            region
        })
        .collect()
}

/// `count` causally related pairs `p ≤ q` whose diamond has exact volume at
/// least `min_volume`.
pub fn random_diamonds<M: Spacetime + ?Sized>(
    model: &M,
    count: usize,
    min_volume: f64,
    seed: u64,
) -> Result<Vec<(Point, Point)>> {
    let mut rng = stream(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 10_000 * count.max(1) {
            return Err(Error::Argument(format!("no diamonds of volume ≥ {min_volume} found on {}", model.kind())));
        }
        let (p, q) = (model.sample_uniform(&mut rng), model.sample_uniform(&mut rng));
        let (p, q) = if model.leq(&q, &p) { (q, p) } else { (p, q) };
        if !model.leq(&p, &q) {
            continue;
        }
        let v = analytic_volume(model, &Region::diamond(p, q))
            .ok_or_else(|| Error::Estimation(format!("no closed-form diamonds on {}", model.kind())))?;
        if v >= min_volume {
            out.push((p, q));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    /// max over probes of |count/K − vol|
    pub s_achieved: f64,
    pub probe_count: usize,
    pub worst_region: String,
    pub worst_volume: f64,
    /// Probes with an apex outside the chart.
    pub skipped: usize,
    /// Largest Monte Carlo standard error among the probe volumes.
    pub volume_std_error: f64,
    /// `s^(1/n)` for spacetime dimension `n`.
    pub planck_scale: f64,
}

/// Deviation of `points` from exact volume counting on random probes.
#[allow(clippy::too_many_arguments)]
pub fn check_s_uniform<M: Spacetime + ?Sized>(
    points: &[Point],
    model: &M,
    family: ProbeFamily,
    n_probes: usize,
    min_volume: f64,
    n_mc: u64,
    seed: u64,
) -> Result<UniformityReport> {
    let probes = probe_regions(model, family, n_probes, min_volume, derive_seed(seed, 0));
    check_s_uniform_regions(points, model, &probes, n_mc, derive_seed(seed, 1))
}

pub fn check_s_uniform_regions<M: Spacetime + ?Sized>(
    points: &[Point],
    model: &M,
    regions: &[Region],
    n_mc: u64,
    seed: u64,
) -> Result<UniformityReport> {
    if points.is_empty() {
        return Err(Error::Argument("empty point set".into()));
    }
    let k = points.len() as f64;
    let mut report = UniformityReport {
        s_achieved: 0.0,
        probe_count: 0,
        worst_region: String::new(),
        worst_volume: f64::NAN,
        skipped: 0,
        volume_std_error: 0.0,
        planck_scale: 0.0,
    };
    let mut worst = -1.0;
    for (i, region) in regions.iter().enumerate() {
        let vol = match region_volume(model, region, n_mc, &mut stream(derive_seed(seed, i as u64))) {
            Ok(v) => v,
            Err(Error::Domain { .. }) => {
                report.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let count = points.iter().filter(|z| region.contains(model, z)).count() as f64;
        let dev = (count / k - vol.value).abs();
        report.probe_count += 1;
        report.volume_std_error = report.volume_std_error.max(vol.std_error);
        if dev > worst {
            worst = dev;
            report.worst_region = region.to_string();
            report.worst_volume = vol.value;
        }
    }
    report.s_achieved = worst.max(0.0);
    report.planck_scale = report.s_achieved.powf(1.0 / model.dimension() as f64);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Tolerance {
    /// `sigmas · √(v(1−v)/n)`
    Binomial { sigmas: f64 },
    Absolute { value: f64 },
}

impl Tolerance {
    pub fn bound(&self, volume: f64, n: usize) -> f64 {
        match *self {
            Tolerance::Binomial { sigmas } => sigmas * (volume * (1.0 - volume) / n as f64).max(0.0).sqrt(),
            Tolerance::Absolute { value } => value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeLawRow {
    pub p: Point,
    pub q: Point,
    pub volume: f64,
    pub count: usize,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeLawReport {
    pub prefix: usize,
    pub rows: Vec<VolumeLawRow>,
    pub max_deviation: f64,
    pub all_pass: bool,
}

/// Compares `#{i < n : p ≤ points[i] ≤ q} / n` with the exact diamond
/// volume for every `(p, q)`.
pub fn volume_law_check<M: Spacetime + ?Sized>(
    points: &[Point],
    model: &M,
    diamonds: &[(Point, Point)],
    n: usize,
    tolerance: Tolerance,
) -> Result<VolumeLawReport> {
    if n == 0 || n > points.len() {
        return Err(Error::Argument(format!("prefix {n} not in 1..={}", points.len())));
    }
    let prefix = &points[..n];
    let mut rows = Vec::with_capacity(diamonds.len());
    for &(p, q) in diamonds {
        model.check_domain(&p)?;
        model.check_domain(&q)?;
        let region = Region::diamond(p, q);
        let volume = analytic_volume(model, &region)
            .ok_or_else(|| Error::Estimation(format!("no closed form for {region} on {}", model.kind())))?;
        let count = prefix.iter().filter(|z| region.contains(model, z)).count();
        let deviation = (count as f64 / n as f64 - volume).abs();
        let tol = tolerance.bound(volume, n);
        rows.push(VolumeLawRow { p, q, volume, count, deviation, tolerance: tol, pass: deviation <= tol + 1e-12 });
    }
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(VolumeLawReport { prefix: n, rows, max_deviation, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::LightconeSquare;

    #[test]
    fn one_point_whole_space() {
        let p = [Point::new(&[0.4, 0.7])];
        let r = check_s_uniform_regions(&p, &LightconeSquare, &[Region::Whole], 0, 0).unwrap();
        assert_eq!(r.s_achieved, 0.0);
        assert_eq!(r.probe_count, 1);
    }

    #[test]
    fn out_of_chart_probes_are_skipped() {
        let p = [Point::new(&[0.4, 0.7])];
        let bad = Region::Past(Point::new(&[2.0, 0.5]));
        let r = check_s_uniform_regions(&p, &LightconeSquare, &[bad, Region::Whole], 0, 0).unwrap();
        assert_eq!(r.skipped, 1);
        assert_eq!(r.probe_count, 1);
    }

    #[test]
    fn degenerate_diamonds() {
        let pts = crate::sprinkling::sprinkle_points(&LightconeSquare, 500, 2);
        let spacelike = (Point::new(&[0.2, 0.8]), Point::new(&[0.8, 0.2]));
        let whole = (Point::new(&[0.0, 0.0]), Point::new(&[1.0, 1.0]));
        let r = volume_law_check(&pts, &LightconeSquare, &[spacelike, whole], 500, Tolerance::Binomial { sigmas: 4.0 })
            .unwrap();
        assert_eq!(r.rows[0].count, 0);
        assert_eq!(r.rows[1].count, 500);
        assert!(r.all_pass);
    }

    #[test]
    fn probe_floor() {
        let probes = probe_regions(&LightconeSquare, ProbeFamily::Diamonds, 30, 0.05, 9);
        for r in &probes {
            assert!(analytic_volume(&LightconeSquare, r).unwrap() >= 0.05);
        }
    }
}
