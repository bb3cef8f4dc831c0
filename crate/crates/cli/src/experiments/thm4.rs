use super::{build, fmt};
use crate::config::ExperimentConfig;
use crate::result::{csv_table, ExperimentResult};
use causet::distances::{cone_signature, dtimes_upper, order_correspondence, phi_times_metrics, ConeSignature};
use causet::order::FiniteOrder;
use causet::parallel::map_indexed;
use causet::rng::{derive_seed, stream};
use causet::spacetime::{analytic_volume, region_volume, Model, ModelSpec, Point, Region, Spacetime};
use causet::sprinkling::{check_s_uniform, check_s_uniform_regions, sprinkle, sprinkle_points, ProbeFamily, Sprinkle};
use causet::stats::Estimate;
use causet::{Error, Result};
use rand::Rng;

const JITTER_TRIES: usize = 100;

struct Repeat {
    s_star: f64,
    shared: f64,
    std_error: f64,
    independent: [f64; 3],
    slack: usize,
    fallback_pairs: usize,
    moved: usize,
    /// (|vol△X − vol△Y|, combined Monte Carlo error) per quadruple
    quadruples: Vec<(f64, f64)>,
}

/// Shared-correspondence distortion of the three cone metrics between two
/// models carrying sprinkles with the same induced order.
pub fn cmd_thm4(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let spec_x = config.model.clone().unwrap_or(ModelSpec::LightconeSquare);
    let spec_y = config.model_y.clone().unwrap_or_else(|| spec_x.clone());
    let x = build(&spec_x)?;
    let y = build(&spec_y)?;
    let p = &config.thm4;
    let k = config.k.unwrap_or(500);
    let net_size = config.net_size.unwrap_or(16);
    let n_mc = config.n_mc.unwrap_or(100_000);
    if net_size < 2 {
        return Err(Error::Config("net_size must be at least 2".into()));
    }
    let sigmas = config.tolerance.sigmas;

    let outcomes = map_indexed(p.repeats, |r| {
        run_repeat(&x, &y, k, net_size, n_mc, config, derive_seed(config.seed, r))
    });
    let mut reps = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        reps.push(o?);
    }

    let mut res = ExperimentResult::new("thm4", config);
    let mut rows = Vec::new();
    let mut pass_d = 0;
    let (mut quad_total, mut quad_pass, mut worst_quad) = (0, 0, 0.0f64);
    for (r, rep) in reps.iter().enumerate() {
        let bound = 8.0 * rep.s_star + sigmas * rep.std_error;
        let ok = rep.shared <= bound;
        pass_d += usize::from(ok);
        for &(diff, se) in &rep.quadruples {
            quad_total += 1;
            worst_quad = worst_quad.max(diff / (8.0 * rep.s_star));
            if diff <= 8.0 * rep.s_star + sigmas * se {
                quad_pass += 1;
            }
        }
        rows.push(vec![
            r.to_string(),
            fmt(rep.s_star),
            fmt(rep.shared),
            fmt(rep.std_error),
            fmt(bound),
            fmt(rep.independent[0]),
            fmt(rep.independent[1]),
            fmt(rep.independent[2]),
            rep.slack.to_string(),
            rep.fallback_pairs.to_string(),
            rep.moved.to_string(),
            ok.to_string(),
        ]);
    }
    let n = reps.len().max(1) as f64;
    let mean = |f: &dyn Fn(&Repeat) -> f64| reps.iter().map(f).sum::<f64>() / n;
    res.exact("mean_s_achieved", mean(&|r| r.s_star));
    res.exact("max_s_achieved", reps.iter().map(|r| r.s_star).fold(0.0, f64::max));
    res.exact("mean_shared_distortion", mean(&|r| r.shared));
    res.exact("max_shared_distortion", reps.iter().map(|r| r.shared).fold(0.0, f64::max));
    res.exact("max_ratio_distortion_to_8s", reps.iter().map(|r| r.shared / (8.0 * r.s_star)).fold(0.0, f64::max));
    res.exact("max_ratio_symdiff_to_8s", worst_quad);
    res.exact("mean_moved_net_points", mean(&|r| r.moved as f64));
    res.check(
        "shared_distortion_within_8s",
        pass_d == reps.len(),
        format!("{pass_d}/{} repeats with d× ≤ 8·s* + {sigmas}σ", reps.len()),
    );
    res.check(
        "symmetric_difference_within_8s",
        quad_pass == quad_total,
        format!("{quad_pass}/{quad_total} matched quadruples with |vol△X − vol△Y| ≤ 8·s*"),
    );
    res.artifact(
        "repeats.csv",
        csv_table(
            &[
                "repeat",
                "s_achieved",
                "shared",
                "std_error",
                "bound",
                "independent_m",
                "independent_0",
                "independent_p",
                "slack",
                "fallback_pairs",
                "moved",
                "pass",
            ],
            &rows,
        ),
    );
    Ok(res)
}

fn run_repeat(x: &Model, y: &Model, k: usize, net_size: usize, n_mc: u64, config: &ExperimentConfig, seed: u64) -> Result<Repeat> {
    let p = &config.thm4;
    let a = sprinkle(x, k, derive_seed(seed, 0))?;
    let b = if x == y {
        a.clone()
    } else {
        transplant(&a, y)?
    };

    let net_x = sprinkle_points(x, net_size, derive_seed(seed, 1));
    let mut rng = stream(derive_seed(seed, 2));
    let mut moved = 0;
    let net_y: Vec<Point> = net_x
        .iter()
        .map(|q| {
            let target = cone_signature(x, &a.points, q);
            let out = jitter(y, &b.points, q, &target, p.jitter, &mut rng);
            moved += usize::from(out != *q);
            out
        })
        .collect();

    let s_x = s_star(x, &a, &net_x, p.n_probes, n_mc, derive_seed(seed, 3))?;
    let s_y = s_star(y, &b, &net_y, p.n_probes, n_mc, derive_seed(seed, 4))?;
    let s = s_x.max(s_y);

    let corr = order_correspondence(x, &a, &net_x, y, &b, &net_y)?;
    let mc_seed = derive_seed(seed, 5);
    let phi_x = phi_times_metrics(x, &net_x, n_mc, mc_seed)?;
    let phi_y = phi_times_metrics(y, &net_y, n_mc, mc_seed)?;
    let dt = dtimes_upper(&corr.correspondence, &phi_x, &phi_y, Some(p.independent_budget), derive_seed(seed, 6))?;

    let pairs = corr.correspondence.pairs();
    let mut quadruples = Vec::with_capacity(p.quadruples);
    for q in 0..p.quadruples {
        let i = rng.random_range(0..pairs.len());
        let j = rng.random_range(0..pairs.len());
        let (x1, y1) = (net_x[pairs[i].0], net_y[pairs[i].1]);
        let (x2, y2) = (net_x[pairs[j].0], net_y[pairs[j].1]);
        let vx = past_symdiff(x, &x1, &x2, n_mc, derive_seed(seed, 100 + q as u64))?;
        let vy = past_symdiff(y, &y1, &y2, n_mc, derive_seed(seed, 100 + q as u64))?;
        quadruples.push(((vx.value - vy.value).abs(), vx.std_error.hypot(vy.std_error)));
    }

    Ok(Repeat {
        s_star: s,
        shared: dt.shared,
        std_error: dt.std_error,
        independent: dt.independent.unwrap_or([f64::NAN; 3]),
        slack: corr.slack,
        fallback_pairs: corr.fallback_pairs,
        moved,
        quadruples,
    })
}

/// The same chart coordinates read in another model; the orders must agree.
fn transplant(a: &Sprinkle, y: &Model) -> Result<Sprinkle> {
    let order = FiniteOrder::from_points(y, &a.points)?;
    if order != a.order {
        return Err(Error::Precondition(format!(
            "the sprinkle does not induce the same order on {}; no equal-order pair available",
            y.kind()
        )));
    }
    Ok(Sprinkle { seed: a.seed, points: a.points.clone(), order, resamples: a.resamples })
}

/// A random point near `q` in `model` with the given cone signature, or
/// `q` itself when no such point turns up. The search box shrinks linearly
/// over the attempts.
fn jitter<R: Rng>(model: &Model, points: &[Point], q: &Point, target: &ConeSignature, scale: f64, rng: &mut R) -> Point {
    let chart = model.chart_box();
    for attempt in 0..JITTER_TRIES {
        let shrink = 1.0 - attempt as f64 / JITTER_TRIES as f64;
        let coords: Vec<f64> = q
            .coords()
            .iter()
            .zip(&chart)
            .map(|(&c, &(lo, hi))| c + (rng.random::<f64>() * 2.0 - 1.0) * scale * shrink * (hi - lo))
            .collect();
        let cand = Point::new(&coords);
        if model.in_domain(&cand) && &cone_signature(model, points, &cand) == target {
            return cand;
        }
    }
    *q
}

/// Largest count deviation over random probes plus the cones and pairwise
/// past intersections of the net.
fn s_star(model: &Model, s: &Sprinkle, net: &[Point], n_probes: usize, n_mc: u64, seed: u64) -> Result<f64> {
    let random = check_s_uniform(&s.points, model, ProbeFamily::All, n_probes, 0.0, n_mc, derive_seed(seed, 0))?;
    let mut regions = Vec::new();
    for (i, p) in net.iter().enumerate() {
        regions.push(Region::Past(*p));
        regions.push(Region::Future(*p));
        for q in &net[i + 1..] {
            regions.push(Region::intersection(Region::Past(*p), Region::Past(*q)));
        }
    }
    let net_report = check_s_uniform_regions(&s.points, model, &regions, n_mc, derive_seed(seed, 1))?;
    Ok(random.s_achieved.max(net_report.s_achieved))
}

/// vol(J⁻(p) △ J⁻(q)).
fn past_symdiff(model: &Model, p: &Point, q: &Point, n_mc: u64, seed: u64) -> Result<Estimate> {
    let mut rng = stream(seed);
    let mut vol = |r: Region| -> Result<Estimate> {
        match analytic_volume(model, &r) {
            Some(v) => Ok(Estimate::exact(v)),
            None => region_volume(model, &r, n_mc, &mut rng),
        }
    };
    let a = vol(Region::Past(*p))?;
    let b = vol(Region::Past(*q))?;
    let c = vol(Region::intersection(Region::Past(*p), Region::Past(*q)))?;
    Ok(Estimate {
        value: a.value + b.value - 2.0 * c.value,
        std_error: (a.std_error.powi(2) + b.std_error.powi(2) + 4.0 * c.std_error.powi(2)).sqrt(),
    })
}
