use super::build;
use crate::config::ExperimentConfig;
use crate::result::ExperimentResult;
use causet::distances::dminus_lower_tdiam;
use causet::rng::derive_seed;
use causet::spacetime::{analytic_volume, FlatCylinder, NeedleSlab, Point, Region, ModelSpec};
use causet::sprinkling::estimate_class_distribution;
use causet::{Error, Result};

/// Safety margin on the needle length over `T + D`.
const LENGTH_MARGIN: f64 = 1.01;

/// A base cylinder and a needle whose extra volume stays within budget.
#[derive(Debug, Clone, PartialEq)]
pub struct NeedleConstruction {
    pub base: FlatCylinder,
    pub needle: NeedleSlab,
    /// Normalized volume of the needle's future cone in the needle model.
    pub cone_volume: f64,
}

/// Builds the needle pair for budget `v` and separation `d`.
///
/// The apex sits at height `T − s`, where `s` is chosen so the base cone
/// above it has volume `v/4`. The strip over the cone axis gets the factor
/// `λ` that makes the needle length `1.01·(T + D)`, and a half-width that
/// adds exactly `v/4` of raw volume. An explicit `lambda` overrides the
/// length target (`λ = 1` gives back the base).
pub fn needle_construction(extent: f64, d: f64, v: f64, lambda: Option<f64>) -> Result<NeedleConstruction> {
    if !(v > 0.0 && v < 1.0) || !(d > 0.0) {
        return Err(Error::Config(format!("need 0 < v < 1 and D > 0, got v = {v}, D = {d}")));
    }
    let base = FlatCylinder::new(extent, 1)?;
    let c = base.circumference();
    let quarter = v / 4.0;
    let s = if quarter <= c * c / 4.0 { quarter.sqrt() } else { c / 2.0 + (quarter - c * c / 4.0) / c };
    if s >= extent {
        return Err(Error::Config(format!("v = {v} is too large for a cylinder of height {extent}")));
    }
    let t0 = extent - s;
    let theta0 = c / 2.0;
    let raw = 1.0 + quarter;
    let lambda = lambda.unwrap_or(((extent + d) * LENGTH_MARGIN * raw.sqrt() - t0) / s);
    let halfwidth = if lambda == 1.0 { c / 20.0 } else { quarter / (2.0 * s * (lambda * lambda - 1.0)) };
    let needle = NeedleSlab::new(extent, theta0, halfwidth, t0, lambda)
        .map_err(|e| Error::Config(format!("needle construction failed: {e}")))?;
    let apex = Point::new(&[t0, theta0]);
    let cone_volume = analytic_volume(&needle, &Region::Future(apex)).unwrap_or(f64::NAN);
    Ok(NeedleConstruction { base, needle, cone_volume })
}

pub fn cmd_thm2(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let p = &config.thm2;
    let k = config.k.unwrap_or(4);
    let n = config.n_trials.unwrap_or(100_000);
    if (1.0 - p.v).powi(k as i32) <= p.epsilon {
        return Err(Error::Config(format!(
            "infeasible: (1 − v)^K = {} must exceed ε = {} (v = {}, K = {k})",
            (1.0 - p.v).powi(k as i32),
            p.epsilon,
            p.v
        )));
    }
    let built = needle_construction(p.extent, p.d, p.v, p.lambda)?;
    let mut res = ExperimentResult::new("thm2", config);
    let x = match &config.model {
        Some(spec) => build(spec)?,
        None => built.base.clone().into(),
    };
    if x.spec() != (ModelSpec::FlatCylinder { extent: p.extent, n: 1 }) {
        return Err(Error::Config("thm2 builds its own base cylinder; leave [model] unset".into()));
    }
    let y = &built.needle;

    let cx = estimate_class_distribution(&x, k, n, derive_seed(config.seed, 0))?;
    let cy = estimate_class_distribution(y, k, n, derive_seed(config.seed, 1))?;
    let l1 = cx.l1_distance(&cy)?;
    let sigma = cx.l1_std_error(&cy);
    let lower = dminus_lower_tdiam(&x, y);

    res.exact("lambda", y.lambda());
    res.exact("halfwidth", y.halfwidth());
    res.exact("t0", y.t0());
    res.exact("raw_volume", y.raw_volume());
    res.exact("needle_length", y.needle_length());
    res.exact("needle_cone_volume", built.cone_volume);
    res.exact("strip_mass", y.strip_mass());
    res.metric("l1", l1, sigma);
    res.exact("dminus_lower_tdiam", lower);
    let tol = config.tolerance.sigmas;
    res.check(
        "l1_below_epsilon",
        l1 < p.epsilon + tol * sigma,
        format!("l1 = {l1:.6} vs ε + {tol}σ = {:.6}", p.epsilon + tol * sigma),
    );
    res.check("lower_bound_above_D", lower > p.d, format!("d⁻ ≥ {lower:.6} vs D = {}", p.d));
    res.check(
        "cone_volume_within_budget",
        built.cone_volume < p.v,
        format!("needle cone volume {:.6} vs v = {}", built.cone_volume, p.v),
    );
    res.artifact("distribution_x.csv", cx.to_csv());
    res.artifact("distribution_y.csv", cy.to_csv());
    res.artifact("needle.toml", y_spec_block(y));
    Ok(res)
}

fn y_spec_block(y: &NeedleSlab) -> String {
    causet::spacetime::Model::from(y.clone()).spec().to_config_block()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_meets_its_targets() {
        let b = needle_construction(1.0, 10.0, 0.05, None).unwrap();
        assert!(b.needle.needle_length() > 11.0);
        assert!((b.needle.raw_volume() - 1.0125).abs() < 1e-12);
        assert!(b.cone_volume < 0.05);
        assert!(dminus_lower_tdiam(&b.base, &b.needle) > 10.0);
        let far = needle_construction(1.0, 20.0, 0.05, None).unwrap();
        assert!(far.needle.lambda() > b.needle.lambda());
        assert!(dminus_lower_tdiam(&far.base, &far.needle) > 20.0);
        assert!((far.needle.raw_volume() - b.needle.raw_volume()).abs() < 1e-12);
        let flat = needle_construction(1.0, 10.0, 0.05, Some(1.0)).unwrap();
        assert_eq!(dminus_lower_tdiam(&flat.base, &flat.needle), 0.0);
    }
}
