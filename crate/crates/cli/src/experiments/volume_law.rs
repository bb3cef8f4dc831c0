use super::{build, fmt};
use crate::config::ExperimentConfig;
use crate::result::{csv_table, ExperimentResult};
use causet::rng::derive_seed;
use causet::spacetime::{Model, ModelSpec, Spacetime};
use causet::sprinkling::{hausdorff_covering_prefix, random_diamonds, sprinkle_points, volume_law_check, Tolerance};
use causet::Result;

/// Diamond counts against exact volumes for i.i.d. and covering sequences.
pub fn cmd_volume_law(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let p = &config.volume_law;
    let specs: Vec<ModelSpec> = match (&config.model, p.models.is_empty()) {
        (Some(m), _) => vec![m.clone()],
        (None, false) => p.models.clone(),
        (None, true) => vec![ModelSpec::LightconeSquare, ModelSpec::FlatCylinder { extent: 1.0, n: 1 }],
    };
    let tol = Tolerance::Binomial { sigmas: config.tolerance.sigmas };
    let mut res = ExperimentResult::new("volume-law", config);
    let mut rows = Vec::new();
    for (mi, spec) in specs.iter().enumerate() {
        let model: Model = build(spec)?;
        let seed = derive_seed(config.seed, mi as u64);
        let diamonds = random_diamonds(&model, p.diamonds, p.min_volume, derive_seed(seed, 0))?;
        let iid = sprinkle_points(&model, p.n, derive_seed(seed, 1));
        let hcs = hausdorff_covering_prefix(&model, p.n, derive_seed(seed, 2))?.points;
        for (gen, points) in [("iid", iid), ("hcs", hcs)] {
            let report = volume_law_check(&points, &model, &diamonds, p.n, tol)?;
            let passed = report.rows.iter().filter(|r| r.pass).count();
            let frac = passed as f64 / report.rows.len().max(1) as f64;
            let tag = format!("{}/{gen}", model.kind());
            res.exact(format!("pass_fraction[{tag}]"), frac);
            res.exact(format!("max_deviation[{tag}]"), report.max_deviation);
            res.check(
                &format!("volume_law[{tag}]"),
                frac >= config.tolerance.pass_fraction,
                format!("{passed}/{} diamonds within tolerance", report.rows.len()),
            );
            for (i, r) in report.rows.iter().enumerate() {
                rows.push(vec![
                    model.kind().to_string(),
                    gen.to_string(),
                    i.to_string(),
                    fmt(r.volume),
                    r.count.to_string(),
                    fmt(r.deviation),
                    fmt(r.tolerance),
                    r.pass.to_string(),
                ]);
            }
        }
    }
    res.artifact(
        "volume_law.csv",
        csv_table(&["model", "generator", "diamond", "volume", "count", "deviation", "tolerance", "pass"], &rows),
    );
    Ok(res)
}
