use super::{fmt, model_or};
use crate::config::ExperimentConfig;
use crate::result::{csv_table, ExperimentResult};
use causet::order::automorphism_count;
use causet::rng::derive_seed;
use causet::spacetime::ModelSpec;
use causet::sprinkling::estimate_class_distribution;
use causet::Result;

/// Class distribution of `K`-point sprinkles, plus a split-half consistency
/// check between two independent halves of the trials.
pub fn cmd_ck(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let model = model_or(config, ModelSpec::LightconeSquare)?;
    let k = config.k.unwrap_or(3);
    let n = config.n_trials.unwrap_or(100_000);
    let mut res = ExperimentResult::new("ck", config);

    let dist = estimate_class_distribution(&model, k, n, derive_seed(config.seed, 0))?;
    let half = (n / 2).max(1);
    let a = estimate_class_distribution(&model, k, half, derive_seed(config.seed, 1))?;
    let b = estimate_class_distribution(&model, k, half, derive_seed(config.seed, 2))?;
    let l1 = a.l1_distance(&b)?;
    let l1_se = a.l1_std_error(&b);

    res.exact("classes_observed", dist.weights.len() as f64);
    let chain = dist.chain_probability();
    res.metric("chain_probability", chain, causet::stats::binomial_std_error(chain, n));
    res.metric("split_half_l1", l1, l1_se);
    let tol = config.tolerance.sigmas;
    res.check(
        "split_half_l1",
        l1 <= tol * l1_se,
        format!("l1 between halves {l1:.6} vs {tol}·σ = {:.6}", tol * l1_se),
    );

    let mut rows = Vec::new();
    for (class, w) in &dist.weights {
        let rep = class.representative();
        rows.push(vec![
            class.to_hex(),
            fmt(w.probability),
            fmt(dist.std_error(class)),
            w.count.to_string(),
            rep.relation_count().to_string(),
            automorphism_count(&rep)?.to_string(),
        ]);
    }
    res.artifact("distribution.csv", dist.to_csv());
    res.artifact(
        "classes.csv",
        csv_table(&["canonical_key", "probability", "std_error", "count", "relations", "automorphisms"], &rows),
    );
    Ok(res)
}
