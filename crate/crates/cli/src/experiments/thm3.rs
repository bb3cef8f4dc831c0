use super::fmt;
use crate::config::ExperimentConfig;
use crate::result::{csv_table, dat_table, ExperimentResult};
use causet::rng::{derive_seed, stream};
use causet::spacetime::{FlatCylinder, Spacetime};
use causet::sprinkling::total_order_probability;
use causet::stats::{ols_slope, Estimate};
use causet::{Error, Result};

/// Pairs drawn when the spacelike probability has no closed form (n ≥ 2).
const PAIR_SAMPLES: u64 = 1_000_000;

/// Probability that two uniform points of the cylinder are not causally
/// related.
///
/// For one spatial dimension the torus distance is uniform on `[0, c/2]`
/// and the time gap has density `2(T − x)/T²`, which integrates to
/// `c/(2T) − c²/(12T²)`.
pub fn spacelike_pair_probability(model: &FlatCylinder, seed: u64) -> Estimate {
    let t = model.extent();
    let c = model.circumference();
    if model.spatial_dims() == 1 && c <= 2.0 * t {
        return Estimate::exact(c / (2.0 * t) - c * c / (12.0 * t * t));
    }
    let mut rng = stream(seed);
    let mut hits = 0;
    for _ in 0..PAIR_SAMPLES {
        let a = model.sample_uniform(&mut rng);
        let b = model.sample_uniform(&mut rng);
        if !model.leq(&a, &b) && !model.leq(&b, &a) {
            hits += 1;
        }
    }
    Estimate::proportion(hits, PAIR_SAMPLES)
}

/// Probability that `K` sprinkled points form a chain, over a range of
/// cylinder heights.
pub fn cmd_thm3(config: &ExperimentConfig) -> Result<ExperimentResult> {
    if config.model.is_some() {
        return Err(Error::Config("thm3 sweeps its own cylinders; set [thm3] T_values and n instead".into()));
    }
    let p = &config.thm3;
    if p.t_values.is_empty() {
        return Err(Error::Config("[thm3] T_values must not be empty".into()));
    }
    let k = config.k.unwrap_or(3);
    let n = config.n_trials.unwrap_or(100_000);
    let pairs = (k * k.saturating_sub(1) / 2) as f64;
    let sigmas = config.tolerance.sigmas;
    let mut res = ExperimentResult::new("thm3", config);

    let mut rows = Vec::new();
    let mut es = Vec::new();
    let mut union_ok = true;
    for (i, &t) in p.t_values.iter().enumerate() {
        let model = FlatCylinder::new(t, p.n).map_err(|e| Error::Config(format!("T = {t}: {e}")))?;
        let e = total_order_probability(&model, k, n, derive_seed(config.seed, i as u64))?;
        let q = spacelike_pair_probability(&model, derive_seed(config.seed, 1000 + i as u64));
        let miss = 1.0 - e.value;
        let bound = pairs * q.value;
        let slack = sigmas * (e.std_error.powi(2) + (pairs * q.std_error).powi(2)).sqrt();
        union_ok &= miss <= bound + slack;
        let fitted = miss * t.powf(1.0 / p.n as f64) / (k * k) as f64;
        res.metric(format!("E[T={t}]"), e.value, e.std_error);
        res.metric(format!("spacelike_pair_probability[T={t}]"), q.value, q.std_error);
        res.exact(format!("fitted_C[T={t}]"), fitted);
        rows.push(vec![fmt(t), fmt(e.value), fmt(e.std_error), fmt(miss), fmt(bound), fmt(fitted)]);
        es.push((t, e, fitted));
    }

    let increasing = es.windows(2).all(|w| w[0].1.value < w[1].1.value);
    let detail = es
        .windows(2)
        .map(|w| {
            let se = w[0].1.std_error.hypot(w[1].1.std_error);
            format!("ΔE({}→{}) = {:.3e} ({:.1}σ)", w[0].0, w[1].0, w[1].1.value - w[0].1.value, (w[1].1.value - w[0].1.value) / se)
        })
        .collect::<Vec<_>>()
        .join("; ");
    res.check("strictly_increasing", increasing, detail);

    let last = es.last().expect("non-empty");
    res.check("largest_T_at_least_0.99", last.1.value >= 0.99, format!("E(T = {}) = {}", last.0, last.1.value));
    res.check(
        "union_bound",
        union_ok,
        format!("1 − E ≤ C(K,2)·P(spacelike pair) + {sigmas}σ at every T"),
    );

    let fitted: Vec<f64> = es.iter().map(|x| x.2).collect();
    let (lo, hi) = fitted.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &c| (lo.min(c), hi.max(c)));
    res.check(
        "fitted_constant_stable",
        lo > 0.0 && hi <= 2.0 * lo,
        format!("C = (1 − E)·T^(1/n)/K² ranges over [{lo:.3e}, {hi:.3e}]"),
    );

    let (lx, ly): (Vec<f64>, Vec<f64>) =
        es.iter().filter(|x| x.1.value < 1.0).map(|x| (x.0.ln(), (1.0 - x.1.value).ln())).unzip();
    if lx.len() >= 2 {
        res.exact("miss_exponent", ols_slope(&lx, &ly));
    }

    if !p.k_values.is_empty() {
        let model = FlatCylinder::new(p.t_values[0], p.n)?;
        let mut prev = f64::INFINITY;
        let mut mono = true;
        for &kk in &p.k_values {
            let e = total_order_probability(&model, kk, n, derive_seed(config.seed, 2000 + kk as u64))?;
            res.metric(format!("E[T={},K={kk}]", p.t_values[0]), e.value, e.std_error);
            mono &= e.value <= prev;
            prev = e.value;
        }
        res.check("decreasing_in_K", mono, format!("E non-increasing over K = {:?}", p.k_values));
    }

    let header = ["T", "E", "std_error", "one_minus_E", "union_bound", "fitted_C"];
    res.artifact("e_of_t.csv", csv_table(&header, &rows));
    res.artifact("e_of_t.dat", dat_table(&header, &rows));
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_matches_sampling() {
        let m = FlatCylinder::new(3.0, 1).unwrap();
        let exact = spacelike_pair_probability(&m, 0).value;
        let mut rng = stream(5);
        let n = 400_000;
        let hits = (0..n)
            .filter(|_| {
                let a = m.sample_uniform(&mut rng);
                let b = m.sample_uniform(&mut rng);
                !m.leq(&a, &b) && !m.leq(&b, &a)
            })
            .count();
        let est = Estimate::proportion(hits as u64, n);
        assert!((est.value - exact).abs() < 4.0 * est.std_error, "{est:?} vs {exact}");
    }
}
