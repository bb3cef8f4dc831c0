//! Browser bindings: sprinkle a model and draw its order, tabulate order-class
//! frequencies, and fill a cone-metric matrix for a small net.
//!
//! Every entry point takes the model as a JSON object such as
//! `{"kind": "flat_cylinder", "T": 2.0}` and returns JSON text. The plain
//! functions are usable from native code too; the `#[wasm_bindgen]` wrappers
//! turn their errors into JS exceptions.

use causet::distances::phi_times_metrics;
use causet::order::{automorphism_count, FiniteOrder};
use causet::spacetime::{Model, ModelSpec, Point, Spacetime};
use causet::sprinkling::{estimate_class_distribution, sprinkle, sprinkle_points, MAX_DISTRIBUTION_SIZE};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper limits that keep a single call interactive.
pub const MAX_SPRINKLE: usize = 2_000;
pub const MAX_TRIALS: u64 = 200_000;
pub const MAX_NET: usize = 40;
pub const MAX_MC: u64 = 200_000;

fn model(spec_json: &str) -> Result<Model, String> {
    let spec: ModelSpec = serde_json::from_str(spec_json).map_err(|e| format!("bad model spec: {e}"))?;
    spec.build().map_err(|e| e.to_string())
}

fn limit<T: PartialOrd + std::fmt::Display>(name: &str, value: T, max: T) -> Result<(), String> {
    if value > max {
        return Err(format!("{name} = {value} exceeds the demo limit {max}"));
    }
    Ok(())
}

/// Cover relations `i < j` with nothing strictly between.
pub fn hasse_links(order: &FiniteOrder) -> Vec<(usize, usize)> {
    let k = order.size();
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if order.lt(i, j) && !(0..k).any(|m| order.lt(i, m) && order.lt(m, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct SprinkleView {
    kind: &'static str,
    chart: Vec<(f64, f64)>,
    points: Vec<Vec<f64>>,
    links: Vec<(usize, usize)>,
    relations: usize,
}

pub fn sprinkle_view(spec_json: &str, k: usize, seed: u32) -> Result<String, String> {
    limit("K", k, MAX_SPRINKLE)?;
    let m = model(spec_json)?;
    let s = sprinkle(&m, k, u64::from(seed)).map_err(|e| e.to_string())?;
    let view = SprinkleView {
        kind: m.kind(),
        chart: m.chart_box(),
        points: s.points.iter().map(|p| p.coords().to_vec()).collect(),
        links: hasse_links(&s.order),
        relations: s.order.relation_count(),
    };
    Ok(serde_json::to_string(&view).expect("plain data"))
}

#[derive(Serialize)]
struct ClassRow {
    key: String,
    probability: f64,
    std_error: f64,
    count: u64,
    relations: usize,
    automorphisms: u64,
    links: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct DistributionView {
    k: usize,
    trials: u64,
    chain_probability: f64,
    classes: Vec<ClassRow>,
}

pub fn class_distribution_view(spec_json: &str, k: usize, trials: u64, seed: u32) -> Result<String, String> {
    limit("K", k, MAX_DISTRIBUTION_SIZE)?;
    limit("trials", trials, MAX_TRIALS)?;
    let m = model(spec_json)?;
    let dist = estimate_class_distribution(&m, k, trials, u64::from(seed)).map_err(|e| e.to_string())?;
    let mut classes = Vec::new();
    for (class, w) in &dist.weights {
        let rep = class.representative();
        classes.push(ClassRow {
            key: class.to_hex(),
            probability: w.probability,
            std_error: dist.std_error(class),
            count: w.count,
            relations: rep.relation_count(),
            automorphisms: automorphism_count(&rep).map_err(|e| e.to_string())?,
            links: hasse_links(&rep),
        });
    }
    classes.sort_by(|a, b| b.probability.total_cmp(&a.probability).then_with(|| a.key.cmp(&b.key)));
    let view = DistributionView { k, trials, chain_probability: dist.chain_probability(), classes };
    Ok(serde_json::to_string(&view).expect("plain data"))
}

#[derive(Serialize)]
struct HeatmapView {
    points: Vec<Vec<f64>>,
    /// Rows of `D_{-1/2}`, `D_0`, `D_{1/2}` in that order.
    metrics: Vec<Vec<Vec<f64>>>,
    exponents: [f64; 3],
}

/// The three cone metrics on a net ordered by time, so causal structure
/// shows up as blocks.
pub fn cone_metric_view(spec_json: &str, net_size: usize, n_mc: u64, seed: u32) -> Result<String, String> {
    limit("net size", net_size, MAX_NET)?;
    limit("samples", n_mc, MAX_MC)?;
    let m = model(spec_json)?;
    let mut net: Vec<Point> = sprinkle_points(&m, net_size, u64::from(seed));
    net.sort_by(|a, b| a.time().total_cmp(&b.time()));
    let phi = phi_times_metrics(&m, &net, n_mc, u64::from(seed) ^ 0x9e37_79b9).map_err(|e| e.to_string())?;
    let view = HeatmapView {
        points: net.iter().map(|p| p.coords().to_vec()).collect(),
        metrics: phi.metrics.iter().map(|d| d.d.clone()).collect(),
        exponents: causet::distances::PHI_EXPONENTS,
    };
    Ok(serde_json::to_string(&view).expect("plain data"))
}

#[wasm_bindgen(js_name = sprinkleView)]
pub fn js_sprinkle_view(spec_json: &str, k: usize, seed: u32) -> Result<String, JsError> {
    sprinkle_view(spec_json, k, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = classDistribution)]
pub fn js_class_distribution(spec_json: &str, k: usize, trials: u32, seed: u32) -> Result<String, JsError> {
    class_distribution_view(spec_json, k, u64::from(trials), seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = coneMetrics)]
pub fn js_cone_metrics(spec_json: &str, net_size: usize, n_mc: u32, seed: u32) -> Result<String, JsError> {
    cone_metric_view(spec_json, net_size, u64::from(n_mc), seed).map_err(|e| JsError::new(&e))
}
