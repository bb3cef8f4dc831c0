use super::{build, fmt};
use crate::config::ExperimentConfig;
use crate::result::{csv_table, ExperimentResult};
use causet::distances::dminus_upper;
use causet::spacetime::ModelSpec;
use causet::sprinkling::points_csv;
use causet::Result;

/// Net-level upper estimate and time-diameter lower bound of the
/// time-separation distance between two models.
pub fn cmd_gh(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let spec_x = config.model.clone().unwrap_or(ModelSpec::LightconeSquare);
    let spec_y = config.model_y.clone().unwrap_or_else(|| spec_x.clone());
    let x = build(&spec_x)?;
    let y = build(&spec_y)?;
    let net_size = config.net_size.unwrap_or(16);
    let budget = config.budget.unwrap_or(20_000);
    let out = dminus_upper(&x, &y, net_size, budget, config.seed)?;

    let mut res = ExperimentResult::new("gh", config);
    let mut report = out.report.clone();
    report.search_trace_path = Some("search_trace.csv".into());
    res.exact("upper", report.estimate);
    res.exact("lower_bound", report.lower_bound);
    res.exact("exact_net_solution", f64::from(u8::from(out.search.exact)));
    if x == y {
        res.check("self_distance_zero", report.estimate == 0.0, format!("upper = {}", report.estimate));
    }
    let trace: Vec<Vec<String>> =
        out.search.trace.iter().map(|t| vec![t.evaluations.to_string(), fmt(t.best)]).collect();
    res.artifact("distance.json", serde_json::to_string_pretty(&report).expect("plain numbers") + "\n");
    res.artifact("search_trace.csv", csv_table(&["evaluations", "best"], &trace));
    res.artifact("net_x.csv", points_csv(&out.net_x));
    res.artifact("net_y.csv", points_csv(&out.net_y));
    let pairs: Vec<Vec<String>> =
        out.search.correspondence.pairs().iter().map(|&(a, b)| vec![a.to_string(), b.to_string()]).collect();
    res.artifact("correspondence.csv", csv_table(&["x", "y"], &pairs));
    Ok(res)
}
