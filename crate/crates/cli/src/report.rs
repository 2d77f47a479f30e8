//! Analysis report: `key = value` lines followed by a `[steps]` CSV section.

use std::fmt::Write;
use std::path::Path;

use fgc_core::gcgmc::{AnalysisConfig, GcGmcReport};
use fgc_core::ingest::format_value;

pub const FORMAT_VERSION: u32 = 1;

pub const STEPS_HEADER: &str =
    "direction,time_index,ise_auto,ise_cross,bandwidth_auto,bandwidth_cross";

pub struct Inputs<'a> {
    pub x_path: &'a Path,
    pub y_path: &'a Path,
    pub train_fraction: Option<f64>,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), format_value)
}

pub fn summary_line(report: &GcGmcReport) -> String {
    format!(
        "{} (GcGMC({}) = {}, GcGMC({}) = {})",
        report.decision.describe(&report.x_label, &report.y_label),
        report.x_label,
        report
            .gcgmc_x
            .map_or("undefined".to_string(), |v| format!("{v:.4}")),
        report.y_label,
        report
            .gcgmc_y
            .map_or("undefined".to_string(), |v| format!("{v:.4}")),
    )
}

pub fn steps_csv(report: &GcGmcReport) -> String {
    let mut s = String::from(STEPS_HEADER);
    s.push('\n');
    for (dir, records) in [("x", &report.records_x), ("y", &report.records_y)] {
        for r in records {
            writeln!(
                s,
                "{dir},{},{},{},{},{}",
                r.time_index,
                format_value(r.ise_auto),
                format_value(r.ise_cross),
                format_value(r.bandwidth_auto),
                format_value(r.bandwidth_cross)
            )
            .unwrap();
        }
    }
    s
}

pub fn render(report: &GcGmcReport, config: &AnalysisConfig, inputs: &Inputs) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| writeln!(s, "{k} = {v}").unwrap();
    kv("format_version", FORMAT_VERSION.to_string());
    kv("x.label", report.x_label.clone());
    kv("x.path", inputs.x_path.display().to_string());
    kv("y.label", report.y_label.clone());
    kv("y.path", inputs.y_path.display().to_string());
    kv(
        "config.train_fraction",
        inputs
            .train_fraction
            .map_or("none".to_string(), |f| f.to_string()),
    );
    kv("config.n_total", report.plan.n_total().to_string());
    kv(
        "config.n_train_initial",
        report.plan.n_train_initial().to_string(),
    );
    kv("config.n_test", report.plan.n_test().to_string());
    kv(
        "config.derivative_order",
        config.semimetric.derivative_order().to_string(),
    );
    kv("config.kernel", config.kernel.kind.to_string());
    kv(
        "config.bandwidth_quantiles",
        config
            .search
            .quantiles()
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    kv(
        "config.min_active_neighbors",
        config.search.min_active_neighbors().to_string(),
    );
    kv(
        "config.refresh_bandwidths",
        config.refresh_bandwidths.to_string(),
    );
    let sums = |rs: &[fgc_core::ForecastRecord]| {
        (
            rs.iter().map(|r| r.ise_auto).sum::<f64>(),
            rs.iter().map(|r| r.ise_cross).sum::<f64>(),
        )
    };
    let (ax, cx) = sums(&report.records_x);
    let (ay, cy) = sums(&report.records_y);
    kv("result.gcgmc_x", opt(report.gcgmc_x));
    kv("result.gcgmc_y", opt(report.gcgmc_y));
    kv("result.sum_ise_auto_x", format_value(ax));
    kv("result.sum_ise_cross_x", format_value(cx));
    kv("result.sum_ise_auto_y", format_value(ay));
    kv("result.sum_ise_cross_y", format_value(cy));
    kv("result.decision", report.decision.to_string());
    kv(
        "result.undefined",
        match (report.gcgmc_x, report.gcgmc_y) {
            (Some(_), Some(_)) => "none",
            (None, Some(_)) => "x",
            (Some(_), None) => "y",
            (None, None) => "x,y",
        }
        .to_string(),
    );
    kv("result.summary", summary_line(report));
    s.push_str("[steps]\n");
    s.push_str(&steps_csv(report));
    s
}

/// Parses the `key = value` header of a report (stops at `[steps]`).
#[cfg(test)]
pub fn parse_keys(text: &str) -> std::collections::BTreeMap<String, String> {
    text.lines()
        .take_while(|l| *l != "[steps]")
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
