//! CSV, JSON and SVG emission. CSV artifacts carry the resolved
//! configuration as leading comment lines; JSON artifacts are a single
//! object with `config`, `results` and `errors`. Floats are printed in
//! shortest round-trip form, so identical runs give identical bytes.

use crate::config::{OutputFormat, RunConfig};
use serde::Serialize;
use serde_json::json;
use zetalab::chain::{CellValue, ChainReport, MEMBER_NAMES};

pub fn config_comment_lines(cfg: &RunConfig) -> String {
    let mut s = String::new();
    for (k, v) in cfg.flat_pairs() {
        s.push_str(&format!("# {k} = {v}\n"));
    }
    s
}

/// Render the standard JSON envelope.
pub fn json_envelope<T: Serialize>(cfg: &RunConfig, results: &T, errors: &[String]) -> String {
    let config: serde_json::Map<String, serde_json::Value> = cfg
        .flat_pairs()
        .into_iter()
        .map(|(k, v)| (k, serde_json::Value::String(v)))
        .collect();
    let doc = json!({
        "config": config,
        "results": results,
        "errors": errors,
    });
    serde_json::to_string_pretty(&doc).expect("json rendering")
}

/// Render a machine-readable error object (stdout payload on failure).
pub fn json_error(kind: &str, message: &str) -> String {
    serde_json::to_string_pretty(&json!({
        "error": { "kind": kind, "message": message }
    }))
    .expect("json rendering")
}

pub fn cell_csv(cell: &CellValue) -> String {
    match cell.value() {
        Some(v) => format!("{v}"),
        None => "ERR".into(),
    }
}

/// One row per tau, columns per member and ratio.
pub fn chain_csv(cfg: &RunConfig, report: &ChainReport) -> String {
    let mut s = config_comment_lines(cfg);
    let mut header = vec!["tau".to_string()];
    header.extend(MEMBER_NAMES.iter().map(|m| m.to_string()));
    header.extend(MEMBER_NAMES.iter().map(|m| format!("ratio_{m}")));
    s.push_str(&header.join(","));
    s.push('\n');
    for (j, tau) in report.tau_grid.iter().enumerate() {
        let mut row = vec![format!("{tau}")];
        for m in 0..MEMBER_NAMES.len() {
            row.push(cell_csv(&report.members[m][j]));
        }
        for m in 0..MEMBER_NAMES.len() {
            row.push(cell_csv(&report.ratios[m][j]));
        }
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Log-log plot of |ratio - 1| against 1/ln tau, one polyline per member.
pub fn chain_svg(report: &ChainReport) -> String {
    const W: f64 = 720.0;
    const H: f64 = 480.0;
    const M: f64 = 60.0;
    let palette = [
        "#444444", "#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085",
    ];
    // collect plotted points per member
    let mut series: Vec<(usize, Vec<(f64, f64)>)> = Vec::new();
    for m in 1..MEMBER_NAMES.len() {
        let mut pts = Vec::new();
        for (j, tau) in report.tau_grid.iter().enumerate() {
            if let Some(r) = report.ratios[m][j].value() {
                let dev = (r - 1.0).abs();
                if dev > 0.0 {
                    pts.push(((1.0 / tau.ln()).log10(), dev.log10()));
                }
            }
        }
        if !pts.is_empty() {
            series.push((m, pts));
        }
    }
    let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    let (mut x0, mut x1) = (f64::MAX, f64::MIN);
    let (mut y0, mut y1) = (f64::MAX, f64::MIN);
    for (x, y) in &all {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if all.is_empty() {
        x0 = -1.0;
        x1 = 0.0;
        y0 = -2.0;
        y1 = 0.0;
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"monospace\" font-size=\"12\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <line x1=\"{M}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{M}\" y1=\"{M}\" x2=\"{M}\" y2=\"{}\" stroke=\"black\"/>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">log10( 1 / ln tau )</text>\n\
         <text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">\
         log10 |ratio - 1|</text>\n",
        H - M,
        W - M,
        H - M,
        H - M,
        W / 2.0,
        H - 18.0,
        H / 2.0,
        H / 2.0,
    );
    for (idx, (m, pts)) in series.iter().enumerate() {
        let color = palette[idx % palette.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
        for (x, y) in pts {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                sx(*x),
                sy(*y)
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{}</text>\n",
            W - M + 6.0,
            M + 16.0 * idx as f64,
            MEMBER_NAMES[*m]
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Whether the configured format is JSON.
pub fn is_json(cfg: &RunConfig) -> bool {
    cfg.output == OutputFormat::Json
}
