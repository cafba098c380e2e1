//! Browser bindings: the page edits a triple config (same TOML as the CLI) and asks
//! for the Dirac heatmap, the Morita verdict or the irreducibility check.

use finite_triple::catalog::layout::{slot, Species};
use finite_triple::config::{build_triple, parse_config, TripleConfig};
use finite_triple::report::run_plan;
use wasm_bindgen::prelude::*;

const PRESETS: &[(&str, &str)] = &[
    ("nonstandard_cc", include_str!("../../../configs/nonstandard_cc.toml")),
    ("nonstandard_gamma", include_str!("../../../configs/nonstandard_gamma.toml")),
    ("original_cc", include_str!("../../../configs/original_cc.toml")),
    ("pati_salam", include_str!("../../../configs/pati_salam.toml")),
];

fn config(text: &str) -> Result<TripleConfig, String> {
    parse_config(text).map_err(|e| e.to_string())
}

/// `|D_ij|`, row-major over the 32 basis slots.
pub fn heatmap(text: &str) -> Result<Vec<f64>, String> {
    let t = build_triple(&config(text)?).map_err(|e| e.to_string())?;
    let d = t.dirac().matrix();
    Ok((0..32).flat_map(|i| (0..32).map(move |j| d[(i, j)].norm())).collect())
}

/// JSON report restricted to checks whose name starts with one of `prefixes`.
pub fn report_for(text: &str, prefixes: &[&str]) -> Result<String, String> {
    let cfg = config(text)?;
    Ok(run_plan(&cfg, |name| prefixes.iter().any(|p| name.starts_with(p))).to_json_string())
}

/// Short particle label of basis slot `k` (column-major `row + 8 col`).
pub fn label(k: usize) -> String {
    let s = slot(k % 8, k / 8);
    let colour = ["", "r", "g", "b"];
    let (name, col) = if s.anti { (k / 8, k % 8 - 4) } else { (k % 8, k / 8) };
    let base = match s.species {
        Species::NuR => "νR",
        Species::ER => "eR",
        Species::LeptonL => ["νL", "eL"][name - 2],
        Species::UR => "uR",
        Species::DR => "dR",
        Species::QuarkL => ["uL", "dL"][name - 2],
    };
    let bar = if s.anti { "\u{0304}" } else { "" };
    format!("{base}{bar}{}", colour[col])
}

#[wasm_bindgen]
pub fn preset(name: &str) -> Option<String> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| t.to_string())
}

#[wasm_bindgen]
pub fn dirac_heatmap(config: &str) -> Result<Vec<f64>, JsError> {
    heatmap(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn morita_verdict(config: &str) -> Result<String, JsError> {
    report_for(config, &["property_m.", "clifford.", "one_forms."]).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn irreducibility(config: &str) -> Result<String, JsError> {
    report_for(config, &["irreducibility."]).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn slot_label(k: usize) -> String {
    label(k)
}
