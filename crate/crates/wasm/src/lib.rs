//! Browser bindings for the demo page in `www/`. Each export takes plain
//! numbers and returns a JSON string; the page renders the embedded SVG.
//!
//! The real work lives in [`demo`] so it can be tested natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(result: Result<String, String>) -> Result<String, JsValue> {
    result.map_err(|e| JsValue::from_str(&e))
}

/// Complementarity heatmap and group means of a synthetic score table.
#[wasm_bindgen]
pub fn complementarity_demo(
    seed: u64,
    humans: usize,
    automatics: usize,
    systems: usize,
    utterances: usize,
    rho: f64,
) -> Result<String, JsValue> {
    let params = demo::SynthParams {
        seed,
        humans,
        automatics,
        systems,
        utterances,
        rho,
    };
    js(demo::complementarity(&params))
}

/// PCA map of the metrics with Louvain cluster colors.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn structure_demo(
    seed: u64,
    humans: usize,
    automatics: usize,
    systems: usize,
    utterances: usize,
    rho: f64,
    utterance_level: bool,
    resolution: f64,
) -> Result<String, JsValue> {
    let params = demo::SynthParams {
        seed,
        humans,
        automatics,
        systems,
        utterances,
        rho,
    };
    js(demo::structure(&params, utterance_level, resolution))
}

/// Borda against exact Kemeny on random families.
#[wasm_bindgen]
pub fn kemeny_demo(samples: usize, max_voters: usize, max_items: usize, seed: u64) -> Result<String, JsValue> {
    js(demo::kemeny(samples, max_voters, max_items, seed))
}
