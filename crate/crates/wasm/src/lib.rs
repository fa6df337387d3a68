//! Browser bindings: render the transformed domain indicator as an RGBA
//! field, certify a modulus of continuity, and profile the boundary-collar
//! growth of the transform — the three interactive operations of the demo
//! page. All substance lives in [`ops`], which is plain Rust and fully
//! exercised by host-side tests; the exported functions only marshal
//! strings, bytes, and error messages across the JS boundary.

use wasm_bindgen::prelude::*;

pub mod ops;

/// RGBA pixels (row-major, n×n×4) of the restricted transform of the
/// domain's indicator. `component` is "abs", "re", or "im"; `domain_json`
/// is the same JSON the CLI accepts.
#[wasm_bindgen]
pub fn render_transform(
    domain_json: &str,
    n: usize,
    pad: usize,
    component: &str,
) -> Result<Vec<u8>, JsError> {
    ops::render_transform(domain_json, n, pad, component).map_err(to_js)
}

/// Regularity certificate plus a sampled curve of the modulus, as JSON:
/// `{"dini_value":…,"almost_dec_constant":…,"weak_constant":…,
///   "is_regular":…,"samples":[[t,omega],…]}`.
#[wasm_bindgen]
pub fn certify_modulus(modulus_json: &str, epsilon: f64) -> Result<String, JsError> {
    ops::certify_modulus(modulus_json, epsilon).map_err(to_js)
}

/// Collar profile of the transformed indicator under the given modulus, as
/// JSON: `{"value":…,"interior":…,"exterior":…,"scales":[{"rho":…,"sup":…},…]}`
/// with one entry per dyadic band of boundary distance.
#[wasm_bindgen]
pub fn collar_profile(domain_json: &str, modulus_json: &str, n: usize) -> Result<String, JsError> {
    ops::collar_profile(domain_json, modulus_json, n).map_err(to_js)
}

fn to_js(e: beurling_core::Error) -> JsError {
    JsError::new(&e.to_string())
}
