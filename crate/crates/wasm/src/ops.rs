//! The demo page's three operations as plain Rust: everything here is
//! callable (and tested) on the host; the crate root only wraps these for
//! the JS boundary.

use beurling_core::geometry::DomainSpec;
use beurling_core::grid::GridFunction;
use beurling_core::moduli::Modulus;
use beurling_core::seminorms::{bloch_seminorm_sided, CollarSide};
use beurling_core::transform::beurling_spectral;
use beurling_core::{Complex64, Error, Result};
use serde::Serialize;

/// Grids beyond this size are refused: a 512² spectral transform with pad 4
/// is a 2048² FFT, around the most a demo page should block on.
const MAX_DEMO_N: usize = 512;

/// Whole-plane transform of the domain's indicator (the field is as
/// interesting outside Ω as inside, so nothing is masked away here).
fn transformed_indicator(domain_json: &str, n: usize, pad: usize) -> Result<GridFunction> {
    if n > MAX_DEMO_N {
        return Err(Error::Domain(format!(
            "demo resolution capped at {MAX_DEMO_N}, got {n}"
        )));
    }
    let d = DomainSpec::from_json(domain_json)?.build()?;
    let bbox = d.bounding_box().dilate(2.0);
    let chi = GridFunction::from_fn(bbox, n, |_| Complex64::new(1.0, 0.0))?.masked(&d);
    beurling_spectral(&chi, pad)
}

/// RGBA bytes (row-major, top row first) of one component of the
/// transformed indicator.
pub fn render_transform(
    domain_json: &str,
    n: usize,
    pad: usize,
    component: &str,
) -> Result<Vec<u8>> {
    let b = transformed_indicator(domain_json, n, pad)?;
    let values: Vec<f64> = match component {
        "abs" => b.values().iter().map(|v| v.norm()).collect(),
        "re" => b.values().iter().map(|v| v.re).collect(),
        "im" => b.values().iter().map(|v| v.im).collect(),
        other => {
            return Err(Error::Parse(format!(
                "component must be abs, re, or im, got {other:?}"
            )))
        }
    };
    let peak = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let scale = if peak > 0.0 { 1.0 / peak } else { 0.0 };
    let signed = component != "abs";
    let mut rgba = vec![0u8; 4 * n * n];
    for i in 0..n {
        for j in 0..n {
            // Grid row 0 is the bottom of the box; image row 0 is the top.
            let px = 4 * ((n - 1 - i) * n + j);
            let t = values[i * n + j] * scale;
            let (r, g, bl) = if signed { diverging(t) } else { magnitude(t) };
            rgba[px] = r;
            rgba[px + 1] = g;
            rgba[px + 2] = bl;
            rgba[px + 3] = 255;
        }
    }
    Ok(rgba)
}

/// Black→violet→orange→white ramp for t ∈ [0, 1].
fn magnitude(t: f64) -> (u8, u8, u8) {
    let stops: [(f64, [f64; 3]); 5] = [
        (0.0, [0.0, 0.0, 0.02]),
        (0.25, [0.28, 0.04, 0.40]),
        (0.5, [0.76, 0.21, 0.23]),
        (0.75, [0.98, 0.62, 0.14]),
        (1.0, [0.99, 0.99, 0.85]),
    ];
    ramp(&stops, t.clamp(0.0, 1.0))
}

/// Blue→white→red for t ∈ [−1, 1].
fn diverging(t: f64) -> (u8, u8, u8) {
    let stops: [(f64, [f64; 3]); 3] = [
        (0.0, [0.13, 0.40, 0.67]),
        (0.5, [0.97, 0.97, 0.97]),
        (1.0, [0.70, 0.09, 0.17]),
    ];
    ramp(&stops, (0.5 * (t + 1.0)).clamp(0.0, 1.0))
}

fn ramp<const K: usize>(stops: &[(f64, [f64; 3]); K], t: f64) -> (u8, u8, u8) {
    let mut lo = stops[0];
    let mut hi = stops[K - 1];
    for w in stops.windows(2) {
        if t >= w[0].0 && t <= w[1].0 {
            lo = w[0];
            hi = w[1];
            break;
        }
    }
    let s = if hi.0 > lo.0 { (t - lo.0) / (hi.0 - lo.0) } else { 0.0 };
    let c = |k: usize| ((lo.1[k] + s * (hi.1[k] - lo.1[k])) * 255.0).round() as u8;
    (c(0), c(1), c(2))
}

#[derive(Serialize)]
struct Certificate {
    /// None encodes +∞ (a divergent Dini integral) as JSON null.
    dini_value: Option<f64>,
    epsilon: f64,
    almost_dec_constant: Option<f64>,
    weak_constant: Option<f64>,
    is_regular: bool,
    samples: Vec<[f64; 2]>,
}

fn finite_or_null(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Regularity certificate plus a 64-point log-spaced sample of the curve.
pub fn certify_modulus(modulus_json: &str, epsilon: f64) -> Result<String> {
    let m = Modulus::from_json(modulus_json)?;
    let report = m.check_regular(epsilon)?;
    let cap = m.cap();
    let samples: Vec<[f64; 2]> = (0..64)
        .map(|k| {
            let t = cap * f64::powf(2.0, -12.0 * (1.0 - k as f64 / 63.0));
            Ok([t, m.eval(t)?])
        })
        .collect::<Result<_>>()?;
    let cert = Certificate {
        dini_value: finite_or_null(report.dini_value),
        epsilon: report.epsilon,
        almost_dec_constant: finite_or_null(report.almost_dec_constant),
        weak_constant: finite_or_null(report.weak_constant),
        is_regular: report.is_regular,
        samples,
    };
    serde_json::to_string(&cert).map_err(|e| Error::Parse(format!("serializing: {e}")))
}

#[derive(Serialize)]
struct CollarBand {
    rho: f64,
    sup: f64,
}

#[derive(Serialize)]
struct CollarReport {
    value: f64,
    interior: f64,
    exterior: f64,
    scales: Vec<CollarBand>,
}

/// Collar growth of the transformed indicator: suprema of |∇B χ_Ω|·ρ/ω(ρ)
/// per dyadic band of boundary distance ρ.
pub fn collar_profile(domain_json: &str, modulus_json: &str, n: usize) -> Result<String> {
    let b = transformed_indicator(domain_json, n, 4)?;
    let d = DomainSpec::from_json(domain_json)?.build()?;
    let m = Modulus::from_json(modulus_json)?;
    let rho_max = 0.25 * d.r_min();
    let rho_min = (rho_max / 8.0).max(4.0 * b.spacing());
    let both = bloch_seminorm_sided(&b, &d, &m, (rho_min, rho_max), CollarSide::Both)?;
    let interior = bloch_seminorm_sided(&b, &d, &m, (rho_min, rho_max), CollarSide::Interior)?;
    let exterior = bloch_seminorm_sided(&b, &d, &m, (rho_min, rho_max), CollarSide::Exterior)?;
    let report = CollarReport {
        value: both.value,
        interior: interior.value,
        exterior: exterior.value,
        scales: both
            .per_scale
            .iter()
            .map(|e| CollarBand { rho: e.scale, sup: e.sup })
            .collect(),
    };
    serde_json::to_string(&report).map_err(|e| Error::Parse(format!("serializing: {e}")))
}
