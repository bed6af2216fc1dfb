//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Each export has a plain Rust twin (`*_rows`, `*_values`, `*_summary`)
//! so the numerics can be tested natively.

use serde::Serialize;
use std::str::FromStr;
use wasm_bindgen::prelude::*;
use wirescat::mirror::{field_map, FieldKind, GridSpec, MirrorKind};
use wirescat::renorm::DEFAULT_TOL;
use wirescat::scattering::s_matrix;
use wirescat::sweep::{sweep_k, Grid, KSweep};
use wirescat::WireConfig;

/// Stride of the flat array returned by [`sweep`].
pub const SWEEP_STRIDE: usize = 4;

/// Rows of `(kd, sigma, conductance, N)`; gap points carry NaN.
pub fn sweep_rows(kd_min: f64, kd_max: f64, points: usize, y0: f64, a: f64) -> wirescat::Result<Vec<f64>> {
    let spec = KSweep::new(Grid::new(kd_min, kd_max, points)?, vec![y0], a);
    let rows = sweep_k(&spec)?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.kd, r.sigma, r.conductance, r.n as f64])
        .collect())
}

/// Real part of a mirror wave (or of the wire Green's function for
/// `kind = "greens"`) on an `nx * ny` grid over `[x_min, x_max] x [0, 1]`,
/// row-major in y.
pub fn field_values(kind: &str, kd: f64, y0: f64, x_min: f64, x_max: f64, nx: usize, ny: usize) -> wirescat::Result<Vec<f64>> {
    let kind = if kind == "greens" {
        FieldKind::Greens { tol: DEFAULT_TOL }
    } else {
        FieldKind::Mirror(MirrorKind::from_str(kind)?)
    };
    let cfg = WireConfig::new(y0, 0.1)?;
    let grid = GridSpec::new((x_min, x_max), (0.0, 1.0), nx, ny)?;
    Ok(field_map(kind, kd, &cfg, &grid)?.values.iter().map(|z| z.re).collect())
}

#[derive(Serialize)]
pub struct PointSummary {
    pub kd: f64,
    pub open: usize,
    pub sigma: f64,
    pub conductance: f64,
    pub sigma_n: Vec<f64>,
    pub rs: [f64; 2],
    pub gr: [f64; 2],
    pub unitarity_residual: f64,
    /// `|T_nm|^2`, row-major.
    pub transmission_probabilities: Vec<f64>,
}

pub fn point_summary(kd: f64, y0: f64, a: f64) -> wirescat::Result<PointSummary> {
    let res = s_matrix(kd, &WireConfig::new(y0, a)?)?;
    let n = res.open;
    let mut tp = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            tp.push(res.t[(i, j)].norm_sqr());
        }
    }
    Ok(PointSummary {
        kd,
        open: n,
        sigma: res.sigma,
        conductance: res.conductance,
        sigma_n: res.sigma_n.clone(),
        rs: [res.state.rs.re, res.state.rs.im],
        gr: [res.state.sum.g_r.re, res.state.sum.g_r.im],
        unitarity_residual: res.unitarity_residual,
        transmission_probabilities: tp,
    })
}

fn js(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Flat `(kd, sigma, conductance, N)` rows; see [`SWEEP_STRIDE`].
#[wasm_bindgen]
pub fn sweep(kd_min: f64, kd_max: f64, points: usize, y0: f64, a: f64) -> Result<Vec<f64>, JsError> {
    sweep_rows(kd_min, kd_max, points, y0, a).map_err(js)
}

#[wasm_bindgen]
pub fn field(kind: &str, kd: f64, y0: f64, x_min: f64, x_max: f64, nx: usize, ny: usize) -> Result<Vec<f64>, JsError> {
    field_values(kind, kd, y0, x_min, x_max, nx, ny).map_err(js)
}

/// S-matrix summary at one energy, as JSON.
#[wasm_bindgen]
pub fn scatter(kd: f64, y0: f64, a: f64) -> Result<String, JsError> {
    let s = point_summary(kd, y0, a).map_err(js)?;
    serde_json::to_string(&s).map_err(js)
}
