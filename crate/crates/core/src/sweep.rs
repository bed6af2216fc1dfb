//! Energy and geometry sweeps of the scattering observables.
//!
//! Points within the mode guard of an opening are not evaluated; they come
//! back as gap rows carrying the edge asymptotes instead.

use crate::error::{domain, Error, Result};
use crate::par::map_indices;
use crate::renorm::{effective_strength, gr_edge_asymptote, EdgeSide};
use crate::scattering::{free_cross_section, phase_shift_from_state, sigma_edge_asymptote};
use crate::waveguide::{WireConfig, DEFAULT_MODE_GUARD};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `points` equally spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        let g = Self { min, max, points };
        g.validate("grid")?;
        Ok(g)
    }

    fn validate(&self, what: &'static str) -> Result<()> {
        if self.points < 2 {
            return Err(domain(what, "a grid needs at least two points"));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(domain(what, format!("bad range [{}, {}]", self.min, self.max)));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSweep {
    pub kd: Grid,
    /// One block of rows per impurity height, in this order.
    pub y0: Vec<f64>,
    pub a: f64,
    pub x0: f64,
    pub tol: f64,
    pub mode_guard: f64,
}

impl KSweep {
    pub fn new(kd: Grid, y0: Vec<f64>, a: f64) -> Self {
        Self {
            kd,
            y0,
            a,
            x0: 0.0,
            tol: crate::renorm::DEFAULT_TOL,
            mode_guard: DEFAULT_MODE_GUARD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySweep {
    pub kd: f64,
    pub a: Grid,
    pub y0: Grid,
    pub x0: f64,
    pub tol: f64,
    pub mode_guard: f64,
}

impl GeometrySweep {
    pub fn new(kd: f64, a: Grid, y0: Grid) -> Self {
        Self {
            kd,
            a,
            y0,
            x0: 0.0,
            tol: crate::renorm::DEFAULT_TOL,
            mode_guard: DEFAULT_MODE_GUARD,
        }
    }
}

/// One sweep point. Gap rows leave the exact columns NaN and fill the
/// asymptote columns; regular rows do the opposite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub y0: f64,
    pub a: f64,
    pub kd: f64,
    pub n: usize,
    pub sigma: f64,
    pub conductance: f64,
    pub conductance_empty: f64,
    pub sigma_free: f64,
    pub gr_re: f64,
    pub gr_im: f64,
    pub rs_re: f64,
    pub rs_im: f64,
    pub delta0: f64,
    pub gap: bool,
    pub gr_asym_re: f64,
    pub gr_asym_im: f64,
    pub sigma_asym: f64,
}

impl SweepRow {
    pub const COLUMNS: [&'static str; 17] = [
        "y0",
        "a",
        "kd",
        "N",
        "sigma",
        "conductance",
        "conductance_empty",
        "sigma_free",
        "gr_re",
        "gr_im",
        "rs_re",
        "rs_im",
        "delta0",
        "gap",
        "gr_asym_re",
        "gr_asym_im",
        "sigma_asym",
    ];
}

fn gap_row(k: f64, cfg: &WireConfig, sigma_free: f64) -> SweepRow {
    let m = (k / PI).round().max(1.0) as usize;
    let eps = k - m as f64 * PI;
    let (side, n) = if eps < 0.0 { (EdgeSide::Below, m - 1) } else { (EdgeSide::Above, m) };
    let (mut gr, mut sig) = ((f64::NAN, f64::NAN), f64::NAN);
    if eps != 0.0 {
        if let Ok(g) = gr_edge_asymptote(m, eps.abs(), cfg.y0, side) {
            gr = (g.re, g.im);
            sig = match side {
                EdgeSide::Below => sigma_edge_asymptote(m, -eps, cfg.y0).unwrap_or(f64::NAN),
                EdgeSide::Above => 1.0,
            };
        }
    }
    SweepRow {
        y0: cfg.y0,
        a: cfg.a,
        kd: k,
        n,
        sigma: f64::NAN,
        conductance: f64::NAN,
        conductance_empty: n as f64,
        sigma_free,
        gr_re: f64::NAN,
        gr_im: f64::NAN,
        rs_re: f64::NAN,
        rs_im: f64::NAN,
        delta0: f64::NAN,
        gap: true,
        gr_asym_re: gr.0,
        gr_asym_im: gr.1,
        sigma_asym: sig,
    }
}

/// Observables at one point; a mode-opening singularity yields a gap row.
pub fn sweep_point(k: f64, cfg: &WireConfig, tol: f64) -> Result<SweepRow> {
    let sigma_free = free_cross_section(k, cfg.a)?;
    let st = match effective_strength(k, cfg, tol) {
        Ok(st) => st,
        Err(Error::ModeOpeningSingularity { .. }) => return Ok(gap_row(k, cfg, sigma_free)),
        Err(e) => return Err(e),
    };
    let n = st.sum.open;
    let sigma = st.rs.norm_sqr() * st.sum.sigma_sum.powi(2);
    let delta0 = if n > 0 { phase_shift_from_state(&st).delta0 } else { 0.0 };
    Ok(SweepRow {
        y0: cfg.y0,
        a: cfg.a,
        kd: k,
        n,
        sigma,
        conductance: n as f64 - sigma,
        conductance_empty: n as f64,
        sigma_free,
        gr_re: st.sum.g_r.re,
        gr_im: st.sum.g_r.im,
        rs_re: st.rs.re,
        rs_im: st.rs.im,
        delta0,
        gap: false,
        gr_asym_re: f64::NAN,
        gr_asym_im: f64::NAN,
        sigma_asym: f64::NAN,
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(domain("sweep", format!("tolerance {tol} must be positive")))
    }
}

fn collect(rows: Vec<Result<SweepRow>>) -> Result<Vec<SweepRow>> {
    rows.into_iter().collect()
}

pub fn sweep_k(spec: &KSweep) -> Result<Vec<SweepRow>> {
    spec.kd.validate("sweep_k")?;
    check_tol(spec.tol)?;
    if spec.kd.min <= 0.0 {
        return Err(domain("sweep_k", "kd must stay positive"));
    }
    if spec.y0.is_empty() {
        return Err(domain("sweep_k", "needs at least one impurity height"));
    }
    let cfgs = spec
        .y0
        .iter()
        .map(|&y0| {
            WireConfig::new(y0, spec.a)?
                .with_x0(spec.x0)?
                .with_mode_guard(spec.mode_guard)
        })
        .collect::<Result<Vec<_>>>()?;
    let per = spec.kd.points;
    collect(map_indices(per * cfgs.len(), |i| {
        sweep_point(spec.kd.value(i % per), &cfgs[i / per], spec.tol)
    }))
}

/// Rows ordered by `y0` first, then `a`.
pub fn sweep_geometry(spec: &GeometrySweep) -> Result<Vec<SweepRow>> {
    spec.a.validate("sweep_geometry")?;
    spec.y0.validate("sweep_geometry")?;
    check_tol(spec.tol)?;
    let base = WireConfig::new(0.5, 0.0)?
        .with_x0(spec.x0)?
        .with_mode_guard(spec.mode_guard)?;
    crate::waveguide::open_channel_count(spec.kd, spec.mode_guard)?;
    let cfgs = (0..spec.y0.points)
        .flat_map(|j| (0..spec.a.points).map(move |i| (spec.y0.value(j), spec.a.value(i))))
        .map(|(y0, a)| base.with_y0(y0)?.with_a(a))
        .collect::<Result<Vec<_>>>()?;
    collect(map_indices(cfgs.len(), |i| sweep_point(spec.kd, &cfgs[i], spec.tol)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let g = Grid::new(0.5 * PI, 7.5 * PI, 2000).unwrap();
        assert_eq!(g.value(0), 0.5 * PI);
        assert_eq!(g.value(1999), 7.5 * PI);
        assert!(Grid::new(1.0, 1.0, 5).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn gap_row_below_and_above() {
        let cfg = WireConfig::new(0.05, 0.1).unwrap();
        let below = sweep_point(2.0 * PI - 1e-10, &cfg, 1e-12).unwrap();
        assert!(below.gap && below.n == 1 && below.sigma.is_nan());
        assert!(below.gr_asym_re < 0.0 && below.sigma_asym > 0.0);
        let above = sweep_point(2.0 * PI + 1e-10, &cfg, 1e-12).unwrap();
        assert!(above.gap && above.n == 2 && above.gr_asym_im < 0.0);
        assert_eq!(above.sigma_asym, 1.0);
    }
}
