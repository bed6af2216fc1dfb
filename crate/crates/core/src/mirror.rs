//! Hall-of-mirrors waves: the s wave that scatters, its positive-image
//! companion, and the higher partial waves that do not.
//!
//! Every wave is a finite plane-wave sum over open channels,
//! `sum_n amp_n Y(n pi y) X(kx_n (x - x0))`, with `Y` a sine or cosine in y
//! and `X` a cosine (even) or sine (odd) in x. Derivatives are taken term by
//! term.

use crate::error::{domain, Result};
use crate::greens::{greens_kummer, Representation};
use crate::par::map_indices;
use crate::renorm::{effective_strength, DEFAULT_TOL};
use crate::waveguide::{self, chi, Point, WireConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MirrorKind {
    S,
    SPlus,
    Px,
    Dxy,
    F,
}

impl MirrorKind {
    pub const ALL: [MirrorKind; 5] = [Self::S, Self::SPlus, Self::Px, Self::Dxy, Self::F];

    pub fn name(self) -> &'static str {
        match self {
            Self::S => "s",
            Self::SPlus => "s_plus",
            Self::Px => "px",
            Self::Dxy => "dxy",
            Self::F => "f",
        }
    }

    /// Built from `chi_n(y)` and therefore zero on both walls.
    pub fn vanishes_on_walls(self) -> bool {
        !matches!(self, Self::SPlus)
    }
}

impl FromStr for MirrorKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| domain("mirror kind", format!("unknown kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy)]
enum Transverse {
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy)]
struct Mode {
    q: f64,
    kx: f64,
    amp: f64,
    ty: Transverse,
    odd: bool,
}

impl Mode {
    #[inline]
    fn transverse(&self, y: f64) -> f64 {
        match self.ty {
            Transverse::Sin => (self.q * y).sin(),
            Transverse::Cos => (self.q * y).cos(),
        }
    }

    #[inline]
    fn value(&self, dx: f64, y: f64) -> f64 {
        let (s, c) = (self.kx * dx).sin_cos();
        self.amp * self.transverse(y) * if self.odd { s } else { c }
    }

    #[inline]
    fn dx(&self, dx: f64, y: f64) -> f64 {
        let (s, c) = (self.kx * dx).sin_cos();
        self.amp * self.kx * self.transverse(y) * if self.odd { c } else { -s }
    }
}

fn modes(kind: MirrorKind, k: f64, y0: f64, open: usize) -> Vec<Mode> {
    let mut out = Vec::with_capacity(open + 1);
    if kind == MirrorKind::SPlus {
        // The uniform cosine mode, open at any k > 0.
        out.push(Mode {
            q: 0.0,
            kx: k,
            amp: 1.0 / k,
            ty: Transverse::Cos,
            odd: false,
        });
    }
    for n in 1..=open {
        let q = n as f64 * PI;
        let kx = waveguide::kx_unchecked(n, k).re;
        let (sy0, cy0) = (q * y0).sin_cos();
        let (amp, ty, odd) = match kind {
            MirrorKind::S => (2.0 * sy0 / kx, Transverse::Sin, false),
            MirrorKind::SPlus => (2.0 * cy0 / kx, Transverse::Cos, false),
            // (1/k) d/dx of the s wave
            MirrorKind::Px => (-2.0 * sy0 / k, Transverse::Sin, true),
            // (2/k^2) d/dx d/dy of the s_plus wave
            MirrorKind::Dxy => (4.0 * q * cy0 / (k * k), Transverse::Sin, true),
            // (1/k^3) (d^3/dx^3 - 3 d/dx d^2/dy^2) of the s wave
            MirrorKind::F => (2.0 * sy0 * (kx * kx - 3.0 * q * q) / k.powi(3), Transverse::Sin, true),
        };
        out.push(Mode { q, kx, amp, ty, odd });
    }
    out
}

fn prepared(kind: MirrorKind, k: f64, cfg: &WireConfig) -> Result<Vec<Mode>> {
    let cfg = cfg.validated()?;
    if !(k.is_finite() && k > 0.0) {
        return Err(domain("mirror", format!("wavenumber {k} must be positive")));
    }
    let open = waveguide::open_channel_count(k, cfg.mode_guard)?;
    Ok(modes(kind, k, cfg.y0, open))
}

fn check_point(r: Point) -> Result<()> {
    if r.x.is_finite() && (0.0..=1.0).contains(&r.y) {
        Ok(())
    } else {
        Err(domain("mirror", format!("point ({}, {}) lies outside the strip", r.x, r.y)))
    }
}

fn sum_modes(m: &[Mode], dx: f64, y: f64) -> f64 {
    m.iter().map(|md| md.value(dx, y)).sum()
}

/// `phi_s = sum_open chi_n(y) chi_n(y0) cos(kx_n (x - x0)) / kx_n`, which
/// equals `-Im G_w(r, r0)`.
pub fn mirror_s(r: Point, k: f64, cfg: &WireConfig) -> Result<f64> {
    mirror_partial(MirrorKind::S, r, k, cfg)
}

/// `(1/k) cos(k (x - x0)) + 2 sum_open cos(n pi y) cos(n pi y0) cos(kx_n (x - x0)) / kx_n`.
pub fn mirror_s_plus(r: Point, k: f64, cfg: &WireConfig) -> Result<f64> {
    mirror_partial(MirrorKind::SPlus, r, k, cfg)
}

pub fn mirror_partial(kind: MirrorKind, r: Point, k: f64, cfg: &WireConfig) -> Result<f64> {
    check_point(r)?;
    let m = prepared(kind, k, cfg)?;
    Ok(sum_modes(&m, r.x - cfg.x0, r.y))
}

/// The s-wave sum at `r` for `open` channels, without validation.
pub(crate) fn plane_wave_s(k: f64, r: Point, r0: Point, open: usize) -> f64 {
    let m = modes(MirrorKind::S, k, r0.y, open);
    sum_modes(&m, r.x - r0.x, r.y)
}

/// `phi~_s(r0) = phi_s(r0) / (1 - s G_r)`.
pub fn renormalized_mirror_at_impurity(k: f64, cfg: &WireConfig) -> Result<Complex64> {
    let st = effective_strength(k, cfg, DEFAULT_TOL)?;
    let p = cfg.impurity();
    Ok(plane_wave_s(k, p, p, st.sum.open) * st.renorm_factor)
}

/// Amplitude with which a mirror wave drives the impurity, read off from its
/// channel content on the cuts `x = x0 -+ l`.
///
/// The field and its x-derivative on each cut are projected onto `chi_n` by
/// the trapezoidal rule with `samples` intervals (exact for sine series once
/// `samples > 2N`), split into right- and left-moving parts, and the waves
/// heading towards the impurity are evaluated there. The s wave returns
/// `phi_s(r0)`; the higher partials return zero.
pub fn s_channel_coupling(kind: MirrorKind, k: f64, cfg: &WireConfig, l: f64, samples: usize) -> Result<Complex64> {
    if !kind.vanishes_on_walls() {
        return Err(domain("s_channel_coupling", "s_plus does not satisfy the wall condition"));
    }
    if !(l.is_finite() && l > 0.0) {
        return Err(domain("s_channel_coupling", "cut distance must be positive"));
    }
    let m = prepared(kind, k, cfg)?;
    let open = m.len();
    if samples <= 2 * open {
        return Err(domain("s_channel_coupling", format!("needs more than {} samples", 2 * open)));
    }
    let h = 1.0 / samples as f64;
    let ys: Vec<f64> = (0..=samples).map(|j| j as f64 * h).collect();
    let project = |dx: f64| -> Vec<(f64, f64)> {
        let psi: Vec<f64> = ys.iter().map(|&y| sum_modes(&m, dx, y)).collect();
        let dpsi: Vec<f64> = ys.iter().map(|&y| m.iter().map(|md| md.dx(dx, y)).sum()).collect();
        (1..=open)
            .map(|n| {
                // Endpoints drop out: chi_n vanishes on the walls.
                let (mut c, mut d) = (0.0, 0.0);
                for j in 1..samples {
                    let w = chi(n, ys[j]);
                    c += psi[j] * w;
                    d += dpsi[j] * w;
                }
                (c * h, d * h)
            })
            .collect()
    };
    let right = project(l);
    let left = project(-l);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=open {
        let kx = waveguide::kx_unchecked(n, k).re;
        let back = Complex64::from_polar(1.0, kx * l);
        let ikx = Complex64::new(0.0, kx);
        // Left-moving part on the right cut, right-moving part on the left cut,
        // both referred to x = x0.
        let (c, d) = right[n - 1];
        let incoming_right = back * (c - d / ikx) * 0.5;
        let (c, d) = left[n - 1];
        let incoming_left = back * (c + d / ikx) * 0.5;
        acc += (incoming_right + incoming_left) * chi(n, cfg.y0);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        let g = Self { x_range, y_range, nx, ny };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        if !(x0.is_finite() && x1.is_finite() && x0 <= x1) {
            return Err(domain("grid", "x range must be finite and ordered"));
        }
        if !(0.0 <= y0 && y0 <= y1 && y1 <= 1.0) {
            return Err(domain("grid", format!("y range [{y0}, {y1}] must lie inside [0, 1]")));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(domain("grid", "needs at least one sample per axis"));
        }
        Ok(())
    }

    fn axis(range: (f64, f64), n: usize, i: usize) -> f64 {
        if n == 1 {
            return range.0;
        }
        if i == n - 1 {
            return range.1;
        }
        range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        Self::axis(self.x_range, self.nx, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        Self::axis(self.y_range, self.ny, j)
    }
}

/// What a field map samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Mirror(MirrorKind),
    /// Wire Green's function `G_w(r, r0)` from the Kummer series.
    Greens { tol: f64 },
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Mirror(m) => m.name(),
            Self::Greens { .. } => Representation::Kummer.name(),
        }
    }
}

/// Samples in row-major order: `values[j * nx + i]` is at `(x(i), y(j))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub grid: GridSpec,
    pub kind: FieldKind,
    pub k: f64,
    pub values: Vec<Complex64>,
}

impl FieldGrid {
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

pub fn field_map(kind: FieldKind, k: f64, cfg: &WireConfig, grid: &GridSpec) -> Result<FieldGrid> {
    grid.validate()?;
    let cfg = cfg.validated()?;
    let rows: Vec<Result<Vec<Complex64>>> = match kind {
        FieldKind::Mirror(m) => {
            let md = prepared(m, k, &cfg)?;
            map_indices(grid.ny, |j| {
                let y = grid.y(j);
                Ok((0..grid.nx)
                    .map(|i| Complex64::new(sum_modes(&md, grid.x(i) - cfg.x0, y), 0.0))
                    .collect())
            })
        }
        FieldKind::Greens { tol } => {
            let r0 = cfg.impurity();
            map_indices(grid.ny, |j| {
                let y = grid.y(j);
                (0..grid.nx)
                    .map(|i| greens_kummer(Point::new(grid.x(i), y), r0, k, tol).map(|g| g.value))
                    .collect()
            })
        }
    };
    let mut values = Vec::with_capacity(grid.nx * grid.ny);
    for row in rows {
        values.extend(row?);
    }
    Ok(FieldGrid {
        grid: *grid,
        kind,
        k,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn px_and_dxy_are_odd_in_x() {
        let cfg = WireConfig::new(0.37, 0.1).unwrap().with_x0(0.4).unwrap();
        for kind in [MirrorKind::Px, MirrorKind::Dxy, MirrorKind::F] {
            let a = mirror_partial(kind, Point::new(0.4 + 0.23, 0.61), 9.0, &cfg).unwrap();
            let b = mirror_partial(kind, Point::new(0.4 - 0.23, 0.61), 9.0, &cfg).unwrap();
            assert!((a + b).abs() < 1e-14);
        }
    }

    #[test]
    fn s_wave_normalization() {
        // One open mode: chi_1(y) chi_1(y0) cos(kx dx) / kx.
        let cfg = WireConfig::new(0.3, 0.1).unwrap();
        let k = 1.5 * PI;
        let kx = (k * k - PI * PI).sqrt();
        let r = Point::new(0.2, 0.8);
        let want = SQRT_2 * (PI * 0.8).sin() * SQRT_2 * (PI * 0.3).sin() * (kx * 0.2).cos() / kx;
        assert!((mirror_s(r, k, &cfg).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in MirrorKind::ALL {
            assert_eq!(k.name().parse::<MirrorKind>().unwrap(), k);
        }
        assert!("d".parse::<MirrorKind>().is_err());
    }
}
