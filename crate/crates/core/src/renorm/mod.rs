//! Impurity t-matrix, renormalization sum and effective strength.

mod foldy;

pub use foldy::{foldy_solve, spectral_radius, FoldyMethod, FoldyProblem};

use crate::error::{domain, Error, Result};
use crate::greens::series::{regular_part, Stop};
use crate::greens::{free_unchecked, image_sum_regular, ImageSummation};
use crate::specfun::{bessel_j_unchecked, evaluate};
use crate::waveguide::{self, chi, WireConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Pole threshold on `|1 - s G_r|`.
pub const POLE_THRESHOLD: f64 = 1e-14;

/// Default truncation tolerance of the renormalization sum.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Free-space s-wave strength of a hard disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TMatrix {
    pub k: f64,
    pub a: f64,
    pub s: Complex64,
}

impl TMatrix {
    /// `|-2 Im s - |s|^2|`.
    pub fn optical_residual(&self) -> f64 {
        (-2.0 * self.s.im - self.s.norm_sqr()).abs()
    }
}

/// `s = -2i J0(ka) / H0(ka)` for `a > 0`. A negative scattering length uses
/// the conjugate denominator `J0(k|a|) - i Y0(k|a|)`, which flips the sign of
/// the phase shift. `a = 0` gives the transparent limit `s = 0`.
pub fn t_matrix(k: f64, a: f64) -> Result<TMatrix> {
    if !(k.is_finite() && k > 0.0) {
        return Err(domain("t_matrix", format!("wavenumber {k} must be positive")));
    }
    if !a.is_finite() {
        return Err(domain("t_matrix", "scattering length must be finite"));
    }
    if a == 0.0 {
        return Ok(TMatrix {
            k,
            a,
            s: Complex64::new(0.0, 0.0),
        });
    }
    let v = evaluate(k * a.abs());
    let (j0, y0) = (v.j[0], v.y[0]);
    let den = if a > 0.0 {
        Complex64::new(j0, y0)
    } else {
        Complex64::new(j0, -y0)
    };
    Ok(TMatrix {
        k,
        a,
        s: Complex64::new(0.0, -2.0 * j0) / den,
    })
}

/// Incident wave used by [`hard_disk_boundary_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IncidentWave {
    /// `J0(k|r - r0|)`
    S,
    /// `J1(k|r - r0|) cos(theta)`
    P,
}

/// Largest `|psi|` on the disk boundary for `psi = phi + s phi(r0) G_0(r, r0)`.
pub fn hard_disk_boundary_check(t: &TMatrix, incident: IncidentWave, samples: usize) -> Result<f64> {
    if !(t.a > 0.0) {
        return Err(domain("hard_disk_boundary_check", "needs a positive scattering length"));
    }
    if samples == 0 {
        return Err(domain("hard_disk_boundary_check", "needs at least one sample angle"));
    }
    let ka = t.k * t.a;
    let phi0 = match incident {
        IncidentWave::S => 1.0,
        IncidentWave::P => 0.0,
    };
    let scattered = t.s * phi0 * free_unchecked(ka);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let theta = 2.0 * PI * i as f64 / samples as f64;
        let phi = match incident {
            IncidentWave::S => bessel_j_unchecked(0, ka),
            IncidentWave::P => bessel_j_unchecked(1, ka) * theta.cos(),
        };
        worst = worst.max((phi + scattered).norm());
    }
    Ok(worst)
}

/// Renormalization sum at one energy and impurity height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenormSum {
    pub k: f64,
    pub y0: f64,
    pub g_r: Complex64,
    /// `sum_open chi_m(y0)^2 / kx_m`
    pub sigma_sum: f64,
    pub open: usize,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// `Sigma = sum_{m <= N} chi_m(y0)^2 / kx_m`.
pub(crate) fn open_sum(k: f64, y0: f64, open: usize) -> f64 {
    (1..=open)
        .map(|m| chi(m, y0).powi(2) / waveguide::kx_unchecked(m, k).re)
        .sum()
}

/// `G_r = sum_m (1/(i kx_m) + 1/(m pi)) chi_m(y0)^2
///        - (1/pi) ln[(k/pi) sin(pi y0)] + i/2 - gamma/pi`.
pub fn renorm_sum(k: f64, y0: f64, tol: f64, guard: f64) -> Result<RenormSum> {
    if !(y0 > 0.0 && y0 < 1.0) {
        return Err(domain("renorm_sum", format!("impurity height {y0} must lie inside (0, 1)")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(domain("renorm_sum", "tolerance must be positive"));
    }
    let open = waveguide::open_channel_count(k, guard)?;
    let s = regular_part(k, y0, Stop::Tol(tol))?;
    Ok(RenormSum {
        k,
        y0,
        g_r: s.sum,
        sigma_sum: open_sum(k, y0, open),
        open,
        terms_used: s.terms,
        tail_bound: s.tail,
    })
}

/// The slowly converging image form of `G_r`, `sum_{n != 0} (-1)^n G_0(r0, r_n)`.
pub fn renorm_sum_images(k: f64, y0: f64, images: usize, summation: ImageSummation) -> Result<Complex64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(domain("renorm_sum_images", "wavenumber must be positive"));
    }
    image_sum_regular(k, y0, images, summation)
}

/// Effective strength of the confined impurity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenormState {
    pub sum: RenormSum,
    pub t: TMatrix,
    /// `s / (1 - s G_r)`
    pub rs: Complex64,
    /// `1 / (1 - s G_r)`, the ratio of renormalized to bare incident amplitude.
    pub renorm_factor: Complex64,
}

impl RenormState {
    pub fn new(sum: RenormSum, t: TMatrix) -> Result<Self> {
        let den = 1.0 - t.s * sum.g_r;
        if den.norm() < POLE_THRESHOLD {
            return Err(Error::PoleEncountered(den.norm()));
        }
        let renorm_factor = den.inv();
        Ok(Self {
            sum,
            t,
            rs: t.s * renorm_factor,
            renorm_factor,
        })
    }

    pub fn g_r(&self) -> Complex64 {
        self.sum.g_r
    }

    pub fn sigma_sum(&self) -> f64 {
        self.sum.sigma_sum
    }

    /// `|Rs|^2 Sigma + Im Rs`, zero for a flux-conserving state.
    pub fn optical_residual(&self) -> f64 {
        (self.rs.norm_sqr() * self.sum.sigma_sum + self.rs.im).abs()
    }
}

/// `Rs = s / (1 - s G_r)` for the configured impurity.
pub fn effective_strength(k: f64, cfg: &WireConfig, tol: f64) -> Result<RenormState> {
    let sum = renorm_sum(k, cfg.y0, tol, cfg.mode_guard)?;
    RenormState::new(sum, t_matrix(k, cfg.a)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeSide {
    Below,
    Above,
}

/// Whether `chi_n(y0)` vanishes to round-off.
pub(crate) fn is_node(n: usize, y0: f64) -> bool {
    (n as f64 * PI * y0).sin().abs() < 1e-12
}

/// Leading divergent part of `G_r` at `kd = N pi -+ eps`:
/// `-chi_N(y0)^2 / sqrt(2 N pi eps)` below the opening, times `i` above it.
pub fn gr_edge_asymptote(n: usize, eps: f64, y0: f64, side: EdgeSide) -> Result<Complex64> {
    if n == 0 {
        return Err(domain("gr_edge_asymptote", "mode index starts at 1"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(domain("gr_edge_asymptote", "offset must be positive"));
    }
    if is_node(n, y0) {
        return Err(Error::DegenerateMode(n));
    }
    let mag = chi(n, y0).powi(2) / (2.0 * n as f64 * PI * eps).sqrt();
    Ok(match side {
        EdgeSide::Below => Complex64::new(-mag, 0.0),
        EdgeSide::Above => Complex64::new(0.0, -mag),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transparent_and_zero_length() {
        let t = t_matrix(2.0, 0.0).unwrap();
        assert_eq!(t.s, Complex64::new(0.0, 0.0));
        let root = 2.404825557695773;
        let t = t_matrix(root / 0.1, 0.1).unwrap();
        assert!(t.s.norm() < 1e-14);
        assert!(t_matrix(0.0, 0.1).is_err());
    }

    #[test]
    fn negative_length_conjugates_phase() {
        let p = t_matrix(7.0, 0.1).unwrap().s;
        let n = t_matrix(7.0, -0.1).unwrap().s;
        assert!((p.norm() - n.norm()).abs() < 1e-15);
        assert!((p.re + n.re).abs() < 1e-15 && (p.im - n.im).abs() < 1e-15);
    }

    #[test]
    fn edge_asymptote_basics() {
        let below = gr_edge_asymptote(2, 1e-8, 0.05, EdgeSide::Below).unwrap();
        let above = gr_edge_asymptote(2, 1e-8, 0.05, EdgeSide::Above).unwrap();
        assert!(below.im == 0.0 && below.re < 0.0);
        assert!((above / below.norm() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(gr_edge_asymptote(2, 1e-8, 0.5, EdgeSide::Below), Err(Error::DegenerateMode(2)));
    }
}
