//! Empty-wire Green's function in its spectral, image, Kummer-accelerated and
//! periodic-array forms, plus the free-space and semiclassical kernels.
//!
//! Every evaluator takes the field point first and the source second. Open
//! channels are checked against [`DEFAULT_MODE_GUARD`].

mod bench;
mod diffraction;
mod images;
pub(crate) mod series;

pub use bench::{convergence_benchmark, BenchMode, BenchmarkRow, BenchmarkSpec, BenchmarkTable, REFERENCE_TOL};
pub use diffraction::{bragg_spectrum, greens_diffraction, BraggSpectrum};
pub use images::{greens_image, ImageSummation};
pub(crate) use images::image_sum_regular;
pub use series::{greens_kummer, static_coincidence_constant};

use crate::error::{domain, Error, Result};
use crate::specfun::hankel0_unchecked;
use crate::waveguide::{self, image_sign, image_y, Point, DEFAULT_MODE_GUARD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Free,
    Spectral,
    Image,
    Static,
    Kummer,
    Diffraction,
    Semiclassical,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Self::Free => "free",
            Self::Spectral => "spectral",
            Self::Image => "image",
            Self::Static => "static",
            Self::Kummer => "kummer",
            Self::Diffraction => "diffraction",
            Self::Semiclassical => "semiclassical",
        }
    }
}

impl std::str::FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "free" => Self::Free,
            "spectral" => Self::Spectral,
            "image" => Self::Image,
            "static" => Self::Static,
            "kummer" => Self::Kummer,
            "diffraction" => Self::Diffraction,
            "semiclassical" => Self::Semiclassical,
            other => return Err(domain("representation", format!("unknown name {other:?}"))),
        })
    }
}

/// A Green's function value with its truncation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreensValue {
    pub value: Complex64,
    pub representation: Representation,
    pub terms_used: usize,
    /// Bound on the neglected tail. Infinite for the raw image sum, which has
    /// no usable a-priori bound.
    pub tail_bound: f64,
}

pub(crate) fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(domain("greens", format!("wavenumber {k} must be positive")))
    }
}

pub(crate) fn check_in_strip(op: &'static str, p: Point) -> Result<()> {
    if p.x.is_finite() && (0.0..=1.0).contains(&p.y) {
        Ok(())
    } else {
        Err(domain(op, format!("point ({}, {}) lies outside the wire", p.x, p.y)))
    }
}

/// Free-space kernel `-(i/2) H0(k|r - r0|)`.
pub fn greens_free(r: Point, r0: Point, k: f64) -> Result<Complex64> {
    check_k(k)?;
    let rho = r.distance(r0);
    if rho == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    if !rho.is_finite() {
        return Err(domain("greens_free", "non-finite separation"));
    }
    Ok(free_unchecked(k * rho))
}

#[inline]
pub(crate) fn free_unchecked(krho: f64) -> Complex64 {
    let h = hankel0_unchecked(krho);
    Complex64::new(0.5 * h.im, -0.5 * h.re)
}

/// Truncated mode sum `-i sum_m chi_m(y) chi_m(y0) exp(i kx |dx|) / kx`.
///
/// On the line `x = x0` the series converges only conditionally; the tail
/// bound then comes from Abel summation and is correspondingly loose.
pub fn greens_spectral(r: Point, r0: Point, k: f64, modes: usize) -> Result<GreensValue> {
    check_k(k)?;
    check_in_strip("greens_spectral", r)?;
    check_in_strip("greens_spectral", r0)?;
    if r == r0 {
        return Err(Error::CoincidentPoints);
    }
    if modes == 0 {
        return Err(domain("greens_spectral", "at least one mode is required"));
    }
    waveguide::open_channel_count(k, DEFAULT_MODE_GUARD)?;
    let dx = (r.x - r0.x).abs();
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 1..=modes {
        let cc = waveguide::chi(m, r.y) * waveguide::chi(m, r0.y);
        if cc == 0.0 {
            continue;
        }
        let kx = waveguide::kx_unchecked(m, k);
        let phase = (Complex64::i() * kx * dx).exp();
        acc += -Complex64::i() * cc * phase / kx;
    }
    let tail_bound = spectral_tail(k, r.y, r0.y, dx, modes);
    Ok(GreensValue {
        value: acc,
        representation: Representation::Spectral,
        terms_used: modes,
        tail_bound,
    })
}

fn spectral_tail(k: f64, y: f64, y0: f64, dx: f64, modes: usize) -> f64 {
    let m = modes + 1;
    let q = m as f64 * PI;
    if q <= k {
        return f64::INFINITY;
    }
    let kappa = ((q - k) * (q + k)).sqrt();
    let geometric = if dx > 0.0 {
        2.0 * (-kappa * dx).exp() / (kappa * (-(-PI * dx).exp_m1()))
    } else {
        f64::INFINITY
    };
    // Abel bound on each cosine component of chi_m(y) chi_m(y0).
    let abel = [PI * (y - y0), PI * (y + y0)]
        .iter()
        .map(|t| (0.5 * t).sin().abs())
        .fold(0.0, |acc, s| if s > 0.0 { acc + (-kappa * dx).exp() / (kappa * s) } else { f64::INFINITY });
    geometric.min(abel)
}

/// Closed-form static (k = 0) Green's function of the strip.
///
/// Written as `(1/2pi) ln[(sin^2(pi(y-y0)/2) + sinh^2(pi dx/2)) /
/// (sin^2(pi(y+y0)/2) + sinh^2(pi dx/2))]`, which is the cosine/cosh form with
/// the cancellation removed.
pub fn greens_static(r: Point, r0: Point) -> Result<f64> {
    check_in_strip("greens_static", r)?;
    check_in_strip("greens_static", r0)?;
    if r == r0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(static_unchecked(r.y, r0.y, (r.x - r0.x).abs()))
}

pub(crate) fn static_unchecked(y: f64, y0: f64, dx: f64) -> f64 {
    if PI * dx > 700.0 {
        return 0.0;
    }
    let sh = (0.5 * PI * dx).sinh().powi(2);
    let num = (0.5 * PI * (y - y0)).sin().powi(2) + sh;
    let den = (0.5 * PI * (y + y0)).sin().powi(2) + sh;
    // num - den = -sin(pi y0) sin(pi y), exact zero on the walls.
    let diff = -(PI * y0).sin() * (PI * y).sin();
    let ratio = num / den;
    let log = if ratio < 0.5 {
        ratio.ln()
    } else {
        (diff / den).ln_1p()
    };
    log / (2.0 * PI)
}

/// Result of the semiclassical image sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalValue {
    pub value: Complex64,
    pub terms_used: usize,
    /// Set when some retained image lies closer than one wavelength/2pi, where
    /// the asymptotic Hankel form is unreliable.
    pub warning: bool,
}

/// Image sum with every Hankel function replaced by its leading asymptotic
/// form, `(2pi)^(-1/2) e^{5i pi/4} sum_n exp(i(k rho_n - n pi)) / sqrt(k rho_n)`.
pub fn greens_semiclassical(r: Point, r0: Point, k: f64, images: usize) -> Result<SemiclassicalValue> {
    semiclassical_sum(r, r0, k, images, true)
}

pub(crate) fn semiclassical_sum(
    r: Point,
    r0: Point,
    k: f64,
    images: usize,
    include_source: bool,
) -> Result<SemiclassicalValue> {
    check_k(k)?;
    let m = images as i64;
    let prefactor = Complex64::from_polar((2.0 * PI).sqrt().recip(), 1.25 * PI);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut warning = false;
    let mut terms = 0;
    for n in -m..=m {
        if n == 0 && !include_source {
            continue;
        }
        let rn = Point::new(r0.x, image_y(n, r0.y));
        let krho = k * r.distance(rn);
        if krho == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        warning |= krho < 1.0;
        // exp(-i n pi) is the sign of the image.
        acc += image_sign(n) * Complex64::from_polar(krho.sqrt().recip(), krho);
        terms += 1;
    }
    Ok(SemiclassicalValue {
        value: prefactor * acc,
        terms_used: terms.max(1),
        warning,
    })
}
