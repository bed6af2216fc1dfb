//! Wire geometry, transverse modes, channel bookkeeping and the image array.
//!
//! Lengths are measured in units of the wire width, so `d = 1` throughout and
//! a wavenumber `k` is numerically equal to `kd`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

/// Default half-width of the excluded band around each mode opening, in kd.
pub const DEFAULT_MODE_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Wire and impurity parameters in units of the width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireConfig {
    pub x0: f64,
    pub y0: f64,
    /// Scattering length; negative values model an attractive impurity.
    pub a: f64,
    pub mode_guard: f64,
}

impl WireConfig {
    pub fn new(y0: f64, a: f64) -> Result<Self> {
        Self {
            x0: 0.0,
            y0,
            a,
            mode_guard: DEFAULT_MODE_GUARD,
        }
        .validated()
    }

    pub fn with_x0(mut self, x0: f64) -> Result<Self> {
        self.x0 = x0;
        self.validated()
    }

    pub fn with_mode_guard(mut self, guard: f64) -> Result<Self> {
        self.mode_guard = guard;
        self.validated()
    }

    pub fn with_a(mut self, a: f64) -> Result<Self> {
        self.a = a;
        self.validated()
    }

    pub fn with_y0(mut self, y0: f64) -> Result<Self> {
        self.y0 = y0;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.y0 > 0.0 && self.y0 < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "impurity height y0 = {} must lie strictly inside (0, 1)",
                self.y0
            )));
        }
        if !(self.a.abs() < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "scattering length |a| = {} must be below half the width",
                self.a.abs()
            )));
        }
        if !(self.mode_guard > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "mode guard {} must be positive",
                self.mode_guard
            )));
        }
        if !self.x0.is_finite() {
            return Err(Error::InvalidConfig("x0 must be finite".into()));
        }
        Ok(self)
    }

    pub fn impurity(&self) -> Point {
        Point::new(self.x0, self.y0)
    }
}

fn check_wavenumber(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(crate::error::domain("wavenumber", format!("kd = {k} must be positive")))
    }
}

/// Number of propagating modes, `floor(kd / pi)`.
pub fn open_channel_count(k: f64, guard: f64) -> Result<usize> {
    check_wavenumber(k)?;
    let nearest = (k / PI).round();
    if nearest >= 1.0 && (k - nearest * PI).abs() <= guard {
        return Err(Error::ModeOpeningSingularity {
            kd: k,
            mode: nearest as usize,
            guard,
        });
    }
    Ok((k / PI).floor() as usize)
}

/// Longitudinal wavenumber of mode `m`: real for open modes, `+i kappa` for
/// closed ones so that `exp(i kx |x|)` decays.
pub fn longitudinal_wavenumber(m: usize, k: f64, guard: f64) -> Result<Complex64> {
    check_wavenumber(k)?;
    if m == 0 {
        return Err(crate::error::domain("longitudinal_wavenumber", "mode index starts at 1"));
    }
    let q = m as f64 * PI;
    if (k - q).abs() <= guard {
        return Err(Error::ModeOpeningSingularity { kd: k, mode: m, guard });
    }
    Ok(kx_unchecked(m, k))
}

pub(crate) fn kx_unchecked(m: usize, k: f64) -> Complex64 {
    let q = m as f64 * PI;
    let diff = (k - q) * (k + q);
    if diff > 0.0 {
        Complex64::new(diff.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-diff).sqrt())
    }
}

/// chi_m(y) = sqrt(2) sin(m pi y) on the closed strip.
pub fn transverse_mode(m: usize, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(crate::error::domain(
            "transverse_mode",
            format!("y = {y} lies outside the wire"),
        ));
    }
    Ok(chi(m, y))
}

#[inline]
pub(crate) fn chi(m: usize, y: f64) -> f64 {
    SQRT_2 * (m as f64 * PI * y).sin()
}

/// Wavenumber bookkeeping for one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub k: f64,
    pub open: usize,
    /// kx for m = 1..=len; index 0 holds mode 1.
    pub kx: Vec<Complex64>,
}

impl ChannelSet {
    pub fn new(k: f64, modes: usize, guard: f64) -> Result<Self> {
        let open = open_channel_count(k, guard)?;
        let modes = modes.max(open);
        let kx = (1..=modes)
            .map(|m| longitudinal_wavenumber(m, k, guard))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { k, open, kx })
    }

    /// Real longitudinal wavenumbers of the open channels.
    pub fn open_kx(&self) -> impl Iterator<Item = f64> + '_ {
        self.kx.iter().take(self.open).map(|c| c.re)
    }
}

/// Positions of the source and its Dirichlet images across the walls, with
/// alternating signs.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageArray {
    pub indices: Vec<i64>,
    pub positions: Vec<Point>,
    pub signs: Vec<f64>,
}

/// Transverse coordinate of image `n` of a source at height `y0`.
///
/// Even `n` sits at `y0 + n`, odd `n` at `n + 1 - y0`; neighbouring images
/// reflect into each other across the wall between them.
#[inline]
pub fn image_y(n: i64, y0: f64) -> f64 {
    let parity = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    n as f64 + 0.5 + parity * (y0 - 0.5)
}

#[inline]
pub fn image_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn image_positions(cfg: &WireConfig, n_min: i64, n_max: i64) -> Result<ImageArray> {
    if n_min > 0 || n_max < 0 {
        return Err(crate::error::domain(
            "image_positions",
            "index range must contain the source n = 0",
        ));
    }
    let indices: Vec<i64> = (n_min..=n_max).collect();
    let positions = indices
        .iter()
        .map(|&n| Point::new(cfg.x0, image_y(n, cfg.y0)))
        .collect();
    let signs = indices.iter().map(|&n| image_sign(n)).collect();
    Ok(ImageArray {
        indices,
        positions,
        signs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_counts() {
        assert_eq!(open_channel_count(0.5 * PI, DEFAULT_MODE_GUARD), Ok(0));
        assert_eq!(open_channel_count(2.5 * PI, DEFAULT_MODE_GUARD), Ok(2));
        assert!(matches!(
            open_channel_count(2.0 * PI, DEFAULT_MODE_GUARD),
            Err(Error::ModeOpeningSingularity { mode: 2, .. })
        ));
        assert!(open_channel_count(-1.0, DEFAULT_MODE_GUARD).is_err());
    }

    #[test]
    fn longitudinal_branches() {
        let k = 2.0 * PI;
        let kx1 = longitudinal_wavenumber(1, k, DEFAULT_MODE_GUARD).unwrap();
        assert!((kx1.re - PI * 3f64.sqrt()).abs() < 1e-13 && kx1.im == 0.0);
        let kx3 = longitudinal_wavenumber(3, k, DEFAULT_MODE_GUARD).unwrap();
        assert!((kx3.im - PI * 5f64.sqrt()).abs() < 1e-13 && kx3.re == 0.0);
        assert!(matches!(
            longitudinal_wavenumber(1, PI * (1.0 + 1e-12), DEFAULT_MODE_GUARD),
            Err(Error::ModeOpeningSingularity { mode: 1, .. })
        ));
    }

    #[test]
    fn modes() {
        assert!((transverse_mode(1, 0.5).unwrap() - SQRT_2).abs() < 1e-15);
        assert_eq!(transverse_mode(4, 0.0).unwrap(), 0.0);
        assert!(transverse_mode(2, 0.5).unwrap().abs() < 1e-15);
        assert!(transverse_mode(1, 1.2).is_err());
        assert!(transverse_mode(1, -0.1).is_err());
    }

    #[test]
    fn image_examples() {
        let cfg = WireConfig::new(0.3, 0.1).unwrap();
        let arr = image_positions(&cfg, -1, 1).unwrap();
        assert_eq!(arr.indices, vec![-1, 0, 1]);
        assert!((arr.positions[1].y - 0.3).abs() < 1e-15 && arr.signs[1] == 1.0);
        assert!((arr.positions[2].y - 1.7).abs() < 1e-15 && arr.signs[2] == -1.0);
        assert!((arr.positions[0].y + 0.3).abs() < 1e-15 && arr.signs[0] == -1.0);
        assert!(image_positions(&cfg, 1, 3).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(WireConfig::new(0.0, 0.1).is_err());
        assert!(WireConfig::new(1.0, 0.1).is_err());
        assert!(WireConfig::new(0.5, 0.5).is_err());
        assert!(WireConfig::new(0.5, -0.1).is_ok());
        assert!(WireConfig::new(0.5, 0.1).unwrap().with_mode_guard(0.0).is_err());
    }
}
