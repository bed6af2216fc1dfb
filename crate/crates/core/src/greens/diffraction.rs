//! Wire Green's function as the difference of two period-2 arrays, each
//! expanded in diffraction orders.

use super::series::MAX_TERMS;
use super::{check_in_strip, check_k, GreensValue, Representation};
use crate::error::{domain, Error, Result};
use crate::waveguide::{self, Point, DEFAULT_MODE_GUARD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Array period in units of the wire width.
const PERIOD: f64 = 2.0;

/// Diffraction orders of a line array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraggSpectrum {
    pub orders: Vec<i64>,
    /// Angles from the array normal. Evanescent orders have complex angles
    /// on the branch where `k cos(theta)` has positive imaginary part.
    pub angles: Vec<Complex64>,
    pub ky: Vec<f64>,
    /// `1 / kx` per order.
    pub weights: Vec<Complex64>,
}

/// Orders `-n_max..=n_max` of an array with the given period.
pub fn bragg_spectrum(k: f64, period: f64, n_max: usize) -> Result<BraggSpectrum> {
    check_k(k)?;
    if !(period.is_finite() && period > 0.0) {
        return Err(domain("bragg_spectrum", "period must be positive"));
    }
    let m = n_max as i64;
    let mut spec = BraggSpectrum {
        orders: Vec::with_capacity(2 * n_max + 1),
        angles: Vec::with_capacity(2 * n_max + 1),
        ky: Vec::with_capacity(2 * n_max + 1),
        weights: Vec::with_capacity(2 * n_max + 1),
    };
    for n in -m..=m {
        let ky = 2.0 * PI * n as f64 / period;
        let s = ky / k;
        if ((s.abs() - 1.0) * k).abs() <= DEFAULT_MODE_GUARD {
            return Err(Error::ModeOpeningSingularity {
                kd: k,
                mode: n.unsigned_abs() as usize,
                guard: DEFAULT_MODE_GUARD,
            });
        }
        let (angle, kx) = if s.abs() < 1.0 {
            (Complex64::new(s.asin(), 0.0), Complex64::new(k * (1.0 - s * s).sqrt(), 0.0))
        } else {
            // theta = +-pi/2 - i acosh|s| gives cos(theta) = i sinh(acosh|s|).
            let eta = s.abs().acosh();
            let re = 0.5 * PI * s.signum();
            let im = -eta * s.signum();
            (Complex64::new(re, im), Complex64::new(0.0, k * eta.sinh()))
        };
        spec.orders.push(n);
        spec.angles.push(angle);
        spec.ky.push(ky);
        spec.weights.push(kx.inv());
    }
    Ok(spec)
}

/// `G_w = G_p(r - y0; 2) - G_p(r + y0; 2)` with
/// `G_p = -(i/P) sum_n exp(i kx_n |dx|) cos(ky_n Y) / kx_n`.
///
/// Each array sum decays only through `exp(i kx |dx|)`, so `x = x0` is rejected.
pub fn greens_diffraction(r: Point, r0: Point, k: f64, tol: f64) -> Result<GreensValue> {
    check_k(k)?;
    check_in_strip("greens_diffraction", r)?;
    check_in_strip("greens_diffraction", r0)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(domain("greens_diffraction", "tolerance must be positive"));
    }
    let dx = (r.x - r0.x).abs();
    if dx == 0.0 {
        return Err(domain("greens_diffraction", "order sum diverges on the line x = x0"));
    }
    waveguide::open_channel_count(k, DEFAULT_MODE_GUARD)?;
    let below = r.y - r0.y;
    let above = r.y + r0.y;
    let order = |n: usize| -> Complex64 {
        let kx = waveguide_kx(n, k);
        (Complex64::i() * kx * dx).exp() / kx
    };
    // n = 0 is y-independent, so it cancels between the two arrays; it is kept
    // for fidelity with the array sums.
    let zero = order(0);
    let mut pa = zero;
    let mut pb = zero;
    let mut n = 0;
    let mut tail = f64::INFINITY;
    while n < MAX_TERMS {
        n += 1;
        let w = 2.0 * order(n);
        let ky = n as f64 * PI;
        pa += w * (ky * below).cos();
        pb += w * (ky * above).cos();
        let q = (n + 1) as f64 * PI;
        if q > k {
            let kappa = ((q - k) * (q + k)).sqrt();
            // Both arrays, both signs of n.
            tail = 2.0 * (-kappa * dx).exp() / (kappa * (-(-PI * dx).exp_m1()));
            if tail < tol {
                break;
            }
        }
    }
    if !(tail < tol) {
        return Err(Error::NotConverged { terms: n, tail, tol });
    }
    let scale = -Complex64::i() / PERIOD;
    Ok(GreensValue {
        value: scale * (pa - pb),
        representation: Representation::Diffraction,
        terms_used: 2 * n + 1,
        tail_bound: tail,
    })
}

#[inline]
fn waveguide_kx(n: usize, k: f64) -> Complex64 {
    if n == 0 {
        Complex64::new(k, 0.0)
    } else {
        waveguide::kx_unchecked(n, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bragg_examples() {
        let s = bragg_spectrum(4.0 * PI, 1.0, 1).unwrap();
        assert_eq!(s.orders, vec![-1, 0, 1]);
        assert_eq!(s.angles[1], Complex64::new(0.0, 0.0));
        assert!((s.angles[2].re - PI / 6.0).abs() < 1e-15);
        assert!((s.angles[0].re + PI / 6.0).abs() < 1e-15);
        // Grazing order n = 2.
        assert!(bragg_spectrum(4.0 * PI, 1.0, 2).is_err());

        let k = 4.5 * PI;
        let s = bragg_spectrum(k, 1.0, 3).unwrap();
        for (i, &n) in s.orders.iter().enumerate() {
            let th = s.angles[i];
            assert!((th.sin() - 2.0 * PI * n as f64 / k).norm() < 1e-12);
            let kx = k * th.cos();
            assert!((s.weights[i] * kx - 1.0).norm() < 1e-12);
            if n.abs() == 3 {
                assert!(kx.im > 0.0 && kx.re.abs() < 1e-9);
            } else {
                assert_eq!(th.im, 0.0);
            }
        }
    }

    #[test]
    fn wall_value_vanishes() {
        let g = greens_diffraction(Point::new(0.7, 0.0), Point::new(0.0, 0.35), 2.5 * PI, 1e-12).unwrap();
        assert!(g.value.norm() < 1e-12);
    }
}
