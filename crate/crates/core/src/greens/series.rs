//! Kummer-subtracted mode series shared by the wire Green's function and the
//! renormalization sum.
//!
//! The summand is `chi_m(y) chi_m(y0) [exp(i kx dx)/(i kx) + exp(-q dx)/q]`
//! with `q = m pi`; the subtracted static part is restored in closed form.
//! Closed modes give a real term of fixed sign that decreases monotonically
//! in m, which is what the tail bounds below rely on.

use super::{check_in_strip, check_k, static_unchecked, GreensValue, Representation};
use crate::error::{Error, Result};
use crate::specfun::EULER_GAMMA;
use crate::waveguide::{self, Point, DEFAULT_MODE_GUARD};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Hard cap on the number of modes an adaptive sum may use.
pub(crate) const MAX_TERMS: usize = 4_000_000;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Stop {
    Tol(f64),
    Terms(usize),
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub sum: Complex64,
    pub terms: usize,
    pub tail: f64,
}

/// Closed-mode summand without the transverse factor.
#[inline]
fn closed_term(q: f64, kappa: f64, k: f64, dx: f64) -> f64 {
    // 1/q - 1/kappa without cancellation.
    let inv_diff = -k * k / (q * kappa * (q + kappa));
    if dx == 0.0 {
        return inv_diff;
    }
    let eq = (-q * dx).exp();
    // exp(-q dx) - exp(-kappa dx) = -exp(-q dx) expm1((q - kappa) dx)
    let gap = k * k / (q + kappa);
    eq * inv_diff - eq * (gap * dx).exp_m1() / kappa
}

#[inline]
fn open_term(q: f64, kx: f64, dx: f64) -> Complex64 {
    let (s, c) = (kx * dx).sin_cos();
    Complex64::new(s / kx + (-q * dx).exp() / q, -c / kx)
}

/// `int_{a}^{inf} (1/(pi m) - 1/sqrt(pi^2 m^2 - k^2)) dm`.
fn smooth_tail_integral(k: f64, a: f64) -> f64 {
    let u = k / (PI * a);
    let u2 = u * u;
    (-u2 / (2.0 * (1.0 + (1.0 - u2).sqrt()))).ln_1p() / PI
}

struct TailModel {
    k: f64,
    dx: f64,
    // |sin(theta/2)| of the two cosine components, 0 for a smooth component.
    half_sines: [f64; 2],
    smooth_integral: bool,
}

impl TailModel {
    fn new(k: f64, y: f64, y0: f64, dx: f64) -> Self {
        let half_sines = [
            (0.5 * PI * (y - y0)).sin().abs(),
            (0.5 * PI * (y + y0)).sin().abs(),
        ];
        let smooth_integral = dx == 0.0 && half_sines[0] == 0.0 && half_sines[1] > 0.0;
        Self {
            k,
            dx,
            half_sines,
            smooth_integral,
        }
    }

    /// Bound on the neglected sum after `m` terms, `None` while the bound is
    /// not yet valid (open or barely closed modes ahead).
    fn bound(&self, m: usize) -> Option<f64> {
        let next = m + 1;
        let q = next as f64 * PI;
        if q <= self.k {
            return None;
        }
        let kappa = ((q - self.k) * (q + self.k)).sqrt();
        let f_next = closed_term(q, kappa, self.k, self.dx).abs();
        let mut abel = 0.0;
        for (i, &s) in self.half_sines.iter().enumerate() {
            if s > 0.0 {
                abel += f_next / s;
            } else if i == 0 && self.smooth_integral {
                let a = m as f64 + 0.5;
                if PI * a < 2.0 * self.k {
                    return None;
                }
                abel += self.k * self.k / (8.0 * PI.powi(3) * (m as f64).powi(4));
            } else {
                abel = f64::INFINITY;
            }
        }
        let geometric = if self.dx > 0.0 {
            2.0 * (-kappa * self.dx).exp() / (kappa * (-(-PI * self.dx).exp_m1()))
        } else {
            f64::INFINITY
        };
        Some(abel.min(geometric))
    }

    fn correction(&self, m: usize) -> f64 {
        // Undefined while the cut sits below the last open mode.
        if self.smooth_integral && PI * (m as f64 + 0.5) > self.k {
            smooth_tail_integral(self.k, m as f64 + 0.5)
        } else {
            0.0
        }
    }
}

/// Sums the subtracted series. `dx` must be non-negative.
pub(crate) fn subtracted_series(k: f64, y: f64, y0: f64, dx: f64, stop: Stop) -> Result<SeriesSum> {
    let tail_model = TailModel::new(k, y, y0, dx);
    let (t1, t2) = (PI * (y - y0), PI * (y + y0));
    let mut acc = Complex64::new(0.0, 0.0);
    // Compensated (Kahan) sum of the real closed-mode part; adaptive sums may
    // run to millions of terms.
    let mut closed_acc = 0.0f64;
    let mut closed_comp = 0.0f64;
    let limit = match stop {
        Stop::Tol(_) => MAX_TERMS,
        Stop::Terms(n) => n.max(1),
    };
    let mut m = 0;
    let mut tail = f64::INFINITY;
    while m < limit {
        m += 1;
        let mf = m as f64;
        let q = mf * PI;
        let cc = (mf * t1).cos() - (mf * t2).cos();
        let diff = (k - q) * (k + q);
        if diff > 0.0 {
            acc += cc * open_term(q, diff.sqrt(), dx);
        } else {
            let term = cc * closed_term(q, (-diff).sqrt(), k, dx);
            let yk = term - closed_comp;
            let t = closed_acc + yk;
            closed_comp = (t - closed_acc) - yk;
            closed_acc = t;
        }
        if let Stop::Tol(tol) = stop {
            if let Some(b) = tail_model.bound(m) {
                tail = b;
                if b < tol {
                    break;
                }
            }
        }
    }
    if let Stop::Terms(_) = stop {
        tail = tail_model.bound(m).unwrap_or(f64::INFINITY);
    }
    if let Stop::Tol(tol) = stop {
        if !(tail < tol) {
            return Err(Error::NotConverged { terms: m, tail, tol });
        }
    }
    let total = acc + Complex64::new(closed_acc + tail_model.correction(m), 0.0);
    Ok(SeriesSum {
        sum: total,
        terms: m,
        tail,
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(crate::error::domain("tolerance", format!("tol = {tol} must be positive")))
    }
}

/// Wire Green's function from the Kummer-accelerated series plus the closed
/// static form, truncated adaptively so that the tail bound is below `tol`.
pub fn greens_kummer(r: Point, r0: Point, k: f64, tol: f64) -> Result<GreensValue> {
    check_k(k)?;
    check_tol(tol)?;
    check_in_strip("greens_kummer", r)?;
    check_in_strip("greens_kummer", r0)?;
    if r == r0 {
        return Err(Error::CoincidentPoints);
    }
    waveguide::open_channel_count(k, DEFAULT_MODE_GUARD)?;
    let dx = (r.x - r0.x).abs();
    let series = subtracted_series(k, r.y, r0.y, dx, Stop::Tol(tol))?;
    Ok(kummer_value(series, static_unchecked(r.y, r0.y, dx)))
}

/// Same as [`greens_kummer`] with a fixed number of modes.
pub(crate) fn greens_kummer_terms(r: Point, r0: Point, k: f64, terms: usize) -> Result<GreensValue> {
    let dx = (r.x - r0.x).abs();
    let series = subtracted_series(k, r.y, r0.y, dx, Stop::Terms(terms))?;
    Ok(kummer_value(series, static_unchecked(r.y, r0.y, dx)))
}

fn kummer_value(series: SeriesSum, stat: f64) -> GreensValue {
    GreensValue {
        value: series.sum + stat,
        representation: Representation::Kummer,
        terms_used: series.terms,
        tail_bound: series.tail,
    }
}

/// Regular part of the wire Green's function at the source,
/// `lim_{r -> r0} [G_w(r, r0) - G_0(r, r0)]`.
pub(crate) fn regular_part(k: f64, y0: f64, stop: Stop) -> Result<SeriesSum> {
    let mut s = subtracted_series(k, y0, y0, 0.0, stop)?;
    s.sum += static_coincidence_constant(k, y0);
    Ok(s)
}

/// `lim_{r -> r0} [G_static(r, r0) - G_0(r, r0)]
///   = -(1/pi) ln[(k/pi) sin(pi y0)] + i/2 - gamma/pi`.
pub fn static_coincidence_constant(k: f64, y0: f64) -> Complex64 {
    Complex64::new(
        -((k / PI) * (PI * y0).sin()).ln() / PI - EULER_GAMMA / PI,
        0.5,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integral_matches_quadrature() {
        let k = 2.5 * PI;
        let a = 40.5;
        // Composite Simpson on a substituted variable m = a / t.
        let f = |m: f64| 1.0 / (PI * m) - 1.0 / ((PI * m).powi(2) - k * k).sqrt();
        let n = 20_000;
        let h = 1.0 / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let t = (i as f64 * h).max(1e-300);
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let g = if i == 0 { 0.0 } else { f(a / t) * a / (t * t) };
            s += w * g;
        }
        s *= h / 3.0;
        assert!((s - smooth_tail_integral(k, a)).abs() < 1e-12);
    }

    #[test]
    fn closed_term_is_monotone() {
        let k = 3.3 * PI;
        let mut prev = f64::INFINITY;
        for m in 4..2000 {
            let q = m as f64 * PI;
            let kappa = (q * q - k * k).sqrt();
            let f = closed_term(q, kappa, k, 0.01).abs();
            assert!(f <= prev);
            prev = f;
        }
    }

    #[test]
    fn coincidence_costs_few_thousand_terms() {
        let k = 2.5 * PI;
        let s = subtracted_series(k, 0.3, 0.3, 0.0, Stop::Tol(1e-10)).unwrap();
        assert!(s.terms <= 5000, "{} terms", s.terms);
    }
}
