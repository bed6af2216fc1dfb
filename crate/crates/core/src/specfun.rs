//! Cylinder functions of real argument: J_0..J_3, Y_0, Y_1 and H_0^(1), H_1^(1).
//!
//! Three evaluation regimes, each accurate to roughly 1e-14 relative away from
//! zeros of the function:
//!
//! * `x < SERIES_MAX`: ascending power series.
//! * `SERIES_MAX <= x < ASYMPTOTIC_MIN`: Miller backward recurrence for J_n,
//!   normalised by `J_0 + 2 sum J_2k = 1`, with Neumann series for Y_0, Y_1.
//! * `x >= ASYMPTOTIC_MIN`: Hankel asymptotic expansion, summed to its
//!   smallest term; J_2, J_3 by forward recurrence.
//!
//! The Hankel expansion needs `x` above about 20 before its smallest term
//! drops below 1e-17, which is why the middle regime exists.

use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) const SERIES_MAX: f64 = 8.0;
pub(crate) const ASYMPTOTIC_MIN: f64 = 25.0;

/// Order of a cylinder function of the first kind, restricted to 0..=3
/// (s, p, d and f partial waves).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CylinderOrder(u8);

impl CylinderOrder {
    pub const MAX: u8 = 3;

    pub fn new(n: u8) -> Result<Self> {
        if n > Self::MAX {
            Err(Error::InvalidOrder(n))
        } else {
            Ok(Self(n))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for CylinderOrder {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        Self::new(n)
    }
}

/// J_0..J_3 and Y_0, Y_1 at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CylinderValues {
    pub j: [f64; 4],
    pub y: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Regime {
    Series,
    Miller,
    Asymptotic,
}

impl Regime {
    fn for_argument(x: f64) -> Self {
        if x < SERIES_MAX {
            Regime::Series
        } else if x < ASYMPTOTIC_MIN {
            Regime::Miller
        } else {
            Regime::Asymptotic
        }
    }
}

fn check_argument(op: &'static str, x: f64, allow_zero: bool) -> Result<()> {
    if !x.is_finite() {
        return Err(domain(op, format!("non-finite argument {x}")));
    }
    if x < 0.0 || (!allow_zero && x == 0.0) {
        return Err(domain(op, format!("argument {x} outside the domain")));
    }
    Ok(())
}

/// Bessel function of the first kind J_n(x), n in 0..=3, x >= 0.
pub fn cylinder_bessel_j(n: CylinderOrder, x: f64) -> Result<f64> {
    check_argument("cylinder_bessel_j", x, true)?;
    if x == 0.0 {
        return Ok(if n.0 == 0 { 1.0 } else { 0.0 });
    }
    Ok(bessel_j_unchecked(n.0 as usize, x))
}

/// Bessel function of the second kind Y_n(x), n in 0..=1, x > 0.
pub fn cylinder_bessel_y(n: u8, x: f64) -> Result<f64> {
    if n > 1 {
        return Err(Error::InvalidOrder(n));
    }
    check_argument("cylinder_bessel_y", x, false)?;
    Ok(evaluate(x).y[n as usize])
}

/// Hankel function of the first kind H_n^(1)(x) = J_n(x) + i Y_n(x), n in 0..=1.
pub fn hankel1(n: u8, x: f64) -> Result<Complex64> {
    if n > 1 {
        return Err(Error::InvalidOrder(n));
    }
    check_argument("hankel1", x, false)?;
    let v = evaluate(x);
    Ok(Complex64::new(v.j[n as usize], v.y[n as usize]))
}

/// J_n(x) without argument checks; x must be finite and positive.
pub(crate) fn bessel_j_unchecked(n: usize, x: f64) -> f64 {
    match Regime::for_argument(x) {
        Regime::Series => series_j(n, x),
        _ => evaluate(x).j[n],
    }
}

/// H_0^(1)(x) without argument checks; x must be finite and positive.
pub(crate) fn hankel0_unchecked(x: f64) -> Complex64 {
    let v = evaluate(x);
    Complex64::new(v.j[0], v.y[0])
}

pub(crate) fn evaluate(x: f64) -> CylinderValues {
    evaluate_in(Regime::for_argument(x), x)
}

pub(crate) fn evaluate_in(regime: Regime, x: f64) -> CylinderValues {
    match regime {
        Regime::Series => series_values(x),
        Regime::Miller => miller_values(x),
        Regime::Asymptotic => asymptotic_values(x),
    }
}

fn series_j(n: usize, x: f64) -> f64 {
    let h = 0.5 * x;
    let q = h * h;
    let mut term = 1.0;
    for i in 1..=n {
        term *= h / i as f64;
    }
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (kf + n as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() || term == 0.0 {
            break;
        }
    }
    sum
}

fn series_values(x: f64) -> CylinderValues {
    let j = [series_j(0, x), series_j(1, x), series_j(2, x), series_j(3, x)];
    let h = 0.5 * x;
    let q = h * h;
    let log_h = h.ln();

    // Y_0 = (2/pi)(ln(x/2) + gamma) J_0 + (2/pi) sum_{k>=1} (-1)^(k+1) H_k q^k / (k!)^2
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum0 = 0.0;
    // Y_1 tail: sum_{k>=0} (-1)^k (psi(k+1) + psi(k+2)) h^(2k+1) / (k! (k+1)!)
    let mut term1 = h;
    let mut sum1 = term1 * (1.0 - 2.0 * EULER_GAMMA);
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        sum0 -= term * harmonic;
        term1 *= -q / (kf * (kf + 1.0));
        let digammas = 2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        sum1 += term1 * digammas;
        if term.abs() < 1e-18 && term1.abs() < 1e-18 {
            break;
        }
    }
    let y0 = 2.0 / PI * ((log_h + EULER_GAMMA) * j[0] + sum0);
    let y1 = -2.0 / (PI * x) + 2.0 / PI * log_h * j[1] - sum1 / PI;
    CylinderValues { j, y: [y0, y1] }
}

fn miller_values(x: f64) -> CylinderValues {
    let start = 2 * ((1.5 * x + 40.0) / 2.0).ceil() as usize;
    let mut v = vec![0.0_f64; start + 2];
    v[start] = 1e-30;
    for k in (1..=start).rev() {
        v[k - 1] = 2.0 * k as f64 / x * v[k] - v[k + 1];
        if v[k - 1].abs() > 1e250 {
            for w in v.iter_mut().skip(k - 1) {
                *w *= 1e-250;
            }
        }
    }
    let norm = v[0] + 2.0 * v.iter().skip(2).step_by(2).sum::<f64>();
    for w in v.iter_mut() {
        *w /= norm;
    }

    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let mut neumann0 = 0.0;
    let mut neumann1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < v.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        neumann0 += sign * v[2 * k] / kf;
        neumann1 += sign * (v[2 * k - 1] - v[2 * k + 1]) / kf;
        k += 1;
    }
    let y0 = 2.0 / PI * log_term * v[0] - 4.0 / PI * neumann0;
    let y1 = -2.0 / (PI * x) * v[0] + 2.0 / PI * log_term * v[1] + 2.0 / PI * neumann1;
    CylinderValues {
        j: [v[0], v[1], v[2], v[3]],
        y: [y0, y1],
    }
}

/// Hankel's P and Q for order `nu`, summed until the terms stop decreasing.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut previous = f64::INFINITY;
    for k in 1..100 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let size = term.abs();
        if size > previous || size < 1e-18 {
            break;
        }
        previous = size;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    (p, q)
}

fn asymptotic_values(x: f64) -> CylinderValues {
    let amplitude = (2.0 / (PI * x)).sqrt();
    let (s, c) = x.sin_cos();
    // chi_0 = x - pi/4, chi_1 = x - 3pi/4, expanded around the exact x.
    let cos0 = FRAC_1_SQRT_2 * (c + s);
    let sin0 = FRAC_1_SQRT_2 * (s - c);
    let cos1 = FRAC_1_SQRT_2 * (s - c);
    let sin1 = -FRAC_1_SQRT_2 * (s + c);
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    let j0 = amplitude * (p0 * cos0 - q0 * sin0);
    let y0 = amplitude * (p0 * sin0 + q0 * cos0);
    let j1 = amplitude * (p1 * cos1 - q1 * sin1);
    let y1 = amplitude * (p1 * sin1 + q1 * cos1);
    let j2 = 2.0 / x * j1 - j0;
    let j3 = 4.0 / x * j2 - j1;
    CylinderValues {
        j: [j0, j1, j2, j3],
        y: [y0, y1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn order_cap() {
        assert!(CylinderOrder::new(3).is_ok());
        assert_eq!(CylinderOrder::new(4), Err(Error::InvalidOrder(4)));
        assert!(cylinder_bessel_y(2, 1.0).is_err());
        assert!(hankel1(2, 1.0).is_err());
    }

    #[test]
    fn regimes_agree_at_switchovers() {
        for &edge in &[SERIES_MAX, ASYMPTOTIC_MIN] {
            for i in -20..=20 {
                let x = edge + 0.01 * i as f64;
                let (lo, hi) = if edge == SERIES_MAX {
                    (Regime::Series, Regime::Miller)
                } else {
                    (Regime::Miller, Regime::Asymptotic)
                };
                let a = evaluate_in(lo, x);
                let b = evaluate_in(hi, x);
                for n in 0..4 {
                    assert!((a.j[n] - b.j[n]).abs() < 1e-11, "J{n}({x})");
                }
                for n in 0..2 {
                    assert!((a.y[n] - b.y[n]).abs() < 1e-11, "Y{n}({x})");
                }
            }
        }
    }

    #[test]
    fn miller_matches_series_below_eight() {
        for &x in &[0.5, 2.0, 4.0, 6.5] {
            let a = evaluate_in(Regime::Series, x);
            let b = evaluate_in(Regime::Miller, x);
            for n in 0..4 {
                assert!(rel(b.j[n], a.j[n]) < 1e-12);
            }
            assert!(rel(b.y[0], a.y[0]) < 1e-12);
            assert!(rel(b.y[1], a.y[1]) < 1e-12);
        }
    }

    #[test]
    fn small_argument_limits() {
        let x = 1e-8;
        let v = evaluate(x);
        assert!(rel(v.j[1], 0.5 * x) < 1e-14);
        let y0 = 2.0 / PI * ((0.5 * x).ln() + EULER_GAMMA);
        assert!(rel(v.y[0], y0) < 1e-14);
        assert!(rel(v.y[1], -2.0 / (PI * x)) < 1e-14);
    }
}
