//! Alternating image sum of free-space kernels.
//!
//! The series converges only conditionally (terms fall off as `n^-1/2`), so it
//! is kept for validation and benchmarking.

use super::{check_in_strip, check_k, free_unchecked, GreensValue, Representation};
use crate::error::{Error, Result};
use crate::waveguide::{image_sign, image_y, Point};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageSummation {
    /// Plain symmetric partial sum over `-M..=M`.
    Raw,
    /// Outermost pair `(M, -M)` taken with half weight, i.e. the mean of the
    /// partial sums at `M` and `M - 1`. Removes the half-term oscillation of
    /// the raw partial sums.
    Paired,
}

/// `sum_{n=-M}^{M} (-1)^n G_0(r, r_n)`.
pub fn greens_image(r: Point, r0: Point, k: f64, images: usize, summation: ImageSummation) -> Result<GreensValue> {
    check_k(k)?;
    check_in_strip("greens_image", r)?;
    check_in_strip("greens_image", r0)?;
    let value = image_sum(r, r0, k, images, summation, true)?;
    Ok(GreensValue {
        value,
        representation: Representation::Image,
        terms_used: 2 * images + 1,
        tail_bound: f64::INFINITY,
    })
}

/// Image sum with optional exclusion of the source term, which gives the
/// renormalization sum when `r = r0`.
pub(crate) fn image_sum(
    r: Point,
    r0: Point,
    k: f64,
    images: usize,
    summation: ImageSummation,
    include_source: bool,
) -> Result<Complex64> {
    let term = |n: i64| -> Result<Complex64> {
        let rn = Point::new(r0.x, image_y(n, r0.y));
        let rho = r.distance(rn);
        if rho == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        Ok(image_sign(n) * free_unchecked(k * rho))
    };
    let mut acc = if include_source { term(0)? } else { Complex64::new(0.0, 0.0) };
    let m = images as i64;
    for j in 1..=m {
        let pair = term(j)? + term(-j)?;
        let w = if j == m && summation == ImageSummation::Paired { 0.5 } else { 1.0 };
        acc += w * pair;
    }
    Ok(acc)
}

/// `sum_{n != 0} (-1)^n G_0(r0, r_n)`, the image form of the regular part.
pub(crate) fn image_sum_regular(k: f64, y0: f64, images: usize, summation: ImageSummation) -> Result<Complex64> {
    let r0 = Point::new(0.0, y0);
    image_sum(r0, r0, k, images, summation, false)
}
