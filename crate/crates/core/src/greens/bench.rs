//! Terms-versus-error tables for the wire Green's function representations.

use super::diffraction::greens_diffraction;
use super::images::{image_sum, ImageSummation};
use super::series::{greens_kummer_terms, regular_part, subtracted_series, Stop};
use super::{check_in_strip, check_k, greens_spectral, static_unchecked, Representation};
use crate::error::{domain, Error, Result};
use crate::waveguide::{self, Point, DEFAULT_MODE_GUARD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerance of the reference evaluation.
pub const REFERENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub representations: Vec<Representation>,
    /// Truncation orders for the fixed-length sums (spectral, image, and
    /// the Kummer series run at fixed length).
    pub term_counts: Vec<usize>,
    /// Tolerances for the adaptive sums (kummer, diffraction).
    pub tolerances: Vec<f64>,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        Self {
            representations: vec![
                Representation::Spectral,
                Representation::Kummer,
                Representation::Image,
            ],
            term_counts: vec![1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10_000],
            tolerances: vec![1e-4, 1e-6, 1e-8, 1e-10, 1e-12],
        }
    }
}

/// How a benchmark row was truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMode {
    Terms,
    Tol,
    Raw,
    Paired,
}

impl BenchMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Terms => "terms",
            Self::Tol => "tol",
            Self::Raw => "raw",
            Self::Paired => "paired",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub representation: Representation,
    pub mode: BenchMode,
    /// Requested tolerance, or NaN for fixed-length rows.
    pub tol: f64,
    pub terms_used: usize,
    pub value: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkTable {
    pub reference: Complex64,
    /// True when `r = r0`; every row then refers to the regular part
    /// `G_w - G_0` at the source.
    pub coincident: bool,
    pub rows: Vec<BenchmarkRow>,
}

pub fn convergence_benchmark(r: Point, r0: Point, k: f64, spec: &BenchmarkSpec) -> Result<BenchmarkTable> {
    check_k(k)?;
    check_in_strip("convergence_benchmark", r)?;
    check_in_strip("convergence_benchmark", r0)?;
    waveguide::open_channel_count(k, DEFAULT_MODE_GUARD)?;
    let coincident = r == r0;
    let dx = (r.x - r0.x).abs();
    let reference = if coincident {
        regular_part(k, r0.y, Stop::Tol(REFERENCE_TOL))?.sum
    } else {
        subtracted_series(k, r.y, r0.y, dx, Stop::Tol(REFERENCE_TOL))?.sum + static_unchecked(r.y, r0.y, dx)
    };
    let mut rows = Vec::new();
    let mut push = |representation, mode, tol, terms_used, value: Complex64| {
        rows.push(BenchmarkRow {
            representation,
            mode,
            tol,
            terms_used,
            value,
            error: (value - reference).norm(),
        });
    };
    for &rep in &spec.representations {
        match rep {
            Representation::Spectral => {
                if coincident {
                    return Err(Error::CoincidentPoints);
                }
                for &m in &spec.term_counts {
                    let g = greens_spectral(r, r0, k, m.max(1))?;
                    push(rep, BenchMode::Terms, f64::NAN, g.terms_used, g.value);
                }
            }
            Representation::Kummer => {
                for &m in &spec.term_counts {
                    let m = m.max(1);
                    let v = if coincident {
                        regular_part(k, r0.y, Stop::Terms(m))?.sum
                    } else {
                        greens_kummer_terms(r, r0, k, m)?.value
                    };
                    push(rep, BenchMode::Terms, f64::NAN, m, v);
                }
                for &tol in &spec.tolerances {
                    let s = if coincident {
                        regular_part(k, r0.y, Stop::Tol(tol))?
                    } else {
                        let mut s = subtracted_series(k, r.y, r0.y, dx, Stop::Tol(tol))?;
                        s.sum += static_unchecked(r.y, r0.y, dx);
                        s
                    };
                    push(rep, BenchMode::Tol, tol, s.terms, s.sum);
                }
            }
            Representation::Image => {
                for &m in &spec.term_counts {
                    for (mode, how) in [(BenchMode::Raw, ImageSummation::Raw), (BenchMode::Paired, ImageSummation::Paired)] {
                        let v = image_sum(r, r0, k, m, how, !coincident)?;
                        push(rep, mode, f64::NAN, 2 * m + usize::from(!coincident), v);
                    }
                }
            }
            Representation::Diffraction => {
                if coincident {
                    return Err(Error::CoincidentPoints);
                }
                for &tol in &spec.tolerances {
                    let g = greens_diffraction(r, r0, k, tol)?;
                    push(rep, BenchMode::Tol, tol, g.terms_used, g.value);
                }
            }
            other => {
                return Err(domain(
                    "convergence_benchmark",
                    format!("{} is not a truncated wire representation", other.name()),
                ))
            }
        }
    }
    Ok(BenchmarkTable {
        reference,
        coincident,
        rows,
    })
}
