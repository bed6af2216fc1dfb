//! S-matrix, cross sections and conductance of the confined impurity.
//!
//! With `v_n = chi_n(y0) / sqrt(kx_n)` over open channels the reflection
//! matrix is `R = -i Rs v v^T` and the transmission matrix `T = I + R`. The
//! total cross section is `sigma = |Rs|^2 Sigma^2` with `Sigma = v . v`.

use crate::error::{domain, Error, Result};
use crate::greens::semiclassical_sum;
use crate::renorm::{effective_strength, is_node, t_matrix, RenormState, DEFAULT_TOL};
use crate::waveguide::{self, chi, Point, WireConfig};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct SMatrixResult {
    pub k: f64,
    pub open: usize,
    pub r: DMatrix<Complex64>,
    pub t: DMatrix<Complex64>,
    pub sigma_n: Vec<f64>,
    pub sigma: f64,
    /// `N - sigma`, in conductance quanta.
    pub conductance: f64,
    /// `Tr(T^dagger T)`
    pub transmission: f64,
    /// `max |S^dagger S - I|` over the 2N x 2N block matrix.
    pub unitarity_residual: f64,
    /// Second over first singular value of R (0 for a single channel).
    pub rank_ratio: f64,
    pub state: RenormState,
}

impl SMatrixResult {
    /// `[[R, T], [T, R]]`
    pub fn block(&self) -> DMatrix<Complex64> {
        let n = self.open;
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        s.view_mut((0, 0), (n, n)).copy_from(&self.r);
        s.view_mut((n, n), (n, n)).copy_from(&self.r);
        s.view_mut((0, n), (n, n)).copy_from(&self.t);
        s.view_mut((n, 0), (n, n)).copy_from(&self.t);
        s
    }
}

fn flux_amplitudes(k: f64, y0: f64, open: usize) -> Vec<f64> {
    (1..=open)
        .map(|m| chi(m, y0) / waveguide::kx_unchecked(m, k).re.sqrt())
        .collect()
}

fn open_state(k: f64, cfg: &WireConfig) -> Result<RenormState> {
    let st = effective_strength(k, cfg, DEFAULT_TOL)?;
    if st.sum.open == 0 {
        return Err(Error::NoOpenChannels(k));
    }
    Ok(st)
}

pub fn s_matrix(k: f64, cfg: &WireConfig) -> Result<SMatrixResult> {
    let st = open_state(k, cfg)?;
    Ok(s_matrix_from_state(&st, cfg.y0))
}

pub fn s_matrix_from_state(st: &RenormState, y0: f64) -> SMatrixResult {
    let k = st.sum.k;
    let n = st.sum.open;
    let v = flux_amplitudes(k, y0, n);
    let coef = -Complex64::i() * st.rs;
    let r = DMatrix::from_fn(n, n, |i, j| coef * v[i] * v[j]);
    let t = DMatrix::<Complex64>::identity(n, n) + &r;
    let sigma_sum: f64 = v.iter().map(|x| x * x).sum();
    let rs2 = st.rs.norm_sqr();
    let sigma_n: Vec<f64> = v.iter().map(|x| rs2 * x * x * sigma_sum).collect();
    let sigma = rs2 * sigma_sum * sigma_sum;
    let transmission = (t.adjoint() * &t).trace().re;
    let mut res = SMatrixResult {
        k,
        open: n,
        r,
        t,
        sigma_n,
        sigma,
        conductance: n as f64 - sigma,
        transmission,
        unitarity_residual: 0.0,
        rank_ratio: 0.0,
        state: *st,
    };
    let s = res.block();
    let id = DMatrix::<Complex64>::identity(2 * n, 2 * n);
    res.unitarity_residual = (s.adjoint() * &s - id).iter().fold(0.0, |m, z| m.max(z.norm()));
    if n > 1 {
        let sv = res.r.clone().singular_values();
        let mut vals: Vec<f64> = sv.iter().copied().collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        res.rank_ratio = if vals[0] > 0.0 { vals[1] / vals[0] } else { 0.0 };
    }
    res
}

/// Partial cross section into channel `n`,
/// `|Rs|^2 (chi_n(y0)^2 / kx_n) Sigma`.
pub fn cross_section_mode(n: usize, k: f64, cfg: &WireConfig) -> Result<f64> {
    let st = open_state(k, cfg)?;
    if n == 0 || n > st.sum.open {
        return Err(domain(
            "cross_section_mode",
            format!("channel {n} is not open (N = {})", st.sum.open),
        ));
    }
    let w = chi(n, cfg.y0).powi(2) / waveguide::kx_unchecked(n, k).re;
    Ok(st.rs.norm_sqr() * w * st.sum.sigma_sum)
}

/// The same cross section computed four ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaForms {
    /// `|Rs|^2 Sigma^2`
    pub matrix: f64,
    /// `(Im Rs)^2 / |Rs|^2`
    pub imaginary: f64,
    /// `|s phi~_s(r0)|^2` with the plane-wave mirror sum at the impurity
    pub mirror: f64,
    /// `|1 - exp(2i delta0)|^2 / 4`
    pub phase: f64,
}

impl SigmaForms {
    pub fn max_spread(&self) -> f64 {
        let v = [self.matrix, self.imaginary, self.mirror, self.phase];
        let hi = v.iter().copied().fold(f64::MIN, f64::max);
        let lo = v.iter().copied().fold(f64::MAX, f64::min);
        hi - lo
    }
}

pub fn sigma_forms_from_state(st: &RenormState, y0: f64) -> SigmaForms {
    let sig = st.sum.sigma_sum;
    let rs2 = st.rs.norm_sqr();
    let imaginary = if rs2 > 0.0 { st.rs.im * st.rs.im / rs2 } else { 0.0 };
    let phi_s = mirror_s_at_impurity(st.sum.k, y0, st.sum.open);
    let mirror = (st.t.s * phi_s * st.renorm_factor).norm_sqr();
    let e2id = e2id_from_state(st);
    SigmaForms {
        matrix: rs2 * sig * sig,
        imaginary,
        mirror,
        phase: 0.25 * (1.0 - e2id).norm_sqr(),
    }
}

/// `phi_s(r0) = sum_open chi_n(y0)^2 cos(0) / kx_n`, written as the
/// plane-wave sum rather than reusing Sigma.
fn mirror_s_at_impurity(k: f64, y0: f64, open: usize) -> f64 {
    let p = Point::new(0.0, y0);
    crate::mirror::plane_wave_s(k, p, p, open)
}

pub fn cross_section_forms(k: f64, cfg: &WireConfig) -> Result<SigmaForms> {
    let st = open_state(k, cfg)?;
    Ok(sigma_forms_from_state(&st, cfg.y0))
}

/// Total cross section in units of the width; zero below the first threshold.
pub fn cross_section(k: f64, cfg: &WireConfig) -> Result<f64> {
    let st = effective_strength(k, cfg, DEFAULT_TOL)?;
    Ok(st.rs.norm_sqr() * st.sum.sigma_sum.powi(2))
}

/// `N - sigma` in conductance quanta; zero below the first threshold.
pub fn conductance(k: f64, cfg: &WireConfig) -> Result<f64> {
    let st = effective_strength(k, cfg, DEFAULT_TOL)?;
    Ok(st.sum.open as f64 - st.rs.norm_sqr() * st.sum.sigma_sum.powi(2))
}

/// Free-space cross section `|s|^2 / k`.
pub fn free_cross_section(k: f64, a: f64) -> Result<f64> {
    Ok(t_matrix(k, a)?.s.norm_sqr() / k)
}

/// `|Rs|^2 Sigma + Im Rs`.
pub fn wire_optical_residual(rs: Complex64, sigma_sum: f64) -> f64 {
    rs.norm_sqr() * sigma_sum + rs.im
}

pub fn optical_residual(k: f64, cfg: &WireConfig) -> Result<f64> {
    let st = open_state(k, cfg)?;
    Ok(wire_optical_residual(st.rs, st.sum.sigma_sum))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift {
    /// In `[0, pi)`.
    pub delta0: f64,
    pub e2id: Complex64,
}

impl PhaseShift {
    pub fn from_e2id(e2id: Complex64) -> Self {
        Self {
            delta0: (0.5 * e2id.arg()).rem_euclid(PI),
            e2id,
        }
    }

    pub fn from_delta(delta0: f64) -> Self {
        Self {
            delta0: delta0.rem_euclid(PI),
            e2id: Complex64::from_polar(1.0, 2.0 * delta0),
        }
    }

    /// `|1 - exp(2i delta0)|^2 / 4 = sin^2 delta0`
    pub fn sigma(&self) -> f64 {
        0.25 * (1.0 - self.e2id).norm_sqr()
    }
}

/// `exp(2i delta0) = 1 - 2i s phi~_s(r0) = 1 - 2i Rs Sigma`.
fn e2id_from_state(st: &RenormState) -> Complex64 {
    1.0 - 2.0 * Complex64::i() * st.rs * st.sum.sigma_sum
}

pub fn phase_shift_from_state(st: &RenormState) -> PhaseShift {
    PhaseShift::from_e2id(e2id_from_state(st))
}

pub fn phase_shift(k: f64, cfg: &WireConfig) -> Result<PhaseShift> {
    Ok(phase_shift_from_state(&open_state(k, cfg)?))
}

/// Leading behaviour of sigma just below the opening of mode `N`,
/// `(2 N eps / pi) |sum_{n<N} (chi_n/chi_N)^2 / sqrt(N^2 - n^2)|^2`.
pub fn sigma_edge_asymptote(n: usize, eps: f64, y0: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("sigma_edge_asymptote", "mode index starts at 1"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(domain("sigma_edge_asymptote", "offset must be positive"));
    }
    if is_node(n, y0) {
        return Err(Error::DegenerateMode(n));
    }
    let cn = chi(n, y0).powi(2);
    let nn = (n * n) as f64;
    let sum: f64 = (1..n)
        .map(|m| chi(m, y0).powi(2) / cn / (nn - (m * m) as f64).sqrt())
        .sum();
    Ok(2.0 * n as f64 * eps / PI * sum * sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GreensVariant {
    Kummer,
    /// Asymptotic image sum with the given number of images per side.
    Semiclassical { images: usize },
}

/// `sigma = |s Im G_w / (1 - s [G_w - G_0])|^2` at the impurity, with the
/// wire Green's function from the chosen route.
pub fn sigma_from_greens(k: f64, cfg: &WireConfig, variant: GreensVariant) -> Result<f64> {
    let t = t_matrix(k, cfg.a)?;
    let g_r = match variant {
        GreensVariant::Kummer => crate::renorm::renorm_sum(k, cfg.y0, DEFAULT_TOL, cfg.mode_guard)?.g_r,
        GreensVariant::Semiclassical { images } => semiclassical_renorm_sum(k, cfg.y0, images)?,
    };
    // G_0 contributes -1/2 to Im G_w at coincidence.
    let im_gw = g_r.im - 0.5;
    let den = 1.0 - t.s * g_r;
    if den.norm() < crate::renorm::POLE_THRESHOLD {
        return Err(Error::PoleEncountered(den.norm()));
    }
    Ok((t.s * im_gw / den).norm_sqr())
}

/// Semiclassical regular part: the asymptotic image sum without the source.
pub fn semiclassical_renorm_sum(k: f64, y0: f64, images: usize) -> Result<Complex64> {
    if images == 0 {
        return Err(domain("semiclassical_renorm_sum", "needs at least one image"));
    }
    let r0 = Point::new(0.0, y0);
    Ok(semiclassical_sum(r0, r0, k, images, false)?.value)
}
