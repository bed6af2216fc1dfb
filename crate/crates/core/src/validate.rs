//! Self-checks of every identity the model has to satisfy, with measured
//! residuals and thresholds.

use crate::error::Result;
use crate::greens::{
    convergence_benchmark, greens_diffraction, greens_free, greens_kummer, greens_spectral, greens_static,
    static_coincidence_constant, BenchMode, BenchmarkSpec, Representation,
};
use crate::mirror::{field_map, mirror_partial, s_channel_coupling, FieldKind, GridSpec, MirrorKind};
use crate::par::map_indices;
use crate::renorm::{
    foldy_solve, gr_edge_asymptote, hard_disk_boundary_check, renorm_sum, t_matrix, EdgeSide, FoldyMethod,
    FoldyProblem, IncidentWave, RenormState, TMatrix, DEFAULT_TOL,
};
use crate::scattering::{s_matrix_from_state, sigma_edge_asymptote, sigma_forms_from_state, wire_optical_residual};
use crate::sweep::{sweep_geometry, GeometrySweep, Grid};
use crate::waveguide::{Point, WireConfig, DEFAULT_MODE_GUARD};
use crate::Error;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidateOptions {
    /// Smaller grids and image counts.
    pub fast: bool,
    /// Relative perturbation applied to every bare strength `s(k)`; a
    /// nonzero value must make the suite fail.
    pub perturb_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// Passes when `measured <= threshold`.
    Le,
    /// Passes when `measured >= threshold`.
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, measured: f64, relation: Relation, threshold: f64) -> Self {
        let passed = match relation {
            Relation::Le => measured <= threshold,
            Relation::Ge => measured >= threshold,
        };
        Self {
            name,
            measured,
            relation,
            threshold,
            passed,
            detail: String::new(),
        }
    }

    fn failed(name: &'static str, relation: Relation, threshold: f64, err: &Error) -> Self {
        Self {
            name,
            measured: f64::NAN,
            relation,
            threshold,
            passed: false,
            detail: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub options: ValidateOptions,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Suite {
    opts: ValidateOptions,
    checks: Vec<Check>,
}

impl Suite {
    fn strength(&self, k: f64, a: f64) -> Result<TMatrix> {
        let mut t = t_matrix(k, a)?;
        t.s *= 1.0 + self.opts.perturb_s;
        Ok(t)
    }

    fn push(&mut self, name: &'static str, relation: Relation, threshold: f64, measured: Result<f64>) {
        self.checks.push(match measured {
            Ok(m) => Check::new(name, m, relation, threshold),
            Err(e) => Check::failed(name, relation, threshold, &e),
        });
    }

    fn pick<T: Copy>(&self, fast: T, full: T) -> T {
        if self.opts.fast {
            fast
        } else {
            full
        }
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that a broken evaluation cannot pass.
    it.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

/// Weyl sequence in [0, 1); deterministic and well spread.
fn weyl(i: usize, alpha: f64) -> f64 {
    (0.5 + i as f64 * alpha).fract()
}

fn free_checks(s: &mut Suite) {
    let r = (|| {
        let mut worst = 0.0f64;
        for i in 0..200 {
            let ka = 1e-3 * (2e4f64).powf(i as f64 / 199.0);
            for a in [0.1, -0.1] {
                worst = worst.max(s.strength(ka / 0.1, a)?.optical_residual());
            }
        }
        Ok(worst)
    })();
    s.push("free_optical_theorem", Relation::Le, 1e-12, r);
    let r = (|| {
        let mut worst = 0.0f64;
        for ka in [0.5, 2.0, 5.0] {
            worst = worst.max(hard_disk_boundary_check(&s.strength(ka / 0.1, 0.1)?, IncidentWave::S, 64)?);
        }
        Ok(worst)
    })();
    s.push("hard_disk_boundary", Relation::Le, 1e-10, r);
}

fn greens_checks(s: &mut Suite) {
    let pairs = s.pick(20, 100);
    let r = (|| {
        let mut worst = (0.0f64, 0.0f64);
        for k in [0.5 * PI, 2.5 * PI, 12.3 * PI] {
            let errs = map_indices(pairs, |i| -> Result<(f64, f64)> {
                let r0 = Point::new(2.0 * weyl(i, 0.618_033_988_749_894_9) - 1.0, 0.01 + 0.98 * weyl(i, 0.754_877_666_246_692_7));
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let dx = sign * (0.05 + 1.45 * weyl(i, 0.569_840_290_998_053_3));
                let r = Point::new(r0.x + dx, weyl(i, 0.414_213_562_373_095));
                let ku = greens_kummer(r, r0, k, 1e-12)?.value;
                let sp = greens_spectral(r, r0, k, 10_000)?.value;
                let di = greens_diffraction(r, r0, k, 1e-12)?.value;
                Ok(((ku - sp).norm(), (ku - di).norm()))
            });
            for e in errs {
                let e = e?;
                worst = (worst.0.max(e.0), worst.1.max(e.1));
            }
        }
        Ok(worst)
    })();
    s.push("kummer_vs_spectral", Relation::Le, 1e-8, r.as_ref().map(|w| w.0).map_err(Clone::clone));
    s.push("kummer_vs_diffraction", Relation::Le, 1e-8, r.map(|w| w.1));

    let r = (|| {
        let mut worst = 0.0f64;
        for (k, y0) in [(2.5 * PI, 0.3), (5.5 * PI, 0.47)] {
            let r0 = Point::new(0.0, y0);
            let r = Point::new(1e-6, y0);
            let lim = greens_static(r, r0)? - greens_free(r, r0, k)?;
            worst = worst.max((lim - static_coincidence_constant(k, y0)).norm());
        }
        Ok(worst)
    })();
    s.push("coincidence_constant", Relation::Le, 1e-8, r);
}

#[derive(Default, Clone, Copy)]
struct WireMaxima {
    im_identity: f64,
    unitarity: f64,
    rank: f64,
    forms: f64,
    sigma_excess: f64,
    conductance: f64,
    optical: f64,
}

impl WireMaxima {
    fn merge(self, o: Self) -> Self {
        let m = |a: f64, b: f64| max_of([a, b]);
        Self {
            im_identity: m(self.im_identity, o.im_identity),
            unitarity: m(self.unitarity, o.unitarity),
            rank: m(self.rank, o.rank),
            forms: m(self.forms, o.forms),
            sigma_excess: m(self.sigma_excess, o.sigma_excess),
            conductance: m(self.conductance, o.conductance),
            optical: m(self.optical, o.optical),
        }
    }
}

fn wire_checks(s: &mut Suite) {
    let kd = Grid {
        min: 1.1 * PI,
        max: 12.9 * PI,
        points: s.pick(100, 500),
    };
    let heights = [0.05, 0.25, 0.32, 0.5];
    let lengths = [-0.1, -0.02, 0.02, 0.1];
    let suite = &*s;
    let parts = map_indices(kd.points * heights.len(), |i| -> Result<WireMaxima> {
        let (k, y0) = (kd.value(i / heights.len()), heights[i % heights.len()]);
        let sum = match renorm_sum(k, y0, DEFAULT_TOL, DEFAULT_MODE_GUARD) {
            Err(Error::ModeOpeningSingularity { .. }) => return Ok(WireMaxima::default()),
            r => r?,
        };
        let mut w = WireMaxima {
            im_identity: (sum.g_r.im - (0.5 - sum.sigma_sum)).abs(),
            ..Default::default()
        };
        for a in lengths {
            let st = RenormState::new(sum, suite.strength(k, a)?)?;
            let m = s_matrix_from_state(&st, y0);
            let f = sigma_forms_from_state(&st, y0);
            w = w.merge(WireMaxima {
                im_identity: 0.0,
                unitarity: m.unitarity_residual,
                rank: m.rank_ratio,
                forms: f.max_spread(),
                sigma_excess: max_of([-m.sigma, m.sigma - 1.0]),
                conductance: max_of([
                    (m.conductance - (m.open as f64 - m.sigma)).abs(),
                    (m.conductance - m.transmission).abs(),
                ]),
                optical: wire_optical_residual(st.rs, st.sum.sigma_sum).abs(),
            });
        }
        Ok(w)
    });
    let total = parts
        .into_iter()
        .try_fold(WireMaxima::default(), |acc, p| p.map(|p| acc.merge(p)));
    let get = |f: fn(&WireMaxima) -> f64| total.as_ref().map(f).map_err(Clone::clone);
    s.push("im_gr_identity", Relation::Le, 1e-10, get(|w| w.im_identity));
    s.push("s_matrix_unitarity", Relation::Le, 1e-10, get(|w| w.unitarity));
    s.push("reflection_rank_one", Relation::Le, 1e-10, get(|w| w.rank));
    s.push("sigma_four_forms", Relation::Le, 1e-10, get(|w| w.forms));
    s.push("sigma_in_unit_interval", Relation::Le, 1e-12, get(|w| w.sigma_excess));
    s.push("conductance_n_minus_sigma", Relation::Le, 1e-10, get(|w| w.conductance));
    s.push("wire_optical_constraint", Relation::Le, 1e-10, get(|w| w.optical));
}

fn sigma_at(s: &Suite, k: f64, y0: f64, a: f64) -> Result<f64> {
    let st = RenormState::new(renorm_sum(k, y0, DEFAULT_TOL, DEFAULT_MODE_GUARD)?, s.strength(k, a)?)?;
    Ok(st.rs.norm_sqr() * st.sum.sigma_sum.powi(2))
}

fn resonance_checks(s: &mut Suite) {
    let r = sigma_at(s, 2.0 * PI - 1e-4, 0.05, 0.1);
    s.push("resonance_below_opening", Relation::Le, 1e-3, r);
    let r = sigma_at(s, 2.0 * PI + 1e-6, 0.05, 0.1);
    s.push("resonance_above_opening", Relation::Ge, 0.9, r);
    let r = (|| {
        let v = [1e-4, 1e-6, 1e-8]
            .iter()
            .map(|e| sigma_at(s, 2.0 * PI + e, 0.05, 0.1))
            .collect::<Result<Vec<_>>>()?;
        Ok(v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min))
    })();
    s.push("resonance_monotone_increase", Relation::Ge, f64::MIN_POSITIVE, r);
    let r = (|| Ok((sigma_at(s, 2.0 * PI + 1e-6, 0.5, 0.1)? - sigma_at(s, 2.0 * PI - 1e-6, 0.5, 0.1)?).abs()))();
    s.push("missing_resonance_at_node", Relation::Le, 1e-3, r);
    let r = (|| Ok(sigma_at(s, 3.0 * PI + 1e-6, 0.5, 0.1)? - sigma_at(s, 3.0 * PI - 1e-6, 0.5, 0.1)?))();
    s.push("jump_at_odd_opening", Relation::Ge, 0.9, r);
}

fn edge_checks(s: &mut Suite) {
    let r = (|| {
        let mut worst = 0.0f64;
        let reference = 1e-4;
        for (n, y0) in [(2usize, 0.05), (3, 0.32)] {
            for side in [EdgeSide::Below, EdgeSide::Above] {
                let sign = if side == EdgeSide::Below { -1.0 } else { 1.0 };
                let opening = n as f64 * PI;
                let g_ref = renorm_sum(opening + sign * reference, y0, DEFAULT_TOL, DEFAULT_MODE_GUARD)?.g_r;
                let a_ref = gr_edge_asymptote(n, reference, y0, side)?;
                for eps in [1e-6, 1e-7, 1e-8] {
                    let g = renorm_sum(opening + sign * eps, y0, DEFAULT_TOL, DEFAULT_MODE_GUARD)?.g_r;
                    let a = gr_edge_asymptote(n, eps, y0, side)?;
                    worst = worst.max(((g - g_ref) - (a - a_ref)).norm() / (a - a_ref).norm());
                }
            }
        }
        Ok(worst)
    })();
    s.push("gr_edge_asymptote", Relation::Le, 0.1, r);
    let r = (|| {
        let mut worst = 0.0f64;
        for (n, y0) in [(2usize, 0.05), (2, 0.25), (3, 0.32)] {
            for eps in [1e-6, 1e-7, 1e-8] {
                let full = sigma_at(s, n as f64 * PI - eps, y0, 0.1)?;
                worst = worst.max((full / sigma_edge_asymptote(n, eps, y0)? - 1.0).abs());
            }
        }
        Ok(worst)
    })();
    s.push("sigma_edge_asymptote", Relation::Le, 0.1, r);
}

fn foldy_check(s: &mut Suite) {
    let images = s.pick(400, 1000);
    let r = (|| {
        let (k, y0) = (2.5 * PI, 0.3);
        let t = s.strength(k, 0.1)?;
        let psi = foldy_solve(&FoldyProblem::image_array(k, y0, images, t.s), FoldyMethod::Direct)?;
        let st = RenormState::new(renorm_sum(k, y0, DEFAULT_TOL, DEFAULT_MODE_GUARD)?, t)?;
        Ok((psi[images] - st.renorm_factor).norm())
    })();
    s.push("foldy_image_array", Relation::Le, 1e-2, r);
}

fn mirror_checks(s: &mut Suite) {
    let (nx, ny) = s.pick((100, 25), (400, 100));
    let r = (|| {
        let mut worst = 0.0f64;
        for (k, y0) in [(2.5 * PI, 0.3), (40.0, 0.6)] {
            let cfg = WireConfig::new(y0, 0.1)?;
            let grid = GridSpec::new((-2.0, 2.0), (0.0, 1.0), nx, ny)?;
            let phi = field_map(FieldKind::Mirror(MirrorKind::S), k, &cfg, &grid)?;
            let g = field_map(FieldKind::Greens { tol: DEFAULT_TOL }, k, &cfg, &grid)?;
            worst = max_of(
                std::iter::once(worst).chain(phi.values.iter().zip(&g.values).map(|(p, g)| (p.re + g.im).abs())),
            );
        }
        Ok(worst)
    })();
    s.push("mirror_s_is_minus_im_greens", Relation::Le, 1e-10, r);
    let cases = [(2.5 * PI, 0.3), (40.0, 0.6), (7.7 * PI, 0.05), (12.5 * PI, 0.5)];
    let r = (|| {
        let mut worst = 0.0f64;
        for (k, y0) in cases {
            let cfg = WireConfig::new(y0, 0.1)?.with_x0(0.37)?;
            for kind in [MirrorKind::Px, MirrorKind::Dxy, MirrorKind::F] {
                worst = worst.max(mirror_partial(kind, cfg.impurity(), k, &cfg)?.abs());
            }
        }
        Ok(worst)
    })();
    s.push("higher_partials_vanish_at_impurity", Relation::Le, 1e-12, r);
    let r = (|| {
        let mut worst = 0.0f64;
        for (k, y0) in cases {
            let cfg = WireConfig::new(y0, 0.1)?;
            for kind in [MirrorKind::Px, MirrorKind::Dxy, MirrorKind::F] {
                worst = worst.max(s_channel_coupling(kind, k, &cfg, 2.0, 512)?.norm());
            }
        }
        Ok(worst)
    })();
    s.push("higher_partials_decouple", Relation::Le, 1e-8, r);
}

fn benchmark_checks(s: &mut Suite) {
    let r0 = Point::new(0.0, 0.3);
    let spec = BenchmarkSpec {
        representations: vec![Representation::Kummer, Representation::Image],
        term_counts: vec![10_000],
        tolerances: vec![1e-10],
    };
    let table = convergence_benchmark(r0, r0, 2.5 * PI, &spec);
    let row = |mode| -> Result<_> {
        let t = table.as_ref().map_err(Clone::clone)?;
        Ok(*t.rows.iter().find(|r| r.mode == mode).expect("benchmark row"))
    };
    let tol_row = row(BenchMode::Tol);
    s.push(
        "kummer_terms_at_coincidence",
        Relation::Le,
        5000.0,
        tol_row.as_ref().map(|r| r.terms_used as f64).map_err(Clone::clone),
    );
    s.push("kummer_error_at_coincidence", Relation::Le, 1e-10, tol_row.map(|r| r.error));
    s.push("raw_image_sum_error", Relation::Ge, 1e-3, row(BenchMode::Raw).map(|r| r.error));
}

/// Grid-step distance between the sigma maximum at `y0 = 0.25` and the
/// nearest maximum of the free cross section (which is even in `a`).
pub fn geometry_peak_offset(kd: f64, points: usize) -> Result<usize> {
    let a = Grid::new(-0.1, 0.1, points)?;
    let rows = sweep_geometry(&GeometrySweep::new(kd, a, Grid::new(0.25, 0.75, 2)?))?;
    let rows: Vec<_> = rows.into_iter().filter(|r| r.y0 == 0.25).collect();
    let argmax = |f: &dyn Fn(usize) -> f64| (0..rows.len()).fold(0, |b, i| if f(i) > f(b) { i } else { b });
    let best = argmax(&|i| rows[i].sigma);
    let free_max = rows[argmax(&|i| rows[i].sigma_free)].sigma_free;
    Ok((0..rows.len())
        .filter(|&i| rows[i].sigma_free >= free_max * (1.0 - 1e-9))
        .map(|i| i.abs_diff(best))
        .min()
        .unwrap_or(usize::MAX))
}

fn geometry_check(s: &mut Suite) {
    let r = geometry_peak_offset(12.5 * PI, 101).map(|d| d as f64);
    s.push("geometry_peak_matches_free", Relation::Le, 1.0, r);
}

pub fn run_validation(opts: ValidateOptions) -> Report {
    let mut s = Suite {
        opts,
        checks: Vec::new(),
    };
    free_checks(&mut s);
    greens_checks(&mut s);
    wire_checks(&mut s);
    resonance_checks(&mut s);
    edge_checks(&mut s);
    foldy_check(&mut s);
    mirror_checks(&mut s);
    benchmark_checks(&mut s);
    geometry_check(&mut s);
    Report {
        options: opts,
        checks: s.checks,
    }
}
