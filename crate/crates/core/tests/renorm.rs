use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::time::Instant;
use wirescat::greens::ImageSummation;
use wirescat::renorm::*;
use wirescat::waveguide::{DEFAULT_MODE_GUARD, WireConfig};

// (kd/pi, y0, Re G_r, Im G_r) from tests/oracle/renorm_bruteforce.py.
const BRUTE_FORCE: &[(f64, f64, f64, f64)] = &[
    (2.5, 0.3, 2.30130915641231448e-01, -6.57363570492004445e-02),
    (5.5, 0.47, 1.00979500364937413e-01, 8.18371418509017401e-03),
    (0.5, 0.3, 2.85393280178533881e-02, 5.00000000000000000e-01),
    (12.3, 0.25, 3.49952735330933962e-02, 9.11116147678717736e-02),
    (2.5, 0.05, 7.41081891099426571e-02, 4.52672829467600513e-01),
];

#[test]
fn renorm_sum_matches_brute_force() {
    for &(kp, y0, re, im) in BRUTE_FORCE {
        let g = renorm_sum(kp * PI, y0, 1e-13, DEFAULT_MODE_GUARD).unwrap();
        assert!((g.g_r - Complex64::new(re, im)).norm() <= 1e-11, "kd/pi {kp}: {}", g.g_r);
    }
}

#[test]
fn imaginary_part_identity() {
    let g = renorm_sum(2.5 * PI, 0.3, 1e-12, DEFAULT_MODE_GUARD).unwrap();
    assert!((g.g_r.im - (0.5 - g.sigma_sum)).abs() <= 1e-10);
    let below = renorm_sum(0.7 * PI, 0.3, 1e-12, DEFAULT_MODE_GUARD).unwrap();
    assert_eq!(below.sigma_sum, 0.0);
    assert!((below.g_r.im - 0.5).abs() <= 1e-12);
}

#[test]
fn image_form_agrees() {
    let k = 2.5 * PI;
    let g = renorm_sum(k, 0.3, 1e-12, DEFAULT_MODE_GUARD).unwrap();
    let img = renorm_sum_images(k, 0.3, 100_000, ImageSummation::Paired).unwrap();
    assert!((img - g.g_r).norm() <= 1e-2, "{img} vs {}", g.g_r);
}

#[test]
fn gr_independent_of_a_and_x0() {
    let k = 3.7 * PI;
    let a = effective_strength(k, &WireConfig::new(0.31, 0.1).unwrap(), 1e-12).unwrap();
    let b = effective_strength(k, &WireConfig::new(0.31, -0.03).unwrap().with_x0(4.0).unwrap(), 1e-12).unwrap();
    assert_eq!(a.g_r(), b.g_r());
}

#[test]
fn effective_strength_examples() {
    let cfg = WireConfig::new(0.3, 0.1).unwrap();
    let st = effective_strength(2.5 * PI, &cfg, 1e-12).unwrap();
    assert!(st.optical_residual() <= 1e-10);
    assert!((st.rs - st.t.s * st.renorm_factor).norm() < 1e-15);

    let sum = renorm_sum(2.5 * PI, 0.3, 1e-12, DEFAULT_MODE_GUARD).unwrap();
    let zero = RenormState::new(sum, t_matrix(2.5 * PI, 0.0).unwrap()).unwrap();
    assert_eq!(zero.rs, Complex64::new(0.0, 0.0));

    // Near a mode opening G_r diverges and Rs -> 1/|G_r| -> 0.
    let cfg = WireConfig::new(0.05, 0.1).unwrap();
    let st = effective_strength(2.0 * PI + 1e-8, &cfg, 1e-12).unwrap();
    assert!(st.rs.norm() < 1e-2);
    assert!((st.rs.norm() * st.g_r().norm() - 1.0).abs() < 1e-2);
}

#[test]
fn pole_is_reported() {
    // Build a state whose strength sits exactly on the pole 1/G_r.
    let sum = renorm_sum(2.5 * PI, 0.3, 1e-12, DEFAULT_MODE_GUARD).unwrap();
    let t = TMatrix {
        k: sum.k,
        a: 0.1,
        s: sum.g_r.inv(),
    };
    assert!(matches!(RenormState::new(sum, t), Err(wirescat::Error::PoleEncountered(_))));
}

#[test]
fn hard_disk_boundary() {
    for &(k, a) in &[(5.0, 0.1), (5.0, 0.4), (2.0, 0.25), (50.0, 0.1)] {
        let t = t_matrix(k, a).unwrap();
        assert!(hard_disk_boundary_check(&t, IncidentWave::S, 64).unwrap() <= 1e-10);
        let bare = TMatrix { s: Complex64::new(0.0, 0.0), ..t };
        let j0 = wirescat::specfun::cylinder_bessel_j(0u8.try_into().unwrap(), k * a).unwrap();
        assert!((hard_disk_boundary_check(&bare, IncidentWave::S, 64).unwrap() - j0.abs()).abs() < 1e-15);
        let p_scatt = hard_disk_boundary_check(&t, IncidentWave::P, 64).unwrap();
        let p_bare = hard_disk_boundary_check(&bare, IncidentWave::P, 64).unwrap();
        assert_eq!(p_scatt, p_bare);
    }
    assert!(hard_disk_boundary_check(&t_matrix(5.0, -0.1).unwrap(), IncidentWave::S, 64).is_err());
}

#[test]
fn edge_asymptote_matches_divergent_part() {
    let y0 = 0.05;
    let reference = 1e-4;
    let g_ref = renorm_sum(2.0 * PI - reference, y0, 1e-12, DEFAULT_MODE_GUARD).unwrap().g_r;
    let a_ref = gr_edge_asymptote(2, reference, y0, EdgeSide::Below).unwrap();
    for &eps in &[1e-6, 1e-8] {
        let g = renorm_sum(2.0 * PI - eps, y0, 1e-12, DEFAULT_MODE_GUARD).unwrap().g_r;
        let a = gr_edge_asymptote(2, eps, y0, EdgeSide::Below).unwrap();
        let rel = ((g - g_ref) - (a - a_ref)).norm() / (a - a_ref).norm();
        assert!(rel <= 0.05, "eps {eps}: rel {rel}");
    }
    // Above the opening the divergence is imaginary.
    let g_ref = renorm_sum(2.0 * PI + reference, y0, 1e-12, DEFAULT_MODE_GUARD).unwrap().g_r;
    let a_ref = gr_edge_asymptote(2, reference, y0, EdgeSide::Above).unwrap();
    let g = renorm_sum(2.0 * PI + 1e-8, y0, 1e-12, DEFAULT_MODE_GUARD).unwrap().g_r;
    let a = gr_edge_asymptote(2, 1e-8, y0, EdgeSide::Above).unwrap();
    assert!(((g - g_ref) - (a - a_ref)).norm() / (a - a_ref).norm() <= 0.05);
}

#[test]
fn foldy_image_array_reproduces_renormalization() {
    let k = 2.5 * PI;
    let y0 = 0.3;
    let t = t_matrix(k, 0.1).unwrap();
    let start = Instant::now();
    let problem = FoldyProblem::image_array(k, y0, 1000, t.s);
    let psi = foldy_solve(&problem, FoldyMethod::Direct).unwrap();
    let elapsed = start.elapsed();
    let st = RenormState::new(renorm_sum(k, y0, 1e-12, DEFAULT_MODE_GUARD).unwrap(), t).unwrap();
    let psi0 = psi[1000];
    assert!((psi0 - st.renorm_factor).norm() <= 1e-2, "{psi0} vs {} ({elapsed:?})", st.renorm_factor);
    // The wall boundary condition carries over: neighbours of the source
    // are antisymmetric copies of it.
    for off in 1..=10 {
        let sign = if off % 2 == 0 { 1.0 } else { -1.0 };
        assert!((psi[1000 + off] - sign * psi0).norm() <= 1e-2);
        assert!((psi[1000 - off] - sign * psi0).norm() <= 1e-2);
    }
}

proptest! {
    #[test]
    fn free_optical_theorem(lka in -3.0f64..(20f64).log10(), neg in any::<bool>()) {
        let ka = 10f64.powf(lka);
        let a = if neg { -0.1 } else { 0.1 };
        let t = t_matrix(ka / 0.1, a).unwrap();
        prop_assert!(t.optical_residual() <= 1e-12);
    }

    #[test]
    fn confined_optical_constraint(kp in 1.02f64..12.98, y0 in 0.02f64..0.98, a in -0.3f64..0.3) {
        prop_assume!((kp - kp.round()).abs() > 0.02);
        let cfg = WireConfig::new(y0, a).unwrap();
        let st = effective_strength(kp * PI, &cfg, 1e-10).unwrap();
        prop_assert!((st.g_r().im - (0.5 - st.sigma_sum())).abs() <= 1e-10);
        prop_assert!(st.optical_residual() <= 1e-10);
    }
}
