use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use wirescat::greens::*;
use wirescat::specfun::EULER_GAMMA;
use wirescat::Point;

fn random_pairs(seed: u64, n: usize, min_dx: f64) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r0 = Point::new(rng.random_range(-1.0..1.0), rng.random_range(0.01..0.99));
            let dx = rng.random_range(min_dx..1.5) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let r = Point::new(r0.x + dx, rng.random_range(0.0..1.0));
            (r, r0)
        })
        .collect()
}

#[test]
fn kummer_spectral_diffraction_agree() {
    for &kd in &[0.5 * PI, 2.5 * PI, 12.3 * PI] {
        for (r, r0) in random_pairs(7, 100, 0.05) {
            let ku = greens_kummer(r, r0, kd, 1e-12).unwrap();
            let sp = greens_spectral(r, r0, kd, 10_000).unwrap();
            let di = greens_diffraction(r, r0, kd, 1e-12).unwrap();
            assert!((ku.value - sp.value).norm() <= 1e-8, "kd {kd} {r:?} {r0:?}: {} vs {}", ku.value, sp.value);
            assert!((ku.value - di.value).norm() <= 1e-8, "kd {kd}: {} vs {}", ku.value, di.value);
        }
    }
}

#[test]
fn reciprocity() {
    let k = 2.5 * PI;
    for (r, r0) in random_pairs(11, 30, 0.05) {
        let a = greens_kummer(r, r0, k, 1e-12).unwrap().value;
        let b = greens_kummer(r0, r, k, 1e-12).unwrap().value;
        assert!((a - b).norm() <= 1e-10);
        let a = greens_diffraction(r, r0, k, 1e-12).unwrap().value;
        let b = greens_diffraction(r0, r, k, 1e-12).unwrap().value;
        assert!((a - b).norm() <= 1e-10);
    }
}

#[test]
fn walls_and_reality() {
    let r0 = Point::new(0.0, 0.37);
    for &y in &[0.0, 1.0] {
        for &x in &[0.0, 0.05, 0.4, -1.3] {
            let r = Point::new(x, y);
            let g = greens_kummer(r, r0, 2.5 * PI, 1e-10).unwrap();
            assert!(g.value.norm() <= 1e-10, "{r:?}: {}", g.value);
            if x != 0.0 {
                assert!(greens_diffraction(r, r0, 2.5 * PI, 1e-10).unwrap().value.norm() <= 1e-10);
                assert!(greens_spectral(r, r0, 2.5 * PI, 2000).unwrap().value.norm() <= 1e-10);
            }
        }
    }
    for (r, r0) in random_pairs(3, 20, 0.0) {
        let g = greens_kummer(r, r0, 0.5 * PI, 1e-10).unwrap();
        assert!(g.value.im.abs() <= 1e-10);
    }
}

#[test]
fn kummer_on_source_line() {
    // Same x as the source: conditionally convergent spectral sum, Abel-bounded
    // Kummer sum.
    let r0 = Point::new(0.2, 0.3);
    let r = Point::new(0.2, 0.55);
    let ku = greens_kummer(r, r0, 2.5 * PI, 1e-10).unwrap();
    let near = greens_kummer(Point::new(0.2 + 1e-7, 0.55), r0, 2.5 * PI, 1e-10).unwrap();
    assert!((ku.value - near.value).norm() < 1e-6);
}

#[test]
fn coincidence_constant() {
    for &(kd, y0) in &[(2.5 * PI, 0.3), (5.5 * PI, 0.47)] {
        let r0 = Point::new(0.0, y0);
        let r = Point::new(1e-6, y0);
        let lim = greens_static(r, r0).unwrap() - greens_free(r, r0, kd).unwrap();
        let want = Complex64::new(-((kd / PI) * (PI * y0).sin()).ln() / PI - EULER_GAMMA / PI, 0.5);
        assert!((lim - want).norm() <= 1e-8, "{lim} vs {want}");
        assert_eq!(static_coincidence_constant(kd, y0), want);
    }
}

#[test]
fn helmholtz_residual_is_second_order() {
    let k = 2.5 * PI;
    let r0 = Point::new(0.0, 0.3);
    let c = Point::new(0.41, 0.62);
    let g = |x: f64, y: f64| greens_kummer(Point::new(x, y), r0, k, 1e-13).unwrap().value;
    let residual = |h: f64| {
        let lap = (g(c.x + h, c.y) + g(c.x - h, c.y) + g(c.x, c.y + h) + g(c.x, c.y - h) - 4.0 * g(c.x, c.y)) / (h * h);
        (lap + k * k * g(c.x, c.y)).norm()
    };
    let (r1, r2) = (residual(0.02), residual(0.01));
    let order = (r1 / r2).log2();
    assert!((order - 2.0).abs() < 0.1, "residuals {r1:e} {r2:e}");
}

#[test]
fn image_sum_slow_convergence() {
    let k = 2.5 * PI;
    let r0 = Point::new(0.0, 0.5);
    let r = Point::new(0.3, 0.5);
    assert_eq!(
        greens_image(r, r0, k, 0, ImageSummation::Raw).unwrap().value,
        greens_free(r, r0, k).unwrap()
    );
    let reference = greens_kummer(r, r0, k, 1e-12).unwrap().value;
    let paired = greens_image(r, r0, k, 100_000, ImageSummation::Paired).unwrap().value;
    assert!((paired - reference).norm() <= 1e-3, "{paired} vs {reference}");
    let wall = greens_image(Point::new(0.3, 0.0), r0, k, 10_000, ImageSummation::Paired).unwrap().value;
    assert!(wall.norm() <= 1e-2 * reference.norm());
}

#[test]
fn semiclassical_phases() {
    // Centered impurity: image n sits at distance n from the source.
    for &(kd, step) in &[(3.0 * PI, 0.0), (2.5 * PI, 1.5 * PI)] {
        let phase = |n: f64| (kd * n - n * PI).rem_euclid(2.0 * PI);
        for n in 1..20 {
            let d = (phase(n as f64) - phase(n as f64 - 1.0)).rem_euclid(2.0 * PI);
            assert!((d - step).abs() < 1e-12 || (d - step - 2.0 * PI).abs() < 1e-12);
        }
    }
    let sc = greens_semiclassical(Point::new(0.3, 0.5), Point::new(0.0, 0.5), 0.5, 3).unwrap();
    assert!(sc.warning);
}

#[test]
fn benchmark_claims() {
    let k = 2.5 * PI;
    let r0 = Point::new(0.0, 0.3);
    let spec = BenchmarkSpec {
        representations: vec![Representation::Kummer, Representation::Image],
        term_counts: vec![10_000],
        tolerances: vec![1e-10],
    };
    let t = convergence_benchmark(r0, r0, k, &spec).unwrap();
    assert!(t.coincident);
    let ku = t.rows.iter().find(|r| r.mode == BenchMode::Tol).unwrap();
    assert!(ku.terms_used <= 5000 && ku.error <= 1e-10, "{ku:?}");
    let raw = t.rows.iter().find(|r| r.mode == BenchMode::Raw).unwrap();
    assert!(raw.error > 1e-3, "{raw:?}");

    let r = Point::new(0.5, 0.6);
    let spec = BenchmarkSpec {
        representations: vec![Representation::Spectral, Representation::Kummer],
        term_counts: (1..=100).collect(),
        tolerances: vec![],
    };
    let t = convergence_benchmark(r, r0, k, &spec).unwrap();
    let sp: Vec<_> = t.rows.iter().filter(|r| r.representation == Representation::Spectral).collect();
    let hit = sp.iter().find(|r| r.error <= 1e-10).expect("spectral reached 1e-10");
    assert!(hit.terms_used <= 100);
    // Geometric slope of the spectral error beyond the open modes.
    for w in sp.windows(2).skip(2) {
        assert!(w[1].error <= w[0].error * (1.0 + 1e-6) + 2.0 * REFERENCE_TOL, "{:?} {:?}", w[0], w[1]);
    }

    // Slope fit needs many terms above round-off, hence a closer point.
    let dx = 0.1;
    let r = Point::new(dx, 0.6);
    let t = convergence_benchmark(r, r0, k, &spec).unwrap();
    let sp: Vec<_> = t.rows.iter().filter(|r| r.representation == Representation::Spectral).collect();
    // Least-squares fit of ln(error) against M over the range above round-off.
    let pts: Vec<(f64, f64)> = sp[20..80].iter().map(|r| (r.terms_used as f64, r.error.ln())).collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = -num / den;
    assert!((slope / (PI * dx) - 1.0).abs() < 0.1, "slope {slope}");
}
