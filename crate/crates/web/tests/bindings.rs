use std::f64::consts::PI;
use wirescat_web::{field_values, point_summary, sweep_rows, SWEEP_STRIDE};

#[test]
fn sweep_rows_are_flat() {
    let v = sweep_rows(1.5 * PI, 2.5 * PI, 11, 0.3, 0.1).unwrap();
    assert_eq!(v.len(), 11 * SWEEP_STRIDE);
    for row in v.chunks(SWEEP_STRIDE) {
        let (sigma, g, n) = (row[1], row[2], row[3]);
        if sigma.is_finite() {
            assert!((0.0..=1.0).contains(&sigma));
            assert!((g - (n - sigma)).abs() < 1e-12);
        }
    }
    assert!(sweep_rows(1.0, 2.0, 1, 0.3, 0.1).is_err());
}

#[test]
fn field_is_row_major() {
    let v = field_values("px", 40.0, 0.6, -1.0, 1.0, 9, 4).unwrap();
    assert_eq!(v.len(), 36);
    // px is odd in x about the impurity.
    for j in 0..4 {
        for i in 0..9 {
            assert!((v[j * 9 + i] + v[j * 9 + 8 - i]).abs() < 1e-12);
        }
    }
    assert!(field_values("q", 40.0, 0.6, -1.0, 1.0, 9, 4).is_err());
}

#[test]
fn summary_is_consistent() {
    let s = point_summary(7.2 * PI, 0.32, 0.02).unwrap();
    assert_eq!(s.open, 7);
    assert_eq!(s.transmission_probabilities.len(), 49);
    let total: f64 = s.transmission_probabilities.iter().sum();
    assert!((total - s.conductance).abs() < 1e-10);
    assert!((s.sigma - 0.836_974_799_505_981).abs() < 1e-10);
    assert!(s.unitarity_residual < 1e-12);
}
