use shg_web::{bilinear, field, resonance_csv, MAX_BAND};

#[test]
fn heatmap_has_grid_shape() {
    let h = field(8, 1, 1.0, 0.0).unwrap();
    assert_eq!((h.height(), h.width()), (18, 34));
    assert_eq!(h.data().len(), 18 * 34);
    assert!(h.max_abs() > 0.0);
}

#[test]
fn propagation_changes_the_picture() {
    let a = field(6, 2, 1.0, 0.0).unwrap();
    let b = field(6, 2, 1.0, 0.7).unwrap();
    assert_eq!(a.data().len(), b.data().len());
    assert_ne!(a.data(), b.data());
}

#[test]
fn heatmap_rejects_bad_band() {
    assert!(field(0, 1, 1.0, 0.0).is_err());
    assert!(field(MAX_BAND + 1, 1, 1.0, 0.0).is_err());
}

#[test]
fn resonance_unit_block() {
    // σ = 1, N = L = 1: (0,0) and (1,1) both sit in the m = 0 window.
    let csv = resonance_csv(1, 1, 1, 1).unwrap();
    assert!(csv.starts_with("m,count\n"));
    assert!(csv.contains("\n0,2\n"));
    assert!(csv.ends_with("sup,0,2\n"));
    assert!(resonance_csv(3, 1, 1, 1).is_err());
    assert!(resonance_csv(1, 1, 0, 1).is_err());
}

#[test]
fn bilinear_ratio_of_degree_one_pair() {
    // ‖fg‖ ≤ ‖f‖_∞‖g‖ ≤ √((2k+1)/4π)‖f‖‖g‖ for a degree-k harmonic f.
    let r = bilinear(1, 1, 4, 3).unwrap();
    assert!(r > 0.0 && r <= (3.0 / (4.0 * std::f64::consts::PI)).sqrt() + 1e-12, "{r}");
}
