use super::*;
use crate::sht::legendre::normalized;
use crate::sht::quadrature::gauss_legendre;
use std::f64::consts::PI;

fn dy(n: u64) -> Dyadic {
    Dyadic::new(n).unwrap()
}

fn unit(band: usize, k: usize, m: i64) -> SpectralField {
    SpectralField::single_mode(band, k, m, Complex64::new(1.0, 0.0)).unwrap()
}

/// Legendre polynomial coefficients (ascending powers) by Bonnet's recurrence.
fn legendre_poly(n: usize) -> Vec<f64> {
    let mut p0 = vec![1.0];
    let mut p1 = vec![0.0, 1.0];
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (i, c) in p1.iter().enumerate() {
            next[i + 1] += (2 * k + 1) as f64 * c / (k + 1) as f64;
        }
        for (i, c) in p0.iter().enumerate() {
            next[i] -= k as f64 * c / (k + 1) as f64;
        }
        p0 = p1;
        p1 = next;
    }
    p1
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// ∫_{−1}^{1} p(x) dx term by term.
fn poly_integral(p: &[f64]) -> f64 {
    p.iter().enumerate().filter(|(i, _)| i % 2 == 0).map(|(i, c)| 2.0 * c / (i + 1) as f64).sum()
}

/// ‖Y_{a,0} Y_{b,0}‖_{L²(𝕊²)} in closed form.
fn zonal_product_norm(a: usize, b: usize) -> f64 {
    let pa = legendre_poly(a);
    let pb = legendre_poly(b);
    let prod = poly_mul(&pa, &pb);
    let sq = poly_mul(&prod, &prod);
    let norm2 = ((2 * a + 1) * (2 * b + 1)) as f64 / (16.0 * PI * PI);
    (2.0 * PI * norm2 * poly_integral(&sq)).sqrt()
}

#[test]
fn localized_fields() {
    let f = random_localized(dy(4), 10, 3).unwrap();
    assert!((f.norm_l2() - 1.0).abs() < 1e-12);
    assert_eq!(f.dyadic_project(dy(4), &SpectrumModel::S2), f);
    assert_eq!(random_localized(dy(4), 10, 3).unwrap(), f);
    assert_ne!(random_localized(dy(4), 10, 4).unwrap(), f);
    assert!(random_localized(dy(64), 10, 0).is_err());
}

#[test]
fn zero_modes_give_constant_product() {
    let grid = SphereGrid::for_product(1, 1).unwrap();
    let z = unit(1, 0, 0);
    let n = required_time_nodes(&z, &z, SigmaRational::ONE);
    let r = bilinear_product_norm(&z, &z, SigmaRational::ONE, Sign::Plus, &grid, n).unwrap();
    assert!((r - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-14);
}

#[test]
fn single_modes_match_closed_form() {
    let grid = SphereGrid::for_product(4, 2).unwrap();
    let u = unit(4, 4, 0);
    let v = unit(4, 2, 0);
    let n = required_time_nodes(&u, &v, SigmaRational::ONE);
    let r = bilinear_product_norm(&u, &v, SigmaRational::ONE, Sign::Plus, &grid, n).unwrap();
    assert!((r - zonal_product_norm(4, 2)).abs() < 1e-12, "{r} vs {}", zonal_product_norm(4, 2));
    let ratio = bilinear_ratio_of(&u, &v, &grid).unwrap();
    assert!((ratio - r).abs() < 1e-12);
}

#[test]
fn product_norm_matches_direct_time_stepping() {
    // Oracle: synthesize both factors with the generic transform at every node.
    let band = 6;
    let grid = SphereGrid::for_product(band, band).unwrap();
    let u0 = random_localized(dy(2), band, 1).unwrap();
    let v0 = random_localized(dy(4), band, 2).unwrap();
    let sigma = SigmaRational::new(1, 4).unwrap();
    let model = SpectrumModel::S2;
    let n_t = required_time_nodes(&u0, &v0, sigma) + 40;
    for sign in [Sign::Plus, Sign::Minus] {
        let fast = bilinear_product_norm(&u0, &v0, sigma, sign, &grid, n_t).unwrap();
        let (ts, ws) = crate::sht::quadrature::gauss_legendre_on(n_t, 0.0, 1.0);
        let mut acc = 0.0;
        for (&t, &w) in ts.iter().zip(&ws) {
            let ut = u0.map_degrees(|k| Complex64::from_polar(1.0, -sign.value() * model.eigenvalue(k) / sigma.value() * t));
            let vt = v0.map_degrees(|k| Complex64::from_polar(1.0, -model.eigenvalue(k) * t));
            let a = grid.synthesize(&ut).unwrap();
            let b = grid.synthesize(&vt).unwrap();
            acc += w * grid.integrate_real(|j, l| (a.get(j, l) * b.get(j, l)).norm_sqr());
        }
        assert!((fast - acc.sqrt()).abs() < 1e-12 * fast, "{sign:?}: {fast} vs {}", acc.sqrt());
    }
}

#[test]
fn homogeneity_and_conjugation_parity() {
    let band = 7;
    let grid = SphereGrid::for_product(band, band).unwrap();
    let sigma = SigmaRational::new(1, 4).unwrap();
    let u0 = random_localized(dy(4), band, 5).unwrap();
    let v0 = random_localized(dy(2), band, 6).unwrap();
    let n_t = required_time_nodes(&u0, &v0, sigma);
    let base = bilinear_product_norm(&u0, &v0, sigma, Sign::Plus, &grid, n_t).unwrap();
    let c = Complex64::new(-1.7, 2.3);
    let scaled = bilinear_product_norm(&u0.scale(c), &v0, sigma, Sign::Plus, &grid, n_t).unwrap();
    assert!((scaled - c.norm() * base).abs() < 1e-12 * scaled);
    let parity = bilinear_product_norm(&u0.conj(), &v0, sigma, Sign::Minus, &grid, n_t).unwrap();
    assert!((parity - base).abs() < 1e-12 * base);
}

#[test]
fn more_time_nodes_change_nothing() {
    let band = 15;
    let grid = SphereGrid::for_product(band, 7).unwrap();
    let sigma = SigmaRational::new(1, 4).unwrap();
    let u0 = random_localized(dy(8), band, 7).unwrap();
    let v0 = random_localized(dy(4), 7, 8).unwrap();
    let n_t = required_time_nodes(&u0, &v0, sigma);
    let a = bilinear_product_norm(&u0, &v0, sigma, Sign::Plus, &grid, n_t).unwrap();
    let b = bilinear_product_norm(&u0, &v0, sigma, Sign::Plus, &grid, 2 * n_t + 3).unwrap();
    assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    assert!(bilinear_product_norm(&u0, &v0, sigma, Sign::Plus, &grid, n_t - 1).is_err());
}

#[test]
fn undersized_grid_rejected() {
    let grid = SphereGrid::with_nodes(7, 8, 15).unwrap();
    let u0 = random_localized(dy(4), 7, 1).unwrap();
    assert!(bilinear_product_norm(&u0, &u0, SigmaRational::ONE, Sign::Plus, &grid, 10_000).is_err());
}

#[test]
fn zonal_square_ratio_matches_quadrature() {
    // H̃ = conj(H) with H = Y_{k,0} real: ratio = ‖Y_{k,0}²‖.
    for k in [3, 8] {
        let grid = SphereGrid::for_product(k, k).unwrap();
        let h = unit(k, k, 0);
        let r = bilinear_ratio_of(&h, &h.conj(), &grid).unwrap();
        // Independent oracle: fine Gauss–Legendre in x with the normalized closed form.
        let (x, w) = gauss_legendre(4 * k + 8);
        let q: f64 = x.iter().zip(&w).map(|(&x, &w)| w * normalized(k, 0, x).powi(4)).sum::<f64>() * 2.0 * PI;
        assert!((r - q.sqrt()).abs() < 1e-12);
        if k < 5 {
            // The monomial expansion cancels badly at higher degree.
            assert!((r - zonal_product_norm(k, k)).abs() < 1e-12);
        }
    }
}

#[test]
fn ratio_invariant_under_unimodular_factors() {
    let grid = SphereGrid::for_product(9, 9).unwrap();
    let mut r = rng::stream(1, &[]);
    let h = random_harmonic(9, 9, &mut r);
    let ht = random_harmonic(5, 9, &mut r);
    let a = bilinear_ratio_of(&h, &ht, &grid).unwrap();
    let b = bilinear_ratio_of(&h.scale(Complex64::from_polar(1.0, 0.7)), &ht.scale(Complex64::from_polar(1.0, -2.0)), &grid).unwrap();
    assert!((a - b).abs() < 1e-13);
    assert!(bilinear_ratio_of(&SpectralField::zeros(9), &ht, &grid).is_err());
    assert!(projector_bilinear_ratio(0, 2, 1, 0, &grid).is_err());
}

#[test]
fn fit_on_synthetic_cells() {
    let cells: Vec<Cell> = [2u64, 4, 8, 16]
        .iter()
        .flat_map(|&n| [n, 2 * n].map(|l| Cell { n, l, ratio: (n as f64).powf(0.25) }))
        .collect();
    let f = scaling_fit(&cells).unwrap();
    assert!((f.slope - 0.25).abs() < 1e-14 && f.residual < 1e-14);
    let flat: Vec<Cell> = [2u64, 8].iter().map(|&n| Cell { n, l: n, ratio: 3.0 }).collect();
    assert!(scaling_fit(&flat).unwrap().slope.abs() < 1e-15);
    assert!(scaling_fit(&flat[..1]).is_err());
}

#[test]
fn small_scan_is_deterministic() {
    let cfg = ScanConfig::new(vec![2, 4], vec![2, 4], 2, 9, SigmaRational::new(1, 4).unwrap());
    let a = run_scan(&cfg).unwrap();
    let b = run_scan(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.records.len(), 8);
    assert_eq!(a.fit.buckets.len(), 2);
}
