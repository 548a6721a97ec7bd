//! Fully normalized associated Legendre functions.
//!
//! P̄_k^m is scaled so that 2π ∫_{-1}^{1} P̄_k^m(x)² dx = 1, i.e. P̄_k^m(cos θ)e^{imφ}
//! has unit L²(𝕊²) norm. Values come from the three-term recurrence in k at
//! fixed m, seeded by the closed-form sectoral term P̄_m^m.

use std::f64::consts::PI;

/// Number of (m, k) pairs with 0 ≤ m ≤ k ≤ band.
pub fn triangle_len(band: usize) -> usize {
    (band + 1) * (band + 2) / 2
}

/// Offset of the (m, m) entry in an m-major triangular layout.
pub fn triangle_offset(band: usize, m: usize) -> usize {
    m * (band + 1) - m * m.saturating_sub(1) / 2
}

/// P̄_k^m(x) for all 0 ≤ m ≤ k ≤ band at a single point, written into `out`
/// in m-major triangular order (see [`triangle_offset`]).
pub fn normalized_table(band: usize, x: f64, out: &mut [f64]) {
    assert_eq!(out.len(), triangle_len(band));
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=band {
        if m > 0 {
            let mf = m as f64;
            pmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
        }
        let base = triangle_offset(band, m);
        out[base] = pmm;
        if m == band {
            break;
        }
        let mf = m as f64;
        let mut p_prev = pmm;
        let mut p = (2.0 * mf + 3.0).sqrt() * x * pmm;
        out[base + 1] = p;
        for k in (m + 2)..=band {
            let kf = k as f64;
            let a = ((4.0 * kf * kf - 1.0) / (kf * kf - mf * mf)).sqrt();
            let b = (((kf - 1.0).powi(2) - mf * mf) / (4.0 * (kf - 1.0).powi(2) - 1.0)).sqrt();
            let next = a * (x * p - b * p_prev);
            p_prev = p;
            p = next;
            out[base + (k - m)] = p;
        }
    }
}

/// Single value P̄_k^m(x); convenient for tests and one-off evaluation.
pub fn normalized(k: usize, m: usize, x: f64) -> f64 {
    assert!(m <= k);
    let mut buf = vec![0.0; triangle_len(k)];
    normalized_table(k, x, &mut buf);
    buf[triangle_offset(k, m) + (k - m)]
}
