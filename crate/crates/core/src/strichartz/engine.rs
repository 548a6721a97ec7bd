//! Space-time L² norm of e^{±itΔ/σ}u₀ · e^{itΔ}v₀ over (0,1) × 𝕊².
//!
//! For a chunk of time nodes and each order m, the Legendre sums
//! F_{±m}(θ_j, t) = Σ_k P̄_k^m(cos θ_j) c_{k,±m} e^{i a_k t} are one real matrix
//! product of the Legendre block (n_θ × n_k) with the phase-weighted
//! coefficient matrix laid out as [Re | Im] × [+m | −m] × time. The longitude
//! sums are then a batched inverse FFT, and |U·V|² is integrated exactly by the
//! product grid.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::dynamics::Sign;
use crate::error::{Error, Result};
use crate::sht::quadrature::gauss_legendre_on;
use crate::sht::{SpectralField, SphereGrid};
use crate::sigma::SigmaRational;
use crate::spectrum::SpectrumModel;

/// Time nodes processed together.
const CHUNK: usize = 8;

/// Northern rings whose Legendre sums are held at once.
const RING_BLOCK: usize = 16;

/// Degrees carrying nonzero coefficients: (lowest, highest).
fn active_degrees(f: &SpectralField) -> Option<(usize, usize)> {
    let e = f.degree_energies();
    let lo = e.iter().position(|&x| x > 0.0)?;
    let hi = e.iter().rposition(|&x| x > 0.0)?;
    Some((lo, hi))
}

/// Time frequencies a_k of the first factor (e^{±itΔ/σ}: a_k = ∓μ_k/σ) and
/// b_ℓ of the second (e^{itΔ}: b_ℓ = −μ_ℓ).
fn frequencies(band: usize, sigma: SigmaRational, sign: Sign, first: bool) -> Vec<f64> {
    let model = SpectrumModel::S2;
    (0..=band)
        .map(|k| {
            let mu = model.eigenvalue(k);
            if first {
                -sign.value() * mu / sigma.value()
            } else {
                -mu
            }
        })
        .collect()
}

/// Upper bound W on the frequencies of t ↦ ‖U(t)V(t)‖², i.e. the spread of
/// the a_k over the active degrees of u₀ plus the spread of the b_ℓ over those
/// of v₀.
pub fn time_frequency_bound(u0: &SpectralField, v0: &SpectralField, sigma: SigmaRational) -> f64 {
    let model = SpectrumModel::S2;
    let spread = |f: &SpectralField, scale: f64| match active_degrees(f) {
        Some((lo, hi)) => (model.eigenvalue(hi) - model.eigenvalue(lo)) * scale,
        None => 0.0,
    };
    spread(u0, 1.0 / sigma.value()) + spread(v0, 1.0)
}

/// Gauss–Legendre node count that integrates the time dependence to round-off:
/// ⌈W/π⌉ + 16.
pub fn required_time_nodes(u0: &SpectralField, v0: &SpectralField, sigma: SigmaRational) -> usize {
    (time_frequency_bound(u0, v0, sigma) / std::f64::consts::PI).ceil() as usize + 16
}

/// Per-field synthesis state for one chunk of time nodes.
///
/// Uses the equatorial parity P̄_k^m(−x) = (−1)^{k+m} P̄_k^m(x): the Legendre
/// sums are computed separately over even and odd k+m on the northern rings
/// only, and recombined as E ± O. Sums are produced for a block of rings at a
/// time so that they stay cache-resident until the longitude transforms.
struct Factor<'a> {
    freq: Vec<f64>,
    field: &'a SpectralField,
    lo: usize,
    hi: usize,
    /// Northern rings, including the equator when n_θ is odd.
    half: usize,
    cols: usize,
    /// Phase-weighted coefficients per (m, parity): nk × cols row-major,
    /// starting at `rhs_at[2m + parity]` (`None` when no degree contributes).
    rhs: Vec<f64>,
    rhs_at: Vec<Option<(usize, usize, usize)>>,
    /// [ring in block][m][parity][column] Legendre sums.
    sums: Vec<f64>,
}

impl<'a> Factor<'a> {
    fn new(field: &'a SpectralField, freq: Vec<f64>, lo: usize, hi: usize, grid: &SphereGrid) -> Self {
        let half = grid.n_theta().div_ceil(2);
        let cols = 4 * CHUNK;
        let mut rhs_at = Vec::with_capacity(2 * (hi + 1));
        let mut len = 0;
        for m in 0..=hi {
            let k0 = lo.max(m);
            for parity in 0..2 {
                // Degrees k ≥ k0 with (k + m) % 2 == parity.
                let first = k0 + ((k0 + m + parity) % 2);
                if first > hi {
                    rhs_at.push(None);
                } else {
                    let nk = (hi - first) / 2 + 1;
                    rhs_at.push(Some((len, first, nk)));
                    len += nk * cols;
                }
            }
        }
        Self {
            freq,
            field,
            lo,
            hi,
            half,
            cols,
            rhs: vec![0.0; len],
            rhs_at,
            sums: vec![0.0; RING_BLOCK * (hi + 1) * 2 * cols],
        }
    }

    /// Distance between consecutive rings in `sums`.
    fn stride_ring(&self) -> usize {
        (self.hi + 1) * 2 * self.cols
    }

    /// Right-hand sides for the times `ts` (≤ CHUNK of them). Column layout:
    /// for each time, [Re(+m), Im(+m), Re(−m), Im(−m)].
    fn prepare(&mut self, ts: &[f64]) {
        let tc = ts.len();
        let cols = self.cols;
        // Centered phases e^{i(a_k − ā)t} for active degrees.
        let center = 0.5 * (self.freq[self.lo] + self.freq[self.hi]);
        let nk_all = self.hi - self.lo + 1;
        let mut phase = vec![Complex64::new(0.0, 0.0); nk_all * tc];
        for (i, k) in (self.lo..=self.hi).enumerate() {
            for (s, &t) in ts.iter().enumerate() {
                phase[i * tc + s] = Complex64::from_polar(1.0, (self.freq[k] - center) * t);
            }
        }
        for m in 0..=self.hi {
            for parity in 0..2 {
                let Some((at, first, nk)) = self.rhs_at[2 * m + parity] else {
                    continue;
                };
                let rhs = &mut self.rhs[at..at + nk * cols];
                for (r, k) in (first..=self.hi).step_by(2).enumerate() {
                    let row = &mut rhs[r * cols..(r + 1) * cols];
                    let cp = self.field.get(k, m as i64);
                    let cm = if m == 0 { Complex64::new(0.0, 0.0) } else { self.field.get(k, -(m as i64)) };
                    let ph = &phase[(k - self.lo) * tc..(k - self.lo + 1) * tc];
                    for s in 0..tc {
                        let a = cp * ph[s];
                        let b = cm * ph[s];
                        row[4 * s..4 * s + 4].copy_from_slice(&[a.re, a.im, b.re, b.im]);
                    }
                    row[4 * tc..].fill(0.0);
                }
            }
        }
    }

    /// Even/odd Legendre sums on the northern rings `rings` (≤ RING_BLOCK).
    fn block_sums(&mut self, grid: &SphereGrid, rings: std::ops::Range<usize>) {
        let nt = grid.n_theta();
        let cols = self.cols;
        let stride_ring = self.stride_ring();
        let nr = rings.len();
        for m in 0..=self.hi {
            let block = grid.legendre_block(m);
            for parity in 0..2 {
                let offset = (2 * m + parity) * cols;
                let Some((at, first, nk)) = self.rhs_at[2 * m + parity] else {
                    for ring in 0..nr {
                        self.sums[ring * stride_ring + offset..][..cols].fill(0.0);
                    }
                    continue;
                };
                let a = &block[(first - m) * nt + rings.start..];
                let rhs = &self.rhs[at..at + nk * cols];
                let out = &mut self.sums[offset..];
                debug_assert!((nr - 1) * stride_ring + cols <= out.len());
                // SAFETY: A is nr × nk with strides (1, 2·n_θ) inside `block`
                // (rows stay below n_θ, every second degree from `first`); B is
                // nk × cols row-major; C is nr × cols with row stride
                // `stride_ring` inside `sums`.
                unsafe {
                    matrixmultiply::dgemm(
                        nr,
                        nk,
                        cols,
                        1.0,
                        a.as_ptr(),
                        1,
                        2 * nt as isize,
                        rhs.as_ptr(),
                        cols as isize,
                        1,
                        0.0,
                        out.as_mut_ptr(),
                        stride_ring as isize,
                        1,
                    );
                }
            }
        }
    }

    /// Grid values at time slot `s` on block ring `ring` and its mirror,
    /// into the longitude rows `rn` / `rs` (n_φ each).
    fn fill_rows(&self, ring: usize, s: usize, rn: &mut [Complex64], rs: &mut [Complex64]) {
        let zero = Complex64::new(0.0, 0.0);
        let np = rn.len();
        let hi = self.hi;
        let cols = self.cols;
        // Orders above the band occupy no slot.
        rn[hi + 1..np - hi].fill(zero);
        rs[hi + 1..np - hi].fill(zero);
        let sums = &self.sums[ring * self.stride_ring()..][..self.stride_ring()];
        for (m, eo) in sums.chunks_exact(2 * cols).enumerate() {
            let e = &eo[4 * s..4 * s + 4];
            let o = &eo[cols + 4 * s..cols + 4 * s + 4];
            rn[m] = Complex64::new(e[0] + o[0], e[1] + o[1]);
            rs[m] = Complex64::new(e[0] - o[0], e[1] - o[1]);
            if m > 0 {
                rn[np - m] = Complex64::new(e[2] + o[2], e[3] + o[3]);
                rs[np - m] = Complex64::new(e[2] - o[2], e[3] - o[3]);
            }
        }
    }
}

/// Gauss–Legendre rule on (0, 1) with `n` nodes, cached: building it costs
/// O(n²) and every trial of a scan cell reuses the same node count.
fn time_rule(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(gauss_legendre_on(n, 0.0, 1.0));
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(n, Arc::clone(&rule));
    rule
}

/// Σ |a_l|²|b_l|², with independent lanes so the loop vectorizes.
fn product_sum(a: &[Complex64], b: &[Complex64]) -> f64 {
    const LANES: usize = 8;
    let mut acc = [0.0; LANES];
    let (ac, bc) = (a.chunks_exact(LANES), b.chunks_exact(LANES));
    let tail: f64 = ac.remainder().iter().zip(bc.remainder()).map(|(x, y)| x.norm_sqr() * y.norm_sqr()).sum();
    for (x, y) in ac.zip(bc) {
        for i in 0..LANES {
            acc[i] += x[i].norm_sqr() * y[i].norm_sqr();
        }
    }
    acc.iter().sum::<f64>() + tail
}

/// ‖e^{±itΔ/σ}u₀ · e^{itΔ}v₀‖_{L²((0,1)×𝕊²)} with an `n_t`-node Gauss–Legendre
/// rule in time.
///
/// Requires a grid that integrates degree 2(K_u + K_v) exactly with tables up
/// to max(K_u, K_v) (see [`SphereGrid::for_product`]) and
/// `n_t ≥ required_time_nodes`.
pub fn bilinear_product_norm(
    u0: &SpectralField,
    v0: &SpectralField,
    sigma: SigmaRational,
    sign: Sign,
    grid: &SphereGrid,
    n_t: usize,
) -> Result<f64> {
    grid.check_band(u0.band())?;
    grid.check_band(v0.band())?;
    let (Some((ulo, uhi)), Some((vlo, vhi))) = (active_degrees(u0), active_degrees(v0)) else {
        return Ok(0.0);
    };
    if grid.exact_degree() < 2 * (uhi + vhi) {
        return Err(Error::Config(format!(
            "grid integrates degree {} exactly, the product norm needs {}",
            grid.exact_degree(),
            2 * (uhi + vhi)
        )));
    }
    let need = required_time_nodes(u0, v0, sigma);
    if n_t < need {
        return Err(Error::Config(format!("{n_t} time nodes given, at least {need} required")));
    }

    let (nt, np) = grid.shape();
    let rule = time_rule(n_t);
    let (times, tw) = (&rule.0, &rule.1);
    let mut fu = Factor::new(u0, frequencies(u0.band(), sigma, sign, true), ulo, uhi, grid);
    let mut fv = Factor::new(v0, frequencies(v0.band(), sigma, sign, false), vlo, vhi, grid);
    let node_w: Vec<f64> = (0..nt).map(|j| grid.node_weight(j)).collect();

    let zero = Complex64::new(0.0, 0.0);
    // Rows: north U, south U, north V, south V.
    let mut rows = vec![zero; 4 * np];
    let mut scratch = vec![zero; grid.fft_inverse.get_inplace_scratch_len()];
    let half = fu.half;
    let mut total = 0.0;
    for (ts, ws) in times.chunks(CHUNK).zip(tw.chunks(CHUNK)) {
        fu.prepare(ts);
        fv.prepare(ts);
        let mut chunk = 0.0;
        for r0 in (0..half).step_by(RING_BLOCK) {
            let r1 = (r0 + RING_BLOCK).min(half);
            fu.block_sums(grid, r0..r1);
            fv.block_sums(grid, r0..r1);
            for north in r0..r1 {
                let south = nt - 1 - north;
                let (mut qn, mut qs) = (0.0, 0.0);
                for (s, &w) in ws.iter().enumerate() {
                    let (u_rows, v_rows) = rows.split_at_mut(2 * np);
                    let (un, us) = u_rows.split_at_mut(np);
                    let (vn, vs) = v_rows.split_at_mut(np);
                    fu.fill_rows(north - r0, s, un, us);
                    fv.fill_rows(north - r0, s, vn, vs);
                    if south != north {
                        grid.fft_inverse.process_with_scratch(&mut rows, &mut scratch);
                        qs += w * product_sum(&rows[np..2 * np], &rows[3 * np..]);
                    } else {
                        grid.fft_inverse.process_with_scratch(&mut rows[..np], &mut scratch);
                        grid.fft_inverse.process_with_scratch(&mut rows[2 * np..3 * np], &mut scratch);
                    }
                    qn += w * product_sum(&rows[..np], &rows[2 * np..3 * np]);
                }
                chunk += node_w[north] * qn;
                if south != north {
                    chunk += node_w[south] * qs;
                }
            }
        }
        total += chunk;
    }
    Ok(total.sqrt())
}
