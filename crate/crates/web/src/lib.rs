//! Browser bindings: render a random band-limited field, tabulate a resonance
//! count, and measure a bilinear harmonic ratio.
//!
//! The computations live in plain functions returning library errors so they
//! can be tested natively; the `#[wasm_bindgen]` wrappers only convert errors.

use wasm_bindgen::prelude::*;

use shg_core::dynamics::{linear_propagate, GroupSpec};
use shg_core::resonance::counting_table;
use shg_core::strichartz::projector_bilinear_ratio;
use shg_core::{rng, Dyadic, SigmaRational, SpectralField, SpectrumModel, SphereGrid};

/// Largest band limit the page may request.
pub const MAX_BAND: usize = 96;

/// Real part of a field sampled on the colatitude × longitude grid, row-major
/// (north pole first).
#[wasm_bindgen]
pub struct Heatmap {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

#[wasm_bindgen]
impl Heatmap {
    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.width
    }

    #[wasm_bindgen(getter)]
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> Vec<f64> {
        self.data.clone()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Random field with coefficients g/(1+k)^decay, propagated by e^{it(Δ−1)}.
pub fn field(band: usize, seed: u64, decay: f64, t: f64) -> shg_core::Result<Heatmap> {
    if band == 0 || band > MAX_BAND {
        return Err(shg_core::Error::Config(format!("band limit must be in 1..={MAX_BAND}")));
    }
    let mut r = rng::stream(seed, &[]);
    let f = SpectralField::from_fn(band, |i| rng::complex_gaussian(&mut r) / (1.0 + i.k as f64).powf(decay));
    let f = linear_propagate(&f, GroupSpec::V, t, &SpectrumModel::S2);
    let grid = SphereGrid::new(band)?;
    let values = grid.synthesize(&f)?;
    Ok(Heatmap {
        width: grid.n_phi(),
        height: grid.n_theta(),
        data: values.values().iter().map(|z| z.re).collect(),
    })
}

/// `m,count` lines (with header) of ♯Λ^{NL}(m) over the admissible m, followed
/// by a `sup,<m*>,<count>` line.
pub fn resonance_csv(n: u64, l: u64, beta: u64, theta: u64) -> shg_core::Result<String> {
    let (n, l) = (Dyadic::new(n)?, Dyadic::new(l)?);
    if n.get() > 256 || l.get() > 256 {
        return Err(shg_core::Error::Config("N and L are capped at 256 in the browser".into()));
    }
    let sigma = SigmaRational::new(beta, theta)?;
    let t = counting_table(n, l, sigma, &SpectrumModel::S2);
    let mut out = String::from("m,count\n");
    for m in t.m_range() {
        let c = t.count_at(m);
        if c > 0 {
            out.push_str(&format!("{m},{c}\n"));
        }
    }
    out.push_str(&format!("sup,{},{}\n", t.argmax, t.sup));
    Ok(out)
}

/// max over trials of ‖H_k H̃_ℓ‖ / (‖H_k‖‖H̃_ℓ‖) for random degree-k and
/// degree-ℓ harmonics.
pub fn bilinear(k: usize, l: usize, trials: usize, seed: u64) -> shg_core::Result<f64> {
    if k > MAX_BAND || l > MAX_BAND {
        return Err(shg_core::Error::Config(format!("degrees are capped at {MAX_BAND}")));
    }
    let grid = SphereGrid::for_product(k, l)?;
    projector_bilinear_ratio(k, l, trials, seed, &grid)
}

fn js(e: shg_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn render_field(band: usize, seed: u64, decay: f64, t: f64) -> Result<Heatmap, JsError> {
    field(band, seed, decay, t).map_err(js)
}

#[wasm_bindgen]
pub fn resonance_table(n: u64, l: u64, beta: u64, theta: u64) -> Result<String, JsError> {
    resonance_csv(n, l, beta, theta).map_err(js)
}

#[wasm_bindgen]
pub fn bilinear_ratio(k: usize, l: usize, trials: usize, seed: u64) -> Result<f64, JsError> {
    bilinear(k, l, trials, seed).map_err(js)
}
