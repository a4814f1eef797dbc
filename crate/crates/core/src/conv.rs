//! Chirp-weighted convolution and the spectral product it maps to.
//!
//! `(f *^A g)(t) = ∫ f(τ) g(t−τ) W(t, τ) dτ` with `W(t, τ) = exp(i τ(τ−t) a/b)`.
//! Writing `f̃(t) = exp(i a t²/2b) f(t)`, the weighted convolution is the
//! ordinary convolution of the chirped factors, de-chirped afterwards:
//! `(f *^A g)~ = f̃ ⋆ g̃`. The implementation uses that factorisation, which
//! is the same quadrature sum as evaluating `W` at every node pair.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{LctError, Result};
use crate::lct::LctParams;
use crate::signal::SampledSignal;

/// The weight `W(t, τ) = exp(i τ(τ−t) a/b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightKernel {
    a_over_b: f64,
}

impl WeightKernel {
    pub fn new(params: &LctParams) -> Result<Self> {
        Ok(Self { a_over_b: params.chirp_rate()? })
    }

    pub fn a_over_b(&self) -> f64 {
        self.a_over_b
    }

    #[inline]
    pub fn eval(&self, t: f64, tau: f64) -> Complex64 {
        Complex64::cis(tau * (tau - t) * self.a_over_b)
    }
}

pub fn weight(t: f64, tau: f64, params: &LctParams) -> Result<Complex64> {
    Ok(WeightKernel::new(params)?.eval(t, tau))
}

/// Principal `sqrt(2πib)`, the scale in the product theorem.
pub fn product_scale(params: &LctParams) -> Result<Complex64> {
    params.require_b_nonzero("product scale")?;
    Ok(Complex64::new(0.0, 2.0 * PI * params.b()).sqrt())
}

fn chirped(f: &SampledSignal, rate: f64) -> (Vec<f64>, Vec<f64>) {
    let mut re = Vec::with_capacity(f.len());
    let mut im = Vec::with_capacity(f.len());
    for (t, z) in f.iter() {
        let w = z * Complex64::cis(0.5 * rate * t * t);
        re.push(w.re);
        im.push(w.im);
    }
    (re, im)
}

/// Complex dot product `Σ x_j y_j` on split storage, four lanes at a time.
#[inline]
fn dot_split(xr: &[f64], xi: &[f64], yr: &[f64], yi: &[f64]) -> Complex64 {
    let n = xr.len();
    let (xr, xi, yr, yi) = (&xr[..n], &xi[..n], &yr[..n], &yi[..n]);
    let mut re = [0.0f64; 4];
    let mut im = [0.0f64; 4];
    let chunks = n / 4;
    for c in 0..chunks {
        let base = 4 * c;
        for l in 0..4 {
            let (a, b, p, q) = (xr[base + l], xi[base + l], yr[base + l], yi[base + l]);
            re[l] += a * p - b * q;
            im[l] += a * q + b * p;
        }
    }
    for j in 4 * chunks..n {
        re[0] += xr[j] * yr[j] - xi[j] * yi[j];
        im[0] += xr[j] * yi[j] + xi[j] * yr[j];
    }
    Complex64::new(re[0] + re[1] + re[2] + re[3], im[0] + im[1] + im[2] + im[3])
}

fn nonzero_span(f: &SampledSignal) -> Option<(usize, usize)> {
    let nz = |z: &Complex64| z.re != 0.0 || z.im != 0.0;
    Some((f.samples().iter().position(nz)?, f.samples().iter().rposition(nz)?))
}

/// Trapezoidal quadrature of the weighted convolution.
///
/// The output grid starts at `f.t0 + g.t0` with the shared step and
/// `f.len() + g.len() − 1` nodes, so every `t − τ` falls on a node of `g`.
/// At each output point the rule runs over the overlap of the two supports.
pub fn a_convolve(f: &SampledSignal, g: &SampledSignal, params: &LctParams) -> Result<SampledSignal> {
    let rate = params.chirp_rate()?;
    if !f.same_step(g) {
        return Err(LctError::Grid(format!(
            "convolution needs matching steps, got {} and {}",
            f.dt(),
            g.dt()
        )));
    }
    let h = f.dt();
    let (nf, ng) = (f.len(), g.len());
    let (fr, fi) = chirped(f, rate);
    let (mut gr, mut gi) = chirped(g, rate);
    gr.reverse();
    gi.reverse();
    let t0 = f.t0() + g.t0();
    let count = nf + ng - 1;
    let (Some((fa, fb)), Some((ga, gb))) = (nonzero_span(f), nonzero_span(g)) else {
        return Ok(SampledSignal::from_parts(t0, h, vec![Complex64::new(0.0, 0.0); count]));
    };
    let samples: Vec<Complex64> = (0..count)
        .into_par_iter()
        .map(|k| {
            let jlo = k.saturating_sub(ng - 1);
            let jhi = k.min(nf - 1);
            if jhi == jlo {
                return Complex64::new(0.0, 0.0);
            }
            // Only the part of the overlap where both factors are nonzero contributes.
            let dlo = jlo.max(fa).max(k.saturating_sub(gb));
            let dhi = jhi.min(fb).min(k.saturating_sub(ga));
            let mut acc = Complex64::new(0.0, 0.0);
            if dlo <= dhi && k >= ga {
                // reversed g: index of g̃_{k−j} is ng−1−k+j
                let glo = ng - 1 + dlo - k;
                let len = dhi - dlo + 1;
                acc = dot_split(
                    &fr[dlo..dlo + len],
                    &fi[dlo..dlo + len],
                    &gr[glo..glo + len],
                    &gi[glo..glo + len],
                );
            }
            let end = |j: usize| {
                let m = ng - 1 + j - k;
                Complex64::new(fr[j], fi[j]) * Complex64::new(gr[m], gi[m])
            };
            acc -= 0.5 * (end(jlo) + end(jhi));
            let t = t0 + k as f64 * h;
            acc * Complex64::cis(-0.5 * rate * t * t) * h
        })
        .collect();
    Ok(SampledSignal::from_parts(t0, h, samples))
}

fn require_same_grid(x: &SampledSignal, y: &SampledSignal) -> Result<()> {
    if x.same_grid(y) {
        Ok(())
    } else {
        Err(LctError::Grid(format!(
            "spectra must share a grid: ({}, {}, {}) vs ({}, {}, {})",
            x.t0(),
            x.dt(),
            x.len(),
            y.t0(),
            y.dt(),
            y.len()
        )))
    }
}

/// `sqrt(2πib) · exp(−i d u²/2b) · F(u) G(u)`.
pub fn convolution_theorem_rhs(
    big_f: &SampledSignal,
    big_g: &SampledSignal,
    params: &LctParams,
) -> Result<SampledSignal> {
    require_same_grid(big_f, big_g)?;
    let scale = product_scale(params)?;
    let chirp = -0.5 * params.d() / params.b();
    let samples = big_f
        .iter()
        .zip(big_g.samples())
        .map(|((u, x), y)| scale * Complex64::cis(chirp * u * u) * x * y)
        .collect();
    Ok(SampledSignal::from_parts(big_f.t0(), big_f.dt(), samples))
}

/// The product `⊙` on transformed signals, under which the transform maps
/// `*^A` to multiplication. It carries the same normalisation as the product
/// theorem rather than being a bare pointwise product.
pub fn spectral_product(
    big_f: &SampledSignal,
    big_g: &SampledSignal,
    params: &LctParams,
) -> Result<SampledSignal> {
    convolution_theorem_rhs(big_f, big_g, params)
}

/// The unit of `⊙`: `exp(i d u²/2b) / sqrt(2πib)`, the limit of transformed delta sequences.
pub fn spectral_unit(ugrid: &crate::signal::Grid, params: &LctParams) -> Result<SampledSignal> {
    let inv = product_scale(params)?.inv();
    let chirp = 0.5 * params.d() / params.b();
    Ok(SampledSignal::from_fn(ugrid, |u| inv * Complex64::cis(chirp * u * u)))
}
