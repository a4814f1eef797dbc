//! Finite truncations of Boehmians.
//!
//! A Boehmian is a class of quotients `[f_n / φ_n]` with `f_m *^A φ_n = f_n *^A φ_m`.
//! Here a quotient is kept to a fixed depth `N`: `N` numerators, `N`
//! denominators, the delta-family indices the denominators came from, and the
//! measured compatibility residual `max_{m<n} ‖f_m *^A φ_n − f_n *^A φ_m‖₂`.
//! Equalities between Boehmians become residuals compared to tolerances, and
//! limits become trends over the truncation.

use num_complex::Complex64;
use serde::Serialize;

use crate::conv::{a_convolve, spectral_product};
use crate::delta::{DeltaFamily, EXACT_TOL};
use crate::error::{LctError, Result};
use crate::lct::{lct_transform, LctParams};
use crate::signal::{relative_l2, Grid, SampledSignal};

/// Default bound on the quotient compatibility residual.
pub const CONSTRUCTION_TOL: f64 = 1e-4;
/// Default bound on the spectral cross-compatibility residual (relative).
pub const SPECTRAL_TOL: f64 = 1e-3;
/// Default truncation depth.
pub const DEFAULT_DEPTH: usize = 4;
/// A residual sequence counts as convergent when it strictly decreases and its
/// last entry is at most this fraction of its first.
pub const CONVERGENCE_RATIO: f64 = 0.25;

/// Family indices used at depths `1..=depth`: `4, 8, 16, …`.
///
/// A subsequence of a delta sequence is again a delta sequence; doubling the
/// index per level makes the truncation reach sharp members at small depth.
pub fn default_indices(depth: usize) -> Vec<u32> {
    (0..depth).map(|k| 4u32 << k).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoehmianRep {
    numerators: Vec<SampledSignal>,
    denominators: Vec<SampledSignal>,
    indices: Vec<u32>,
    params: LctParams,
    compat_residual: f64,
    tolerance: f64,
    /// Highest derivative order the denominators admit; `None` when unbounded.
    smoothness: Option<u32>,
    label: String,
}

fn compat_residual(nums: &[SampledSignal], dens: &[SampledSignal], params: &LctParams) -> Result<f64> {
    let mut worst = 0.0f64;
    for m in 0..nums.len() {
        for n in m + 1..nums.len() {
            let lhs = a_convolve(&nums[m], &dens[n], params)?;
            let rhs = a_convolve(&nums[n], &dens[m], params)?;
            worst = worst.max(lhs.distance_l2(&rhs)?);
        }
    }
    Ok(worst)
}

fn min_order(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl BoehmianRep {
    /// Builds a quotient, measuring compatibility and rejecting it above `tolerance`.
    pub fn new(
        numerators: Vec<SampledSignal>,
        denominators: Vec<SampledSignal>,
        indices: Vec<u32>,
        params: LctParams,
        tolerance: f64,
    ) -> Result<Self> {
        let rep = Self::assemble(numerators, denominators, indices, params, tolerance, None, "custom".into())?;
        rep.checked("quotient compatibility")
    }

    fn assemble(
        numerators: Vec<SampledSignal>,
        denominators: Vec<SampledSignal>,
        indices: Vec<u32>,
        params: LctParams,
        tolerance: f64,
        smoothness: Option<u32>,
        label: String,
    ) -> Result<Self> {
        let depth = numerators.len();
        if depth < 2 {
            return Err(LctError::Shape(format!("depth must be at least 2, got {depth}")));
        }
        if denominators.len() != depth || indices.len() != depth {
            return Err(LctError::Shape(format!(
                "{} numerators, {} denominators and {} indices",
                depth,
                denominators.len(),
                indices.len()
            )));
        }
        let compat = compat_residual(&numerators, &denominators, &params)?;
        Ok(Self {
            numerators,
            denominators,
            indices,
            params,
            compat_residual: compat,
            tolerance,
            smoothness,
            label,
        })
    }

    fn checked(self, what: &str) -> Result<Self> {
        if self.compat_residual > self.tolerance {
            return Err(LctError::Tolerance {
                what: what.to_string(),
                residual: self.compat_residual,
                tolerance: self.tolerance,
            });
        }
        Ok(self)
    }

    pub fn depth(&self) -> usize {
        self.numerators.len()
    }
    pub fn numerators(&self) -> &[SampledSignal] {
        &self.numerators
    }
    pub fn denominators(&self) -> &[SampledSignal] {
        &self.denominators
    }
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }
    pub fn params(&self) -> &LctParams {
        &self.params
    }
    pub fn compat_residual(&self) -> f64 {
        self.compat_residual
    }
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same tolerance, for chaining.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    fn same_denominators(&self, other: &Self) -> bool {
        self.indices == other.indices && self.denominators == other.denominators
    }

    fn require_compatible(&self, other: &Self) -> Result<()> {
        if self.depth() != other.depth() {
            return Err(LctError::Shape(format!(
                "depths differ: {} vs {}",
                self.depth(),
                other.depth()
            )));
        }
        if self.params != other.params {
            return Err(LctError::Shape(format!(
                "parameters differ: {} vs {}",
                self.params, other.params
            )));
        }
        Ok(())
    }
}

/// `[(f *^A δ_n) / δ_n]` over the given family indices.
pub fn embed_with_indices(f: &SampledSignal, family: &DeltaFamily, indices: &[u32]) -> Result<BoehmianRep> {
    family.validate(indices, EXACT_TOL)?;
    let params = *family.params();
    let dens = indices.iter().map(|&n| family.member(n)).collect::<Result<Vec<_>>>()?;
    let nums = dens
        .iter()
        .map(|d| a_convolve(f, d, &params))
        .collect::<Result<Vec<_>>>()?;
    BoehmianRep::assemble(
        nums,
        dens,
        indices.to_vec(),
        params,
        CONSTRUCTION_TOL,
        family.kind().max_derivative_order(),
        format!("{} family", family.kind().name()),
    )?
    .checked("embedding compatibility")
}

/// Embeds `f` at depth `depth` with [`default_indices`].
pub fn embed(f: &SampledSignal, family: &DeltaFamily, depth: usize) -> Result<BoehmianRep> {
    embed_with_indices(f, family, &default_indices(depth))
}

/// The Dirac Boehmian `[δ_n / δ_n]`.
pub fn dirac(family: &DeltaFamily, indices: &[u32]) -> Result<BoehmianRep> {
    family.validate(indices, EXACT_TOL)?;
    let dens = indices.iter().map(|&n| family.member(n)).collect::<Result<Vec<_>>>()?;
    BoehmianRep::assemble(
        dens.clone(),
        dens,
        indices.to_vec(),
        *family.params(),
        CONSTRUCTION_TOL,
        family.kind().max_derivative_order(),
        "dirac".into(),
    )?
    .checked("dirac compatibility")
}

/// `max_n ‖f_n *^A ψ_n − g_n *^A φ_n‖₂`; zero exactly for equivalent quotients.
pub fn equivalent(b1: &BoehmianRep, b2: &BoehmianRep) -> Result<f64> {
    b1.require_compatible(b2)?;
    let p = &b1.params;
    let mut worst = 0.0f64;
    for n in 0..b1.depth() {
        let lhs = a_convolve(&b1.numerators[n], &b2.denominators[n], p)?;
        let rhs = a_convolve(&b2.numerators[n], &b1.denominators[n], p)?;
        worst = worst.max(lhs.distance_l2(&rhs)?);
    }
    Ok(worst)
}

/// `λ [f_n / φ_n] = [λ f_n / φ_n]`.
pub fn scalar_mul(lambda: Complex64, b: &BoehmianRep) -> BoehmianRep {
    BoehmianRep {
        numerators: b.numerators.iter().map(|f| f.scale(lambda)).collect(),
        compat_residual: b.compat_residual * lambda.norm(),
        ..b.clone()
    }
}

/// `[f_n/φ_n] + [g_n/ψ_n] = [(f_n *^A ψ_n + g_n *^A φ_n) / (φ_n *^A ψ_n)]`.
///
/// When both quotients share their denominators the equivalent representative
/// `[(f_n + g_n) / φ_n]` is returned instead, which keeps sums exactly linear.
pub fn add(b1: &BoehmianRep, b2: &BoehmianRep) -> Result<BoehmianRep> {
    b1.require_compatible(b2)?;
    let p = b1.params;
    let tol = b1.tolerance.max(b2.tolerance);
    if b1.same_denominators(b2) {
        let nums = b1
            .numerators
            .iter()
            .zip(&b2.numerators)
            .map(|(f, g)| f.add(g))
            .collect::<Result<Vec<_>>>()?;
        return BoehmianRep::assemble(
            nums,
            b1.denominators.clone(),
            b1.indices.clone(),
            p,
            tol,
            b1.smoothness,
            b1.label.clone(),
        )?
        .checked("sum compatibility");
    }
    let mut nums = Vec::with_capacity(b1.depth());
    let mut dens = Vec::with_capacity(b1.depth());
    for n in 0..b1.depth() {
        let (f, phi) = (&b1.numerators[n], &b1.denominators[n]);
        let (g, psi) = (&b2.numerators[n], &b2.denominators[n]);
        nums.push(a_convolve(f, psi, &p)?.add(&a_convolve(g, phi, &p)?)?);
        dens.push(a_convolve(phi, psi, &p)?);
    }
    BoehmianRep::assemble(
        nums,
        dens,
        b1.indices.clone(),
        p,
        tol,
        min_order(b1.smoothness, b2.smoothness),
        format!("({}) * ({})", b1.label, b2.label),
    )?
    .checked("sum compatibility")
}

/// `B1 − B2`.
pub fn sub(b1: &BoehmianRep, b2: &BoehmianRep) -> Result<BoehmianRep> {
    add(b1, &scalar_mul(Complex64::new(-1.0, 0.0), b2))
}

fn convolve_unchecked(b1: &BoehmianRep, b2: &BoehmianRep) -> Result<BoehmianRep> {
    b1.require_compatible(b2)?;
    let p = b1.params;
    let mut nums = Vec::with_capacity(b1.depth());
    let mut dens = Vec::with_capacity(b1.depth());
    for n in 0..b1.depth() {
        nums.push(a_convolve(&b1.numerators[n], &b2.numerators[n], &p)?);
        dens.push(a_convolve(&b1.denominators[n], &b2.denominators[n], &p)?);
    }
    BoehmianRep::assemble(
        nums,
        dens,
        b1.indices.clone(),
        p,
        b1.tolerance.max(b2.tolerance),
        min_order(b1.smoothness, b2.smoothness),
        format!("({}) * ({})", b1.label, b2.label),
    )
}

/// `[f_n/φ_n] *^A [g_n/ψ_n] = [(f_n *^A g_n) / (φ_n *^A ψ_n)]`.
pub fn boehm_convolve(b1: &BoehmianRep, b2: &BoehmianRep) -> Result<BoehmianRep> {
    convolve_unchecked(b1, b2)?.checked("product compatibility")
}

/// `k`-fold central difference with zero extension; the grid grows by `k` nodes per side.
pub fn central_difference(s: &SampledSignal, k: u32) -> SampledSignal {
    let mut cur = s.clone();
    let h = s.dt();
    for _ in 0..k {
        let src = cur.samples();
        let n = src.len();
        let at = |i: isize| {
            if i >= 0 && (i as usize) < n {
                src[i as usize]
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let out: Vec<Complex64> = (-1..=n as isize)
            .map(|j| (at(j + 1) - at(j - 1)) / (2.0 * h))
            .collect();
        cur = SampledSignal::from_parts(cur.t0() - h, h, out);
    }
    cur
}

/// `F^{(k)} = F *^A δ^{(k)}` with `δ^{(k)} = [δ_n^{(k)} / δ_n]`.
///
/// The derivative quotient is only compatible up to terms proportional to
/// `a/b` (differentiation does not commute with the chirp weight), so its
/// residual is recorded and reported rather than enforced.
pub fn boehm_derivative(b: &BoehmianRep, k: u32, family: &DeltaFamily) -> Result<BoehmianRep> {
    if k == 0 {
        return Ok(b.clone());
    }
    if let Some(order) = family.kind().max_derivative_order() {
        if k > order {
            return Err(LctError::Smoothness(format!(
                "{} family admits derivatives up to order {order}, requested {k}",
                family.kind().name()
            )));
        }
    }
    if family.params() != b.params() {
        return Err(LctError::Shape("family and Boehmian parameters differ".into()));
    }
    let dens = b
        .indices
        .iter()
        .map(|&n| family.member(n))
        .collect::<Result<Vec<_>>>()?;
    let nums = dens.iter().map(|d| central_difference(d, k)).collect();
    let derivative = BoehmianRep {
        numerators: nums,
        denominators: dens,
        indices: b.indices.clone(),
        params: b.params,
        compat_residual: f64::NAN,
        tolerance: b.tolerance,
        smoothness: family.kind().max_derivative_order(),
        label: format!("d^{k} {} family", family.kind().name()),
    };
    let out = convolve_unchecked(b, &derivative)?;
    if out.compat_residual > out.tolerance {
        log::warn!(
            "derivative quotient compatibility {:.3e} exceeds {:.1e} (a/b = {})",
            out.compat_residual,
            out.tolerance,
            b.params.a() / b.params.b()
        );
    }
    Ok(out)
}

/// `[e^{ikt} f_n / e^{ikt} φ_n]`; modulation is a homomorphism of `*^A`.
pub fn modulate(b: &BoehmianRep, k: f64) -> Result<BoehmianRep> {
    let m = |s: &SampledSignal| s.map(|t, z| z * Complex64::cis(k * t));
    Ok(BoehmianRep {
        numerators: b.numerators.iter().map(m).collect(),
        denominators: b.denominators.iter().map(m).collect(),
        label: format!("e^(i{k}t) {}", b.label),
        ..b.clone()
    })
}

/// `F(t + τ)` as `[f_n(· + τ) / e^{−i(a/b)τt} φ_n]`.
///
/// In chirped coordinates a translation picks up the modulation
/// `e^{−i(a/b)τt}`; applying that modulation to the denominators keeps the
/// quotient compatible and makes the embedding of `f` map to the embedding of
/// `f(· + τ)`.
pub fn translate(b: &BoehmianRep, tau: f64) -> Result<BoehmianRep> {
    let rate = b.params.chirp_rate()?;
    Ok(BoehmianRep {
        numerators: b.numerators.iter().map(|s| s.translate(tau)).collect(),
        denominators: b
            .denominators
            .iter()
            .map(|s| s.map(|t, z| z * Complex64::cis(-rate * tau * t)))
            .collect(),
        label: format!("{}(t + {tau})", b.label),
        ..b.clone()
    })
}

/// Residual trend of a convergence diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceDiag {
    pub residuals: Vec<f64>,
    pub strictly_decreasing: bool,
    pub converging: bool,
}

impl ConvergenceDiag {
    pub fn from_residuals(residuals: Vec<f64>) -> Self {
        let all_zero = residuals.iter().all(|&r| r == 0.0);
        let strictly_decreasing = all_zero || residuals.windows(2).all(|w| w[1] < w[0]);
        let converging = all_zero
            || (strictly_decreasing
                && match (residuals.first(), residuals.last()) {
                    (Some(&first), Some(&last)) => last <= CONVERGENCE_RATIO * first,
                    _ => false,
                });
        Self { residuals, strictly_decreasing, converging }
    }
}

/// Δ-convergence: `‖(F_n − F) *^A φ_n‖₂` for `n = 1..len`, where `φ_n` are the
/// denominators of `F_n − F`; by compatibility that is the `n`-th numerator.
pub fn delta_convergence_diag(seq: &[BoehmianRep], limit: &BoehmianRep) -> Result<ConvergenceDiag> {
    if seq.len() > limit.depth() {
        return Err(LctError::Shape(format!(
            "sequence of length {} exceeds truncation depth {}",
            seq.len(),
            limit.depth()
        )));
    }
    let residuals = seq
        .iter()
        .enumerate()
        .map(|(n, fb)| Ok(sub(fb, limit)?.numerators[n].norm_l2()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceDiag::from_residuals(residuals))
}

/// δ-convergence: residuals `‖(F_n − F) *^A φ_k‖₂` indexed `[n][k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceMatrix {
    pub k_list: Vec<usize>,
    pub residuals: Vec<Vec<f64>>,
    /// Per fixed `k`, whether the column decreases in `n`.
    pub columns: Vec<ConvergenceDiag>,
    pub converging: bool,
}

pub fn small_delta_convergence_diag(
    seq: &[BoehmianRep],
    limit: &BoehmianRep,
    k_list: &[usize],
) -> Result<ConvergenceMatrix> {
    if let Some(&k) = k_list.iter().find(|&&k| k >= limit.depth()) {
        return Err(LctError::Shape(format!(
            "mollifier level {k} outside truncation depth {}",
            limit.depth()
        )));
    }
    let diffs = seq.iter().map(|fb| sub(fb, limit)).collect::<Result<Vec<_>>>()?;
    let residuals: Vec<Vec<f64>> = diffs
        .iter()
        .map(|d| k_list.iter().map(|&k| d.numerators[k].norm_l2()).collect())
        .collect();
    let columns: Vec<ConvergenceDiag> = (0..k_list.len())
        .map(|c| ConvergenceDiag::from_residuals(residuals.iter().map(|row| row[c]).collect()))
        .collect();
    let converging = columns.iter().all(|c| c.converging);
    Ok(ConvergenceMatrix { k_list: k_list.to_vec(), residuals, columns, converging })
}

/// Image of a quotient under the transform: `L_A(f_n) / L_A(φ_n)` on a common `u`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBoehmianRep {
    pub numerators: Vec<SampledSignal>,
    pub denominators: Vec<SampledSignal>,
    pub params: LctParams,
    /// `max_{m<n}` relative gap between `L_A(f_n) ⊙ L_A(φ_m)` and `L_A(f_m) ⊙ L_A(φ_n)`.
    pub cross_residual: f64,
}

impl SpectralBoehmianRep {
    pub fn depth(&self) -> usize {
        self.numerators.len()
    }
}

/// Entrywise transform of a quotient, checking cross-compatibility under `⊙`.
pub fn boehm_lct(b: &BoehmianRep, ugrid: &Grid, tol: f64) -> Result<SpectralBoehmianRep> {
    let p = b.params;
    let nums = b
        .numerators
        .iter()
        .map(|f| lct_transform(f, &p, ugrid))
        .collect::<Result<Vec<_>>>()?;
    let dens = b
        .denominators
        .iter()
        .map(|d| lct_transform(d, &p, ugrid))
        .collect::<Result<Vec<_>>>()?;
    let mut cross = 0.0f64;
    for m in 0..nums.len() {
        for n in m + 1..nums.len() {
            let lhs = spectral_product(&nums[n], &dens[m], &p)?;
            let rhs = spectral_product(&nums[m], &dens[n], &p)?;
            cross = cross.max(relative_l2(&lhs, &rhs)?);
        }
    }
    if cross > tol {
        return Err(LctError::Tolerance {
            what: "spectral cross-compatibility".into(),
            residual: cross,
            tolerance: tol,
        });
    }
    Ok(SpectralBoehmianRep { numerators: nums, denominators: dens, params: p, cross_residual: cross })
}

/// `max_n` relative gap between `F_n ⊙ Ψ_n` and `G_n ⊙ Φ_n`.
pub fn spectral_equivalent(s1: &SpectralBoehmianRep, s2: &SpectralBoehmianRep) -> Result<f64> {
    if s1.depth() != s2.depth() || s1.params != s2.params {
        return Err(LctError::Shape("spectral quotients differ in depth or parameters".into()));
    }
    let mut worst = 0.0f64;
    for n in 0..s1.depth() {
        let lhs = spectral_product(&s1.numerators[n], &s2.denominators[n], &s1.params)?;
        let rhs = spectral_product(&s2.numerators[n], &s1.denominators[n], &s1.params)?;
        worst = worst.max(relative_l2(&lhs, &rhs)?);
    }
    Ok(worst)
}

/// Transforms two quotients and measures how far their images are from
/// `⊙`-equivalence; equivalent inputs must give equivalent images.
pub fn check_lct_well_defined(b1: &BoehmianRep, b2: &BoehmianRep, ugrid: &Grid, tol: f64) -> Result<f64> {
    spectral_equivalent(&boehm_lct(b1, ugrid, tol)?, &boehm_lct(b2, ugrid, tol)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    /// `L_A(f_N)` at the deepest level.
    pub limit: SampledSignal,
    /// `sup_u |L_A(f_{n+1}) − L_A(f_n)|` for `n = 1..N−1`.
    pub cauchy: Vec<f64>,
    pub decreasing: bool,
}

/// `lim L_A(f_n)` approximated by the deepest truncation, with its Cauchy trend.
pub fn boehm_lct_limit(b: &BoehmianRep, ugrid: &Grid) -> Result<LimitReport> {
    let p = b.params;
    let images = b
        .numerators
        .iter()
        .map(|f| lct_transform(f, &p, ugrid))
        .collect::<Result<Vec<_>>>()?;
    let cauchy: Vec<f64> = images
        .windows(2)
        .map(|w| w[1].sub(&w[0]).map(|d| d.max_abs()))
        .collect::<Result<_>>()?;
    let decreasing = cauchy.iter().all(|&c| c == 0.0) || cauchy.windows(2).all(|w| w[1] < w[0]);
    if !decreasing {
        log::warn!("Cauchy diagnostic of the transform limit is not decreasing: {cauchy:?}");
    }
    let limit = images.into_iter().last().expect("depth >= 2");
    Ok(LimitReport { limit, cauchy, decreasing })
}
