//! Delta sequences: generators, the two axioms, and their limit behaviour.
//!
//! A delta sequence `{δ_n}` consists of compactly supported signals with
//!
//! 1. `∫ exp(i a t²/2b) δ_n(t) dt = 1` for every `n`, and
//! 2. `∫_{|t|>ε} |δ_n(t)| dt → 0` for every `ε > 0`.
//!
//! Every member carries the conjugate chirp `exp(−i a t²/2b)` so that the
//! first axiom reduces to unit mass of a real profile.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conv::{a_convolve, product_scale, spectral_product};
use crate::error::{LctError, Result};
use crate::lct::{lct_transform, LctParams};
use crate::signal::{relative_l2, Grid, SampledSignal};

/// Default tolerance for analytically exact conditions.
pub const EXACT_TOL: f64 = 1e-6;
/// Default tolerance for quadrature-limited conditions.
pub const QUADRATURE_TOL: f64 = 1e-4;
/// Minimum number of grid intervals across the support of a member.
pub const MIN_SUPPORT_SAMPLES: usize = 64;

/// Relative position tolerance used to decide whether a node sits on a breakpoint.
const NODE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Chirped triangle of height `n` on `[0, 2/n]`, unit mass.
    Triangular,
    /// The piecewise example taken literally: first branch `t` rather than `n² t`.
    Literal,
    /// Normalised `exp(−1/(1−(nt)²))` bump on `[−1/n, 1/n]`; infinitely differentiable.
    SmoothBump,
    /// Negative control: the `n = 1` triangle for every index, so the support never shrinks.
    ConstantSupport,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Triangular => "triangular",
            FamilyKind::Literal => "literal",
            FamilyKind::SmoothBump => "bump",
            FamilyKind::ConstantSupport => "constant",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "triangular" | "tri" => Ok(FamilyKind::Triangular),
            "literal" | "literal_example" => Ok(FamilyKind::Literal),
            "bump" | "smooth" | "smooth_bump" => Ok(FamilyKind::SmoothBump),
            "constant" | "constant_support" => Ok(FamilyKind::ConstantSupport),
            other => Err(LctError::InvalidInput(format!("unknown delta family '{other}'"))),
        }
    }

    /// Highest derivative order the members admit; `None` means unbounded.
    pub fn max_derivative_order(&self) -> Option<u32> {
        match self {
            FamilyKind::SmoothBump => None,
            FamilyKind::Triangular | FamilyKind::ConstantSupport => Some(1),
            FamilyKind::Literal => Some(0),
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.max_derivative_order().is_none()
    }

    /// Support of the `n`-th member.
    pub fn support(&self, n: u32) -> (f64, f64) {
        let n = n as f64;
        match self {
            FamilyKind::Triangular | FamilyKind::Literal => (0.0, 2.0 / n),
            FamilyKind::SmoothBump => (-1.0 / n, 1.0 / n),
            FamilyKind::ConstantSupport => (0.0, 2.0),
        }
    }
}

fn check_index(n: u32) -> Result<()> {
    if n == 0 {
        Err(LctError::InvalidInput("delta index n must be a positive integer".into()))
    } else {
        Ok(())
    }
}

fn check_covers(grid: &Grid, lo: f64, hi: f64) -> Result<()> {
    let slack = NODE_TOL.max(1e-6 * grid.step);
    if grid.start > lo + slack || grid.end() < hi - slack {
        return Err(LctError::Grid(format!(
            "grid [{}, {}] does not cover the support [{lo}, {hi}]",
            grid.start,
            grid.end()
        )));
    }
    Ok(())
}

fn on_node(t: f64, x: f64, step: f64) -> bool {
    (t - x).abs() <= NODE_TOL.max(1e-6 * step)
}

fn anti_chirp(params: &LctParams, t: f64) -> Result<Complex64> {
    Ok(Complex64::cis(-0.5 * params.chirp_rate()? * t * t))
}

/// The literal piecewise example: `t` on `[0, 1/n]`, `n²(2/n − t)` on `[1/n, 2/n]`,
/// each times `exp(−i a t²/2b)`.
///
/// The two branches disagree at `t = 1/n`; a node placed there gets the mean
/// of both one-sided values, which keeps the trapezoidal rule exact for the
/// piecewise-linear profile.
pub fn literal_example_delta(n: u32, params: &LctParams, grid: &Grid) -> Result<SampledSignal> {
    check_index(n)?;
    params.require_b_nonzero("delta sequence")?;
    let nf = n as f64;
    let (k1, k2) = (1.0 / nf, 2.0 / nf);
    check_covers(grid, 0.0, k2)?;
    let mut out = Vec::with_capacity(grid.count);
    for t in grid.points() {
        let profile = if on_node(t, k1, grid.step) {
            0.5 * (k1 + nf)
        } else if t < -NODE_TOL || t > k2 + NODE_TOL {
            0.0
        } else if t <= k1 {
            t.max(0.0)
        } else {
            (nf * nf * (k2 - t)).max(0.0)
        };
        out.push(anti_chirp(params, t)? * profile);
    }
    Ok(SampledSignal::from_parts(grid.start, grid.step, out))
}

/// Corrected triangle: `n² t` on `[0, 1/n]`, `n²(2/n − t)` on `[1/n, 2/n]`,
/// times `exp(−i a t²/2b)`; unit chirped mass.
pub fn triangular_delta(n: u32, params: &LctParams, grid: &Grid) -> Result<SampledSignal> {
    check_index(n)?;
    params.require_b_nonzero("delta sequence")?;
    let nf = n as f64;
    let (k1, k2) = (1.0 / nf, 2.0 / nf);
    check_covers(grid, 0.0, k2)?;
    let mut out = Vec::with_capacity(grid.count);
    for t in grid.points() {
        let profile = if t <= 0.0 || t >= k2 {
            0.0
        } else if t <= k1 {
            nf * nf * t
        } else {
            nf * nf * (k2 - t)
        };
        out.push(anti_chirp(params, t)? * profile);
    }
    Ok(SampledSignal::from_parts(grid.start, grid.step, out))
}

/// Chirped bump on `[−1/n, 1/n]`, rescaled so its discrete chirped mass is exactly 1.
pub fn bump_delta(n: u32, params: &LctParams, grid: &Grid) -> Result<SampledSignal> {
    check_index(n)?;
    params.require_b_nonzero("delta sequence")?;
    let nf = n as f64;
    check_covers(grid, -1.0 / nf, 1.0 / nf)?;
    let profile = SampledSignal::from_real_fn(grid, |t| {
        let x = nf * t;
        if x.abs() < 1.0 {
            (-1.0 / (1.0 - x * x)).exp()
        } else {
            0.0
        }
    });
    let mass = profile.integrate().re;
    if !(mass > 0.0) {
        return Err(LctError::Grid(format!(
            "grid step {} is too coarse to resolve the bump of index {n}",
            grid.step
        )));
    }
    let rate = params.chirp_rate()?;
    Ok(profile.map(|t, z| z / mass * Complex64::cis(-0.5 * rate * t * t)))
}

/// An indexed delta family sampled on a fixed lattice step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaFamily {
    kind: FamilyKind,
    params: LctParams,
    step: f64,
}

impl DeltaFamily {
    pub fn new(kind: FamilyKind, params: LctParams, step: f64) -> Result<Self> {
        params.require_b_nonzero("delta family")?;
        if !(step > 0.0 && step.is_finite()) {
            return Err(LctError::Grid(format!("family step must be > 0, got {step}")));
        }
        Ok(Self { kind, params, step })
    }

    /// Family on the coarsest power-of-two step that still puts
    /// [`MIN_SUPPORT_SAMPLES`] intervals across the support of index `n_max`.
    pub fn resolved_for(kind: FamilyKind, params: LctParams, n_max: u32) -> Result<Self> {
        Self::new(kind, params, required_step(kind, n_max)?)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn params(&self) -> &LctParams {
        &self.params
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn support(&self, n: u32) -> (f64, f64) {
        self.kind.support(n)
    }

    /// Half-width of the smallest symmetric interval holding the support.
    pub fn support_bound(&self, n: u32) -> f64 {
        let (lo, hi) = self.support(n);
        lo.abs().max(hi.abs())
    }

    /// Lattice-aligned grid covering the support of member `n`.
    pub fn member_grid(&self, n: u32) -> Result<Grid> {
        check_index(n)?;
        let (lo, hi) = self.support(n);
        let i0 = (lo / self.step - NODE_TOL).floor() as i64;
        let i1 = (hi / self.step + NODE_TOL).ceil() as i64;
        Grid::new(i0 as f64 * self.step, self.step, (i1 - i0 + 1).max(2) as usize)
    }

    pub fn member(&self, n: u32) -> Result<SampledSignal> {
        let grid = self.member_grid(n)?;
        match self.kind {
            FamilyKind::Triangular => triangular_delta(n, &self.params, &grid),
            FamilyKind::Literal => literal_example_delta(n, &self.params, &grid),
            FamilyKind::SmoothBump => bump_delta(n, &self.params, &grid),
            FamilyKind::ConstantSupport => {
                let grid = self.member_grid(1)?;
                triangular_delta(1, &self.params, &grid)
            }
        }
    }

    /// Checks the unit-mass axiom on every index and that supports shrink.
    pub fn validate(&self, indices: &[u32], tol: f64) -> Result<()> {
        for &n in indices {
            let report = check_condition_i(&self.member(n)?, &self.params, tol)?;
            if !report.condition_i_passed {
                return Err(LctError::Tolerance {
                    what: format!("{} family, index {n}: chirped mass", self.kind.name()),
                    residual: (report.condition_i_value - 1.0).norm(),
                    tolerance: tol,
                });
            }
        }
        for w in indices.windows(2) {
            if self.support_bound(w[1]) >= self.support_bound(w[0]) {
                return Err(LctError::InvalidInput(format!(
                    "{} family: support does not shrink from index {} to {}",
                    self.kind.name(),
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(())
    }
}

/// Coarsest power-of-two step resolving index `n_max` with [`MIN_SUPPORT_SAMPLES`] intervals.
pub fn required_step(kind: FamilyKind, n_max: u32) -> Result<f64> {
    check_index(n_max)?;
    let (lo, hi) = kind.support(n_max);
    let target = (hi - lo) / MIN_SUPPORT_SAMPLES as f64;
    Ok(2f64.powi(target.log2().floor() as i32))
}

/// Outcome of the axiom checks for one member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub n: Option<u32>,
    /// `∫ exp(i a t²/2b) δ(t) dt`.
    pub condition_i_value: Complex64,
    pub condition_i_passed: bool,
    pub tolerance: f64,
    /// `∫_{|t|>ε} |δ(t)| dt`, when a tail window was requested.
    pub tail_mass: Option<f64>,
    pub eps: Option<f64>,
}

/// Trapezoidal chirped mass, compared against 1 at `tol`.
pub fn check_condition_i(delta: &SampledSignal, params: &LctParams, tol: f64) -> Result<ConditionReport> {
    let rate = params.chirp_rate()?;
    let value = delta
        .map(|t, z| z * Complex64::cis(0.5 * rate * t * t))
        .integrate();
    Ok(ConditionReport {
        n: None,
        condition_i_value: value,
        condition_i_passed: (value - 1.0).norm() <= tol,
        tolerance: tol,
        tail_mass: None,
        eps: None,
    })
}

/// `∫_{|t|>eps} |δ|` for the piecewise-linear interpolant of `|δ|`.
pub fn tail_mass(delta: &SampledSignal, eps: f64) -> f64 {
    let mags: Vec<f64> = delta.samples().iter().map(|z| z.norm()).collect();
    let mut total = 0.0;
    for j in 0..mags.len().saturating_sub(1) {
        let (x0, x1) = (delta.t(j), delta.t(j + 1));
        let (v0, v1) = (mags[j], mags[j + 1]);
        if v0 == 0.0 && v1 == 0.0 {
            continue;
        }
        let at = |x: f64| v0 + (v1 - v0) * (x - x0) / (x1 - x0);
        let piece = |lo: f64, hi: f64| {
            if hi > lo {
                0.5 * (hi - lo) * (at(lo) + at(hi))
            } else {
                0.0
            }
        };
        total += piece(x0, x1.min(-eps)) + piece(x0.max(eps), x1);
    }
    total
}

/// Tail masses of a family over an index list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailSummary {
    pub eps: f64,
    pub reports: Vec<ConditionReport>,
    pub non_increasing: bool,
    pub passed: bool,
}

/// Passes when the tails are non-increasing in `n` and the last one is at most
/// [`EXACT_TOL`].
pub fn check_condition_ii(family: &DeltaFamily, eps: f64, n_list: &[u32]) -> Result<TailSummary> {
    if !(eps > 0.0) {
        return Err(LctError::InvalidInput(format!("eps must be > 0, got {eps}")));
    }
    let mut reports = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let member = family.member(n)?;
        let mut report = check_condition_i(&member, family.params(), EXACT_TOL)?;
        report.n = Some(n);
        report.tail_mass = Some(tail_mass(&member, eps));
        report.eps = Some(eps);
        reports.push(report);
    }
    let tails: Vec<f64> = reports.iter().filter_map(|r| r.tail_mass).collect();
    let non_increasing = tails.windows(2).all(|w| w[1] <= w[0]);
    let passed = non_increasing && tails.last().is_some_and(|&t| t <= EXACT_TOL);
    Ok(TailSummary { eps, reports, non_increasing, passed })
}

/// Nonzero extent `[first, last]` of a signal, if any sample is nonzero.
pub fn numerical_support(s: &SampledSignal) -> Option<(f64, f64)> {
    let first = s.samples().iter().position(|z| z.norm() > 0.0)?;
    let last = s.samples().iter().rposition(|z| z.norm() > 0.0)?;
    Some((s.t(first), s.t(last)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    pub condition: ConditionReport,
    pub support: Option<(f64, f64)>,
}

/// Checks that `φ_n *^A ψ_n` is again delta-like: unit chirped mass at `tol`
/// and its tail beyond `eps`.
pub fn delta_convolve_closure(
    phi: &DeltaFamily,
    psi: &DeltaFamily,
    params: &LctParams,
    n: u32,
    eps: f64,
    tol: f64,
) -> Result<ClosureReport> {
    let product = a_convolve(&phi.member(n)?, &psi.member(n)?, params)?;
    let mut condition = check_condition_i(&product, params, tol)?;
    condition.n = Some(n);
    condition.tail_mass = Some(tail_mass(&product, eps));
    condition.eps = Some(eps);
    Ok(ClosureReport { condition, support: numerical_support(&product) })
}

/// `‖f *^A δ_n − f‖₂` on the grid of `f`, for each index.
pub fn approx_identity_check(
    f: &SampledSignal,
    family: &DeltaFamily,
    params: &LctParams,
    n_list: &[u32],
) -> Result<Vec<f64>> {
    let grid = f.grid();
    n_list
        .iter()
        .map(|&n| {
            let smoothed = a_convolve(f, &family.member(n)?, params)?.restrict_to(&grid)?;
            smoothed.distance_l2(f)
        })
        .collect()
}

/// `sqrt(2πib) exp(−i d u²/2b) L_A(δ)(u)`, which tends to 1 for a delta sequence.
pub fn normalized_spectrum(delta: &SampledSignal, params: &LctParams, ugrid: &Grid) -> Result<SampledSignal> {
    let scale = product_scale(params)?;
    let chirp = -0.5 * params.d() / params.b();
    Ok(lct_transform(delta, params, ugrid)?.map(|u, z| z * scale * Complex64::cis(chirp * u * u)))
}

/// Sup-deviation from 1 of the normalised spectrum of each member on `compact`.
pub fn normalized_lct_of_delta(
    family: &DeltaFamily,
    params: &LctParams,
    compact: &Grid,
    n_list: &[u32],
) -> Result<Vec<f64>> {
    n_list
        .iter()
        .map(|&n| {
            let spec = normalized_spectrum(&family.member(n)?, params, compact)?;
            Ok(spec
                .samples()
                .iter()
                .map(|z| (z - 1.0).norm())
                .fold(0.0, f64::max))
        })
        .collect()
}

/// Relative L² gap between `L_A(φ_n) ⊙ L_A(ψ_n)` and `L_A(φ_n *^A ψ_n)`.
pub fn spectral_closure(
    phi: &DeltaFamily,
    psi: &DeltaFamily,
    params: &LctParams,
    n: u32,
    ugrid: &Grid,
) -> Result<f64> {
    let (p, q) = (phi.member(n)?, psi.member(n)?);
    let lhs = spectral_product(
        &lct_transform(&p, params, ugrid)?,
        &lct_transform(&q, params, ugrid)?,
        params,
    )?;
    let rhs = lct_transform(&a_convolve(&p, &q, params)?, params, ugrid)?;
    relative_l2(&lhs, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lct::make_params;

    fn p2132() -> LctParams {
        make_params(2.0, 1.0, 3.0, 2.0).unwrap()
    }

    fn grid_for(n: u32, step: f64) -> Grid {
        Grid::new(0.0, step, (2.0 / n as f64 / step).round() as usize + 1).unwrap()
    }

    #[test]
    fn literal_example_values() {
        let p = p2132();
        let g = grid_for(4, 1.0 / 256.0);
        let d = literal_example_delta(4, &p, &g).unwrap();
        assert_eq!(d.samples()[0].norm(), 0.0);
        assert!(d.samples()[d.len() - 1].norm() < 1e-15);
        assert!(literal_example_delta(0, &p, &g).is_err());
        assert!(matches!(
            literal_example_delta(4, &LctParams::identity(), &g),
            Err(LctError::Branch(_))
        ));
    }

    #[test]
    fn literal_example_mass_oracle() {
        // ∫₀^{1/n} t dt + n² ∫_{1/n}^{2/n} (2/n − t) dt = 1/(2n²) + 1/2
        let p = p2132();
        for n in [1u32, 2, 8, 16] {
            let g = grid_for(n, 1.0 / 1024.0);
            let r = check_condition_i(&literal_example_delta(n, &p, &g).unwrap(), &p, EXACT_TOL).unwrap();
            let oracle = 0.5 + 0.5 / (n as f64 * n as f64);
            assert!((r.condition_i_value - oracle).norm() < 1e-6, "n={n}");
            assert_eq!(r.condition_i_passed, n == 1);
        }
        let g = grid_for(2, 1.0 / 512.0);
        let r = check_condition_i(&literal_example_delta(2, &p, &g).unwrap(), &p, EXACT_TOL).unwrap();
        assert!((r.condition_i_value.re - 0.625).abs() < 1e-6);
        assert!(!r.condition_i_passed);
    }

    #[test]
    fn triangle_examples() {
        let p = p2132();
        let g = grid_for(8, 1.0 / 512.0);
        let d = triangular_delta(8, &p, &g).unwrap();
        let r = check_condition_i(&d, &p, 1e-8).unwrap();
        assert!(r.condition_i_passed, "{:?}", r.condition_i_value);
        // peak modulus n at t = 1/n
        let peak = d.value_at(1.0 / 8.0).norm();
        assert!((peak - 8.0).abs() < 1e-12);
        let fam = DeltaFamily::new(FamilyKind::Triangular, p, 1.0 / 512.0).unwrap();
        assert_eq!(fam.support_bound(8), 0.25);
        assert!(fam.support_bound(16) < fam.support_bound(8));
    }

    #[test]
    fn zero_signal_fails_condition_i() {
        let g = Grid::linspace(0.0, 1.0, 11).unwrap();
        let r = check_condition_i(&SampledSignal::zeros(&g), &p2132(), EXACT_TOL).unwrap();
        assert_eq!(r.condition_i_value, Complex64::new(0.0, 0.0));
        assert!(!r.condition_i_passed);
    }

    #[test]
    fn bump_has_unit_mass_and_symmetric_support() {
        let p = make_params(1.0, -2.0, 0.0, 1.0).unwrap();
        let fam = DeltaFamily::resolved_for(FamilyKind::SmoothBump, p, 32).unwrap();
        for n in [4, 8, 32] {
            let r = check_condition_i(&fam.member(n).unwrap(), &p, 1e-12).unwrap();
            assert!(r.condition_i_passed);
        }
        assert_eq!(fam.support(4), (-0.25, 0.25));
        assert!(FamilyKind::SmoothBump.is_smooth());
        assert!(!FamilyKind::Triangular.is_smooth());
    }

    #[test]
    fn tails_examples() {
        let p = p2132();
        let fam = DeltaFamily::new(FamilyKind::Triangular, p, 1.0 / 2048.0).unwrap();
        let s = check_condition_ii(&fam, 0.5, &[4]).unwrap();
        assert_eq!(s.reports[0].tail_mass, Some(0.0));
        let s = check_condition_ii(&fam, 0.1, &[2, 4, 8, 32]).unwrap();
        let tails: Vec<f64> = s.reports.iter().map(|r| r.tail_mass.unwrap()).collect();
        assert!(tails.windows(2).take(2).all(|w| w[1] < w[0]), "{tails:?}");
        assert_eq!(*tails.last().unwrap(), 0.0);
        assert!(s.passed);
        // ∫_{0.1}^{1} tri_2 = 1 − ∫_0^{0.1} 4t dt = 0.98
        assert!((tails[0] - 0.98).abs() < 1e-9);

        let constant = DeltaFamily::new(FamilyKind::ConstantSupport, p, 1.0 / 256.0).unwrap();
        let s = check_condition_ii(&constant, 0.1, &[2, 4, 8, 32]).unwrap();
        assert!(!s.passed);
        assert!(check_condition_ii(&fam, 0.0, &[2]).is_err());
    }

    #[test]
    fn validation_flags_bad_families() {
        let p = p2132();
        let good = DeltaFamily::resolved_for(FamilyKind::Triangular, p, 32).unwrap();
        good.validate(&[4, 8, 16, 32], EXACT_TOL).unwrap();
        let literal = DeltaFamily::resolved_for(FamilyKind::Literal, p, 32).unwrap();
        assert!(matches!(
            literal.validate(&[4, 8], EXACT_TOL),
            Err(LctError::Tolerance { .. })
        ));
        let constant = DeltaFamily::resolved_for(FamilyKind::ConstantSupport, p, 32).unwrap();
        assert!(constant.validate(&[4, 8], EXACT_TOL).is_err());
    }

    #[test]
    fn required_step_puts_64_intervals_on_support() {
        assert_eq!(required_step(FamilyKind::Triangular, 64).unwrap(), 1.0 / 2048.0);
        assert_eq!(required_step(FamilyKind::SmoothBump, 32).unwrap(), 1.0 / 1024.0);
        assert!(required_step(FamilyKind::Triangular, 0).is_err());
    }

    #[test]
    fn closure_of_triangles() {
        let p = p2132();
        let fam = DeltaFamily::resolved_for(FamilyKind::Triangular, p, 16).unwrap();
        for n in [4u32, 8, 16] {
            let r = delta_convolve_closure(&fam, &fam, &p, n, 0.25, QUADRATURE_TOL).unwrap();
            assert!(r.condition.condition_i_passed, "n={n}: {:?}", r.condition.condition_i_value);
            let (lo, hi) = r.support.unwrap();
            assert!(lo >= -1e-12 && hi <= 4.0 / n as f64 + 1e-12);
        }
        let fam32 = DeltaFamily::resolved_for(FamilyKind::Triangular, p, 32).unwrap();
        let r = delta_convolve_closure(&fam32, &fam32, &p, 32, 0.25, QUADRATURE_TOL).unwrap();
        assert_eq!(r.condition.tail_mass, Some(0.0));
    }

    #[test]
    fn approximate_identity_errors_decrease() {
        let p = p2132();
        let fam = DeltaFamily::resolved_for(FamilyKind::Triangular, p, 64).unwrap();
        let grid = Grid::symmetric(8.0, fam.step()).unwrap();
        let f = SampledSignal::from_real_fn(&grid, |t| (-0.5 * t * t).exp());
        let errs = approx_identity_check(&f, &fam, &p, &[4, 16, 64]).unwrap();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        let zero = SampledSignal::zeros(&grid);
        let errs = approx_identity_check(&zero, &fam, &p, &[4, 16]).unwrap();
        assert!(errs.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn normalized_spectrum_matches_closed_form() {
        // ∫ n² tri(t) e^{−iωt} dt = e^{−iω/n} (sin(ω/2n)/(ω/2n))², ω = u/b
        let p = p2132();
        let fam = DeltaFamily::resolved_for(FamilyKind::Triangular, p, 16).unwrap();
        let u = Grid::linspace(-2.0, 2.0, 41).unwrap();
        for n in [4u32, 16] {
            let spec = normalized_spectrum(&fam.member(n).unwrap(), &p, &u).unwrap();
            for (u, z) in spec.iter() {
                let w = u / p.b();
                let x = w / (2.0 * n as f64);
                let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
                let oracle = Complex64::cis(-w / n as f64) * sinc * sinc;
                // kinks on nodes: trapezoid error ~ h²ω²/12
                assert!((z - oracle).norm() < 1e-5, "n={n} u={u} {z} {oracle}");
            }
        }
        let devs = normalized_lct_of_delta(&fam, &p, &u, &[4, 8, 16]).unwrap();
        assert!(devs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn unnormalized_value_at_origin() {
        let p = make_params(1.0, 2.0, 0.0, 1.0).unwrap();
        let fam = DeltaFamily::resolved_for(FamilyKind::Triangular, p, 16).unwrap();
        let u = Grid::linspace(-0.5, 0.5, 3).unwrap();
        let l = lct_transform(&fam.member(16).unwrap(), &p, &u).unwrap();
        let expected = 1.0 / (2.0 * std::f64::consts::PI * 2.0).sqrt();
        assert!((l.samples()[1].norm() - expected).abs() < 1e-9);
    }
}
