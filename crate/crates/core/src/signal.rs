//! Uniform grids and complex signals sampled on them.
//!
//! A [`SampledSignal`] stands in for a member of `L¹ ∩ L²` on the real line:
//! it is treated as identically zero outside its grid, and its norms are the
//! Riemann sums `Σ |f_j|^p · dt`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LctError, Result};

/// Two grid steps are considered equal when they differ by at most this much.
pub const STEP_MATCH_TOL: f64 = 1e-12;

/// Maximum fractional-index mismatch tolerated when aligning two grids.
const ALIGN_TOL: f64 = 1e-6;

/// A uniform grid `start + i·step`, `i = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() {
            return Err(LctError::NonFinite(format!(
                "grid start {start} / step {step}"
            )));
        }
        if step <= 0.0 {
            return Err(LctError::Grid(format!("grid step must be > 0, got {step}")));
        }
        if count < 2 {
            return Err(LctError::Grid(format!("grid needs at least 2 points, got {count}")));
        }
        Ok(Self { start, step, count })
    }

    /// `count` equispaced points covering `[start, end]` inclusive.
    pub fn linspace(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(LctError::Grid(format!("grid needs at least 2 points, got {count}")));
        }
        Self::new(start, (end - start) / (count - 1) as f64, count)
    }

    /// Grid of the given step covering `[-half_width, half_width]`, with `0` as a node.
    pub fn symmetric(half_width: f64, step: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(LctError::Grid(format!("half width must be > 0, got {half_width}")));
        }
        let k = (half_width / step).round() as usize;
        Self::new(-(k as f64) * step, step, 2 * k + 1)
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }

    /// The same grid translated by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            start: self.start + delta,
            ..*self
        }
    }
}

/// Trapezoid weight of node `i` out of `n` nodes with spacing `h`.
#[inline]
pub(crate) fn trapezoid_weight(i: usize, n: usize, h: f64) -> f64 {
    if n == 1 {
        0.0
    } else if i == 0 || i + 1 == n {
        0.5 * h
    } else {
        h
    }
}

/// A complex-valued function sampled on a uniform grid, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    t0: f64,
    dt: f64,
    samples: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(t0: f64, dt: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !t0.is_finite() || !dt.is_finite() {
            return Err(LctError::NonFinite(format!("signal grid t0 {t0} / dt {dt}")));
        }
        if dt <= 0.0 {
            return Err(LctError::Grid(format!("signal step must be > 0, got {dt}")));
        }
        if samples.is_empty() {
            return Err(LctError::InvalidInput("signal has no samples".into()));
        }
        if let Some(i) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LctError::NonFinite(format!("sample {i} of signal")));
        }
        Ok(Self { t0, dt, samples })
    }

    /// Build without validation; callers guarantee the invariants.
    pub(crate) fn from_parts(t0: f64, dt: f64, samples: Vec<Complex64>) -> Self {
        debug_assert!(dt > 0.0 && !samples.is_empty());
        Self { t0, dt, samples }
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: &Grid, f: F) -> Self {
        let samples = grid.points().map(f).collect();
        Self::from_parts(grid.start, grid.step, samples)
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(grid: &Grid, f: F) -> Self {
        Self::from_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_parts(grid.start, grid.step, vec![Complex64::new(0.0, 0.0); grid.count])
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    #[inline]
    pub fn t(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.samples.len() - 1)
    }

    pub fn grid(&self) -> Grid {
        Grid {
            start: self.t0,
            step: self.dt,
            count: self.samples.len(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.samples.iter().enumerate().map(move |(i, &z)| (self.t(i), z))
    }

    /// Linear interpolation; zero outside the grid.
    pub fn value_at(&self, t: f64) -> Complex64 {
        let x = (t - self.t0) / self.dt;
        let last = (self.samples.len() - 1) as f64;
        if x < -ALIGN_TOL || x > last + ALIGN_TOL {
            return Complex64::new(0.0, 0.0);
        }
        let x = x.clamp(0.0, last);
        let i = x.floor() as usize;
        if i + 1 >= self.samples.len() {
            return self.samples[self.samples.len() - 1];
        }
        let frac = x - i as f64;
        if frac < ALIGN_TOL {
            return self.samples[i];
        }
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }

    /// Whether `t` lies inside the grid span, up to a small fraction of a step.
    pub fn contains(&self, t: f64) -> bool {
        let x = (t - self.t0) / self.dt;
        x >= -ALIGN_TOL && x <= (self.samples.len() - 1) as f64 + ALIGN_TOL
    }

    /// Resample onto another grid by linear interpolation.
    pub fn resample(&self, grid: &Grid) -> Self {
        Self::from_fn(grid, |t| self.value_at(t))
    }

    pub fn map<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> Self {
        let samples = self.iter().map(|(t, z)| f(t, z)).collect();
        Self::from_parts(self.t0, self.dt, samples)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, z| z * c)
    }

    /// `f(t + tau)`: translating the grid, so exact for any `tau`.
    pub fn translate(&self, tau: f64) -> Self {
        Self::from_parts(self.t0 - tau, self.dt, self.samples.clone())
    }

    pub fn norm_l1(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).sum::<f64>() * self.dt
    }

    pub fn norm_l2(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dt).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus at the two grid ends.
    pub fn edge_magnitude(&self) -> f64 {
        self.samples[0].norm().max(self.samples[self.samples.len() - 1].norm())
    }

    /// Trapezoidal integral over the grid.
    pub fn integrate(&self) -> Complex64 {
        let n = self.samples.len();
        self.samples
            .iter()
            .enumerate()
            .map(|(i, z)| z * trapezoid_weight(i, n, self.dt))
            .sum()
    }

    pub fn same_step(&self, other: &Self) -> bool {
        (self.dt - other.dt).abs() <= STEP_MATCH_TOL
    }

    /// Index offset of `other`'s first node on this signal's lattice.
    pub fn lattice_offset(&self, other: &Self) -> Result<isize> {
        if !self.same_step(other) {
            return Err(LctError::Grid(format!(
                "steps differ: {} vs {}",
                self.dt, other.dt
            )));
        }
        let x = (other.t0 - self.t0) / self.dt;
        let k = x.round();
        if (x - k).abs() > ALIGN_TOL {
            return Err(LctError::Grid(format!(
                "grids are not aligned (offset {x} steps)"
            )));
        }
        Ok(k as isize)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self.same_step(other)
            && (self.t0 - other.t0).abs() <= ALIGN_TOL * self.dt
    }

    /// Pointwise combination on the union of two aligned grids, each signal
    /// extended by zero.
    pub fn zip_union<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        let off = self.lattice_offset(other)?;
        let lo = off.min(0);
        let hi = (self.len() as isize).max(off + other.len() as isize);
        let zero = Complex64::new(0.0, 0.0);
        let samples = (lo..hi)
            .map(|k| {
                let a = if k >= 0 && (k as usize) < self.len() {
                    self.samples[k as usize]
                } else {
                    zero
                };
                let j = k - off;
                let b = if j >= 0 && (j as usize) < other.len() {
                    other.samples[j as usize]
                } else {
                    zero
                };
                f(a, b)
            })
            .collect();
        Ok(Self::from_parts(self.t0 + lo as f64 * self.dt, self.dt, samples))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_union(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_union(other, |a, b| a - b)
    }

    /// `self + c·other` on the union grid.
    pub fn axpy(&self, c: Complex64, other: &Self) -> Result<Self> {
        self.zip_union(other, |a, b| a + c * b)
    }

    /// `‖self − other‖₂` on the union of two aligned grids.
    pub fn distance_l2(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm_l2())
    }

    /// Values of this signal at the nodes of an aligned grid (zero outside).
    pub fn restrict_to(&self, grid: &Grid) -> Result<Self> {
        let target = Self::from_parts(grid.start, grid.step, vec![Complex64::new(0.0, 0.0); 1]);
        let off = self.lattice_offset(&target)?;
        let samples = (0..grid.count as isize)
            .map(|j| {
                let k = off + j;
                if k >= 0 && (k as usize) < self.len() {
                    self.samples[k as usize]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(Self::from_parts(grid.start, grid.step, samples))
    }
}

/// Relative L² discrepancy `‖x − y‖ / ‖y‖`, or the absolute norm when `y` vanishes.
pub fn relative_l2(x: &SampledSignal, reference: &SampledSignal) -> Result<f64> {
    let diff = x.distance_l2(reference)?;
    let scale = reference.norm_l2();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// `sup |x − y|` over the union grid.
pub fn sup_distance(x: &SampledSignal, y: &SampledSignal) -> Result<f64> {
    Ok(x.sub(y)?.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 0.0, 4).is_err());
        assert!(Grid::new(0.0, -1.0, 4).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(Grid::new(f64::NAN, 1.0, 4).is_err());
        let g = Grid::symmetric(1.0, 0.25).unwrap();
        assert_eq!(g.count, 9);
        assert_eq!(g.point(4), 0.0);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let err = SampledSignal::new(0.0, 0.1, vec![c(1.0), c(f64::INFINITY)]).unwrap_err();
        assert!(matches!(err, LctError::NonFinite(_)));
    }

    #[test]
    fn interpolation_is_linear_and_zero_outside() {
        let s = SampledSignal::new(0.0, 1.0, vec![c(0.0), c(2.0), c(4.0)]).unwrap();
        assert_eq!(s.value_at(0.5), c(1.0));
        assert_eq!(s.value_at(2.0), c(4.0));
        assert_eq!(s.value_at(-0.5), c(0.0));
        assert_eq!(s.value_at(2.5), c(0.0));
    }

    #[test]
    fn union_arithmetic_pads_with_zero() {
        let a = SampledSignal::new(0.0, 0.5, vec![c(1.0), c(1.0)]).unwrap();
        let b = SampledSignal::new(0.5, 0.5, vec![c(1.0), c(1.0)]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.t0(), 0.0);
        assert_eq!(s.samples(), &[c(1.0), c(2.0), c(1.0)]);
        let misaligned = SampledSignal::new(0.2, 0.5, vec![c(1.0)]).unwrap();
        assert!(a.add(&misaligned).is_err());
        let other_step = SampledSignal::new(0.0, 0.25, vec![c(1.0)]).unwrap();
        assert!(a.add(&other_step).is_err());
    }

    #[test]
    fn norms_are_riemann_sums() {
        let s = SampledSignal::new(0.0, 0.5, vec![c(1.0), c(-1.0), c(2.0)]).unwrap();
        assert!((s.norm_l1() - 2.0).abs() < 1e-15);
        assert!((s.norm_l2() - 3.0f64.sqrt()).abs() < 1e-15);
        // trapezoid: 0.5 * (0.5 - 1 + 1)
        assert!((s.integrate() - c(0.25)).norm() < 1e-15);
    }

    #[test]
    fn restrict_reads_aligned_nodes() {
        let s = SampledSignal::new(-1.0, 0.5, vec![c(1.0), c(2.0), c(3.0), c(4.0), c(5.0)]).unwrap();
        let g = Grid::new(0.0, 0.5, 4).unwrap();
        let r = s.restrict_to(&g).unwrap();
        assert_eq!(r.samples(), &[c(3.0), c(4.0), c(5.0), c(0.0)]);
    }
}
