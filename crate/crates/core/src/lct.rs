//! Parameter algebra and the quadrature linear canonical transform.
//!
//! For `b ≠ 0` the transform is
//!
//! ```text
//! F(u) = sqrt(1/(2πib)) ∫ exp(i/2 [(a/b)t² − (2/b)ut + (d/b)u²]) f(t) dt
//! ```
//!
//! evaluated by the trapezoidal rule on the input grid. For `b = 0` it is the
//! chirped dilation `F(u) = sqrt(d) exp(i c d u²/2) f(d u)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LctError, Result};
use crate::signal::{trapezoid_weight, Grid, SampledSignal};

/// Admitted slack on `ad − bc = 1`.
pub const DET_TOL: f64 = 1e-12;

/// Boundary magnitude above which truncation of a signal to its grid is reported.
pub const EDGE_WARN: f64 = 1e-10;

/// Entries smaller than this are snapped to zero by the angle constructors,
/// so that `frft(π/2)` is exactly the Fourier matrix.
const SNAP: f64 = 1e-15;

/// Real unimodular parameter matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct LctParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<[f64; 4]> for LctParams {
    type Error = LctError;

    fn try_from(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl From<LctParams> for [f64; 4] {
    fn from(p: LctParams) -> Self {
        [p.a, p.b, p.c, p.d]
    }
}

impl LctParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(LctError::NonFinite(format!("parameters ({a}, {b}, {c}, {d})")));
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > DET_TOL {
            return Err(LctError::Determinant { det });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn fourier() -> Self {
        Self { a: 0.0, b: 1.0, c: -1.0, d: 0.0 }
    }

    /// Fractional Fourier transform of angle `theta`: `(cos θ, sin θ, −sin θ, cos θ)`.
    pub fn frft(theta: f64) -> Result<Self> {
        let snap = |x: f64| if x.abs() < SNAP { 0.0 } else { x };
        let (s, c) = theta.sin_cos();
        Self::new(snap(c), snap(s), snap(-s), snap(c))
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Selects the dilation branch of the transform.
    pub fn is_b_zero(&self) -> bool {
        self.b == 0.0
    }

    /// `(d, −b, −c, a)`; the determinant is preserved exactly.
    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Principal `sqrt(1/(2πib))`.
    pub fn kernel_prefactor(&self) -> Result<Complex64> {
        self.require_b_nonzero("kernel prefactor")?;
        Ok(Complex64::new(0.0, 2.0 * PI * self.b).inv().sqrt())
    }

    /// `a/b`, the chirp rate shared by the kernel and the convolution weight.
    pub fn chirp_rate(&self) -> Result<f64> {
        self.require_b_nonzero("chirp rate")?;
        Ok(self.a / self.b)
    }

    pub(crate) fn require_b_nonzero(&self, what: &str) -> Result<()> {
        if self.is_b_zero() {
            Err(LctError::Branch(format!("{what} is undefined for b = 0")))
        } else {
            Ok(())
        }
    }
}

impl std::fmt::Display for LctParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// Named members of the parameter family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialKind {
    Fourier,
    Frft(f64),
    Identity,
}

pub fn make_params(a: f64, b: f64, c: f64, d: f64) -> Result<LctParams> {
    LctParams::new(a, b, c, d)
}

pub fn invert_params(params: &LctParams) -> LctParams {
    params.inverse()
}

pub fn special_params(kind: SpecialKind) -> Result<LctParams> {
    match kind {
        SpecialKind::Fourier => Ok(LctParams::fourier()),
        SpecialKind::Identity => Ok(LctParams::identity()),
        SpecialKind::Frft(theta) => LctParams::frft(theta),
    }
}

/// `cis(phase0 + j·dphase)` for `j = 0..n`, reseeded exactly every block so the
/// rounding error of the multiplicative recurrence stays at a few ulps.
pub(crate) fn fill_phasors(out: &mut [Complex64], phase0: f64, dphase: f64) {
    const BLOCK: usize = 64;
    let step = Complex64::cis(dphase);
    for (b, chunk) in out.chunks_mut(BLOCK).enumerate() {
        let mut w = Complex64::cis(phase0 + (b * BLOCK) as f64 * dphase);
        for z in chunk {
            *z = w;
            w *= step;
        }
    }
}

fn warn_if_truncated(f: &SampledSignal, what: &str) {
    let edge = f.edge_magnitude();
    if edge > EDGE_WARN {
        log::warn!(
            "{what}: signal magnitude {edge:.3e} at grid boundary exceeds {EDGE_WARN:e}; truncation error likely"
        );
    }
}

/// Quadrature LCT of `f` on `ugrid`.
pub fn lct_transform(f: &SampledSignal, params: &LctParams, ugrid: &Grid) -> Result<SampledSignal> {
    if params.is_b_zero() {
        return dilation_branch(f, params, ugrid);
    }
    warn_if_truncated(f, "lct_transform");
    let (a, b, d) = (params.a, params.b, params.d);
    let prefactor = params.kernel_prefactor()?;
    let n = f.len();
    let h = f.dt();
    // chirp-premultiplied, trapezoid-weighted input
    let weighted: Vec<Complex64> = f
        .iter()
        .enumerate()
        .map(|(j, (t, z))| z * Complex64::cis(0.5 * a / b * t * t) * trapezoid_weight(j, n, h))
        .collect();
    let t0 = f.t0();
    let samples: Vec<Complex64> = (0..ugrid.count)
        .into_par_iter()
        .map_init(
            || vec![Complex64::new(0.0, 0.0); n],
            |phasors, k| {
                let u = ugrid.point(k);
                fill_phasors(phasors, -u * t0 / b, -u * h / b);
                let acc: Complex64 = weighted.iter().zip(phasors.iter()).map(|(x, w)| x * w).sum();
                prefactor * Complex64::cis(0.5 * d / b * u * u) * acc
            },
        )
        .collect();
    Ok(SampledSignal::from_parts(ugrid.start, ugrid.step, samples))
}

fn dilation_branch(f: &SampledSignal, params: &LctParams, ugrid: &Grid) -> Result<SampledSignal> {
    let (c, d) = (params.c, params.d);
    if d <= 0.0 {
        return Err(LctError::Branch(format!(
            "b = 0 requires d > 0 for the real square root, got d = {d}"
        )));
    }
    let root = d.sqrt();
    let mut samples = Vec::with_capacity(ugrid.count);
    for u in ugrid.points() {
        let x = d * u;
        if !f.contains(x) {
            return Err(LctError::Domain(format!(
                "dilated point d·u = {x} lies outside the signal grid [{}, {}]",
                f.t0(),
                f.t_end()
            )));
        }
        samples.push(root * Complex64::cis(0.5 * c * d * u * u) * f.value_at(x));
    }
    Ok(SampledSignal::from_parts(ugrid.start, ugrid.step, samples))
}

/// Transform with the inverse parameters `(d, −b, −c, a)`.
pub fn lct_inverse(spectrum: &SampledSignal, params: &LctParams, tgrid: &Grid) -> Result<SampledSignal> {
    lct_transform(spectrum, &params.inverse(), tgrid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::relative_l2;

    fn gaussian(grid: &Grid) -> SampledSignal {
        SampledSignal::from_real_fn(grid, |t| (-0.5 * t * t).exp())
    }

    #[test]
    fn make_params_examples() {
        let f = make_params(0.0, 1.0, -1.0, 0.0).unwrap();
        assert!(!f.is_b_zero());
        let id = make_params(1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(id.is_b_zero());
        assert!(matches!(
            make_params(1.0, 1.0, 1.0, 1.0),
            Err(LctError::Determinant { det }) if det == 0.0
        ));
        assert!(matches!(
            make_params(f64::NAN, 1.0, 1.0, 1.0),
            Err(LctError::NonFinite(_))
        ));
        assert!(matches!(
            make_params(1.0, f64::INFINITY, 0.0, 1.0),
            Err(LctError::NonFinite(_))
        ));
    }

    #[test]
    fn invert_params_examples() {
        let f = invert_params(&LctParams::fourier());
        assert_eq!(f.as_array(), [0.0, -1.0, 1.0, 0.0]);
        assert_eq!(invert_params(&LctParams::identity()), LctParams::identity());
        let p = make_params(2.0, 1.0, 3.0, 2.0).unwrap();
        let q = invert_params(&p);
        assert_eq!(q.as_array(), [2.0, -1.0, -3.0, 2.0]);
        assert_eq!(q.a() * q.d() - q.b() * q.c(), 1.0);
        assert_eq!(invert_params(&q), p);
    }

    #[test]
    fn special_params_examples() {
        assert_eq!(special_params(SpecialKind::Fourier).unwrap().as_array(), [0.0, 1.0, -1.0, 0.0]);
        assert_eq!(special_params(SpecialKind::Frft(0.0)).unwrap(), LctParams::identity());
        assert_eq!(special_params(SpecialKind::Identity).unwrap(), LctParams::identity());
        assert_eq!(
            special_params(SpecialKind::Frft(PI / 2.0)).unwrap(),
            LctParams::fourier()
        );
        let q = special_params(SpecialKind::Frft(PI / 4.0)).unwrap();
        let h = 0.5f64.sqrt();
        for (x, y) in q.as_array().iter().zip([h, h, -h, h]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn prefactor_is_principal_branch() {
        // b > 0: arg(1/(2πib)) = −π/2, so the root has arg −π/4.
        let k = LctParams::fourier().kernel_prefactor().unwrap();
        assert!((k.arg() + PI / 4.0).abs() < 1e-15);
        assert!((k.norm() - (2.0 * PI).sqrt().recip()).abs() < 1e-15);
        let k = LctParams::fourier().inverse().kernel_prefactor().unwrap();
        assert!((k.arg() - PI / 4.0).abs() < 1e-15);
        assert!(LctParams::identity().kernel_prefactor().is_err());
    }

    #[test]
    fn identity_branch_resamples() {
        let t = Grid::linspace(-8.0, 8.0, 257).unwrap();
        let f = gaussian(&t);
        let u = Grid::linspace(-4.0, 4.0, 101).unwrap();
        let out = lct_transform(&f, &LctParams::identity(), &u).unwrap();
        for (x, z) in out.iter() {
            assert!((z - f.value_at(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn dilation_branch_with_c_zero() {
        let t = Grid::linspace(-8.0, 8.0, 513).unwrap();
        let f = SampledSignal::from_fn(&t, |t| Complex64::new(t.cos(), t.sin() * 0.5));
        let p = make_params(2.0, 0.0, 0.0, 0.5).unwrap();
        let u = Grid::linspace(-10.0, 10.0, 41).unwrap();
        let out = lct_transform(&f, &p, &u).unwrap();
        for (x, z) in out.iter() {
            let expected = f.value_at(x / 2.0) * 0.5f64.sqrt();
            assert!((z - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn dilation_branch_errors() {
        let t = Grid::linspace(-1.0, 1.0, 11).unwrap();
        let f = gaussian(&t);
        let neg = make_params(-1.0, 0.0, 0.0, -1.0).unwrap();
        assert!(matches!(lct_transform(&f, &neg, &t), Err(LctError::Branch(_))));
        let wide = Grid::linspace(-2.0, 2.0, 11).unwrap();
        assert!(matches!(
            lct_transform(&f, &LctParams::identity(), &wide),
            Err(LctError::Domain(_))
        ));
    }

    #[test]
    fn fourier_of_gaussian() {
        let t = Grid::linspace(-8.0, 8.0, 1024).unwrap();
        let u = Grid::linspace(-6.0, 6.0, 481).unwrap();
        let out = lct_transform(&gaussian(&t), &LctParams::fourier(), &u).unwrap();
        let expected = SampledSignal::from_fn(&u, |u| {
            Complex64::cis(-PI / 4.0) * (-0.5 * u * u).exp()
        });
        assert!(relative_l2(&out, &expected).unwrap() <= 1e-4);
    }

    #[test]
    fn round_trip_gaussian() {
        let p = make_params(2.0, 1.0, 3.0, 2.0).unwrap();
        let t = Grid::linspace(-8.0, 8.0, 1024).unwrap();
        let u = Grid::linspace(-20.0, 20.0, 2048).unwrap();
        let f = gaussian(&t);
        let back = lct_inverse(&lct_transform(&f, &p, &u).unwrap(), &p, &t).unwrap();
        assert!(relative_l2(&back, &f).unwrap() <= 1e-4);

        let fourier = LctParams::fourier();
        let u = Grid::linspace(-10.0, 10.0, 1024).unwrap();
        let back = lct_inverse(&lct_transform(&f, &fourier, &u).unwrap(), &fourier, &t).unwrap();
        assert!(relative_l2(&back, &f).unwrap() <= 1e-4);
    }

    #[test]
    fn phasor_recurrence_matches_direct() {
        let mut out = vec![Complex64::new(0.0, 0.0); 1000];
        fill_phasors(&mut out, 0.3, -0.0123);
        for (j, z) in out.iter().enumerate() {
            let direct = Complex64::cis(0.3 - 0.0123 * j as f64);
            assert!((z - direct).norm() < 1e-14);
        }
    }
}
