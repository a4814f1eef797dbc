use std::f64::consts::PI;

use lctb_core::conv::{a_convolve, convolution_theorem_rhs};
use lctb_core::signal::relative_l2;
use lctb_core::{lct_transform, make_params, Complex64, Grid, LctParams, SampledSignal};

/// Closed-form transform of `exp(−t²/2)`; the Gaussian integral has `Re α > 0`,
/// so the principal root of `π/α` is the right one.
fn gaussian_oracle(p: &LctParams, u: f64) -> Complex64 {
    let (a, b, d) = (p.a(), p.b(), p.d());
    let i = Complex64::i();
    let alpha = (b - i * a) / (2.0 * b);
    let pref = (1.0 / (2.0 * PI * i * b)).sqrt() * (PI / alpha).sqrt();
    pref * (-u * u / (4.0 * alpha * b * b) + i * d * u * u / (2.0 * b)).exp()
}

fn gaussian(grid: &Grid) -> SampledSignal {
    SampledSignal::from_real_fn(grid, |t| (-0.5 * t * t).exp())
}

#[test]
fn gaussian_matches_closed_form_across_parameters() {
    let grid = Grid::linspace(-8.0, 8.0, 1024).unwrap();
    let u = Grid::linspace(-5.0, 5.0, 201).unwrap();
    let cases = [
        make_params(2.0, 1.0, 3.0, 2.0).unwrap(),
        make_params(2.0, -1.0, -3.0, 2.0).unwrap(),
        make_params(0.5, 2.0, -0.25, 1.0).unwrap(),
        LctParams::fourier(),
        LctParams::frft(0.3).unwrap(),
        LctParams::frft(-2.0).unwrap(),
    ];
    let f = gaussian(&grid);
    for p in cases {
        let got = lct_transform(&f, &p, &u).unwrap();
        let want = SampledSignal::from_fn(&u, |x| gaussian_oracle(&p, x));
        let err = relative_l2(&got, &want).unwrap();
        assert!(err < 1e-8, "{p}: {err:e}");
    }
}

#[test]
fn fractional_fourier_keeps_the_gaussian() {
    let grid = Grid::linspace(-8.0, 8.0, 1024).unwrap();
    let u = Grid::linspace(-6.0, 6.0, 121).unwrap();
    let theta = PI / 4.0;
    let got = lct_transform(&gaussian(&grid), &LctParams::frft(theta).unwrap(), &u).unwrap();
    for (x, z) in got.iter() {
        let want = Complex64::from_polar((-0.5 * x * x).exp(), -theta / 2.0);
        assert!((z - want).norm() < 1e-10, "u = {x}");
    }
}

#[test]
fn dilation_branch_is_the_small_b_limit() {
    let f = |t: f64| (-0.5 * (t - 0.3) * (t - 0.3)).exp();
    let u = Grid::linspace(-2.5, 2.5, 101).unwrap();
    let coarse = Grid::linspace(-8.0, 8.0, 4097).unwrap();
    let limit = lct_transform(&SampledSignal::from_real_fn(&coarse, f), &make_params(2.0, 0.0, 1.0, 0.5).unwrap(), &u)
        .unwrap();
    let mut errors = Vec::new();
    for (eps, step) in [(1e-2, 5e-4), (1e-3, 5e-5)] {
        let grid = Grid::symmetric(4.0, step).unwrap();
        let p = make_params(2.0, eps, 1.0, (1.0 + eps) / 2.0).unwrap();
        let got = lct_transform(&SampledSignal::from_real_fn(&grid, f), &p, &u).unwrap();
        errors.push(relative_l2(&got, &limit).unwrap());
    }
    assert!(errors[0] < 5e-2, "{errors:?}");
    assert!(errors[1] < errors[0] / 5.0, "{errors:?}");
}

#[test]
fn weighted_convolution_of_gaussians_has_closed_form_spectrum() {
    // L_A(f *^A g) against the product of two closed-form Gaussian spectra.
    let grid = Grid::linspace(-8.0, 8.0, 1024).unwrap();
    let u = Grid::linspace(-4.0, 4.0, 161).unwrap();
    for p in [make_params(2.0, 1.0, 3.0, 2.0).unwrap(), make_params(2.0, -1.0, -3.0, 2.0).unwrap()] {
        let f = gaussian(&grid);
        let lhs = lct_transform(&a_convolve(&f, &f, &p).unwrap(), &p, &u).unwrap();
        let spec = SampledSignal::from_fn(&u, |x| gaussian_oracle(&p, x));
        let rhs = convolution_theorem_rhs(&spec, &spec, &p).unwrap();
        assert!(relative_l2(&lhs, &rhs).unwrap() < 1e-8, "{p}");
    }
}
