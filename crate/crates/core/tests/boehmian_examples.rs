use lctb_core::boehmian::{
    self, boehm_convolve, boehm_derivative, boehm_lct, boehm_lct_limit, check_lct_well_defined,
    delta_convergence_diag, embed, embed_with_indices, equivalent, small_delta_convergence_diag, BoehmianRep,
};
use lctb_core::conv::a_convolve;
use lctb_core::delta::{DeltaFamily, FamilyKind};
use lctb_core::signal::relative_l2;
use lctb_core::{lct_transform, make_params, Complex64, Grid, LctError, LctParams, SampledSignal};

fn p2132() -> LctParams {
    make_params(2.0, 1.0, 3.0, 2.0).unwrap()
}

fn gauss(grid: &Grid, c: f64) -> SampledSignal {
    SampledSignal::from_real_fn(grid, |t| (-0.5 * (t - c) * (t - c)).exp())
}

fn unit(grid: &Grid) -> SampledSignal {
    let e = SampledSignal::from_real_fn(grid, |t| (-(t - 1.0) * (t - 1.0)).exp());
    let n = e.norm_l2();
    e.scale(Complex64::new(1.0 / n, 0.0))
}

/// `(lhs_n * ψ_n, rhs_n * φ_n)` restricted to `window`, the interior form of equivalence.
fn interior_gap(b1: &BoehmianRep, b2: &BoehmianRep, p: &LctParams, window: &Grid) -> f64 {
    let mut worst = 0.0f64;
    for n in 0..b1.depth() {
        let lhs = a_convolve(&b1.numerators()[n], &b2.denominators()[n], p).unwrap().restrict_to(window).unwrap();
        let rhs = a_convolve(&b2.numerators()[n], &b1.denominators()[n], p).unwrap().restrict_to(window).unwrap();
        worst = worst.max(relative_l2(&lhs, &rhs).unwrap());
    }
    worst
}

#[test]
fn triangular_embedding_on_a_coarse_grid() {
    let p = p2132();
    let fam = DeltaFamily::new(FamilyKind::Triangular, p, 1.0 / 64.0).unwrap();
    let grid = Grid::symmetric(8.0, fam.step()).unwrap();
    assert_eq!(grid.count, 1025);
    let b = embed_with_indices(&gauss(&grid, 0.0), &fam, &[1, 2, 4, 8]).unwrap();
    assert!(b.compat_residual() <= 1e-4);
}

#[test]
fn derivative_of_sine_is_cosine() {
    let p = LctParams::fourier();
    let fam = DeltaFamily::new(FamilyKind::Triangular, p, 1.0 / 64.0).unwrap();
    let grid = Grid::symmetric(8.0, fam.step()).unwrap();
    let idx = [1, 2, 4, 8];
    let sin = embed_with_indices(&SampledSignal::from_real_fn(&grid, f64::sin), &fam, &idx).unwrap();
    let cos = embed_with_indices(&SampledSignal::from_real_fn(&grid, f64::cos), &fam, &idx).unwrap();
    let d = boehm_derivative(&sin, 1, &fam).unwrap();
    // Triangles sit on [0, 2/n], so truncation effects from t = -8 drift right by up to 6.
    let window = Grid::new(-1.0, fam.step(), 7 * 64 + 1).unwrap();
    let gap = interior_gap(&d, &cos, &p, &window);
    assert!(gap <= 1e-2, "{gap:e}");
}

#[test]
fn derivative_of_a_constant_vanishes_inside() {
    let p = LctParams::fourier();
    let fam = DeltaFamily::new(FamilyKind::SmoothBump, p, 1.0 / 256.0).unwrap();
    let grid = Grid::symmetric(8.0, fam.step()).unwrap();
    let one = SampledSignal::from_real_fn(&grid, |t| if t.abs() <= 6.0 { 1.0 } else { 0.0 });
    let b = embed_with_indices(&one, &fam, &[2, 4]).unwrap();
    let window = Grid::symmetric(4.0, fam.step()).unwrap();
    for k in [1, 2] {
        let d = boehm_derivative(&b, k, &fam).unwrap();
        for num in d.numerators() {
            let inside = num.restrict_to(&window).unwrap();
            assert!(inside.max_abs() <= 1e-8, "k = {k}: {:e}", inside.max_abs());
        }
    }
}

#[test]
fn derivative_is_linear() {
    let p = LctParams::fourier();
    let fam = DeltaFamily::resolved_for(FamilyKind::SmoothBump, p, 8).unwrap();
    let grid = Grid::symmetric(7.0, fam.step()).unwrap();
    let b1 = embed_with_indices(&gauss(&grid, 0.0), &fam, &[4, 8]).unwrap();
    let b2 = embed_with_indices(&gauss(&grid, 1.0), &fam, &[4, 8]).unwrap();
    let lhs = boehm_derivative(&boehmian::add(&b1, &b2).unwrap(), 1, &fam).unwrap();
    let rhs = boehmian::add(&boehm_derivative(&b1, 1, &fam).unwrap(), &boehm_derivative(&b2, 1, &fam).unwrap()).unwrap();
    assert!(equivalent(&lhs, &rhs).unwrap() <= 1e-6);
}

#[test]
fn derivative_quotient_is_inexact_for_nonzero_a() {
    let p = p2132();
    let fam = DeltaFamily::resolved_for(FamilyKind::SmoothBump, p, 8).unwrap();
    let grid = Grid::symmetric(7.0, fam.step()).unwrap();
    let b = embed_with_indices(&gauss(&grid, 0.0), &fam, &[4, 8]).unwrap();
    let d = boehm_derivative(&b, 1, &fam).unwrap();
    assert!(d.compat_residual() > b.tolerance());
    assert!(matches!(boehmian::add(&d, &d), Err(LctError::Tolerance { .. })));
}

struct Setup {
    p: LctParams,
    fam: DeltaFamily,
    grid: Grid,
}

fn setup() -> Setup {
    let p = p2132();
    let fam = DeltaFamily::resolved_for(FamilyKind::SmoothBump, p, 32).unwrap();
    let grid = Grid::symmetric(7.0, fam.step()).unwrap();
    Setup { p, fam, grid }
}

#[test]
fn product_matches_embedded_convolution() {
    let s = setup();
    let (f, g) = (gauss(&s.grid, 0.0), gauss(&s.grid, 1.0));
    let lhs = boehm_convolve(&embed(&f, &s.fam, 3).unwrap(), &embed(&g, &s.fam, 3).unwrap()).unwrap();
    let rhs = embed(&a_convolve(&f, &g, &s.p).unwrap(), &s.fam, 3).unwrap();
    assert!(equivalent(&lhs, &rhs).unwrap() <= 1e-3);
}

#[test]
fn distinct_functions_are_not_equivalent() {
    let s = setup();
    let f = gauss(&s.grid, 0.0);
    let g = f.add(&unit(&s.grid)).unwrap();
    let gap = equivalent(&embed(&f, &s.fam, 3).unwrap(), &embed(&g, &s.fam, 3).unwrap()).unwrap();
    assert!(gap > 0.1, "{gap}");
}

#[test]
fn convergence_diagnostics_follow_the_perturbation() {
    let s = setup();
    let f = gauss(&s.grid, 0.0);
    let e = unit(&s.grid);
    let limit = embed(&f, &s.fam, 4).unwrap();
    let seq = |w: &dyn Fn(usize) -> f64| -> Vec<BoehmianRep> {
        (1..=4).map(|n| embed(&f.axpy(Complex64::new(w(n), 0.0), &e).unwrap(), &s.fam, 4).unwrap()).collect()
    };
    let shrinking = seq(&|n| 1.0 / n as f64);
    let diag = delta_convergence_diag(&shrinking, &limit).unwrap();
    assert!(diag.strictly_decreasing, "{:?}", diag.residuals);
    let fixed = delta_convergence_diag(&seq(&|_| 1.0), &limit).unwrap();
    assert!(!fixed.converging, "{:?}", fixed.residuals);
    let same = delta_convergence_diag(&vec![limit.clone(); 4], &limit).unwrap();
    assert!(same.residuals.iter().all(|&r| r <= 1e-12));

    let m = small_delta_convergence_diag(&shrinking, &limit, &[0, 3]).unwrap();
    assert!(m.columns.iter().all(|c| c.strictly_decreasing));
    assert!(matches!(small_delta_convergence_diag(&shrinking, &limit, &[4]), Err(LctError::Shape(_))));
    assert!(matches!(delta_convergence_diag(&vec![limit.clone(); 5], &limit), Err(LctError::Shape(_))));
}

#[test]
fn transform_of_quotients() {
    let s = setup();
    let u = Grid::linspace(-4.0, 4.0, 81).unwrap();
    let f = gauss(&s.grid, 0.5);
    let b = embed(&f, &s.fam, 4).unwrap();
    let img = boehm_lct(&b, &u, 1e-3).unwrap();
    assert!(img.cross_residual <= 1e-3);

    let tri = DeltaFamily::new(FamilyKind::Triangular, s.p, s.fam.step()).unwrap();
    let other = embed(&f, &tri, 4).unwrap();
    assert!(check_lct_well_defined(&b, &other, &u, 1e-3).unwrap() <= 1e-3);

    let lim = boehm_lct_limit(&b, &u).unwrap();
    assert!(lim.decreasing, "{:?}", lim.cauchy);
    let direct = lct_transform(&f, &s.p, &u).unwrap();
    assert!(relative_l2(&lim.limit, &direct).unwrap() <= 1e-3);
}
