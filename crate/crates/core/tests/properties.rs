use lctb_core::boehmian::{self, embed_with_indices, equivalent, scalar_mul};
use lctb_core::conv::{a_convolve, convolution_theorem_rhs};
use lctb_core::delta::{check_condition_i, tail_mass, DeltaFamily, FamilyKind};
use lctb_core::signal::relative_l2;
use lctb_core::{invert_params, lct_inverse, lct_transform, make_params, Complex64, Grid, LctParams, SampledSignal};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = LctParams> {
    (-2.0f64..2.0, 0.5f64..2.0, any::<bool>(), -2.0f64..2.0).prop_map(|(a, b, neg, d)| {
        let b = if neg { -b } else { b };
        make_params(a, b, (a * d - 1.0) / b, d).unwrap()
    })
}

fn bump(grid: &Grid, center: f64, width: f64, freq: f64) -> SampledSignal {
    SampledSignal::from_fn(grid, |t| {
        let x = (t - center) / width;
        Complex64::from_polar((-0.5 * x * x).exp(), freq * t)
    })
}

fn wide_u(p: &LctParams) -> Grid {
    let reach = (p.a().abs() + p.b().abs()) * 8.0 + 10.0 * p.b().abs();
    Grid::linspace(-reach, reach, 2048).unwrap()
}

fn det(p: &LctParams) -> f64 {
    p.a() * p.d() - p.b() * p.c()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inversion_is_an_involution(p in params()) {
        let q = invert_params(&invert_params(&p));
        prop_assert_eq!(q, p);
        let inv = invert_params(&p);
        prop_assert!((det(&inv) - 1.0).abs() < 1e-12);
        // A · A^-1 = I
        let m = [p.a() * inv.a() + p.b() * inv.c(), p.a() * inv.b() + p.b() * inv.d(),
                 p.c() * inv.a() + p.d() * inv.c(), p.c() * inv.b() + p.d() * inv.d()];
        for (x, want) in m.iter().zip([1.0, 0.0, 0.0, 1.0]) {
            prop_assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_is_linear(p in params(), c in -1.0f64..1.0, w in 0.7f64..1.5, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let grid = Grid::linspace(-8.0, 8.0, 512).unwrap();
        let u = Grid::linspace(-4.0, 4.0, 41).unwrap();
        let f = bump(&grid, c, w, 0.0);
        let g = bump(&grid, -c, 1.0, 1.0);
        let lambda = Complex64::new(re, im);
        let lhs = lct_transform(&f.axpy(lambda, &g).unwrap(), &p, &u).unwrap();
        let rhs = lct_transform(&f, &p, &u).unwrap().axpy(lambda, &lct_transform(&g, &p, &u).unwrap()).unwrap();
        prop_assert!(relative_l2(&lhs, &rhs).unwrap() < 1e-12);
    }

    #[test]
    fn round_trip_recovers_smooth_signals(p in params(), c in -1.0f64..1.0, w in 0.8f64..1.4, k in -1.0f64..1.0) {
        let grid = Grid::linspace(-8.0, 8.0, 1024).unwrap();
        let f = bump(&grid, c, w, k);
        let back = lct_inverse(&lct_transform(&f, &p, &wide_u(&p)).unwrap(), &p, &grid).unwrap();
        prop_assert!(relative_l2(&back, &f).unwrap() < 1e-4);
    }

    #[test]
    fn weighted_convolution_commutes(p in params(), c in -2.0f64..2.0, n in 100usize..300) {
        let grid = Grid::linspace(-8.0, 8.0, 512).unwrap();
        let other = Grid::new(-1.0, grid.step, n).unwrap();
        let f = bump(&grid, c, 1.0, 0.5);
        let g = SampledSignal::from_real_fn(&other, |t| 1.0 - t.abs().min(1.0));
        let fg = a_convolve(&f, &g, &p).unwrap();
        let gf = a_convolve(&g, &f, &p).unwrap();
        prop_assert!(fg.distance_l2(&gf).unwrap() <= 1e-10 * fg.norm_l2().max(1.0));
    }

    #[test]
    fn convolution_theorem_holds(p in params(), c in -1.0f64..1.0, w in 0.7f64..1.3) {
        let grid = Grid::linspace(-8.0, 8.0, 1024).unwrap();
        let u = Grid::linspace(-4.0, 4.0, 81).unwrap();
        let f = bump(&grid, c, w, 0.0);
        let g = bump(&grid, 0.5, 1.0, 0.0);
        let lhs = lct_transform(&a_convolve(&f, &g, &p).unwrap(), &p, &u).unwrap();
        let rhs = convolution_theorem_rhs(&lct_transform(&f, &p, &u).unwrap(), &lct_transform(&g, &p, &u).unwrap(), &p).unwrap();
        prop_assert!(relative_l2(&lhs, &rhs).unwrap() < 1e-6);
    }

    #[test]
    fn triangles_have_unit_mass_and_no_tail(p in params(), e in 0u32..6) {
        let n = 1u32 << e;
        let fam = DeltaFamily::resolved_for(FamilyKind::Triangular, p, n).unwrap();
        let member = fam.member(n).unwrap();
        let r = check_condition_i(&member, &p, 1e-6).unwrap();
        prop_assert!(r.condition_i_passed, "{:?}", r.condition_i_value);
        prop_assert_eq!(tail_mass(&member, 2.0 / n as f64 + 1e-9), 0.0);
    }

    #[test]
    fn boehmian_scalars_and_symmetry(re in -2.0f64..2.0, im in -2.0f64..2.0, c in -1.0f64..1.0) {
        let p = make_params(2.0, 1.0, 3.0, 2.0).unwrap();
        let fam = DeltaFamily::resolved_for(FamilyKind::SmoothBump, p, 8).unwrap();
        let grid = Grid::symmetric(7.0, fam.step()).unwrap();
        let f = bump(&grid, c, 1.0, 0.0);
        let g = bump(&grid, 0.0, 0.8, 1.0);
        let (bf, bg) = (embed_with_indices(&f, &fam, &[4, 8]).unwrap(), embed_with_indices(&g, &fam, &[4, 8]).unwrap());
        let lambda = Complex64::new(re, im);
        let scaled = scalar_mul(lambda, &bf);
        let direct = embed_with_indices(&f.scale(lambda), &fam, &[4, 8]).unwrap();
        prop_assert!(equivalent(&scaled, &direct).unwrap() <= 1e-10 * (1.0 + lambda.norm()));
        prop_assert_eq!(equivalent(&bf, &bg).unwrap(), equivalent(&bg, &bf).unwrap());
        let sum = boehmian::add(&bf, &scaled).unwrap();
        let embedded = embed_with_indices(&f.axpy(lambda, &f).unwrap(), &fam, &[4, 8]).unwrap();
        prop_assert!(equivalent(&sum, &embedded).unwrap() <= 1e-10 * (1.0 + lambda.norm()));
    }
}
