use itep::asymptotics::{counting_bound_check, distance_to_pi_lattice, liouville_build};
use itep::cli::{Cell, Csv};
use itep::determinant::{eval_d, eval_d_branch, Branch, DetSettings};
use itep::media::MediumProfile;
use itep::poly::PiecewisePoly;
use itep::radial_solver::{propagate, OdeSettings};
use itep::scaled::{rel_diff, Scaled};
use itep::stability::eta_of;
use itep::zero_finder::{find_zeros, winding_count, FinderOptions, Rect};
use itep::Result;
use num_complex::Complex64;
use proptest::prelude::*;

fn k_strategy(max: f64) -> impl Strategy<Value = Complex64> {
    (0.5..max, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(m, a)| Complex64::from_polar(m, a))
}

/// ε₁ = a + b r + c r² ≥ 0.1 and γ₁ = g₀ + g₁ r ≥ 0 on [0, 1].
fn profile_strategy() -> impl Strategy<Value = MediumProfile> {
    (0.5..4.0, -0.2..1.0, -0.2..1.0, 0.0..0.5, 0.0..0.5, 0.5..3.0, 0.0..0.5).prop_map(|(a, b, c, g0, g1, e0, gam0)| {
        MediumProfile::new(
            PiecewisePoly::polynomial(vec![a, b, c]),
            PiecewisePoly::polynomial(vec![g0, g1]),
            e0,
            gam0,
        )
    })
    .prop_filter("valid medium", |p| itep::media::validate_profile(p).passed())
}

fn polynomial(roots: Vec<Complex64>) -> impl Fn(Complex64) -> Result<Scaled> + Sync {
    move |z| Ok(Scaled::from_complex(roots.iter().map(|r| z - r).product()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn winding_is_additive_over_a_cut(
        roots in prop::collection::vec((-3.0..3.0, -2.0..2.0), 1..5),
        cut in -2.5..2.5f64,
    ) {
        let roots: Vec<Complex64> = roots.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        // clearance beyond the guard's largest expansion, so every contour encloses the same roots
        prop_assume!(roots.iter().all(|r| (r.re - cut).abs() > 0.45));
        let f = polynomial(roots.clone());
        let whole = winding_count(&f, Rect::new(-4.0, 4.0, -3.0, 3.0).unwrap(), 16).unwrap();
        let left = winding_count(&f, Rect::new(-4.0, cut, -3.0, 3.0).unwrap(), 16).unwrap();
        let right = winding_count(&f, Rect::new(cut, 4.0, -3.0, 3.0).unwrap(), 16).unwrap();
        prop_assert_eq!(whole, left + right);
        prop_assert_eq!(whole, roots.len() as i64);
        prop_assert_eq!(left, roots.iter().filter(|r| r.re < cut).count() as i64);
    }

    #[test]
    fn found_zeros_match_the_winding(roots in prop::collection::vec((-3.0..3.0, -2.0..2.0), 1..5)) {
        let roots: Vec<Complex64> = roots.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let f = polynomial(roots.clone());
        let set = find_zeros(&f, Rect::new(-4.0, 4.0, -3.0, 3.0).unwrap(), &FinderOptions::default()).unwrap();
        prop_assert_eq!(set.total_multiplicity(), roots.len() as i64);
        for r in set.records.iter().filter(|r| r.multiplicity == 1) {
            let d = roots.iter().map(|z| (z - r.k).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-8, "{} is {d} from the nearest root", r.k);
        }
    }

    #[test]
    fn lossless_determinant_is_conjugate_symmetric(c in 0.5..5.0f64, e0 in 0.5..3.0f64, k in k_strategy(40.0)) {
        let p = MediumProfile::constant(c, 0.0, e0, 0.0);
        let s = DetSettings::default();
        let a = eval_d(&p, k, &s).unwrap().scaled();
        let b = eval_d(&p, k.conj(), &s).unwrap().scaled().conj();
        prop_assert!(rel_diff(&a, &b) < 1e-9);
    }

    #[test]
    fn determinant_reflects_across_the_imaginary_axis(p in profile_strategy(), k in k_strategy(30.0)) {
        let s = DetSettings::default();
        let a = eval_d(&p, k, &s).unwrap().scaled();
        let b = eval_d(&p, -k.conj(), &s).unwrap().scaled().conj();
        prop_assert!(rel_diff(&a, &b) < 1e-9);
    }

    #[test]
    fn exterior_branch_does_not_matter(p in profile_strategy(), k in k_strategy(50.0)) {
        let s = DetSettings::default();
        let a = eval_d_branch(&p, k, &s, Branch::Principal).unwrap().scaled();
        let b = eval_d_branch(&p, k, &s, Branch::Negated).unwrap().scaled();
        prop_assert!(rel_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn renormalization_threshold_is_invisible(p in profile_strategy(), k in k_strategy(60.0)) {
        let a = propagate(&p, k, &OdeSettings::default()).unwrap();
        let low = OdeSettings { renorm_threshold: 1e2, ..OdeSettings::default() };
        let b = propagate(&p, k, &low).unwrap();
        prop_assert!(rel_diff(&a.y(), &b.y()) < 1e-8);
        prop_assert!(rel_diff(&a.dy(), &b.dy()) < 1e-8);
    }

    #[test]
    fn boundary_value_is_analytic_in_k(p in profile_strategy(), k in k_strategy(30.0)) {
        let s = OdeSettings::default();
        let h = 1e-4;
        let y = |z: Complex64| {
            let t = propagate(&p, z, &s).unwrap();
            t.y1 * (t.log_scale - k.im.abs()).exp()
        };
        let dx = (y(k + h) - y(k - h)) / (2.0 * h);
        let dy = (y(k + Complex64::i() * h) - y(k - Complex64::i() * h)) / (2.0 * h * Complex64::i());
        prop_assert!((dx - dy).norm() <= 1e-6 * dx.norm().max(1.0), "{dx} vs {dy}");
    }

    #[test]
    fn eta_is_linear_in_the_perturbation(
        p in profile_strategy(),
        d in prop::collection::vec(-0.3..0.3f64, 1..4),
        s in 0.1..3.0f64,
    ) {
        let delta = PiecewisePoly::polynomial(d);
        let with = |t: f64| p.with_gamma1(p.gamma1.combine(1.0, &delta, t));
        let one = eta_of(&p, &with(1.0)).unwrap();
        let scaled = eta_of(&p, &with(s)).unwrap();
        // subtracting γ₁ back out of γ₁ + tδ rounds at the scale of γ₁
        let slack = 1e-15 * (p.gamma1.max_abs() + s * delta.max_abs()) / p.inf_epsilon1();
        prop_assert!((scaled - s * one).abs() <= 1e-12 * one + slack);
    }

    #[test]
    fn liouville_map_round_trips(r in 0.0..1.0f64) {
        let q = MediumProfile::new(
            PiecewisePoly::polynomial(vec![1.0, 4.0, 6.0, 4.0, 1.0]),
            PiecewisePoly::constant(0.0),
            1.0,
            0.0,
        );
        let frame = liouville_build(&q).unwrap();
        prop_assert!((frame.r_of_xi(frame.xi_of_r(r)) - r).abs() < 1e-10);
        prop_assert!((frame.xi_of_r(r) - ((1.0 + r).powi(3) - 1.0) / 3.0).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn counting_bound_holds_off_the_lattice(x in -30.0..30.0f64, y in -12.0..12.0f64, delta in 0.05..1.0f64) {
        let z = Complex64::new(x, y);
        prop_assume!(distance_to_pi_lattice(z) >= delta);
        prop_assert!(counting_bound_check(z, delta).unwrap().pass);
    }

    #[test]
    fn csv_floats_round_trip(x in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let mut c = Csv::new(&["x"]);
        c.row(&[Cell::Float(x)]);
        let back: f64 = c.as_str().lines().nth(1).unwrap().parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }
}
