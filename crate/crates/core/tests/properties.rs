use gauss_riesz::bounds::{kernel_geometry, u_of_t};
use gauss_riesz::geometry::{dyadic_radii, maximal_function, GridFunction};
use gauss_riesz::hermite::{hermite_eval, HermiteExpansion, MultiIndex};
use gauss_riesz::quadrature::gaussian_rule;
use gauss_riesz::riesz::{riesz_spectral, RieszOrder};
use gauss_riesz::semigroup::{apply_tt, omega};
use gauss_riesz::varlp::{luxemburg_norm, modular, ExponentField, ModularTable};
use gauss_riesz::{Expansion, Rule};
use proptest::prelude::*;

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.5f64..2.5, dim)
}

fn expansion(dim: usize, max_order: u32) -> impl Strategy<Value = Expansion> {
    let indices = MultiIndex::up_to_order(dim, max_order);
    let n = indices.len();
    prop::collection::vec(-1.0f64..1.0, n).prop_map(move |c| {
        HermiteExpansion::from_terms(dim, indices.iter().cloned().zip(c)).unwrap()
    })
}

fn exponent() -> impl Strategy<Value = ExponentField> {
    prop_oneof![
        (1.2f64..4.0).prop_map(|q| ExponentField::constant(q).unwrap()),
        (1.5f64..3.0, 0.0f64..1.0).prop_map(|(p, c)| ExponentField::decay(p, c).unwrap()),
        (1.5f64..3.0, 0.0f64..1.0).prop_map(|(p, c)| ExponentField::log_decay(p, c).unwrap()),
    ]
}

fn rule(dim: usize) -> Rule {
    gaussian_rule(if dim == 1 { 40 } else { 16 }, dim).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_orthogonality(dim in 1usize..=2, a in 0usize..28, b in 0usize..28) {
        let idx = MultiIndex::up_to_order(dim, 6);
        let (nu, mu) = (&idx[a % idx.len()], &idx[b % idx.len()]);
        prop_assume!(nu != mu);
        let r = rule(dim);
        let q = r.integrate(|x| hermite_eval(nu, x).unwrap() * hermite_eval(mu, x).unwrap());
        prop_assert!(q.abs() < 1e-10, "{nu} {mu}: {q}");
    }

    #[test]
    fn projection_reconstructs_polynomials(e in expansion(2, 6), x in point(2)) {
        let r = rule(2);
        let back = HermiteExpansion::project_function(|y| e.eval(y).unwrap(), 6, &r).unwrap();
        let (want, got) = (e.eval(&x).unwrap(), back.eval(&x).unwrap());
        prop_assert!((want - got).abs() <= 1e-9 * want.abs().max(1.0), "{want} vs {got}");
    }

    #[test]
    fn eigenrelation_and_semigroup_law(k in 0u32..=4, x in point(1), s in 0.05f64..1.0, t in 0.05f64..1.0) {
        let r = rule(1);
        let h = |y: &[f64]| hermite_eval(&MultiIndex::from([k]), y).unwrap();
        let direct = apply_tt(h, s + t, &x, &r, 1e-12).unwrap();
        let nested = apply_tt(|y: &[f64]| apply_tt(h, t, y, &r, 1e-12).unwrap(), s, &x, &r, 1e-12).unwrap();
        let exact = (-(k as f64) * (s + t)).exp() * h(&x);
        prop_assert!((direct - exact).abs() <= 1e-7 * exact.abs().max(1e-3));
        prop_assert!((nested - exact).abs() <= 1e-7 * exact.abs().max(1e-3));
    }

    #[test]
    fn mehler_kernel_is_positive(t in 1e-3f64..8.0, x in point(2), y in point(2)) {
        prop_assert!(omega(t, &x, &y).unwrap() > 0.0);
    }

    #[test]
    fn spectral_orders_compose(e in expansion(2, 5), b1 in 0.2f64..3.0, b2 in 0.2f64..3.0) {
        let o = |b| RieszOrder::new(b).unwrap();
        let twice = riesz_spectral(&riesz_spectral(&e, o(b1)), o(b2));
        let once = riesz_spectral(&e, o(b1 + b2));
        for (nu, c) in once.iter() {
            prop_assert!((twice.get(nu) - c).abs() <= 4.0 * f64::EPSILON * c.abs());
        }
        prop_assert_eq!(twice.len(), once.len());
    }

    #[test]
    fn luxemburg_homogeneity_and_unit_ball(e in expansion(1, 4), p in exponent(), c in -5.0f64..5.0) {
        prop_assume!(c.abs() > 1e-3 && e.l2_norm_sq() > 1e-6);
        let r = rule(1);
        let tol = 1e-10;
        let f = |x: &[f64]| e.eval(x).unwrap();
        let n = luxemburg_norm(f, &p, &r, tol).unwrap();
        let nc = luxemburg_norm(|x: &[f64]| c * f(x), &p, &r, tol).unwrap();
        prop_assert!((nc - c.abs() * n).abs() <= 2.0 * tol * nc.max(1.0) * 10.0);
        let m = modular(|x: &[f64]| f(x) / n, &p, &r);
        prop_assert!((m - 1.0).abs() <= 1e-8, "modular {m}");
    }

    #[test]
    fn luxemburg_monotone(e in expansion(1, 4), p in exponent(), s in 0.0f64..1.0) {
        prop_assume!(e.l2_norm_sq() > 1e-6);
        let r = rule(1);
        let g = |x: &[f64]| e.eval(x).unwrap();
        let small = luxemburg_norm(|x: &[f64]| s * g(x) * (-x[0] * x[0]).exp(), &p, &r, 1e-10).unwrap();
        let big = luxemburg_norm(g, &p, &r, 1e-10).unwrap();
        prop_assert!(small <= big * (1.0 + 1e-9));
    }

    #[test]
    fn constant_exponent_is_lq(e in expansion(1, 4), q in prop::sample::select(vec![1.5, 2.0, 4.0])) {
        prop_assume!(e.l2_norm_sq() > 1e-6);
        let r = rule(1);
        let f = |x: &[f64]| e.eval(x).unwrap();
        let p = ExponentField::constant(q).unwrap();
        let n = luxemburg_norm(f, &p, &r, 1e-12).unwrap();
        let direct = r.integrate(|x| f(x).abs().powf(q)).powf(1.0 / q);
        prop_assert!((n - direct).abs() <= 1e-8 * direct);
    }

    #[test]
    fn modular_table_matches_modular(e in expansion(1, 3), p in exponent(), lambda in 0.1f64..10.0) {
        let r = rule(1);
        let f = |x: &[f64]| e.eval(x).unwrap();
        let t = ModularTable::new(f, &p, &r);
        let direct = modular(|x: &[f64]| f(x) / lambda, &p, &r);
        prop_assert!((t.modular_at(lambda) - direct).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn maximal_function_is_sublinear(a in point(1), b in point(1), x in -1.5f64..1.5) {
        let f = |y: &[f64]| (-(y[0] - a[0]).powi(2)).exp();
        let g = |y: &[f64]| (-(y[0] - b[0]).powi(2) * 3.0).exp();
        let grid = |h: &dyn Fn(&[f64]) -> f64| GridFunction::sample(h, &[0.0], 3.0, 121).unwrap();
        let (gf, gg) = (grid(&f), grid(&g));
        let gs = grid(&|y: &[f64]| f(y) + g(y));
        let radii = dyadic_radii(gf.spacing(), 2.0);
        let m = |h: &GridFunction| maximal_function(h, &[x], &radii).unwrap();
        prop_assert!(m(&gs) <= m(&gf) + m(&gg) + 1e-12);
    }

    #[test]
    fn geometry_identities(x in point(2), y in point(2), t in 1e-4f64..=1.0) {
        prop_assume!(x.iter().chain(&y).any(|v| v.abs() > 1e-6));
        let g = kernel_geometry(&x, &y).unwrap();
        let a: f64 = x.iter().chain(&y).map(|v| v * v).sum();
        prop_assert!((g.a - a).abs() <= 1e-12 * a);
        prop_assert!(g.a >= g.b.abs());
        prop_assert!(g.t0 > 0.0 && g.t0 <= 1.0);
        let sv = (1.0 - t).sqrt();
        let direct: f64 = x.iter().zip(&y).map(|(p, q)| (q - sv * p).powi(2)).sum::<f64>() / t;
        let u = u_of_t(t, &x, &y).unwrap();
        prop_assert!((u - direct).abs() <= 1e-9 * direct.max(1.0));
        if g.b > 0.0 {
            prop_assert!(u >= g.u_t0 - 1e-9 * g.u_t0.abs().max(1.0));
        }
    }
}
