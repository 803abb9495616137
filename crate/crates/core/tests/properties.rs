use num_rational::BigRational;
use proptest::prelude::*;

use mbl::billiard::{chasles_residual, trace};
use mbl::conditions::series::{divide_linear, hankel_matrix, kind_coeffs, multiply_linear, product_series, sqrt_unit_series, SeriesKind};
use mbl::confocal::{elliptic_coordinates, line_caustics, point_from_elliptic, Ellipsoid};
use mbl::exact::linalg::rank;
use mbl::exact::rat;
use mbl::mink::{classify_direction, mink_dot, reflect_direction, LineType, Vec3M, LIGHT_TOL};

fn vec3() -> impl Strategy<Value = Vec3M> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| Vec3M::from_array([a, b, c]))
}

fn close(a: Vec3M, b: Vec3M, tol: f64) -> bool {
    (a - b).norm_e() <= tol * (1.0 + a.norm_e())
}

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn series_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    (0..a.len()).map(|k| (0..=k).map(|j| &a[j] * &b[k - j]).sum()).collect()
}

proptest! {
    #[test]
    fn reflection_is_an_involution_preserving_quadrance(v in vec3(), n in vec3()) {
        prop_assume!(v.norm_e() > 1e-3 && mink_dot(n, n).abs() > 1e-2 * n.norm2_e());
        let w = reflect_direction(v, n, LIGHT_TOL).unwrap();
        prop_assert!(close(reflect_direction(w, n, LIGHT_TOL).unwrap(), v, 1e-9));
        let scale = w.norm2_e().max(v.norm2_e());
        prop_assert!((mink_dot(w, w) - mink_dot(v, v)).abs() <= 1e-10 * scale);
        // the tangent component is untouched
        prop_assert!((mink_dot(w, n) + mink_dot(v, n)).abs() <= 1e-10 * scale.sqrt() * n.norm_e());
    }

    #[test]
    fn line_type_is_scale_invariant(v in vec3(), s in 1e-3..1e3f64) {
        prop_assume!(v.norm_e() > 1e-6);
        let t = classify_direction(v, LIGHT_TOL).unwrap();
        prop_assert_eq!(classify_direction(s * v, LIGHT_TOL).unwrap(), t);
        prop_assert_eq!(classify_direction(-1.0 * v, LIGHT_TOL).unwrap(), t);
    }

    #[test]
    fn elliptic_coordinates_round_trip(u in 0.05..0.95f64, th in 0.0..6.28f64, ph in 0.1..3.04f64) {
        let e = Ellipsoid::standard();
        let r = u.cbrt();
        let p = Vec3M::from_array([
            r * e.a1.sqrt() * ph.sin() * th.cos(),
            r * e.a2.sqrt() * ph.sin() * th.sin(),
            r * e.a3.sqrt() * ph.cos(),
        ]);
        prop_assume!(p.to_array().iter().all(|x| x.abs() > 1e-4));
        let c = elliptic_coordinates(p, &e).unwrap();
        let back = point_from_elliptic(c, p.to_array().map(|x| x < 0.0), &e).unwrap();
        prop_assert!(close(back, p, 1e-8), "{:?} vs {:?}", back, p);
    }

    #[test]
    fn caustics_are_conserved_along_trajectories(
        u in 0.05..0.9f64, th in 0.0..6.28f64, z in -0.9..0.9f64, v in vec3(),
    ) {
        let e = Ellipsoid::standard();
        let r = u.sqrt() * (1.0 - z * z).sqrt();
        let p = Vec3M::from_array([r * e.a1.sqrt() * th.cos(), r * e.a2.sqrt() * th.sin(), z * u.sqrt() * e.a3.sqrt()]);
        prop_assume!(v.norm_e() > 1e-2);
        let lt = classify_direction(v, LIGHT_TOL).unwrap();
        prop_assume!(lt != LineType::LightLike && line_caustics(p, v, &e).is_ok());
        let traj = trace(p, v, &e, 30).unwrap();
        prop_assume!(traj.error.is_none());
        prop_assert!(chasles_residual(&traj) <= 1e-8);
        for b in &traj.bounces {
            prop_assert_eq!(classify_direction(b.outgoing, LIGHT_TOL).unwrap(), lt);
        }
    }

    #[test]
    fn square_root_series_squares_back(s in prop::collection::vec(small_rat(), 1..5), order in 1usize..8) {
        let p = product_series(&s, order, &());
        let r = sqrt_unit_series(&p, &());
        prop_assert_eq!(series_mul(&r, &r), p);
    }

    #[test]
    fn linear_division_is_undone_by_multiplication(c in prop::collection::vec(small_rat(), 1..8), u in small_rat()) {
        prop_assert_eq!(multiply_linear(&divide_linear(&c, &u), &u), c);
    }

    #[test]
    fn hankel_rank_is_invariant_under_rescaling(
        g1 in (1i64..30).prop_map(|k| rat(k, 7)),
        g2 in (-30i64..-1).prop_map(|k| rat(k, 11)),
        c in (1i64..9, 1i64..9).prop_map(|(n, d)| rat(n, d)),
        dim in 1usize..4,
    ) {
        // scaling every parameter by c multiplies the k-th coefficient by c^-k,
        // i.e. conjugates the Hankel block by diagonal matrices
        let recips = |c: &BigRational| [rat(4, 1), rat(2, 1), rat(-1, 1), g1.clone(), g2.clone()].map(|x| (x * c).recip());
        let order = 2 * dim + 2;
        for kind in [SeriesKind::A, SeriesKind::B, SeriesKind::C] {
            let h = |c: &BigRational| hankel_matrix(&kind_coeffs(kind, &recips(c), order, &()), 2, dim, dim);
            prop_assert_eq!(rank(&h(&rat(1, 1))), rank(&h(&c)));
        }
    }
}
