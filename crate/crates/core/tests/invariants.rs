use proptest::prelude::*;
use sasaki::sasaki::{Connection, SasakiParams};
use sasaki::su2::{ad_action, bracket, exp_su2, log_su2, Su2Element, Su2Vector};
use sasaki::verify::table_deviation;

fn vec3() -> impl Strategy<Value = Su2Vector<f64>> {
    (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b, c)| Su2Vector::new(a, b, c))
}

fn element() -> impl Strategy<Value = Su2Element<f64>> {
    vec3().prop_map(exp_su2)
}

fn close(a: Su2Vector<f64>, b: Su2Vector<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #[test]
    fn jacobi_identity(x in vec3(), y in vec3(), z in vec3()) {
        let j = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
        prop_assert!(j.norm() < 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric(x in vec3(), y in vec3()) {
        prop_assert!(close(bracket(x, y), -bracket(y, x), 1e-15));
    }

    #[test]
    fn adjoint_is_a_homomorphism(a in element(), b in element(), x in vec3()) {
        let lhs = ad_action(&a.compose(&b), x);
        let rhs = ad_action(&a, ad_action(&b, x));
        prop_assert!(close(lhs, rhs, 1e-12));
        prop_assert!((ad_action(&a, x).norm() - x.norm()).abs() < 1e-12);
        // Ad preserves the bracket
        let y = Su2Vector::new(0.3, -0.1, 0.7);
        prop_assert!(close(ad_action(&a, bracket(x, y)), bracket(ad_action(&a, x), ad_action(&a, y)), 1e-11));
    }

    #[test]
    fn group_closure(a in element(), b in element(), c in element()) {
        let ab = a.compose(&b);
        prop_assert!((ab.norm() - 1.0).abs() < 1e-14);
        let l = ab.compose(&c);
        let r = a.compose(&b.compose(&c));
        prop_assert!(l.distance(&r) < 1e-14);
        prop_assert!(a.compose(&a.inverse()).distance(&Su2Element::identity()) < 1e-15);
    }

    #[test]
    fn exp_log_round_trip(x in vec3()) {
        prop_assume!(x.norm() < std::f64::consts::PI - 1e-3);
        prop_assert!(close(log_su2(&exp_su2(x)), x, 1e-12));
    }

    #[test]
    fn one_parameter_subgroups(x in vec3(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let lhs = exp_su2(x * (s + t));
        let rhs = exp_su2(x * s).compose(&exp_su2(x * t));
        prop_assert!(lhs.distance(&rhs) < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn curvature_tables_for_random_alpha(alpha in 0.05f64..20.0, q in -5.0f64..5.0) {
        let p = SasakiParams::from_alpha(alpha, q).unwrap();
        let report = Connection::new(&p).curvature_report();
        prop_assert!(table_deviation(&report, p.c()) < 1e-10);
        prop_assert!((p.c() - (4.0 / alpha - 3.0)).abs() < 1e-15);
    }
}
