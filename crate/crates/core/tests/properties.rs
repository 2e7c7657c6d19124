use num_complex::Complex64;
use proptest::prelude::*;

use a2ops::catalog::{self, KValue};
use a2ops::diffring::{ParamId, TableKind};
use a2ops::elliptic::PotentialBackend;
use a2ops::opalgebra::{full_symbol, numeric_residual, Sampler, WeylElement};
use a2ops::verify::{self, CheckSpec, SuiteConfig};

fn backend_strategy() -> impl Strategy<Value = PotentialBackend> {
    prop_oneof![
        Just(PotentialBackend::rational()),
        Just(PotentialBackend::hyperbolic()),
        Just(PotentialBackend::trig()),
        (0.3f64..2.0, 0.0f64..=1.0).prop_map(|(a, m)| PotentialBackend::elliptic(a, m).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn q1_p2_commute_for_any_solution(backend in backend_strategy(), k in 0.05f64..3.0, seed in any::<u64>()) {
        let j = TableKind::Jet;
        let q1 = catalog::build_q1(j, &KValue::Symbolic);
        let p2 = catalog::build_p2(j, &KValue::Symbolic);
        let comm = q1.commutator(&p2).unwrap();
        let stats = numeric_residual(&comm, &[&q1, &p2], &backend, k, &Sampler::new(seed, 20, 2.0)).unwrap();
        prop_assert!(stats.worst_residual < 1e-9, "{} k={}: {:e} at {:?}", backend, k, stats.worst_residual, stats.worst_point);
    }

    #[test]
    fn funceq_for_any_solution(backend in backend_strategy(), seed in any::<u64>()) {
        let r = verify::check_functional_equation(&backend, 20, seed, verify::FUNCEQ_TOL).unwrap();
        prop_assert!(r.pass, "{}", r);
    }

    #[test]
    fn rational_k_keeps_exact_structure(num in 1i64..12, den in 1i64..6) {
        let k = KValue::rational(num, den);
        let g = TableKind::General;
        let p2 = catalog::build_p2(g, &k);
        for w in WeylElement::all() {
            prop_assert!(p2.is_equivariant_under(&w));
        }
        prop_assert!(catalog::build_p1(g).commutator(&p2).unwrap().is_zero());
        // specializing the symbolic operator agrees with building at k
        let q = catalog::build_q1(g, &KValue::Symbolic).substitute_param(ParamId::K, &a2ops::diffring::rational(num, den));
        prop_assert_eq!(q, catalog::build_q1(g, &k));
    }

    #[test]
    fn gauged_operators_commute(num in 1i64..8, t in prop::array::uniform3(-2.0f64..2.0), lam in prop::array::uniform3(-1.5f64..1.5)) {
        let k = KValue::rational(num, 2);
        let backend = PotentialBackend::hyperbolic();
        prop_assume!(backend.check_regular_point(t).is_ok());
        let q = catalog::build_tilde_q1(&k);
        let p = catalog::build_tilde_p2(&k);
        let lam = lam.map(|x| Complex64::new(x, 0.5 * x));
        let kf = num as f64 / 2.0;
        let c = full_symbol(&q.commutator(&p).unwrap(), &backend, t, lam, kf).unwrap();
        let s = full_symbol(&q.compose(&p).unwrap(), &backend, t, lam, kf).unwrap();
        let scale = s.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        let worst = c.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(worst / scale < 1e-9, "{:e}", worst / scale);
    }
}

#[test]
fn reports_are_deterministic() {
    let config = SuiteConfig { samples: 30, seed: 17, ..Default::default() };
    let a: Vec<_> = verify::run_all(&config).unwrap().iter().map(|r| r.without_timing()).collect();
    let b: Vec<_> = verify::run_all(&config).unwrap().iter().map(|r| r.without_timing()).collect();
    assert_eq!(a, b);
    assert!(verify::all_pass(&a));
    let spec = CheckSpec { backend: PotentialBackend::trig(), samples: 30, seed: 18, ..Default::default() };
    let c = verify::check_commutativity(&spec).unwrap();
    assert_ne!(c.worst_point, a[3].worst_point);
}
