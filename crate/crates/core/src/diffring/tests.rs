use proptest::prelude::*;

use super::*;
use crate::elliptic::PotentialBackend;

const G: TableKind = TableKind::General;
const H: TableKind = TableKind::Hyperbolic;
const J: TableKind = TableKind::Jet;

fn b(t: TableKind, p: Pair) -> DiffPoly {
    DiffPoly::beta(t, p)
}

fn bp(t: TableKind, p: Pair) -> DiffPoly {
    DiffPoly::beta_prime(t, p)
}

fn c(p: Pair) -> DiffPoly {
    DiffPoly::coth(H, p).unwrap()
}

fn k(t: TableKind) -> DiffPoly {
    DiffPoly::param(t, ParamId::K).unwrap()
}

fn ab() -> (DiffPoly, DiffPoly) {
    (DiffPoly::param(G, ParamId::A).unwrap(), DiffPoly::param(G, ParamId::B).unwrap())
}

#[test]
fn additive_examples() {
    let p = &k(G) * &b(G, Pair::P12);
    assert_eq!(&p + &DiffPoly::zero(G), p);
    assert!((&p + &(-&p)).is_zero());
    assert_eq!(b(G, Pair::P12) + b(G, Pair::P12), b(G, Pair::P12).scale(&rational(2, 1)));
}

#[test]
fn table_mismatch_is_an_error() {
    let e = b(G, Pair::P12).checked_add(&b(H, Pair::P12)).unwrap_err();
    assert_eq!(e, Error::TableMismatch { left: G, right: H });
    assert!(b(G, Pair::P12).checked_mul(&b(J, Pair::P12)).is_err());
}

#[test]
fn unsupported_generators() {
    assert!(DiffPoly::coth(G, Pair::P12).is_err());
    assert!(DiffPoly::param(H, ParamId::A).is_err());
    assert!(DiffPoly::symbol(G, Symbol::gen(Pair::P12, GenKind::Jet(2))).is_err());
}

#[test]
fn beta_prime_square_rewrites() {
    let (a, bb) = ab();
    let b2 = b(G, Pair::P12).pow(2);
    let expected = (&b2 + &a) * (&b2 + &bb);
    assert_eq!(bp(G, Pair::P12).pow(2), expected);
    assert_eq!(expected.len(), 4);
}

#[test]
fn coth_square_rewrites() {
    assert_eq!(c(Pair::P12).pow(2), DiffPoly::one(H) + b(H, Pair::P12).pow(2));
    // β′ is −coth·β in the hyperbolic table
    assert_eq!(bp(H, Pair::P13), -(c(Pair::P13) * b(H, Pair::P13)));
}

#[test]
fn multiplicative_identity() {
    let p = &k(G) * &bp(G, Pair::P23) + b(G, Pair::P13);
    assert_eq!(&p * &DiffPoly::one(G), p);
}

#[test]
fn chain_factor() {
    let x = b(G, Pair::P12);
    assert_eq!(x.derive(0), bp(G, Pair::P12));
    assert_eq!(x.derive(1), -bp(G, Pair::P12));
    assert!(x.derive(2).is_zero());
    assert_eq!(c(Pair::P12).derive(0), -b(H, Pair::P12).pow(2));
}

#[test]
fn second_derivative_closure() {
    let (a, bb) = ab();
    let x = b(G, Pair::P12);
    let expected = x.pow(3).scale(&rational(2, 1)) + &(&a + &bb) * &x;
    assert_eq!(bp(G, Pair::P12).derive(0), expected);
    assert_eq!(bp(J, Pair::P12).derive(0), DiffPoly::symbol(J, Symbol::gen(Pair::P12, GenKind::Jet(2))).unwrap());
}

#[test]
fn oriented_parity() {
    assert_eq!(DiffPoly::oriented(G, GenKind::Beta, 1, 0).unwrap(), -b(G, Pair::P12));
    assert_eq!(DiffPoly::oriented(G, GenKind::BetaPrime, 2, 0).unwrap(), bp(G, Pair::P13));
    assert_eq!(DiffPoly::oriented(H, GenKind::Coth, 2, 1).unwrap(), -c(Pair::P23));
}

#[test]
fn rename_reorients() {
    // t ↦ (t2, t1, t3): β(t12) → β(t21) = −β(t12), β(t13) → β(t23)
    let p = &b(G, Pair::P12) * &b(G, Pair::P13);
    assert_eq!(p.rename_coordinates([1, 0, 2]), -(&b(G, Pair::P12) * &b(G, Pair::P23)));
    assert_eq!(bp(G, Pair::P12).rename_coordinates([1, 0, 2]), bp(G, Pair::P12));
}

#[test]
fn eval_examples() {
    let pv = PointValues::new(&PotentialBackend::rational(), [3.0, 1.0, 0.0], 1.0, 1).unwrap();
    assert_eq!(b(G, Pair::P12).eval(&pv).unwrap(), 0.5);

    let hb = PotentialBackend::hyperbolic();
    let pv = PointValues::new(&hb, [0.3, -1.1, 0.8], 1.0, 1).unwrap();
    let id = c(Pair::P12).pow(2) - b(H, Pair::P12).pow(2);
    assert_eq!(id, DiffPoly::one(H));
    assert!((id.eval(&pv).unwrap() - 1.0).abs() < 1e-15);
    // the unreduced difference evaluates to 1 as well
    let direct = pv.value(Symbol::gen(Pair::P12, GenKind::Coth)).unwrap().powi(2)
        - pv.value(Symbol::gen(Pair::P12, GenKind::Beta)).unwrap().powi(2);
    assert!((direct - 1.0).abs() < 1e-14);

    let pv = PointValues::new(&hb, [1.0, 0.0, -1.0], 1.0, 1).unwrap();
    let v = bp(H, Pair::P12).eval(&pv).unwrap();
    assert!((v + 1.0f64.cosh() / 1.0f64.sinh().powi(2)).abs() < 1e-14);
    assert!((v + 1.117_285_5).abs() < 1e-7);
}

#[test]
fn eval_rejects_singular_points() {
    let hb = PotentialBackend::hyperbolic();
    assert!(matches!(PointValues::new(&hb, [1.0, 0.0, 0.0], 1.0, 1), Err(Error::Singular(_))));
    assert!(matches!(PointValues::new(&hb, [1.0, 0.0, 0.04], 1.0, 1), Err(Error::Singular(_))));
    let pv = PointValues::new(&PotentialBackend::rational(), [3.0, 1.0, 0.0], 1.0, 1).unwrap();
    assert!(c(Pair::P12).eval(&pv).is_err());
}

#[test]
fn zero_detection() {
    assert!(DiffPoly::zero(G).is_zero());
    assert!((b(G, Pair::P12) - b(G, Pair::P12)).is_zero());
    assert!(!b(G, Pair::P12).is_zero());
}

#[test]
fn cross_pair_reduction() {
    let lhs = &c(Pair::P12) * &c(Pair::P23);
    let rhs = &c(Pair::P13) * &(c(Pair::P12) + c(Pair::P23)) - DiffPoly::one(H);
    assert!(!(&lhs - &rhs).is_zero());
    assert!((&lhs - &rhs).reduce_coth_addition().is_zero());
    let pv = PointValues::new(&PotentialBackend::hyperbolic(), [0.7, -0.4, 1.9], 1.0, 1).unwrap();
    assert!((lhs.eval(&pv).unwrap() - rhs.eval(&pv).unwrap()).abs() < 1e-12);
}

#[test]
fn parameter_substitution() {
    let p = &k(G) * &k(G) - k(G);
    assert!(p.substitute_param(ParamId::K, &rational(1, 1)).is_zero());
    assert_eq!(p.substitute_param(ParamId::K, &rational(2, 1)), DiffPoly::integer(G, 2));
}

#[test]
fn rational_parsing() {
    assert_eq!(parse_rational("-1/2").unwrap(), rational(-1, 2));
    assert_eq!(parse_rational("0.37").unwrap(), rational(37, 100));
    assert_eq!(parse_rational("2.5e-1").unwrap(), rational(1, 4));
    assert_eq!(parse_rational("3").unwrap(), rational(3, 1));
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("abc").is_err());
    // normalized with positive denominator
    let q = parse_rational("4/-6").unwrap();
    assert_eq!((q.numer().clone(), q.denom().clone()), (BigInt::from(-2), BigInt::from(3)));
}

#[test]
fn display_and_serialization() {
    let p = &k(G) * &b(G, Pair::P12).pow(2) - DiffPoly::constant(G, rational(1, 3));
    assert_eq!(p.to_string(), "-1/3 + beta(t12)^2*k");
    let json = serde_json::to_value(&p).unwrap();
    assert_eq!(json[0]["coefficient"], "-1/3");
    assert_eq!(json[1]["monomial"][0]["symbol"], "beta(t12)");
    assert_eq!(json[1]["monomial"][0]["exponent"], 2);
    assert!(p.to_latex().contains("\\beta(t_{12})^{2}"));
}

fn symbols(table: TableKind) -> Vec<Symbol> {
    let mut out = vec![Symbol::Param(ParamId::K)];
    for p in Pair::ALL {
        out.push(Symbol::gen(p, GenKind::Beta));
        match table {
            TableKind::General => out.push(Symbol::gen(p, GenKind::BetaPrime)),
            TableKind::Hyperbolic => out.push(Symbol::gen(p, GenKind::Coth)),
            TableKind::Jet => {
                out.push(Symbol::gen(p, GenKind::BetaPrime));
                out.push(Symbol::gen(p, GenKind::Jet(2)));
            }
        }
    }
    if table == G {
        out.push(Symbol::Param(ParamId::A));
        out.push(Symbol::Param(ParamId::B));
    }
    out
}

type RawPoly = Vec<(i64, i64, Vec<(usize, u32)>)>;

fn raw_poly() -> impl Strategy<Value = RawPoly> {
    prop::collection::vec((-5i64..=5, 1i64..=4, prop::collection::vec((0usize..16, 1u32..=2), 0..3)), 0..4)
}

fn build(table: TableKind, raw: &RawPoly) -> DiffPoly {
    let syms = symbols(table);
    let mut out = DiffPoly::zero(table);
    for (n, d, factors) in raw {
        let mut term = DiffPoly::constant(table, rational(*n, *d));
        for &(i, e) in factors {
            term = &term * &DiffPoly::symbol(table, syms[i % syms.len()]).unwrap().pow(e);
        }
        out = &out + &term;
    }
    out
}

fn table_strategy() -> impl Strategy<Value = TableKind> {
    prop_oneof![Just(G), Just(H), Just(J)]
}

fn backends_for(table: TableKind) -> Vec<PotentialBackend> {
    let mut solutions = vec![
        PotentialBackend::rational(),
        PotentialBackend::trig(),
        PotentialBackend::hyperbolic(),
        PotentialBackend::elliptic(1.2, 0.6).unwrap(),
    ];
    match table {
        TableKind::General => solutions,
        TableKind::Hyperbolic => vec![PotentialBackend::hyperbolic()],
        TableKind::Jet => {
            solutions.push(PotentialBackend::inv_cosh());
            solutions
        }
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz(t in table_strategy(), p in raw_poly(), q in raw_poly(), dir in 0usize..3) {
        let (p, q) = (build(t, &p), build(t, &q));
        prop_assert_eq!((&p * &q).derive(dir), &p * &q.derive(dir) + &q * &p.derive(dir));
    }

    #[test]
    fn flatness(t in table_strategy(), p in raw_poly(), i in 0usize..3, j in 0usize..3) {
        let p = build(t, &p);
        prop_assert_eq!(p.derive(i).derive(j), p.derive(j).derive(i));
    }

    #[test]
    fn difference_invariance(t in table_strategy(), p in raw_poly()) {
        let p = build(t, &p);
        prop_assert!((p.derive(0) + p.derive(1) + p.derive(2)).is_zero());
    }

    #[test]
    fn ring_axioms(t in table_strategy(), p in raw_poly(), q in raw_poly(), r in raw_poly()) {
        let (p, q, r) = (build(t, &p), build(t, &q), build(t, &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &p * &q + &p * &r);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn reduction_soundness(
        t in table_strategy(),
        p in raw_poly(),
        q in raw_poly(),
        point in prop::array::uniform3(-2.0f64..2.0),
        kv in 0.1f64..2.0,
    ) {
        let (p, q) = (build(t, &p), build(t, &q));
        let prod = &p * &q;
        for backend in backends_for(t) {
            let Ok(values) = PointValues::new(&backend, point, kv, 4) else { continue };
            let (vp, vq, vpq) = (p.eval(&values).unwrap(), q.eval(&values).unwrap(), prod.eval(&values).unwrap());
            prop_assert!(rel_close(vp * vq, vpq, 1e-12), "{backend}: {} vs {}", vp * vq, vpq);
        }
    }

    #[test]
    fn derivative_matches_numeric_slope(
        p in raw_poly(),
        point in prop::array::uniform3(-1.5f64..1.5),
        dir in 0usize..3,
    ) {
        let p = build(G, &p);
        let backend = PotentialBackend::elliptic(0.9, 0.4).unwrap();
        let h = 1e-4;
        let shift = |s: f64| { let mut x = point; x[dir] += s; x };
        let (Ok(v0), Ok(vp), Ok(vm)) = (
            PointValues::new(&backend, point, 0.7, 2),
            PointValues::new(&backend, shift(h), 0.7, 2),
            PointValues::new(&backend, shift(-h), 0.7, 2),
        ) else { return Ok(()) };
        let fd = (p.eval(&vp).unwrap() - p.eval(&vm).unwrap()) / (2.0 * h);
        let exact = p.derive(dir).eval(&v0).unwrap();
        let scale = [&vp, &vm, &v0].iter().map(|v| p.eval(v).unwrap().abs()).fold(1.0, f64::max);
        prop_assert!((fd - exact).abs() <= 1e-5 * scale.max(exact.abs()), "fd {fd} exact {exact}");
    }
}
