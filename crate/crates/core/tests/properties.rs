use dualcong::modring::{
    binom, embed, format_rational, integer, is_padic, legendre, parse_rational, rational, BinomialTables,
    ExactRational, Modulus,
};
use dualcong::oracle::{exact_d, exact_d_ljunggren, exact_s, reduce};
use dualcong::sequences::{d_eval, dual_transform, s_eval};
use dualcong::verify::{check, check_lemma_telescope};
use dualcong::{Params, Statement};
use proptest::prelude::*;

const SMALL_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];
const PRIMES: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

fn any_rational() -> impl Strategy<Value = ExactRational> {
    (-500i64..500, 1i64..60).prop_map(|(n, d)| rational(n, d))
}

fn modulus() -> impl Strategy<Value = Modulus> {
    (prop::sample::select(SMALL_PRIMES.to_vec()), 1u32..=3).prop_map(|(p, e)| Modulus::new(p, e).unwrap())
}

proptest! {
    #[test]
    fn embedding_is_a_ring_map(a in any_rational(), b in any_rational(), md in modulus()) {
        let p = md.p();
        prop_assume!(is_padic(&a, p) && is_padic(&b, p));
        let (ea, eb) = (embed(&a, md).unwrap(), embed(&b, md).unwrap());
        prop_assert_eq!(embed(&(&a + &b), md).unwrap(), ea + eb);
        prop_assert_eq!(embed(&(&a - &b), md).unwrap(), ea - eb);
        prop_assert_eq!(embed(&(&a * &b), md).unwrap(), ea * eb);
        prop_assert!(ea.value() < md.value());
    }

    #[test]
    fn units_invert(v in 0u64..100_000, md in modulus()) {
        let a = md.from_u64(v);
        if v % md.p() == 0 {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert_eq!(a * a.inv().unwrap(), md.one());
        }
    }

    #[test]
    fn rational_literals_round_trip(a in any_rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
    }

    #[test]
    fn legendre_is_multiplicative(a in -1000i64..1000, b in -1000i64..1000, p in prop::sample::select(PRIMES.to_vec())) {
        let ab = legendre(&integer(a * b), p).unwrap();
        prop_assert_eq!(ab, legendre(&integer(a), p).unwrap() * legendre(&integer(b), p).unwrap());
    }

    #[test]
    fn half_binomial_is_scaled_central(p in prop::sample::select(PRIMES.to_vec()), e in 1u32..=3, k in 0u64..31) {
        let md = Modulus::new(p, e).unwrap();
        prop_assume!(k < p);
        let t = BinomialTables::build(md);
        let scale = md.from_i64(-4).pow(k).inv().unwrap();
        prop_assert_eq!(binom(&rational(-1, 2), k, &t).unwrap(), t.central(k as usize) * scale);
    }

    #[test]
    fn dual_is_an_involution(a in prop::collection::vec(any_rational(), 1..=12)) {
        let dual: Vec<_> = (0..a.len()).map(|n| dual_transform(&a, n).unwrap()).collect();
        for (n, an) in a.iter().enumerate() {
            prop_assert_eq!(&dual_transform(&dual, n).unwrap(), an);
        }
    }

    #[test]
    fn ljunggren_form_matches_definition(n in 0usize..=30, x in any_rational(), y in any_rational()) {
        prop_assert_eq!(exact_d(n, &x, &y), exact_d_ljunggren(n, &x, &y));
    }

    #[test]
    fn residues_match_exact_values(
        p in prop::sample::select(PRIMES.to_vec()),
        e in 1u32..=3,
        n in 0usize..31,
        x in any_rational(),
        y in any_rational(),
    ) {
        prop_assume!(n < p as usize && is_padic(&x, p) && is_padic(&y, p));
        let md = Modulus::new(p, e).unwrap();
        let t = BinomialTables::build(md);
        prop_assert_eq!(d_eval(n, &x, &y, &t).unwrap(), reduce(&exact_d(n, &x, &y), md).unwrap());
        prop_assert_eq!(s_eval(n, &x, &y, &t).unwrap(), reduce(&exact_s(n, &x, &y), md).unwrap());
    }

    #[test]
    fn product_sums_hold_for_rational_parameters(
        p in prop::sample::select(PRIMES.to_vec()),
        x1 in any_rational(), x2 in any_rational(),
        y1 in any_rational(), y2 in any_rational(),
    ) {
        prop_assume!([&x1, &x2, &y1, &y2].iter().all(|v| is_padic(v, p)));
        let params = Params::new().with("x1", x1).with("y1", y1).with("x2", x2).with("y2", y2);
        for st in [Statement::DProduct, Statement::SProduct] {
            let r = check(st, p, &params).unwrap();
            prop_assert!(r.pass, "{:?}", r);
        }
    }

    #[test]
    fn catalan_square_holds_for_rational_a(p in prop::sample::select(PRIMES.to_vec()), a in any_rational()) {
        prop_assume!(dualcong::modring::is_padic_unit(&a, p));
        let r = check(Statement::CatalanSquare, p, &Params::new().with("a", a)).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }
}

#[test]
fn telescope_records_are_exact() {
    let records = check_lemma_telescope(12);
    assert_eq!(records.len(), (1..=12).map(|n| n * n).sum::<usize>());
    assert!(records.iter().all(|r| r.pass && r.e == 0 && r.p == 0));
}
