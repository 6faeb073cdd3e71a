
use chabauty_core::cartan::{conjugacy_invariant, cross_ratio_set, LimitFamilySpec, Verdict};
use chabauty_core::linalg::{echelonize, Ambient, PMatrix};
use chabauty_core::padic::{count_power_classes, kth_root, padic_exp, padic_log, power_class_decide};
use chabauty_core::tree::{act, distance, translation_length, LatticeVertex};
use chabauty_core::{PadicNumber, PrimeContext};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ctx(p: u64) -> PrimeContext {
    PrimeContext::new(p, 32).unwrap()
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 13])
}

/// Nonzero rational n/d * p^k.
fn nonzero(p: u64) -> impl Strategy<Value = PadicNumber> {
    (-60i64..=60, 1i64..=60, -4i64..=4)
        .prop_filter("nonzero", |(n, _, _)| *n != 0)
        .prop_map(move |(n, d, k)| {
            let c = ctx(p);
            &c.rational(n, d) * &c.p_power(k)
        })
}

fn vertex(p: u64) -> impl Strategy<Value = LatticeVertex> {
    (0u32..4, 0u32..4, any::<u64>()).prop_map(move |(a, c, b)| {
        let m = p.pow(a);
        let mut b = if m == 1 { 0 } else { b % m };
        // keep [p^a, b; 0, p^c] primitive
        if a > 0 && c > 0 && b % p == 0 {
            b += 1;
        }
        LatticeVertex::new(ctx(p), a, BigInt::from(b), c).unwrap()
    })
}

fn sl2(p: u64) -> impl Strategy<Value = PMatrix> {
    (nonzero(p), nonzero(p), nonzero(p), -3i64..=3).prop_map(move |(x, y, z, k)| {
        let c = ctx(p);
        let u = |x: PadicNumber| PMatrix::new(c, 2, vec![c.one(), x, c.zero(), c.one()]);
        let l = |x: PadicNumber| PMatrix::new(c, 2, vec![c.one(), c.zero(), x, c.one()]);
        let d = PMatrix::diagonal(c, &[c.p_power(k), c.p_power(-k)]);
        &(&(&u(x) * &l(y)) * &d) * &u(z)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_operations_round_trip((a, b) in prime().prop_flat_map(|p| (nonzero(p), nonzero(p)))) {
        let c = a.ctx();
        let b = b.with_context(c);
        prop_assert!((&(&a + &b) - &b).agrees(&a).unwrap());
        prop_assert!((&a * &b).checked_div(&b).unwrap().agrees(&a).unwrap());
        let v = |x: &PadicNumber| x.nonzero_valuation().unwrap();
        prop_assert_eq!(v(&(&a * &b)), v(&a) + v(&b));
    }

    #[test]
    fn kth_powers_are_detected(p in prime(), k in prop::sample::select(vec![2u64, 3, 4]), seed in 1i64..200) {
        let c = ctx(p);
        let x = c.rational(seed, 7 + 6 * (p as i64));
        prop_assume!(!x.is_exact_zero());
        let y = x.pow(k as u32);
        prop_assert!(power_class_decide(&y, k).unwrap().is_kth_power);
        let r = kth_root(&y, k).unwrap();
        prop_assert!(r.pow(k as u32).agrees(&y).unwrap());
        prop_assert!(count_power_classes(c, k).unwrap().is_multiple_of(k));
    }

    #[test]
    fn exp_and_log_are_inverse(p in prime(), n in -50i64..=50) {
        let c = ctx(p);
        let floor = if p == 2 { 2 } else { 1 };
        let z = &c.integer(n) * &c.p_power(floor);
        let back = padic_log(&padic_exp(&z).unwrap()).unwrap();
        prop_assert!(back.agrees(&z).unwrap());
    }

    #[test]
    fn cross_ratio_set_is_an_anharmonic_orbit(alpha in nonzero(7)) {
        let Ok(uc) = cross_ratio_set(&alpha) else { return Ok(()) };
        let c = alpha.ctx();
        for x in &uc.values {
            prop_assert!(uc.contains(&x.inv().unwrap()).unwrap());
            prop_assert!(uc.contains(&(&c.one() - x)).unwrap());
        }
        // x -> 2 - x permutes {0, 1, 2} and sends alpha to 2 - alpha
        let mirrored = cross_ratio_set(&(&c.integer(2) - &alpha)).unwrap();
        prop_assert!(uc.same_set(&mirrored).unwrap());
    }

    #[test]
    fn tree_metric(u in vertex(5), v in vertex(5), w in vertex(5)) {
        let c = ctx(5);
        let d = |x: &LatticeVertex, y: &LatticeVertex| distance(c, x, y).unwrap();
        prop_assert_eq!(d(&u, &u), 0);
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w));
        prop_assert_eq!(d(&u, &v) % 2, (u.depth() + v.depth()) % 2);
    }

    #[test]
    fn sl2_acts_by_isometries(g in sl2(5), u in vertex(5), v in vertex(5)) {
        let c = ctx(5);
        let gu = act(&g, &u).unwrap();
        let gv = act(&g, &v).unwrap();
        prop_assert_eq!(distance(c, &gu, &gv).unwrap(), distance(c, &u, &v).unwrap());
    }

    #[test]
    fn translation_length_is_a_class_function(g in sl2(3), h in sl2(3)) {
        let conj = &(&h * &g) * &h.inverse().unwrap();
        prop_assert_eq!(translation_length(&conj).unwrap(), translation_length(&g).unwrap());
        prop_assert_eq!(translation_length(&g.inverse().unwrap()).unwrap(), translation_length(&g).unwrap());
    }

    #[test]
    fn conjugacy_verdicts_are_symmetric(a in nonzero(7), b in nonzero(7), stem in prop::sample::select(vec![(3usize, "Nalpha"), (4, "N1"), (4, "N4")])) {
        let c = ctx(7);
        let spec = |x: &PadicNumber| LimitFamilySpec::new(stem.0, stem.1, Some(x.clone())).unwrap();
        let same = conjugacy_invariant(c, &spec(&a), &spec(&a)).unwrap();
        prop_assert_eq!(same.verdict, Verdict::Conjugate);
        let ab = conjugacy_invariant(c, &spec(&a), &spec(&b)).unwrap();
        let ba = conjugacy_invariant(c, &spec(&b), &spec(&a)).unwrap();
        prop_assert_eq!(ab.verdict, ba.verdict);
        if ab.verdict == Verdict::Conjugate {
            prop_assert!(ab.conjugator_verified && ba.conjugator_verified);
        }
    }

    #[test]
    fn echelon_form_ignores_scaling(rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 1..5), k in -3i64..=3) {
        let c = ctx(5);
        let vs: Vec<Vec<PadicNumber>> = rows.iter().map(|r| r.iter().map(|&x| c.integer(x)).collect()).collect();
        let scaled: Vec<Vec<PadicNumber>> = vs.iter().map(|r| r.iter().map(|x| x * &c.p_power(k)).collect()).collect();
        let a = echelonize(c, Ambient::Plain(4), &vs).unwrap();
        let b = echelonize(c, Ambient::Plain(4), &scaled).unwrap();
        prop_assert_eq!(a.to_strings(), b.to_strings());
    }
}
