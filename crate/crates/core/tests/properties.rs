use proptest::prelude::*;

use toroyang_core::cartan::{CartanDatum, Root};
use toroyang_core::degeneration::{signed_vandermonde_holds, vandermonde_holds};
use toroyang_core::qtor::{theta, QGen, QPoly};
use toroyang_core::scalar::{exp_series, quantum_integer, rat, FieldElem, HSeries};
use toroyang_core::toroidal::Toroidal;
use toroyang_core::weyl::reflect;
use toroyang_core::yangian::{classical_shadow, level_sum, rescale, YEngine, YGen, YKind, YLimits, YPoly};

fn field_elem() -> impl Strategy<Value = FieldElem> {
    prop::array::uniform4((-5i64..=5, 1i64..=4)).prop_map(|c| FieldElem::new(rat(c[0].0, c[0].1), rat(c[1].0, c[1].1), rat(c[2].0, c[2].1), rat(c[3].0, c[3].1)))
}

fn yword(rank: usize) -> impl Strategy<Value = Vec<YGen>> {
    prop::collection::vec((0..3u8, 0..rank, 0..3u32), 0..=4).prop_map(|v| {
        v.into_iter()
            .map(|(k, node, level)| {
                let kind = match k {
                    0 => YKind::Minus,
                    1 => YKind::H,
                    _ => YKind::Plus,
                };
                YGen { kind, node, level }
            })
            .collect()
    })
}

fn ypoly(rank: usize) -> impl Strategy<Value = YPoly> {
    prop::collection::vec((yword(rank), 0..2u32, -3i64..=3), 1..=3).prop_map(|terms| {
        let mut p = YPoly::zero();
        for (w, h, c) in terms {
            p.add_assign(&YPoly::word(w).shift_hbar(h).scale(&FieldElem::from_int(c)));
        }
        p
    })
}

fn qword() -> impl Strategy<Value = Vec<QGen>> {
    prop::collection::vec((0..3u8, 0..3usize, -2i64..=2), 0..=4).prop_map(|v| {
        v.into_iter()
            .map(|(k, n, m)| match k {
                0 => QGen::minus(n, m),
                1 => QGen::h(n, m),
                _ => QGen::plus(n, m),
            })
            .collect()
    })
}

fn degrees(p: &YPoly) -> std::collections::BTreeSet<u32> {
    p.iter().map(|(m, _)| level_sum(&m.word) + m.hbar).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_laws(a in field_elem(), b in field_elem(), c in field_elem()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn field_inverse(a in field_elem()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn exp_is_a_homomorphism(c1 in -3i64..=3, c2 in -3i64..=3, c3 in -3i64..=3) {
        let order = 5;
        let a = HSeries::from_coeffs(vec![FieldElem::zero(), FieldElem::from_int(c1), FieldElem::from_int(c2)], order);
        let b = HSeries::from_coeffs(vec![FieldElem::zero(), FieldElem::from_int(c3)], order);
        let lhs = exp_series(&a.try_add(&b).unwrap()).unwrap();
        let rhs = exp_series(&a).unwrap().try_mul(&exp_series(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quantum_integer_is_odd(n in -6i64..=6, d in 1i64..=3) {
        let d = rat(1, d);
        prop_assert_eq!(quantum_integer(-n, &d, 6), quantum_integer(n, &d, 6).neg());
    }

    #[test]
    fn vandermonde(m in 0i64..=8, n in 0i64..=8) {
        prop_assert!(vandermonde_holds(m, n));
        prop_assert!(signed_vandermonde_holds(m, n));
    }

    #[test]
    fn theta_is_an_involution(words in prop::collection::vec((qword(), 0..3usize, -3i64..=3), 1..=4)) {
        let mut p = QPoly::zero(3);
        for (w, h, c) in words {
            p.add_term(w, h, FieldElem::from_int(c));
        }
        prop_assert_eq!(theta(&theta(&p)), p);
    }

    #[test]
    fn weyl_reflections_are_involutions(i in 0usize..3, a in -3i64..=3, b in -3i64..=3, k in -2i64..=2) {
        let d = CartanDatum::from_name("A2").unwrap();
        let beta = Root::new(vec![a, b], k);
        prop_assert_eq!(reflect(i, &reflect(i, &beta, &d), &d), beta);
    }

    #[test]
    fn straightening_preserves_degree(p in ypoly(3)) {
        let d = CartanDatum::from_name("A2").unwrap();
        let e = YEngine::new(&d, YLimits::default());
        let (s, ok) = e.straighten(&p).unwrap();
        prop_assert!(ok);
        prop_assert!(s.iter().all(|(m, _)| e.is_normal(&m.word)));
        prop_assert!(degrees(&s).is_subset(&degrees(&p)));
    }

    #[test]
    fn shadow_commutes_with_straightening(p in ypoly(3)) {
        let d = CartanDatum::from_name("A2").unwrap();
        let e = YEngine::new(&d, YLimits::default());
        let tor = Toroidal::new(&d);
        let pbw = tor.pbw(None);
        let (s, _) = e.straighten(&p).unwrap();
        prop_assert_eq!(classical_shadow(&tor, &pbw, &s), classical_shadow(&tor, &pbw, &p));
    }

    #[test]
    fn rescale_is_multiplicative(p in ypoly(2), q in ypoly(2), r in 1i64..=3) {
        let ratio = rat(r, 2);
        let lhs = rescale(&p.concat(&q), &ratio).unwrap();
        let rhs = rescale(&p, &ratio).unwrap().concat(&rescale(&q, &ratio).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rescale_commutes_with_straightening(p in ypoly(2), r in 1i64..=3) {
        let d = CartanDatum::from_name("A1").unwrap();
        let e = YEngine::new(&d, YLimits::default());
        let ratio = rat(r, 3);
        let a = rescale(&e.straighten(&p).unwrap().0, &ratio).unwrap();
        let b = e.straighten(&rescale(&p, &ratio).unwrap()).unwrap().0;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn generators_are_fixed_by_straightening() {
    let d = CartanDatum::from_name("C2").unwrap();
    let e = YEngine::new(&d, YLimits::default());
    for node in d.nodes() {
        for g in [YGen::plus(node, 2), YGen::minus(node, 0), YGen::h(node, 1)] {
            assert_eq!(e.straighten(&YPoly::gen(g)).unwrap().0, YPoly::gen(g));
        }
    }
}
