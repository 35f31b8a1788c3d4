use proptest::prelude::*;

use qfock::canonical::{build_block, canonical_basis, canonical_basis_in_order, matrix_bar_identity, Sign};
use qfock::combinatorics::multipartitions_of;
use qfock::fock::{v_operator, Flavor, FockContext, FockVector, MultiCharge};
use qfock::verify::is_m_dominant;
use qfock::wedge::FockParams;
use qfock::{LaurentRat, Multipartition};

fn label(level: usize, size: usize, pick: usize) -> Multipartition {
    let all = multipartitions_of(size, level);
    all[pick % all.len()].clone()
}

fn setting() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (2usize..=3, 1usize..=2).prop_flat_map(|(n, l)| (Just(n), Just(l), prop::collection::vec(-3i64..=3, l)))
}

fn coeff() -> impl Strategy<Value = LaurentRat> {
    prop::collection::vec((-3i32..=3, -3i64..=3), 0..3).prop_map(LaurentRat::from_int_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bar_is_an_antilinear_involution(
        (n, l, s) in setting(),
        sizes in (0usize..=3, 0usize..=3),
        picks in (0usize..50, 0usize..50),
        c in coeff(),
    ) {
        let params = FockParams::new(n, l).unwrap();
        let ctx = FockContext::new(params);
        let s = MultiCharge(s);
        let mut v = FockVector::basis(label(l, sizes.0, picks.0), s.clone());
        v.add_term(label(l, sizes.1, picks.1), c.clone());
        let b = ctx.bar(&v).unwrap();
        prop_assert_eq!(b.charge.clone(), s);
        prop_assert_eq!(ctx.bar(&b).unwrap(), v.clone());
        let one_side = ctx.bar(&v.scale(&c)).unwrap();
        prop_assert_eq!(one_side, b.scale(&c.bar()));
    }

    #[test]
    fn basis_vector_wedge_round_trip((n, l, s) in setting(), size in 0usize..=4, pick in 0usize..200) {
        let params = FockParams::new(n, l).unwrap();
        let s = MultiCharge(s);
        let v = FockVector::basis(label(l, size, pick), s.clone());
        let w = v.to_wedge(params).unwrap();
        prop_assert_eq!(FockVector::from_wedge(&w, params, &s).unwrap(), v);
    }

    #[test]
    fn operators_preserve_charge_and_add_degree((n, l, s) in setting(), size in 0usize..=2, pick in 0usize..50, m in 1usize..=2) {
        let params = FockParams::new(n, l).unwrap();
        let ctx = FockContext::new(params);
        let s = MultiCharge(s);
        let lam = label(l, size, pick);
        let out = ctx.apply(&v_operator(m, Flavor::Plain), &FockVector::basis(lam.clone(), s.clone())).unwrap();
        prop_assert_eq!(out.charge.clone(), s);
        for (mu, _) in out.iter() {
            prop_assert_eq!(mu.size(), lam.size() + n * m);
        }
    }

    #[test]
    fn dominance_report_is_consistent(s in prop::collection::vec(-8i64..=8, 1..=3), size in 0usize..=3, m in 0usize..=4) {
        let l = s.len();
        let lam = label(l, size, 0);
        let r = is_m_dominant(&lam, &MultiCharge(s), m);
        match r.margin {
            None => prop_assert!(r.holds && l == 1),
            Some(x) => prop_assert_eq!(r.holds, x >= 0),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn canonical_basis_is_order_independent((n, l, s) in setting(), degree in 0usize..=3, plus in any::<bool>()) {
        let params = FockParams::new(n, l).unwrap();
        let block = build_block(params, &MultiCharge(s), degree).unwrap();
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let a = canonical_basis(&block, sign).unwrap();
        let b = canonical_basis_in_order(&block, sign, &block.secondary_order()).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert!(matrix_bar_identity(&block, &a));
        prop_assert!(a.lattice_violations().is_empty());
        for (i, lam) in a.labels.iter().enumerate() {
            prop_assert!(a.entries[i][i].is_one(), "diagonal of {}", lam);
        }
    }
}
