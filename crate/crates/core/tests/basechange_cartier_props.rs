mod common;

use std::collections::HashMap;

use common::*;
use etd_core::basechange::BaseChangeConfig;
use etd_core::cartier::{koszul_divide, FrobeniusBase};
use etd_core::etd::Etd;
use etd_core::forms::MonoidIdeal;
use etd_core::lattice::field::Rationals;
use etd_core::lattice::int::binomial;
use etd_core::lattice::wedge::wedge_product;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn check_base_change(etd: &Etd) -> Result<(), TestCaseError> {
    let one = BaseChangeConfig { window: 4, scale: 1 };
    let two = BaseChangeConfig { window: 4, scale: 2 };
    let r = etd.p().rank();
    let bound = etd.p0_bound(1..=r, &one).unwrap();
    prop_assert!(bound.primes.is_subset(&bound.candidates));
    for w in &bound.witnesses {
        prop_assert!(bound.primes.contains(&w.prime));
        prop_assert!(!w.witness.pass);
    }
    for m in 1..=r {
        prop_assert!(etd.check_iso_condition(m, 0, &one).unwrap().pass);
        for p in PRIMES {
            let a = etd.check_iso_condition(m, p, &one).unwrap();
            let b = etd.check_iso_condition(m, p, &two).unwrap();
            prop_assert!(a.cross_check_mismatches.is_empty(), "p = {}, m = {}", p, m);
            prop_assert_eq!(a.pass, b.pass);
            if p >= bound.p0 {
                prop_assert!(a.pass, "p = {} ≥ p₀ = {} but m = {} fails", p, bound.p0, m);
            }
            if !a.pass {
                prop_assert!(bound.primes.contains(&p));
            }
            for w in &a.witnesses {
                if w.charts.len() == 1 {
                    prop_assert!(w.pass);
                }
                prop_assert!(w.reduced_dim >= w.integral_rank);
            }
        }
    }
    Ok(())
}

fn check_cartier(etd: &Etd) -> Result<(), TestCaseError> {
    for p in [2u64, 3] {
        let field = etd.verify_decomposition(p, &FrobeniusBase::Field, 6).unwrap();
        prop_assert!(field.pass, "p = {}", p);
        prop_assert!(etd.frobenius_map(p, &FrobeniusBase::Field, 4).unwrap().pass);
        let truncated = etd
            .verify_decomposition(p, &FrobeniusBase::Truncated(MonoidIdeal::power_of_maximal(etd, 2)), 6)
            .unwrap();
        prop_assert!(truncated.pass);
        let by_degree: HashMap<_, _> = truncated.rows.iter().map(|r| ((r.degree.clone(), r.m), r.cohomology)).collect();
        for row in &field.rows {
            prop_assert_eq!(by_degree.get(&(row.degree.clone(), row.m)), Some(&row.cohomology));
        }
        for e in etd.essential_elements(6) {
            prop_assert!(etd.vanishing_iff_pe(p, &e).unwrap().pass, "p = {}, e = {:?}", p, e);
        }
    }
    Ok(())
}

#[test]
fn catalog_base_change_and_cartier() {
    for (name, etd) in catalog() {
        check_base_change(&etd).unwrap_or_else(|e| panic!("{name}: {e}"));
        check_cartier(&etd).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

fn frac(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_base_change(choice in choices()) {
        if let Some(etd) = random_etd(&choice) {
            check_base_change(&etd)?;
        }
    }

    #[test]
    fn random_cartier(choice in choices()) {
        if let Some(etd) = random_etd(&choice) {
            check_cartier(&etd)?;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_inverts_wedge(
        (n, k, v, a) in (2usize..=4).prop_flat_map(|n| (0..n).prop_flat_map(move |k| (
            Just(n),
            Just(k),
            prop::collection::vec(-3i64..=3, n),
            prop::collection::vec(-3i64..=3, binomial(n, k)),
        )))
    ) {
        let q = Rationals;
        prop_assume!(v.iter().any(|&x| x != 0));
        let (v, a) = (frac(&v), frac(&a));
        let l = wedge_product(&q, n, 1, &v, k, &a);
        let t = koszul_divide(&v, &l, k).unwrap();
        prop_assert_eq!(wedge_product(&q, n, 1, &v, k, &t), l.clone());
        // dividing again returns the same quotient
        let l2 = wedge_product(&q, n, 1, &v, k, &t);
        prop_assert_eq!(koszul_divide(&v, &l2, k).unwrap(), t);
        if l.iter().all(Zero::is_zero) {
            prop_assert!(koszul_divide(&v, &l, k).unwrap().iter().all(Zero::is_zero));
        }
    }
}
