//! Reference ETDs and random small ETDs shared by the integration tests.

#![allow(dead_code)]

use etd_core::error::MonoidError;
use etd_core::etd::{Etd, EtdConfig, FacetSpec};
use etd_core::lattice::int::{int_vec, IntVector};
use etd_core::monoid::ToricMonoid;
use num_bigint::BigInt;
use proptest::prelude::*;

fn vecs(vs: &[&[i64]]) -> Vec<IntVector> {
    vs.iter().map(|v| int_vec(v)).collect()
}

pub fn monoid(vs: &[&[i64]]) -> ToricMonoid {
    ToricMonoid::from_generators(vs[0].len(), &vecs(vs)).unwrap()
}

fn config(window: u64, grading: Option<&[i64]>) -> EtdConfig {
    EtdConfig {
        window,
        grading: grading.map(int_vec),
        ..EtdConfig::default()
    }
}

/// ⟨(1,0),(1,1),(1,2)⟩ over Q = 0 with no chosen facets.
pub fn bacha() -> Etd {
    Etd::validate(monoid(&[&[1, 0], &[1, 1], &[1, 2]]), &[], FacetSpec::Explicit(vec![]), &config(12, Some(&[1, 0]))).unwrap()
}

/// ℕ² over the diagonal.
pub fn a1() -> Etd {
    Etd::validate(monoid(&[&[1, 0], &[0, 1]]), &vecs(&[&[1, 1]]), FacetSpec::Min, &config(8, None)).unwrap()
}

/// xy = zw over t = z.
pub fn xytw() -> Etd {
    let p = monoid(&[&[1, 0, 0], &[0, 1, 1], &[1, 0, 1], &[0, 1, 0]]);
    Etd::validate(p, &vecs(&[&[1, 0, 1]]), FacetSpec::Min, &config(8, None)).unwrap()
}

/// ℕ² over Q = 0 with the single facet ⟨e₁⟩.
pub fn danilov() -> Etd {
    let p = monoid(&[&[1, 0], &[0, 1]]);
    let j = etd_core::etd::resolve_facet(&p, &[0], 0).unwrap();
    Etd::validate(p, &[], FacetSpec::Explicit(vec![j]), &config(12, None)).unwrap()
}

pub fn catalog() -> Vec<(&'static str, Etd)> {
    vec![("bacha", bacha()), ("a1", a1()), ("xytw", xytw()), ("danilov", danilov())]
}

/// Adds missing lattice points until the generators are saturated.
pub fn saturated_monoid(n: usize, mut gens: Vec<IntVector>) -> Option<ToricMonoid> {
    gens.retain(|g| g.iter().any(|c| c != &BigInt::from(0)));
    gens.sort();
    gens.dedup();
    loop {
        if gens.is_empty() || gens.len() > 6 {
            return None;
        }
        match ToricMonoid::from_generators(n, &gens) {
            Ok(p) => return Some(p),
            Err(MonoidError::NotSaturatedMonoid { witness }) => gens.push(witness.iter().map(|s| s.parse().unwrap()).collect()),
            Err(_) => return None,
        }
    }
}

pub type Choice = (usize, Vec<Vec<i64>>, u8, u8);

pub fn choices() -> impl Strategy<Value = Choice> {
    (2usize..=3, prop::collection::vec(prop::collection::vec(0i64..=3, 3), 2..=5), any::<u8>(), any::<u8>())
}

pub fn random_monoid(choice: &Choice) -> Option<ToricMonoid> {
    let (n, raw, _, _) = choice;
    saturated_monoid(*n, raw.iter().map(|v| v[..*n].iter().map(|&c| BigInt::from(c)).collect()).collect())
}

/// Q = 0 with a random facet subset, or Q = one generator of P.
pub fn random_etd(choice: &Choice) -> Option<Etd> {
    let (_, _, mode, pick) = choice;
    let p = random_monoid(choice)?;
    let config = EtdConfig { window: 8, ..EtdConfig::default() };
    let (q, facet_choice) = match mode % 3 {
        0 => {
            let chosen = (0..p.facets().len()).filter(|j| pick >> (j % 8) & 1 == 1).collect();
            (Vec::new(), FacetSpec::Explicit(chosen))
        }
        k => {
            let g = p.generators()[*pick as usize % p.generators().len()].clone();
            (vec![g], if k == 1 { FacetSpec::Min } else { FacetSpec::Max })
        }
    };
    Etd::validate(p, &q, facet_choice, &config).ok()
}
