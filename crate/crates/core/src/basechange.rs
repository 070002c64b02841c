//! Base change of `W^m_f` along `R → 𝒯`: comparing `(∩ M) ⊗ k` with
//! `∩ (M ⊗ k)` on the charts, and the resulting bound `p₀`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{show, EtdError, LatticeError};
use crate::etd::Etd;
use crate::forms::{ReductionMode, Ring, WValue};
use crate::lattice::field::{Field, PrimeField, Rationals};
use crate::lattice::int::{add_vec, is_prime_u64, scale_vec, IntVector};
use crate::lattice::sublattice::{obstruction_primes, Sublattice};
use crate::lattice::subspace::Subspace;
use crate::monoid::FaceId;

/// Largest number of chart faces for which all subsets are enumerated.
pub const MAX_CHARTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseChangeConfig {
    /// Bound on `h(e)` for the element-level cross-check.
    pub window: u64,
    /// `e_F` is this multiple of the sum of the generators of `F`.
    pub scale: u64,
}

impl Default for BaseChangeConfig {
    fn default() -> Self {
        BaseChangeConfig { window: 6, scale: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseChangeWitness {
    /// The face `⟨e⟩`.
    pub face: FaceId,
    /// A representative `e` with that face, ambient coordinates.
    pub e: Vec<String>,
    /// The subset `ℰ'` of chart faces.
    pub charts: Vec<FaceId>,
    pub integral_rank: usize,
    pub reduced_dim: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseChangeReport {
    pub m: usize,
    /// 0 or a prime.
    pub characteristic: u64,
    pub witnesses: Vec<BaseChangeWitness>,
    pub elements_checked: usize,
    /// Elements whose verdicts disagree with those of their face.
    pub cross_check_mismatches: Vec<Vec<String>>,
    pub pass: bool,
}

impl BaseChangeReport {
    pub fn failing(&self) -> impl Iterator<Item = &BaseChangeWitness> {
        self.witnesses.iter().filter(|w| !w.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeWitness {
    pub prime: u64,
    pub m: usize,
    pub witness: BaseChangeWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionBound {
    /// Primes dividing an elementary divisor along some iterated intersection.
    pub candidates: BTreeSet<u64>,
    /// Candidates with an actual failing witness.
    pub primes: BTreeSet<u64>,
    pub p0: u64,
    pub witnesses: Vec<PrimeWitness>,
}

/// Intersections over all nonempty subsets, indexed by bitmask.
fn subset_intersections<T: Clone>(items: &[T], mut meet: impl FnMut(&T, &T) -> T) -> Vec<Option<T>> {
    let n = items.len();
    let mut out: Vec<Option<T>> = vec![None; 1 << n];
    for mask in 1usize..1 << n {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        out[mask] = Some(match &out[rest] {
            None => items[top].clone(),
            Some(acc) => meet(acc, &items[top]),
        });
    }
    out
}

fn mask_members(mask: usize, charts: &[FaceId]) -> Vec<FaceId> {
    (0..charts.len()).filter(|i| mask >> i & 1 == 1).map(|i| charts[i]).collect()
}

fn reduced_dims<F: Field>(f: &F, lattices: &[Sublattice]) -> Vec<usize> {
    let spaces: Vec<Subspace<F>> = lattices.iter().map(|l| l.to_subspace(f)).collect();
    subset_intersections(&spaces, |a, b| a.intersect(b))
        .into_iter()
        .map(|s| s.map_or(0, |s| s.dim()))
        .collect()
}

fn integral_ranks(lattices: &[Sublattice]) -> Vec<usize> {
    subset_intersections(lattices, |a, b| a.intersect(b).expect("same ambient"))
        .into_iter()
        .map(|s| s.map_or(0, |s| s.rank()))
        .collect()
}

fn dims_for(characteristic: u64, lattices: &[Sublattice]) -> Result<Vec<usize>, EtdError> {
    Ok(if characteristic == 0 {
        reduced_dims(&Rationals, lattices)
    } else {
        reduced_dims(&PrimeField::new(characteristic)?, lattices)
    })
}

impl Etd {
    /// `e_F` in internal coordinates.
    pub fn chart_point(&self, face: FaceId, scale: u64) -> IntVector {
        scale_vec(&BigInt::from(scale), &self.p().interior_point(face))
    }

    fn integral_module(&self, m: usize, face: FaceId) -> Sublattice {
        self.w_lattice(face).wedge_power(m)
    }

    fn chart_modules(&self, face: FaceId, cache: &HashMap<FaceId, Sublattice>) -> Vec<Sublattice> {
        self.cover_faces()
            .iter()
            .map(|&f| cache[&self.p().join(face, f)].clone())
            .collect()
    }

    fn check_charts(&self) -> Result<Vec<FaceId>, EtdError> {
        let charts = self.cover_faces();
        if charts.len() > MAX_CHARTS {
            return Err(EtdError::TooManyCharts(charts.len()));
        }
        Ok(charts)
    }

    /// Compares `rank (∩_{F∈ℰ'} M_{e+e_F}) ⊗ k` with `dim ∩ (M_{e+e_F} ⊗ k)`
    /// for every essential face `⟨e⟩` and nonempty `ℰ'`, then re-derives the
    /// verdicts from actual elements `e` in the window.
    pub fn check_iso_condition(&self, m: usize, characteristic: u64, config: &BaseChangeConfig) -> Result<BaseChangeReport, EtdError> {
        if characteristic != 0 && !is_prime_u64(characteristic) {
            return Err(LatticeError::NotPrime(characteristic).into());
        }
        let charts = self.check_charts()?;
        let faces = self.essential_face_ids().to_vec();
        let mut cache = HashMap::new();
        for &g in &faces {
            for &f in &charts {
                let j = self.p().join(g, f);
                cache.entry(j).or_insert_with(|| self.integral_module(m, j));
            }
        }
        let per_face: Vec<(FaceId, Vec<usize>, Vec<usize>)> = faces
            .par_iter()
            .map(|&g| {
                let mods = self.chart_modules(g, &cache);
                Ok((g, integral_ranks(&mods), dims_for(characteristic, &mods)?))
            })
            .collect::<Result<_, EtdError>>()?;

        let mut witnesses = Vec::new();
        let mut verdict: HashMap<FaceId, (Vec<usize>, Vec<usize>)> = HashMap::new();
        for (g, ranks, dims) in per_face {
            let e = show(&self.p().to_ambient(&self.p().interior_point(g)));
            for mask in 1..ranks.len() {
                witnesses.push(BaseChangeWitness {
                    face: g,
                    e: e.clone(),
                    charts: mask_members(mask, &charts),
                    integral_rank: ranks[mask],
                    reduced_dim: dims[mask],
                    pass: ranks[mask] == dims[mask],
                });
            }
            verdict.insert(g, (ranks, dims));
        }

        let elements = self.essential_elements(config.window);
        let mismatches: Vec<Vec<String>> = elements
            .par_iter()
            .map(|e| -> Result<Option<Vec<String>>, EtdError> {
                let mods: Vec<Sublattice> = charts
                    .iter()
                    .map(|&f| {
                        let p = add_vec(e, &self.chart_point(f, config.scale));
                        match self.w_relative_internal(m, &p, Ring::Integers, ReductionMode::RelativeModule)?.value {
                            WValue::Integral(l) => Ok(l),
                            _ => unreachable!("integral ring"),
                        }
                    })
                    .collect::<Result<_, EtdError>>()?;
                let g = self.p().face_of_internal(e).expect("e ∈ P");
                let expected = &verdict[&g];
                let got = (integral_ranks(&mods), dims_for(characteristic, &mods)?);
                Ok((got != *expected).then(|| show(&self.p().to_ambient(e))))
            })
            .collect::<Result<Vec<_>, EtdError>>()?
            .into_iter()
            .flatten()
            .collect();

        let pass = witnesses.iter().all(|w| w.pass) && mismatches.is_empty();
        Ok(BaseChangeReport {
            m,
            characteristic,
            witnesses,
            elements_checked: elements.len(),
            cross_check_mismatches: mismatches,
            pass,
        })
    }

    /// Obstruction primes of all iterated intersections for `m` in range,
    /// each confirmed by a failing witness; `p₀ = 1 + max`, or 2 if none.
    pub fn p0_bound(&self, ms: std::ops::RangeInclusive<usize>, config: &BaseChangeConfig) -> Result<ObstructionBound, EtdError> {
        let charts = self.check_charts()?;
        let faces = self.essential_face_ids().to_vec();
        let ms: Vec<usize> = ms.collect();
        let mut candidates = BTreeSet::new();
        for &m in &ms {
            let mut cache = HashMap::new();
            for &g in &faces {
                for &f in &charts {
                    let j = self.p().join(g, f);
                    cache.entry(j).or_insert_with(|| self.integral_module(m, j));
                }
            }
            let found: Vec<BTreeSet<u64>> = faces
                .par_iter()
                .map(|&g| {
                    let mods = self.chart_modules(g, &cache);
                    let mut primes = BTreeSet::new();
                    subset_intersections(&mods, |a, b| {
                        primes.extend(obstruction_primes(a, b).unwrap_or_default());
                        a.intersect(b).expect("same ambient")
                    });
                    Ok(primes)
                })
                .collect::<Result<_, EtdError>>()?;
            candidates.extend(found.into_iter().flatten());
        }
        let mut primes = BTreeSet::new();
        let mut witnesses = Vec::new();
        for &p in &candidates {
            for &m in &ms {
                let report = self.check_iso_condition(m, p, &BaseChangeConfig { window: 0, ..config.clone() })?;
                let failing = report.failing().next().cloned();
                if let Some(witness) = failing {
                    primes.insert(p);
                    witnesses.push(PrimeWitness { prime: p, m, witness });
                    break;
                }
            }
        }
        let p0 = primes.iter().next_back().map_or(2, |p| p + 1);
        Ok(ObstructionBound {
            candidates,
            primes,
            p0,
            witnesses,
        })
    }
}
