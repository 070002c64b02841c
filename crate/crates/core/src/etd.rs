//! Elementary toroidal data `(Q ⊂ P, ℱ)`: validation, the decomposition
//! `P = E + Q`, essential and bad faces, and the cover of the open set of
//! log smoothness.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{show, EtdError};
use crate::lattice::int::{add_vec, dot, is_zero_vec, scale_vec, sub_vec, zero_vec, IntVector};
use crate::lattice::sublattice::{Splitting, Sublattice};
use crate::monoid::{ceil_div, FaceId, LocalGrading, ToricMonoid};

/// Which facets of `P` carry log structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacetSpec {
    Min,
    Max,
    /// Facet indices into `P.facets()`.
    Explicit(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct EtdConfig {
    /// Certification window in grading degree.
    pub window: u64,
    /// Grading as an ambient linear form; the facet-normal sum if absent.
    pub grading: Option<IntVector>,
    /// Use the alternative splitting of `P^gp ≅ P̄^gp ⊕ Q^gp`.
    pub twisted_splitting: bool,
}

impl Default for EtdConfig {
    fn default() -> Self {
        EtdConfig {
            window: 20,
            grading: None,
            twisted_splitting: false,
        }
    }
}

/// `p = e + q` with `e ∈ E`, `q ∈ Q`, in internal coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssentialDecomposition {
    pub e: IntVector,
    pub q: IntVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssentialFace {
    pub face: FaceId,
    pub rank: usize,
    /// Rank `d − 1`: indexes a chart of the cover.
    pub in_cover: bool,
}

/// A face `F̄ + Q'` of `P` with `F̄` a union of essential faces of rank at
/// most `d − 2` and `Q'` a face of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadFace {
    pub face: FaceId,
    /// Maximal essential subfaces, whose union is `F̄`.
    pub essential_part: Vec<FaceId>,
    /// Generators of `Q` lying in the face.
    pub base_part: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadFaceSet {
    pub faces: Vec<BadFace>,
}

impl BadFaceSet {
    pub fn ids(&self) -> Vec<FaceId> {
        self.faces.iter().map(|b| b.face).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    /// Essential faces of rank `d − 1`.
    pub charts: Vec<FaceId>,
    pub bad: Vec<FaceId>,
    /// Faces whose orbit lies in `U_P` but in no chart.
    pub uncovered: Vec<FaceId>,
    /// Charts contained in a bad face.
    pub charts_meeting_bad: Vec<FaceId>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetClassification {
    pub vertical: Vec<usize>,
    pub horizontal: Vec<usize>,
    pub unused: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OneDimensionalCase {
    /// `ℱ = ℱ_max`.
    AllFacets,
    /// `P ≅ ℕ × Q` and `ℱ = ℱ_min`.
    ProductWithN,
    Neither,
}

/// What was checked on the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub window: u64,
    pub elements_checked: usize,
    pub essential_elements: usize,
}

#[derive(Clone, Debug)]
pub struct Etd {
    p: ToricMonoid,
    q: ToricMonoid,
    q_gens: Vec<IntVector>,
    q_group: Sublattice,
    facet_set: BTreeSet<usize>,
    f_min: BTreeSet<usize>,
    essential: Vec<FaceId>,
    splitting: Splitting,
    grading: LocalGrading,
    certificate: Certificate,
}

impl Etd {
    pub fn validate(p: ToricMonoid, q_gens: &[IntVector], facet_choice: FacetSpec, config: &EtdConfig) -> Result<Etd, EtdError> {
        let r = p.rank();
        let mut q_internal = Vec::with_capacity(q_gens.len());
        for (i, g) in q_gens.iter().enumerate() {
            let x = p.to_internal(g).filter(|x| p.contains_internal(x)).ok_or(EtdError::QNotInP(i))?;
            if is_zero_vec(&x) {
                return Err(EtdError::NotInjective(i));
            }
            q_internal.push(x);
        }
        let q = if q_internal.is_empty() {
            ToricMonoid::from_generators(r, &[zero_vec(r)])?
        } else {
            ToricMonoid::from_generators(r, &q_internal)?
        };
        let q_group = Sublattice::from_generators(r, &q_internal);

        let grading = match &config.grading {
            Some(mu) => p.grading_from_ambient(mu)?,
            None => p.default_grading().clone(),
        };

        let f_min: BTreeSet<usize> = p
            .facets()
            .iter()
            .enumerate()
            .filter(|(_, f)| q_internal.iter().any(|g| dot(&f.normal, g).is_positive()))
            .map(|(j, _)| j)
            .collect();
        let all: BTreeSet<usize> = (0..p.facets().len()).collect();
        let facet_set: BTreeSet<usize> = match facet_choice {
            FacetSpec::Min => f_min.clone(),
            FacetSpec::Max => all,
            FacetSpec::Explicit(list) => {
                for &j in &list {
                    if j >= p.facets().len() {
                        return Err(EtdError::InvalidFacet(j));
                    }
                }
                list.into_iter().collect()
            }
        };
        let missing: Vec<usize> = f_min.difference(&facet_set).copied().collect();
        if !missing.is_empty() {
            return Err(EtdError::FacetSetTooSmall { missing });
        }

        // a face lies in E iff it contains no generator of Q
        let essential: Vec<FaceId> = (0..p.faces().len())
            .filter(|&f| q_internal.iter().all(|g| !p.face_contains(f, g)))
            .collect();

        let splitting = q_group.splitting();
        let mut etd = Etd {
            splitting: Sublattice::zero(r).splitting().expect("the zero lattice splits"),
            p,
            q,
            q_gens: q_internal,
            q_group,
            facet_set,
            f_min,
            essential,
            grading,
            certificate: Certificate {
                window: config.window,
                elements_checked: 0,
                essential_elements: 0,
            },
        };
        etd.certify(config.window)?;
        let splitting = splitting.ok_or_else(|| EtdError::NotFreeBasis {
            witness: Vec::new(),
            reason: "Q^gp is not saturated in P^gp".into(),
        })?;
        etd.splitting = if config.twisted_splitting { splitting.twisted() } else { splitting };
        Ok(etd)
    }

    /// Checks unique decomposition and the face structure of `E` on all
    /// elements of degree at most `window`.
    fn certify(&mut self, window: u64) -> Result<(), EtdError> {
        let elements = self.p.enumerate_up_to(&self.grading, window);
        let base: Vec<IntVector> = self.q_window(window);
        let mut essential_count = 0;
        for x in &elements {
            let hx = self.grading.eval(x);
            let count = base
                .iter()
                .filter(|q| self.grading.eval(q) <= hx)
                .filter(|q| self.is_essential_internal(&sub_vec(x, q)))
                .count();
            if count != 1 {
                return Err(EtdError::NotFreeBasis {
                    witness: show(&self.p.to_ambient(x)),
                    reason: format!("{count} decompositions p = e + q"),
                });
            }
            if self.is_essential_internal(x) {
                essential_count += 1;
                let f = self.p.face_of_internal(x)?;
                if !self.essential.contains(&f) {
                    return Err(EtdError::BasisNotFaceUnion {
                        witness: show(&self.p.to_ambient(x)),
                    });
                }
            }
        }
        self.certificate = Certificate {
            window,
            elements_checked: elements.len(),
            essential_elements: essential_count,
        };
        Ok(())
    }

    /// Elements of `Q` (in `P`-internal coordinates) of degree ≤ `window`.
    pub fn q_window(&self, window: u64) -> Vec<IntVector> {
        let h = LocalGrading::restricted(self.q.group(), &self.grading);
        self.q
            .enumerate_up_to(&h, window)
            .iter()
            .map(|x| self.q.to_ambient(x))
            .collect()
    }

    pub fn p(&self) -> &ToricMonoid {
        &self.p
    }

    pub fn q(&self) -> &ToricMonoid {
        &self.q
    }

    /// Generators of `Q` in internal coordinates of `P`.
    pub fn q_generators(&self) -> &[IntVector] {
        &self.q_gens
    }

    pub fn q_group(&self) -> &Sublattice {
        &self.q_group
    }

    pub fn grading(&self) -> &LocalGrading {
        &self.grading
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn splitting(&self) -> &Splitting {
        &self.splitting
    }

    /// Fiber dimension `rk(P^gp / Q^gp)`.
    pub fn d(&self) -> usize {
        self.p.rank() - self.q_group.rank()
    }

    pub fn facet_set(&self) -> &BTreeSet<usize> {
        &self.facet_set
    }

    pub fn f_min(&self) -> &BTreeSet<usize> {
        &self.f_min
    }

    /// Facets in `ℱ_max \ ℱ`; each contains `Q`.
    pub fn unused_facets(&self) -> Vec<usize> {
        (0..self.p.facets().len()).filter(|j| !self.facet_set.contains(j)).collect()
    }

    pub fn in_q(&self, x: &[BigInt]) -> bool {
        self.q.contains(x)
    }

    /// `x ∈ P \ (Q⁺ + P)`.
    pub fn is_essential_internal(&self, x: &[BigInt]) -> bool {
        self.p.contains_internal(x) && self.q_gens.iter().all(|g| !self.p.contains_internal(&sub_vec(x, g)))
    }

    pub fn decompose_internal(&self, x: &[BigInt]) -> Result<EssentialDecomposition, EtdError> {
        if !self.p.contains_internal(x) {
            return Err(EtdError::NotAnElement(show(&self.p.to_ambient(x))));
        }
        let mut e = x.to_vec();
        let mut q = zero_vec(self.p.rank());
        'outer: loop {
            for g in &self.q_gens {
                let y = sub_vec(&e, g);
                if self.p.contains_internal(&y) {
                    e = y;
                    q = add_vec(&q, g);
                    continue 'outer;
                }
            }
            break;
        }
        Ok(EssentialDecomposition { e, q })
    }

    /// Decomposition of an ambient vector, returned in ambient coordinates.
    pub fn decompose(&self, v: &[BigInt]) -> Result<EssentialDecomposition, EtdError> {
        let x = self
            .p
            .to_internal(v)
            .ok_or_else(|| EtdError::NotAnElement(show(v)))?;
        let d = self.decompose_internal(&x)?;
        Ok(EssentialDecomposition {
            e: self.p.to_ambient(&d.e),
            q: self.p.to_ambient(&d.q),
        })
    }

    pub fn essential_faces(&self) -> Vec<EssentialFace> {
        let d = self.d();
        self.essential
            .iter()
            .map(|&f| {
                let rank = self.p.face(f).rank;
                EssentialFace {
                    face: f,
                    rank,
                    in_cover: rank + 1 == d,
                }
            })
            .collect()
    }

    pub fn essential_face_ids(&self) -> &[FaceId] {
        &self.essential
    }

    pub fn is_essential_face(&self, f: FaceId) -> bool {
        self.essential.contains(&f)
    }

    /// Essential faces of rank `d − 1`.
    pub fn cover_faces(&self) -> Vec<FaceId> {
        self.essential_faces().into_iter().filter(|f| f.in_cover).map(|f| f.face).collect()
    }

    /// Essential elements of degree at most `bound`.
    pub fn essential_elements(&self, bound: u64) -> Vec<IntVector> {
        self.p
            .enumerate_up_to(&self.grading, bound)
            .into_iter()
            .filter(|x| self.is_essential_internal(x))
            .collect()
    }

    pub fn bad_faces(&self) -> BadFaceSet {
        let d = self.d() as i64;
        let faces = (0..self.p.faces().len())
            .filter_map(|g| {
                let ess: Vec<FaceId> = self
                    .essential
                    .iter()
                    .copied()
                    .filter(|&f| self.p.is_subface(f, g))
                    .collect();
                if ess.iter().any(|&f| self.p.face(f).rank as i64 > d - 2) {
                    return None;
                }
                let maximal: Vec<FaceId> = ess
                    .iter()
                    .copied()
                    .filter(|&f| !ess.iter().any(|&h| h != f && self.p.is_subface(f, h)))
                    .collect();
                let base_part: Vec<usize> = (0..self.q_gens.len())
                    .filter(|&i| self.p.face_contains(g, &self.q_gens[i]))
                    .collect();
                Some(BadFace {
                    face: g,
                    essential_part: maximal,
                    base_part,
                })
            })
            .collect();
        BadFaceSet { faces }
    }

    /// Checks that the orbits outside the bad faces are exactly those
    /// covered by the charts `U_F`, `F` essential of rank `d − 1`.
    pub fn cover_up(&self) -> CoverReport {
        let charts = self.cover_faces();
        let bad = self.bad_faces().ids();
        let in_bad = |g: FaceId| bad.iter().any(|&b| self.p.is_subface(g, b));
        let uncovered = (0..self.p.faces().len())
            .filter(|&g| !in_bad(g) && !charts.iter().any(|&f| self.p.is_subface(f, g)))
            .collect::<Vec<_>>();
        let charts_meeting_bad: Vec<FaceId> = charts.iter().copied().filter(|&f| in_bad(f)).collect();
        CoverReport {
            ok: uncovered.is_empty() && charts_meeting_bad.is_empty(),
            charts,
            bad,
            uncovered,
            charts_meeting_bad,
        }
    }

    pub fn classify_facets(&self) -> FacetClassification {
        FacetClassification {
            vertical: self.f_min.iter().copied().collect(),
            horizontal: self.facet_set.difference(&self.f_min).copied().collect(),
            unused: self.unused_facets(),
        }
    }

    /// For `d = 1`: `ℱ = ℱ_max`, or `P ≅ ℕ × Q` with `ℱ = ℱ_min`.
    pub fn one_dimensional_case(&self) -> Option<OneDimensionalCase> {
        if self.d() != 1 {
            return None;
        }
        if self.unused_facets().is_empty() {
            return Some(OneDimensionalCase::AllFacets);
        }
        let rays: Vec<FaceId> = self.essential.iter().copied().filter(|&f| self.p.face(f).rank == 1).collect();
        // P ≅ E × Q, so P ≅ ℕ × Q iff E is a single ray
        let product = rays.len() == 1
            && self.facet_set == self.f_min
            && self.essential.iter().all(|&f| self.p.is_subface(f, rays[0]));
        Some(if product {
            OneDimensionalCase::ProductWithN
        } else {
            OneDimensionalCase::Neither
        })
    }

    /// Image of `x ∈ P^gp` in `P̄^gp = P^gp / Q^gp ≅ ℤ^d`.
    pub fn project(&self, x: &[BigInt]) -> IntVector {
        self.splitting.project(x)
    }

    /// The unique `e ∈ E` over `p̄ ∈ P̄`, or `None` if `p̄ ∉ P̄`.
    pub fn essential_lift(&self, pbar: &[BigInt]) -> Option<IntVector> {
        let x = self.splitting.section(pbar);
        let q_sum = self.q_gens.iter().fold(zero_vec(self.p.rank()), |a, g| add_vec(&a, g));
        let mut k = BigInt::zero();
        for f in self.p.facets() {
            let nx = dot(&f.normal, &x);
            let nq = dot(&f.normal, &q_sum);
            if nq.is_zero() {
                if nx.is_negative() {
                    return None;
                }
            } else {
                k = k.max(ceil_div(&-nx, &nq));
            }
        }
        let y = add_vec(&x, &scale_vec(&k, &q_sum));
        Some(self.decompose_internal(&y).ok()?.e)
    }

    /// `φ(p̄) ∈ Q^gp`, in the coordinates of the splitting, so that
    /// `P = {(p̄, q) : q − φ(p̄) ∈ Q}`.
    pub fn phi(&self, pbar: &[BigInt]) -> Option<IntVector> {
        self.essential_lift(pbar).map(|e| self.splitting.sub_coordinates(&e))
    }

    /// `(Q × 0 ⊂ P × ℕˢ, {F × ℕˢ : F ∈ ℱ})`.
    pub fn with_free_factor(&self, s: usize, config: &EtdConfig) -> Result<Etd, EtdError> {
        let n = self.p.ambient_rank();
        let pad = |v: &IntVector| {
            let mut w = v.clone();
            w.extend(std::iter::repeat_n(BigInt::zero(), s));
            w
        };
        let mut gens: Vec<IntVector> = self.p.generators().iter().map(pad).collect();
        for i in 0..s {
            let mut e = zero_vec(n + s);
            e[n + i] = BigInt::from(1);
            gens.push(e);
        }
        let p = ToricMonoid::from_generators(n + s, &gens)?;
        let q: Vec<IntVector> = self.q_gens.iter().map(|g| pad(&self.p.to_ambient(g))).collect();
        // F × ℕˢ contains every new unit vector; P × (facet of ℕˢ) misses one
        let mut index = HashMap::new();
        for (j, f) in p.facets().iter().enumerate() {
            let old: Vec<usize> = f.generators.iter().copied().filter(|&i| i < self.p.generators().len()).collect();
            if (0..s).all(|i| f.generators.contains(&(self.p.generators().len() + i))) {
                index.insert(old, j);
            }
        }
        let mut list = Vec::new();
        for &j in &self.facet_set {
            let key = self.p.facets()[j].generators.clone();
            list.push(*index.get(&key).ok_or(EtdError::InvalidFacet(j))?);
        }
        let mut config = config.clone();
        config.grading = None;
        Etd::validate(p, &q, FacetSpec::Explicit(list), &config)
    }
}

impl LocalGrading {
    /// The grading pulled back along the inclusion of a sublattice with the
    /// given basis.
    pub fn restricted(sub: &Sublattice, h: &LocalGrading) -> LocalGrading {
        LocalGrading::from_form(sub.basis().iter().map(|b| h.eval(b)).collect())
    }
}

/// Resolves a facet given by generator indices to its index in `P.facets()`.
pub fn resolve_facet(p: &ToricMonoid, gens: &[usize], descriptor: usize) -> Result<usize, EtdError> {
    if gens.iter().any(|&i| i >= p.generators().len()) {
        return Err(EtdError::InvalidFacet(descriptor));
    }
    let hits: Vec<usize> = (0..p.facets().len())
        .filter(|&j| gens.iter().all(|g| p.facets()[j].generators.contains(g)))
        .collect();
    match hits.as_slice() {
        [j] => Ok(*j),
        _ => Err(EtdError::InvalidFacet(descriptor)),
    }
}
