//! Graded pieces of the reflexive log differential modules and the
//! per-degree monomial complexes.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{show, EtdError};
use crate::etd::Etd;
use crate::lattice::field::{Field, PrimeField, Rationals};
use crate::lattice::int::{add_vec, sub_vec, IntMatrix, IntVector};
use crate::lattice::koszul::{koszul_complex, CochainComplex};
use crate::lattice::sublattice::Sublattice;
use crate::lattice::subspace::Subspace;
use crate::lattice::wedge::{compound_matrix, subsets, wedge_of};
use crate::monoid::FaceId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ring {
    Integers,
    Rationals,
    Prime(u64),
}

/// How `W_e ⊗ 𝔽ₚ` is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionMode {
    /// Intersect over ℤ, then reduce.
    #[default]
    RelativeModule,
    /// Reduce each facet group, then intersect.
    IntersectionOfReductions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WValue {
    Integral(Sublattice),
    Rational(Subspace<Rationals>),
    Modular(Subspace<PrimeField>),
}

impl WValue {
    pub fn rank(&self) -> usize {
        match self {
            WValue::Integral(l) => l.rank(),
            WValue::Rational(s) => s.dim(),
            WValue::Modular(s) => s.dim(),
        }
    }
}

/// `(W^m)_p` as a sublattice or subspace of `∧^m` of the ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedWModule {
    pub m: usize,
    /// Degree in internal coordinates.
    pub degree: IntVector,
    pub face: FaceId,
    pub relative: bool,
    pub ring: Ring,
    pub value: WValue,
}

impl GradedWModule {
    pub fn rank(&self) -> usize {
        self.value.rank()
    }
}

/// A monoid ideal `K ⊂ Q`, given by generators in internal coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidIdeal {
    generators: Vec<IntVector>,
}

impl MonoidIdeal {
    /// Validates generators given in ambient coordinates.
    pub fn new(etd: &Etd, gens: &[IntVector]) -> Result<Self, EtdError> {
        let mut generators = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let x = etd.p().to_internal(g).filter(|x| etd.in_q(x)).ok_or(EtdError::IdealNotInQ(i))?;
            generators.push(x);
        }
        Ok(MonoidIdeal { generators })
    }

    /// `Q⁺`.
    pub fn maximal(etd: &Etd) -> Self {
        MonoidIdeal {
            generators: etd.q_generators().to_vec(),
        }
    }

    /// `k·Q⁺`, generated by sums of `k` generators of `Q`; `k = 0` gives `Q`.
    pub fn power_of_maximal(etd: &Etd, k: usize) -> Self {
        let r = etd.p().rank();
        let mut gens = vec![vec![BigInt::from(0); r]];
        for _ in 0..k {
            let mut next: Vec<IntVector> = Vec::new();
            for a in &gens {
                for g in etd.q_generators() {
                    let s = add_vec(a, g);
                    if !next.contains(&s) {
                        next.push(s);
                    }
                }
            }
            gens = next;
        }
        gens.sort();
        MonoidIdeal { generators: gens }
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn contains(&self, etd: &Etd, q: &[BigInt]) -> bool {
        self.generators.iter().any(|k| etd.in_q(&sub_vec(q, k)))
    }

    /// `x ∈ E_K = P \ (P + K)`.
    pub fn in_e_k(&self, etd: &Etd, x: &[BigInt]) -> bool {
        let p = etd.p();
        p.contains_internal(x) && self.generators.iter().all(|k| !p.contains_internal(&sub_vec(x, k)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComplexKind {
    Fiber,
    Absolute,
}

/// `∧^• V_e` with differential `c ∧ ·` for the class `c` of the degree.
#[derive(Clone, Debug)]
pub struct DegreeComplex<F: Field> {
    pub kind: ComplexKind,
    pub degree: IntVector,
    pub space: Subspace<F>,
    /// Coordinates of the class in the basis of `space`.
    pub class: Vec<F::Elem>,
    pub complex: CochainComplex<F>,
}

impl<F: Field> DegreeComplex<F> {
    pub fn class_is_zero(&self) -> bool {
        let f = self.space.field();
        self.class.iter().all(|c| f.is_zero(c))
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        self.complex.cohomology_dims()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub degree: IntVector,
    pub m: usize,
    pub sub_rank: usize,
    pub absolute_rank: usize,
    pub relative_rank: usize,
    /// `id − s ∘ ∧^m π` on `∧^m ℤʳ`, retracting onto the subobject.
    pub retraction: IntMatrix,
    pub exact: bool,
    pub split: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeBasisFailure {
    pub e: Vec<String>,
    pub q: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeBasisReport {
    pub m: usize,
    pub window: u64,
    pub pairs_checked: usize,
    pub failures: Vec<FreeBasisFailure>,
    pub pass: bool,
}

impl Etd {
    /// `H^gp` for facet `j`, in internal coordinates.
    pub fn facet_group(&self, j: usize) -> Sublattice {
        self.p().face_group(self.p().facet_face(j))
    }

    /// Unused facets containing the face.
    pub fn unused_facets_containing(&self, face: FaceId) -> Vec<usize> {
        let mask = self.p().face(face).facets;
        self.unused_facets().into_iter().filter(|j| mask >> j & 1 == 1).collect()
    }

    /// `L_G = ∩ H^gp` over unused facets `H ⊇ G`; all of `ℤʳ` if there are none.
    pub fn l_lattice(&self, face: FaceId) -> Sublattice {
        let r = self.p().rank();
        self.unused_facets_containing(face)
            .iter()
            .fold(Sublattice::full(r), |acc, &j| acc.intersect(&self.facet_group(j)).expect("same ambient"))
    }

    /// `L_G / Q^gp ⊂ ℤ^d`.
    pub fn w_lattice(&self, face: FaceId) -> Sublattice {
        self.l_lattice(face).image(&self.splitting().projection_matrix())
    }

    /// `∩ (π(H^gp) ⊗ k)` over unused `H ⊇ G`.
    fn w_reductions<F: Field>(&self, f: &F, face: FaceId) -> Subspace<F> {
        let d = self.d();
        let proj = self.splitting().projection_matrix();
        self.unused_facets_containing(face).iter().fold(Subspace::full(f, d), |acc, &j| {
            acc.intersect(&self.facet_group(j).image(&proj).to_subspace(f))
        })
    }

    fn face_of_degree(&self, x: &[BigInt]) -> Result<FaceId, EtdError> {
        self.p()
            .face_of_internal(x)
            .map_err(|_| EtdError::NotAnElement(show(&self.p().to_ambient(x))))
    }

    fn internal_degree(&self, v: &[BigInt]) -> Result<IntVector, EtdError> {
        self.p()
            .to_internal(v)
            .filter(|x| self.p().contains_internal(x))
            .ok_or_else(|| EtdError::NotAnElement(show(v)))
    }

    /// Relative space at a face over a field.
    pub fn w_space<F: Field>(&self, f: &F, face: FaceId, mode: ReductionMode) -> Subspace<F> {
        match mode {
            ReductionMode::RelativeModule => self.w_lattice(face).to_subspace(f),
            ReductionMode::IntersectionOfReductions => self.w_reductions(f, face),
        }
    }

    pub fn l_space<F: Field>(&self, f: &F, face: FaceId, mode: ReductionMode) -> Subspace<F> {
        match mode {
            ReductionMode::RelativeModule => self.l_lattice(face).to_subspace(f),
            ReductionMode::IntersectionOfReductions => {
                let r = self.p().rank();
                self.unused_facets_containing(face)
                    .iter()
                    .fold(Subspace::full(f, r), |acc, &j| acc.intersect(&self.facet_group(j).to_subspace(f)))
            }
        }
    }

    fn graded(&self, m: usize, x: &[BigInt], ring: Ring, relative: bool, mode: ReductionMode) -> Result<GradedWModule, EtdError> {
        let face = self.face_of_degree(x)?;
        let value = match ring {
            Ring::Integers => {
                let base = if relative { self.w_lattice(face) } else { self.l_lattice(face) };
                WValue::Integral(base.wedge_power(m))
            }
            Ring::Rationals => {
                let q = Rationals;
                let base = if relative { self.w_space(&q, face, mode) } else { self.l_space(&q, face, mode) };
                WValue::Rational(base.wedge_power(m))
            }
            Ring::Prime(p) => {
                let f = PrimeField::new(p)?;
                let base = if relative { self.w_space(&f, face, mode) } else { self.l_space(&f, face, mode) };
                WValue::Modular(base.wedge_power(m))
            }
        };
        Ok(GradedWModule {
            m,
            degree: x.to_vec(),
            face,
            relative,
            ring,
            value,
        })
    }

    /// `(W^m_f)_p`, degree in internal coordinates.
    pub fn w_relative_internal(&self, m: usize, x: &[BigInt], ring: Ring, mode: ReductionMode) -> Result<GradedWModule, EtdError> {
        self.graded(m, x, ring, true, mode)
    }

    pub fn w_absolute_internal(&self, m: usize, x: &[BigInt], ring: Ring, mode: ReductionMode) -> Result<GradedWModule, EtdError> {
        self.graded(m, x, ring, false, mode)
    }

    /// `(W^m_f)_p` for an ambient degree, reductions taken after intersecting.
    pub fn w_relative(&self, m: usize, p: &[BigInt], ring: Ring) -> Result<GradedWModule, EtdError> {
        let x = self.internal_degree(p)?;
        self.graded(m, &x, ring, true, ReductionMode::RelativeModule)
    }

    pub fn w_absolute(&self, m: usize, p: &[BigInt], ring: Ring) -> Result<GradedWModule, EtdError> {
        let x = self.internal_degree(p)?;
        self.graded(m, &x, ring, false, ReductionMode::RelativeModule)
    }

    /// `∩ ∧^m H^gp`, computed independently of `∧^m (∩ H^gp)`.
    pub fn intersection_of_wedges(&self, face: FaceId, m: usize) -> Sublattice {
        let r = self.p().rank();
        self.unused_facets_containing(face)
            .iter()
            .fold(Sublattice::full(r).wedge_power(m), |acc, &j| {
                acc.intersect(&self.facet_group(j).wedge_power(m)).expect("same ambient")
            })
    }

    /// Relative lattice with the quotient taken before intersecting.
    pub fn w_lattice_quotient_first(&self, face: FaceId) -> Sublattice {
        let proj = self.splitting().projection_matrix();
        self.unused_facets_containing(face)
            .iter()
            .fold(Sublattice::full(self.d()), |acc, &j| {
                acc.intersect(&self.facet_group(j).image(&proj)).expect("same ambient")
            })
    }

    /// `0 → Q^gp ∧ ∧^{m−1} L → ∧^m L → ∧^m (L / Q^gp) → 0` at the degree,
    /// with an explicit retraction.
    pub fn check_split_sequence(&self, x: &[BigInt], m: usize) -> Result<SplitReport, EtdError> {
        let face = self.face_of_degree(x)?;
        let r = self.p().rank();
        let l = self.l_lattice(face);
        let abs = l.wedge_power(m);
        let rel = self.w_lattice(face).wedge_power(m);
        let sub_gens: Vec<IntVector> = if m == 0 {
            Vec::new()
        } else {
            let lb = l.basis();
            let mut gens = Vec::new();
            for q in self.q_group().basis() {
                for s in subsets(lb.len(), m - 1) {
                    let mut vs = vec![q.clone()];
                    vs.extend(s.iter().map(|&i| lb[i].clone()));
                    gens.push(wedge_of(&vs, r));
                }
            }
            gens
        };
        let big = abs.ambient_rank();
        let sub = Sublattice::from_generators(big, &sub_gens);

        let proj = compound_matrix(&self.splitting().projection_matrix(), m);
        let sect = compound_matrix(&self.splitting().section_matrix(), m);
        let image_ok = abs.image(&proj) == rel;
        let kernel = {
            let coords = IntMatrix::from_rows(abs.basis(), big).mul(&proj);
            let k = Sublattice::left_kernel(&coords);
            let gens: Vec<IntVector> = k.basis().iter().map(|c| abs.basis_matrix().apply_row(c)).collect();
            Sublattice::from_generators(big, &gens)
        };
        let exact = image_ok && kernel == sub && sub.rank() + rel.rank() == abs.rank();

        // ρ = id − s∘Π; row-vector convention
        let mut retraction = IntMatrix::identity(big);
        let sp = proj.mul(&sect);
        for i in 0..big {
            for j in 0..big {
                retraction[(i, j)] -= &sp[(i, j)];
            }
        }
        let section_lands = rel.basis().iter().all(|w| abs.contains(&sect.apply_row(w)) && proj.apply_row(&sect.apply_row(w)) == *w);
        let retracts = abs.basis().iter().all(|a| sub.contains(&retraction.apply_row(a)))
            && sub.basis().iter().all(|s| retraction.apply_row(s) == *s);
        Ok(SplitReport {
            degree: x.to_vec(),
            m,
            sub_rank: sub.rank(),
            absolute_rank: abs.rank(),
            relative_rank: rel.rank(),
            retraction,
            exact,
            split: section_lands && retracts,
        })
    }

    /// The space and class of a degree over a field.
    fn degree_data<F: Field>(
        &self,
        f: &F,
        x: &[BigInt],
        kind: ComplexKind,
        mode: ReductionMode,
    ) -> Result<(Subspace<F>, Vec<F::Elem>), EtdError> {
        let face = self.face_of_degree(x)?;
        let (space, v) = match kind {
            ComplexKind::Fiber => (self.w_space(f, face, mode), f.map_vec(&self.project(x))),
            ComplexKind::Absolute => (self.l_space(f, face, mode), f.map_vec(x)),
        };
        let class = space.coordinates(&v).expect("a degree lies in its own space");
        Ok((space, class))
    }

    fn degree_complex<F: Field>(
        &self,
        ideal: &MonoidIdeal,
        f: &F,
        x: &[BigInt],
        kind: ComplexKind,
        mode: ReductionMode,
    ) -> Result<DegreeComplex<F>, EtdError> {
        if !ideal.in_e_k(self, x) {
            return Err(EtdError::NotInEk(show(&self.p().to_ambient(x))));
        }
        let (space, class) = self.degree_data(f, x, kind, mode)?;
        let complex = koszul_complex(f, &class);
        Ok(DegreeComplex {
            kind,
            degree: x.to_vec(),
            space,
            class,
            complex,
        })
    }

    /// `(∧^• W_e ⊗ k, [e] ∧ ·)` for `e ∈ E_K` (internal coordinates).
    pub fn fiber_complex<F: Field>(&self, ideal: &MonoidIdeal, f: &F, e: &[BigInt], mode: ReductionMode) -> Result<DegreeComplex<F>, EtdError> {
        self.degree_complex(ideal, f, e, ComplexKind::Fiber, mode)
    }

    /// `(∧^• L_e ⊗ k, e ∧ ·)`.
    pub fn absolute_complex<F: Field>(&self, ideal: &MonoidIdeal, f: &F, e: &[BigInt], mode: ReductionMode) -> Result<DegreeComplex<F>, EtdError> {
        self.degree_complex(ideal, f, e, ComplexKind::Absolute, mode)
    }

    /// Checks `(W^m)_{e+q} = (W^m)_e` for `e ∈ E`, `q ∈ Q` on the window, so
    /// that multiplication by `z^q` identifies the summands.
    pub fn free_basis_report(&self, m: usize, window: u64) -> FreeBasisReport {
        let h = self.grading();
        let bound = BigInt::from(window);
        let base = self.q_window(window);
        let mut failures = Vec::new();
        let mut pairs = 0;
        for e in self.essential_elements(window) {
            let we = self.w_relative_internal(m, &e, Ring::Integers, ReductionMode::RelativeModule).expect("e ∈ P");
            for q in &base {
                let p = add_vec(&e, q);
                if h.eval(&p) > bound {
                    continue;
                }
                pairs += 1;
                let wp = self.w_relative_internal(m, &p, Ring::Integers, ReductionMode::RelativeModule).expect("p ∈ P");
                let dec = self.decompose_internal(&p).expect("p ∈ P");
                if wp.value != we.value || dec.e != e {
                    failures.push(FreeBasisFailure {
                        e: show(&self.p().to_ambient(&e)),
                        q: show(&self.p().to_ambient(q)),
                    });
                }
            }
        }
        FreeBasisReport {
            m,
            window,
            pairs_checked: pairs,
            pass: failures.is_empty(),
            failures,
        }
    }
}
