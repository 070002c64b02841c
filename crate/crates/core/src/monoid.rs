//! Sharp toric monoids presented by generators, with their facets, face
//! lattice, localizations and gradings.
//!
//! All computations happen in internal coordinates: the canonical basis
//! of `P^gp ⊂ ℤⁿ` identifies `P^gp` with `ℤʳ`. When the generators span
//! `ℤⁿ` the two coordinate systems agree.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{show, MonoidError};
use crate::lattice::field::{solve_row_combination, Field, Rationals};
use crate::lattice::int::{add_vec, dot, is_zero_vec, primitive, sub_vec, zero_vec, IntMatrix, IntVector};
use crate::lattice::normal_form::smith_normal_form;
use crate::lattice::sublattice::{Splitting, Sublattice};
use crate::lattice::wedge::subsets;

pub type FaceId = usize;

/// A facet: the primitive inward normal (internal coordinates) and the
/// generators it vanishes on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub normal: IntVector,
    pub generators: Vec<usize>,
}

/// A face, identified by the set of facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Bit `j` set iff facet `j` contains the face.
    pub facets: u64,
    pub generators: Vec<usize>,
    pub rank: usize,
}

impl Face {
    pub fn facet_indices(&self) -> Vec<usize> {
        (0..64).filter(|j| self.facets >> j & 1 == 1).collect()
    }
}

/// A linear form strictly positive on `P \ {0}`, in internal coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalGrading {
    form: IntVector,
}

impl LocalGrading {
    pub(crate) fn from_form(form: IntVector) -> Self {
        LocalGrading { form }
    }

    pub fn form(&self) -> &[BigInt] {
        &self.form
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        dot(&self.form, x)
    }
}

#[derive(Clone, Debug)]
pub struct ToricMonoid {
    ambient: usize,
    generators: Vec<IntVector>,
    group: Sublattice,
    internal: Vec<IntVector>,
    facets: Vec<Facet>,
    faces: Vec<Face>,
    face_index: HashMap<u64, FaceId>,
    grading: LocalGrading,
}

/// `P_F = P + (−F)` split as `F^gp × P̄_F`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub face: FaceId,
    /// Generators of `P_F` in internal coordinates.
    pub generators: Vec<IntVector>,
    pub face_group: Sublattice,
    pub splitting: Splitting,
    /// The sharp quotient `P̄_F ⊂ ℤ^{r−k}`.
    pub sharp_part: ToricMonoid,
}

impl ToricMonoid {
    pub fn from_generators(n: usize, gens: &[IntVector]) -> Result<Self, MonoidError> {
        if gens.is_empty() {
            return Err(MonoidError::EmptyGenerators);
        }
        for (index, g) in gens.iter().enumerate() {
            if g.len() != n {
                return Err(MonoidError::DimensionMismatch {
                    index,
                    expected: n,
                    found: g.len(),
                });
            }
        }
        let group = Sublattice::from_generators(n, gens);
        let internal: Vec<IntVector> = gens
            .iter()
            .map(|g| group.coordinates(g).expect("generator lies in the group it spans"))
            .collect();
        let r = group.rank();
        let facets = compute_facets(r, &internal)?;
        if facets.len() > 63 {
            return Err(MonoidError::TooManyFacets(facets.len()));
        }
        let grading = LocalGrading {
            form: facets.iter().fold(zero_vec(r), |acc, f| add_vec(&acc, &f.normal)),
        };
        let faces = compute_faces(r, &internal, &facets);
        let face_index = faces.iter().enumerate().map(|(i, f)| (f.facets, i)).collect();
        let monoid = ToricMonoid {
            ambient: n,
            generators: gens.to_vec(),
            group,
            internal,
            facets,
            faces,
            face_index,
            grading,
        };
        monoid.check_saturated()?;
        Ok(monoid)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    /// Rank of `P^gp`.
    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn internal_generators(&self) -> &[IntVector] {
        &self.internal
    }

    pub fn group(&self) -> &Sublattice {
        &self.group
    }

    pub fn to_internal(&self, v: &[BigInt]) -> Option<IntVector> {
        if v.len() != self.ambient {
            return None;
        }
        self.group.coordinates(v)
    }

    pub fn to_ambient(&self, x: &[BigInt]) -> IntVector {
        if self.rank() == 0 {
            return zero_vec(self.ambient);
        }
        self.group.basis_matrix().apply_row(x)
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn face_by_mask(&self, mask: u64) -> Option<FaceId> {
        self.face_index.get(&mask).copied()
    }

    /// The face `P` itself.
    pub fn full_face(&self) -> FaceId {
        self.face_index[&0]
    }

    /// The face `{0}`.
    pub fn zero_face(&self) -> FaceId {
        let all = if self.facets.is_empty() { 0 } else { (1u64 << self.facets.len()) - 1 };
        self.face_index[&all]
    }

    pub fn facet_face(&self, j: usize) -> FaceId {
        self.face_index[&(1u64 << j)]
    }

    pub fn default_grading(&self) -> &LocalGrading {
        &self.grading
    }

    /// Restricts an ambient linear form to `P^gp`; it must be positive on
    /// every nonzero generator.
    pub fn grading_from_ambient(&self, mu: &[BigInt]) -> Result<LocalGrading, MonoidError> {
        if mu.len() != self.ambient {
            return Err(MonoidError::DimensionMismatch {
                index: 0,
                expected: self.ambient,
                found: mu.len(),
            });
        }
        let form: IntVector = self.group.basis().iter().map(|b| dot(b, mu)).collect();
        let h = LocalGrading { form };
        for (i, g) in self.internal.iter().enumerate() {
            if !is_zero_vec(g) && !h.eval(g).is_positive() {
                return Err(MonoidError::BadGrading(i));
            }
        }
        Ok(h)
    }

    fn in_cone(&self, x: &[BigInt]) -> bool {
        self.facets.iter().all(|f| !dot(&f.normal, x).is_negative())
    }

    /// Membership for internal coordinates. Exact: the monoid is certified
    /// saturated at construction.
    pub fn contains_internal(&self, x: &[BigInt]) -> bool {
        x.len() == self.rank() && self.in_cone(x)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.to_internal(v).is_some_and(|x| self.in_cone(&x))
    }

    fn vanishing_mask(&self, x: &[BigInt]) -> u64 {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| dot(&f.normal, x).is_zero())
            .fold(0, |m, (j, _)| m | 1 << j)
    }

    /// Smallest face containing `x` (internal coordinates).
    pub fn face_of_internal(&self, x: &[BigInt]) -> Result<FaceId, MonoidError> {
        if !self.contains_internal(x) {
            return Err(MonoidError::NotAnElement(show(x)));
        }
        Ok(self.face_index[&self.vanishing_mask(x)])
    }

    pub fn face_generated_by(&self, v: &[BigInt]) -> Result<FaceId, MonoidError> {
        let x = self.to_internal(v).ok_or_else(|| MonoidError::NotAnElement(show(v)))?;
        self.face_of_internal(&x)
    }

    pub fn face_contains(&self, face: FaceId, x: &[BigInt]) -> bool {
        let mask = self.faces[face].facets;
        self.contains_internal(x) && self.vanishing_mask(x) & mask == mask
    }

    /// `a ⊆ b`.
    pub fn is_subface(&self, a: FaceId, b: FaceId) -> bool {
        let (ma, mb) = (self.faces[a].facets, self.faces[b].facets);
        ma & mb == mb
    }

    /// Smallest face containing both.
    pub fn join(&self, a: FaceId, b: FaceId) -> FaceId {
        self.face_index[&(self.faces[a].facets & self.faces[b].facets)]
    }

    pub fn meet(&self, a: FaceId, b: FaceId) -> FaceId {
        let gens: Vec<usize> = self.faces[a]
            .generators
            .iter()
            .filter(|g| self.faces[b].generators.contains(g))
            .copied()
            .collect();
        self.face_index[&closure_mask(&self.facets, &gens)]
    }

    pub fn face_generators_internal(&self, face: FaceId) -> Vec<IntVector> {
        self.faces[face].generators.iter().map(|&i| self.internal[i].clone()).collect()
    }

    /// `F^gp ⊂ ℤʳ`.
    pub fn face_group(&self, face: FaceId) -> Sublattice {
        Sublattice::from_generators(self.rank(), &self.face_generators_internal(face))
    }

    /// Sum of the generators of the face; its smallest face is the face itself.
    pub fn interior_point(&self, face: FaceId) -> IntVector {
        self.face_generators_internal(face)
            .iter()
            .fold(zero_vec(self.rank()), |acc, g| add_vec(&acc, g))
    }

    /// All `x ∈ P` with `h(x) ≤ bound`, sorted by degree then coordinates.
    pub fn enumerate_up_to(&self, h: &LocalGrading, bound: u64) -> Vec<IntVector> {
        let bound = BigInt::from(bound);
        let gens: Vec<&IntVector> = self.internal.iter().filter(|g| !is_zero_vec(g)).collect();
        let start = zero_vec(self.rank());
        let mut seen: HashSet<IntVector> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = add_vec(&x, g);
                if h.eval(&y) <= bound && !seen.contains(&y) {
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<IntVector> = seen.into_iter().collect();
        out.sort_by(|a, b| h.eval(a).cmp(&h.eval(b)).then_with(|| a.cmp(b)));
        out
    }

    pub fn localize(&self, face: FaceId) -> Result<Localization, MonoidError> {
        if face >= self.faces.len() {
            return Err(MonoidError::NotAFace);
        }
        let face_group = self.face_group(face);
        let splitting = face_group.splitting().expect("face groups are saturated");
        let mut generators = self.internal.clone();
        generators.extend(self.face_generators_internal(face).iter().map(|g| g.iter().map(|x| -x).collect()));
        let images: Vec<IntVector> = self.internal.iter().map(|g| splitting.project(g)).collect();
        let sharp_part = ToricMonoid::from_generators(splitting.quotient_rank(), &images)?;
        Ok(Localization {
            face,
            generators,
            face_group,
            splitting,
            sharp_part,
        })
    }

    /// Every lattice point of the cone is a sum of generators iff the
    /// primitive ray vectors and all lattice points of the half-open
    /// parallelepipeds spanned by independent ray vectors are.
    fn check_saturated(&self) -> Result<(), MonoidError> {
        let r = self.rank();
        if r == 0 {
            return Ok(());
        }
        let rays: Vec<IntVector> = self
            .faces
            .iter()
            .filter(|f| f.rank == 1)
            .map(|f| {
                let g = f.generators.iter().map(|&i| &self.internal[i]).find(|g| !is_zero_vec(g));
                primitive(g.expect("a ray has a nonzero generator"))
            })
            .collect();
        let mut checker = GeneratedChecker {
            monoid: self,
            memo: HashMap::new(),
        };
        for ray in &rays {
            if !checker.generated(ray) {
                return Err(self.not_saturated(ray));
            }
        }
        for subset in subsets(rays.len(), r) {
            let basis: Vec<IntVector> = subset.iter().map(|&i| rays[i].clone()).collect();
            let mat = IntMatrix::from_rows(&basis, r);
            if mat.determinant().is_zero() {
                continue;
            }
            for x in parallelepiped_points(&mat) {
                if !checker.generated(&x) {
                    return Err(self.not_saturated(&x));
                }
            }
        }
        Ok(())
    }

    fn not_saturated(&self, x: &[BigInt]) -> MonoidError {
        MonoidError::NotSaturatedMonoid {
            witness: show(&self.to_ambient(x)),
        }
    }
}

struct GeneratedChecker<'a> {
    monoid: &'a ToricMonoid,
    memo: HashMap<IntVector, bool>,
}

impl GeneratedChecker<'_> {
    fn generated(&mut self, x: &IntVector) -> bool {
        if is_zero_vec(x) {
            return true;
        }
        if let Some(&b) = self.memo.get(x) {
            return b;
        }
        let mut found = false;
        for g in &self.monoid.internal {
            if is_zero_vec(g) {
                continue;
            }
            let y = sub_vec(x, g);
            if self.monoid.in_cone(&y) && self.generated(&y) {
                found = true;
                break;
            }
        }
        self.memo.insert(x.clone(), found);
        found
    }
}

/// Lattice points `Σ λᵢ vᵢ` with `0 ≤ λᵢ < 1`, for the rows `vᵢ` of a
/// nonsingular square matrix.
fn parallelepiped_points(rows: &IntMatrix) -> Vec<IntVector> {
    let r = rows.rows();
    let snf = smith_normal_form(rows);
    let w_inv = snf.right.inverse_unimodular().expect("unimodular");
    let divisors: Vec<BigInt> = (0..r).map(|i| snf.diagonal[(i, i)].clone()).collect();
    let q = Rationals;
    let basis: Vec<_> = rows.row_vecs().iter().map(|v| q.map_vec(v)).collect();
    let mut out = Vec::new();
    let mut y = zero_vec(r);
    loop {
        let x = w_inv.apply_row(&y);
        let lambda = solve_row_combination(&q, &basis, &q.map_vec(&x)).expect("nonsingular");
        let mut p = x;
        for (l, v) in lambda.iter().zip(rows.row_vecs()) {
            let fl = l.floor().to_integer();
            if !fl.is_zero() {
                p = sub_vec(&p, &v.iter().map(|c| c * &fl).collect::<Vec<_>>());
            }
        }
        out.push(p);
        // odometer over ∏ [0, dᵢ)
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            y[i] += 1;
            if y[i] < divisors[i] {
                break;
            }
            y[i] = BigInt::zero();
            i += 1;
        }
    }
}

fn compute_facets(r: usize, internal: &[IntVector]) -> Result<Vec<Facet>, MonoidError> {
    if r == 0 {
        return Ok(Vec::new());
    }
    let nonzero: Vec<usize> = (0..internal.len()).filter(|&i| !is_zero_vec(&internal[i])).collect();
    let mut normals: BTreeSet<IntVector> = BTreeSet::new();
    for subset in subsets(nonzero.len(), r - 1) {
        let rows: Vec<IntVector> = subset.iter().map(|&i| internal[nonzero[i]].clone()).collect();
        let kernel = Sublattice::right_kernel(&IntMatrix::from_rows(&rows, r));
        if kernel.rank() != 1 {
            continue;
        }
        let mut n = kernel.basis()[0].clone();
        let signs: Vec<BigInt> = nonzero.iter().map(|&i| dot(&n, &internal[i])).collect();
        if signs.iter().all(|s| !s.is_negative()) {
        } else if signs.iter().all(|s| !s.is_positive()) {
            n = n.iter().map(|x| -x).collect();
        } else {
            continue;
        }
        normals.insert(n);
    }
    let facets: Vec<Facet> = normals
        .into_iter()
        .map(|normal| Facet {
            generators: (0..internal.len()).filter(|&i| dot(&normal, &internal[i]).is_zero()).collect(),
            normal,
        })
        .collect();
    let normal_span = Sublattice::from_generators(r, &facets.iter().map(|f| f.normal.clone()).collect::<Vec<_>>());
    if normal_span.rank() < r {
        return Err(MonoidError::NotSharp);
    }
    Ok(facets)
}

fn closure_mask(facets: &[Facet], gens: &[usize]) -> u64 {
    facets
        .iter()
        .enumerate()
        .filter(|(_, f)| gens.iter().all(|g| f.generators.contains(g)))
        .fold(0, |m, (j, _)| m | 1 << j)
}

fn compute_faces(r: usize, internal: &[IntVector], facets: &[Facet]) -> Vec<Face> {
    let all: Vec<usize> = (0..internal.len()).collect();
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    let start = closure_mask(facets, &all);
    seen.insert(start, all);
    let mut queue = VecDeque::from([start]);
    while let Some(mask) = queue.pop_front() {
        let gens = seen[&mask].clone();
        for (j, f) in facets.iter().enumerate() {
            if mask >> j & 1 == 1 {
                continue;
            }
            let sub: Vec<usize> = gens.iter().filter(|g| f.generators.contains(g)).copied().collect();
            let m = closure_mask(facets, &sub);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(m) {
                e.insert(sub);
                queue.push_back(m);
            }
        }
    }
    let mut faces: Vec<Face> = seen
        .into_iter()
        .map(|(facets, generators)| {
            let vecs: Vec<IntVector> = generators.iter().map(|&i| internal[i].clone()).collect();
            Face {
                facets,
                rank: Sublattice::from_generators(r, &vecs).rank(),
                generators,
            }
        })
        .collect();
    faces.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.generators.cmp(&b.generators)));
    faces
}

/// `⌈a / b⌉` for `b > 0`.
pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int::int_vec;

    fn monoid(n: usize, gens: &[&[i64]]) -> Result<ToricMonoid, MonoidError> {
        ToricMonoid::from_generators(n, &gens.iter().map(|g| int_vec(g)).collect::<Vec<_>>())
    }

    fn bacha() -> ToricMonoid {
        monoid(2, &[&[1, 0], &[1, 1], &[1, 2]]).unwrap()
    }

    fn xytw() -> ToricMonoid {
        monoid(3, &[&[1, 0, 0], &[0, 1, 1], &[1, 0, 1], &[0, 1, 0]]).unwrap()
    }

    #[test]
    fn quadrant() {
        let p = monoid(2, &[&[1, 0], &[0, 1]]).unwrap();
        let normals: Vec<IntVector> = p.facets().iter().map(|f| f.normal.clone()).collect();
        assert_eq!(normals, vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
        assert_eq!(p.faces().len(), 4);
    }

    #[test]
    fn bacha_facets() {
        let p = bacha();
        let spans: Vec<Vec<usize>> = p.facets().iter().map(|f| f.generators.clone()).collect();
        assert_eq!(spans.len(), 2);
        assert!(spans.contains(&vec![0]) && spans.contains(&vec![2]));
        assert_eq!(p.faces().len(), 4);
    }

    #[test]
    fn line_is_not_sharp() {
        assert_eq!(monoid(2, &[&[1, 0], &[-1, 0]]).unwrap_err(), MonoidError::NotSharp);
        assert_eq!(monoid(2, &[&[1, 0], &[-1, 0], &[0, 1]]).unwrap_err(), MonoidError::NotSharp);
    }

    #[test]
    fn missing_lattice_point_detected() {
        // spans ℤ², but (1,1) is missing
        assert!(matches!(
            monoid(2, &[&[1, 0], &[1, 2], &[1, 3]]),
            Err(MonoidError::NotSaturatedMonoid { .. })
        ));
        assert!(matches!(monoid(1, &[&[2], &[3]]), Err(MonoidError::NotSaturatedMonoid { .. })));
    }

    #[test]
    fn non_spanning_generators_use_internal_coordinates() {
        let p = monoid(3, &[&[2, 0, 0], &[0, 2, 0]]).unwrap();
        assert_eq!(p.rank(), 2);
        assert!(p.contains(&int_vec(&[2, 4, 0])));
        assert!(!p.contains(&int_vec(&[1, 0, 0])));
        assert!(!p.contains(&int_vec(&[0, 0, 1])));
    }

    #[test]
    fn xytw_face_count() {
        assert_eq!(xytw().faces().len(), 10);
    }

    #[test]
    fn faces_generated_by_elements() {
        let n2 = monoid(2, &[&[1, 0], &[0, 1]]).unwrap();
        let f = n2.face_generated_by(&int_vec(&[2, 0])).unwrap();
        assert_eq!(n2.face(f).generators, vec![0]);
        assert_eq!(n2.face_generated_by(&int_vec(&[1, 1])).unwrap(), n2.full_face());
        assert!(n2.face_generated_by(&int_vec(&[-1, 0])).is_err());
        let p = xytw();
        let f = p.face_generated_by(&int_vec(&[1, 0, 1])).unwrap();
        assert_eq!(p.face(f).generators, vec![2]);
        assert_eq!(p.face(f).rank, 1);
    }

    #[test]
    fn enumeration_counts() {
        let n2 = monoid(2, &[&[1, 0], &[0, 1]]).unwrap();
        let h = n2.grading_from_ambient(&int_vec(&[1, 1])).unwrap();
        assert_eq!(n2.enumerate_up_to(&h, 2).len(), 6);
        assert_eq!(n2.enumerate_up_to(&h, 0), vec![int_vec(&[0, 0])]);
        let b = bacha();
        let h = b.grading_from_ambient(&int_vec(&[1, 0])).unwrap();
        let pts = b.enumerate_up_to(&h, 2);
        assert_eq!(pts.len(), 9);
        assert!(pts.contains(&int_vec(&[2, 4])));
        assert!(b.grading_from_ambient(&int_vec(&[0, 1])).is_err());
    }

    #[test]
    fn localizations() {
        let n2 = monoid(2, &[&[1, 0], &[0, 1]]).unwrap();
        let e1 = n2.face_generated_by(&int_vec(&[1, 0])).unwrap();
        let loc = n2.localize(e1).unwrap();
        assert_eq!(loc.face_group.rank(), 1);
        assert_eq!(loc.sharp_part.rank(), 1);
        let full = n2.localize(n2.full_face()).unwrap();
        assert_eq!(full.face_group, Sublattice::full(2));
        assert_eq!(full.sharp_part.rank(), 0);
        let p = xytw();
        let x = p.face_generated_by(&int_vec(&[1, 0, 0])).unwrap();
        let loc = p.localize(x).unwrap();
        assert_eq!(loc.sharp_part.rank(), 2);
        assert!(p.localize(99).is_err());
    }

    #[test]
    fn join_and_meet() {
        let p = xytw();
        let x = p.face_generated_by(&int_vec(&[1, 0, 0])).unwrap();
        let w = p.face_generated_by(&int_vec(&[0, 1, 0])).unwrap();
        let xw = p.join(x, w);
        assert_eq!(xw, p.face_generated_by(&int_vec(&[1, 1, 0])).unwrap());
        assert_eq!(p.meet(x, w), p.zero_face());
        assert!(p.is_subface(x, xw));
        assert_eq!(p.interior_point(p.face_generated_by(&int_vec(&[0, 1, 1])).unwrap()), int_vec(&[0, 1, 1]));
    }
}
