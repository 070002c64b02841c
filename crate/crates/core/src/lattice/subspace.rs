//! Subspaces of Fⁿ in reduced row echelon form.

use super::field::{rank, right_kernel, rref, solve_row_combination, Field, PrimeField};
use super::wedge::{subsets, wedge_product};
use super::int::binomial;

/// A subspace of `Fⁿ`; the basis is the RREF, so `==` is equality of subspaces.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    basis: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

pub type FpSubspace = Subspace<PrimeField>;

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

impl<F: Field> Eq for Subspace<F> {}

impl<F: Field> Subspace<F> {
    pub fn from_vectors(field: &F, ambient: usize, vecs: &[Vec<F::Elem>]) -> Self {
        for v in vecs {
            assert_eq!(v.len(), ambient, "vector length differs from ambient dimension");
        }
        let (basis, pivots) = rref(field, vecs, ambient);
        Subspace {
            field: field.clone(),
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(field: &F, ambient: usize) -> Self {
        Self::from_vectors(field, ambient, &[])
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let id: Vec<Vec<F::Elem>> = (0..ambient)
            .map(|i| {
                let mut e = vec![field.zero(); ambient];
                e[i] = field.one();
                e
            })
            .collect();
        Self::from_vectors(field, ambient, &id)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.basis
    }

    /// Coordinates of `v` in the RREF basis.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let y: Vec<F::Elem> = self.pivots.iter().map(|&c| v[c].clone()).collect();
        let mut rest = v.to_vec();
        for (c, b) in y.iter().zip(&self.basis) {
            for (x, bx) in rest.iter_mut().zip(b) {
                *x = f.sub(x, &f.mul(c, bx));
            }
        }
        rest.iter().all(|x| f.is_zero(x)).then_some(y)
    }

    pub fn contains_elems(&self, v: &[F::Elem]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Membership for a vector given by small integers.
    pub fn contains(&self, v: &[i64]) -> bool {
        let w: Vec<F::Elem> = v.iter().map(|&x| self.field.from_i64(x)).collect();
        self.contains_elems(&w)
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|b| self.contains_elems(b))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let vs: Vec<Vec<F::Elem>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::from_vectors(&self.field, self.ambient, &vs)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let f = &self.field;
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(f, self.ambient);
        }
        // solve Σ xᵢaᵢ − Σ yⱼbⱼ = 0; columns are the basis vectors
        let a = self.dim();
        let cols = a + other.dim();
        let rows: Vec<Vec<F::Elem>> = (0..self.ambient)
            .map(|j| {
                self.basis
                    .iter()
                    .map(|v| v[j].clone())
                    .chain(other.basis.iter().map(|v| f.neg(&v[j])))
                    .collect()
            })
            .collect();
        let ker = right_kernel(f, &rows, cols);
        let vecs: Vec<Vec<F::Elem>> = ker.iter().map(|k| self.combine(&k[..a])).collect();
        Self::from_vectors(f, self.ambient, &vecs)
    }

    /// `Σ cᵢ bᵢ` over the basis.
    pub fn combine(&self, coeffs: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.ambient];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (x, bx) in out.iter_mut().zip(b) {
                *x = f.add(x, &f.mul(c, bx));
            }
        }
        out
    }

    /// Image under the linear map `x ↦ x·M` where `M` has `ambient` rows.
    pub fn image(&self, m: &[Vec<F::Elem>], target: usize) -> Self {
        let f = &self.field;
        let vecs: Vec<Vec<F::Elem>> = self
            .basis
            .iter()
            .map(|b| {
                (0..target)
                    .map(|j| {
                        b.iter()
                            .zip(m)
                            .fold(f.zero(), |acc, (x, row)| f.add(&acc, &f.mul(x, &row[j])))
                    })
                    .collect()
            })
            .collect();
        Self::from_vectors(f, target, &vecs)
    }

    /// `∧^m V ⊂ ∧^m Fⁿ`.
    pub fn wedge_power(&self, m: usize) -> Self {
        let f = &self.field;
        let n = self.ambient;
        if m == 0 {
            return Self::full(f, 1);
        }
        let vecs: Vec<Vec<F::Elem>> = subsets(self.dim(), m)
            .iter()
            .map(|s| {
                let mut acc = vec![f.one()];
                for (deg, &i) in s.iter().enumerate() {
                    acc = wedge_product(f, n, deg, &acc, 1, &self.basis[i]);
                }
                acc
            })
            .collect();
        Self::from_vectors(f, binomial(n, m), &vecs)
    }

    /// Expresses `v` as a combination of arbitrary spanning vectors.
    pub fn solve_in(field: &F, spanning: &[Vec<F::Elem>], v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        solve_row_combination(field, spanning, v)
    }

    pub fn rank_of(field: &F, rows: &[Vec<F::Elem>], cols: usize) -> usize {
        rank(field, rows, cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::field::Rationals;

    #[test]
    fn intersect_planes() {
        let q = Rationals;
        let e = |v: &[i64]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        let a = Subspace::from_vectors(&q, 3, &[e(&[1, 0, 0]), e(&[0, 1, 0])]);
        let b = Subspace::from_vectors(&q, 3, &[e(&[0, 1, 0]), e(&[0, 0, 1])]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[0, 5, 0]));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn wedge_of_plane() {
        let f = PrimeField::new(3).unwrap();
        let a = Subspace::from_vectors(&f, 3, &[vec![1, 0, 0], vec![0, 1, 1]]);
        let w = a.wedge_power(2);
        assert_eq!(w.dim(), 1);
        // e₀∧(e₁+e₂) = e₀₁ + e₀₂
        assert!(w.contains(&[1, 1, 0]));
    }
}
