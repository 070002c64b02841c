//! Finite cochain complexes of vector spaces and Koszul complexes.

use super::field::{rank, Field};
use super::int::binomial;
use super::subspace::Subspace;
use super::wedge::wedge_with_vector;
use crate::error::LatticeError;

/// `C⁰ → C¹ → …` with `maps[k] : Cᵏ → Cᵏ⁺¹` stored as `dims[k+1] × dims[k]` rows.
#[derive(Clone, Debug)]
pub struct CochainComplex<F: Field> {
    field: F,
    dims: Vec<usize>,
    maps: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> CochainComplex<F> {
    pub fn new(field: &F, dims: Vec<usize>, maps: Vec<Vec<Vec<F::Elem>>>) -> Self {
        assert_eq!(maps.len() + 1, dims.len().max(1));
        for (k, m) in maps.iter().enumerate() {
            assert_eq!(m.len(), dims[k + 1], "map {k} has wrong row count");
            assert!(m.iter().all(|r| r.len() == dims[k]), "map {k} has wrong column count");
        }
        CochainComplex {
            field: field.clone(),
            dims,
            maps,
        }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn map(&self, k: usize) -> &[Vec<F::Elem>] {
        &self.maps[k]
    }

    fn map_rank(&self, k: usize) -> usize {
        match self.maps.get(k) {
            Some(m) if !m.is_empty() && self.dims[k] > 0 => rank(&self.field, m, self.dims[k]),
            _ => 0,
        }
    }

    pub fn cohomology_dim(&self, k: usize) -> usize {
        if k >= self.dims.len() {
            return 0;
        }
        let incoming = if k == 0 { 0 } else { self.map_rank(k - 1) };
        self.dims[k] - self.map_rank(k) - incoming
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        (0..self.dims.len()).map(|k| self.cohomology_dim(k)).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_dims().iter().all(|&d| d == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// `d ∘ d = 0` at every spot.
    pub fn check_d_squared(&self) -> bool {
        let f = &self.field;
        self.maps.windows(2).enumerate().all(|(k, w)| {
            let (a, b) = (&w[0], &w[1]);
            (0..self.dims[k + 2]).all(|i| {
                (0..self.dims[k]).all(|j| {
                    let s = (0..self.dims[k + 1]).fold(f.zero(), |acc, l| f.add(&acc, &f.mul(&b[i][l], &a[l][j])));
                    f.is_zero(&s)
                })
            })
        })
    }
}

/// `∧⁰ Fʳ → ∧¹ Fʳ → … → ∧ʳ Fʳ`, each map `w ↦ v ∧ w`.
pub fn koszul_complex<F: Field>(f: &F, v: &[F::Elem]) -> CochainComplex<F> {
    let r = v.len();
    let dims: Vec<usize> = (0..=r).map(|k| binomial(r, k)).collect();
    let maps = (0..r).map(|k| wedge_with_vector(f, v, k)).collect();
    CochainComplex::new(f, dims, maps)
}

/// `Hᵐ` of the Koszul complex of `v` on `∧^• V`, with `v ∈ V`.
pub fn koszul_cohomology<F: Field>(space: &Subspace<F>, v: &[F::Elem], m: usize) -> Result<usize, LatticeError> {
    let coords = space.coordinates(v).ok_or(LatticeError::NotInSpace)?;
    Ok(koszul_complex(space.field(), &coords).cohomology_dim(m))
}
