//! Lattice simplices: elementary (no lattice points besides the vertices)
//! and standard (edge vectors extend to a ℤ-basis).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::field::{solve_row_combination, Rationals};
use crate::lattice::int::{sub_vec, IntVector};
use crate::lattice::sublattice::Sublattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("simplex needs at least one vertex")]
    Empty,
    #[error("vertex {index} has length {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("vertices are not affinely independent")]
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexDatum {
    vertices: Vec<IntVector>,
}

impl SimplexDatum {
    pub fn new(vertices: Vec<IntVector>) -> Result<Self, SimplexError> {
        let n = vertices.first().ok_or(SimplexError::Empty)?.len();
        if let Some((index, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(SimplexError::DimensionMismatch { index, expected: n, found: v.len() });
        }
        let s = SimplexDatum { vertices };
        if s.edge_lattice().rank() + 1 != s.vertices.len() {
            return Err(SimplexError::Degenerate);
        }
        Ok(s)
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn ambient_rank(&self) -> usize {
        self.vertices[0].len()
    }

    fn edges(&self) -> Vec<IntVector> {
        self.vertices[1..].iter().map(|v| sub_vec(v, &self.vertices[0])).collect()
    }

    fn edge_lattice(&self) -> Sublattice {
        Sublattice::from_generators(self.ambient_rank(), &self.edges())
    }

    /// Barycentric membership test for a lattice point.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        let edges: Vec<Vec<BigRational>> = self
            .edges()
            .iter()
            .map(|e| e.iter().map(|c| BigRational::from_integer(c.clone())).collect())
            .collect();
        let y: Vec<BigRational> = sub_vec(x, &self.vertices[0]).into_iter().map(BigRational::from_integer).collect();
        if edges.is_empty() {
            return y.iter().all(Zero::is_zero);
        }
        match solve_row_combination(&Rationals, &edges, &y) {
            Some(l) => {
                !l.iter().any(Signed::is_negative)
                    && l.iter().fold(BigRational::zero(), |a, b| a + b) <= BigRational::from_integer(1.into())
            }
            None => false,
        }
    }

    /// All lattice points of the simplex, by enumerating its bounding box.
    pub fn lattice_points(&self) -> Vec<IntVector> {
        let n = self.ambient_rank();
        let lo: Vec<BigInt> = (0..n).map(|i| self.vertices.iter().map(|v| v[i].clone()).min().unwrap()).collect();
        let hi: Vec<BigInt> = (0..n).map(|i| self.vertices.iter().map(|v| v[i].clone()).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            if self.contains(&x) {
                out.push(x.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                if x[i] < hi[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = lo[i].clone();
                i += 1;
            }
        }
    }

    pub fn is_elementary(&self) -> bool {
        self.lattice_points().iter().all(|x| self.vertices.contains(x))
    }

    /// Edge vectors from the first vertex span a saturated sublattice.
    pub fn is_standard(&self) -> bool {
        self.edge_lattice().is_saturated()
    }
}
