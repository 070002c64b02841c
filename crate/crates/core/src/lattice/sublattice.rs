//! Sublattices of ℤⁿ in canonical (row Hermite) form.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::field::{Field, PrimeField};
use super::int::{binomial, prime_factors, IntMatrix, IntVector};
use super::normal_form::{echelon_rank, hermite_rows, smith_normal_form};
use super::subspace::Subspace;
use super::wedge::WedgeSpace;
use crate::error::LatticeError;

/// A subgroup of ℤⁿ. The basis is the nonzero part of the row Hermite
/// normal form, so `==` is equality of subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sublattice {
    ambient: usize,
    basis: Vec<IntVector>,
}

impl Sublattice {
    pub fn from_generators(ambient: usize, gens: &[IntVector]) -> Self {
        for g in gens {
            assert_eq!(g.len(), ambient, "generator length differs from ambient rank");
        }
        if gens.is_empty() {
            return Self::zero(ambient);
        }
        let (h, _) = hermite_rows(&IntMatrix::from_rows(gens, ambient));
        let r = echelon_rank(&h);
        Sublattice {
            ambient,
            basis: (0..r).map(|i| h.row(i).to_vec()).collect(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_generators(ambient, &IntMatrix::identity(ambient).row_vecs())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.basis, self.ambient)
    }

    /// Integer coordinates of `v` in the canonical basis, if `v` lies in
    /// the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<IntVector> {
        assert_eq!(v.len(), self.ambient);
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for row in &self.basis {
            let c = row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            let (q, r) = rest[c].div_rem(&row[c]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, y) in rest.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    fn same_ambient(&self, other: &Sublattice) -> Result<(), LatticeError> {
        if self.ambient != other.ambient {
            return Err(LatticeError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Sublattice) -> Result<Sublattice, LatticeError> {
        self.same_ambient(other)?;
        let gens: Vec<IntVector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::from_generators(self.ambient, &gens))
    }

    pub fn intersect(&self, other: &Sublattice) -> Result<Sublattice, LatticeError> {
        self.same_ambient(other)?;
        if self.rank() == 0 || other.rank() == 0 {
            return Ok(Self::zero(self.ambient));
        }
        // x·A = y·B  ⇔  (x, y)·[A; −B] = 0
        let a = self.rank();
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().map(|b| b.iter().map(|x| -x).collect()));
        let kernel = Self::left_kernel(&IntMatrix::from_rows(&rows, self.ambient));
        let a_mat = self.basis_matrix();
        let gens: Vec<IntVector> = kernel
            .basis
            .iter()
            .map(|k| a_mat.apply_row(&k[..a]))
            .collect();
        Ok(Self::from_generators(self.ambient, &gens))
    }

    /// `{x : x·M = 0}` for an integer matrix `M` with `M.rows()` rows.
    pub fn left_kernel(m: &IntMatrix) -> Sublattice {
        let (h, u) = hermite_rows(m);
        let r = echelon_rank(&h);
        let gens: Vec<IntVector> = (r..m.rows()).map(|i| u.row(i).to_vec()).collect();
        Self::from_generators(m.rows(), &gens)
    }

    /// `{x : M·x = 0}`.
    pub fn right_kernel(m: &IntMatrix) -> Sublattice {
        Self::left_kernel(&m.transpose())
    }

    /// `(ℚ ⊗ L) ∩ ℤⁿ`.
    pub fn saturate(&self) -> Sublattice {
        if self.rank() == 0 || self.rank() == self.ambient {
            return if self.rank() == 0 {
                self.clone()
            } else {
                Self::full(self.ambient)
            };
        }
        let perp = Self::right_kernel(&self.basis_matrix());
        Self::right_kernel(&perp.basis_matrix())
    }

    pub fn is_saturated(&self) -> bool {
        self.elementary_divisors().iter().all(One::is_one)
    }

    /// Invariant factors of the basis matrix.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        if self.rank() == 0 {
            return Vec::new();
        }
        smith_normal_form(&self.basis_matrix()).invariant_factors()
    }

    /// `[sat(L) : L]`.
    pub fn index_in_saturation(&self) -> BigInt {
        self.elementary_divisors().iter().product()
    }

    /// Image under `x ↦ x·M`.
    pub fn image(&self, m: &IntMatrix) -> Sublattice {
        assert_eq!(m.rows(), self.ambient);
        let gens: Vec<IntVector> = self.basis.iter().map(|b| m.apply_row(b)).collect();
        Self::from_generators(m.cols(), &gens)
    }

    /// Span of the reduced basis in `Fⁿ`, i.e. the image of `L ⊗ F → Fⁿ`.
    pub fn to_subspace<F: Field>(&self, f: &F) -> Subspace<F> {
        let vecs: Vec<Vec<F::Elem>> = self.basis.iter().map(|b| f.map_vec(b)).collect();
        Subspace::from_vectors(f, self.ambient, &vecs)
    }

    pub fn reduce_mod_p(&self, p: u64) -> Result<Subspace<PrimeField>, LatticeError> {
        Ok(self.to_subspace(&PrimeField::new(p)?))
    }

    /// `∧^m L ⊂ ∧^m ℤⁿ`.
    pub fn wedge_power(&self, m: usize) -> Sublattice {
        if m == 0 {
            return Self::full(1);
        }
        WedgeSpace::of_lattice(self, m).as_sublattice()
    }

    /// Dimension of the image of `L` in `𝔽ₚⁿ`, from the elementary divisors.
    pub fn dim_mod_p(&self, p: &BigInt) -> usize {
        self.rank() - self.elementary_divisors().iter().filter(|d| (*d % p).is_zero()).count()
    }
}

/// A unimodular change of coordinates `x ↦ x·W` carrying a saturated
/// sublattice of rank `k` onto the first `k` coordinate axes. The last
/// `n − k` coordinates give the quotient map to `ℤⁿ / L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    forward: IntMatrix,
    inverse: IntMatrix,
    k: usize,
}

impl Splitting {
    pub fn sub_rank(&self) -> usize {
        self.k
    }

    pub fn quotient_rank(&self) -> usize {
        self.forward.cols() - self.k
    }

    /// Image of `x` in `ℤⁿ / L ≅ ℤ^{n−k}`.
    pub fn project(&self, x: &[BigInt]) -> IntVector {
        self.forward.apply_row(x)[self.k..].to_vec()
    }

    /// Coordinates of the `L`-component of `x`.
    pub fn sub_coordinates(&self, x: &[BigInt]) -> IntVector {
        self.forward.apply_row(x)[..self.k].to_vec()
    }

    /// The lift `(0, y)·W⁻¹` of a quotient vector.
    pub fn section(&self, y: &[BigInt]) -> IntVector {
        let mut full = vec![BigInt::zero(); self.k];
        full.extend_from_slice(y);
        self.inverse.apply_row(&full)
    }

    /// `n × (n−k)` matrix of the projection for row vectors.
    pub fn projection_matrix(&self) -> IntMatrix {
        self.forward.column_block(self.k, self.forward.cols())
    }

    /// `(n−k) × n` matrix of the section.
    pub fn section_matrix(&self) -> IntMatrix {
        self.inverse.row_block(self.k, self.inverse.rows())
    }

    /// Another splitting of the same sublattice, differing in both the
    /// complement and the quotient basis.
    pub fn twisted(&self) -> Splitting {
        let n = self.forward.rows();
        let mut t = IntMatrix::identity(n);
        for i in self.k..n {
            for j in 0..n {
                if j < self.k || j > i {
                    t[(i, j)] = BigInt::one();
                }
            }
        }
        let t_inv = t.inverse_unimodular().expect("triangular with unit diagonal");
        Splitting {
            forward: self.forward.mul(&t),
            inverse: t_inv.mul(&self.inverse),
            k: self.k,
        }
    }
}

impl Sublattice {
    /// `None` unless the lattice is saturated.
    pub fn splitting(&self) -> Option<Splitting> {
        let n = self.ambient;
        if self.rank() == 0 {
            return Some(Splitting {
                forward: IntMatrix::identity(n),
                inverse: IntMatrix::identity(n),
                k: 0,
            });
        }
        let snf = smith_normal_form(&self.basis_matrix());
        if !snf.invariant_factors().iter().all(One::is_one) {
            return None;
        }
        let inverse = snf.right.inverse_unimodular()?;
        Some(Splitting {
            forward: snf.right,
            inverse,
            k: self.rank(),
        })
    }
}

/// `(A ⊗ 𝔽ₚ) ∩ (B ⊗ 𝔽ₚ)` inside `𝔽ₚⁿ`.
pub fn intersect_mod_p(a: &Sublattice, b: &Sublattice, p: u64) -> Result<Subspace<PrimeField>, LatticeError> {
    a.same_ambient(b)?;
    let f = PrimeField::new(p)?;
    Ok(a.to_subspace(&f).intersect(&b.to_subspace(&f)))
}

/// Primes `p` with `dim((A⊗𝔽ₚ) ∩ (B⊗𝔽ₚ)) > rank(A ∩ B)`.
///
/// With `e_p(L)` the number of invariant factors of `L` divisible by `p`,
/// the excess dimension at `p` is `e_p(A+B) − e_p(A) − e_p(B)`; only primes
/// dividing some invariant factor can contribute. For saturated `A`, `B`
/// this is the set of primes dividing the invariant factors of `A + B`.
pub fn obstruction_primes(a: &Sublattice, b: &Sublattice) -> Result<BTreeSet<u64>, LatticeError> {
    let sum = a.sum(b)?;
    let (ea, eb, es) = (a.elementary_divisors(), b.elementary_divisors(), sum.elementary_divisors());
    let mut candidates = BTreeSet::new();
    for d in ea.iter().chain(&eb).chain(&es) {
        if d.is_one() {
            continue;
        }
        candidates.extend(prime_factors(d));
    }
    let mult = |divs: &[BigInt], p: &BigInt| divs.iter().filter(|d| (*d % p).is_zero()).count() as i64;
    let mut out = BTreeSet::new();
    for p in candidates {
        if mult(&es, &p) - mult(&ea, &p) - mult(&eb, &p) > 0 {
            let small = p.to_u64().ok_or_else(|| LatticeError::PrimeTooLarge(p.to_string()))?;
            out.insert(small);
        }
    }
    Ok(out)
}

/// Rank of `∧^m` of a lattice of rank `r`.
pub fn wedge_rank(r: usize, m: usize) -> usize {
    binomial(r, m)
}
