//! Exact linear algebra over ℤ, ℚ and 𝔽ₚ.

pub mod field;
pub mod int;
pub mod koszul;
pub mod normal_form;
pub mod sublattice;
pub mod subspace;
pub mod wedge;

pub use field::{Field, PrimeField, Rationals};
pub use int::{IntMatrix, IntVector};
pub use koszul::{koszul_cohomology, koszul_complex, CochainComplex};
pub use normal_form::{hermite_rows, smith_normal_form, SmithForm};
pub use sublattice::{intersect_mod_p, obstruction_primes, Sublattice};
pub use subspace::{FpSubspace, Subspace};
pub use wedge::{compound_matrix, subsets, wedge_of, WedgeSpace};
