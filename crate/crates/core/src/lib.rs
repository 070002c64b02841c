//! Exact computations with toric monoid data: saturated monoids, free
//! extensions along a base monoid, their logarithmic forms and
//! Koszul-type complexes.

pub mod error;
pub mod lattice;
pub mod monoid;
pub mod etd;
pub mod forms;
pub mod basechange;
pub mod cartier;
pub mod degeneration;
pub mod simplex;
