//! Exact fields (ℚ and prime fields 𝔽ₚ) and dense linear algebra over them.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::int::is_prime_u64;
use crate::error::LatticeError;

/// A field with exact arithmetic. Elements are plain values; the field
/// object carries any context (such as the modulus).
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// 0 for ℚ.
    fn characteristic(&self) -> u64;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn map_vec(&self, v: &[BigInt]) -> Vec<Self::Elem> {
        v.iter().map(|x| self.from_int(x)).collect()
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// The prime field 𝔽ₚ. Products are formed in `u128`, so any `u64` prime works.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LatticeError> {
        if !is_prime_u64(p) {
            return Err(LatticeError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let m = self.p as u128;
        let mut acc: u128 = 1;
        let mut b = base as u128 % m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        acc as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

/// Reduced row echelon form of `rows` (each of length `cols`). Returns the
/// nonzero rows and their pivot columns.
pub fn rref<F: Field>(f: &F, rows: &[Vec<F::Elem>], cols: usize) -> (Vec<Vec<F::Elem>>, Vec<usize>) {
    let mut m: Vec<Vec<F::Elem>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(&m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..m.len() {
            if i == r || f.is_zero(&m[i][c]) {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..cols {
                let v = f.mul(&factor, &m[r][j]);
                m[i][j] = f.sub(&m[i][j], &v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, rows: &[Vec<F::Elem>], cols: usize) -> usize {
    rref(f, rows, cols).1.len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows of length `cols`.
pub fn right_kernel<F: Field>(f: &F, rows: &[Vec<F::Elem>], cols: usize) -> Vec<Vec<F::Elem>> {
    let (r, pivots) = rref(f, rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![f.zero(); cols];
            x[fc] = f.one();
            for (row, &pc) in r.iter().zip(&pivots) {
                x[pc] = f.neg(&row[fc]);
            }
            x
        })
        .collect()
}

/// Matrix–vector product `A x` with `A` given by rows.
pub fn mat_vec<F: Field>(f: &F, rows: &[Vec<F::Elem>], x: &[F::Elem]) -> Vec<F::Elem> {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
        })
        .collect()
}

/// Transpose of a row-list matrix with `cols` columns.
pub fn transpose<F: Field>(rows: &[Vec<F::Elem>], cols: usize) -> Vec<Vec<F::Elem>> {
    (0..cols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Solves `y · B = v` for `y`, where `B` is given by rows. Returns `None`
/// when `v` is not in the row space.
pub fn solve_row_combination<F: Field>(
    f: &F,
    basis: &[Vec<F::Elem>],
    v: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let n = v.len();
    let k = basis.len();
    // Augmented system: columns are basis vectors, solve B^T y = v.
    let aug: Vec<Vec<F::Elem>> = (0..n)
        .map(|j| {
            let mut row: Vec<F::Elem> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![f.zero(); k]);
    }
    let (r, pivots) = rref(f, &aug, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut y = vec![f.zero(); k];
    for (row, &pc) in r.iter().zip(&pivots) {
        y[pc] = row[k].clone();
    }
    Some(y)
}
