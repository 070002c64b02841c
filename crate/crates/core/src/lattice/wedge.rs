//! Exterior powers: subset indexing, wedge products, compound matrices.

use std::collections::HashMap;

use serde::Serialize;

use super::field::Field;
use super::int::{binomial, IntMatrix, IntVector};
use super::sublattice::Sublattice;
use super::subspace::Subspace;

/// All `m`-subsets of `0..n` in lexicographic order; this is the basis
/// order of `∧^m` used throughout the crate.
pub fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, m));
    let mut cur = Vec::with_capacity(m);
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < m - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    rec(0, n, m, &mut cur, &mut out);
    out
}

pub fn subset_index(n: usize, m: usize) -> HashMap<Vec<usize>, usize> {
    subsets(n, m)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect()
}

/// Coordinates of `v₁ ∧ … ∧ v_m` in `∧^m ℤⁿ` (maximal minors).
pub fn wedge_of(vectors: &[IntVector], n: usize) -> IntVector {
    let m = vectors.len();
    let mat = IntMatrix::from_rows(vectors, n);
    let rows: Vec<usize> = (0..m).collect();
    subsets(n, m).iter().map(|s| mat.minor(&rows, s)).collect()
}

/// `∧^m M` for the row-vector map `x ↦ x·M`: entry `(S, T)` is the minor
/// of `M` on rows `S` and columns `T`.
pub fn compound_matrix(m: &IntMatrix, k: usize) -> IntMatrix {
    let rs = subsets(m.rows(), k);
    let cs = subsets(m.cols(), k);
    let mut out = IntMatrix::zeros(rs.len(), cs.len());
    for (i, s) in rs.iter().enumerate() {
        for (j, t) in cs.iter().enumerate() {
            out[(i, j)] = m.minor(s, t);
        }
    }
    out
}

fn insertion_sign(s: &[usize], i: usize) -> bool {
    s.iter().filter(|&&j| j < i).count() % 2 == 1
}

/// Matrix of `w ↦ v ∧ w` from `∧^m F^r` to `∧^{m+1} F^r`, as rows of
/// length `binomial(r, m)`.
pub fn wedge_with_vector<F: Field>(f: &F, v: &[F::Elem], m: usize) -> Vec<Vec<F::Elem>> {
    let r = v.len();
    let src = subsets(r, m);
    let dst = subset_index(r, m + 1);
    let mut mat = vec![vec![f.zero(); src.len()]; binomial(r, m + 1)];
    for (col, s) in src.iter().enumerate() {
        for (i, vi) in v.iter().enumerate() {
            if f.is_zero(vi) || s.contains(&i) {
                continue;
            }
            let mut t = s.clone();
            t.push(i);
            t.sort_unstable();
            let row = dst[&t];
            let term = if insertion_sign(s, i) { f.neg(vi) } else { vi.clone() };
            mat[row][col] = f.add(&mat[row][col], &term);
        }
    }
    mat
}

/// Wedge product of coordinate vectors `a ∈ ∧^p F^r`, `b ∈ ∧^q F^r`.
pub fn wedge_product<F: Field>(f: &F, r: usize, p: usize, a: &[F::Elem], q: usize, b: &[F::Elem]) -> Vec<F::Elem> {
    let sp = subsets(r, p);
    let sq = subsets(r, q);
    let dst = subset_index(r, p + q);
    let mut out = vec![f.zero(); binomial(r, p + q)];
    for (i, s) in sp.iter().enumerate() {
        if f.is_zero(&a[i]) {
            continue;
        }
        for (j, t) in sq.iter().enumerate() {
            if f.is_zero(&b[j]) || s.iter().any(|x| t.contains(x)) {
                continue;
            }
            let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
            // sign of the sorting permutation of s ++ t
            let mut inversions = 0;
            for x in s {
                inversions += t.iter().filter(|y| *y < x).count();
            }
            u.sort_unstable();
            let c = f.mul(&a[i], &b[j]);
            let term = if inversions % 2 == 1 { f.neg(&c) } else { c };
            let k = dst[&u];
            out[k] = f.add(&out[k], &term);
        }
    }
    out
}

/// An exterior power `∧^m` of a lattice or subspace together with its
/// induced basis, indexed by ordered `m`-subsets of the base basis.
#[derive(Clone, Debug, Serialize)]
pub struct WedgeSpace<B> {
    pub base: B,
    pub degree: usize,
    pub index: Vec<Vec<usize>>,
}

impl WedgeSpace<Sublattice> {
    pub fn of_lattice(base: &Sublattice, degree: usize) -> Self {
        WedgeSpace {
            index: subsets(base.rank(), degree),
            base: base.clone(),
            degree,
        }
    }

    pub fn dimension(&self) -> usize {
        self.index.len()
    }

    /// The induced basis vectors in `∧^m ℤⁿ`.
    pub fn basis_vectors(&self) -> Vec<IntVector> {
        let b = self.base.basis();
        self.index
            .iter()
            .map(|s| {
                let vs: Vec<IntVector> = s.iter().map(|&i| b[i].clone()).collect();
                wedge_of(&vs, self.base.ambient_rank())
            })
            .collect()
    }

    pub fn as_sublattice(&self) -> Sublattice {
        Sublattice::from_generators(binomial(self.base.ambient_rank(), self.degree), &self.basis_vectors())
    }
}

impl<F: Field> WedgeSpace<Subspace<F>> {
    pub fn of_subspace(base: &Subspace<F>, degree: usize) -> Self {
        WedgeSpace {
            index: subsets(base.dim(), degree),
            base: base.clone(),
            degree,
        }
    }

    pub fn dimension(&self) -> usize {
        self.index.len()
    }

    pub fn as_subspace(&self) -> Subspace<F> {
        self.base.wedge_power(self.degree)
    }
}
