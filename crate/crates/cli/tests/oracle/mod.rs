//! Brute-force recomputations used by the acceptance suite. Only the
//! monoid data (facet normals, generators, splitting) is taken from the
//! library; all linear algebra on forms is redone here.

#![allow(dead_code)]

use etd_core::etd::Etd;
use etd_core::lattice::int::IntMatrix;
use etd_core::lattice::sublattice::Sublattice;
use etd_core::monoid::FaceId;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Scalar: Clone + PartialEq {
    fn zero(&self) -> Self;
    fn one(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
    fn from_int(&self, n: &BigInt) -> Self;
}

impl Scalar for BigRational {
    fn zero(&self) -> Self {
        Zero::zero()
    }
    fn one(&self) -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_int(&self, n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

/// An element of 𝔽ₚ carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Scalar for Fp {
    fn zero(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one(&self) -> Self {
        Fp { v: 1 % self.p, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp { v: (self.v + o.v) % self.p, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        Fp { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        Fp { v: self.v * o.v % self.p, p: self.p }
    }
    fn inv(&self) -> Self {
        // Fermat
        let (mut b, mut e, mut acc) = (self.v, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        Fp { v: acc, p: self.p }
    }
    fn from_int(&self, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(self.p));
        Fp { v: u64::try_from(r).unwrap(), p: self.p }
    }
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn fp(p: u64) -> Fp {
    Fp { v: 0, p }
}

/// Row echelon form in place; returns pivot columns.
pub fn echelon<S: Scalar>(rows: &mut Vec<Vec<S>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, i);
        let inv = rows[r][c].inv();
        rows[r] = rows[r].iter().map(|x| x.mul(&inv)).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let k = rows[i][c].clone();
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x = x.sub(&k.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank<S: Scalar>(rows: &[Vec<S>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m, cols).len()
}

/// Basis of `{x : Σ_j rows[i][j] x_j = 0 ∀i}`; `unit` supplies the field.
pub fn kernel<S: Scalar>(unit: &S, rows: &[Vec<S>], cols: usize) -> Vec<Vec<S>> {
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![unit.zero(); cols];
            x[free] = unit.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                x[pc] = unit.zero().sub(&row[free]);
            }
            x
        })
        .collect()
}

pub fn contains_span<S: Scalar>(big: &[Vec<S>], small: &[Vec<S>], cols: usize) -> bool {
    let both: Vec<Vec<S>> = big.iter().chain(small).cloned().collect();
    rank(big, cols) == rank(&both, cols)
}

/// Dimension of the intersection of spans, via annihilators.
pub fn intersection_dim<S: Scalar>(unit: &S, spans: &[Vec<Vec<S>>], cols: usize) -> usize {
    let mut ann: Vec<Vec<S>> = Vec::new();
    for s in spans {
        ann.extend(kernel(unit, s, cols));
    }
    cols - rank(&ann, cols)
}

pub fn m_subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    if n < m {
        return vec![];
    }
    let mut out = Vec::new();
    for last in (m - 1)..n {
        for mut s in m_subsets(last, m - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out.sort();
    out
}

fn index_of(subs: &[Vec<usize>], s: &[usize]) -> usize {
    subs.iter().position(|t| t == s).expect("subset present")
}

/// Matrix of `ι_n : ∧^m → ∧^{m−1}`: rows indexed by (m−1)-subsets.
pub fn contraction(n: &[BigInt], m: usize) -> Vec<Vec<BigInt>> {
    let r = n.len();
    if m == 0 {
        return Vec::new();
    }
    let src = m_subsets(r, m);
    let dst = m_subsets(r, m - 1);
    let mut out = vec![vec![BigInt::zero(); src.len()]; dst.len()];
    for (col, s) in src.iter().enumerate() {
        for (pos, &i) in s.iter().enumerate() {
            let rest: Vec<usize> = s.iter().copied().filter(|&j| j != i).collect();
            let row = index_of(&dst, &rest);
            let term = if pos % 2 == 0 { n[i].clone() } else { -n[i].clone() };
            out[row][col] += term;
        }
    }
    out
}

/// Matrix of `v ∧ · : ∧^m → ∧^{m+1}`.
pub fn wedge_left<S: Scalar>(unit: &S, v: &[S], m: usize) -> Vec<Vec<S>> {
    let r = v.len();
    let src = m_subsets(r, m);
    let dst = m_subsets(r, m + 1);
    let mut out = vec![vec![unit.zero(); src.len()]; dst.len()];
    for (col, s) in src.iter().enumerate() {
        for i in 0..r {
            if s.contains(&i) || v[i].is_zero() {
                continue;
            }
            let before = s.iter().filter(|&&j| j < i).count();
            let mut t = s.clone();
            t.push(i);
            t.sort();
            let row = index_of(&dst, &t);
            out[row][col] = if before % 2 == 0 { out[row][col].add(&v[i]) } else { out[row][col].sub(&v[i]) };
        }
    }
    out
}

pub fn apply<S: Scalar>(unit: &S, mat: &[Vec<S>], x: &[S]) -> Vec<S> {
    mat.iter()
        .map(|row| row.iter().zip(x).fold(unit.zero(), |acc, (a, b)| acc.add(&a.mul(b))))
        .collect()
}

/// `v₁ ∧ … ∧ v_m` through Leibniz expansion of each maximal minor.
pub fn wedge_vectors(vs: &[Vec<BigInt>], r: usize) -> Vec<BigInt> {
    m_subsets(r, vs.len())
        .iter()
        .map(|cols| {
            permutations(vs.len())
                .into_iter()
                .map(|(perm, sign)| {
                    let p: BigInt = perm.iter().enumerate().map(|(row, &c)| vs[row][cols[c]].clone()).product();
                    if sign {
                        -p
                    } else {
                        p
                    }
                })
                .sum()
        })
        .collect()
}

/// All permutations with parity (true = odd).
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(vec![], false)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting at pos moves n−1−pos entries past the new one
            out.push((q, s ^ ((n - 1 - pos) % 2 == 1)));
        }
    }
    out
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Facets `H` with `⟨n_H, x⟩ = 0`.
pub fn facets_through(etd: &Etd, x: &[BigInt]) -> Vec<usize> {
    (0..etd.p().facets().len()).filter(|&j| dot(&etd.p().facets()[j].normal, x).is_zero()).collect()
}

fn unused(etd: &Etd, j: usize) -> bool {
    !etd.facet_set().contains(&j)
}

/// `x ∈ E`: no generator of `Q` lies on the face of `x`.
pub fn is_essential(etd: &Etd, x: &[BigInt]) -> bool {
    let through = facets_through(etd, x);
    etd.q_generators().iter().all(|q| {
        q.iter().all(Zero::is_zero) || through.iter().any(|&j| dot(&etd.p().facets()[j].normal, q).is_positive())
    })
}

/// The functional `n̄_H` on `ℤ^d`, defined because `n_H` kills `Q^gp`.
pub fn descended_normal(etd: &Etd, j: usize) -> Vec<BigInt> {
    let n = &etd.p().facets()[j].normal;
    for q in etd.q_group().basis() {
        assert!(dot(n, q).is_zero(), "unused facet {j} does not contain Q");
    }
    let s = etd.splitting().section_matrix();
    (0..s.rows()).map(|i| dot(s.row(i), n)).collect()
}

/// Pole conditions on one chart: unused facets through the chart face
/// on which `z^x` does not vanish.
pub fn chart_conditions(etd: &Etd, chart: FaceId, x: &[BigInt]) -> Vec<usize> {
    let mask = etd.p().face(chart).facets;
    facets_through(etd, x)
        .into_iter()
        .filter(|&j| mask >> j & 1 == 1 && unused(etd, j))
        .collect()
}

fn kernel_lattice(rows: Vec<Vec<BigInt>>, cols: usize) -> Sublattice {
    if rows.is_empty() {
        return Sublattice::full(cols);
    }
    Sublattice::right_kernel(&IntMatrix::from_rows(&rows, cols))
}

fn conditions_all_charts(etd: &Etd, x: &[BigInt]) -> Vec<usize> {
    let mut hs: Vec<usize> = etd.cover_faces().into_iter().flat_map(|f| chart_conditions(etd, f, x)).collect();
    hs.sort();
    hs.dedup();
    hs
}

/// Monomial forms `z^x ω`, `ω ∈ ∧^m ℤ^r` (internal), regular on every chart.
pub fn absolute_forms(etd: &Etd, x: &[BigInt], m: usize) -> Sublattice {
    let r = etd.p().rank();
    let rows = conditions_all_charts(etd, x)
        .into_iter()
        .flat_map(|j| contraction(&etd.p().facets()[j].normal, m))
        .collect();
    kernel_lattice(rows, m_subsets(r, m).len())
}

/// Relative version on `∧^m ℤ^d`.
pub fn relative_forms(etd: &Etd, x: &[BigInt], m: usize) -> Sublattice {
    let d = etd.d();
    let rows = conditions_all_charts(etd, x)
        .into_iter()
        .flat_map(|j| contraction(&descended_normal(etd, j), m))
        .collect();
    kernel_lattice(rows, m_subsets(d, m).len())
}

/// Relative forms at the face `face ∨ chart` for a single chart, as in
/// the base-change witnesses.
pub fn relative_forms_on_face(etd: &Etd, face: FaceId, m: usize) -> Sublattice {
    let d = etd.d();
    let mask = etd.p().face(face).facets;
    let rows = (0..etd.p().facets().len())
        .filter(|&j| mask >> j & 1 == 1 && unused(etd, j))
        .flat_map(|j| contraction(&descended_normal(etd, j), m))
        .collect();
    kernel_lattice(rows, m_subsets(d, m).len())
}

pub fn project(etd: &Etd, x: &[BigInt]) -> Vec<BigInt> {
    let pm = etd.splitting().projection_matrix();
    (0..pm.cols()).map(|j| x.iter().enumerate().map(|(i, xi)| xi * &pm[(i, j)]).sum()).collect()
}

pub fn reduce<S: Scalar>(unit: &S, v: &[BigInt]) -> Vec<S> {
    v.iter().map(|x| unit.from_int(x)).collect()
}

/// Dimensions of `H^m` of `(∧^• W ⊗ k, c ∧)` from bases of `∧^m W`.
pub fn koszul_cohomology<S: Scalar>(unit: &S, spaces: &[Vec<Vec<S>>], c: &[S]) -> Vec<usize> {
    let n = spaces.len();
    let d_rank: Vec<usize> = (0..n)
        .map(|m| {
            if m + 1 >= n || spaces[m].is_empty() {
                return 0;
            }
            let w = wedge_left(unit, c, m);
            let images: Vec<Vec<S>> = spaces[m].iter().map(|b| apply(unit, &w, b)).collect();
            rank(&images, w.len())
        })
        .collect();
    (0..n)
        .map(|m| spaces[m].len() - d_rank[m] - if m == 0 { 0 } else { d_rank[m - 1] })
        .collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
