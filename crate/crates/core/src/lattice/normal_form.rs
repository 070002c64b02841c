//! Smith and Hermite normal forms over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::int::IntMatrix;

/// Smith normal form `U · M · V = D` with `U`, `V` unimodular and
/// `D` diagonal, `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n)
            .map(|i| self.diagonal[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (k, n) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(k);
    let mut v = IntMatrix::identity(n);

    for t in 0..k.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..n {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let mut clean = true;
            for i in t + 1..k {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..k).find(|&i| (t + 1..n).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(left: IntMatrix, mut diagonal: IntMatrix, right: IntMatrix) -> SmithForm {
    // Entries below the processed block are already zero; normalise signs.
    let n = diagonal.rows().min(diagonal.cols());
    let mut left = left;
    for t in 0..n {
        if diagonal[(t, t)].is_negative() {
            diagonal.negate_row(t);
            left.negate_row(t);
        }
    }
    SmithForm {
        left,
        diagonal,
        right,
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U · M = H`, `U`
/// unimodular, `H` in row echelon form with positive pivots, entries above
/// each pivot reduced into `[0, pivot)`, zero rows last.
pub fn hermite_rows(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (k, n) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(k);
    let mut r = 0;
    for c in 0..n {
        if r == k {
            break;
        }
        for i in r + 1..k {
            if h[(i, c)].is_zero() {
                continue;
            }
            let a = h[(r, c)].clone();
            let b = h[(i, c)].clone();
            let eg = a.extended_gcd(&b);
            let g = eg.gcd;
            let (x, y) = (eg.x, eg.y);
            let s = -(&b / &g);
            let t = &a / &g;
            h.combine_rows(r, i, &x, &y, &s, &t);
            u.combine_rows(r, i, &x, &y, &s, &t);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Number of nonzero rows of an echelon matrix.
pub(crate) fn echelon_rank(h: &IntMatrix) -> usize {
    (0..h.rows())
        .take_while(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count()
}
