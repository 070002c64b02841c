//! The Frobenius decomposition `z^e·w ↦ z^{pe}·w` in characteristic `p`,
//! its degreewise verification, and exact Koszul division over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{show, EtdError, LatticeError};
use crate::etd::Etd;
use crate::forms::{MonoidIdeal, ReductionMode};
use crate::lattice::field::{Field, PrimeField, Rationals};
use crate::lattice::int::{binomial, scale_vec, IntVector};
use crate::lattice::wedge::{subsets, wedge_product, wedge_with_vector};

/// The base ring `𝒯`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FrobeniusBase {
    /// `𝔽ₚ`, i.e. the fiber over the origin.
    Field,
    /// `𝔽ₚ[Q]/(K)`.
    Truncated(MonoidIdeal),
}

impl FrobeniusBase {
    fn ideal(&self, etd: &Etd) -> Result<MonoidIdeal, EtdError> {
        match self {
            FrobeniusBase::Field => Ok(MonoidIdeal::maximal(etd)),
            FrobeniusBase::Truncated(k) => {
                // Q \ K is finite iff a multiple of every generator of Q lies in K
                let cofinite = etd
                    .q_generators()
                    .iter()
                    .all(|g| (1..=64u64).any(|n| k.contains(etd, &scale_vec(&BigInt::from(n), g))));
                if cofinite {
                    Ok(k.clone())
                } else {
                    Err(EtdError::IdealNotCofinite)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusEntry {
    pub source: Vec<String>,
    pub target: Vec<String>,
    /// `⟨pe⟩ = ⟨e⟩`, so `W^m_{pe} = W^m_e` for all `m`.
    pub same_face: bool,
    pub target_essential: bool,
    /// `[pe] = 0` in `W_{pe} ⊗ 𝔽ₚ`.
    pub target_closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusDecomposition {
    pub prime: u64,
    pub base: FrobeniusBase,
    pub entries: Vec<FrobeniusEntry>,
    pub injective: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartierRow {
    pub degree: Vec<String>,
    pub m: usize,
    pub cohomology: usize,
    pub expected: usize,
    /// The degree lies in `p·E` after removing its `Q`-part.
    pub in_image: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartierVerdict {
    pub prime: u64,
    pub window: u64,
    pub rows: Vec<CartierRow>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingVerdict {
    pub degree: Vec<String>,
    pub class_zero: bool,
    pub in_pe: bool,
    pub pass: bool,
}

impl Etd {
    /// `e / p` if `e ∈ p·E`.
    fn divide_in_e(&self, e: &[BigInt], p: u64) -> Option<IntVector> {
        let p = BigInt::from(p);
        let q: Option<IntVector> = e
            .iter()
            .map(|x| {
                let (d, r) = x.div_rem(&p);
                r.is_zero().then_some(d)
            })
            .collect();
        q.filter(|y| self.p().contains_internal(y) && self.is_essential_internal(y))
    }

    fn class_vanishes(&self, f: &PrimeField, e: &[BigInt]) -> bool {
        let face = self.p().face_of_internal(e).expect("e ∈ P");
        let space = self.w_space(f, face, ReductionMode::RelativeModule);
        let v = f.map_vec(&self.project(e));
        debug_assert!(space.contains_elems(&v));
        v.iter().all(|x| f.is_zero(x))
    }

    fn window_degrees(&self, ideal: &MonoidIdeal, window: u64) -> Vec<IntVector> {
        self.p()
            .enumerate_up_to(self.grading(), window)
            .into_iter()
            .filter(|x| ideal.in_e_k(self, x))
            .collect()
    }

    /// Records `e ↦ pe` for `e ∈ E` with `h(e) ≤ window`.
    pub fn frobenius_map(&self, p: u64, base: &FrobeniusBase, window: u64) -> Result<FrobeniusDecomposition, EtdError> {
        let f = PrimeField::new(p)?;
        base.ideal(self)?;
        let pb = BigInt::from(p);
        let entries: Vec<FrobeniusEntry> = self
            .essential_elements(window)
            .par_iter()
            .map(|e| {
                let t = scale_vec(&pb, e);
                let face = self.p().face_of_internal(e).expect("e ∈ P");
                let same_face = self.p().face_of_internal(&t).expect("pe ∈ P") == face;
                FrobeniusEntry {
                    source: show(&self.p().to_ambient(e)),
                    target: show(&self.p().to_ambient(&t)),
                    same_face,
                    target_essential: self.is_essential_internal(&t),
                    target_closed: self.class_vanishes(&f, &t),
                }
            })
            .collect();
        let mut targets: Vec<&Vec<String>> = entries.iter().map(|e| &e.target).collect();
        targets.sort();
        targets.dedup();
        let injective = targets.len() == entries.len();
        let pass = injective && entries.iter().all(|e| e.same_face && e.target_essential && e.target_closed);
        Ok(FrobeniusDecomposition {
            prime: p,
            base: base.clone(),
            entries,
            injective,
            pass,
        })
    }

    /// Compares `Hᵐ` of `(∧^• W_e ⊗ 𝔽ₚ, [e] ∧)` with the image of the
    /// decomposition map at every window degree of `E_K`.
    pub fn verify_decomposition(&self, p: u64, base: &FrobeniusBase, window: u64) -> Result<CartierVerdict, EtdError> {
        let f = PrimeField::new(p)?;
        let ideal = base.ideal(self)?;
        let degrees = self.window_degrees(&ideal, window);
        let rows: Vec<Vec<CartierRow>> = degrees
            .par_iter()
            .map(|x| -> Result<Vec<CartierRow>, EtdError> {
                let c = self.fiber_complex(&ideal, &f, x, ReductionMode::RelativeModule)?;
                let e0 = self.decompose_internal(x)?.e;
                let source = self.divide_in_e(&e0, p);
                let source_dim = source.as_ref().map(|y| {
                    let face = self.p().face_of_internal(y).expect("y ∈ P");
                    self.w_space(&f, face, ReductionMode::RelativeModule).dim()
                });
                let h = c.cohomology_dims();
                Ok((0..h.len())
                    .map(|m| {
                        let expected = source_dim.map_or(0, |n| binomial(n, m));
                        CartierRow {
                            degree: show(&self.p().to_ambient(x)),
                            m,
                            cohomology: h[m],
                            expected,
                            in_image: source.is_some(),
                            pass: h[m] == expected,
                        }
                    })
                    .collect())
            })
            .collect::<Result<_, _>>()?;
        let rows: Vec<CartierRow> = rows.into_iter().flatten().collect();
        Ok(CartierVerdict {
            prime: p,
            window,
            pass: rows.iter().all(|r| r.pass),
            rows,
        })
    }

    /// `[e] = 0` in `W¹_e ⊗ 𝔽ₚ` iff `e ∈ p·E`, for `e ∈ E` (internal).
    pub fn vanishing_iff_pe(&self, p: u64, e: &[BigInt]) -> Result<VanishingVerdict, EtdError> {
        let f = PrimeField::new(p)?;
        if !self.p().contains_internal(e) || !self.is_essential_internal(e) {
            return Err(EtdError::NotAnElement(show(&self.p().to_ambient(e))));
        }
        let class_zero = self.class_vanishes(&f, e);
        let in_pe = self.divide_in_e(e, p).is_some();
        Ok(VanishingVerdict {
            degree: show(&self.p().to_ambient(e)),
            class_zero,
            in_pe,
            pass: class_zero == in_pe,
        })
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Solves `v ∧ ℓ̃ = ℓ` for `ℓ ∈ ∧^{k+1} ℚⁿ`: expand `ℓ` in the wedge basis of
/// an orthogonal frame starting with `v` and strip `v` from each term.
pub fn koszul_divide(v: &[BigRational], l: &[BigRational], k: usize) -> Result<Vec<BigRational>, LatticeError> {
    let q = Rationals;
    let n = v.len();
    if l.len() != binomial(n, k + 1) {
        return Err(LatticeError::NotInSpace);
    }
    if v.iter().all(Zero::is_zero) {
        return Err(LatticeError::ZeroVector);
    }
    let vl = {
        let m = wedge_with_vector(&q, v, k + 1);
        m.iter().map(|row| dot(row, l)).collect::<Vec<_>>()
    };
    if vl.iter().any(|x| !x.is_zero()) {
        return Err(LatticeError::NoSolution);
    }

    // unnormalized Gram–Schmidt, v first
    let mut frame: Vec<Vec<BigRational>> = vec![v.to_vec()];
    for i in 0..n {
        if frame.len() == n {
            break;
        }
        let mut u: Vec<BigRational> = (0..n).map(|j| if i == j { q.one() } else { q.zero() }).collect();
        for w in &frame {
            let c = dot(&u, w) / dot(w, w);
            for (x, y) in u.iter_mut().zip(w) {
                *x -= &c * y;
            }
        }
        if u.iter().any(|x| !x.is_zero()) {
            frame.push(u);
        }
    }

    let wedge_of = |s: &[usize]| {
        s.iter()
            .enumerate()
            .fold(vec![q.one()], |acc, (deg, &i)| wedge_product(&q, n, deg, &acc, 1, &frame[i]))
    };
    let mut out = vec![q.zero(); binomial(n, k)];
    for s in subsets(n, k + 1) {
        if s[0] != 0 {
            continue;
        }
        let ws = wedge_of(&s);
        let c = dot(l, &ws) / dot(&ws, &ws);
        if c.is_zero() {
            continue;
        }
        let rest = wedge_of(&s[1..]);
        for (x, y) in out.iter_mut().zip(&rest) {
            *x += &c * y;
        }
    }
    Ok(out)
}
