//! The per-degree kernel complex `𝒦 ⊂ ℒ = W_X[u]` over a one-dimensional
//! base, and windowed dimension tables of the fiber complexes.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{show, EtdError};
use crate::etd::Etd;
use crate::forms::{MonoidIdeal, ReductionMode};
use crate::lattice::field::{mat_vec, right_kernel, Field, PrimeField, Rationals};
use crate::lattice::int::{binomial, IntVector};
use crate::lattice::koszul::CochainComplex;
use crate::lattice::subspace::Subspace;
use crate::lattice::wedge::{subsets, wedge_product, wedge_with_vector};

type Q = BigRational;
type Matrix = Vec<Vec<Q>>;

/// The differential used on `ℒ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Differential {
    /// `d(ℓ uˢ) = e∧ℓ uˢ + s ρ̄∧ℓ uˢ⁻¹`.
    #[default]
    Correct,
    /// Omits the `ρ̄` term; a negative control.
    DropRhoTerm,
}

/// Linear data at one degree, in coordinates of a basis of `L_e ⊗ ℚ`.
#[derive(Clone, Debug)]
struct Local {
    dim: usize,
    e: Vec<Q>,
    rho: Vec<Q>,
    /// `K^k = ker(∧^k L_e → ∧^k W_e)` for `k = 0..=dim`, in wedge coordinates.
    kernels: Vec<Matrix>,
    /// `∧^k π` as rows indexed by `k`-subsets of the basis.
    projections: Vec<Matrix>,
    w_dim: usize,
    /// Rank of the quotient `ℤ^d`.
    d: usize,
    essential: bool,
}

/// `ℒ_{≤S}` and `𝒦_{≤S}` at one degree.
#[derive(Clone, Debug)]
pub struct UComplexDegree {
    pub degree: IntVector,
    pub m_t: usize,
    pub n_u: usize,
    pub differential: Differential,
    /// `e ∈ E`; otherwise `𝒦 = ℒ` at this degree.
    pub essential: bool,
    pub l_dim: usize,
    pub w_dim: usize,
    pub chain: CochainComplex<Rationals>,
    /// Bases of `𝒦^k` inside `ℒ^k`.
    pub sub: Vec<Subspace<Rationals>>,
    local: Local,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KRow {
    pub degree: Vec<String>,
    pub k: usize,
    pub sub_dim: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KAcyclicVerdict {
    pub m_t: usize,
    pub window: u64,
    pub n_u: usize,
    pub differential: Differential,
    pub rows: Vec<KRow>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeRow {
    pub degree: Vec<String>,
    pub space_dim: usize,
    pub integral_rank: usize,
    pub class_zero: bool,
    pub cohomology: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyFlag {
    pub degree: Vec<String>,
    /// Rank of the lattice `W_e` over ℤ.
    pub integral_rank: usize,
    pub reduced_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeReport {
    pub characteristic: u64,
    pub mode: ReductionMode,
    pub window: u64,
    pub rows: Vec<HodgeRow>,
    /// `Σ_e dim Hᵐ` for each `m`.
    pub totals: Vec<usize>,
    /// `Σ binomial(dim W_e, m)` over degrees with `[e] = 0`.
    pub kernel_count: Vec<usize>,
    /// The image of the decomposition map in characteristic `p`, or the
    /// characteristic-0 count.
    pub prediction: Vec<usize>,
    pub flags: Vec<DiscrepancyFlag>,
    pub pass: bool,
}

fn wedge_rows(q: &Rationals, rows: &[Vec<Q>], target: usize, k: usize) -> Matrix {
    subsets(rows.len(), k)
        .iter()
        .map(|s| {
            s.iter()
                .enumerate()
                .fold(vec![q.one()], |acc, (deg, &i)| wedge_product(q, target, deg, &acc, 1, &rows[i]))
        })
        .collect()
}

fn transpose(m: &Matrix, cols: usize) -> Matrix {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

impl UComplexDegree {
    fn block(&self, k: usize) -> usize {
        binomial(self.l_dim, k)
    }

    /// `dim ℒ^k = dim 𝒦^k + dim C^k` on the `u⁰` layer, with `φ` a chain map.
    pub fn exact_on_layer_zero(&self) -> bool {
        let q = Rationals;
        let l = &self.local;
        (0..=l.dim).all(|k| {
            let fiber = if l.essential { binomial(l.w_dim, k) } else { 0 };
            let kernel = if l.essential { l.kernels[k].len() } else { self.block(k) };
            self.block(k) == kernel + fiber
        }) && (!l.essential || {
            // π(e∧x) = [e]∧π(x) on basis vectors
            let w = l.d;
            let class = mat_vec(&q, &transpose(&l.projections[1], w), &l.e);
            (0..l.dim).all(|k| {
                let ek = wedge_with_vector(&q, &l.e, k);
                (0..self.block(k)).all(|j| {
                    let x: Vec<Q> = (0..self.block(k)).map(|i| if i == j { q.one() } else { q.zero() }).collect();
                    let ex = mat_vec(&q, &ek, &x);
                    let lhs = mat_vec(&q, &transpose(&l.projections[k + 1], binomial(w, k + 1)), &ex);
                    let px = mat_vec(&q, &transpose(&l.projections[k], binomial(w, k)), &x);
                    let rhs = wedge_product(&q, w, 1, &class, k, &px);
                    lhs == rhs
                })
            })
        })
    }
}

impl Etd {
    fn rho(&self) -> Result<IntVector, EtdError> {
        if self.q().rank() != 1 {
            return Err(EtdError::BaseNotRankOne(self.q().rank()));
        }
        let g = self.q_group().basis()[0].clone();
        let q0 = self.q_generators().iter().find(|x| x.iter().any(|c| c != &BigInt::from(0))).expect("rank 1");
        let same = g.iter().zip(q0).all(|(a, b)| a.sign() == b.sign() || b == &BigInt::from(0));
        Ok(if same { g } else { g.iter().map(|x| -x).collect() })
    }

    /// `K = (m_t + 1) + ℕ`.
    pub fn truncation_ideal(&self, m_t: usize) -> Result<MonoidIdeal, EtdError> {
        self.rho()?;
        Ok(MonoidIdeal::power_of_maximal(self, m_t + 1))
    }

    fn local_data(&self, ideal: &MonoidIdeal, e: &[BigInt]) -> Result<Local, EtdError> {
        if !ideal.in_e_k(self, e) {
            return Err(EtdError::NotInEk(show(&self.p().to_ambient(e))));
        }
        let q = Rationals;
        let rho = self.rho()?;
        let face = self.p().face_of_internal(e).expect("e ∈ P");
        let l = self.l_space(&q, face, ReductionMode::RelativeModule);
        let dim = l.dim();
        let d = self.d();
        let e_c = l.coordinates(&q.map_vec(e)).expect("e ∈ L_e");
        let rho_c = l.coordinates(&q.map_vec(&rho)).expect("Q^gp ⊂ L_e");
        let proj = self.splitting().projection_matrix();
        let images: Matrix = l
            .basis()
            .iter()
            .map(|b| (0..d).map(|j| (0..b.len()).fold(q.zero(), |acc, i| acc + &b[i] * Q::from_integer(proj[(i, j)].clone()))).collect())
            .collect();
        let projections: Vec<Matrix> = (0..=dim).map(|k| wedge_rows(&q, &images, d, k)).collect();
        let kernels = (0..=dim)
            .map(|k| right_kernel(&q, &transpose(&projections[k], binomial(d, k)), binomial(dim, k)))
            .collect();
        let w_dim = self.w_space(&q, face, ReductionMode::RelativeModule).dim();
        Ok(Local {
            dim,
            e: e_c,
            rho: rho_c,
            kernels,
            projections,
            w_dim,
            d,
            essential: self.is_essential_internal(e),
        })
    }

    /// `ℒ_{≤S}` maps for `S = top`.
    fn l_maps(local: &Local, top: usize, differential: Differential) -> (Vec<usize>, Vec<Matrix>) {
        let q = Rationals;
        let n = local.dim;
        let layers = top + 1;
        let dims: Vec<usize> = (0..=n).map(|k| layers * binomial(n, k)).collect();
        let maps = (0..n)
            .map(|k| {
                let (a, b) = (binomial(n, k + 1), binomial(n, k));
                let ew = wedge_with_vector(&q, &local.e, k);
                let rw = wedge_with_vector(&q, &local.rho, k);
                let mut m = vec![vec![q.zero(); layers * b]; layers * a];
                for s in 0..layers {
                    for i in 0..a {
                        for j in 0..b {
                            m[s * a + i][s * b + j] = ew[i][j].clone();
                            if s > 0 && differential == Differential::Correct {
                                m[(s - 1) * a + i][s * b + j] = Q::from_integer(BigInt::from(s)) * &rw[i][j];
                            }
                        }
                    }
                }
                m
            })
            .collect();
        (dims, maps)
    }

    /// Basis of `𝒦^k_{≤S}` in `ℒ^k_{≤S}` coordinates.
    fn k_basis(local: &Local, k: usize, top: usize) -> Matrix {
        let q = Rationals;
        let b = binomial(local.dim, k);
        let len = (top + 1) * b;
        let unit = |i: usize| -> Vec<Q> { (0..len).map(|j| if i == j { q.one() } else { q.zero() }).collect() };
        let mut out: Matrix = Vec::new();
        if local.essential {
            for v in &local.kernels[k] {
                let mut x = vec![q.zero(); len];
                x[..b].clone_from_slice(v);
                out.push(x);
            }
        } else {
            out.extend((0..b).map(unit));
        }
        out.extend((b..len).map(unit));
        out
    }

    /// The kernel complex at `e ∈ E_K`, `K = (m_t + 1) + ℕ`, with `u`-degrees `≤ n_u`.
    pub fn kernel_complex(&self, m_t: usize, e: &[BigInt], n_u: usize, differential: Differential) -> Result<UComplexDegree, EtdError> {
        let ideal = self.truncation_ideal(m_t)?;
        let local = self.local_data(&ideal, e)?;
        let (dims, maps) = Self::l_maps(&local, n_u, differential);
        let q = Rationals;
        let chain = CochainComplex::new(&q, dims.clone(), maps);
        let sub = (0..=local.dim)
            .map(|k| Subspace::from_vectors(&q, dims[k], &Self::k_basis(&local, k, n_u)))
            .collect();
        Ok(UComplexDegree {
            degree: e.to_vec(),
            m_t,
            n_u,
            differential,
            essential: local.essential,
            l_dim: local.dim,
            w_dim: local.w_dim,
            chain,
            sub,
            local,
        })
    }

    fn k_rows(&self, local: &Local, e: &[BigInt], n_u: usize, differential: Differential) -> Vec<KRow> {
        let q = Rationals;
        let (_, small) = Self::l_maps(local, n_u, differential);
        let (_, big) = Self::l_maps(local, n_u + 1, differential);
        let n = local.dim;
        (0..=n)
            .map(|k| {
                let basis = Self::k_basis(local, k, n_u);
                let len_big = (n_u + 2) * binomial(n, k);
                let cocycles: Matrix = if k == n {
                    basis.clone()
                } else {
                    let images: Matrix = basis.iter().map(|x| mat_vec(&q, &small[k], x)).collect();
                    let rows = transpose(&images, (n_u + 1) * binomial(n, k + 1));
                    right_kernel(&q, &rows, basis.len())
                        .iter()
                        .map(|c| (0..basis[0].len()).map(|j| (0..basis.len()).fold(q.zero(), |acc, i| acc + &c[i] * &basis[i][j])).collect())
                        .collect()
                };
                let z: Matrix = cocycles
                    .iter()
                    .map(|x| {
                        let mut y = x.clone();
                        y.resize(len_big, q.zero());
                        y
                    })
                    .collect();
                let b: Matrix = if k == 0 {
                    Vec::new()
                } else {
                    Self::k_basis(local, k - 1, n_u + 1)
                        .iter()
                        .map(|x| mat_vec(&q, &big[k - 1], x))
                        .collect()
                };
                let zs = Subspace::from_vectors(&q, len_big, &z);
                let bs = Subspace::from_vectors(&q, len_big, &b);
                KRow {
                    degree: show(&self.p().to_ambient(e)),
                    k,
                    sub_dim: basis.len(),
                    cocycles: zs.dim(),
                    coboundaries: bs.dim(),
                    pass: bs.contains_subspace(&zs),
                }
            })
            .collect()
    }

    /// Every cocycle of `𝒦_{≤n_u}` at every window degree of `E_K` bounds
    /// a cochain of `𝒦_{≤n_u+1}`.
    pub fn verify_k_acyclic(&self, m_t: usize, window: u64, n_u: usize, differential: Differential) -> Result<KAcyclicVerdict, EtdError> {
        let ideal = self.truncation_ideal(m_t)?;
        let degrees: Vec<IntVector> = self
            .p()
            .enumerate_up_to(self.grading(), window)
            .into_iter()
            .filter(|x| ideal.in_e_k(self, x))
            .collect();
        let rows: Vec<KRow> = degrees
            .par_iter()
            .map(|e| {
                let local = self.local_data(&ideal, e)?;
                Ok(self.k_rows(&local, e, n_u, differential))
            })
            .collect::<Result<Vec<_>, EtdError>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(KAcyclicVerdict {
            m_t,
            window,
            n_u,
            differential,
            pass: rows.iter().all(|r| r.pass),
            rows,
        })
    }

    fn hodge_rows<F: Field>(&self, f: &F, ideal: &MonoidIdeal, degrees: &[IntVector], mode: ReductionMode) -> Result<Vec<HodgeRow>, EtdError> {
        degrees
            .par_iter()
            .map(|x| {
                let c = self.fiber_complex(ideal, f, x, mode)?;
                let face = self.p().face_of_internal(x).expect("x ∈ P");
                Ok(HodgeRow {
                    degree: show(&self.p().to_ambient(x)),
                    space_dim: c.space.dim(),
                    integral_rank: self.w_lattice(face).rank(),
                    class_zero: c.class_is_zero(),
                    cohomology: c.cohomology_dims(),
                })
            })
            .collect()
    }

    /// Windowed totals `Σ_e dim Hᵐ` of the fiber complexes over `E_K`.
    pub fn hodge_report(&self, ideal: &MonoidIdeal, characteristic: u64, window: u64, mode: ReductionMode) -> Result<HodgeReport, EtdError> {
        let degrees: Vec<IntVector> = self
            .p()
            .enumerate_up_to(self.grading(), window)
            .into_iter()
            .filter(|x| ideal.in_e_k(self, x))
            .collect();
        let rows = if characteristic == 0 {
            self.hodge_rows(&Rationals, ideal, &degrees, mode)?
        } else {
            self.hodge_rows(&PrimeField::new(characteristic)?, ideal, &degrees, mode)?
        };
        let d = self.d();
        let mut totals = vec![0; d + 1];
        let mut kernel_count = vec![0; d + 1];
        let mut flags = Vec::new();
        for r in &rows {
            for (m, h) in r.cohomology.iter().enumerate() {
                totals[m] += h;
                if r.class_zero {
                    kernel_count[m] += binomial(r.space_dim, m);
                }
            }
            if r.space_dim != r.integral_rank {
                flags.push(DiscrepancyFlag {
                    degree: r.degree.clone(),
                    integral_rank: r.integral_rank,
                    reduced_dim: r.space_dim,
                });
            }
        }
        let prediction = if characteristic == 0 {
            let mut p = vec![0; d + 1];
            for (x, r) in degrees.iter().zip(&rows) {
                if self.project(x).iter().all(|c| c == &BigInt::from(0)) {
                    for (m, slot) in p.iter_mut().enumerate() {
                        *slot += binomial(r.integral_rank, m);
                    }
                }
            }
            p
        } else {
            let mut p = vec![0; d + 1];
            let verdict = self.verify_decomposition(characteristic, &crate::cartier::FrobeniusBase::Truncated(ideal.clone()), window)?;
            for row in verdict.rows {
                p[row.m] += row.expected;
            }
            p
        };
        let pass = totals == kernel_count && (mode == ReductionMode::IntersectionOfReductions || totals == prediction);
        Ok(HodgeReport {
            characteristic,
            mode,
            window,
            rows,
            totals,
            kernel_count,
            prediction,
            flags,
            pass,
        })
    }
}
