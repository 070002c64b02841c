use etd_core::lattice::field::{Field, PrimeField, Rationals};
use etd_core::lattice::int::{binomial, IntMatrix, IntVector};
use etd_core::lattice::koszul::koszul_complex;
use etd_core::lattice::normal_form::smith_normal_form;
use etd_core::lattice::sublattice::{intersect_mod_p, obstruction_primes, Sublattice};
use etd_core::lattice::wedge::wedge_product;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, cols), rows).prop_map(move |r| {
        IntMatrix::from_rows(&r.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>(), cols)
    })
}

fn gens(n: usize) -> impl Strategy<Value = Vec<IntVector>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), 0..=3)
        .prop_map(|g| g.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_round_trip(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal.clone());
        prop_assert!(s.left.determinant().abs().is_one());
        prop_assert!(s.right.determinant().abs().is_one());
        prop_assert!(s.diagonal.is_diagonal());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(f.iter().all(|d| d > &BigInt::zero()));
    }

    #[test]
    fn saturation(g in gens(3)) {
        let a = Sublattice::from_generators(3, &g);
        let s = a.saturate();
        prop_assert!(s.contains_lattice(&a));
        prop_assert_eq!(s.rank(), a.rank());
        prop_assert!(!a.index_in_saturation().is_zero());
        prop_assert_eq!(s.saturate(), s.clone());
        prop_assert!(s.is_saturated());
    }

    #[test]
    fn obstruction_primes_exact(a in gens(3), b in gens(3)) {
        let a = Sublattice::from_generators(3, &a).saturate();
        let b = Sublattice::from_generators(3, &b).saturate();
        let bad = obstruction_primes(&a, &b).unwrap();
        let r = a.intersect(&b).unwrap().rank();
        for p in PRIMES.iter().copied().chain(bad.iter().copied()) {
            let dim = intersect_mod_p(&a, &b, p).unwrap().dim();
            if bad.contains(&p) {
                prop_assert!(dim > r, "p = {} in the set but dim {} = rank {}", p, dim, r);
            } else {
                prop_assert_eq!(dim, r, "p = {}", p);
            }
        }
    }

    #[test]
    fn wedge_dimensions(g in gens(4), m in 0usize..=4) {
        let a = Sublattice::from_generators(4, &g);
        prop_assert_eq!(a.wedge_power(m).rank(), binomial(a.rank(), m));
    }

    #[test]
    fn wedge_alternating_bilinear(
        a in prop::collection::vec(-3i64..=3, 4),
        b in prop::collection::vec(-3i64..=3, 4),
        c in prop::collection::vec(-3i64..=3, 6),
    ) {
        let q = Rationals;
        let v = |x: &[i64]| x.iter().map(|&t| BigRational::from_integer(t.into())).collect::<Vec<_>>();
        let (a, b, c) = (v(&a), v(&b), v(&c));
        prop_assert!(wedge_product(&q, 4, 1, &a, 1, &a).iter().all(Zero::is_zero));
        let sum: Vec<_> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = wedge_product(&q, 4, 1, &sum, 2, &c);
        let rhs: Vec<_> = wedge_product(&q, 4, 1, &a, 2, &c)
            .into_iter()
            .zip(wedge_product(&q, 4, 1, &b, 2, &c))
            .map(|(x, y)| x + y)
            .collect();
        prop_assert_eq!(lhs, rhs);
        // graded commutativity in degrees 1 and 1
        let ab = wedge_product(&q, 4, 1, &a, 1, &b);
        let ba: Vec<_> = wedge_product(&q, 4, 1, &b, 1, &a).into_iter().map(|x| -x).collect();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn koszul_acyclic(v in prop::collection::vec(-4i64..=4, 1..=4), p in prop::sample::select(PRIMES.to_vec())) {
        let q = Rationals;
        let vq: Vec<_> = v.iter().map(|&t| BigRational::from_integer(t.into())).collect();
        let c = koszul_complex(&q, &vq);
        prop_assert!(c.check_d_squared());
        prop_assert_eq!(c.euler_characteristic(), 0);
        prop_assert_eq!(c.is_acyclic(), v.iter().any(|&t| t != 0));

        let f = PrimeField::new(p).unwrap();
        let vp = f.map_vec(&v.iter().map(|&t| BigInt::from(t)).collect::<Vec<_>>());
        let c = koszul_complex(&f, &vp);
        prop_assert!(c.check_d_squared());
        prop_assert_eq!(c.euler_characteristic(), 0);
        prop_assert_eq!(c.is_acyclic(), v.iter().any(|&t| t.rem_euclid(p as i64) != 0));
    }
}
