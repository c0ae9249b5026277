use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use vcfan_core::classify::{canonical_sign_rotation, classify_pair, variety_isomorphic};
use vcfan_core::cohomology::presentation_from_pair;
use vcfan_core::complexes::vc_complex;
use vcfan_core::exact::{smith_normal_form, IntMatrix, Permutation};
use vcfan_core::fans::VcPair;
use vcfan_core::projectivity::closed_form_projective;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-6i64..=6, rows * cols).prop_map(move |v| {
        IntMatrix::new(rows, cols, v.into_iter().map(BigInt::from).collect()).unwrap()
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

/// A `±1` sequence of length `n` with an odd number of `+1`.
fn odd_signs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop::bool::ANY, n).prop_map(|bits| {
        let mut s: Vec<i64> = bits.iter().map(|&b| if b { 1 } else { -1 }).collect();
        if s.iter().filter(|&&x| x == 1).count() % 2 == 0 {
            s[0] = -s[0];
        }
        s
    })
}

/// An integer vector of length `n` summing to one.
fn unit_sum(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, n - 1).prop_map(|mut v| {
        let s: i64 = v.iter().sum();
        v.push(1 - s);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_valid_factorization(
        m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c)),
    ) {
        let (r, c) = (m.rows(), m.cols());
        let s = smith_normal_form(&m);
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        let d = s.diagonal();
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        for w in d.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        prop_assert_eq!(s.rank(), m.rank());
        if r == c {
            let prod: BigInt = d.iter().product();
            prop_assert_eq!(prod, m.det().unwrap().abs());
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(4, 4), b in matrix(4, 4)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        prop_assert_eq!(a.transpose().det().unwrap(), a.det().unwrap());
    }

    #[test]
    fn permutation_group_laws(p in permutation(6), q in permutation(6)) {
        let pq = p.compose(&q).unwrap();
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert_eq!(pq.matrix(), p.matrix().mul(&q.matrix()).unwrap());
        prop_assert_eq!(pq.inverse(), q.inverse().compose(&p.inverse()).unwrap());
    }

    #[test]
    fn type2_class_is_the_least_rotation(signs in (3usize..8).prop_flat_map(odd_signs), sigma_seed in any::<u64>()) {
        let n = signs.len();
        let p = VcPair::type2(&signs).unwrap();
        let tag = classify_pair(&p).unwrap();
        prop_assert_eq!(tag.type_index, 2);
        prop_assert_eq!(tag.det, BigInt::from(2));
        let least = VcPair::type2(&canonical_sign_rotation(&signs)).unwrap();
        prop_assert!(variety_isomorphic(&p, &least).unwrap());
        let images: Vec<usize> = (0..n).map(|i| (i + sigma_seed as usize) % n).collect();
        let q = p.conjugate(&Permutation::new(images).unwrap()).unwrap();
        prop_assert_eq!(classify_pair(&q).unwrap().canonical, tag.canonical);
        let ones = signs.iter().filter(|&&s| s == 1).count();
        prop_assert_eq!(closed_form_projective(&p).unwrap(), ones < 3);
    }

    #[test]
    fn type0_is_stable_under_conjugation(b in (3usize..7).prop_flat_map(unit_sum), seed in any::<u64>()) {
        let n = b.len();
        let p = VcPair::type0(&b).unwrap();
        let tag = classify_pair(&p).unwrap();
        prop_assert_eq!(tag.type_index, 0);
        prop_assert!(tag.det.is_zero());
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(0, (seed as usize) % n);
        let q = p.conjugate(&Permutation::new(images).unwrap()).unwrap();
        prop_assert_eq!(classify_pair(&q).unwrap().canonical, tag.canonical);
        prop_assert!(closed_form_projective(&q).unwrap());
    }

    #[test]
    fn type3_determinant_follows_cyclic_formula(n in 3usize..8, a in prop_oneof![-9i64..=-2, 2i64..=9]) {
        let p = VcPair::type3(n, a).unwrap();
        let c = p.cyclic_entries().unwrap();
        let prod: BigInt = c.iter().product();
        let sign = if n % 2 == 1 { 1 } else { -1 };
        prop_assert_eq!(p.a().det().unwrap(), BigInt::from(1) + prod * sign);
        prop_assert_eq!(classify_pair(&p).unwrap().type_index, 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cohomology_ranks_match_h_vector(signs in (3usize..6).prop_flat_map(odd_signs)) {
        let n = signs.len();
        let r = presentation_from_pair(&VcPair::type2(&signs).unwrap()).unwrap();
        let ranks: Vec<BigInt> = r.ranks().into_iter().map(BigInt::from).collect();
        prop_assert_eq!(ranks, vc_complex(n).unwrap().h_vector());
        prop_assert!(r.is_torsion_free());
    }

    #[test]
    fn ring_multiplication_is_commutative_and_associative(
        signs in odd_signs(4),
        u in prop::collection::vec(-3i64..=3, 5),
        v in prop::collection::vec(-3i64..=3, 5),
        w in prop::collection::vec(-3i64..=3, 5),
    ) {
        let r = presentation_from_pair(&VcPair::type2(&signs).unwrap()).unwrap();
        let lin = |c: &[i64]| r.linear(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap();
        let (u, v, w) = (lin(&u), lin(&v), lin(&w));
        prop_assert_eq!(r.multiply(&u, &v).unwrap(), r.multiply(&v, &u).unwrap());
        let left = r.multiply(&r.multiply(&u, &v).unwrap(), &w).unwrap();
        let right = r.multiply(&u, &r.multiply(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let sum = r.add(&v, &w).unwrap();
        let dist = r.add(&r.multiply(&u, &v).unwrap(), &r.multiply(&u, &w).unwrap()).unwrap();
        prop_assert_eq!(r.multiply(&u, &sum).unwrap(), dist);
    }
}
