use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use vcfan_core::classify::*;
use vcfan_core::exact::Permutation;
use vcfan_core::fans::{fan_from_pair, fans_isomorphic, VcPair};
use vcfan_core::projectivity::{closed_form_projective, fan_projectivity};
use vcfan_core::sample::PairSampler;

/// Every valid pair for `n = 3` with entries of `A` and `b` in `{-1, 0, 1}`.
fn small_valid_pairs() -> Vec<VcPair> {
    let vals = [-1i64, 0, 1];
    let mut out = Vec::new();
    for a in std::iter::repeat_n(vals, 9).multi_cartesian_product() {
        let rows: Vec<Vec<i64>> = a.chunks(3).map(|r| r.to_vec()).collect();
        for b in std::iter::repeat_n(vals, 3).multi_cartesian_product() {
            let Ok(p) = VcPair::from_i64(&rows, &b) else {
                continue;
            };
            if validate_pair(&p).valid() {
                out.push(p);
            }
        }
    }
    out
}

#[test]
fn exhaustive_small_pairs_match_fan_isomorphism() {
    let pairs = small_valid_pairs();
    assert!(!pairs.is_empty());
    let mut classes: BTreeMap<String, VcPair> = BTreeMap::new();
    for p in &pairs {
        let tag = classify_pair(p).unwrap();
        assert_eq!(p.a().det().unwrap(), tag.det);
        let key = format!("{}:{:?}", tag.type_index, tag.canonical);
        let rep = classes.entry(key).or_insert_with(|| p.clone());
        // Same label must mean isomorphic fans.
        let (f, g) = (fan_from_pair(p).unwrap(), fan_from_pair(rep).unwrap());
        assert!(fans_isomorphic(&f, &g).unwrap(), "{p:?} vs {rep:?}");
        assert_eq!(
            closed_form_projective(p).unwrap(),
            fan_projectivity(&f).unwrap().projective
        );
    }
    // Distinct labels must mean non-isomorphic fans.
    let reps: Vec<&VcPair> = classes.values().collect();
    for (i, j) in (0..reps.len()).tuple_combinations() {
        let (f, g) = (
            fan_from_pair(reps[i]).unwrap(),
            fan_from_pair(reps[j]).unwrap(),
        );
        assert!(
            !fans_isomorphic(&f, &g).unwrap(),
            "{:?} vs {:?}",
            reps[i],
            reps[j]
        );
    }
}

#[test]
fn hidden_pairs_recover_their_type() {
    let mut s = PairSampler::new(3);
    for n in 3..=7 {
        for t in 0..4u8 {
            for _ in 0..4 {
                let p = s.hidden(t, n).unwrap();
                let tag = classify_pair(&p).unwrap();
                assert_eq!(tag.type_index, t, "{p:?}");
                let c = &tag.canonical;
                assert_eq!(canonical_representative(c).unwrap(), *c);
                assert!(variety_isomorphic(&p, c).unwrap());
            }
        }
    }
}

#[test]
fn type2_rotations_share_a_class() {
    let signs = [1i64, -1, -1, 1, 1, -1, -1];
    let p = VcPair::type2(&signs).unwrap();
    for k in 1..signs.len() {
        let rotated: Vec<i64> = (0..signs.len())
            .map(|i| signs[(i + k) % signs.len()])
            .collect();
        let q = VcPair::type2(&rotated).unwrap();
        assert!(variety_isomorphic(&p, &q).unwrap());
    }
    let reflected: Vec<i64> = signs.iter().rev().copied().collect();
    let q = VcPair::type2(&reflected).unwrap();
    assert_eq!(
        variety_isomorphic(&p, &q).unwrap(),
        canonical_sign_rotation(&signs) == canonical_sign_rotation(&reflected)
    );
}

#[test]
fn type2_counts_follow_necklace_formula() {
    for n in 3..=14 {
        let classes = enumerate_type2(n).unwrap();
        assert_eq!(
            BigInt::from(classes.len()),
            necklace_count(n as u64).unwrap().into()
        );
        for c in &classes {
            assert_eq!(c.iter().filter(|&&x| x == 1).count() % 2, 1);
        }
    }
    let small: Vec<usize> = (3..=6).map(|n| enumerate_type2(n).unwrap().len()).collect();
    assert_eq!(small, vec![2, 2, 4, 6]);
}

#[test]
fn invalid_pairs_are_reported() {
    let p = VcPair::from_i64(
        &[vec![1, 0, -1], vec![-1, 1, 0], vec![0, -1, 1]],
        &[0, 0, 2],
    )
    .unwrap();
    let r = validate_pair(&p);
    assert!(!r.valid());
    assert!(r
        .failures
        .iter()
        .any(|f| f.contains("Type 0 requires sum(b)=1")));
    assert!(classify_pair(&p).is_err());
}

#[test]
fn type3_parameter_is_an_invariant() {
    for a in [-4i64, -3, -2, 2, 3, 5] {
        let p = VcPair::type3(4, a).unwrap();
        let tag = classify_pair(&p).unwrap();
        assert_eq!(tag.type_index, 3);
        let sigma = Permutation::new(vec![3, 1, 0, 2]).unwrap();
        let q = p.conjugate(&sigma).unwrap();
        assert!(variety_isomorphic(&p, &q).unwrap());
        let other = VcPair::type3(4, a + 7).unwrap();
        assert!(!variety_isomorphic(&p, &other).unwrap());
    }
}

#[test]
fn r_identities_hold_for_determinant_two() {
    let mut s = PairSampler::new(17);
    for n in 3..=7 {
        for _ in 0..5 {
            let p = s.hidden(2, n).unwrap();
            assert!(r_identities(&p).unwrap().all_hold(), "{p:?}");
        }
    }
    let p = VcPair::type3(3, 4).unwrap();
    assert!(r_identities(&p).is_err());
}

#[test]
fn diffeo_labels_distinguish_types() {
    let labels: Vec<String> = [
        VcPair::type0(&[0, 0, 1]).unwrap(),
        VcPair::type2(&[1, 1, 1]).unwrap(),
        VcPair::type3(3, 3).unwrap(),
    ]
    .iter()
    .map(|p| diffeo_label(p).unwrap())
    .collect();
    assert_eq!(labels.iter().unique().count(), 3, "{labels:?}");
}
