use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use vcfan_core::cohomology::*;
use vcfan_core::complexes::vc_complex;
use vcfan_core::exact::IntMatrix;
use vcfan_core::fans::VcPair;
use vcfan_core::sample::PairSampler;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| big(x)).collect()
}

fn sample_all_types(n: usize, seed: u64) -> Vec<VcPair> {
    let mut s = PairSampler::new(seed);
    (0..4u8).map(|t| s.of_type(t, n).unwrap()).collect()
}

#[test]
fn ranks_match_h_vector_and_are_torsion_free() {
    for n in 3..=6 {
        let h = vc_complex(n).unwrap().h_vector();
        for p in sample_all_types(n, n as u64) {
            let r = presentation_from_pair(&p).unwrap();
            let ranks: Vec<BigInt> = r.ranks().into_iter().map(BigInt::from).collect();
            assert_eq!(ranks, h, "n={n} {p:?}");
            assert!(r.is_torsion_free());
            assert_eq!(r.relations().len(), 2 * n + 1);
        }
    }
}

#[test]
fn named_bases_in_low_degrees() {
    let r = presentation_from_pair(&VcPair::type2(&[1, -1, -1, 1, 1]).unwrap()).unwrap();
    let p0 = r.piece(0).unwrap();
    assert_eq!(p0.basis, vec![Poly::one(6)]);
    let p1 = r.piece(1).unwrap();
    assert!(p1.preferred_basis);
    let expected: Vec<Poly> = (0..6).map(|i| Poly::var(6, i)).collect();
    let mut got = p1.basis.clone();
    got.sort_by_key(|p| p.terms().next().unwrap().0.clone());
    let mut exp = expected;
    exp.sort_by_key(|p| p.terms().next().unwrap().0.clone());
    assert_eq!(got, exp);
    let p2 = r.piece(2).unwrap();
    assert!(p2.preferred_basis);
    assert_eq!(p2.rank(), 11);
    let xx1 = Poly::var(6, 5).mul(&Poly::var(6, 0));
    assert!(p2.basis.contains(&xx1));
}

#[test]
fn normal_form_is_idempotent() {
    let r = presentation_from_pair(&VcPair::type3(4, 3).unwrap()).unwrap();
    for k in 0..=4 {
        let piece = r.piece(k).unwrap();
        for (i, b) in piece.basis.iter().enumerate() {
            let c = piece.coordinates(b);
            let mut e = vec![BigInt::zero(); piece.rank()];
            e[i] = BigInt::one();
            assert_eq!(c, e);
        }
        for m in &piece.monomials {
            let p = Poly::monomial(m.clone(), BigInt::one());
            let u = r.element(&p).unwrap();
            let back = r.poly_of(&u).unwrap();
            if !back.is_zero() {
                assert_eq!(r.element(&back).unwrap(), u);
            }
        }
    }
}

#[test]
fn degree_two_identities_for_every_type_and_dimension() {
    for n in 3..=6 {
        for p in sample_all_types(n, 100 + n as u64) {
            let det = p.a().det().unwrap();
            let r = presentation_from_pair(&p).unwrap();
            let x = r.x().unwrap();
            let xx1 = r.multiply(&x, &r.generator(0)).unwrap();
            for i in 0..n {
                assert_eq!(r.multiply(&x, &r.generator(i)).unwrap(), xx1);
            }
            let x2 = r.multiply(&x, &x).unwrap();
            assert_eq!(x2, r.scale(&xx1, &-&det));
            if det.is_zero() {
                assert!(x2.is_zero());
            }
            let prod = (0..n).fold(Poly::one(n + 1), |a, i| a.mul(&Poly::var(n + 1, i)));
            assert!(r.vanishes(&prod).unwrap());
            let top = top_power_x(&r).unwrap();
            assert_eq!(top.abs(), num_traits::pow(det.abs(), n - 1));
        }
    }
}

#[test]
fn top_power_examples() {
    let t2 = presentation_from_pair(&VcPair::type2(&[1, 1, 1]).unwrap()).unwrap();
    assert_eq!(top_power_x(&t2).unwrap().abs(), big(4));
    let t1 = presentation_from_pair(&VcPair::type1(IntMatrix::identity(3)).unwrap()).unwrap();
    assert_eq!(top_power_x(&t1).unwrap().abs(), big(1));
    let t0 = presentation_from_pair(&VcPair::type0(&[1, 0, 0]).unwrap()).unwrap();
    assert!(top_power_x(&t0).unwrap().is_zero());
}

#[test]
fn annihilator_ranks() {
    let p = VcPair::type1(
        IntMatrix::from_rows(&[vec![1, 0, 0], vec![1, 1, 0], vec![0, -2, 1]]).unwrap(),
    )
    .unwrap();
    let r = presentation_from_pair(&p).unwrap();
    assert_eq!(ann_rank(&r, &r.x().unwrap()).unwrap(), 3);
    assert!(ann_rank(&r, &r.generator(0)).unwrap() < 3);
    assert_eq!(ann_rank(&r, &r.zero(1).unwrap()).unwrap(), 4);
}

/// Rebuilds a ring on generators `y = G⁻¹`-images so that old generator `j`
/// becomes the linear form in column `j` of `m`.
fn transported(r: &GradedRing, m: &IntMatrix) -> (GradedRing, GeneratorMap) {
    let phi = GeneratorMap::new(m.clone()).unwrap();
    let rels: Vec<Poly> = r.relations().iter().map(|p| phi.apply(p)).collect();
    let labels = (0..r.nvars()).map(|i| format!("y{i}")).collect();
    (
        GradedRing::from_relations(labels, rels, r.top_degree()).unwrap(),
        phi,
    )
}

#[test]
fn x_class_is_recovered_after_basis_change() {
    let mut s = PairSampler::new(7);
    for n in 3..=5 {
        for t in 0..4u8 {
            let p = s.hidden(t, n).unwrap();
            let r = presentation_from_pair(&p).unwrap();
            let found = find_x_class(&r).unwrap();
            let x = r.x().unwrap();
            assert!(found == x || found == x.neg(), "n={n} t={t}");
            let g = s.unimodular(n + 1, 6);
            let (r2, phi) = transported(&r, &g);
            let image = r2.element(&phi.image(n)).unwrap();
            let found2 = find_x_class(&r2).unwrap();
            assert!(found2 == image || found2 == image.neg(), "n={n} t={t}");
        }
    }
}

/// Brute-force oracle: all primitive classes with small coefficients whose
/// annihilator has rank n.
#[test]
fn x_class_brute_force_oracle() {
    for p in [
        VcPair::type3(3, 4).unwrap(),
        VcPair::type0(&[2, -1, 0]).unwrap(),
    ] {
        let r = presentation_from_pair(&p).unwrap();
        let mut hits = Vec::new();
        let range = -2i64..=2;
        for a in range.clone() {
            for b in range.clone() {
                for c in range.clone() {
                    for d in range.clone() {
                        let z = r.linear(&ints(&[a, b, c, d])).unwrap();
                        if !z.is_zero() && ann_rank(&r, &z).unwrap() == 3 {
                            hits.push(vec![a, b, c, d]);
                        }
                    }
                }
            }
        }
        // ±x and ±2x
        assert_eq!(hits.len(), 4, "{hits:?}");
        assert!(hits.iter().all(|h| h[..3] == [0, 0, 0]));
    }
}

#[test]
fn determinant_from_ring_alone() {
    let t3 = presentation_from_pair(&VcPair::type3(3, 5).unwrap()).unwrap();
    assert_eq!(ring_det_invariant(&t3).unwrap(), big(6));
    let t0 = presentation_from_pair(&VcPair::type0(&[0, 0, 1]).unwrap()).unwrap();
    assert!(ring_det_invariant(&t0).unwrap().is_zero());
    let t2 = presentation_from_pair(&VcPair::type2(&[-1, -1, 1]).unwrap()).unwrap();
    assert_eq!(ring_det_invariant(&t2).unwrap(), big(2));
    let mut s = PairSampler::new(11);
    for n in 3..=5 {
        for t in 0..4u8 {
            let p = s.hidden(t, n).unwrap();
            let r = presentation_from_pair(&p).unwrap();
            assert_eq!(ring_det_invariant(&r).unwrap(), p.a().det().unwrap().abs());
        }
    }
}

#[test]
fn poincare_duality() {
    let mut s = PairSampler::new(3);
    for n in 3..=5 {
        for t in 0..4u8 {
            let r = presentation_from_pair(&s.hidden(t, n).unwrap()).unwrap();
            for k in 0..=n {
                assert!(poincare_pairing_det(&r, k).unwrap().abs().is_one());
            }
        }
    }
}

#[test]
fn bott_rings() {
    assert_eq!(
        bott_presentation(&IntMatrix::identity(1)).unwrap().ranks(),
        vec![1, 1]
    );
    assert_eq!(
        bott_presentation(&IntMatrix::identity(2)).unwrap().ranks(),
        vec![1, 2, 1]
    );
    let mut s = PairSampler::new(5);
    for n in 2..=5 {
        let p = s.type1(n).unwrap();
        let r = bott_presentation(p.a()).unwrap();
        assert_eq!(r.total_rank(), 1 << n);
        assert!(r.piece(n).unwrap().preferred_basis);
        for k in 0..=n {
            assert!(poincare_pairing_det(&r, k).unwrap().abs().is_one());
        }
    }
    assert!(bott_presentation(&IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap()).is_err());
}

#[test]
fn stanley_reisner_cross_check() {
    let mut s = PairSampler::new(9);
    for n in 3..=4 {
        for t in 0..4u8 {
            let p = s.hidden(t, n).unwrap();
            let f = vcfan_core::fans::fan_from_pair(&p).unwrap();
            let r = presentation_from_pair(&p).unwrap();
            assert_eq!(stanley_reisner_ranks(&f).unwrap(), r.ranks());
        }
    }
}

#[test]
fn substitution_checks() {
    let r = presentation_from_pair(&VcPair::type3(3, 2).unwrap()).unwrap();
    assert!(check_substitution_iso(&GeneratorMap::identity(4), &r, &r).unwrap());
    let swap = GeneratorMap::new(
        IntMatrix::from_rows(&[
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
        .unwrap(),
    )
    .unwrap();
    assert!(!check_substitution_iso(&swap, &r, &r).unwrap());
}

fn assert_induces_iso(phi: &GeneratorMap, src: &GradedRing, dst: &GradedRing) {
    assert!(check_substitution_iso(phi, src, dst).unwrap());
    let inv = phi.inverse().unwrap();
    assert!(check_substitution_iso(&inv, dst, src).unwrap());
    for k in 0..=src.top_degree() {
        let m = phi.induced_matrix(src, dst, k).unwrap();
        assert!(m.is_unimodular(), "degree {k}");
        let back = inv.induced_matrix(dst, src, k).unwrap();
        assert!(back.mul(&m).unwrap().is_identity());
    }
}

#[test]
fn type0_substitutions() {
    let b = ints(&[0, 1, 0]);
    let (phi, c) = type0_iso_map(&b, &b).unwrap();
    assert!(c.iter().all(Zero::is_zero));
    assert!(phi.matrix.is_identity());
    // (1,0,0) and (0,0,1) have weighted sums 2 and 0: no direct map
    assert!(type0_iso_map(&ints(&[1, 0, 0]), &ints(&[0, 0, 1])).is_err());
    let mut s = PairSampler::new(21);
    for n in 3..=5 {
        for _ in 0..4 {
            let p = s.type0(n).unwrap();
            let q = s.type0(n).unwrap();
            let rp = presentation_from_pair(&p).unwrap();
            let rq = presentation_from_pair(&q).unwrap();
            let reference = type0_reference_vector(p.b()).unwrap();
            let rr = presentation_from_pair(
                &VcPair::type0(
                    &reference
                        .iter()
                        .map(|v| i64::try_from(v).unwrap())
                        .collect::<Vec<_>>(),
                )
                .unwrap(),
            )
            .unwrap();
            let (phi, c) = type0_iso_map(p.b(), &reference).unwrap();
            assert!(c.iter().sum::<BigInt>().is_zero());
            assert_induces_iso(&phi, &rr, &rp);
            let chain = type0_iso_chain(p.b(), q.b()).unwrap();
            assert_induces_iso(&chain, &rp, &rq);
        }
    }
}

#[test]
fn type2_window_moves_and_chain() {
    let moves = type2_window_moves(&[-1, -1, 1]);
    assert_eq!(moves.len(), 1);
    assert_eq!(moves[0].target, vec![1, 1, 1]);
    let src = presentation_from_pair(&VcPair::type2(&[1, 1, 1]).unwrap()).unwrap();
    let dst = presentation_from_pair(&VcPair::type2(&[-1, -1, 1]).unwrap()).unwrap();
    assert_induces_iso(&moves[0].map, &src, &dst);
    for n in 3..=6 {
        for a in vcfan_core::classify::enumerate_type2(n).unwrap() {
            let reference = type2_reference(n);
            let phi = type2_chain_to_reference(&a).unwrap();
            let rr = presentation_from_pair(&VcPair::type2(&reference).unwrap()).unwrap();
            let ra = presentation_from_pair(&VcPair::type2(&a).unwrap()).unwrap();
            if n <= 5 {
                assert_induces_iso(&phi, &rr, &ra);
            } else {
                assert!(check_substitution_iso(&phi, &rr, &ra).unwrap());
            }
            for mv in type2_window_moves(&a) {
                let rt = presentation_from_pair(&VcPair::type2(&mv.target).unwrap()).unwrap();
                assert!(check_substitution_iso(&mv.map, &rt, &ra).unwrap());
            }
        }
    }
}

#[test]
fn isotropic_classes_mod_x() {
    let t1 = presentation_from_pair(
        &VcPair::type1(
            IntMatrix::from_rows(&[vec![1, 0, 0], vec![2, 1, 0], vec![-1, 1, 1]]).unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    let res = isotropic_mod_x(&t1).unwrap();
    assert!(res.exists());
    let t3 = presentation_from_pair(&VcPair::type3(3, -2).unwrap()).unwrap();
    assert!(!isotropic_mod_x(&t3).unwrap().exists());
    // modulo x the Type 0 relations read x_i^2 = x_i x_{i-1}; for n = 3 the
    // three pair coefficients c_2(c_2+2c_1), c_3(c_3+2c_2), c_1(c_1+2c_3)
    // vanish together only at zero
    for b in [
        vec![0, 0, 1],
        vec![1, 0, 0],
        vec![0, 0, 0, 1],
        vec![2, -1, 0, 0],
    ] {
        let t0 = presentation_from_pair(&VcPair::type0(&b).unwrap()).unwrap();
        assert!(!isotropic_mod_x(&t0).unwrap().exists());
        assert!(isotropic_oracle(&t0, 4).unwrap().is_none());
    }
}

#[test]
fn isotropic_search_agrees_with_oracle() {
    let mut s = PairSampler::new(31);
    for n in 3..=4 {
        for t in 0..4u8 {
            for _ in 0..2 {
                let r = presentation_from_pair(&s.hidden(t, n).unwrap()).unwrap();
                let res = isotropic_mod_x(&r).unwrap();
                let oracle = isotropic_oracle(&r, 4).unwrap();
                assert_eq!(res.exists(), oracle.is_some(), "n={n} t={t}");
            }
        }
        for a in [-4, -3, -2, 2, 3, 4] {
            let r = presentation_from_pair(&VcPair::type3(n, a).unwrap()).unwrap();
            let res = isotropic_mod_x(&r).unwrap();
            assert_eq!(
                res.exists(),
                isotropic_oracle(&r, 4).unwrap().is_some(),
                "a={a}"
            );
        }
    }
}

#[test]
fn isotropic_witness_squares_into_x() {
    let t1 = presentation_from_pair(&VcPair::type1(IntMatrix::identity(4)).unwrap()).unwrap();
    let res = isotropic_mod_x(&t1).unwrap();
    let w = res.witness_class().unwrap();
    let sq = t1.multiply(&w, &w).unwrap();
    let x = res.x.clone();
    // w² = k · x x_1 for some k, and x·H² is spanned by x x_1
    let xx1 = t1.multiply(&x, &t1.generator(0)).unwrap();
    let k = sq
        .coords
        .iter()
        .zip(&xx1.coords)
        .find(|(_, b)| !b.is_zero())
        .map(|(a, b)| a / b)
        .unwrap();
    assert_eq!(sq, t1.scale(&xx1, &k));
}

#[test]
fn mod_p_system_for_opposite_type3_pairs() {
    for p in [3u64, 5, 7, 11, 13] {
        let count = type3_mod_p_solutions(3, p);
        assert_eq!(count > 0, p == 5, "p={p}");
    }
    for n in 4..=5 {
        for p in [3u64, 5, 7] {
            assert_eq!(type3_mod_p_solutions(n, p), 0);
        }
    }
}

#[test]
fn opposite_type3_rings_have_equal_abs_det() {
    for a in [2i64, 3, 4, 6] {
        let r1 = presentation_from_pair(&VcPair::type3(3, a).unwrap()).unwrap();
        let r2 = presentation_from_pair(&VcPair::type3(3, -2 - a).unwrap()).unwrap();
        assert_eq!(
            ring_det_invariant(&r1).unwrap(),
            ring_det_invariant(&r2).unwrap()
        );
    }
}
