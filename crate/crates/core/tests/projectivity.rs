use vcfan_core::classify::{classify_pair, enumerate_type2};
use vcfan_core::fans::{fan_from_pair, VcPair};
use vcfan_core::projectivity::*;
use vcfan_core::sample::PairSampler;

fn check_certificate(f: &vcfan_core::fans::Fan, report: &ProjectivityReport) {
    let sys = build_lp(f).unwrap();
    match &report.outcome {
        LpOutcome::Feasible { witness } => {
            assert!(report.projective);
            assert!(sys.satisfied_by(witness));
            assert!(verify_psi(
                f,
                &SupportFunction {
                    values: witness.clone()
                }
            ));
        }
        LpOutcome::Infeasible { farkas } => {
            assert!(!report.projective);
            assert!(sys.certifies_infeasible(farkas));
        }
    }
}

#[test]
fn every_type2_class_up_to_six_matches_closed_form() {
    for n in 3..=6 {
        for signs in enumerate_type2(n).unwrap() {
            let p = VcPair::type2(&signs).unwrap();
            let f = fan_from_pair(&p).unwrap();
            let report = fan_projectivity(&f).unwrap();
            let ones = signs.iter().filter(|&&s| s == 1).count();
            assert_eq!(report.projective, ones < 3, "{signs:?}");
            assert_eq!(closed_form_projective(&p).unwrap(), report.projective);
            check_certificate(&f, &report);
        }
    }
}

#[test]
fn sampled_types_carry_valid_certificates() {
    let mut s = PairSampler::new(29);
    for n in 3..=6 {
        for t in 0..4u8 {
            let p = s.hidden(t, n).unwrap();
            let f = fan_from_pair(&p).unwrap();
            let report = fan_projectivity(&f).unwrap();
            assert_eq!(
                report.projective,
                closed_form_projective(&p).unwrap(),
                "{p:?}"
            );
            check_certificate(&f, &report);
        }
    }
}

#[test]
fn explicit_support_functions_are_strictly_convex() {
    let mut s = PairSampler::new(41);
    for n in 3..=7 {
        let p = s.type0(n).unwrap();
        let f = fan_from_pair(&p).unwrap();
        assert!(verify_psi(&f, &psi_type0(&p).unwrap()), "{p:?}");
        let q = s.type3(n).unwrap();
        let g = fan_from_pair(&q).unwrap();
        assert!(verify_psi(&g, &psi_type3(&q).unwrap()), "{q:?}");
    }
}

#[test]
fn fourier_motzkin_agrees_in_dimension_three() {
    let mut s = PairSampler::new(43);
    let mut pairs: Vec<VcPair> = (0..4u8).map(|t| s.of_type(t, 3).unwrap()).collect();
    pairs.push(VcPair::type2(&[1, 1, 1]).unwrap());
    for p in pairs {
        let f = fan_from_pair(&p).unwrap();
        let sys = build_lp(&f).unwrap();
        let exact = matches!(lp_feasible(&sys).unwrap(), LpOutcome::Feasible { .. });
        assert_eq!(lp_feasible_fm(&sys, &[1, 2, 3]), exact, "{p:?}");
    }
}

#[test]
fn all_plus_det_two_pair_is_not_projective() {
    let p = VcPair::from_i64(&[vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]], &[1, 1, 1]).unwrap();
    assert_eq!(classify_pair(&p).unwrap().type_index, 2);
    assert!(!is_projective(&p).unwrap());
    let doc = projectivity_report(&p).unwrap().to_document();
    assert!(doc.farkas.is_some() && doc.witness.is_none());
}

#[test]
fn integral_scaling_keeps_signs() {
    let psi = SupportFunction {
        values: vec![
            num_rational::BigRational::new((-3).into(), 2.into()),
            num_rational::BigRational::new(1.into(), 4.into()),
        ],
    };
    let v: Vec<i64> = psi
        .integral()
        .iter()
        .map(|x| i64::try_from(x).unwrap())
        .collect();
    assert_eq!(v, vec![-6, 1]);
}
