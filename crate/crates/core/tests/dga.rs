mod common;

use std::sync::Arc;

use ncdga::ainfinity::verify_ainfty;
use ncdga::augmentation::{check_augmentation, develop, ncopy_augmentation, search_augmentations};
use ncdga::corpus;
use ncdga::dga::check_mixed_filtration;
use ncdga::dsl::{parse_dga, print_dga};
use ncdga::{
    Algebra, AlgebraElement, AlgebraKind, AlgebraMorphism, Augmentation, Case, LinkGrading, Ring, SemifreeDga,
    VerifyOptions,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;

/// Unital morphisms out of `alg` used for coefficient changes.
fn morphisms(alg: &Arc<Algebra>) -> Vec<AlgebraMorphism> {
    let ring = alg.ring().clone();
    let mut out = vec![AlgebraMorphism::identity(alg), AlgebraMorphism::diagonal(alg, 2)];
    let m2 = Algebra::matrix(ring.clone(), 2);
    let swap = &AlgebraElement::letter(&m2, 1) + &AlgebraElement::letter(&m2, 2);
    match alg.kind() {
        AlgebraKind::Free { symbols } => {
            let group = Algebra::free_group(ring.clone(), 2);
            let images = (0..symbols.len()).map(|i| AlgebraElement::letter(&group, i % 2)).collect();
            out.push(AlgebraMorphism::from_images(alg, &group, images).unwrap());
            let images =
                (0..symbols.len()).map(|i| if i == 0 { swap.clone() } else { AlgebraElement::one(&m2) }).collect();
            out.push(AlgebraMorphism::from_images(alg, &m2, images).unwrap());
            let s = Algebra::scalars(ring);
            out.push(AlgebraMorphism::from_images(alg, &s, vec![AlgebraElement::one(&s); symbols.len()]).unwrap());
        }
        AlgebraKind::FreeGroup { rank } => {
            out.push(AlgebraMorphism::from_images(alg, &m2, vec![swap; *rank]).unwrap());
        }
        _ => {}
    }
    out
}

fn components_ok(dga: &SemifreeDga) -> bool {
    (0..=2 * dga.max_arity().max(1)).all(|n| dga.check_component_relations(n).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_iff_component_relations(seed in any::<u64>()) {
        let d = common::dga(seed);
        prop_assert_eq!(d.check_d_squared().is_ok(), components_ok(&d), "{}", print_dga(&d));
        let (s, _) = common::stable_dga(seed);
        prop_assert!(s.check_d_squared().is_ok());
        prop_assert!(components_ok(&s));
    }

    #[test]
    fn coefficient_change_commutes_with_d(seed in any::<u64>()) {
        let d = common::dga(seed);
        let mut rng = common::rng(seed);
        for f in morphisms(d.algebra()) {
            let b = d.change_coefficients(&f).unwrap();
            let phi = common::automorphism(&mut rng, &d, false);
            for c in 0..d.len() {
                for x in [d.generator(c), phi.image(c).clone()] {
                    let lhs = d.push_forward(&f, &d.d(&x).unwrap()).unwrap();
                    let rhs = b.d(&d.push_forward(&f, &x).unwrap()).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
            if d.check_d_squared().is_ok() {
                prop_assert!(b.check_d_squared().is_ok());
            }
        }
    }

    #[test]
    fn conjugation_round_trips(seed in any::<u64>()) {
        let d = common::dga(seed);
        let mut rng = common::rng(seed ^ 1);
        let phi = common::automorphism(&mut rng, &d, true);
        let inv = phi.inverse();
        prop_assert_eq!(d.conjugate(&phi).unwrap().conjugate(&inv).unwrap(), d.clone());
        for c in 0..d.len() {
            prop_assert_eq!(phi.apply(&inv.apply(&d.generator(c)).unwrap()).unwrap(), d.generator(c));
        }
        prop_assert_eq!(d.conjugate(&phi).unwrap().check_d_squared().is_ok(), d.check_d_squared().is_ok());
    }

    #[test]
    fn mirror_is_an_involution(seed in any::<u64>()) {
        let d = common::dga(seed);
        prop_assert_eq!(d.mirror().mirror(), d.clone());
        prop_assert_eq!(d.mirror().check_d_squared().is_ok(), d.check_d_squared().is_ok());
        let (s, _) = common::stable_dga(seed);
        prop_assert!(s.mirror().check_d_squared().is_ok());
    }

    #[test]
    fn n_copies_restrict_to_the_original(seed in any::<u64>(), n in 1usize..=3) {
        let d = common::dga(seed);
        let (an, lg) = d.ncopy(n);
        prop_assert!(an.check_link_grading(&lg).is_ok());
        prop_assert!(check_mixed_filtration(&an, &lg).is_ok());
        prop_assert_eq!(an.check_d_squared().is_ok(), d.check_d_squared().is_ok());
        prop_assert_eq!(LinkGrading::from_basis(an.basis()), Some(lg.clone()));
        for k in 1..=n {
            let (sub, sub_lg) = an.restrict_to_components(&lg, &[k]).unwrap();
            prop_assert!(sub.same_up_to_renaming(&d));
            prop_assert_eq!(sub_lg, LinkGrading::single(d.len()));
        }
    }

    #[test]
    fn action_subdgas_are_subcomplexes(seed in any::<u64>()) {
        let d = common::dga(seed);
        for level in 1..=d.len() as i64 + 1 {
            let sub = d.action_subdga(&num_rational::BigRational::from_integer(level.into())).unwrap();
            prop_assert_eq!(sub.len(), (level - 1) as usize);
            for c in 0..sub.len() {
                prop_assert_eq!(sub.differential_of(c).rebased(d.basis(), Some), d.differential_of(c).clone());
            }
        }
    }

    #[test]
    fn offsets_of_automorphisms_are_augmentations(seed in any::<u64>()) {
        let (d, eps) = common::stable_dga(seed);
        prop_assert!(check_augmentation(&d, &eps).is_ok());
        let dev = develop(&d, &eps).unwrap();
        prop_assert!(dev.check_d_squared().is_ok());
        for c in 0..dev.len() {
            prop_assert!(dev.differential_component(c, 0).is_zero());
        }
        let r = verify_ainfty(&d, std::slice::from_ref(&eps), Case::I, 3, &VerifyOptions::default()).unwrap();
        prop_assert!(r.is_ok(), "{}", r);
        let hermitian = d.algebra().is_hermitian() && !matches!(d.algebra().kind(), AlgebraKind::Free { symbols } if !symbols.is_empty());
        if hermitian {
            let r = verify_ainfty(&d, &[eps], Case::II, 3, &VerifyOptions::default()).unwrap();
            prop_assert!(r.is_ok(), "{}", r);
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        for d in [common::dga(seed), common::stable_dga(seed).0] {
            let text = print_dga(&d);
            let doc = parse_dga(&text).unwrap();
            prop_assert_eq!(&doc.dga, &d, "{}", text);
            prop_assert_eq!(doc.print(), text);
        }
    }
}

#[test]
fn n_copy_augmentation_restricts_to_each_component() {
    let (q, augs) = corpus::conjugated_rational();
    let (m, maugs) = corpus::toy_matrix();
    for (dga, augs) in [(q, augs), (m, maugs)] {
        for n in 1..=3 {
            let tuple: Vec<Augmentation> = (0..n).map(|i| augs[i % augs.len()].clone()).collect();
            let (an, lg) = dga.ncopy(n);
            let e = ncopy_augmentation(&dga, &an, &tuple).unwrap();
            assert!(check_augmentation(&an, &e).is_ok());
            for k in 1..=n {
                let (sub, _) = an.restrict_to_components(&lg, &[k]).unwrap();
                assert_eq!(sub.len(), dga.len());
                for c in 0..dga.len() {
                    assert_eq!(e.value(c * n * n + (k - 1) * n + (k - 1)), tuple[k - 1].value(c));
                    for j in (1..=n).filter(|&j| j != k) {
                        assert!(e.value(c * n * n + (k - 1) * n + (j - 1)).is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn every_augmentation_of_the_matrix_toy_develops() {
    let (t, augs) = corpus::toy_matrix();
    let all = search_augmentations(&t, augs[0].coefficients()).unwrap();
    assert_eq!(all.len(), 16);
    for e in &all {
        let dev = develop(&t, e).unwrap();
        assert!(dev.check_d_squared().is_ok());
        assert!((0..dev.len()).all(|c| dev.differential_component(c, 0).is_zero()));
    }
    let mut rng = common::rng(1);
    let sample: Vec<Augmentation> = all.choose_multiple(&mut rng, 3).cloned().collect();
    let r = verify_ainfty(&t, &sample, Case::II, 3, &VerifyOptions::default()).unwrap();
    assert!(r.is_ok(), "{r}");
}

#[test]
fn corrupted_differential_is_caught_at_the_same_generator() {
    let text = corpus::TOY.replace("d c3 = c5*g2*g1*c4", "d c3 = c5*g1*g2*c4");
    let bad = parse_dga(&text).unwrap().dga;
    let d2 = bad.check_d_squared();
    assert_eq!(d2.violations.len(), 1);
    assert_eq!(d2.violations[0].location, "c1");
    let comp = bad.check_component_relations(2);
    assert_eq!(comp.violations.iter().map(|v| v.location.as_str()).collect::<Vec<_>>(), vec!["c1"]);
}

#[test]
fn scalar_ring_mismatch_is_rejected() {
    let t = corpus::toy();
    let q = Algebra::scalars(Ring::Q);
    assert!(AlgebraMorphism::from_images(t.algebra(), &q, vec![AlgebraElement::one(&q); 2]).is_err());
}
