mod common;

use ncdga::algebra::check_hermitian_axioms;
use ncdga::bimodule::{iota_pair, psi_eval};
use ncdga::{Algebra, AlgebraElement, DualElement, Generator, GeneratorBasis, Ring, TensorElement};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn basis() -> std::sync::Arc<GeneratorBasis> {
    GeneratorBasis::new(vec![Generator::new("p", 0), Generator::new("q", 1), Generator::new("r", 2)], 0).unwrap()
}

/// A random arity-`n` element with up to two terms.
fn tensor(rng: &mut rand_chacha::ChaCha8Rng, alg: &std::sync::Arc<Algebra>, n: usize) -> TensorElement {
    let b = basis();
    let mut out = TensorElement::zero(alg, &b);
    for _ in 0..rng.gen_range(1..=2) {
        let gens: Vec<usize> = (0..n).map(|_| rng.gen_range(0..b.len())).collect();
        let mut x = TensorElement::constant(&b, &common::element(rng, alg));
        for g in gens {
            x = x.checked_mul(&TensorElement::generator(alg, &b, g)).unwrap();
            x = x.checked_mul(&TensorElement::constant(&b, &common::element(rng, alg))).unwrap();
        }
        out = out.checked_add(&x).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hermitian_axioms_hold(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        for alg in common::hermitian_algebras() {
            let samples: Vec<AlgebraElement> = (0..3).map(|_| common::element(&mut rng, &alg)).collect();
            let r = check_hermitian_axioms(&alg, &samples);
            prop_assert!(r.is_ok(), "{}: {}", alg, r);
        }
    }

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let mut algs = common::algebras();
        algs.extend(common::hermitian_algebras());
        for alg in algs {
            let [a, b, c] = [0; 3].map(|_| common::element(&mut rng, &alg));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }
    }

    #[test]
    fn star_reverses_products(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        for alg in common::hermitian_algebras() {
            let (a, b) = (common::element(&mut rng, &alg), common::element(&mut rng, &alg));
            prop_assert_eq!((&a * &b).star().unwrap(), &b.star().unwrap() * &a.star().unwrap());
            prop_assert_eq!(a.star().unwrap().star().unwrap(), a);
        }
    }

    #[test]
    fn balancing_is_built_into_normal_forms(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let b = basis();
        for alg in common::algebras() {
            let a = common::element(&mut rng, &alg);
            let (m, m2) = (TensorElement::generator(&alg, &b, 0), TensorElement::generator(&alg, &b, 1));
            let a = TensorElement::constant(&b, &a);
            let left = m.checked_mul(&a).unwrap().checked_mul(&m2).unwrap();
            let right = m.checked_mul(&a.checked_mul(&m2).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn psi_ignores_rebalancing(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let b = basis();
        for alg in common::algebras() {
            let betas: Vec<DualElement> = (0..2)
                .map(|_| DualElement::term(&b, &common::element(&mut rng, &alg), rng.gen_range(0..3)))
                .collect();
            let (g, h) = (rng.gen_range(0..3), rng.gen_range(0..3));
            let (a0, a1, a2) = (common::element(&mut rng, &alg), common::element(&mut rng, &alg), common::element(&mut rng, &alg));
            let c = |x| TensorElement::constant(&b, x);
            let gen = |i| TensorElement::generator(&alg, &b, i);
            let one = c(&a0).checked_mul(&gen(g)).unwrap().checked_mul(&c(&a1)).unwrap();
            let x = one.checked_mul(&gen(h).checked_mul(&c(&a2)).unwrap()).unwrap();
            let y = c(&a0).checked_mul(&gen(g).checked_mul(&c(&a1).checked_mul(&gen(h)).unwrap()).unwrap()).unwrap();
            let y = y.checked_mul(&c(&a2)).unwrap();
            prop_assert_eq!(&x, &y);
            let expect = if betas[0].get(g).is_zero() || betas[1].get(h).is_zero() {
                AlgebraElement::zero(&alg)
            } else {
                &(&(&(&a0 * &betas[0].get(g)) * &a1) * &betas[1].get(h)) * &a2
            };
            prop_assert_eq!(psi_eval(&betas, &x).unwrap(), expect);
        }
    }

    #[test]
    fn pairing_is_adjoint_to_the_actions(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        for alg in common::hermitian_algebras() {
            let n = rng.gen_range(1..=3);
            let (x, y) = (tensor(&mut rng, &alg, n), tensor(&mut rng, &alg, n));
            let (a1, a2) = (common::element(&mut rng, &alg), common::element(&mut rng, &alg));
            let lhs = iota_pair(&x.sandwich(&a1, &a2).unwrap(), &y).unwrap();
            let rhs = iota_pair(&x, &y.sandwich(&a1.star().unwrap(), &a2.star().unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs, "{} {} {}", alg, x, y);
        }
    }
}

#[test]
fn star_is_an_antihomomorphism_on_short_words() {
    for alg in
        [Algebra::free_group(Ring::Z2, 2), Algebra::free(Ring::Z2, ["g1", "g2"], true), Algebra::matrix(Ring::Z2, 2)]
    {
        let words = alg.words_up_to(4);
        for u in &words {
            assert_eq!(alg.star_word(&alg.star_word(u)), *u);
            for v in &words {
                let uv = alg.mul_words(u, v);
                let vu = alg.mul_words(&alg.star_word(v), &alg.star_word(u));
                assert_eq!(uv.map(|w| alg.star_word(&w)), vu, "{alg}: {} {}", alg.fmt_word(u), alg.fmt_word(v));
            }
        }
    }
}

#[test]
fn matrix_units_are_orthonormal() {
    for n in 1..=3 {
        let m = Algebra::matrix(Ring::Q, n);
        let units = m.basis_words().unwrap();
        assert_eq!(units.len(), n * n);
        for (i, u) in units.iter().enumerate() {
            for (j, v) in units.iter().enumerate() {
                assert_eq!(m.pair_words(u, v).is_one(), i == j);
                assert_eq!(m.pair_words(u, v).is_zero(), i != j);
            }
        }
    }
}

#[test]
fn distinct_words_have_identity_gram_matrix() {
    for alg in [Algebra::free_group(Ring::Q, 2), Algebra::split(&Algebra::free_group(Ring::Q, 1), 3)] {
        let words = alg.words_up_to(3);
        assert!(words.len() > 20);
        for (i, u) in words.iter().enumerate() {
            for (j, v) in words.iter().enumerate() {
                assert_eq!(alg.pair_words(u, v), if i == j { Ring::Q.one() } else { Ring::Q.zero() });
            }
        }
    }
    let b = basis();
    let alg = Algebra::matrix(Ring::Z2, 2);
    let mut rng = common::rng(3);
    let words: Vec<TensorElement> = (0..12)
        .map(|_| {
            let units = alg.basis_words().unwrap();
            let w =
                |rng: &mut rand_chacha::ChaCha8Rng| AlgebraElement::from_word(&alg, units.choose(rng).unwrap().clone());
            let x = TensorElement::constant(&b, &w(&mut rng))
                .checked_mul(&TensorElement::generator(&alg, &b, rng.gen_range(0..3)))
                .unwrap();
            x.checked_mul(&TensorElement::constant(&b, &w(&mut rng))).unwrap()
        })
        .collect();
    for x in &words {
        for y in &words {
            assert_eq!(iota_pair(x, y).unwrap().is_one(), x == y);
        }
    }
}

#[test]
fn free_monomial_pairing_is_not_hermitian() {
    let alg = Algebra::free(Ring::Z2, ["g1", "g2"], true);
    let samples = [AlgebraElement::one(&alg), AlgebraElement::letter(&alg, 0)];
    assert!(!check_hermitian_axioms(&alg, &samples).is_ok());
}
