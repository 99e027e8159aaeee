#![allow(dead_code)]

use std::sync::Arc;

use ncdga::ainfinity::default_pool;
use ncdga::{
    Algebra, AlgebraElement, Augmentation, Automorphism, Generator, GeneratorBasis, Ring, SemifreeDga, TensorElement,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn algebras() -> Vec<Arc<Algebra>> {
    vec![
        Algebra::free(Ring::Z2, ["g1", "g2"], false),
        Algebra::free(Ring::Q, ["g1", "g2"], false),
        Algebra::free_group(Ring::Q, 2),
        Algebra::free_group(Ring::Zp(3), 1),
        Algebra::matrix(Ring::Zp(3), 2),
        Algebra::scalars(Ring::Q),
    ]
}

pub fn hermitian_algebras() -> Vec<Arc<Algebra>> {
    vec![
        Algebra::free_group(Ring::Q, 2),
        Algebra::free_group(Ring::Z2, 2),
        Algebra::matrix(Ring::Zp(3), 2),
        Algebra::matrix(Ring::Q, 3),
        Algebra::split(&Algebra::free_group(Ring::Q, 1), 2),
    ]
}

pub fn scalar(rng: &mut ChaCha8Rng, ring: &Ring) -> ncdga::Scalar {
    match ring {
        Ring::Zp(p) => ring.from_int(rng.gen_range(1..*p as i64)),
        _ => ring.from_int(*[-2i64, -1, 1, 2, 3].choose(rng).unwrap()),
    }
}

/// A nonzero combination of up to three products of pool elements.
pub fn element(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>) -> AlgebraElement {
    let pool = default_pool(alg);
    loop {
        let mut x = AlgebraElement::zero(alg);
        for _ in 0..rng.gen_range(1..=3) {
            let a = pool.choose(rng).unwrap();
            let b = pool.choose(rng).unwrap();
            x = &x + &(a * b).scale(&scalar(rng, alg.ring()));
        }
        if !x.is_zero() {
            return x;
        }
    }
}

/// A word of generators drawn from `gens` with total degree `degree`, with
/// random coefficients between them; `None` if none was found quickly.
pub fn word(
    rng: &mut ChaCha8Rng,
    alg: &Arc<Algebra>,
    basis: &Arc<GeneratorBasis>,
    gens: &[usize],
    degree: i64,
    max_arity: usize,
) -> Option<TensorElement> {
    for _ in 0..40 {
        let arity = rng.gen_range(0..=max_arity);
        if arity > 0 && gens.is_empty() {
            continue;
        }
        let picks: Vec<usize> = (0..arity).map(|_| *gens.choose(rng).unwrap()).collect();
        let deg: i64 = picks.iter().map(|&g| basis.degree(g)).sum();
        if basis.reduce(deg) != basis.reduce(degree) {
            continue;
        }
        let mut x = TensorElement::constant(basis, &element(rng, alg));
        for g in picks {
            x = x
                .checked_mul(&TensorElement::generator(alg, basis, g))
                .unwrap()
                .checked_mul(&TensorElement::constant(basis, &element(rng, alg)))
                .unwrap();
        }
        if !x.is_zero() {
            return Some(x);
        }
    }
    None
}

fn basis(rng: &mut ChaCha8Rng, len: usize, lo: i64, hi: i64) -> Arc<GeneratorBasis> {
    let gens = (0..len)
        .map(|i| {
            let g = Generator::new(format!("x{}", i + 1), rng.gen_range(lo..=hi));
            g.with_action(num_rational::BigRational::from_integer((i as i64 + 1).into()))
        })
        .collect();
    GeneratorBasis::new(gens, 0).unwrap()
}

/// A DGA whose differentials only involve earlier generators. `∂² = 0` is
/// not arranged.
pub fn dga(seed: u64) -> SemifreeDga {
    let mut rng = rng(seed);
    let alg = algebras().choose(&mut rng).unwrap().clone();
    let len = rng.gen_range(2..=5);
    let b = basis(&mut rng, len, -1, 3);
    let mut differential = Vec::new();
    for c in 0..b.len() {
        let earlier: Vec<usize> = (0..c).collect();
        let mut dc = TensorElement::zero(&alg, &b);
        for _ in 0..rng.gen_range(0..=3) {
            if let Some(w) = word(&mut rng, &alg, &b, &earlier, b.degree(c) - 1, 3) {
                if w.max_arity() > 0 {
                    dc = dc.checked_add(&w).unwrap();
                }
            }
        }
        differential.push(dc);
    }
    SemifreeDga::new(&alg, &b, differential).unwrap()
}

/// `c ↦ c + (words in earlier generators of degree |c|)`, constants allowed
/// in degree 0 when `constants` is set.
pub fn automorphism(rng: &mut ChaCha8Rng, dga: &SemifreeDga, constants: bool) -> Automorphism {
    let (alg, b) = (dga.algebra().clone(), dga.basis().clone());
    let images = (0..dga.len())
        .map(|c| {
            let earlier: Vec<usize> = (0..c).collect();
            let mut img = dga.generator(c);
            for _ in 0..rng.gen_range(0..=2) {
                if let Some(w) = word(rng, &alg, &b, &earlier, b.degree(c), 2) {
                    if constants || w.max_arity() > 0 {
                        img = img.checked_add(&w).unwrap();
                    }
                }
            }
            img
        })
        .collect();
    Automorphism::new(dga, images).unwrap()
}

const MAX_TERMS: usize = 300;

/// A stabilized trivial DGA conjugated by a random triangular automorphism
/// with constants, together with the augmentation `Π₀ ∘ φ`.
pub fn stable_dga(seed: u64) -> (SemifreeDga, Augmentation) {
    let mut rng = rng(seed);
    let alg = algebras().choose(&mut rng).unwrap().clone();
    let len = rng.gen_range(1..=3);
    let b = basis(&mut rng, len, 0, 2);
    let mut base = SemifreeDga::trivial(&alg, &b);
    for i in 0..rng.gen_range(1..=2) {
        let d = rng.gen_range(0..=2);
        let (e, f) = (format!("e{i}"), format!("f{i}"));
        base = base.stabilize(d, (&e, &f)).unwrap();
    }
    // Conjugation can multiply the number of terms; redraw oversized ones.
    loop {
        let phi = automorphism(&mut rng, &base, true);
        let dga = base.conjugate(&phi).unwrap();
        if dga.differentials().iter().map(|x| x.len()).sum::<usize>() <= MAX_TERMS {
            let eps = Augmentation::from_offsets(&base, &phi).unwrap();
            return (dga, eps);
        }
    }
}
