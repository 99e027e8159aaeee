//! Augmentations `ε: 𝒜 → B`, developing, and the n-copy augmentation `𝔢`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{Algebra, AlgebraElement, AlgebraMorphism};
use crate::bimodule::{DualElement, GeneratorBasis, TensorElement};
use crate::dga::{Automorphism, SemifreeDga};
use crate::error::{Error, Result};
use crate::report::Report;

/// A unital DGA map into `B`, given by a coefficient morphism `f: A → B`
/// and values on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmentation {
    basis: Arc<GeneratorBasis>,
    coefficients: AlgebraMorphism,
    values: Vec<AlgebraElement>,
}

impl Augmentation {
    pub fn new(dga: &SemifreeDga, coefficients: AlgebraMorphism, values: Vec<AlgebraElement>) -> Result<Self> {
        if coefficients.source() != dga.algebra() {
            return Err(Error::TargetMismatch("coefficient morphism does not start at the DGA's algebra".into()));
        }
        if values.len() != dga.len() {
            return Err(Error::InvalidAugmentation(format!("{} values for {} generators", values.len(), dga.len())));
        }
        if values.iter().any(|v| v.algebra() != coefficients.target()) {
            return Err(Error::TargetMismatch("value outside the target algebra".into()));
        }
        Ok(Augmentation { basis: dga.basis().clone(), coefficients, values })
    }

    /// All generators to zero, into `A` itself.
    pub fn trivial(dga: &SemifreeDga) -> Self {
        Self::zero_into(dga, AlgebraMorphism::identity(dga.algebra()))
    }

    /// All generators to zero along the given coefficient morphism.
    pub fn zero_into(dga: &SemifreeDga, coefficients: AlgebraMorphism) -> Self {
        let zero = AlgebraElement::zero(coefficients.target());
        Augmentation { basis: dga.basis().clone(), values: vec![zero; dga.len()], coefficients }
    }

    /// `Π₀ ∘ φ`: for a DGA with `∂₀ = 0`, an augmentation of the conjugate `∂_φ`.
    pub fn from_offsets(dga: &SemifreeDga, phi: &Automorphism) -> Result<Self> {
        Self::new(dga, AlgebraMorphism::identity(dga.algebra()), phi.offsets())
    }

    /// `ε ∘ φ`, an augmentation of `∂_φ` when `ε` is one of `∂`.
    pub fn compose(&self, phi: &Automorphism) -> Result<Self> {
        let values = phi.images().iter().map(|img| self.eval(img)).collect::<Result<Vec<_>>>()?;
        Ok(Augmentation { basis: self.basis.clone(), coefficients: self.coefficients.clone(), values })
    }

    pub fn target(&self) -> &Arc<Algebra> {
        self.coefficients.target()
    }

    pub fn coefficients(&self) -> &AlgebraMorphism {
        &self.coefficients
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    pub fn value(&self, c: usize) -> &AlgebraElement {
        &self.values[c]
    }

    pub fn values(&self) -> &[AlgebraElement] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(AlgebraElement::is_zero)
    }

    /// The same values viewed as an augmentation of a DGA with the same
    /// generators over the target algebra (`ε_B`, the identity on `B`).
    pub fn over_target(&self, dga_b: &SemifreeDga) -> Result<Augmentation> {
        Augmentation::new(dga_b, AlgebraMorphism::identity(self.target()), self.values.clone())
    }

    /// `ε(x)`: coefficients through `f`, generators through their values.
    pub fn eval(&self, x: &TensorElement) -> Result<AlgebraElement> {
        if x.basis() != &self.basis {
            return Err(Error::MixedAlgebras);
        }
        let b = self.target();
        let mut out = AlgebraElement::zero(b);
        for (w, s) in x.terms() {
            let mut acc = self.coefficients.apply_word(&w.slots[0]);
            for (i, &g) in w.gens.iter().enumerate() {
                if acc.is_zero() {
                    break;
                }
                acc = &(&acc * &self.values[g as usize]) * &self.coefficients.apply_word(&w.slots[i + 1]);
            }
            out = &out + &acc.scale(s);
        }
        Ok(out)
    }

    /// `a ↦ rev(ε(·))` with the reversed coefficient morphism, an
    /// augmentation of the mirror DGA. On matrices this is the transpose.
    pub fn reversed(&self) -> Augmentation {
        Augmentation {
            basis: self.basis.clone(),
            coefficients: self.coefficients.reversed(),
            values: self.values.iter().map(AlgebraElement::reverse).collect(),
        }
    }
}

/// Degree condition and `ε ∘ ∂ = 0` on every generator.
pub fn check_augmentation(dga: &SemifreeDga, eps: &Augmentation) -> Report {
    let mut r = Report::new("augmentation");
    if eps.basis() != dga.basis() || eps.coefficients.source() != dga.algebra() {
        r.fail("source", "augmentation belongs to a different DGA");
        return r;
    }
    for c in 0..dga.len() {
        let v = eps.value(c);
        r.expect(dga.basis().degree(c) == 0 || v.is_zero(), dga.name(c), || {
            format!("degree {} generator sent to {v}", dga.basis().degree(c))
        });
        let e = eps.eval(dga.differential_of(c)).expect("same basis");
        r.expect(e.is_zero(), dga.name(c), || format!("eps(d {}) = {e}", dga.name(c)));
    }
    r
}

fn require_valid(dga: &SemifreeDga, eps: &Augmentation) -> Result<()> {
    let r = check_augmentation(dga, eps);
    if r.is_ok() {
        Ok(())
    } else {
        Err(Error::InvalidAugmentation(r.to_string()))
    }
}

/// `∂^ε = Φ_ε ∘ ∂_B ∘ Φ_ε⁻¹` with `Φ_ε(c) = c + ε(c)`, over the target `B`.
pub fn develop(dga: &SemifreeDga, eps: &Augmentation) -> Result<SemifreeDga> {
    require_valid(dga, eps)?;
    let dga_b = if eps.coefficients.is_identity() { dga.clone() } else { dga.change_coefficients(&eps.coefficients)? };
    let b = dga_b.algebra().clone();
    let basis = dga_b.basis().clone();
    let phi: Vec<TensorElement> = (0..dga_b.len())
        .map(|c| dga_b.generator(c).checked_add(&dga_b.constant(eps.value(c))))
        .collect::<Result<_>>()?;
    // Φ⁻¹(c) = c − ε(c), and ∂_B kills constants, so ∂^ε(c) = Φ(∂_B c).
    let differential = (0..dga_b.len())
        .map(|c| {
            dga_b.differential_of(c).substitute(
                &b,
                &basis,
                |w| AlgebraElement::from_word(&b, w.clone()),
                |g| phi[g].clone(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    SemifreeDga::new(&b, &basis, differential)
}

/// `ε^∨ = Σ ε(c) c` for an augmentation into the DGA's own algebra.
pub fn eps_dual(dga: &SemifreeDga, eps: &Augmentation) -> Result<DualElement> {
    if eps.target() != dga.algebra() || !eps.coefficients.is_identity() {
        return Err(Error::TargetMismatch("eps_dual needs an augmentation into the coefficient algebra".into()));
    }
    let mut d = DualElement::zero(dga.algebra(), dga.basis());
    for (c, v) in eps.values.iter().enumerate() {
        d.add(c, v);
    }
    Ok(d)
}

/// `𝔢(c^{ij}) = ε_i(c)` if `i = j`, else `0`, on `ncopy(dga, n)`.
pub fn ncopy_augmentation(dga: &SemifreeDga, ncopy: &SemifreeDga, eps: &[Augmentation]) -> Result<Augmentation> {
    let n = eps.len();
    if n == 0 || ncopy.len() != dga.len() * n * n {
        return Err(Error::InvalidAugmentation(format!("{n} augmentations do not match the n-copy")));
    }
    for e in eps {
        require_valid(dga, e)?;
        if e.coefficients != eps[0].coefficients {
            return Err(Error::TargetMismatch("augmentations use different coefficient morphisms".into()));
        }
    }
    let zero = AlgebraElement::zero(eps[0].target());
    let mut values = Vec::with_capacity(ncopy.len());
    for c in 0..dga.len() {
        for (i, e) in eps.iter().enumerate().take(n) {
            for j in 0..n {
                values.push(if i == j { e.value(c).clone() } else { zero.clone() });
            }
        }
    }
    let coefficients = match eps[0].coefficients.is_identity() {
        true => AlgebraMorphism::identity(ncopy.algebra()),
        false => eps[0].coefficients.clone(),
    };
    Augmentation::new(ncopy, coefficients, values)
}

/// Largest number of candidate assignments [`search_augmentations`] will try.
pub const SEARCH_LIMIT: u128 = 1 << 16;

/// All augmentations along `f` into a finite target over a prime field,
/// by exhaustive search over the degree-zero generators.
pub fn search_augmentations(dga: &SemifreeDga, f: &AlgebraMorphism) -> Result<Vec<Augmentation>> {
    let target = f.target();
    let basis_words = target.basis_words().ok_or_else(|| Error::InfiniteDimensionalCoefficients(target.to_string()))?;
    let p = match target.ring() {
        crate::scalar::Ring::Zp(p) => *p as u128,
        other => {
            return Err(Error::InfiniteDimensionalCoefficients(format!("search needs a finite ring, not {other}")))
        }
    };
    let free: Vec<usize> = (0..dga.len()).filter(|&c| dga.basis().degree(c) == 0).collect();
    let per_gen = p.checked_pow(basis_words.len() as u32).unwrap_or(u128::MAX);
    let total = (0..free.len()).try_fold(1u128, |acc, _| acc.checked_mul(per_gen)).unwrap_or(u128::MAX);
    if total > SEARCH_LIMIT {
        return Err(Error::InvalidAugmentation(format!(
            "{total} candidate assignments exceed the search limit {SEARCH_LIMIT}"
        )));
    }
    let ring = target.ring().clone();
    let decode = |mut code: u128| -> Vec<AlgebraElement> {
        let mut values = vec![AlgebraElement::zero(target); dga.len()];
        for &c in &free {
            let mut v = AlgebraElement::zero(target);
            for w in &basis_words {
                let digit = (code % p) as i64;
                code /= p;
                v.add_term(w.clone(), &ring.from_int(digit));
            }
            values[c] = v;
        }
        values
    };
    let found: Vec<Augmentation> = (0..total as u64)
        .into_par_iter()
        .filter_map(|code| {
            let eps = Augmentation::new(dga, f.clone(), decode(code as u128)).ok()?;
            check_augmentation(dga, &eps).is_ok().then_some(eps)
        })
        .collect();
    Ok(found)
}
