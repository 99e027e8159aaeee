//! Free bimodules on a generator basis, their balanced tensor powers, duals,
//! and adjoints with respect to the pairing ι.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Signed;
use smallvec::SmallVec;

use crate::algebra::{fmt_terms, Algebra, AlgebraElement, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub action: Option<BigRational>,
    pub link: Option<(usize, usize)>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Generator { name: name.into(), degree, action: None, link: None }
    }

    pub fn with_action(mut self, action: BigRational) -> Self {
        self.action = Some(action);
        self
    }

    pub fn with_link(mut self, b: usize, e: usize) -> Self {
        self.link = Some((b, e));
        self
    }
}

/// An ordered list of generators with degrees in `Z/modulus` (`modulus = 0`
/// means `Z`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorBasis {
    generators: Vec<Generator>,
    modulus: u32,
}

impl GeneratorBasis {
    pub fn new(generators: Vec<Generator>, modulus: u32) -> Result<Arc<Self>> {
        let mut generators = generators;
        for (i, g) in generators.iter_mut().enumerate() {
            if g.name.is_empty() {
                return Err(Error::InvalidDifferential(format!("generator {i} has no name")));
            }
            if let Some(a) = &g.action {
                if !a.is_positive() {
                    return Err(Error::InvalidDifferential(format!("action of {} must be positive", g.name)));
                }
            }
            g.degree = reduce_degree(g.degree, modulus);
        }
        let mut names: Vec<&str> = generators.iter().map(|g| g.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidDifferential(format!("duplicate generator {}", w[0])));
        }
        Ok(Arc::new(GeneratorBasis { generators, modulus }))
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.generators[i].degree
    }

    pub fn reduce(&self, d: i64) -> i64 {
        reduce_degree(d, self.modulus)
    }

    /// Degree parity, meaningful because the modulus is even or zero.
    pub fn parity(&self, i: usize) -> u8 {
        (self.generators[i].degree.rem_euclid(2)) as u8
    }
}

pub fn reduce_degree(d: i64, modulus: u32) -> i64 {
    if modulus == 0 {
        d
    } else {
        d.rem_euclid(modulus as i64)
    }
}

/// A normal-form word `a₀ c_{i₁} a₁ ⋯ c_{iₙ} aₙ` of `M^{⊠n}`; every slot is a
/// single algebra basis word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorWord {
    pub gens: SmallVec<[u32; 4]>,
    pub slots: SmallVec<[Word; 5]>,
}

impl TensorWord {
    pub fn constant(w: Word) -> Self {
        TensorWord { gens: SmallVec::new(), slots: smallvec::smallvec![w] }
    }

    pub fn arity(&self) -> usize {
        self.gens.len()
    }

    fn total_len(&self) -> usize {
        self.gens.len() + self.slots.iter().map(|s| s.0.len()).sum::<usize>()
    }

    /// Concatenation, merging the touching slots; `None` when they multiply to zero.
    pub fn concat(&self, other: &TensorWord, algebra: &Algebra) -> Option<TensorWord> {
        let mid = algebra.mul_words(self.slots.last().unwrap(), &other.slots[0])?;
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        let mut slots: SmallVec<[Word; 5]> = self.slots[..self.slots.len() - 1].iter().cloned().collect();
        slots.push(mid);
        slots.extend(other.slots[1..].iter().cloned());
        Some(TensorWord { gens, slots })
    }
}

impl Ord for TensorWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_len()
            .cmp(&other.total_len())
            .then_with(|| self.gens.cmp(&other.gens))
            .then_with(|| self.slots.cmp(&other.slots))
    }
}

impl PartialOrd for TensorWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite combination of tensor words, possibly of mixed arities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    terms: BTreeMap<TensorWord, Scalar>,
    algebra: Arc<Algebra>,
    basis: Arc<GeneratorBasis>,
}

impl TensorElement {
    pub fn zero(algebra: &Arc<Algebra>, basis: &Arc<GeneratorBasis>) -> Self {
        TensorElement { terms: BTreeMap::new(), algebra: algebra.clone(), basis: basis.clone() }
    }

    pub fn from_terms(
        algebra: &Arc<Algebra>,
        basis: &Arc<GeneratorBasis>,
        terms: impl IntoIterator<Item = (TensorWord, Scalar)>,
    ) -> Self {
        let mut e = Self::zero(algebra, basis);
        for (w, s) in terms {
            e.add_term(w, &s);
        }
        e
    }

    /// An algebra element as an arity-zero tensor.
    pub fn constant(basis: &Arc<GeneratorBasis>, a: &AlgebraElement) -> Self {
        Self::from_terms(a.algebra(), basis, a.terms().map(|(w, s)| (TensorWord::constant(w.clone()), s.clone())))
    }

    pub fn one(algebra: &Arc<Algebra>, basis: &Arc<GeneratorBasis>) -> Self {
        Self::constant(basis, &AlgebraElement::one(algebra))
    }

    /// The generator `c_g`, i.e. `1·c_g·1` in normal form.
    pub fn generator(algebra: &Arc<Algebra>, basis: &Arc<GeneratorBasis>, g: usize) -> Self {
        let units = algebra.unit_words();
        let one = algebra.ring().one();
        let mut e = Self::zero(algebra, basis);
        for u in &units {
            for v in &units {
                let w = TensorWord {
                    gens: smallvec::smallvec![g as u32],
                    slots: smallvec::smallvec![u.clone(), v.clone()],
                };
                e.add_term(w, &one);
            }
        }
        e
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &TensorWord) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.algebra.ring().zero())
    }

    pub fn add_term(&mut self, w: TensorWord, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(c) => {
                *c = &*c + s;
                if c.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, s.clone());
            }
        }
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        let alg = Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra;
        let basis = Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis;
        if alg && basis {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (w, s) in &other.terms {
            out.add_term(w.clone(), s);
        }
        Ok(out)
    }

    pub fn add_assign_scaled(&mut self, other: &Self, s: &Scalar) {
        for (w, t) in &other.terms {
            self.add_term(w.clone(), &(t * s));
        }
    }

    /// The product in the tensor algebra (balanced concatenation).
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = Self::zero(&self.algebra, &self.basis);
        for (a, s) in &self.terms {
            for (b, t) in &other.terms {
                if let Some(w) = a.concat(b, &self.algebra) {
                    out.add_term(w, &(s * t));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(&self.algebra, &self.basis);
        if !s.is_zero() {
            for (w, t) in &self.terms {
                out.add_term(w.clone(), &(t * s));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-self.algebra.ring().one())
    }

    /// `a · self · b`.
    pub fn sandwich(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<Self> {
        let left = Self::constant(&self.basis, a);
        let right = Self::constant(&self.basis, b);
        left.checked_mul(self)?.checked_mul(&right)
    }

    /// The arity-`n` component.
    pub fn arity_part(&self, n: usize) -> Self {
        Self::from_terms(
            &self.algebra,
            &self.basis,
            self.terms.iter().filter(|(w, _)| w.arity() == n).map(|(w, s)| (w.clone(), s.clone())),
        )
    }

    pub fn max_arity(&self) -> usize {
        self.terms.keys().map(TensorWord::arity).max().unwrap_or(0)
    }

    /// The arity if every word has the same one.
    pub fn arity(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(TensorWord::arity);
        let first = it.next()?;
        it.all(|a| a == first).then_some(first)
    }

    /// Maximum of `Σ word_len(slots)` over the words.
    pub fn max_slot_len(&self) -> usize {
        self.terms.keys().map(|w| w.slots.iter().map(|s| self.algebra.word_len(s)).sum::<usize>()).max().unwrap_or(0)
    }

    /// Degree of a word: the sum of its generator degrees.
    pub fn word_degree(&self, w: &TensorWord) -> i64 {
        self.basis.reduce(w.gens.iter().map(|&g| self.basis.degree(g as usize)).sum())
    }

    /// Substitutes into every word: slots through `slot_map`, generators
    /// through `gen_map`, multiplying the results in order.
    pub fn substitute(
        &self,
        algebra: &Arc<Algebra>,
        basis: &Arc<GeneratorBasis>,
        slot_map: impl Fn(&Word) -> AlgebraElement,
        gen_map: impl Fn(usize) -> TensorElement,
    ) -> Result<TensorElement> {
        let gen_images: BTreeMap<u32, TensorElement> = self
            .terms
            .keys()
            .flat_map(|w| w.gens.iter().copied())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|g| (g, gen_map(g as usize)))
            .collect();
        let mut out = TensorElement::zero(algebra, basis);
        for (w, s) in &self.terms {
            let mut acc = TensorElement::constant(basis, &slot_map(&w.slots[0]));
            for (i, g) in w.gens.iter().enumerate() {
                if acc.is_zero() {
                    break;
                }
                acc = acc.checked_mul(&gen_images[g])?;
                acc = acc.checked_mul(&TensorElement::constant(basis, &slot_map(&w.slots[i + 1])))?;
            }
            out.add_assign_scaled(&acc, s);
        }
        Ok(out)
    }

    /// Same words over another basis (used after relabelling generators).
    pub fn rebased(&self, basis: &Arc<GeneratorBasis>, relabel: impl Fn(u32) -> Option<u32>) -> TensorElement {
        let mut out = TensorElement::zero(&self.algebra, basis);
        'words: for (w, s) in &self.terms {
            let mut gens = SmallVec::new();
            for &g in &w.gens {
                match relabel(g) {
                    Some(h) => gens.push(h),
                    None => continue 'words,
                }
            }
            out.add_term(TensorWord { gens, slots: w.slots.clone() }, s);
        }
        out
    }

    pub fn fmt_word(&self, w: &TensorWord) -> String {
        display_word(&self.algebra, &self.basis, &w.gens, &w.slots.iter().map(|s| Some(s.clone())).collect::<Vec<_>>())
    }
}

fn display_word(algebra: &Algebra, basis: &GeneratorBasis, gens: &[u32], slots: &[Option<Word>]) -> String {
    let mut parts = Vec::new();
    let slot_text = |s: &Option<Word>| match s {
        None => None,
        Some(w) if algebra.is_unit_word(w) => None,
        Some(w) => Some(algebra.fmt_word(w)),
    };
    if let Some(t) = slot_text(&slots[0]) {
        parts.push(t);
    }
    for (i, g) in gens.iter().enumerate() {
        parts.push(basis.name(*g as usize).to_string());
        if let Some(t) = slot_text(&slots[i + 1]) {
            parts.push(t);
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Generators, slots (`None` for a collapsed unit) and coefficient.
type Row = (SmallVec<[u32; 4]>, Vec<Option<Word>>, Scalar);

/// Collapses complete sums over the unit words in one slot into an elided
/// unit slot, so that e.g. `Σ E_ii c E_jj` prints as `c`.
fn collapse_units(algebra: &Algebra, terms: Vec<(TensorWord, Scalar)>) -> Vec<Row> {
    let mut rows: Vec<Row> =
        terms.into_iter().map(|(w, s)| (w.gens, w.slots.into_iter().map(Some).collect(), s)).collect();
    let units = algebra.unit_words();
    if units.len() < 2 {
        return rows;
    }
    let max_slots = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
    for p in 0..max_slots {
        let mut groups: BTreeMap<Row, Vec<usize>> = BTreeMap::new();
        for (i, (g, slots, s)) in rows.iter().enumerate() {
            if p < slots.len() && slots[p].as_ref().is_some_and(|w| units.contains(w)) {
                let mut key = slots.clone();
                key[p] = None;
                groups.entry((g.clone(), key, s.clone())).or_default().push(i);
            }
        }
        let mut drop = vec![false; rows.len()];
        let mut added = Vec::new();
        for ((g, key, s), idx) in groups {
            if idx.len() == units.len() {
                for i in idx {
                    drop[i] = true;
                }
                added.push((g, key, s));
            }
        }
        let mut next: Vec<_> = rows.into_iter().zip(drop).filter(|(_, d)| !d).map(|(r, _)| r).collect();
        next.extend(added);
        rows = next;
    }
    rows
}

type SortKey = (usize, SmallVec<[u32; 4]>, Vec<Option<Word>>);

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = collapse_units(&self.algebra, self.terms.iter().map(|(w, s)| (w.clone(), s.clone())).collect());
        let mut keyed: Vec<(SortKey, String, Scalar)> = rows
            .into_iter()
            .map(|(g, slots, s)| {
                let len = g.len() + slots.iter().flatten().map(|w| w.0.len()).sum::<usize>();
                let text = display_word(&self.algebra, &self.basis, &g, &slots);
                ((len, g, slots), text, s)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        f.write_str(&fmt_terms(keyed.iter().map(|(_, t, s)| (t.clone(), s))))
    }
}

/// An element `Σ φ(c)·c` of the dual bimodule, stored as the coefficient
/// `φ(c) ∈ A` of each generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualElement {
    terms: BTreeMap<usize, AlgebraElement>,
    algebra: Arc<Algebra>,
    basis: Arc<GeneratorBasis>,
}

impl DualElement {
    pub fn zero(algebra: &Arc<Algebra>, basis: &Arc<GeneratorBasis>) -> Self {
        DualElement { terms: BTreeMap::new(), algebra: algebra.clone(), basis: basis.clone() }
    }

    /// The functional `a·c`.
    pub fn term(basis: &Arc<GeneratorBasis>, a: &AlgebraElement, g: usize) -> Self {
        let mut d = Self::zero(a.algebra(), basis);
        d.add(g, a);
        d
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    pub fn add(&mut self, g: usize, a: &AlgebraElement) {
        let sum = match self.terms.get(&g) {
            Some(x) => x + a,
            None => a.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&g);
        } else {
            self.terms.insert(g, sum);
        }
    }

    pub fn plus(&self, other: &DualElement) -> DualElement {
        let mut out = self.clone();
        for (g, a) in &other.terms {
            out.add(*g, a);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> DualElement {
        let mut out = Self::zero(&self.algebra, &self.basis);
        for (g, a) in &self.terms {
            out.add(*g, &a.scale(s));
        }
        out
    }

    pub fn get(&self, g: usize) -> AlgebraElement {
        self.terms.get(&g).cloned().unwrap_or_else(|| AlgebraElement::zero(&self.algebra))
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &AlgebraElement)> {
        self.terms.iter().map(|(g, a)| (*g, a))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for DualElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rows: Vec<(Word, usize, String, Scalar)> = Vec::new();
        for (&g, a) in &self.terms {
            let name = self.basis.name(g);
            if a.is_one() {
                rows.push((Word::empty(), g, name.to_string(), self.algebra.ring().one()));
                continue;
            }
            for (w, s) in a.terms() {
                let text = if self.algebra.is_unit_word(w) {
                    name.to_string()
                } else {
                    format!("{}*{name}", self.algebra.fmt_word(w))
                };
                rows.push((w.clone(), g, text, s.clone()));
            }
        }
        rows.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        f.write_str(&fmt_terms(rows.iter().map(|(_, _, t, s)| (t.clone(), s))))
    }
}

/// Evaluates the bimodule map `β` on an arity-one element: `a₊ c a₋ ↦ a₊ β(c) a₋`.
pub fn dual_eval(beta: &DualElement, m: &TensorElement) -> Result<AlgebraElement> {
    let alg = m.algebra();
    let mut out = AlgebraElement::zero(alg);
    for (w, s) in m.terms() {
        if w.arity() != 1 {
            return Err(Error::ArityMismatch { expected: 1, found: w.arity() });
        }
        let b = beta.get(w.gens[0] as usize);
        if b.is_zero() {
            continue;
        }
        let v = &(&AlgebraElement::from_word(alg, w.slots[0].clone()) * &b)
            * &AlgebraElement::from_word(alg, w.slots[1].clone());
        out = &out + &v.scale(s);
    }
    Ok(out)
}

/// `ψ_n(β₁⊗⋯⊗βₙ)(a₀c₁a₁⋯cₙaₙ) = a₀β₁(c₁)a₁⋯βₙ(cₙ)aₙ`.
pub fn psi_eval(betas: &[DualElement], x: &TensorElement) -> Result<AlgebraElement> {
    let alg = x.algebra();
    let mut out = AlgebraElement::zero(alg);
    for (w, s) in x.terms() {
        if w.arity() != betas.len() {
            return Err(Error::ArityMismatch { expected: betas.len(), found: w.arity() });
        }
        let mut acc = AlgebraElement::from_word(alg, w.slots[0].clone());
        for (i, beta) in betas.iter().enumerate() {
            acc = &acc * &beta.get(w.gens[i] as usize);
            if acc.is_zero() {
                break;
            }
            acc = &acc * &AlgebraElement::from_word(alg, w.slots[i + 1].clone());
        }
        out = &out + &acc.scale(s);
    }
    Ok(out)
}

/// The pairing `⟨x, y⟩ = Σ Π 𝔱(slots)` over words with matching generators.
pub fn iota_pair(x: &TensorElement, y: &TensorElement) -> Result<Scalar> {
    let alg = x.algebra();
    alg.require_hermitian()?;
    if let (Some(a), Some(b)) = (x.arity(), y.arity()) {
        if a != b {
            return Err(Error::ArityMismatch { expected: a, found: b });
        }
    }
    let mut acc = alg.ring().zero();
    for (u, s) in x.terms() {
        for (v, t) in y.terms() {
            if u.gens != v.gens {
                continue;
            }
            let mut p = s * t;
            for (a, b) in u.slots.iter().zip(v.slots.iter()) {
                if p.is_zero() {
                    break;
                }
                p = &p * &alg.pair_words(a, b);
            }
            acc = &acc + &p;
        }
    }
    Ok(acc)
}

/// A bimodule morphism `f: M → M^{⊠n}` given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMorphism {
    images: Vec<TensorElement>,
    arity: usize,
    algebra: Arc<Algebra>,
    basis: Arc<GeneratorBasis>,
}

impl BimoduleMorphism {
    /// Every image must be homogeneous of arity `arity`.
    pub fn new(
        algebra: &Arc<Algebra>,
        basis: &Arc<GeneratorBasis>,
        arity: usize,
        images: Vec<TensorElement>,
    ) -> Result<Self> {
        if images.len() != basis.len() {
            return Err(Error::ArityMismatch { expected: basis.len(), found: images.len() });
        }
        for im in &images {
            if let Some(a) = im.arity() {
                if a != arity {
                    return Err(Error::ArityMismatch { expected: arity, found: a });
                }
            }
        }
        Ok(BimoduleMorphism { images, arity, algebra: algebra.clone(), basis: basis.clone() })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn image(&self, g: usize) -> &TensorElement {
        &self.images[g]
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(TensorElement::max_slot_len).max().unwrap_or(0)
    }

    /// `id^{⊠k} ⊠ f ⊠ id^{⊠l}` applied to an element of arity `k+1+l`.
    pub fn apply_padded(&self, k: usize, l: usize, x: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero(&self.algebra, &self.basis);
        for (w, s) in x.terms() {
            if w.arity() != k + 1 + l {
                return Err(Error::ArityMismatch { expected: k + 1 + l, found: w.arity() });
            }
            let left = TensorWord { gens: w.gens[..k].into(), slots: w.slots[..=k].into() };
            let right = TensorWord { gens: w.gens[k + 1..].into(), slots: w.slots[k + 1..].into() };
            for (m, t) in self.images[w.gens[k] as usize].terms() {
                if let Some(v) = left.concat(m, &self.algebra).and_then(|v| v.concat(&right, &self.algebra)) {
                    out.add_term(v, &(s * t));
                }
            }
        }
        Ok(out)
    }
}

/// The adjoint of `id^{⊠k} ⊠ f ⊠ id^{⊠l}` with respect to ι, by the closed
/// formula: on `… s_k d₁ ⋯ dₙ s_{k+n} …` each image word `a₀'d₁a₁'⋯dₙaₙ'` of a
/// generator `c` contributes `Π 𝔱(s_{k+i}, a_i') · … (s_k a₀'★) c (aₙ'★ s_{k+n}) …`.
pub fn adjoint_formula(f: &BimoduleMorphism, k: usize, l: usize, input: &TensorElement) -> Result<TensorElement> {
    let alg = &f.algebra;
    alg.require_hermitian()?;
    let n = f.arity;
    if n == 0 {
        return Err(Error::ZeroArityTarget);
    }
    let mut out = TensorElement::zero(alg, &f.basis);
    for (y, s) in input.terms() {
        if y.arity() != k + n + l {
            return Err(Error::ArityMismatch { expected: k + n + l, found: y.arity() });
        }
        for (c, image) in f.images.iter().enumerate() {
            for (m, r) in image.terms() {
                if m.gens[..] != y.gens[k..k + n] {
                    continue;
                }
                let mut coeff = s * r;
                for i in 1..n {
                    if coeff.is_zero() {
                        break;
                    }
                    coeff = &coeff * &alg.pair_words(&y.slots[k + i], &m.slots[i]);
                }
                if coeff.is_zero() {
                    continue;
                }
                let Some(left) = alg.mul_words(&y.slots[k], &alg.star_word(&m.slots[0])) else { continue };
                let Some(right) = alg.mul_words(&alg.star_word(&m.slots[n]), &y.slots[k + n]) else { continue };
                let mut gens: SmallVec<[u32; 4]> = y.gens[..k].into();
                gens.push(c as u32);
                gens.extend_from_slice(&y.gens[k + n..]);
                let mut slots: SmallVec<[Word; 5]> = y.slots[..k].into();
                slots.push(left);
                slots.push(right);
                slots.extend(y.slots[k + n + 1..].iter().cloned());
                out.add_term(TensorWord { gens, slots }, &coeff);
            }
        }
    }
    Ok(out)
}

/// The adjoint computed as a matrix transpose: pairs the input against
/// `F(x)` for every domain word `x` with total slot length at most `bound`.
/// The bound must cover the input length plus the longest image.
pub fn adjoint_bruteforce(
    f: &BimoduleMorphism,
    k: usize,
    l: usize,
    bound: usize,
    input: &TensorElement,
) -> Result<TensorElement> {
    let alg = &f.algebra;
    alg.require_hermitian()?;
    let needed = input.max_slot_len() + f.max_image_len();
    if bound < needed {
        return Err(Error::BoundTooSmall { bound, needed });
    }
    let arity = k + 1 + l;
    let mut out = TensorElement::zero(alg, &f.basis);
    for x in domain_words(alg, f.basis.len(), arity, bound) {
        let xe = TensorElement::from_terms(alg, &f.basis, [(x.clone(), alg.ring().one())]);
        let p = iota_pair(&f.apply_padded(k, l, &xe)?, input)?;
        out.add_term(x, &p);
    }
    Ok(out)
}

/// All tensor words of the given arity whose slot lengths sum to at most `bound`.
pub fn domain_words(algebra: &Algebra, gens: usize, arity: usize, bound: usize) -> Vec<TensorWord> {
    let words = algebra.words_up_to(bound);
    let mut slot_lists: Vec<(usize, SmallVec<[Word; 5]>)> = vec![(0, SmallVec::new())];
    for _ in 0..=arity {
        let mut next = Vec::new();
        for (len, slots) in &slot_lists {
            for w in &words {
                let wl = algebra.word_len(w);
                if len + wl <= bound {
                    let mut s = slots.clone();
                    s.push(w.clone());
                    next.push((len + wl, s));
                }
            }
        }
        slot_lists = next;
    }
    let mut gen_lists: Vec<SmallVec<[u32; 4]>> = vec![SmallVec::new()];
    for _ in 0..arity {
        gen_lists = gen_lists
            .into_iter()
            .flat_map(|g| {
                (0..gens as u32).map(move |c| {
                    let mut h = g.clone();
                    h.push(c);
                    h
                })
            })
            .collect();
    }
    let mut out = Vec::with_capacity(slot_lists.len() * gen_lists.len());
    for g in &gen_lists {
        for (_, s) in &slot_lists {
            out.push(TensorWord { gens: g.clone(), slots: s.clone() });
        }
    }
    out
}
