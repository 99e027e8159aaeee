//! Semifree DGAs `(T_A(M), ∂)` and the constructions on them: coefficient
//! change, conjugation, mirrors, action filtrations, link gradings and the
//! free n-copy.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use smallvec::SmallVec;

use crate::algebra::{Algebra, AlgebraElement, AlgebraMorphism, Word};
use crate::bimodule::{Generator, GeneratorBasis, TensorElement, TensorWord};
use crate::error::{Error, Result};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemifreeDga {
    algebra: Arc<Algebra>,
    basis: Arc<GeneratorBasis>,
    differential: Vec<TensorElement>,
}

impl SemifreeDga {
    /// Builds a DGA from the differentials of the generators. Each `∂c` must
    /// be homogeneous of degree `|c| − 1` and, when every generator carries
    /// an action, action-decreasing. `∂² = 0` is not assumed; see
    /// [`SemifreeDga::check_d_squared`].
    pub fn new(algebra: &Arc<Algebra>, basis: &Arc<GeneratorBasis>, differential: Vec<TensorElement>) -> Result<Self> {
        if differential.len() != basis.len() {
            return Err(Error::InvalidDifferential(format!(
                "{} generators but {} differentials",
                basis.len(),
                differential.len()
            )));
        }
        for (c, dc) in differential.iter().enumerate() {
            if dc.algebra() != algebra || dc.basis() != basis {
                return Err(Error::MixedAlgebras);
            }
            let want = basis.reduce(basis.degree(c) - 1);
            for (w, _) in dc.terms() {
                if w.gens.iter().any(|&g| g as usize >= basis.len()) {
                    return Err(Error::DegreeUnknown(format!("generator index in ∂{}", basis.name(c))));
                }
                let got = dc.word_degree(w);
                if got != want {
                    return Err(Error::InvalidDifferential(format!(
                        "∂{} contains {} of degree {got}, expected {want}",
                        basis.name(c),
                        dc.fmt_word(w)
                    )));
                }
            }
        }
        let dga = SemifreeDga { algebra: algebra.clone(), basis: basis.clone(), differential };
        if let Some(c) = dga.action_violations().first() {
            return Err(Error::InvalidDifferential(format!("∂{} does not decrease action", basis.name(*c))));
        }
        Ok(dga)
    }

    /// The DGA with `∂ ≡ 0`.
    pub fn trivial(algebra: &Arc<Algebra>, basis: &Arc<GeneratorBasis>) -> Self {
        SemifreeDga {
            algebra: algebra.clone(),
            basis: basis.clone(),
            differential: vec![TensorElement::zero(algebra, basis); basis.len()],
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn name(&self, c: usize) -> &str {
        self.basis.name(c)
    }

    pub fn generator(&self, c: usize) -> TensorElement {
        TensorElement::generator(&self.algebra, &self.basis, c)
    }

    pub fn constant(&self, a: &AlgebraElement) -> TensorElement {
        TensorElement::constant(&self.basis, a)
    }

    pub fn zero(&self) -> TensorElement {
        TensorElement::zero(&self.algebra, &self.basis)
    }

    pub fn differential_of(&self, c: usize) -> &TensorElement {
        &self.differential[c]
    }

    pub fn differentials(&self) -> &[TensorElement] {
        &self.differential
    }

    /// Largest arity occurring in any `∂c`.
    pub fn max_arity(&self) -> usize {
        self.differential.iter().map(TensorElement::max_arity).max().unwrap_or(0)
    }

    /// Generators `c` whose differential mentions a generator of action
    /// `≥ ℓ(c)`. Empty unless every generator has an action.
    pub fn action_violations(&self) -> Vec<usize> {
        let actions: Option<Vec<&BigRational>> = self.basis.generators().iter().map(|g| g.action.as_ref()).collect();
        let Some(actions) = actions else { return Vec::new() };
        (0..self.len())
            .filter(|&c| {
                self.differential[c].terms().any(|(w, _)| w.gens.iter().any(|&g| actions[g as usize] >= actions[c]))
            })
            .collect()
    }

    /// The Leibniz extension of `∂` to an arbitrary element.
    pub fn d(&self, x: &TensorElement) -> Result<TensorElement> {
        let mut out = self.zero();
        for (w, s) in x.terms() {
            let mut parity = 0u8;
            for (p, &g) in w.gens.iter().enumerate() {
                let g = g as usize;
                if g >= self.len() {
                    return Err(Error::DegreeUnknown(format!("generator index {g}")));
                }
                let sign = if parity == 1 { -s.clone() } else { s.clone() };
                insert_at(&mut out, w, p, &self.differential[g], &sign, &self.algebra);
                parity ^= self.basis.parity(g);
            }
        }
        Ok(out)
    }

    /// `∂(∂c) = 0` for every generator.
    pub fn check_d_squared(&self) -> Report {
        let mut r = Report::new("d^2 = 0");
        for c in 0..self.len() {
            let dd = self.d(&self.differential[c]).expect("validated differential");
            r.expect(dd.is_zero(), self.name(c), || format!("d^2 {} = {dd}", self.name(c)));
        }
        r
    }

    /// The arity-`n` part `∂_n c`.
    pub fn differential_component(&self, c: usize, n: usize) -> TensorElement {
        self.differential[c].arity_part(n)
    }

    /// `Σ (σ^{⊠i} ⊠ ∂_l ⊠ id^{⊠(k−1−i)}) ∘ ∂_k = 0` with `k + l − 1 = n`.
    pub fn check_component_relations(&self, n: usize) -> Report {
        let mut r = Report::new(format!("component relations (n = {n})"));
        for c in 0..self.len() {
            let mut total = self.zero();
            for k in 1..=n + 1 {
                let l = n + 1 - k;
                let dk = self.differential_component(c, k);
                for (w, s) in dk.terms() {
                    let mut parity = 0u8;
                    for (i, &g) in w.gens.iter().enumerate() {
                        let dl = self.differential_component(g as usize, l);
                        let sign = if parity == 1 { -s.clone() } else { s.clone() };
                        insert_at(&mut total, w, i, &dl, &sign, &self.algebra);
                        parity ^= self.basis.parity(g as usize);
                    }
                }
            }
            r.expect(total.is_zero(), self.name(c), || format!("residual {total}"));
        }
        r
    }

    /// The DGA over `B` obtained along a unital morphism `f: A → B`.
    pub fn change_coefficients(&self, f: &AlgebraMorphism) -> Result<SemifreeDga> {
        if f.source() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let target = f.target().clone();
        let differential = self.differential.iter().map(|dc| self.push_forward(f, dc)).collect::<Result<Vec<_>>>()?;
        Ok(SemifreeDga { algebra: target, basis: self.basis.clone(), differential })
    }

    /// `f̂(x)` for an element of this DGA.
    pub fn push_forward(&self, f: &AlgebraMorphism, x: &TensorElement) -> Result<TensorElement> {
        let target = f.target().clone();
        let basis = self.basis.clone();
        x.substitute(&target, &basis, |w| f.apply_word(w), |g| TensorElement::generator(&target, &basis, g))
    }

    /// `∂_φ = φ⁻¹ ∘ ∂ ∘ φ`.
    pub fn conjugate(&self, phi: &Automorphism) -> Result<SemifreeDga> {
        if phi.basis != self.basis || phi.algebra != self.algebra {
            return Err(Error::MixedAlgebras);
        }
        let inv = phi.inverse();
        let differential = (0..self.len()).map(|c| inv.apply(&self.d(&phi.images[c])?)).collect::<Result<Vec<_>>>()?;
        Ok(SemifreeDga { algebra: self.algebra.clone(), basis: self.basis.clone(), differential })
    }

    /// The mirror DGA: every word of `∂` reversed, algebra letters included,
    /// with the Koszul sign `(−1)^{Σ_{i<j}|d_i||d_j|}` of the generator reversal.
    pub fn mirror(&self) -> SemifreeDga {
        let differential = self.differential.iter().map(|dc| self.reverse_element(dc)).collect();
        SemifreeDga { algebra: self.algebra.clone(), basis: self.basis.clone(), differential }
    }

    /// The Koszul-signed reversal anti-automorphism on elements.
    pub fn reverse_element(&self, x: &TensorElement) -> TensorElement {
        let mut out = self.zero();
        for (w, s) in x.terms() {
            let mut odd = 0u32;
            let mut sign_odd = false;
            for &g in &w.gens {
                if self.basis.parity(g as usize) == 1 {
                    sign_odd ^= odd % 2 == 1;
                    odd += 1;
                }
            }
            let gens = w.gens.iter().rev().copied().collect();
            let slots = w.slots.iter().rev().map(|a| self.algebra.reverse_word(a)).collect();
            let s = if sign_odd { -s.clone() } else { s.clone() };
            out.add_term(TensorWord { gens, slots }, &s);
        }
        out
    }

    /// The sub-DGA on generators of action `< level`.
    pub fn action_subdga(&self, level: &BigRational) -> Result<SemifreeDga> {
        let mut keep = Vec::new();
        for (c, g) in self.basis.generators().iter().enumerate() {
            match &g.action {
                None => return Err(Error::NoActions(g.name.clone())),
                Some(a) if a < level => keep.push(c),
                Some(_) => {}
            }
        }
        Ok(self.restrict(&keep, |g| g.clone()))
    }

    /// The DGA on the listed generators, dropping words through the others.
    fn restrict(&self, keep: &[usize], mut relabel: impl FnMut(&Generator) -> Generator) -> SemifreeDga {
        let gens = keep.iter().map(|&c| relabel(self.basis.get(c))).collect();
        let basis = GeneratorBasis::new(gens, self.basis.modulus()).expect("subset of a valid basis");
        let index: BTreeMap<u32, u32> = keep.iter().enumerate().map(|(i, &c)| (c as u32, i as u32)).collect();
        let differential =
            keep.iter().map(|&c| self.differential[c].rebased(&basis, |g| index.get(&g).copied())).collect();
        SemifreeDga { algebra: self.algebra.clone(), basis, differential }
    }

    /// Equality of differentials after identifying generators by position.
    pub fn same_up_to_renaming(&self, other: &SemifreeDga) -> bool {
        self.algebra == other.algebra
            && self.len() == other.len()
            && self.basis.modulus() == other.basis.modulus()
            && (0..self.len()).all(|c| self.basis.degree(c) == other.basis.degree(c))
            && (0..self.len()).all(|c| self.differential[c].rebased(&other.basis, Some) == other.differential[c])
    }

    /// Checks the two link-grading conditions: mixed generators have no
    /// constant term, and consecutive generators `d_{k−1} d_k` in every word
    /// of a differential satisfy `e(d_{k−1}) = b(d_k)`.
    pub fn check_link_grading(&self, lg: &LinkGrading) -> Report {
        let mut r = Report::new("link grading");
        if lg.labels.len() != self.len() {
            r.fail("labels", format!("{} labels for {} generators", lg.labels.len(), self.len()));
            return r;
        }
        for (c, &(b, e)) in lg.labels.iter().enumerate() {
            r.expect((1..=lg.components).contains(&b) && (1..=lg.components).contains(&e), self.name(c), || {
                format!("label ({b},{e}) outside 1..{}", lg.components)
            });
        }
        for c in 0..self.len() {
            let (b, e) = lg.labels[c];
            if b != e {
                let constant = self.differential_component(c, 0);
                r.expect(constant.is_zero(), self.name(c), || format!("mixed generator has constant term {constant}"));
            }
            for (w, _) in self.differential[c].terms() {
                for pair in w.gens.windows(2) {
                    let (prev, next) = (pair[0] as usize, pair[1] as usize);
                    r.expect(lg.labels[prev].1 == lg.labels[next].0, self.name(c), || {
                        format!(
                            "non-composable word {}: e({}) = {} but b({}) = {}",
                            self.differential[c].fmt_word(w),
                            self.name(prev),
                            lg.labels[prev].1,
                            self.name(next),
                            lg.labels[next].0
                        )
                    });
                }
            }
        }
        r
    }

    /// The sub-DGA on generators with both labels in `components`, with the
    /// components relabelled order-preservingly.
    pub fn restrict_to_components(&self, lg: &LinkGrading, components: &[usize]) -> Result<(SemifreeDga, LinkGrading)> {
        let report = self.check_link_grading(lg);
        if !report.is_ok() {
            return Err(Error::InvalidLinkGrading(report.to_string()));
        }
        let mut comps: Vec<usize> = components.to_vec();
        comps.sort_unstable();
        comps.dedup();
        if let Some(bad) = comps.iter().find(|&&i| i == 0 || i > lg.components) {
            return Err(Error::InvalidLinkGrading(format!("component {bad} outside 1..{}", lg.components)));
        }
        let rank = |i: usize| comps.iter().position(|&j| j == i).map(|p| p + 1);
        let keep: Vec<usize> =
            (0..self.len()).filter(|&c| rank(lg.labels[c].0).is_some() && rank(lg.labels[c].1).is_some()).collect();
        let labels: Vec<(usize, usize)> =
            keep.iter().map(|&c| (rank(lg.labels[c].0).unwrap(), rank(lg.labels[c].1).unwrap())).collect();
        let mut next = labels.iter();
        let sub = self.restrict(&keep, |g| {
            let &(b, e) = next.next().unwrap();
            Generator { link: Some((b, e)), ..g.clone() }
        });
        Ok((sub, LinkGrading { components: comps.len(), labels }))
    }

    /// The free n-copy `𝔄_n` with generators `c^{ij}`, `1 ≤ i, j ≤ n`, and its
    /// link grading `(b, e)(c^{ij}) = (i, j)`.
    pub fn ncopy(&self, n: usize) -> (SemifreeDga, LinkGrading) {
        assert!(n >= 1);
        let k = self.len();
        let mut gens = Vec::with_capacity(k * n * n);
        let mut labels = Vec::with_capacity(k * n * n);
        for c in 0..k {
            for i in 1..=n {
                for j in 1..=n {
                    let g = self.basis.get(c);
                    gens.push(Generator { name: ncopy_name(&g.name, i, j, n), link: Some((i, j)), ..g.clone() });
                    labels.push((i, j));
                }
            }
        }
        let basis = GeneratorBasis::new(gens, self.basis.modulus()).expect("copies of a valid basis");
        let idx = |c: u32, i: usize, j: usize| (c as usize * n * n + (i - 1) * n + (j - 1)) as u32;
        let mut differential = Vec::with_capacity(k * n * n);
        for c in 0..k {
            for i in 1..=n {
                for j in 1..=n {
                    let mut out = TensorElement::zero(&self.algebra, &basis);
                    for (w, s) in self.differential[c].terms() {
                        let m = w.arity();
                        if m == 0 {
                            if i == j {
                                out.add_term(w.clone(), s);
                            }
                            continue;
                        }
                        // Staircases i = i_1, j_1 = i_2, …, j_m = j: choose j_1..j_{m−1}.
                        let mut mids = vec![1usize; m - 1];
                        loop {
                            let mut gens: SmallVec<[u32; 4]> = SmallVec::new();
                            let mut from = i;
                            for (p, &d) in w.gens.iter().enumerate() {
                                let to = if p + 1 == m { j } else { mids[p] };
                                gens.push(idx(d, from, to));
                                from = to;
                            }
                            out.add_term(TensorWord { gens, slots: w.slots.clone() }, s);
                            if !advance(&mut mids, n) {
                                break;
                            }
                        }
                    }
                    differential.push(out);
                }
            }
        }
        let dga = SemifreeDga { algebra: self.algebra.clone(), basis, differential };
        (dga, LinkGrading { components: n, labels })
    }

    /// The DGA over `A_n = A ⊗ (⊕ R e_i)` along `1 ↦ e_1 + ⋯ + e_n`.
    pub fn ncopy_via_an(&self, n: usize) -> SemifreeDga {
        self.change_coefficients(&AlgebraMorphism::diagonal(&self.algebra, n)).expect("diagonal morphism")
    }

    /// Adds a cancelling pair `∂e = f` with `|e| = degree`, `|f| = degree − 1`.
    pub fn stabilize(&self, degree: i64, names: (&str, &str)) -> Result<SemifreeDga> {
        let mut gens = self.basis.generators().to_vec();
        gens.push(Generator::new(names.0, degree));
        gens.push(Generator::new(names.1, degree - 1));
        let basis = GeneratorBasis::new(gens, self.basis.modulus())?;
        let mut differential: Vec<TensorElement> =
            self.differential.iter().map(|dc| dc.rebased(&basis, Some)).collect();
        let k = self.len();
        differential.push(TensorElement::generator(&self.algebra, &basis, k + 1));
        differential.push(TensorElement::zero(&self.algebra, &basis));
        SemifreeDga::new(&self.algebra, &basis, differential)
    }
}

/// Adds `sign · prefix · insert · suffix` for each word of `insert`, where
/// prefix and suffix are the parts of `w` around generator `pos`.
fn insert_at(
    out: &mut TensorElement,
    w: &TensorWord,
    pos: usize,
    insert: &TensorElement,
    sign: &crate::scalar::Scalar,
    algebra: &Algebra,
) {
    if insert.is_zero() {
        return;
    }
    let prefix = TensorWord { gens: w.gens[..pos].into(), slots: w.slots[..=pos].into() };
    let suffix = TensorWord { gens: w.gens[pos + 1..].into(), slots: w.slots[pos + 1..].into() };
    for (v, t) in insert.terms() {
        if let Some(x) = prefix.concat(v, algebra).and_then(|x| x.concat(&suffix, algebra)) {
            out.add_term(x, &(t * sign));
        }
    }
}

/// Odometer over `{1..n}^len`; false once it wraps around.
fn advance(digits: &mut [usize], n: usize) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < n {
            *d += 1;
            return true;
        }
        *d = 1;
    }
    false
}

/// `c1_12` for `c1^{12}`; indices are separated by `_` when `n > 9`.
pub fn ncopy_name(name: &str, i: usize, j: usize, n: usize) -> String {
    if n > 9 {
        format!("{name}_{i}_{j}")
    } else {
        format!("{name}_{i}{j}")
    }
}

/// Labels `(b(c), e(c)) ∈ {1..components}²` on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGrading {
    pub components: usize,
    pub labels: Vec<(usize, usize)>,
}

impl LinkGrading {
    /// The labels declared on the basis, if every generator has one.
    pub fn from_basis(basis: &GeneratorBasis) -> Option<LinkGrading> {
        let labels: Option<Vec<(usize, usize)>> = basis.generators().iter().map(|g| g.link).collect();
        let labels = labels?;
        let components = labels.iter().map(|&(b, e)| b.max(e)).max().unwrap_or(1);
        Some(LinkGrading { components, labels })
    }

    pub fn single(len: usize) -> LinkGrading {
        LinkGrading { components: 1, labels: vec![(1, 1); len] }
    }
}

/// The projection `π: 𝔄_n → 𝒜_{A_n}`, `c^{ij} ↦ e_i c e_j`, `a ↦ a ⊗ 1`.
pub fn ncopy_projection(base: &SemifreeDga, an: &SemifreeDga, n: usize, x: &TensorElement) -> Result<TensorElement> {
    let f = AlgebraMorphism::diagonal(&base.algebra, n);
    let alg = an.algebra.clone();
    let basis = an.basis.clone();
    let idem = |i: usize| {
        TensorElement::constant(
            &basis,
            &AlgebraElement::from_word(&alg, crate::algebra::split_word(i as i32 - 1, &Word::empty())),
        )
    };
    x.substitute(
        &alg,
        &basis,
        |w| f.apply_word(w),
        |g| {
            let (c, rest) = (g / (n * n), g % (n * n));
            let (i, j) = (rest / n + 1, rest % n + 1);
            idem(i)
                .checked_mul(&TensorElement::generator(&alg, &basis, c))
                .and_then(|x| x.checked_mul(&idem(j)))
                .expect("same space")
        },
    )
}

/// Words of `𝔡(c)` never have fewer mixed generators than `c` itself.
pub fn check_mixed_filtration(dga: &SemifreeDga, lg: &LinkGrading) -> Report {
    let mut r = Report::new("mixed-generator filtration");
    let mixed = |g: usize| (lg.labels[g].0 != lg.labels[g].1) as usize;
    for c in 0..dga.len() {
        for (w, _) in dga.differential_of(c).terms() {
            let count: usize = w.gens.iter().map(|&g| mixed(g as usize)).sum();
            r.expect(count >= mixed(c), dga.name(c), || {
                format!("{} has {count} mixed letters", dga.differential_of(c).fmt_word(w))
            });
        }
    }
    r
}

/// A degree-preserving automorphism `c ↦ c + rest_c` of a DGA's algebra that is
/// triangular: some ordering of the generators puts every generator occurring
/// in `rest_c` strictly before `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    images: Vec<TensorElement>,
    order: Vec<usize>,
    algebra: Arc<Algebra>,
    basis: Arc<GeneratorBasis>,
}

impl Automorphism {
    pub fn identity(dga: &SemifreeDga) -> Self {
        Self::new(dga, (0..dga.len()).map(|c| dga.generator(c)).collect()).expect("identity is triangular")
    }

    pub fn new(dga: &SemifreeDga, images: Vec<TensorElement>) -> Result<Self> {
        let k = dga.len();
        if images.len() != k {
            return Err(Error::NotInvertible(format!("{} images for {k} generators", images.len())));
        }
        let mut deps: Vec<Vec<usize>> = Vec::with_capacity(k);
        for (c, img) in images.iter().enumerate() {
            if img.algebra() != dga.algebra() || img.basis() != dga.basis() {
                return Err(Error::MixedAlgebras);
            }
            let rest = img.checked_add(&dga.generator(c).neg())?;
            let mut d = Vec::new();
            for (w, _) in rest.terms() {
                let deg = rest.word_degree(w);
                if deg != dga.basis.degree(c) {
                    return Err(Error::NotInvertible(format!(
                        "image of {} has a term {} of degree {deg}",
                        dga.name(c),
                        rest.fmt_word(w)
                    )));
                }
                d.extend(w.gens.iter().map(|&g| g as usize));
            }
            d.sort_unstable();
            d.dedup();
            deps.push(d);
        }
        // Kahn's algorithm, smallest index first for determinism.
        let mut remaining: Vec<usize> = deps.iter().map(Vec::len).collect();
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (c, d) in deps.iter().enumerate() {
            for &g in d {
                users[g].push(c);
            }
        }
        let mut ready: std::collections::BTreeSet<usize> = (0..k).filter(|&c| remaining[c] == 0).collect();
        let mut order = Vec::with_capacity(k);
        while let Some(c) = ready.pop_first() {
            order.push(c);
            for &u in &users[c] {
                remaining[u] -= 1;
                if remaining[u] == 0 {
                    ready.insert(u);
                }
            }
        }
        if order.len() != k {
            let stuck: Vec<&str> = (0..k).filter(|c| !order.contains(c)).map(|c| dga.name(c)).collect();
            return Err(Error::NotInvertible(format!("not triangular on {}", stuck.join(", "))));
        }
        Ok(Automorphism { images, order, algebra: dga.algebra.clone(), basis: dga.basis.clone() })
    }

    pub fn image(&self, c: usize) -> &TensorElement {
        &self.images[c]
    }

    pub fn images(&self) -> &[TensorElement] {
        &self.images
    }

    /// Extends multiplicatively and `A`-bilinearly.
    pub fn apply(&self, x: &TensorElement) -> Result<TensorElement> {
        x.substitute(
            &self.algebra,
            &self.basis,
            |w| AlgebraElement::from_word(&self.algebra, w.clone()),
            |g| self.images[g].clone(),
        )
    }

    /// `φ⁻¹(c) = c − φ⁻¹(rest_c)`, resolved in triangular order.
    pub fn inverse(&self) -> Automorphism {
        let k = self.images.len();
        let mut inv: Vec<Option<TensorElement>> = vec![None; k];
        for &c in &self.order {
            let gen = TensorElement::generator(&self.algebra, &self.basis, c);
            let rest = self.images[c].checked_add(&gen.neg()).expect("same space");
            let partial = rest
                .substitute(
                    &self.algebra,
                    &self.basis,
                    |w| AlgebraElement::from_word(&self.algebra, w.clone()),
                    |g| inv[g].clone().expect("triangular order"),
                )
                .expect("same space");
            inv[c] = Some(gen.checked_add(&partial.neg()).expect("same space"));
        }
        Automorphism {
            images: inv.into_iter().map(Option::unwrap).collect(),
            order: self.order.clone(),
            algebra: self.algebra.clone(),
            basis: self.basis.clone(),
        }
    }

    /// `Π₀ ∘ φ` on the generators: the constant parts of the images.
    pub fn offsets(&self) -> Vec<AlgebraElement> {
        self.images
            .iter()
            .map(|img| {
                AlgebraElement::from_terms(
                    &self.algebra,
                    img.terms().filter(|(w, _)| w.arity() == 0).map(|(w, s)| (w.slots[0].clone(), s.clone())),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;

    /// The toy DGA over Z2<g1,g2>, built directly.
    fn toy() -> SemifreeDga {
        let a = Algebra::free(Ring::Z2, ["g1", "g2"], true);
        let b = GeneratorBasis::new(
            [("c1", 2), ("c2", 1), ("c3", 1), ("c4", 0), ("c5", 0)]
                .iter()
                .map(|&(n, d)| Generator::new(n, d))
                .collect(),
            0,
        )
        .unwrap();
        let c = |i: usize| TensorElement::generator(&a, &b, i - 1);
        let g = |i: usize| TensorElement::constant(&b, &AlgebraElement::letter(&a, i - 1));
        let m = |xs: &[&TensorElement]| xs.iter().skip(1).fold(xs[0].clone(), |acc, x| acc.checked_mul(x).unwrap());
        let d1 = m(&[&c(2), &g(1), &c(4)]).checked_add(&c(3)).unwrap();
        let d2 = m(&[&c(5), &g(2)]);
        let d3 = m(&[&c(5), &g(2), &g(1), &c(4)]);
        let z = TensorElement::zero(&a, &b);
        SemifreeDga::new(&a, &b, vec![d1, d2, d3, z.clone(), z]).unwrap()
    }

    #[test]
    fn toy_d_squared() {
        let t = toy();
        assert!(t.check_d_squared().is_ok());
        assert_eq!(t.differential_of(0).to_string(), "c3 + c2*g1*c4");
        assert_eq!(t.differential_component(0, 1).to_string(), "c3");
        assert_eq!(t.differential_component(0, 2).to_string(), "c2*g1*c4");
        assert!((0..5).all(|c| t.differential_component(c, 0).is_zero()));
        assert_eq!(t.d(t.differential_of(0)).unwrap(), t.zero());
        let x = t.differential_component(0, 2);
        assert_eq!(t.d(&x).unwrap().to_string(), "c5*g2*g1*c4");
    }

    #[test]
    fn broken_toy_fails_at_c1() {
        let t = toy();
        let mut d = t.differentials().to_vec();
        d[2] = t.zero();
        let broken = SemifreeDga::new(t.algebra(), t.basis(), d).unwrap();
        let r = broken.check_d_squared();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].location, "c1");
        let rel = broken.check_component_relations(2);
        assert_eq!(rel.violations.len(), 1);
        assert_eq!(rel.violations[0].location, "c1");
        assert!(t.check_component_relations(2).is_ok());
        assert!(t.check_component_relations(7).is_ok());
    }

    #[test]
    fn mirror_of_toy() {
        let t = toy();
        let m = t.mirror();
        assert_eq!(m.differential_of(0).to_string(), "c3 + c4*g1*c2");
        assert!(m.check_d_squared().is_ok());
        assert_eq!(m.mirror(), t);
    }

    #[test]
    fn conjugation_round_trip() {
        let t = toy();
        let mut imgs: Vec<_> = (0..5).map(|c| t.generator(c)).collect();
        let g1 = t.constant(&AlgebraElement::letter(t.algebra(), 0));
        imgs[2] = imgs[2]
            .checked_add(&t.generator(1).checked_mul(&g1).unwrap().checked_mul(&t.generator(3)).unwrap())
            .unwrap();
        let phi = Automorphism::new(&t, imgs).unwrap();
        let conj = t.conjugate(&phi).unwrap();
        assert!(conj.check_d_squared().is_ok());
        assert_eq!(conj.conjugate(&phi.inverse()).unwrap(), t);
        assert_eq!(t.conjugate(&Automorphism::identity(&t)).unwrap(), t);
    }

    #[test]
    fn cyclic_substitution_rejected() {
        let t = toy();
        let mut imgs: Vec<_> = (0..5).map(|c| t.generator(c)).collect();
        imgs[3] = imgs[3].checked_add(&t.generator(4)).unwrap();
        imgs[4] = imgs[4].checked_add(&t.generator(3)).unwrap();
        assert!(matches!(Automorphism::new(&t, imgs), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn ncopy_formula() {
        let t = toy();
        let (a2, lg) = t.ncopy(2);
        assert_eq!(a2.len(), 20);
        let c1_12 = a2.basis().index_of("c1_12").unwrap();
        assert_eq!(a2.differential_of(c1_12).to_string(), "c3_12 + c2_11*g1*c4_12 + c2_12*g1*c4_22");
        assert!(a2.check_d_squared().is_ok());
        assert!(a2.check_link_grading(&lg).is_ok());
        assert!(check_mixed_filtration(&a2, &lg).is_ok());
        let (a1, _) = t.ncopy(1);
        assert!(a1.same_up_to_renaming(&t));
    }

    #[test]
    fn swapped_label_fails() {
        let (a2, mut lg) = toy().ncopy(2);
        let c4_12 = a2.basis().index_of("c4_12").unwrap();
        lg.labels[c4_12] = (2, 1);
        assert!(!a2.check_link_grading(&lg).is_ok());
    }

    #[test]
    fn projection_intertwines() {
        let t = toy();
        let (a2, _) = t.ncopy(2);
        let an = t.ncopy_via_an(2);
        assert!(an.check_d_squared().is_ok());
        for g in 0..a2.len() {
            let lhs = ncopy_projection(&t, &an, 2, a2.differential_of(g)).unwrap();
            let rhs = an.d(&ncopy_projection(&t, &an, 2, &a2.generator(g)).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "generator {}", a2.name(g));
        }
    }

    #[test]
    fn components_recover_original() {
        let t = toy();
        let (a3, lg) = t.ncopy(3);
        for k in 1..=3 {
            let (sub, _) = a3.restrict_to_components(&lg, &[k]).unwrap();
            assert!(sub.same_up_to_renaming(&t));
        }
        let (a2, _) = t.ncopy(2);
        let (sub, lg13) = a3.restrict_to_components(&lg, &[1, 3]).unwrap();
        assert_eq!(lg13.components, 2);
        assert!(sub.same_up_to_renaming(&a2));
    }

    #[test]
    fn action_levels() {
        let t = toy();
        let acts = [3, 2, 2, 1, 1];
        let gens = t
            .basis()
            .generators()
            .iter()
            .zip(acts)
            .map(|(g, a)| g.clone().with_action(BigRational::from_integer(a.into())))
            .collect();
        let basis = GeneratorBasis::new(gens, 0).unwrap();
        let d = t.differentials().iter().map(|x| x.rebased(&basis, Some)).collect();
        let t = SemifreeDga::new(t.algebra(), &basis, d).unwrap();
        let half = |n: i64| BigRational::new(n.into(), 2.into());
        let sub = t.action_subdga(&half(5)).unwrap();
        let names: Vec<&str> = (0..sub.len()).map(|c| sub.name(c)).collect();
        assert_eq!(names, ["c2", "c3", "c4", "c5"]);
        assert!(sub.check_d_squared().is_ok());
        assert_eq!(t.action_subdga(&half(10)).unwrap(), t);
        assert!(t.action_subdga(&half(1)).unwrap().is_empty());
        assert!(matches!(toy().action_subdga(&half(1)), Err(Error::NoActions(_))));
    }

    #[test]
    fn stabilization_keeps_d_squared() {
        let t = toy().stabilize(3, ("e", "f")).unwrap();
        assert!(t.check_d_squared().is_ok());
        assert_eq!(t.differential_of(5).to_string(), "f");
    }
}
