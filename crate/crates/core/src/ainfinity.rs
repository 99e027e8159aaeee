//! The operations `μ_n` and `μ_n^𝜺` in both cases, and verification of the
//! A∞ relations.
//!
//! Every `μ^𝜺_n` is read off an expansion table: for each word of `∂c` and
//! each choice of `n` kept positions, the remaining generators are evaluated
//! by the augmentations of the gaps they sit in, and the algebra between
//! kept positions collapses to segments `seg_0, …, seg_n`. Case I returns
//! `seg_0 b_1 seg_1 ⋯ b_n seg_n · c`; Case II pairs the inner segments with
//! the input and returns `b_0 seg_0★ c seg_n★ b_n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::algebra::{Algebra, AlgebraElement, AlgebraKind, AlgebraMorphism, Word};
use crate::augmentation::{check_augmentation, Augmentation};
use crate::bimodule::{adjoint_formula, psi_eval, BimoduleMorphism, DualElement, TensorElement, TensorWord};
use crate::dga::SemifreeDga;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    I,
    II,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "I",
            Case::II => "II",
        })
    }
}

/// How `|m_j|` enters the sign `† = |m_1| + ⋯ + |m_{i−1}| + (i − 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    /// `|m_j| = |c_j| + 1`, the degree in the suspended dual.
    #[default]
    Suspended,
    /// `|m_j| = |c_j|`. Kept only to demonstrate that it is wrong.
    Unsuspended,
}

type Key = SmallVec<[u32; 4]>;

#[derive(Clone, Debug)]
pub(crate) struct Entry {
    pub output: u32,
    pub coeff: Scalar,
    pub segs: Vec<AlgebraElement>,
}

/// Expansion of `∂` for one sequence of augmentations, keyed by the kept
/// generators.
#[derive(Clone, Debug, Default)]
pub(crate) struct Table {
    pub entries: BTreeMap<Key, Vec<Entry>>,
}

/// A DGA over the augmentations' target together with the augmentations,
/// now with identity coefficient morphisms.
#[derive(Clone, Debug)]
pub(crate) struct Context {
    pub dga: SemifreeDga,
    pub augs: Vec<Augmentation>,
}

impl Context {
    pub fn new(dga: &SemifreeDga, augs: &[Augmentation]) -> Result<Self> {
        if augs.is_empty() {
            return Err(Error::TupleLengthMismatch { expected: 1, found: 0 });
        }
        for e in augs {
            let r = check_augmentation(dga, e);
            if !r.is_ok() {
                return Err(Error::InvalidAugmentation(r.to_string()));
            }
            if e.coefficients() != augs[0].coefficients() {
                return Err(Error::TargetMismatch("augmentations use different coefficient morphisms".into()));
            }
        }
        let f = augs[0].coefficients();
        if f.is_identity() {
            return Ok(Context { dga: dga.clone(), augs: augs.to_vec() });
        }
        let dga_b = dga.change_coefficients(f)?;
        let augs = augs.iter().map(|e| e.over_target(&dga_b)).collect::<Result<_>>()?;
        Ok(Context { dga: dga_b, augs })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.dga.algebra()
    }

    /// The expansion table for the augmentation sequence `seq` (indices into
    /// `augs`), of arity `seq.len() − 1`.
    pub fn table(&self, seq: &[usize]) -> Table {
        let n = seq.len() - 1;
        let alg = self.algebra();
        let mut table = Table::default();
        for c in 0..self.dga.len() {
            for (w, s) in self.dga.differential_of(c).terms() {
                let i = w.arity();
                if i < n {
                    continue;
                }
                for kept in combinations(i, n) {
                    if let Some(segs) = self.segments(w, &kept, seq, alg) {
                        let key: Key = kept.iter().map(|&p| w.gens[p]).collect();
                        table.entries.entry(key).or_default().push(Entry { output: c as u32, coeff: s.clone(), segs });
                    }
                }
            }
        }
        table
    }

    fn segments(
        &self,
        w: &TensorWord,
        kept: &[usize],
        seq: &[usize],
        alg: &Arc<Algebra>,
    ) -> Option<Vec<AlgebraElement>> {
        let n = kept.len();
        let mut segs = Vec::with_capacity(n + 1);
        let mut start = 0;
        for j in 0..=n {
            let end = if j < n { kept[j] } else { w.arity() };
            let eps = &self.augs[seq[j]];
            let mut seg = AlgebraElement::from_word(alg, w.slots[start].clone());
            for p in start..end {
                seg = &seg * eps.value(w.gens[p] as usize);
                if seg.is_zero() {
                    return None;
                }
                seg = &seg * &AlgebraElement::from_word(alg, w.slots[p + 1].clone());
            }
            if seg.is_zero() {
                return None;
            }
            segs.push(seg);
            start = end + 1;
        }
        Some(segs)
    }
}

/// All increasing `n`-subsets of `0..i`.
fn combinations(i: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, i: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for p in start..i {
            if i - p < n - cur.len() {
                break;
            }
            cur.push(p);
            rec(p + 1, i, n, cur, out);
            cur.pop();
        }
    }
    rec(0, i, n, &mut cur, &mut out);
    out
}

pub(crate) fn eval_case1(ctx: &Context, table: &Table, inputs: &[DualElement]) -> DualElement {
    let alg = ctx.algebra();
    let mut out = DualElement::zero(alg, ctx.dga.basis());
    let supports: Vec<Vec<(usize, &AlgebraElement)>> = inputs.iter().map(|x| x.terms().collect()).collect();
    for_each_product(&supports, |choice| {
        let key: Key = choice.iter().map(|(g, _)| *g as u32).collect();
        let Some(entries) = table.entries.get(&key) else { return };
        for e in entries {
            let mut acc = e.segs[0].clone();
            for (j, (_, b)) in choice.iter().enumerate() {
                acc = &(&acc * b) * &e.segs[j + 1];
                if acc.is_zero() {
                    break;
                }
            }
            out.add(e.output as usize, &acc.scale(&e.coeff));
        }
    });
    out
}

fn for_each_product<T: Copy>(lists: &[Vec<T>], mut f: impl FnMut(&[T])) {
    if lists.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; lists.len()];
    let mut cur: Vec<T> = lists.iter().map(|l| l[0]).collect();
    loop {
        f(&cur);
        let mut p = lists.len();
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < lists[p].len() {
                cur[p] = lists[p][idx[p]];
                break;
            }
            idx[p] = 0;
            cur[p] = lists[p][0];
        }
    }
}

/// One Case II contribution: `Π 𝔱(b_j, seg_j) · b_0 seg_0★ c seg_n★ b_n`.
#[derive(Clone, Debug)]
pub struct Contribution {
    pub pairings: Vec<(AlgebraElement, AlgebraElement)>,
    pub coefficient: Scalar,
    /// The term before the pairings are applied.
    pub base: TensorElement,
    pub value: TensorElement,
}

fn pair_word(alg: &Algebra, w: &Word, x: &AlgebraElement) -> Scalar {
    let mut acc = alg.ring().zero();
    for (v, s) in x.terms() {
        let p = alg.pair_words(w, v);
        if !p.is_zero() {
            acc = &acc + &(s * &p);
        }
    }
    acc
}

fn star(alg: &Algebra, x: &AlgebraElement) -> AlgebraElement {
    AlgebraElement::from_terms(x.algebra(), x.terms().map(|(w, s)| (alg.star_word(w), s.clone())))
}

pub(crate) fn eval_case2_with(
    ctx: &Context,
    table: &Table,
    input: &TensorElement,
    mut visit: impl FnMut(&TensorWord, &Entry, &Scalar, &TensorElement, &TensorElement),
) -> TensorElement {
    let alg = ctx.algebra();
    let basis = ctx.dga.basis();
    let mut out = TensorElement::zero(alg, basis);
    for (y, s) in input.terms() {
        let n = y.arity();
        let Some(entries) = table.entries.get(&y.gens) else { continue };
        for e in entries {
            let pre = s * &e.coeff;
            let mut coeff = pre.clone();
            for j in 1..n {
                if coeff.is_zero() {
                    break;
                }
                coeff = &coeff * &pair_word(alg, &y.slots[j], &e.segs[j]);
            }
            if coeff.is_zero() {
                continue;
            }
            let left = &AlgebraElement::from_word(alg, y.slots[0].clone()) * &star(alg, &e.segs[0]);
            let right = &star(alg, &e.segs[n]) * &AlgebraElement::from_word(alg, y.slots[n].clone());
            let mut value = TensorElement::zero(alg, basis);
            for (u, su) in left.terms() {
                for (v, sv) in right.terms() {
                    let w = TensorWord {
                        gens: smallvec::smallvec![e.output],
                        slots: smallvec::smallvec![u.clone(), v.clone()],
                    };
                    value.add_term(w, &(su * sv));
                }
            }
            let base = value.scale(&pre);
            let value = value.scale(&coeff);
            visit(y, e, &coeff, &base, &value);
            out.add_assign_scaled(&value, &alg.ring().one());
        }
    }
    out
}

pub(crate) fn eval_case2(ctx: &Context, table: &Table, input: &TensorElement) -> TensorElement {
    eval_case2_with(ctx, table, input, |_, _, _, _, _| {})
}

fn check_hermitian(dga: &SemifreeDga, augs: &[Augmentation]) -> Result<()> {
    match augs.first() {
        Some(e) => e.target().require_hermitian(),
        None => dga.algebra().require_hermitian(),
    }
}

/// `μ_n = (∂_n)^∨ ∘ ψ_n`: the coefficient of `c` is `ψ_n(inputs)(∂_n c)`.
pub fn mu_case1(dga: &SemifreeDga, inputs: &[DualElement]) -> Result<DualElement> {
    if inputs.is_empty() {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    let mut out = DualElement::zero(dga.algebra(), dga.basis());
    for c in 0..dga.len() {
        out.add(c, &psi_eval(inputs, &dga.differential_component(c, inputs.len()))?);
    }
    Ok(out)
}

/// `μ_n = (∂_n)★` restricted to `M^{⊠n} → M`, through the adjoint formula.
pub fn mu_case2(dga: &SemifreeDga, input: &TensorElement) -> Result<TensorElement> {
    dga.algebra().require_hermitian()?;
    let n = input.arity().unwrap_or(0);
    if n == 0 {
        return if input.is_zero() { Ok(dga.zero()) } else { Err(Error::ZeroArityTarget) };
    }
    let images = (0..dga.len()).map(|c| dga.differential_component(c, n)).collect();
    let f = BimoduleMorphism::new(dga.algebra(), dga.basis(), n, images)?;
    adjoint_formula(&f, 0, 0, input)
}

/// `μ^𝜺_n(m_1, …, m_n)` in Case I, over the augmentations' target.
pub fn mu_eps_case1(dga: &SemifreeDga, tuple: &[Augmentation], inputs: &[DualElement]) -> Result<DualElement> {
    if tuple.len() != inputs.len() + 1 {
        return Err(Error::TupleLengthMismatch { expected: inputs.len() + 1, found: tuple.len() });
    }
    if inputs.is_empty() {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    let ctx = Context::new(dga, tuple)?;
    let seq: Vec<usize> = (0..tuple.len()).collect();
    Ok(eval_case1(&ctx, &ctx.table(&seq), inputs))
}

/// `μ^𝜺_n` in Case II on an arity-`n` input.
pub fn mu_eps_case2(dga: &SemifreeDga, tuple: &[Augmentation], input: &TensorElement) -> Result<TensorElement> {
    Ok(explain_case2(dga, tuple, input)?.0)
}

/// `μ^𝜺_n` in Case II together with its individual contributions.
pub fn explain_case2(
    dga: &SemifreeDga,
    tuple: &[Augmentation],
    input: &TensorElement,
) -> Result<(TensorElement, Vec<Contribution>)> {
    check_hermitian(dga, tuple)?;
    let n = input.arity().unwrap_or(tuple.len().saturating_sub(1));
    if n == 0 {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    if tuple.len() != n + 1 {
        return Err(Error::TupleLengthMismatch { expected: n + 1, found: tuple.len() });
    }
    let ctx = Context::new(dga, tuple)?;
    let seq: Vec<usize> = (0..tuple.len()).collect();
    let alg = ctx.algebra().clone();
    let mut parts = Vec::new();
    let out = eval_case2_with(&ctx, &ctx.table(&seq), input, |y, e, coeff, base, value| {
        let pairings =
            (1..n).map(|j| (AlgebraElement::from_word(&alg, y.slots[j].clone()), e.segs[j].clone())).collect();
        parts.push(Contribution { pairings, coefficient: coeff.clone(), base: base.clone(), value: value.clone() });
    });
    Ok((out, parts))
}

/// The curvature `μ_0 = (∂_0)^∨ = Σ ∂_0(c) c`, for diagnostics only.
pub fn curvature(dga: &SemifreeDga) -> DualElement {
    let mut out = DualElement::zero(dga.algebra(), dga.basis());
    for c in 0..dga.len() {
        let d0 = dga.differential_component(c, 0);
        let a = AlgebraElement::from_terms(dga.algebra(), d0.terms().map(|(w, s)| (w.slots[0].clone(), s.clone())));
        out.add(c, &a);
    }
    out
}

/// Algebra coefficients used as inputs when checking relations.
pub fn default_pool(alg: &Arc<Algebra>) -> Vec<AlgebraElement> {
    let one = AlgebraElement::one(alg);
    match alg.kind() {
        AlgebraKind::Free { symbols } => {
            let mut pool = vec![one];
            pool.extend((0..symbols.len()).map(|i| AlgebraElement::letter(alg, i)));
            if symbols.len() >= 2 {
                let (a, b) = (AlgebraElement::letter(alg, 0), AlgebraElement::letter(alg, 1));
                pool.push(&a * &b);
                pool.push(&b * &a);
            }
            pool
        }
        AlgebraKind::FreeGroup { rank } => {
            let mut pool = vec![one];
            pool.extend((0..*rank).map(|i| AlgebraElement::letter(alg, i)));
            if *rank >= 1 {
                pool.push(AlgebraElement::letter(alg, 0).inverse().expect("group letter"));
            }
            if *rank >= 2 {
                let (a, b) = (AlgebraElement::letter(alg, 0), AlgebraElement::letter(alg, 1));
                pool.push(&a * &b);
                pool.push(&b * &a);
            }
            pool
        }
        AlgebraKind::Matrix { .. } => {
            alg.words_up_to(0).into_iter().map(|w| AlgebraElement::from_word(alg, w)).collect()
        }
        AlgebraKind::Split { base, copies } => {
            let inner = default_pool(base);
            let f = AlgebraMorphism::diagonal(base, *copies);
            let mut pool = Vec::new();
            for i in 0..*copies as i32 {
                let e = AlgebraElement::from_word(alg, crate::algebra::split_word(i, &base.unit_words()[0]));
                let e = if base.unit_words().len() == 1 {
                    e
                } else {
                    AlgebraElement::from_terms(
                        alg,
                        base.unit_words().iter().map(|u| (crate::algebra::split_word(i, u), alg.ring().one())),
                    )
                };
                for x in &inner {
                    pool.push(&e * &f.apply(x));
                }
            }
            pool
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Coefficients for the inputs; [`default_pool`] of the target when unset.
    pub pool: Option<Vec<AlgebraElement>>,
    pub sign: SignConvention,
}

/// Checks the A∞ relations for every arity `1..=max_arity` and every sequence
/// of objects drawn from `augs`, on generator inputs decorated with pool
/// coefficients. Only generator tuples for which some term of the relation
/// can be nonzero are evaluated; all other residuals vanish identically.
pub fn verify_ainfty(
    dga: &SemifreeDga,
    augs: &[Augmentation],
    case: Case,
    max_arity: usize,
    options: &VerifyOptions,
) -> Result<Report> {
    if case == Case::II {
        check_hermitian(dga, augs)?;
    }
    let ctx = Context::new(dga, augs)?;
    let pool = options.pool.clone().unwrap_or_else(|| default_pool(ctx.algebra()));
    if pool.iter().any(|p| p.algebra() != ctx.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let objects = ctx.augs.len();
    let mut tables: BTreeMap<Vec<usize>, Table> = BTreeMap::new();
    for len in 2..=max_arity + 1 {
        for seq in sequences(objects, len) {
            let t = ctx.table(&seq);
            tables.insert(seq, t);
        }
    }
    let mut report = Report::new(format!("A-infinity relations (case {case}, arity <= {max_arity})"));
    degree_check(&ctx, &tables, &mut report);
    let mut jobs: Vec<(Vec<usize>, Key)> = Vec::new();
    for n in 1..=max_arity {
        for seq in sequences(objects, n + 1) {
            for cand in candidates(&tables, &seq) {
                jobs.push((seq.clone(), cand));
            }
        }
    }
    let results: Vec<Report> = jobs
        .par_iter()
        .map(|(seq, gens)| check_relation(&ctx, &tables, seq, gens, &pool, case, options.sign))
        .collect();
    for r in results {
        report.absorb(r);
    }
    report.sort();
    Ok(report)
}

fn sequences(objects: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..objects).map(move |o| {
                    let mut t = s.clone();
                    t.push(o);
                    t
                })
            })
            .collect();
    }
    out
}

/// Output degree: `|c| = Σ |d_j| + 1`, i.e. suspended degrees add up with a shift of `2 − n`.
fn degree_check(ctx: &Context, tables: &BTreeMap<Vec<usize>, Table>, report: &mut Report) {
    let basis = ctx.dga.basis();
    for table in tables.values() {
        for (key, entries) in &table.entries {
            let input: i64 = key.iter().map(|&g| basis.degree(g as usize)).sum();
            for e in entries {
                let got = basis.degree(e.output as usize);
                report.expect(basis.reduce(input + 1) == got, "degree", || {
                    format!(
                        "output {} of degree {got} from inputs of total degree {input}",
                        basis.name(e.output as usize)
                    )
                });
            }
        }
    }
}

/// Generator tuples of arity `seq.len() − 1` on which some term
/// `μ_k(…, μ_l(…), …)` can be nonzero.
fn candidates(tables: &BTreeMap<Vec<usize>, Table>, seq: &[usize]) -> BTreeSet<Key> {
    let n = seq.len() - 1;
    let mut out = BTreeSet::new();
    for l in 1..=n {
        let k = n - l + 1;
        for i in 1..=k {
            let inner = &tables[&seq[i - 1..=i + l - 1]];
            let outer_seq: Vec<usize> = seq[..i].iter().chain(&seq[i + l - 1..]).copied().collect();
            let outer = &tables[&outer_seq];
            for (kin, entries) in &inner.entries {
                let outputs: BTreeSet<u32> = entries.iter().map(|e| e.output).collect();
                for kout in outer.entries.keys() {
                    if outputs.contains(&kout[i - 1]) {
                        let mut cand: Key = kout[..i - 1].into();
                        cand.extend_from_slice(kin);
                        cand.extend_from_slice(&kout[i..]);
                        out.insert(cand);
                    }
                }
            }
        }
    }
    out
}

fn sign_parity(ctx: &Context, gens: &[u32], i: usize, sign: SignConvention) -> bool {
    let basis = ctx.dga.basis();
    let degrees: i64 = gens[..i - 1].iter().map(|&g| basis.degree(g as usize)).sum();
    let extra = match sign {
        SignConvention::Suspended => 0,
        SignConvention::Unsuspended => (i - 1) as i64,
    };
    (degrees + extra).rem_euclid(2) == 1
}

fn fmt_seq(seq: &[usize]) -> String {
    let names: Vec<String> = seq.iter().map(|i| format!("e{i}")).collect();
    format!("({})", names.join(","))
}

fn check_relation(
    ctx: &Context,
    tables: &BTreeMap<Vec<usize>, Table>,
    seq: &[usize],
    gens: &Key,
    pool: &[AlgebraElement],
    case: Case,
    sign: SignConvention,
) -> Report {
    let n = gens.len();
    let alg = ctx.algebra();
    let basis = ctx.dga.basis();
    let mut r = Report::new("");
    let names: Vec<&str> = gens.iter().map(|&g| basis.name(g as usize)).collect();
    let minus_one = -alg.ring().one();
    match case {
        Case::I => {
            let choices: Vec<Vec<&AlgebraElement>> = vec![pool.iter().collect(); n];
            for_each_product(&choices, |coeffs| {
                let inputs: Vec<DualElement> =
                    gens.iter().zip(coeffs).map(|(&g, b)| DualElement::term(basis, b, g as usize)).collect();
                let mut total = DualElement::zero(alg, basis);
                for l in 1..=n {
                    let k = n - l + 1;
                    for i in 1..=k {
                        let inner = eval_case1(ctx, &tables[&seq[i - 1..=i + l - 1]], &inputs[i - 1..i + l - 1]);
                        if inner.is_zero() {
                            continue;
                        }
                        let outer_seq: Vec<usize> = seq[..i].iter().chain(&seq[i + l - 1..]).copied().collect();
                        let mut args: Vec<DualElement> = inputs[..i - 1].to_vec();
                        args.push(inner);
                        args.extend_from_slice(&inputs[i + l - 1..]);
                        let mut term = eval_case1(ctx, &tables[&outer_seq], &args);
                        if sign_parity(ctx, gens, i, sign) {
                            term = term.scale(&minus_one);
                        }
                        total = total.plus(&term);
                    }
                }
                let loc = || {
                    let parts: Vec<String> = names.iter().zip(coeffs).map(|(c, b)| format!("({b})*{c}")).collect();
                    format!("n={n} {} {}", fmt_seq(seq), parts.join(", "))
                };
                r.expect(total.is_zero(), loc(), || format!("residual {total}"));
            });
        }
        Case::II => {
            let one = AlgebraElement::one(alg);
            let choices: Vec<Vec<&AlgebraElement>> = vec![pool.iter().collect(); n - 1];
            let body = |coeffs: &[&AlgebraElement], r: &mut Report| {
                let mut input = TensorElement::constant(basis, &one);
                for (j, &g) in gens.iter().enumerate() {
                    input = input.checked_mul(&TensorElement::generator(alg, basis, g as usize)).expect("same space");
                    let b = if j + 1 < n { coeffs[j] } else { &one };
                    input = input.checked_mul(&TensorElement::constant(basis, b)).expect("same space");
                }
                let total = relation_case2(ctx, tables, seq, &input, sign);
                let loc = || {
                    let mut s = names[0].to_string();
                    for j in 1..n {
                        s.push_str(&format!("*({})*{}", coeffs[j - 1], names[j]));
                    }
                    format!("n={n} {} {s}", fmt_seq(seq))
                };
                r.expect(total.is_zero(), loc(), || format!("residual {total}"));
            };
            if n == 1 {
                body(&[], &mut r);
            } else {
                for_each_product(&choices, |coeffs| body(coeffs, &mut r));
            }
        }
    }
    r
}

/// `Σ (−1)^† μ_k(…, μ_l(…), …)` on an arity-`n` input in Case II.
pub(crate) fn relation_case2(
    ctx: &Context,
    tables: &BTreeMap<Vec<usize>, Table>,
    seq: &[usize],
    input: &TensorElement,
    sign: SignConvention,
) -> TensorElement {
    let alg = ctx.algebra();
    let basis = ctx.dga.basis();
    let n = seq.len() - 1;
    let mut total = TensorElement::zero(alg, basis);
    for l in 1..=n {
        let k = n - l + 1;
        for i in 1..=k {
            let s = i - 1;
            let inner_table = &tables[&seq[s..=s + l]];
            let outer_seq: Vec<usize> = seq[..i].iter().chain(&seq[i + l - 1..]).copied().collect();
            let mut spliced = TensorElement::zero(alg, basis);
            for (y, c) in input.terms() {
                let sub = TensorWord { gens: y.gens[s..s + l].into(), slots: y.slots[s..=s + l].into() };
                let sub = TensorElement::from_terms(alg, basis, [(sub, c.clone())]);
                let inner = eval_case2(ctx, inner_table, &sub);
                let flip = sign_parity(ctx, &y.gens, i, sign);
                for (o, t) in inner.terms() {
                    let mut gens: Key = y.gens[..s].into();
                    gens.push(o.gens[0]);
                    gens.extend_from_slice(&y.gens[s + l..]);
                    let mut slots: SmallVec<[Word; 5]> = y.slots[..s].into();
                    slots.push(o.slots[0].clone());
                    slots.push(o.slots[1].clone());
                    slots.extend(y.slots[s + l + 1..].iter().cloned());
                    let t = if flip { -t.clone() } else { t.clone() };
                    spliced.add_term(TensorWord { gens, slots }, &t);
                }
            }
            if !spliced.is_zero() {
                total.add_assign_scaled(&eval_case2(ctx, &tables[&outer_seq], &spliced), &alg.ring().one());
            }
        }
    }
    total
}
