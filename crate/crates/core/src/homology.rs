//! Bilinearized complexes, their homology over a field, the product induced
//! by `μ_2`, and the mirror comparison.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::ainfinity::{eval_case1, eval_case2, Case, Context};
use crate::algebra::{Algebra, AlgebraElement, AlgebraKind, Word};
use crate::augmentation::Augmentation;
use crate::bimodule::{DualElement, GeneratorBasis, TensorElement, TensorWord};
use crate::dga::SemifreeDga;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::scalar::{Ring, Scalar};

/// A basis vector of the complex: a generator decorated by algebra words.
/// Case I uses `left · c`; Case II uses `left · c · right`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cell {
    gen: u32,
    left: Word,
    right: Word,
}

/// `(M^∨, μ_1)` or `(M, μ_1)` over the decorated basis. The differential
/// raises the generator degree by one.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    case: Case,
    algebra: Arc<Algebra>,
    basis: Arc<GeneratorBasis>,
    cells: Vec<Cell>,
    index: BTreeMap<Cell, usize>,
    d: Matrix,
}

impl ChainComplex {
    pub fn case(&self) -> Case {
        self.case
    }

    pub fn ring(&self) -> Ring {
        self.algebra.ring().clone()
    }

    pub fn dimension(&self) -> usize {
        self.cells.len()
    }

    pub fn differential(&self) -> &Matrix {
        &self.d
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis.degree(self.cells[i].gen as usize)
    }

    pub fn label(&self, i: usize) -> String {
        let cell = &self.cells[i];
        let mut parts = Vec::new();
        if !self.algebra.is_unit_word(&cell.left) || self.algebra.unit_words().len() > 1 {
            parts.push(self.algebra.fmt_word(&cell.left));
        }
        parts.push(self.basis.name(cell.gen as usize).to_string());
        if self.case == Case::II && (!self.algebra.is_unit_word(&cell.right) || self.algebra.unit_words().len() > 1) {
            parts.push(self.algebra.fmt_word(&cell.right));
        }
        parts.join("*")
    }

    /// Degrees that carry at least one basis vector, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = (0..self.cells.len()).map(|i| self.degree(i)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.d.apply(v)
    }

    pub fn is_cycle(&self, v: &[Scalar]) -> bool {
        self.apply(v).iter().all(Scalar::is_zero)
    }

    pub fn fmt_vector(&self, v: &[Scalar]) -> String {
        crate::algebra::fmt_terms(v.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, s)| (self.label(i), s)))
    }

    fn zero_vector(&self) -> Vec<Scalar> {
        vec![self.ring().zero(); self.cells.len()]
    }

    fn dual_to_vector(&self, x: &DualElement) -> Vec<Scalar> {
        let mut v = self.zero_vector();
        for (g, a) in x.terms() {
            for (w, s) in a.terms() {
                let cell = Cell { gen: g as u32, left: w.clone(), right: Word::empty() };
                v[self.index[&cell]] = s.clone();
            }
        }
        v
    }

    fn vector_to_dual(&self, v: &[Scalar]) -> DualElement {
        let mut out = DualElement::zero(&self.algebra, &self.basis);
        for (i, s) in v.iter().enumerate() {
            if !s.is_zero() {
                let cell = &self.cells[i];
                let a = AlgebraElement::from_terms(&self.algebra, [(cell.left.clone(), s.clone())]);
                out.add(cell.gen as usize, &a);
            }
        }
        out
    }

    fn tensor_to_vector(&self, x: &TensorElement) -> Vec<Scalar> {
        let mut v = self.zero_vector();
        for (w, s) in x.terms() {
            let cell = Cell { gen: w.gens[0], left: w.slots[0].clone(), right: w.slots[1].clone() };
            v[self.index[&cell]] = s.clone();
        }
        v
    }

    fn vector_to_tensor(&self, v: &[Scalar]) -> TensorElement {
        TensorElement::from_terms(
            &self.algebra,
            &self.basis,
            v.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, s)| {
                let cell = &self.cells[i];
                let w = TensorWord {
                    gens: smallvec::smallvec![cell.gen],
                    slots: smallvec::smallvec![cell.left.clone(), cell.right.clone()],
                };
                (w, s.clone())
            }),
        )
    }
}

fn coefficient_words(alg: &Algebra) -> Result<Vec<Word>> {
    if !alg.ring().is_field() {
        return Err(Error::InfiniteDimensionalCoefficients(format!("{} is not a field", alg.ring().name())));
    }
    alg.basis_words().ok_or_else(|| Error::InfiniteDimensionalCoefficients(alg.to_string()))
}

/// The complex with differential `μ_1^{(ε_0, ε_1)}`.
pub fn bilinearized_complex(
    dga: &SemifreeDga,
    e0: &Augmentation,
    e1: &Augmentation,
    case: Case,
) -> Result<ChainComplex> {
    let ctx = Context::new(dga, &[e0.clone(), e1.clone()])?;
    if case == Case::II {
        ctx.algebra().require_hermitian()?;
    }
    complex_from_context(&ctx, &[0, 1], case)
}

fn complex_from_context(ctx: &Context, seq: &[usize], case: Case) -> Result<ChainComplex> {
    let alg = ctx.algebra().clone();
    let basis = ctx.dga.basis().clone();
    let words = coefficient_words(&alg)?;
    let mut cells = Vec::new();
    for g in 0..basis.len() as u32 {
        for l in &words {
            match case {
                Case::I => cells.push(Cell { gen: g, left: l.clone(), right: Word::empty() }),
                Case::II => cells.extend(words.iter().map(|r| Cell { gen: g, left: l.clone(), right: r.clone() })),
            }
        }
    }
    let index = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut cx = ChainComplex {
        case,
        algebra: alg.clone(),
        basis: basis.clone(),
        cells,
        index,
        d: Matrix::zeros(alg.ring(), 0, 0),
    };
    let table = ctx.table(seq);
    let columns: Vec<Vec<Scalar>> = (0..cx.cells.len())
        .map(|i| {
            let mut e = cx.zero_vector();
            e[i] = alg.ring().one();
            match case {
                Case::I => cx.dual_to_vector(&eval_case1(ctx, &table, &[cx.vector_to_dual(&e)])),
                Case::II => cx.tensor_to_vector(&eval_case2(ctx, &table, &cx.vector_to_tensor(&e))),
            }
        })
        .collect();
    cx.d = Matrix::from_columns(alg.ring(), cx.cells.len(), &columns);
    Ok(cx)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: i64,
    pub dimension: usize,
    /// Cycles whose classes form a basis, as vectors in the complex.
    pub representatives: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct HomologyResult {
    pub groups: Vec<HomologyGroup>,
    boundaries: Vec<Vec<Scalar>>,
    rows: usize,
    ring: Ring,
}

impl HomologyResult {
    pub fn total_dimension(&self) -> usize {
        self.groups.iter().map(|g| g.dimension).sum()
    }

    /// `(degree, dimension)` for every degree of the complex.
    pub fn dimensions(&self) -> Vec<(i64, usize)> {
        self.groups.iter().map(|g| (g.degree, g.dimension)).collect()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Vec<Scalar>> {
        self.groups.iter().flat_map(|g| &g.representatives)
    }

    /// Coordinates of the class of a cycle in the representative basis, or
    /// `None` when `v` is not a combination of representatives and boundaries.
    pub fn class_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let reps: Vec<Vec<Scalar>> = self.representatives().cloned().collect();
        let mut cols = reps.clone();
        cols.extend(self.boundaries.iter().cloned());
        if cols.is_empty() {
            return v.iter().all(Scalar::is_zero).then(Vec::new);
        }
        let x = Matrix::from_columns(&self.ring, self.rows, &cols).solve(v)?;
        Some(x[..reps.len()].to_vec())
    }
}

/// Homology degree by degree. Representatives are the kernel vectors, in
/// pivot order, that are independent modulo boundaries.
pub fn homology(cx: &ChainComplex) -> Result<HomologyResult> {
    let ring = cx.ring();
    if !ring.is_field() {
        return Err(Error::InfiniteDimensionalCoefficients(format!("{} is not a field", ring.name())));
    }
    if !cx.d.mul(&cx.d).is_zero() {
        return Err(Error::NotAComplex("mu_1 composed with itself is nonzero".into()));
    }
    let n = cx.dimension();
    let modulus = cx.basis.modulus();
    let mut groups = Vec::new();
    let mut all_boundaries = Vec::new();
    for deg in cx.degrees() {
        let in_deg: Vec<usize> = (0..n).filter(|&i| cx.degree(i) == deg).collect();
        let below: Vec<usize> =
            (0..n).filter(|&i| crate::bimodule::reduce_degree(cx.degree(i) + 1, modulus) == deg).collect();
        let restricted = Matrix::from_columns(&ring, n, &in_deg.iter().map(|&j| cx.d.column(j)).collect::<Vec<_>>());
        let kernel: Vec<Vec<Scalar>> = restricted
            .kernel()
            .into_iter()
            .map(|k| {
                let mut v = cx.zero_vector();
                for (x, &j) in k.into_iter().zip(&in_deg) {
                    v[j] = x;
                }
                v
            })
            .collect();
        let mut span: Vec<Vec<Scalar>> =
            below.iter().map(|&j| cx.d.column(j)).filter(|c| c.iter().any(|x| !x.is_zero())).collect();
        all_boundaries.extend(span.iter().cloned());
        let mut rank = if span.is_empty() { 0 } else { Matrix::from_columns(&ring, n, &span).rank() };
        let image_rank = rank;
        let mut reps = Vec::new();
        for k in kernel.iter() {
            span.push(k.clone());
            let r = Matrix::from_columns(&ring, n, &span).rank();
            if r > rank {
                rank = r;
                reps.push(k.clone());
            } else {
                span.pop();
            }
        }
        debug_assert_eq!(reps.len(), kernel.len() - image_rank);
        groups.push(HomologyGroup { degree: deg, dimension: reps.len(), representatives: reps });
    }
    Ok(HomologyResult { groups, boundaries: all_boundaries, rows: n, ring })
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {}: dim {}", self.degree, self.dimension)
    }
}

/// `μ_2^{(ε_0, ε_1, ε_2)}` on homology classes.
#[derive(Clone, Debug)]
pub struct ProductTable {
    pub left: (ChainComplex, HomologyResult),
    pub right: (ChainComplex, HomologyResult),
    pub output: (ChainComplex, HomologyResult),
    /// `values[i][j]`: class of `μ_2(x_i, y_j)` on representatives.
    pub values: Vec<Vec<Vec<Scalar>>>,
}

impl ProductTable {
    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().flatten().all(Scalar::is_zero)
    }
}

struct ProductContext {
    ctx: Context,
    case: Case,
    left: ChainComplex,
    right: ChainComplex,
    output: ChainComplex,
    table: crate::ainfinity::Table,
}

impl ProductContext {
    fn new(dga: &SemifreeDga, e0: &Augmentation, e1: &Augmentation, e2: &Augmentation, case: Case) -> Result<Self> {
        let ctx = Context::new(dga, &[e0.clone(), e1.clone(), e2.clone()])?;
        if case == Case::II {
            ctx.algebra().require_hermitian()?;
        }
        let left = complex_from_context(&ctx, &[0, 1], case)?;
        let right = complex_from_context(&ctx, &[1, 2], case)?;
        let output = complex_from_context(&ctx, &[0, 2], case)?;
        let table = ctx.table(&[0, 1, 2]);
        Ok(ProductContext { ctx, case, left, right, output, table })
    }

    fn mu2(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        match self.case {
            Case::I => {
                let args = [self.left.vector_to_dual(x), self.right.vector_to_dual(y)];
                self.output.dual_to_vector(&eval_case1(&self.ctx, &self.table, &args))
            }
            Case::II => {
                let a = self.left.vector_to_tensor(x);
                let b = self.right.vector_to_tensor(y);
                let mut input = TensorElement::zero(self.ctx.algebra(), self.ctx.dga.basis());
                for (u, s) in a.terms() {
                    for (v, t) in b.terms() {
                        if let Some(w) = u.concat(v, self.ctx.algebra()) {
                            input.add_term(w, &(s * t));
                        }
                    }
                }
                self.output.tensor_to_vector(&eval_case2(&self.ctx, &self.table, &input))
            }
        }
    }
}

pub fn product_on_homology(
    dga: &SemifreeDga,
    e0: &Augmentation,
    e1: &Augmentation,
    e2: &Augmentation,
    case: Case,
) -> Result<ProductTable> {
    let pc = ProductContext::new(dga, e0, e1, e2, case)?;
    let hl = homology(&pc.left)?;
    let hr = homology(&pc.right)?;
    let ho = homology(&pc.output)?;
    let mut values = Vec::new();
    for x in hl.representatives() {
        let mut row = Vec::new();
        for y in hr.representatives() {
            let z = pc.mu2(x, y);
            row.push(ho.class_of(&z).ok_or_else(|| Error::NotAComplex("mu_2 of cycles is not a cycle".into()))?);
        }
        values.push(row);
    }
    Ok(ProductTable { left: (pc.left, hl), right: (pc.right, hr), output: (pc.output, ho), values })
}

fn random_scalar(ring: &Ring, rng: &mut StdRng) -> Scalar {
    match ring {
        Ring::Zp(p) => ring.from_int(rng.gen_range(0..*p as i64)),
        _ => ring.from_int(rng.gen_range(-3..=3)),
    }
}

/// Re-evaluates the product on randomly chosen cycles `x + μ_1 u`,
/// `y + μ_1 v` and checks the class of the result does not change.
pub fn check_product_perturbation(
    dga: &SemifreeDga,
    e0: &Augmentation,
    e1: &Augmentation,
    e2: &Augmentation,
    case: Case,
    trials: usize,
    seed: u64,
) -> Result<Report> {
    let pc = ProductContext::new(dga, e0, e1, e2, case)?;
    let hl = homology(&pc.left)?;
    let hr = homology(&pc.right)?;
    let ho = homology(&pc.output)?;
    let ring = pc.ctx.algebra().ring().clone();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = Report::new("product perturbation");
    let combo = |reps: &[Vec<Scalar>], dim: usize, rng: &mut StdRng| {
        let mut v = vec![ring.zero(); dim];
        for r in reps {
            let s = random_scalar(&ring, rng);
            for (a, b) in v.iter_mut().zip(r) {
                *a = &*a + &(&s * b);
            }
        }
        v
    };
    let perturb = |cx: &ChainComplex, v: &[Scalar], rng: &mut StdRng| {
        let u: Vec<Scalar> = (0..cx.dimension()).map(|_| random_scalar(&ring, rng)).collect();
        v.iter().zip(cx.apply(&u)).map(|(a, b)| a + &b).collect::<Vec<_>>()
    };
    let lreps: Vec<Vec<Scalar>> = hl.representatives().cloned().collect();
    let rreps: Vec<Vec<Scalar>> = hr.representatives().cloned().collect();
    for t in 0..trials {
        let x = combo(&lreps, pc.left.dimension(), &mut rng);
        let y = combo(&rreps, pc.right.dimension(), &mut rng);
        let x2 = perturb(&pc.left, &x, &mut rng);
        let y2 = perturb(&pc.right, &y, &mut rng);
        let a = ho.class_of(&pc.mu2(&x, &y));
        let b = ho.class_of(&pc.mu2(&x2, &y2));
        report.expect(a.is_some() && a == b, format!("trial {t}"), || {
            format!("class {a:?} changed to {b:?} for x = {}, y = {}", pc.left.fmt_vector(&x), pc.right.fmt_vector(&y))
        });
    }
    Ok(report)
}

/// Compares graded dimensions of `H(dga; ε_0, ε_1)` and
/// `H(mirror; ε̄_1, ε̄_0)` in Case II, where `ε̄` is the transpose.
pub fn mirror_compare(dga: &SemifreeDga, e0: &Augmentation, e1: &Augmentation) -> Result<Report> {
    for e in [e0, e1] {
        match e.target().kind() {
            AlgebraKind::Matrix { .. } => {}
            AlgebraKind::Free { symbols } if symbols.is_empty() => {}
            _ => return Err(Error::NotMatrixTarget),
        }
    }
    let mirror = dga.mirror();
    let h = homology(&bilinearized_complex(dga, e0, e1, Case::II)?)?;
    let hm = homology(&bilinearized_complex(&mirror, &e1.reversed(), &e0.reversed(), Case::II)?)?;
    let mut report = Report::new("mirror dimensions");
    let a: BTreeMap<i64, usize> = h.dimensions().into_iter().collect();
    let b: BTreeMap<i64, usize> = hm.dimensions().into_iter().collect();
    for deg in a.keys().chain(b.keys()).copied().collect::<std::collections::BTreeSet<_>>() {
        let (x, y) = (a.get(&deg).copied().unwrap_or(0), b.get(&deg).copied().unwrap_or(0));
        report.expect(x == y, format!("deg {deg}"), || format!("dim {x} versus mirror dim {y}"));
    }
    Ok(report)
}
