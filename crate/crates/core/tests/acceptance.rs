//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use ncdga::ainfinity::{mu_case1, mu_case2, mu_eps_case1, mu_eps_case2, verify_ainfty};
use ncdga::augmentation::{develop, ncopy_augmentation};
use ncdga::bimodule::{adjoint_bruteforce, adjoint_formula, BimoduleMorphism};
use ncdga::corpus;
use ncdga::dga::ncopy_projection;
use ncdga::dsl::{parse_algebra_element, parse_augmentation, parse_dga, print_augmentation, print_dga};
use ncdga::homology::{bilinearized_complex, check_product_perturbation, homology, mirror_compare};
use ncdga::{
    Algebra, AlgebraElement, AlgebraMorphism, Augmentation, Case, DualElement, Error, Generator, GeneratorBasis,
    ParseErrorKind, Ring, SemifreeDga, TensorElement, VerifyOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn pool(alg: &Arc<Algebra>) -> Vec<AlgebraElement> {
    ["1", "g1", "g2", "g1*g2", "g2*g1"].iter().map(|t| parse_algebra_element(alg, t).unwrap()).collect()
}

fn term(dga: &SemifreeDga, a: &AlgebraElement, c: usize) -> DualElement {
    DualElement::term(dga.basis(), a, c - 1)
}

/// Both the `ψ` path and the expansion-table path, which must agree.
fn mu1(dga: &SemifreeDga, inputs: &[DualElement]) -> Result<DualElement, String> {
    let direct = ok(mu_case1(dga, inputs))?;
    let tuple = vec![Augmentation::trivial(dga); inputs.len() + 1];
    let table = ok(mu_eps_case1(dga, &tuple, inputs))?;
    ensure!(direct == table, "paths disagree: {direct} versus {table}");
    Ok(direct)
}

fn mu2(dga: &SemifreeDga, input: &TensorElement) -> Result<TensorElement, String> {
    let direct = ok(mu_case2(dga, input))?;
    let n = input.arity().unwrap_or(1);
    let table = ok(mu_eps_case2(dga, &vec![Augmentation::trivial(dga); n + 1], input))?;
    ensure!(direct == table, "paths disagree on {input}: {direct} versus {table}");
    Ok(direct)
}

fn golden_case1() -> Outcome {
    let t = corpus::toy();
    let alg = t.algebra().clone();
    let p = pool(&alg);
    let (g1, g2) = (AlgebraElement::letter(&alg, 0), AlgebraElement::letter(&alg, 1));
    let zero = DualElement::zero(&alg, t.basis());
    let mut checked = 0;
    for a in &p {
        for c in 1..=5 {
            let expect = match c {
                3 => term(&t, a, 1),
                5 => term(&t, &(a * &g2), 2),
                _ => zero.clone(),
            };
            let got = mu1(&t, &[term(&t, a, c)])?;
            ensure!(got == expect, "mu1({a}*c{c}) = {got}, expected {expect}");
            checked += 1;
        }
        for b in &p {
            for c in 1..=5 {
                for d in 1..=5 {
                    let expect = match (c, d) {
                        (2, 4) => term(&t, &(&(a * &g1) * b), 1),
                        (5, 4) => term(&t, &(&(&(a * &g2) * &g1) * b), 3),
                        _ => zero.clone(),
                    };
                    let got = mu1(&t, &[term(&t, a, c), term(&t, b, d)])?;
                    ensure!(got == expect, "mu2({a}*c{c}, {b}*c{d}) = {got}, expected {expect}");
                    checked += 1;
                }
            }
        }
    }
    // Higher arities: every generator tuple with pool coefficients.
    for n in 3..=4 {
        let mut idx = vec![0usize; n];
        loop {
            let inputs: Vec<DualElement> = idx.iter().map(|&i| term(&t, &p[i / 5], i % 5 + 1)).collect();
            let got = mu1(&t, &inputs)?;
            ensure!(got.is_zero(), "mu{n} nonzero: {got}");
            checked += 1;
            if !odometer(&mut idx, 25) {
                break;
            }
            if n == 4 && idx[0] > 0 {
                break;
            }
        }
    }
    Ok(format!("{checked} evaluations"))
}

fn odometer(idx: &mut [usize], base: usize) -> bool {
    for d in idx.iter_mut().rev() {
        if *d + 1 < base {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

fn golden_case2() -> Outcome {
    let mut checked = 0;
    for t in [corpus::toy(), corpus::toy_group()] {
        let alg = t.algebra().clone();
        let g = |i: usize| t.generator(i - 1);
        let cst = |a: &AlgebraElement| t.constant(a);
        let (g1, g2) = (AlgebraElement::letter(&alg, 0), AlgebraElement::letter(&alg, 1));
        let g21 = &g2 * &g1;
        for c in 1..=5 {
            let expect = match c {
                3 => g(1),
                5 => g(2).checked_mul(&cst(&ok(g2.star())?)).unwrap(),
                _ => t.zero(),
            };
            let got = mu2(&t, &g(c))?;
            ensure!(got == expect, "mu1(c{c}) = {got}, expected {expect} over {alg}");
            checked += 1;
        }
        for h in pool(&alg) {
            for c in 1..=5 {
                for d in 1..=5 {
                    let input = g(c).checked_mul(&cst(&h)).unwrap().checked_mul(&g(d)).unwrap();
                    let expect = match (c, d) {
                        (2, 4) => g(1).scale(&ok(h.pair(&g1))?),
                        (5, 4) => g(3).scale(&ok(h.pair(&g21))?),
                        _ => t.zero(),
                    };
                    let got = mu2(&t, &input)?;
                    ensure!(got == expect, "mu2({input}) = {got}, expected {expect} over {alg}");
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} evaluations over Z2<g1,g2> and Z2[F2]"))
}

fn verify(dga: &SemifreeDga, augs: &[Augmentation], case: Case, label: &str) -> Result<usize, String> {
    let r = ok(verify_ainfty(dga, augs, case, 4, &VerifyOptions::default()))?;
    ensure!(r.is_ok(), "{label}: {r}");
    ensure!(r.checked > 0, "{label}: nothing checked");
    Ok(r.checked)
}

fn ainfty_suite() -> Outcome {
    let mut checked = 0;
    let toy = corpus::toy();
    checked += verify(&toy, &[Augmentation::trivial(&toy)], Case::I, "toy, case I")?;
    let group = corpus::toy_group();
    checked += verify(&group, &[Augmentation::trivial(&group)], Case::II, "toy over Z2[F2], case II")?;
    for n in 2..=3 {
        for (base, case) in [(&toy, Case::I), (&group, Case::II)] {
            let (an, _) = base.ncopy(n);
            let e = ok(ncopy_augmentation(base, &an, &vec![Augmentation::trivial(base); n]))?;
            checked += verify(&an, &[e], case, &format!("n-copy {n}, case {case}"))?;
        }
    }
    let (q, q_augs) = corpus::conjugated_rational();
    checked += verify(&q, &q_augs, Case::I, "rational corpus, case I")?;
    Ok(format!("{checked} relation checks"))
}

fn structural() -> Outcome {
    let toy = corpus::toy();
    for n in 1..=3 {
        let (an, lg) = toy.ncopy(n);
        let r = an.check_d_squared();
        ensure!(r.is_ok(), "n-copy {n}: {r}");
        let r = an.check_link_grading(&lg);
        ensure!(r.is_ok(), "n-copy {n}: {r}");
    }
    let (a2, _) = toy.ncopy(2);
    let via = toy.ncopy_via_an(2);
    for g in 0..a2.len() {
        let lhs = ok(ncopy_projection(&toy, &via, 2, a2.differential_of(g)))?;
        let rhs = ok(via.d(&ok(ncopy_projection(&toy, &via, 2, &a2.generator(g)))?))?;
        ensure!(lhs == rhs, "projection fails to commute on {}: {lhs} versus {rhs}", a2.name(g));
    }
    let m2 = Algebra::matrix(Ring::Z2, 2);
    let images = vec![ok(parse_algebra_element(&m2, "E1_2 + E2_1"))?, AlgebraElement::one(&m2)];
    let morphisms = [
        AlgebraMorphism::identity(toy.algebra()),
        ok(AlgebraMorphism::from_images(toy.algebra(), &m2, images))?,
        AlgebraMorphism::diagonal(toy.algebra(), 2),
        AlgebraMorphism::diagonal(toy.algebra(), 3),
    ];
    for f in &morphisms {
        let r = ok(toy.change_coefficients(f))?.check_d_squared();
        ensure!(r.is_ok(), "coefficients {}: {r}", f.target());
    }
    let mut developed = 0;
    for ex in corpus::corpus() {
        for e in &ex.augmentations {
            let d = ok(develop(&ex.dga, e))?;
            for c in 0..d.len() {
                let k = d.differential_component(c, 0);
                ensure!(k.is_zero(), "{}: developed d{} has constant part {k}", ex.name, d.name(c));
            }
            let r = d.check_d_squared();
            ensure!(r.is_ok(), "{}: developed {r}", ex.name);
            developed += 1;
        }
    }
    Ok(format!("{} coefficient changes, {developed} developed DGAs", morphisms.len()))
}

/// Twenty reduced words of length at most 3 in `F2`.
const GROUP_POOL: [&str; 20] = [
    "1",
    "g1",
    "g2",
    "g1^-1",
    "g2^-1",
    "g1*g2",
    "g2*g1",
    "g1*g1",
    "g1^-1*g2",
    "g2*g1^-1",
    "g2^-1*g1",
    "g1*g2^-1",
    "g1*g2*g1",
    "g2*g1*g2",
    "g1*g1*g2",
    "g1^-1*g2^-1*g1",
    "g2*g2*g1^-1",
    "g1*g2^-1*g1",
    "g2^-1*g1*g1",
    "g1*g1*g1",
];

/// Twenty elements of `M2(Z2)`: the fifteen nonzero matrices and five
/// products of matrix units, two of them zero.
const MATRIX_POOL: [&str; 20] = [
    "E1_1",
    "E1_2",
    "E2_1",
    "E2_2",
    "E1_1 + E1_2",
    "E1_1 + E2_1",
    "E1_1 + E2_2",
    "E1_2 + E2_1",
    "E1_2 + E2_2",
    "E2_1 + E2_2",
    "E1_1 + E1_2 + E2_1",
    "E1_1 + E1_2 + E2_2",
    "E1_1 + E2_1 + E2_2",
    "E1_2 + E2_1 + E2_2",
    "E1_1 + E1_2 + E2_1 + E2_2",
    "E1_2*E2_1",
    "E2_1*E1_2",
    "E1_2*E2_1*E1_2",
    "E1_1*E2_2",
    "E1_2*E1_2",
];

fn random_word(
    rng: &mut ChaCha8Rng,
    basis: &Arc<GeneratorBasis>,
    pool: &[AlgebraElement],
    arity: usize,
    max_len: usize,
) -> TensorElement {
    let alg = pool[0].algebra().clone();
    let slot_len = |a: &AlgebraElement| a.terms().map(|(w, _)| alg.word_len(w)).max().unwrap_or(0);
    loop {
        let slots: Vec<&AlgebraElement> = (0..=arity).map(|_| &pool[rng.gen_range(0..pool.len())]).collect();
        if slots.iter().map(|a| slot_len(a)).sum::<usize>() > max_len {
            continue;
        }
        let mut x = TensorElement::constant(basis, slots[0]);
        for s in &slots[1..] {
            let g = TensorElement::generator(&alg, basis, rng.gen_range(0..basis.len()));
            x = x.checked_mul(&g).unwrap().checked_mul(&TensorElement::constant(basis, s)).unwrap();
        }
        return x;
    }
}

fn adjoint_oracle() -> Outcome {
    let mut checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let setups = [
        (Algebra::matrix(Ring::Z2, 2), &MATRIX_POOL, 3usize, 2usize),
        (Algebra::free_group(Ring::Z2, 2), &GROUP_POOL, 1, 1),
    ];
    for (alg, texts, input_len, pad) in setups {
        let pool: Vec<AlgebraElement> = texts.iter().map(|t| parse_algebra_element(&alg, t).unwrap()).collect();
        let basis = GeneratorBasis::new(vec![Generator::new("m", 0), Generator::new("n", 1)], 0).unwrap();
        for trial in 0..40 {
            let n = 1 + trial % 2;
            let images: Vec<TensorElement> = (0..basis.len())
                .map(|_| {
                    let a = random_word(&mut rng, &basis, &pool, n, 3);
                    let b = random_word(&mut rng, &basis, &pool, n, 3);
                    a.checked_add(&b).unwrap()
                })
                .collect();
            let f = ok(BimoduleMorphism::new(&alg, &basis, n, images))?;
            let k = rng.gen_range(0..pad);
            let l = rng.gen_range(0..pad - k);
            let input = random_word(&mut rng, &basis, &pool, k + n + l, input_len);
            let bound = input.max_slot_len() + f.max_image_len();
            let formula = ok(adjoint_formula(&f, k, l, &input))?;
            let brute = ok(adjoint_bruteforce(&f, k, l, bound, &input))?;
            ensure!(
                formula == brute,
                "over {alg}, k={k}, l={l}, input {input}: formula {formula}, brute force {brute}"
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} morphisms"))
}

fn homology_criterion() -> Outcome {
    let t = corpus::toy_specialized();
    let e = Augmentation::trivial(&t);
    for case in [Case::I, Case::II] {
        let cx = ok(bilinearized_complex(&t, &e, &e, case))?;
        let h = ok(homology(&cx))?;
        ensure!(h.total_dimension() == 1, "case {case}: total dimension {}", h.total_dimension());
        let rep = h.representatives().next().unwrap();
        ensure!(cx.fmt_vector(rep) == "c4", "case {case}: representative {}", cx.fmt_vector(rep));
    }
    let mut pairs = 0;
    let mut skipped = Vec::new();
    for ex in corpus::corpus() {
        for e0 in &ex.augmentations {
            for e1 in &ex.augmentations {
                match mirror_compare(&ex.dga, e0, e1) {
                    Ok(r) => {
                        ensure!(r.is_ok(), "{}: {r}", ex.name);
                        pairs += 1;
                    }
                    Err(Error::NotMatrixTarget | Error::InfiniteDimensionalCoefficients(_)) => skipped.push(ex.name),
                    Err(e) => return Err(format!("{}: {e}", ex.name)),
                }
            }
        }
    }
    ensure!(pairs > 0, "no mirror comparison ran");
    skipped.dedup();
    let mut trials = 0;
    let (tm, tm_augs) = corpus::toy_matrix();
    let (xy, xy_augs) = corpus::xy();
    let (qs, qs_augs) = corpus::conjugated_rational_scalar();
    let (quad, quad_augs) = corpus::quadratic();
    let triples: [(&SemifreeDga, [&Augmentation; 3]); 6] = [
        (&t, [&e, &e, &e]),
        (&tm, [&tm_augs[1], &tm_augs[2], &tm_augs[0]]),
        (&xy, [&xy_augs[0], &xy_augs[1], &xy_augs[0]]),
        (&qs, [&qs_augs[0], &qs_augs[1], &qs_augs[1]]),
        (&quad, [&quad_augs[0], &quad_augs[0], &quad_augs[0]]),
        (&quad, [&quad_augs[0], &quad_augs[2], &quad_augs[0]]),
    ];
    for (i, (dga, [a, b, c])) in triples.iter().enumerate() {
        for case in [Case::I, Case::II] {
            let r = ok(check_product_perturbation(dga, a, b, c, case, 50, i as u64))?;
            ensure!(r.is_ok(), "{r}");
            trials += r.checked;
        }
    }
    Ok(format!(
        "{pairs} mirror pairs (skipped infinite coefficients: {}), {trials} perturbation trials",
        skipped.join(", ")
    ))
}

fn fixtures() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn parser_criterion() -> Outcome {
    let mut files: Vec<_> =
        std::fs::read_dir(fixtures()).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut dgas = 0;
    let mut augs = 0;
    let mut docs = std::collections::BTreeMap::new();
    for f in files.iter().filter(|f| f.extension().is_some_and(|e| e == "dga")) {
        let name = f.file_stem().unwrap().to_string_lossy().to_string();
        if name.starts_with("bad-") {
            continue;
        }
        let text = std::fs::read_to_string(f).unwrap();
        let doc = parse_dga(&text).map_err(|e| format!("{name}: {e}"))?;
        let printed = doc.print();
        let again = parse_dga(&printed).map_err(|e| format!("{name} reprinted: {e}"))?;
        ensure!(again.dga == doc.dga && again.print() == printed, "{name}: round trip changed the document");
        ensure!(print_dga(&doc.dga) == printed, "{name}: printers disagree");
        docs.insert(name, doc.dga);
        dgas += 1;
    }
    for f in files.iter().filter(|f| f.extension().is_some_and(|e| e == "aug")) {
        let name = f.file_stem().unwrap().to_string_lossy().to_string();
        let owner = ["conjugated", "example5", "quadratic", "xy"].iter().find(|p| name.starts_with(*p)).unwrap();
        let dga = &docs[*owner];
        let text = std::fs::read_to_string(f).unwrap();
        let e = parse_augmentation(&text, dga).map_err(|e| format!("{name}: {e}"))?;
        let again =
            parse_augmentation(&print_augmentation(dga, &e), dga).map_err(|e| format!("{name} reprinted: {e}"))?;
        ensure!(again == e, "{name}: augmentation round trip");
        augs += 1;
    }
    let negatives = [
        ("bad-syntax", ParseErrorKind::SyntaxError, 5),
        ("bad-generator", ParseErrorKind::UnknownGenerator, 10),
        ("bad-degree", ParseErrorKind::DegreeMismatch, 10),
        ("bad-action", ParseErrorKind::ActionViolation, 5),
    ];
    for (name, kind, line) in negatives {
        let text = std::fs::read_to_string(fixtures().join(format!("{name}.dga"))).unwrap();
        match parse_dga(&text) {
            Ok(_) => return Err(format!("{name} parsed")),
            Err(e) => ensure!(e.kind == kind && e.line == line, "{name}: got {e}, expected {kind} at line {line}"),
        }
    }
    Ok(format!("{dgas} DGA and {augs} augmentation fixtures, {} negative fixtures", negatives.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("golden case I tables", golden_case1),
        ("golden case II tables", golden_case2),
        ("A-infinity relations", ainfty_suite),
        ("structural lemmas", structural),
        ("adjoint oracle", adjoint_oracle),
        ("homology", homology_criterion),
        ("parser", parser_criterion),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
