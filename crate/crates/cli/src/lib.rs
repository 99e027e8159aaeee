//! Command-line driver for `ncdga`.
//!
//! DGA arguments are file paths or `builtin:NAME` for the bundled examples
//! (`ncdga example --list`). Augmentations are passed with `--aug`, either as
//! a path or as `builtin:K` for the K-th bundled augmentation of a builtin
//! DGA. When no augmentation is given the trivial one is used.
//!
//! `homology --json` prints one object with the fields
//! `case` (`"I"` or `"II"`), `total` (total dimension) and `groups`, a list
//! of `{ "degree", "dimension", "representatives" }` where each
//! representative is the printed cycle.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! and parse errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ncdga::ainfinity::{curvature, explain_case2, mu_eps_case1, verify_ainfty};
use ncdga::augmentation::{check_augmentation, develop, ncopy_augmentation, search_augmentations};
use ncdga::corpus;
use ncdga::dsl::{parse_augmentation, parse_dga, parse_element, print_augmentation, print_dga};
use ncdga::homology::{
    bilinearized_complex, check_product_perturbation, homology, mirror_compare, product_on_homology, ChainComplex,
};
use ncdga::{AlgebraElement, AlgebraMorphism, Augmentation, Case, DualElement, LinkGrading, Report, SemifreeDga};
use num_rational::BigRational;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "ncdga", version, about = "Semifree noncommutative DGAs and their A-infinity operations")]
pub struct Cli {
    /// Worker threads for the parallel checks (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check d^2 = 0, its arity components and any declared link grading.
    Check(Input),
    /// Check augmentations, or enumerate all of them over a finite target.
    AugCheck {
        #[command(flatten)]
        input: Input,
        /// Enumerate every augmentation with the coefficients of the first `--aug`.
        #[arg(long)]
        search: bool,
    },
    /// Conjugate away the constant part of the differential.
    Develop {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate one A-infinity operation.
    Mu {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Case I: comma-separated inputs such as `g1*c2, c4`. Case II: one word such as `c2*h*c4`.
        #[arg(long)]
        inputs: String,
        /// Named coefficient for use in `--inputs`, as `NAME=EXPR`.
        #[arg(long = "coeff", value_name = "NAME=EXPR")]
        coeffs: Vec<String>,
    },
    /// Verify the A-infinity relations up to a given arity.
    AinftyVerify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
    /// Print the bilinearized complex of a pair of augmentations.
    Linearize {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        case: CaseArg,
    },
    /// Homology of the bilinearized complex.
    Homology {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        json: bool,
    },
    /// The product on homology for three augmentations.
    Product {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Also check invariance under this many random boundary perturbations.
        #[arg(long, value_name = "TRIALS")]
        perturb: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The n-copy DGA, and the diagonal augmentation of the given ones.
    Ncopy {
        #[command(flatten)]
        input: Input,
        #[arg(short, value_name = "N")]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The mirror DGA, or compare homology with the mirror.
    Mirror {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Change coefficients along a unital algebra morphism.
    Coeffchange {
        #[command(flatten)]
        input: Input,
        /// Diagonal map into n copies of the coefficient algebra.
        #[arg(long, value_name = "N", conflicts_with = "map", required_unless_present = "map")]
        split: Option<usize>,
        /// File with a `target` line and `map LETTER = EXPR` lines.
        #[arg(long, value_name = "FILE")]
        map: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Sub-DGA below an action level or on a set of link components.
    Subdga {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "L", conflicts_with = "components", required_unless_present = "components")]
        action: Option<String>,
        /// Comma-separated 1-based component numbers.
        #[arg(long, value_name = "I,J,..")]
        components: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Print a bundled example DGA.
    Example {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
pub struct Input {
    /// DGA file, or `builtin:NAME`.
    pub dga: String,
    /// Augmentation file, or `builtin:K`; repeat for a tuple.
    #[arg(long = "aug", value_name = "FILE")]
    pub augs: Vec<String>,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the resulting DGA here instead of standard output.
    #[arg(short = 'o', value_name = "OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "UPPER")]
pub enum CaseArg {
    I,
    II,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::I => Case::I,
            CaseArg::II => Case::II,
        }
    }
}

/// What a command printed and whether its checks passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

/// An input error, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Parses the arguments, runs the command and returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() || e.downcast_ref::<ncdga::Error>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build()?;
    pool.install(|| dispatch(cli.command))
}

struct Loaded {
    dga: SemifreeDga,
    builtin: Option<Vec<Augmentation>>,
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
}

fn load_dga(arg: &str) -> Result<Loaded> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        let ex = corpus::corpus()
            .into_iter()
            .find(|ex| ex.name == name)
            .ok_or_else(|| usage(format!("no builtin example {name}")))?;
        return Ok(Loaded { dga: ex.dga, builtin: Some(ex.augmentations) });
    }
    let doc = parse_dga(&read(arg)?).map_err(|e| usage(format!("{arg}: {e}")))?;
    Ok(Loaded { dga: doc.dga, builtin: None })
}

fn load_aug(loaded: &Loaded, arg: &str) -> Result<Augmentation> {
    if let Some(k) = arg.strip_prefix("builtin:") {
        let augs = loaded.builtin.as_ref().ok_or_else(|| usage("builtin augmentations need a builtin DGA"))?;
        let k: usize = k.parse().map_err(|_| usage(format!("bad augmentation index {k}")))?;
        return augs
            .get(k)
            .cloned()
            .ok_or_else(|| usage(format!("augmentation {k} out of range (have {})", augs.len())));
    }
    if arg == "trivial" {
        return Ok(Augmentation::trivial(&loaded.dga));
    }
    parse_augmentation(&read(arg)?, &loaded.dga).map_err(|e| usage(format!("{arg}: {e}")))
}

fn load(input: &Input) -> Result<(SemifreeDga, Vec<Augmentation>)> {
    let loaded = load_dga(&input.dga)?;
    let augs = input.augs.iter().map(|s| load_aug(&loaded, s)).collect::<Result<Vec<_>>>()?;
    Ok((loaded.dga, augs))
}

/// The augmentation tuple of length `len`: the given ones, a single one
/// repeated, or the trivial one.
fn tuple(dga: &SemifreeDga, augs: &[Augmentation], len: usize) -> Result<Vec<Augmentation>> {
    match augs.len() {
        0 => Ok(vec![Augmentation::trivial(dga); len]),
        1 => Ok(vec![augs[0].clone(); len]),
        n if n == len => Ok(augs.to_vec()),
        n => Err(usage(format!("expected 1 or {len} augmentations, got {n}"))),
    }
}

fn emit_dga(dga: &SemifreeDga, output: &Output, extra: &str) -> Result<Outcome> {
    let text = print_dga(dga);
    match &output.out {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            Ok(Outcome::ok(format!("wrote {}\n{extra}", path.display())))
        }
        None => Ok(Outcome::ok(format!("{text}{extra}"))),
    }
}

fn report(r: &Report) -> Outcome {
    Outcome { text: format!("{r}\n"), passed: r.is_ok() }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Check(input) => check(&input),
        Command::AugCheck { input, search } => aug_check(&input, search),
        Command::Develop { input, output } => {
            let (dga, augs) = load(&input)?;
            let e = tuple(&dga, &augs, 1)?.remove(0);
            let dev = develop(&dga, &e)?;
            emit_dga(&dev, &output, &format!("# developed along {}\n", one_line(&dga, &e)))
        }
        Command::Mu { input, case, inputs, coeffs } => mu(&input, case.into(), &inputs, &coeffs),
        Command::AinftyVerify { input, case, max_arity } => {
            let (dga, augs) = load(&input)?;
            let augs = if augs.is_empty() { vec![Augmentation::trivial(&dga)] } else { augs };
            let r = verify_ainfty(&dga, &augs, case.into(), max_arity, &Default::default())?;
            if r.is_ok() {
                Ok(Outcome::ok(format!(
                    "{} relation checks up to arity {max_arity}: all residuals vanish\n",
                    r.checked
                )))
            } else {
                Ok(report(&r))
            }
        }
        Command::Linearize { input, case } => {
            let (dga, augs) = load(&input)?;
            let t = tuple(&dga, &augs, 2)?;
            Ok(Outcome::ok(print_complex(&bilinearized_complex(&dga, &t[0], &t[1], case.into())?)))
        }
        Command::Homology { input, case, json } => homology_cmd(&input, case.into(), json),
        Command::Product { input, case, perturb, seed } => product(&input, case.into(), perturb, seed),
        Command::Ncopy { input, n, output } => {
            if n == 0 {
                bail!(usage("-n must be positive"));
            }
            let (dga, augs) = load(&input)?;
            let (an, _) = dga.ncopy(n);
            let extra = if augs.is_empty() {
                String::new()
            } else {
                let e = ncopy_augmentation(&dga, &an, &tuple(&dga, &augs, n)?)?;
                let text = print_augmentation(&an, &e);
                text.lines().map(|l| format!("# aug: {l}\n")).collect()
            };
            emit_dga(&an, &output, &extra)
        }
        Command::Mirror { input, compare, output } => {
            let (dga, augs) = load(&input)?;
            if compare {
                let t = tuple(&dga, &augs, 2)?;
                return Ok(report(&mirror_compare(&dga, &t[0], &t[1])?));
            }
            emit_dga(&dga.mirror(), &output, "")
        }
        Command::Coeffchange { input, split, map, output } => {
            let loaded = load_dga(&input.dga)?;
            let f = match (split, map) {
                (Some(n), _) => AlgebraMorphism::diagonal(loaded.dga.algebra(), n),
                (None, Some(path)) => load_aug(&loaded, &path)?.coefficients().clone(),
                (None, None) => bail!(usage("give --split or --map")),
            };
            emit_dga(&loaded.dga.change_coefficients(&f)?, &output, "")
        }
        Command::Subdga { input, action, components, output } => {
            let dga = load_dga(&input.dga)?.dga;
            let sub = match (action, components) {
                (Some(level), _) => {
                    let level =
                        BigRational::from_str(&level).map_err(|_| usage(format!("bad action level {level}")))?;
                    dga.action_subdga(&level)?
                }
                (None, Some(list)) => {
                    let ks = list
                        .split(',')
                        .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad component {s}"))))
                        .collect::<Result<Vec<_>>>()?;
                    let lg = LinkGrading::from_basis(dga.basis())
                        .ok_or_else(|| usage("the DGA declares no link grading"))?;
                    dga.restrict_to_components(&lg, &ks)?.0
                }
                (None, None) => bail!(usage("give --action or --components")),
            };
            emit_dga(&sub, &output, "")
        }
        Command::Example { name, list, output } => {
            if list {
                let names: String = corpus::corpus().iter().map(|ex| format!("{}\n", ex.name)).collect();
                return Ok(Outcome::ok(names));
            }
            let name = name.expect("clap requires a name");
            let ex = corpus::corpus()
                .into_iter()
                .find(|ex| ex.name == name)
                .ok_or_else(|| usage(format!("no builtin example {name}")))?;
            emit_dga(&ex.dga, &output, "")
        }
    }
}

fn check(input: &Input) -> Result<Outcome> {
    let (dga, augs) = load(input)?;
    let mut out = String::new();
    let mut passed = true;
    let d2 = dga.check_d_squared();
    passed &= d2.is_ok();
    writeln!(out, "{d2}")?;
    let mut comps = Report::new("arity components");
    for n in 0..=2 * dga.max_arity() {
        comps.absorb(dga.check_component_relations(n));
    }
    passed &= comps.is_ok();
    writeln!(out, "{comps}")?;
    if let Some(lg) = LinkGrading::from_basis(dga.basis()) {
        let r = dga.check_link_grading(&lg);
        passed &= r.is_ok();
        writeln!(out, "{r}")?;
    }
    let mu0 = curvature(&dga);
    if !mu0.is_zero() {
        writeln!(out, "curvature: {mu0}")?;
    }
    for (k, e) in augs.iter().enumerate() {
        let r = check_augmentation(&dga, e);
        passed &= r.is_ok();
        writeln!(out, "augmentation {}: {r}", input.augs[k])?;
    }
    Ok(Outcome { text: out, passed })
}

fn one_line(dga: &SemifreeDga, e: &Augmentation) -> String {
    let body: Vec<String> = print_augmentation(dga, e)
        .lines()
        .filter(|l| !l.starts_with("target") && !l.starts_with("map"))
        .map(str::to_string)
        .collect();
    if body.is_empty() {
        "trivial".into()
    } else {
        body.join("; ")
    }
}

fn aug_check(input: &Input, search: bool) -> Result<Outcome> {
    let (dga, augs) = load(input)?;
    if search {
        let f =
            augs.first().map(|e| e.coefficients().clone()).unwrap_or_else(|| AlgebraMorphism::identity(dga.algebra()));
        let found = search_augmentations(&dga, &f)?;
        let mut out = format!("{} augmentations into {}\n", found.len(), f.target());
        for e in &found {
            writeln!(out, "{}", one_line(&dga, e))?;
        }
        return Ok(Outcome::ok(out));
    }
    if augs.is_empty() {
        bail!(usage("give at least one --aug, or --search"));
    }
    let mut out = String::new();
    let mut passed = true;
    for (k, e) in augs.iter().enumerate() {
        let r = check_augmentation(&dga, e);
        passed &= r.is_ok();
        writeln!(out, "{}: {r}", input.augs[k])?;
    }
    Ok(Outcome { text: out, passed })
}

fn bindings(coeffs: &[String], alg: &std::sync::Arc<ncdga::Algebra>) -> Result<Vec<(String, AlgebraElement)>> {
    coeffs
        .iter()
        .map(|c| {
            let (name, expr) = c.split_once('=').ok_or_else(|| usage(format!("--coeff expects NAME=EXPR, got {c}")))?;
            let x =
                ncdga::dsl::parse_algebra_element(alg, expr.trim()).map_err(|e| usage(format!("--coeff {c}: {e}")))?;
            Ok((name.trim().to_string(), x))
        })
        .collect()
}

fn parenthesize(x: &impl std::fmt::Display, terms: usize) -> String {
    if terms > 1 {
        format!("({x})")
    } else {
        x.to_string()
    }
}

fn mu(input: &Input, case: Case, inputs: &str, coeffs: &[String]) -> Result<Outcome> {
    let (dga, augs) = load(input)?;
    let coeff_dga = match augs.first() {
        Some(e) => dga.change_coefficients(e.coefficients())?,
        None => dga.clone(),
    };
    let binds = bindings(coeffs, coeff_dga.algebra())?;
    let parse = |s: &str| parse_element(&coeff_dga, s.trim(), &binds).map_err(|e| usage(format!("--inputs {s}: {e}")));
    match case {
        Case::I => {
            let mut duals = Vec::new();
            for item in inputs.split(',') {
                let x = parse(item)?;
                let mut d = DualElement::zero(coeff_dga.algebra(), coeff_dga.basis());
                for (w, s) in x.terms() {
                    if w.arity() != 1 || !coeff_dga.algebra().is_unit_word(&w.slots[1]) {
                        bail!(usage(format!("Case I inputs have the form a*c, got {item}")));
                    }
                    d.add(
                        w.gens[0] as usize,
                        &AlgebraElement::from_word(coeff_dga.algebra(), w.slots[0].clone()).scale(s),
                    );
                }
                duals.push(d);
            }
            let t = tuple(&dga, &augs, duals.len() + 1)?;
            let value = mu_eps_case1(&dga, &t, &duals)?;
            Ok(Outcome::ok(format!("{}\n", if value.is_zero() { "0".to_string() } else { value.to_string() })))
        }
        Case::II => {
            let x = parse(inputs)?;
            let n = x.arity().ok_or_else(|| usage("Case II input must have a single arity"))?;
            let t = tuple(&dga, &augs, n + 1)?;
            let (value, parts) = explain_case2(&dga, &t, &x)?;
            if parts.iter().all(|p| p.pairings.is_empty()) {
                return Ok(Outcome::ok(format!(
                    "{}\n",
                    if value.is_zero() { "0".to_string() } else { value.to_string() }
                )));
            }
            let lhs: Vec<String> = parts
                .iter()
                .map(|p| {
                    let mut factors: Vec<String> = p.pairings.iter().map(|(a, b)| format!("t({a},{b})")).collect();
                    factors.push(parenthesize(&p.base, p.base.terms().count()));
                    factors.join("*")
                })
                .collect();
            let value = if value.is_zero() { "0".to_string() } else { value.to_string() };
            Ok(Outcome::ok(format!("{} = {value}\n", lhs.join(" + "))))
        }
    }
}

fn print_complex(cx: &ChainComplex) -> String {
    let mut out = format!("Case {} complex of dimension {}\n", cx.case(), cx.dimension());
    let ring = cx.ring();
    for j in 0..cx.dimension() {
        let mut unit = vec![ring.zero(); cx.dimension()];
        unit[j] = ring.one();
        let image = cx.apply(&unit);
        let image = if image.iter().all(|s| s.is_zero()) { "0".to_string() } else { cx.fmt_vector(&image) };
        out.push_str(&format!("deg {}: mu1({}) = {}\n", cx.degree(j), cx.label(j), image));
    }
    out
}

#[derive(Serialize)]
struct HomologyJson {
    case: String,
    total: usize,
    groups: Vec<GroupJson>,
}

#[derive(Serialize)]
struct GroupJson {
    degree: i64,
    dimension: usize,
    representatives: Vec<String>,
}

fn homology_cmd(input: &Input, case: Case, json: bool) -> Result<Outcome> {
    let (dga, augs) = load(input)?;
    let t = tuple(&dga, &augs, 2)?;
    let cx = bilinearized_complex(&dga, &t[0], &t[1], case)?;
    let h = homology(&cx)?;
    let groups: Vec<GroupJson> = h
        .groups
        .iter()
        .map(|g| GroupJson {
            degree: g.degree,
            dimension: g.dimension,
            representatives: g.representatives.iter().map(|r| cx.fmt_vector(r)).collect(),
        })
        .collect();
    if json {
        let doc = HomologyJson { case: case.to_string(), total: h.total_dimension(), groups };
        return Ok(Outcome::ok(format!("{}\n", serde_json::to_string_pretty(&doc)?)));
    }
    let mut out = String::from("deg\tdim\trepresentatives\n");
    for g in &groups {
        writeln!(out, "{}\t{}\t{}", g.degree, g.dimension, g.representatives.join(", "))?;
    }
    writeln!(out, "total\t{}", h.total_dimension())?;
    Ok(Outcome::ok(out))
}

fn product(input: &Input, case: Case, perturb: Option<usize>, seed: u64) -> Result<Outcome> {
    let (dga, augs) = load(input)?;
    let t = tuple(&dga, &augs, 3)?;
    let p = product_on_homology(&dga, &t[0], &t[1], &t[2], case)?;
    let reps = |(cx, h): &(ChainComplex, ncdga::homology::HomologyResult)| -> Vec<String> {
        h.representatives().map(|r| format!("[{}]", cx.fmt_vector(r))).collect()
    };
    let (left, right, outs) = (reps(&p.left), reps(&p.right), reps(&p.output));
    let mut out = String::new();
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            let terms: Vec<(String, &ncdga::Scalar)> =
                p.values[i][j].iter().zip(&outs).filter(|(s, _)| !s.is_zero()).map(|(s, o)| (o.clone(), s)).collect();
            if terms.is_empty() {
                continue;
            }
            let sum: Vec<String> =
                terms.iter().map(|(o, s)| if s.is_one() { o.clone() } else { format!("{s}*{o}") }).collect();
            writeln!(out, "mu2({a}, {b}) = {}", sum.join(" + "))?;
        }
    }
    if out.is_empty() {
        out.push_str("product vanishes on homology\n");
    }
    let mut passed = true;
    if let Some(trials) = perturb {
        let r = check_product_perturbation(&dga, &t[0], &t[1], &t[2], case, trials, seed)?;
        passed = r.is_ok();
        writeln!(out, "{r}")?;
    }
    Ok(Outcome { text: out, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(std::iter::once("ncdga").chain(args.iter().copied()))
            .map_err(|e| anyhow::anyhow!(e.to_string()))?;
        run(cli)
    }

    #[test]
    fn builtin_toy_checks() {
        let out = run_args(&["check", "builtin:toy"]).unwrap();
        assert!(out.passed);
        assert!(out.text.starts_with("d^2 = 0: OK"));
    }

    #[test]
    fn unknown_builtin_is_a_usage_error() {
        let e = run_args(&["check", "builtin:nope"]).err().unwrap();
        assert!(e.downcast_ref::<UsageError>().is_some());
    }
}
