//! Built-in example DGAs and augmentations.

use crate::algebra::AlgebraMorphism;
use crate::augmentation::Augmentation;
use crate::dga::{Automorphism, SemifreeDga};
use crate::dsl::{parse_augmentation, parse_dga, parse_element};

/// The five-generator toy DGA over `Z2<g1, g2>`.
pub const TOY: &str = "\
# five generators over Z2<g1, g2>
ring Z2
algebra free g1 g2 hermitian
gen c1 deg 2 action 3
gen c2 deg 1 action 2
gen c3 deg 1 action 2
gen c4 deg 0 action 1
gen c5 deg 0 action 1
d c1 = c2*g1*c4 + c3
d c2 = c5*g2
d c3 = c5*g2*g1*c4
";

/// `∂a = xy − 1` over the scalars.
pub const XY: &str = "\
ring Z2
algebra free
gen a deg 1
gen x deg 0
gen y deg 0
d a = x*y - 1
";

/// Purely quadratic differentials over `Q`, so the product on linearized
/// homology is visible.
pub const QUADRATIC: &str = "\
ring Q
algebra free
gen a deg 1
gen b deg 1
gen x deg 0
gen y deg 0
gen z deg 0
d a = x*y
d b = y*z - 2*z*y
";

/// A trivial DGA over `Q<g1, g2>` with two stabilizing pairs, one of
/// them odd, and generators in degrees `-1..=3`.
pub const STABILIZED: &str = "\
ring Q
algebra free g1 g2
gen a deg 3
gen b deg 2
gen c deg 1
gen x deg 0
gen y deg 0
gen u deg -1
gen e deg 2
gen f deg 1
gen s deg 1
gen t deg 0
d e = f
d s = t
";

/// Triangular images of the generators of [`STABILIZED`], with constants.
const CONJUGATION: [&str; 10] = [
    "a + b*f - f*b + c*e + e*c + 1/2*f*f*f + u*e*e",
    "b + c*f + 3*f*c + e*x + f*s*g2 + u*e*f",
    "c + x*f - f*y + s*g1 + u*e",
    "x + 2*y*y + 1 + t*g2",
    "y + g1",
    "u",
    "e",
    "f",
    "s",
    "t",
];

fn parsed(text: &str) -> SemifreeDga {
    parse_dga(text).expect("built-in text parses").dga
}

pub fn toy() -> SemifreeDga {
    parsed(TOY)
}

/// The toy DGA over the group ring `Z2[F2]`.
pub fn toy_group() -> SemifreeDga {
    parsed(&TOY.replace("algebra free g1 g2 hermitian", "algebra group free 2"))
}

/// The toy DGA over `Q<g1, g2>`, with the sign of `∂c3` chosen so `∂² = 0`.
pub fn toy_rational() -> SemifreeDga {
    parsed(&TOY.replace("ring Z2", "ring Q").replace("d c3 = c5", "d c3 = -c5"))
}

/// The toy DGA with `g1, g2 ↦ 1`, over `Z2`.
pub fn toy_specialized() -> SemifreeDga {
    let t = toy();
    let f = AlgebraMorphism::from_images(
        t.algebra(),
        &crate::Algebra::scalars(crate::Ring::Z2),
        vec![crate::AlgebraElement::one(&crate::Algebra::scalars(crate::Ring::Z2)); 2],
    )
    .expect("letters may go anywhere");
    t.change_coefficients(&f).expect("coefficient change")
}

/// The `∂a = xy − 1` DGA with augmentations `x, y ↦ P, P⁻¹` and `x, y ↦ 1`
/// into `M2(Z2)`.
pub fn xy() -> (SemifreeDga, Vec<Augmentation>) {
    let dga = parsed(XY);
    let augs = [
        "target matrix 2 over Z2\nx = [[1,1],[1,0]]\ny = [[0,1],[1,1]]",
        "target matrix 2 over Z2\nx = [[1,0],[0,1]]\ny = [[1,0],[0,1]]",
    ]
    .iter()
    .map(|t| parse_augmentation(t, &dga).expect("built-in augmentation"))
    .collect();
    (dga, augs)
}

/// The toy DGA with augmentations into `M2(Z2)` along `g1 ↦ E12 + E21`,
/// `g2 ↦ 1`, sending `c4` to `0`, to a permutation matrix and to a
/// unipotent matrix.
pub fn toy_matrix() -> (SemifreeDga, Vec<Augmentation>) {
    let dga = toy();
    let head = "target matrix 2 over Z2\nmap g1 = [[0,1],[1,0]]\nmap g2 = [[1,0],[0,1]]\n";
    let augs = ["", "c4 = [[0,1],[1,0]]", "c4 = [[1,1],[0,1]]"]
        .iter()
        .map(|v| parse_augmentation(&format!("{head}{v}"), &dga).expect("built-in augmentation"))
        .collect();
    (dga, augs)
}

/// [`QUADRATIC`] with the trivial augmentation, `z ↦ 1` and `x ↦ 3`.
pub fn quadratic() -> (SemifreeDga, Vec<Augmentation>) {
    let dga = parsed(QUADRATIC);
    let augs =
        ["", "z = 1", "x = 3"].iter().map(|t| parse_augmentation(t, &dga).expect("built-in augmentation")).collect();
    (dga, augs)
}

/// [`STABILIZED`] conjugated by a triangular automorphism with constant
/// terms. Its augmentations are `Π₀ ∘ φ` and `ε ∘ φ` for
/// `ε(x) = g2, ε(y) = −1`.
pub fn conjugated_rational() -> (SemifreeDga, Vec<Augmentation>) {
    conjugated(STABILIZED)
}

/// The same construction over the group ring `Q[F2]`, for Case II.
pub fn conjugated_rational_group() -> (SemifreeDga, Vec<Augmentation>) {
    conjugated(&STABILIZED.replace("algebra free g1 g2", "algebra group free 2"))
}

/// [`conjugated_rational`] with its augmentations pushed along
/// `g1, g2 ↦ 1` into the scalars `Q`.
pub fn conjugated_rational_scalar() -> (SemifreeDga, Vec<Augmentation>) {
    let (dga, augs) = conjugated_rational();
    let q = crate::Algebra::scalars(crate::Ring::Q);
    let f = AlgebraMorphism::from_images(dga.algebra(), &q, vec![crate::AlgebraElement::one(&q); 2])
        .expect("letters may go anywhere");
    let augs = augs
        .iter()
        .map(|e| {
            let values = e.values().iter().map(|v| f.apply(v)).collect();
            Augmentation::new(&dga, f.clone(), values).expect("pushed augmentation")
        })
        .collect();
    (dga, augs)
}

fn conjugated(text: &str) -> (SemifreeDga, Vec<Augmentation>) {
    let base = parsed(text);
    let images = CONJUGATION.iter().map(|t| parse_element(&base, t, &[]).expect("built-in image")).collect();
    let phi = Automorphism::new(&base, images).expect("triangular");
    let dga = base.conjugate(&phi).expect("conjugation");
    let eps = parse_augmentation("x = g2\ny = -1", &base).expect("built-in augmentation");
    let augs = vec![Augmentation::from_offsets(&base, &phi).expect("offsets"), eps.compose(&phi).expect("composition")];
    (dga, augs)
}

/// A named DGA with augmentations, for corpus-wide checks.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub dga: SemifreeDga,
    pub augmentations: Vec<Augmentation>,
}

pub fn corpus() -> Vec<Example> {
    let (xy, xy_augs) = xy();
    let (q, q_augs) = conjugated_rational();
    let (qg, qg_augs) = conjugated_rational_group();
    let (tm, tm_augs) = toy_matrix();
    let (qs, qs_augs) = conjugated_rational_scalar();
    let (quad, quad_augs) = quadratic();
    let with_trivial = |name, dga: SemifreeDga| Example { name, augmentations: vec![Augmentation::trivial(&dga)], dga };
    vec![
        with_trivial("toy", toy()),
        with_trivial("toy-group", toy_group()),
        with_trivial("toy-rational", toy_rational()),
        with_trivial("toy-specialized", toy_specialized()),
        Example { name: "toy-matrix", dga: tm, augmentations: tm_augs },
        Example { name: "xy", dga: xy, augmentations: xy_augs },
        Example { name: "quadratic", dga: quad, augmentations: quad_augs },
        Example { name: "conjugated-rational", dga: q, augmentations: q_augs },
        Example { name: "conjugated-rational-group", dga: qg, augmentations: qg_augs },
        Example { name: "conjugated-rational-scalar", dga: qs, augmentations: qs_augs },
    ]
}
