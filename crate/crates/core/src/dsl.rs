//! The description language for DGAs and augmentations.
//!
//! ```text
//! ring Z2
//! algebra free g1 g2 hermitian
//! grading mod 0
//! gen c1 deg 2 action 3
//! gen c2 deg 1 action 2
//! d c1 = c2*g1*c4 + c3
//! ```
//!
//! Statements end at a newline or `;`, and `#` starts a comment.
//! Augmentation files hold an optional `target <algebra> over <ring>` line,
//! `map <letter> = <expr>` lines for the coefficient morphism and
//! `<gen> = <expr>` lines for the values.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{Algebra, AlgebraElement, AlgebraKind, AlgebraMorphism};
use crate::augmentation::Augmentation;
use crate::bimodule::{Generator, GeneratorBasis, TensorElement};
use crate::dga::SemifreeDga;
use crate::error::{ParseError, ParseErrorKind};
use crate::scalar::{Ring, Scalar};

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { kind, line, column, message: message.into() }
}

/// Splits the text into statements of tokens.
fn tokenize(text: &str) -> PResult<Vec<Vec<Token>>> {
    let mut statements = Vec::new();
    let mut cur = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c == ';' {
                if !cur.is_empty() {
                    statements.push(std::mem::take(&mut cur));
                }
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                cur.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line, col });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                cur.push(Token { tok: Tok::Num(s.parse().expect("digits")), line, col });
            } else if "+-*/^()[],=".contains(c) {
                cur.push(Token { tok: Tok::Sym(c), line, col });
                i += 1;
            } else {
                return Err(err(ParseErrorKind::SyntaxError, line, col, format!("unexpected character '{c}'")));
            }
        }
        if !cur.is_empty() {
            statements.push(std::mem::take(&mut cur));
        }
    }
    Ok(statements)
}

/// A cursor over one statement.
struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token]) -> Self {
        Cursor { toks, pos: 0 }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// Position of the next token, or just past the last one.
    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.col),
            None => {
                let t = self.toks.last().expect("statements are nonempty");
                (t.line, t.col + tok_width(&t.tok))
            }
        }
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        err(ParseErrorKind::SyntaxError, l, c, message)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{c}'")))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{kw}'")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<&'a Token> {
        match self.peek() {
            Some(t @ Token { tok: Tok::Ident(_), .. }) => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.syntax(format!("expected {what}"))),
        }
    }

    fn integer(&mut self, what: &str) -> PResult<i64> {
        let neg = self.eat_sym('-');
        match self.peek() {
            Some(Token { tok: Tok::Num(n), .. }) => {
                let v: i64 = n.try_into().map_err(|_| self.syntax(format!("{what} out of range")))?;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.syntax(format!("expected {what}"))),
        }
    }

    fn rational(&mut self, what: &str) -> PResult<BigRational> {
        let neg = self.eat_sym('-');
        let Some(Token { tok: Tok::Num(n), .. }) = self.peek() else {
            return Err(self.syntax(format!("expected {what}")));
        };
        self.pos += 1;
        let mut q = BigRational::from_integer(n.clone());
        if self.eat_sym('/') {
            let Some(Token { tok: Tok::Num(d), .. }) = self.peek() else {
                return Err(self.syntax("expected denominator"));
            };
            if d == &BigInt::from(0) {
                return Err(self.syntax("zero denominator"));
            }
            self.pos += 1;
            q = BigRational::new(n.clone(), d.clone());
        }
        Ok(if neg { -q } else { q })
    }

    fn finish(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.syntax("unexpected trailing input"))
        }
    }
}

fn tok_width(t: &Tok) -> usize {
    match t {
        Tok::Ident(s) => s.len(),
        Tok::Num(n) => n.to_string().len(),
        Tok::Sym(_) => 1,
    }
}

fn ident_text(t: &Token) -> &str {
    match &t.tok {
        Tok::Ident(s) => s,
        _ => unreachable!("checked by Cursor::ident"),
    }
}

/// `free [symbols] | group free k | matrix n | split n <algebra>`, then
/// optionally `over R` and `hermitian`.
fn parse_algebra(cur: &mut Cursor, ring: Option<&Ring>) -> PResult<Arc<Algebra>> {
    let (ring, shape, herm) = parse_algebra_inner(cur, ring)?;
    let ring = ring.ok_or_else(|| cur.syntax("missing 'over <ring>' or an earlier 'ring' line"))?;
    Ok(build_algebra(&shape, &ring, herm))
}

enum AlgebraShape {
    Free(Vec<String>),
    Group(usize),
    Matrix(usize),
    Split(usize, Box<AlgebraShape>, bool),
}

fn build_algebra(shape: &AlgebraShape, ring: &Ring, herm: bool) -> Arc<Algebra> {
    match shape {
        AlgebraShape::Free(s) => Algebra::free(ring.clone(), s.clone(), herm),
        AlgebraShape::Group(k) => Algebra::free_group(ring.clone(), *k),
        AlgebraShape::Matrix(n) => Algebra::matrix(ring.clone(), *n),
        AlgebraShape::Split(n, base, bh) => Algebra::split(&build_algebra(base, ring, *bh || herm), *n),
    }
}

fn parse_algebra_inner(cur: &mut Cursor, ring: Option<&Ring>) -> PResult<(Option<Ring>, AlgebraShape, bool)> {
    let shape = parse_shape(cur)?;
    let mut herm = cur.eat_keyword("hermitian");
    let mut ring = ring.cloned();
    if cur.eat_keyword("over") {
        let t = cur.ident("a ring")?;
        let r = Ring::parse(ident_text(t)).ok_or_else(|| {
            err(ParseErrorKind::SyntaxError, t.line, t.col, format!("unknown ring {}", ident_text(t)))
        })?;
        if ring.as_ref().is_some_and(|x| *x != r) {
            return Err(err(ParseErrorKind::TargetMismatch, t.line, t.col, "ring differs from the declared ring"));
        }
        ring = Some(r);
        herm |= cur.eat_keyword("hermitian");
    }
    Ok((ring, shape, herm))
}

fn parse_shape(cur: &mut Cursor) -> PResult<AlgebraShape> {
    let t = cur.ident("an algebra kind")?;
    match ident_text(t) {
        "free" => {
            let mut symbols: Vec<String> = Vec::new();
            while let Some(Token { tok: Tok::Ident(s), line, col }) = cur.peek() {
                if s == "hermitian" || s == "over" {
                    break;
                }
                if symbols.contains(s) {
                    return Err(err(ParseErrorKind::SyntaxError, *line, *col, format!("symbol {s} declared twice")));
                }
                symbols.push(s.clone());
                cur.pos += 1;
            }
            Ok(AlgebraShape::Free(symbols))
        }
        "group" => {
            cur.expect_keyword("free")?;
            let k = cur.integer("a rank")?;
            Ok(AlgebraShape::Group(usize::try_from(k).map_err(|_| cur.syntax("negative rank"))?))
        }
        "matrix" => {
            let n = cur.integer("a size")?;
            if n < 1 {
                return Err(cur.syntax("matrix size must be positive"));
            }
            Ok(AlgebraShape::Matrix(n as usize))
        }
        "split" => {
            let n = cur.integer("a number of copies")?;
            if n < 1 {
                return Err(cur.syntax("number of copies must be positive"));
            }
            let base = parse_shape(cur)?;
            let herm = cur.eat_keyword("hermitian");
            Ok(AlgebraShape::Split(n as usize, Box::new(base), herm))
        }
        other => Err(err(ParseErrorKind::SyntaxError, t.line, t.col, format!("unknown algebra kind {other}"))),
    }
}

/// Resolves a coefficient symbol of `alg`.
fn algebra_symbol(alg: &Arc<Algebra>, name: &str) -> Option<AlgebraElement> {
    match alg.kind() {
        AlgebraKind::Free { symbols } => symbols.iter().position(|s| s == name).map(|i| AlgebraElement::letter(alg, i)),
        AlgebraKind::FreeGroup { rank } => {
            let i: usize = name.strip_prefix('g')?.parse().ok()?;
            (1..=*rank).contains(&i).then(|| AlgebraElement::letter(alg, i - 1))
        }
        AlgebraKind::Matrix { size } => {
            let rest = name.strip_prefix('E')?;
            let (i, j): (usize, usize) = match rest.split_once('_') {
                Some((a, b)) => (a.parse().ok()?, b.parse().ok()?),
                None if *size <= 9 && rest.len() == 2 => (rest[..1].parse().ok()?, rest[1..].parse().ok()?),
                None => return None,
            };
            ((1..=*size).contains(&i) && (1..=*size).contains(&j))
                .then(|| AlgebraElement::letter(alg, (i - 1) * size + j - 1))
        }
        AlgebraKind::Split { base, copies } => {
            if let Some(i) = name.strip_prefix('e').and_then(|r| r.parse::<usize>().ok()) {
                if (1..=*copies).contains(&i) {
                    let one = AlgebraElement::one(base);
                    return Some(AlgebraElement::from_terms(
                        alg,
                        one.terms().map(|(w, s)| (crate::algebra::split_word(i as i32 - 1, w), s.clone())),
                    ));
                }
            }
            let x = algebra_symbol(base, name)?;
            Some(AlgebraMorphism::diagonal(base, *copies).apply(&x))
        }
    }
}

/// Evaluates expressions in `T(A, generators)`.
struct Expr<'a> {
    alg: &'a Arc<Algebra>,
    basis: &'a Arc<GeneratorBasis>,
    bindings: &'a [(String, AlgebraElement)],
}

impl Expr<'_> {
    fn scalar(&self, q: &BigRational, cur: &Cursor) -> PResult<Scalar> {
        self.alg
            .ring()
            .from_fraction(q.numer(), q.denom())
            .ok_or_else(|| cur.syntax(format!("{q} is not a scalar of {}", self.alg.ring())))
    }

    fn constant(&self, a: &AlgebraElement) -> TensorElement {
        TensorElement::constant(self.basis, a)
    }

    /// Parses a full expression, returning each top-level term with the
    /// position where it starts.
    fn terms(&self, cur: &mut Cursor) -> PResult<Vec<(TensorElement, (usize, usize))>> {
        let mut out = Vec::new();
        let mut neg = cur.eat_sym('-');
        loop {
            let at = cur.here();
            let mut t = self.term(cur)?;
            if neg {
                t = t.neg();
            }
            out.push((t, at));
            if cur.eat_sym('+') {
                neg = false;
            } else if cur.eat_sym('-') {
                neg = true;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn expr(&self, cur: &mut Cursor) -> PResult<TensorElement> {
        let mut total = TensorElement::zero(self.alg, self.basis);
        for (t, _) in self.terms(cur)? {
            total = total.checked_add(&t).expect("same space");
        }
        Ok(total)
    }

    fn term(&self, cur: &mut Cursor) -> PResult<TensorElement> {
        let mut acc = self.factor(cur)?;
        while cur.eat_sym('*') {
            let f = self.factor(cur)?;
            acc = acc.checked_mul(&f).expect("same space");
        }
        Ok(acc)
    }

    fn factor(&self, cur: &mut Cursor) -> PResult<TensorElement> {
        let Some(t) = cur.peek() else {
            return Err(cur.syntax("expected a factor"));
        };
        match &t.tok {
            Tok::Num(_) => {
                let q = cur.rational("a number")?;
                let s = self.scalar(&q, cur)?;
                Ok(self.constant(&AlgebraElement::scalar(self.alg, s)))
            }
            Tok::Sym('-') => {
                cur.pos += 1;
                Ok(self.factor(cur)?.neg())
            }
            Tok::Sym('(') => {
                cur.pos += 1;
                let e = self.expr(cur)?;
                cur.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('[') => Ok(self.constant(&self.matrix_literal(cur)?)),
            Tok::Ident(name) => {
                cur.pos += 1;
                let value = if let Some((_, a)) = self.bindings.iter().find(|(n, _)| n == name) {
                    Some(a.clone())
                } else if let Some(g) = self.basis.index_of(name) {
                    if matches!(cur.peek(), Some(Token { tok: Tok::Sym('^'), .. })) {
                        return Err(cur.syntax("generators cannot be inverted"));
                    }
                    return Ok(TensorElement::generator(self.alg, self.basis, g));
                } else {
                    algebra_symbol(self.alg, name)
                };
                let Some(mut a) = value else {
                    return Err(err(ParseErrorKind::UnknownGenerator, t.line, t.col, format!("unknown symbol {name}")));
                };
                if cur.eat_sym('^') {
                    let e = cur.integer("an exponent")?;
                    if e != -1 {
                        return Err(cur.syntax("only ^-1 is supported"));
                    }
                    a = a.inverse().ok_or_else(|| {
                        err(ParseErrorKind::SyntaxError, t.line, t.col, format!("{name} is not invertible"))
                    })?;
                }
                Ok(self.constant(&a))
            }
            Tok::Sym(c) => Err(cur.syntax(format!("unexpected '{c}'"))),
        }
    }

    fn matrix_literal(&self, cur: &mut Cursor) -> PResult<AlgebraElement> {
        let (line, col) = cur.here();
        let AlgebraKind::Matrix { size } = self.alg.kind() else {
            return Err(err(ParseErrorKind::SyntaxError, line, col, "matrix literal outside a matrix algebra"));
        };
        cur.expect_sym('[')?;
        let mut rows = Vec::new();
        loop {
            cur.expect_sym('[')?;
            let mut row = Vec::new();
            loop {
                let q = cur.rational("a matrix entry")?;
                row.push(self.scalar(&q, cur)?);
                if !cur.eat_sym(',') {
                    break;
                }
            }
            cur.expect_sym(']')?;
            rows.push(row);
            if !cur.eat_sym(',') {
                break;
            }
        }
        cur.expect_sym(']')?;
        if rows.len() != *size || rows.iter().any(|r| r.len() != *size) {
            return Err(err(ParseErrorKind::SyntaxError, line, col, format!("expected a {size}x{size} matrix")));
        }
        let mut out = AlgebraElement::zero(self.alg);
        for (i, row) in rows.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                out.add_term(self.alg.letter_word(i * size + j), s);
            }
        }
        Ok(out)
    }
}

fn to_algebra(x: &TensorElement, alg: &Arc<Algebra>) -> Option<AlgebraElement> {
    if x.terms().any(|(w, _)| w.arity() > 0) {
        return None;
    }
    Some(AlgebraElement::from_terms(alg, x.terms().map(|(w, s)| (w.slots[0].clone(), s.clone()))))
}

/// A parsed DGA file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgaDocument {
    pub dga: SemifreeDga,
    /// Line of each generator's declaration.
    pub lines: Vec<usize>,
}

impl DgaDocument {
    pub fn print(&self) -> String {
        print_dga(&self.dga)
    }
}

pub fn parse_dga(text: &str) -> PResult<DgaDocument> {
    let statements = tokenize(text)?;
    let mut ring: Option<Ring> = None;
    let mut algebra: Option<Arc<Algebra>> = None;
    let mut modulus = 0u32;
    let mut gens: Vec<Generator> = Vec::new();
    let mut lines = Vec::new();
    let mut diffs: Vec<&[Token]> = Vec::new();
    for st in &statements {
        let mut cur = Cursor::new(st);
        let head = cur.ident("a statement")?;
        match ident_text(head) {
            "ring" => {
                if ring.is_some() {
                    return Err(err(ParseErrorKind::SyntaxError, head.line, head.col, "ring declared twice"));
                }
                let t = cur.ident("a ring")?;
                ring = Some(Ring::parse(ident_text(t)).ok_or_else(|| {
                    err(ParseErrorKind::SyntaxError, t.line, t.col, format!("unknown ring {}", ident_text(t)))
                })?);
                cur.finish()?;
            }
            "algebra" => {
                if algebra.is_some() {
                    return Err(err(ParseErrorKind::SyntaxError, head.line, head.col, "algebra declared twice"));
                }
                let a = parse_algebra(&mut cur, ring.as_ref())?;
                ring = Some(a.ring().clone());
                algebra = Some(a);
                cur.finish()?;
            }
            "grading" => {
                cur.expect_keyword("mod")?;
                let m = cur.integer("a modulus")?;
                if m < 0 || m % 2 == 1 {
                    return Err(cur.syntax("grading modulus must be even and nonnegative"));
                }
                modulus = m as u32;
                cur.finish()?;
            }
            "gen" => {
                let Some(alg) = &algebra else {
                    return Err(err(ParseErrorKind::SyntaxError, head.line, head.col, "gen before algebra"));
                };
                let name_tok = cur.ident("a generator name")?;
                let name = ident_text(name_tok);
                if gens.iter().any(|g| g.name == name) || algebra_symbol(alg, name).is_some() || is_keyword(name) {
                    return Err(err(
                        ParseErrorKind::SyntaxError,
                        name_tok.line,
                        name_tok.col,
                        format!("name {name} is already taken"),
                    ));
                }
                cur.expect_keyword("deg")?;
                let mut g = Generator::new(name, cur.integer("a degree")?);
                while !cur.at_end() {
                    if cur.eat_keyword("action") {
                        g = g.with_action(cur.rational("an action")?);
                    } else if cur.eat_keyword("link") {
                        let b = cur.integer("a component")?;
                        let e = cur.integer("a component")?;
                        if b < 1 || e < 1 {
                            return Err(cur.syntax("components are numbered from 1"));
                        }
                        g = g.with_link(b as usize, e as usize);
                    } else {
                        return Err(cur.syntax("expected 'action' or 'link'"));
                    }
                }
                gens.push(g);
                lines.push(head.line);
            }
            "d" => diffs.push(st),
            other => {
                return Err(err(ParseErrorKind::SyntaxError, head.line, head.col, format!("unknown statement {other}")))
            }
        }
    }
    let (first_line, first_col) = statements.first().map(|s| (s[0].line, s[0].col)).unwrap_or((1, 1));
    let Some(alg) = algebra else {
        return Err(err(ParseErrorKind::SyntaxError, first_line, first_col, "missing algebra declaration"));
    };
    let basis = GeneratorBasis::new(gens, modulus)
        .map_err(|e| err(ParseErrorKind::SyntaxError, first_line, first_col, e.to_string()))?;
    let mut differential = vec![TensorElement::zero(&alg, &basis); basis.len()];
    let mut seen = vec![false; basis.len()];
    let ex = Expr { alg: &alg, basis: &basis, bindings: &[] };
    for st in diffs {
        let mut cur = Cursor::new(st);
        cur.pos = 1;
        let t = cur.ident("a generator")?;
        let name = ident_text(t);
        let Some(c) = basis.index_of(name) else {
            return Err(err(ParseErrorKind::UnknownGenerator, t.line, t.col, format!("unknown generator {name}")));
        };
        if seen[c] {
            return Err(err(ParseErrorKind::SyntaxError, t.line, t.col, format!("differential of {name} given twice")));
        }
        seen[c] = true;
        cur.expect_sym('=')?;
        let mut total = TensorElement::zero(&alg, &basis);
        for (term, (line, col)) in ex.terms(&mut cur)? {
            check_term(&basis, c, &term, line, col)?;
            total = total.checked_add(&term).expect("same space");
        }
        cur.finish()?;
        differential[c] = total;
    }
    let dga = SemifreeDga::new(&alg, &basis, differential)
        .map_err(|e| err(ParseErrorKind::SyntaxError, first_line, first_col, e.to_string()))?;
    Ok(DgaDocument { dga, lines })
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "ring"
            | "algebra"
            | "grading"
            | "gen"
            | "d"
            | "deg"
            | "action"
            | "link"
            | "hermitian"
            | "over"
            | "target"
            | "map"
    )
}

/// Degree and action conditions for one term of `∂c`.
fn check_term(basis: &GeneratorBasis, c: usize, term: &TensorElement, line: usize, col: usize) -> PResult<()> {
    let want = basis.reduce(basis.degree(c) - 1);
    for (w, _) in term.terms() {
        let deg = basis.reduce(w.gens.iter().map(|&g| basis.degree(g as usize)).sum());
        if deg != want {
            return Err(err(
                ParseErrorKind::DegreeMismatch,
                line,
                col,
                format!("term of degree {deg} in d {}, expected degree {want}", basis.name(c)),
            ));
        }
        if let Some(ac) = &basis.get(c).action {
            for &g in &w.gens {
                if let Some(ag) = &basis.get(g as usize).action {
                    if ag >= ac {
                        return Err(err(
                            ParseErrorKind::ActionViolation,
                            line,
                            col,
                            format!(
                                "{} has action {ag}, not below the action {ac} of {}",
                                basis.name(g as usize),
                                basis.name(c)
                            ),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn algebra_text(alg: &Algebra) -> String {
    let herm = match alg.kind() {
        AlgebraKind::Free { symbols } if alg.is_hermitian() && !symbols.is_empty() => " hermitian",
        _ => "",
    };
    format!("{}{herm}", alg.declaration_body())
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The canonical text of a DGA.
pub fn print_dga(dga: &SemifreeDga) -> String {
    let alg = dga.algebra();
    let basis = dga.basis();
    let mut out = format!("ring {}\nalgebra {}\n", alg.ring(), algebra_text(alg));
    if basis.modulus() != 0 {
        out.push_str(&format!("grading mod {}\n", basis.modulus()));
    }
    for g in basis.generators() {
        out.push_str(&format!("gen {} deg {}", g.name, g.degree));
        if let Some(a) = &g.action {
            out.push_str(&format!(" action {}", fmt_rational(a)));
        }
        if let Some((b, e)) = g.link {
            out.push_str(&format!(" link {b} {e}"));
        }
        out.push('\n');
    }
    for c in 0..dga.len() {
        let dc = dga.differential_of(c);
        if !dc.is_zero() {
            out.push_str(&format!("d {} = {dc}\n", dga.name(c)));
        }
    }
    out
}

/// Parses an expression over the DGA, with extra named coefficients.
pub fn parse_element(dga: &SemifreeDga, text: &str, bindings: &[(String, AlgebraElement)]) -> PResult<TensorElement> {
    let statements = tokenize(text)?;
    if statements.len() != 1 {
        return Err(err(ParseErrorKind::SyntaxError, 1, 1, "expected a single expression"));
    }
    let mut cur = Cursor::new(&statements[0]);
    let e = Expr { alg: dga.algebra(), basis: dga.basis(), bindings }.expr(&mut cur)?;
    cur.finish()?;
    Ok(e)
}

/// Parses an element of a coefficient algebra.
pub fn parse_algebra_element(alg: &Arc<Algebra>, text: &str) -> PResult<AlgebraElement> {
    let basis = GeneratorBasis::new(Vec::new(), 0).expect("empty basis");
    let statements = tokenize(text)?;
    if statements.len() != 1 {
        return Err(err(ParseErrorKind::SyntaxError, 1, 1, "expected a single expression"));
    }
    let mut cur = Cursor::new(&statements[0]);
    let e = Expr { alg, basis: &basis, bindings: &[] }.expr(&mut cur)?;
    cur.finish()?;
    Ok(to_algebra(&e, alg).expect("no generators in an empty basis"))
}

/// Parses an algebra declaration such as `matrix 2 over Z2`.
pub fn parse_algebra_declaration(text: &str) -> PResult<Arc<Algebra>> {
    let statements = tokenize(text)?;
    if statements.len() != 1 {
        return Err(err(ParseErrorKind::SyntaxError, 1, 1, "expected one algebra declaration"));
    }
    let mut cur = Cursor::new(&statements[0]);
    let a = parse_algebra(&mut cur, None)?;
    cur.finish()?;
    Ok(a)
}

/// Parses an augmentation of `dga`. Without a `target` line the values lie
/// in the DGA's own algebra; unlisted generators go to zero.
pub fn parse_augmentation(text: &str, dga: &SemifreeDga) -> PResult<Augmentation> {
    let statements = tokenize(text)?;
    let source = dga.algebra();
    let mut target = source.clone();
    let mut maps: Vec<(usize, &[Token])> = Vec::new();
    let mut values: Vec<(usize, &[Token])> = Vec::new();
    let empty = GeneratorBasis::new(Vec::new(), 0).expect("empty basis");
    for (k, st) in statements.iter().enumerate() {
        let mut cur = Cursor::new(st);
        let head = cur.ident("a statement")?;
        match ident_text(head) {
            "target" => {
                if k != 0 {
                    return Err(err(ParseErrorKind::SyntaxError, head.line, head.col, "target must come first"));
                }
                let (ring, shape, herm) = parse_algebra_inner(&mut cur, Some(source.ring())).map_err(|mut e| {
                    if e.kind == ParseErrorKind::TargetMismatch {
                        e.message = format!("target ring differs from {}", source.ring());
                    }
                    e
                })?;
                cur.finish()?;
                target = build_algebra(&shape, ring.as_ref().unwrap_or(source.ring()), herm);
            }
            "map" => {
                let t = cur.ident("a letter")?;
                let idx = (0..source.letter_count().unwrap_or(0)).find(|&i| source.letter_name(i) == ident_text(t));
                let Some(i) = idx else {
                    return Err(err(
                        ParseErrorKind::TargetMismatch,
                        t.line,
                        t.col,
                        format!("{} is not a letter of {source}", ident_text(t)),
                    ));
                };
                if maps.iter().any(|(j, _)| *j == i) {
                    return Err(err(ParseErrorKind::SyntaxError, t.line, t.col, "letter mapped twice"));
                }
                cur.expect_sym('=')?;
                maps.push((i, &st[cur.pos..]));
            }
            name => {
                let Some(c) = dga.basis().index_of(name) else {
                    return Err(err(
                        ParseErrorKind::UnknownGenerator,
                        head.line,
                        head.col,
                        format!("unknown generator {name}"),
                    ));
                };
                if values.iter().any(|(j, _)| *j == c) {
                    return Err(err(ParseErrorKind::SyntaxError, head.line, head.col, "value given twice"));
                }
                cur.expect_sym('=')?;
                values.push((c, &st[cur.pos..]));
            }
        }
    }
    let eval = |toks: &[Token]| -> PResult<AlgebraElement> {
        if toks.is_empty() {
            let prev = &statements.iter().flatten().next().expect("nonempty");
            return Err(err(ParseErrorKind::SyntaxError, prev.line, prev.col, "missing expression"));
        }
        let mut cur = Cursor::new(toks);
        let e = Expr { alg: &target, basis: &empty, bindings: &[] }.expr(&mut cur)?;
        cur.finish()?;
        Ok(to_algebra(&e, &target).expect("no generators"))
    };
    let (line, col) = statements.first().map(|s| (s[0].line, s[0].col)).unwrap_or((1, 1));
    let mismatch = |e: crate::error::Error| err(ParseErrorKind::TargetMismatch, line, col, e.to_string());
    let f = if maps.is_empty() {
        match target.kind() {
            AlgebraKind::Split { base, copies } if base == source => AlgebraMorphism::diagonal(source, *copies),
            _ => AlgebraMorphism::canonical(source, &target).map_err(mismatch)?,
        }
    } else {
        let count = source.letter_count().unwrap_or(0);
        let mut images = vec![None; count];
        for (i, toks) in &maps {
            images[*i] = Some(eval(toks)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                x.ok_or_else(|| {
                    err(ParseErrorKind::TargetMismatch, line, col, format!("no image for {}", source.letter_name(i)))
                })
            })
            .collect::<PResult<Vec<_>>>()?;
        AlgebraMorphism::from_images(source, &target, images).map_err(mismatch)?
    };
    let mut vals = vec![AlgebraElement::zero(&target); dga.len()];
    for (c, toks) in &values {
        vals[*c] = eval(toks)?;
    }
    Augmentation::new(dga, f, vals).map_err(mismatch)
}

/// The canonical text of an augmentation.
pub fn print_augmentation(dga: &SemifreeDga, eps: &Augmentation) -> String {
    let mut out = String::new();
    let f = eps.coefficients();
    if !f.is_identity() {
        let t = f.target();
        out.push_str(&format!("target {} over {}\n", t.declaration_body(), t.ring()));
        if t.is_hermitian() && matches!(t.kind(), AlgebraKind::Free { symbols } if !symbols.is_empty()) {
            out.pop();
            out.push_str(" hermitian\n");
        }
    }
    if let Some(images) = f.letter_images() {
        for (i, x) in images.iter().enumerate() {
            out.push_str(&format!("map {} = {}\n", f.source().letter_name(i), fmt_value(x)));
        }
    }
    for c in 0..dga.len() {
        let v = eps.value(c);
        if !v.is_zero() {
            out.push_str(&format!("{} = {}\n", dga.name(c), fmt_value(v)));
        }
    }
    out
}

/// Matrix values print as literals; everything else uses the element's text.
fn fmt_value(x: &AlgebraElement) -> String {
    let AlgebraKind::Matrix { size } = x.algebra().kind() else {
        return x.to_string();
    };
    let rows: Vec<String> = (0..*size)
        .map(|i| {
            let entries: Vec<String> =
                (0..*size).map(|j| x.coefficient(&x.algebra().letter_word(i * size + j)).to_string()).collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}
