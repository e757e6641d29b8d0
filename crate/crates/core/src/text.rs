//! Textual syntax for base-algebra and conformal elements.
//!
//! The grammar accepts what `Display` prints, plus parentheses and named
//! definitions:
//!
//! ```text
//! expr  := ["-"] term (("+" | "-") term)*
//! term  := power (("*" | "/") power)*
//! power := atom ["^" integer]
//! atom  := integer | "x" ["@" block] | "1@" block | "e" row col ["@" block]
//!        | "d" | name | "(" expr ")"
//! ```
//!
//! `d` stands for ∂ and only makes sense in conformal position, where a
//! base element `b` means `b̃`. Names are looked up in a [`Scope`]; under
//! `Cend_n`, `L{k}` and `L{k}_{ij}` are predefined.

use crate::algebra::{AlgebraElement, Basis, Polynomial, Rational, Shape};
use crate::conformal::{ConformalAlgebra, ConformalElement, Construction};
use crate::constructions::cend_base;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

const MAX_NESTING: usize = 32;

/// Named definitions available to the parser.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    defs: BTreeMap<String, String>,
    cend: Option<u16>,
}

impl Scope {
    pub fn new() -> Self {
        Self::default()
    }

    /// Enables the `L{k}` / `L{k}_{ij}` names of `Cend_n`.
    pub fn for_algebra(c: &ConformalAlgebra) -> Self {
        let cend = match c.construction() {
            Construction::Cend(n) => Some(n),
            _ => None,
        };
        Self {
            defs: BTreeMap::new(),
            cend,
        }
    }

    /// Adds `name := expr`. Names must be identifiers that do not clash with
    /// the built-in atoms.
    pub fn define(&mut self, name: &str, expr: &str) -> Result<()> {
        if !is_identifier(name) || is_builtin(name) {
            return Err(Error::Validation(format!(
                "element name {name:?} is not a free identifier"
            )));
        }
        if self.cend.is_some() && name.starts_with('L') {
            return Err(Error::Validation(format!(
                "element name {name:?} clashes with the Cend generator names"
            )));
        }
        if self.defs.insert(name.to_string(), expr.to_string()).is_some() {
            return Err(Error::Validation(format!("element {name:?} defined twice")));
        }
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name) || self.cend_name(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    fn cend_name(&self, name: &str) -> bool {
        // Shape is irrelevant for recognizing the name.
        self.cend.is_some_and(|n| {
            let shape = Shape::new(vec![crate::algebra::Block {
                size: n,
                polynomial: true,
            }]);
            cend_base(n, &shape, name).is_some()
        })
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_builtin(s: &str) -> bool {
    s == "x" || s == "d" || matrix_unit(s).is_some()
}

fn matrix_unit(s: &str) -> Option<(u16, u16)> {
    let rest = s.strip_prefix('e')?;
    let digits: Vec<u16> = rest
        .chars()
        .map(|c| c.to_digit(10).map(|v| v as u16))
        .collect::<Option<_>>()?;
    match digits[..] {
        [i, j] => Some((i, j)),
        _ => None,
    }
}

/// Parses a base-algebra element of the given shape.
pub fn parse_algebra_element(shape: &Arc<Shape>, src: &str, scope: &Scope) -> Result<AlgebraElement> {
    let v = Parser::run(shape, src, scope, 0)?;
    match v {
        Value::Conformal(_) | Value::Partial(_) => Err(Error::Parse {
            offset: 0,
            message: "∂ is not allowed in a base-algebra element".into(),
        }),
        v => v.into_algebra(shape, 0),
    }
}

/// Parses an element of `c`; base elements are lifted as `b̃`. The result
/// is checked for membership.
pub fn parse_conformal_element(c: &ConformalAlgebra, src: &str, scope: &Scope) -> Result<ConformalElement> {
    let v = Parser::run(c.shape(), src, scope, 0)?;
    let e = v.into_conformal(c.shape())?;
    c.check_member(&e)?;
    Ok(e)
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Rational),
    Algebra(AlgebraElement),
    /// A polynomial in ∂ not yet attached to an element.
    Partial(Polynomial),
    Conformal(ConformalElement),
}

impl Value {
    fn into_algebra(self, shape: &Arc<Shape>, at: usize) -> Result<AlgebraElement> {
        match self {
            Value::Scalar(c) => Ok(AlgebraElement::one(shape).scale(&c)),
            Value::Algebra(a) => Ok(a),
            _ => Err(parse_err(at, "expected a base-algebra element")),
        }
    }

    fn into_conformal(self, shape: &Arc<Shape>) -> Result<ConformalElement> {
        let one = || ConformalElement::tilde(&AlgebraElement::one(shape));
        Ok(match self {
            Value::Scalar(c) => one().scale(&c),
            Value::Algebra(a) => ConformalElement::tilde(&a),
            Value::Partial(p) => one().mul_poly(&p),
            Value::Conformal(e) => e,
        })
    }

    fn is_conformal(&self) -> bool {
        matches!(self, Value::Partial(_) | Value::Conformal(_))
    }
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    shape: &'a Arc<Shape>,
    scope: &'a Scope,
    nesting: usize,
}

impl<'a> Parser<'a> {
    fn run(shape: &'a Arc<Shape>, src: &'a str, scope: &'a Scope, nesting: usize) -> Result<Value> {
        if nesting > MAX_NESTING {
            return Err(parse_err(0, "definitions nest too deeply (cyclic?)"));
        }
        let mut p = Parser {
            src,
            pos: 0,
            shape,
            scope,
            nesting,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos < src.len() {
            return Err(parse_err(p.pos, format!("unexpected {:?}", p.rest_char())));
        }
        Ok(v)
    }

    fn rest_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or(' ')
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.rest_char().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = if self.eat('-') {
            let at = self.pos;
            let t = self.term()?;
            self.negate(t, at)?
        } else {
            self.term()?
        };
        loop {
            let at = self.pos;
            if self.eat('+') {
                let t = self.term()?;
                acc = self.add(acc, t, at)?;
            } else if self.eat('-') {
                let t = self.term()?;
                let t = self.negate(t, at)?;
                acc = self.add(acc, t, at)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.power()?;
        loop {
            let at = self.pos;
            if self.eat('*') {
                let rhs = self.power()?;
                acc = self.mul(acc, rhs, at)?;
            } else if self.eat('/') {
                let rhs = self.power()?;
                let Value::Scalar(q) = rhs else {
                    return Err(parse_err(at, "can only divide by a number"));
                };
                if q.is_zero() {
                    return Err(parse_err(at, "division by zero"));
                }
                acc = self.mul(acc, Value::Scalar(q.recip()), at)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        let at = self.pos;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let k = self
            .integer()?
            .to_u32()
            .ok_or_else(|| parse_err(at, "exponent too large"))?;
        let mut acc = Value::Scalar(Rational::one());
        for _ in 0..k {
            acc = self.mul(acc, base.clone(), at)?;
        }
        // `x^2@1` as printed for size-one blocks of a direct sum.
        match self.block_suffix()? {
            Some(s) => self.mul(acc, Value::Algebra(self.block_diagonal(s, 0)), at),
            None => Ok(acc),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.src.len() - start);
        if len == 0 {
            return Err(parse_err(start, "expected an integer"));
        }
        self.pos += len;
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn block_suffix(&mut self) -> Result<Option<u16>> {
        if !self.src[self.pos..].starts_with('@') {
            return Ok(None);
        }
        self.pos += 1;
        let at = self.pos;
        let s = self
            .integer()?
            .to_u16()
            .filter(|&s| (s as usize) < self.shape.blocks().len())
            .ok_or_else(|| parse_err(at, "no such block"))?;
        Ok(Some(s))
    }

    fn atom(&mut self) -> Result<Value> {
        self.skip_ws();
        let at = self.pos;
        if self.eat('(') {
            let v = self.expr()?;
            if !self.eat(')') {
                return Err(parse_err(self.pos, "expected ')'"));
            }
            return Ok(v);
        }
        if self.src[at..].starts_with(|c: char| c.is_ascii_digit()) {
            let n = self.integer()?;
            if self.src[self.pos..].starts_with('@') {
                if !n.is_one() {
                    return Err(parse_err(at, "only 1 takes a block suffix"));
                }
                let s = self.block_suffix()?.expect("suffix present");
                return Ok(Value::Algebra(self.block_diagonal(s, 0)));
            }
            return Ok(Value::Scalar(Rational::from_integer(n)));
        }
        let len = self.src[at..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.src.len() - at);
        if len == 0 {
            return Err(parse_err(at, format!("unexpected {:?}", self.rest_char())));
        }
        let name = &self.src[at..at + len];
        self.pos += len;
        if name == "d" {
            return Ok(Value::Partial(Polynomial::monomial(Rational::one(), 1)));
        }
        if name == "x" {
            let blocks = self.shape.blocks();
            return match self.block_suffix()? {
                Some(s) if blocks[s as usize].polynomial => Ok(Value::Algebra(self.block_diagonal(s, 1))),
                Some(_) => Err(parse_err(at, "block has no variable x")),
                None if blocks.iter().any(|b| b.polynomial) => {
                    Ok(Value::Algebra(AlgebraElement::variable(self.shape)))
                }
                None => Err(parse_err(at, "algebra has no variable x")),
            };
        }
        if let Some((i, j)) = matrix_unit(name) {
            return self.matrix_unit(i, j, at).map(Value::Algebra);
        }
        self.named(name, at)
    }

    fn block_diagonal(&self, s: u16, deg: u32) -> AlgebraElement {
        let size = self.shape.blocks()[s as usize].size;
        let mut out = AlgebraElement::zero(self.shape);
        for i in 0..size {
            let b = Basis {
                block: s,
                deg,
                row: i,
                col: i,
            };
            out = &out + &AlgebraElement::basis(self.shape, b);
        }
        out
    }

    fn matrix_unit(&mut self, i: u16, j: u16, at: usize) -> Result<AlgebraElement> {
        let blocks = self.shape.blocks();
        let block = match self.block_suffix()? {
            Some(s) => s,
            None if blocks.len() == 1 => 0,
            None => return Err(parse_err(at, "matrix unit needs a block suffix @s")),
        };
        let size = blocks[block as usize].size;
        if size < 2 || i < 1 || j < 1 || i > size || j > size {
            return Err(parse_err(at, format!("e{i}{j} is not a matrix unit of block {block}")));
        }
        let b = Basis {
            block,
            deg: 0,
            row: i - 1,
            col: j - 1,
        };
        Ok(AlgebraElement::basis(self.shape, b))
    }

    fn named(&mut self, name: &str, at: usize) -> Result<Value> {
        if let Some(def) = self.scope.defs.get(name) {
            return Parser::run(self.shape, def, self.scope, self.nesting + 1).map_err(|e| match e {
                Error::Parse { offset, message } => {
                    parse_err(at, format!("in definition of {name} at offset {offset}: {message}"))
                }
                other => other,
            });
        }
        if let Some(n) = self.scope.cend {
            if let Some(b) = cend_base(n, self.shape, name) {
                return Ok(Value::Algebra(b));
            }
        }
        Err(parse_err(at, format!("undefined name {name:?}")))
    }

    fn act(
        &self,
        e: &ConformalElement,
        f: impl Fn(&AlgebraElement) -> Result<AlgebraElement>,
        at: usize,
    ) -> Result<ConformalElement> {
        let parts = e
            .components()
            .iter()
            .map(&f)
            .collect::<Result<Vec<_>>>()
            .map_err(|err| parse_err(at, err.to_string()))?;
        Ok(ConformalElement::from_components(self.shape, &parts))
    }

    fn negate(&self, v: Value, at: usize) -> Result<Value> {
        self.mul(Value::Scalar(-Rational::one()), v, at)
    }

    fn add(&self, a: Value, b: Value, at: usize) -> Result<Value> {
        use Value::*;
        Ok(match (a, b) {
            (Scalar(p), Scalar(q)) => Scalar(p + q),
            (a, b) if a.is_conformal() || b.is_conformal() => {
                let a = a.into_conformal(self.shape)?;
                let b = b.into_conformal(self.shape)?;
                Conformal(&a + &b)
            }
            (a, b) => {
                let a = a.into_algebra(self.shape, at)?;
                let b = b.into_algebra(self.shape, at)?;
                Algebra(&a + &b)
            }
        })
    }

    fn mul(&self, a: Value, b: Value, at: usize) -> Result<Value> {
        use Value::*;
        Ok(match (a, b) {
            (Scalar(p), Scalar(q)) => Scalar(p * q),
            (Scalar(c), Algebra(x)) | (Algebra(x), Scalar(c)) => Algebra(x.scale(&c)),
            (Scalar(c), Partial(p)) | (Partial(p), Scalar(c)) => Partial(p.scale(&c)),
            (Scalar(c), Conformal(e)) | (Conformal(e), Scalar(c)) => Conformal(e.scale(&c)),
            (Algebra(x), Algebra(y)) => Algebra(x.mul(&y).map_err(|e| parse_err(at, e.to_string()))?),
            (Partial(p), Partial(q)) => Partial(&p * &q),
            (Partial(p), Algebra(x)) | (Algebra(x), Partial(p)) => {
                Conformal(ConformalElement::tilde(&x).mul_poly(&p))
            }
            (Partial(p), Conformal(e)) | (Conformal(e), Partial(p)) => Conformal(e.mul_poly(&p)),
            // ℚ[∂] ⊗ B as a B-bimodule, so that `d*x*e11` reads as printed.
            (Conformal(e), Algebra(x)) => Conformal(self.act(&e, |c| c.mul(&x), at)?),
            (Algebra(x), Conformal(e)) => Conformal(self.act(&e, |c| x.mul(c), at)?),
            _ => {
                return Err(parse_err(
                    at,
                    "products of conformal elements are n-products; write them with the product command",
                ))
            }
        })
    }
}
