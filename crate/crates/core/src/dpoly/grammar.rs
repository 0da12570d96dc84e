//! Text syntax for double polynomials.
//!
//! ```text
//! program := ("let" IDENT "=" sum ";")* sum
//! sum     := signed (("+" | "-") signed)*
//! signed  := "-" signed | bullet
//! bullet  := circ ("*" circ)*
//! circ    := postfix ("." postfix)*
//! postfix := atom ("'" | "^" INT | "^." INT)*
//! atom    := "x" | "I" | "J" | NUMBER | IDENT | "(" sum ")"
//! NUMBER  := DIGITS ("/" DIGITS)?
//! ```
//!
//! `*` is the matrix product, `.` the entry-wise product, `'` the involution.
//! A number inside a product chain is a coefficient; a number standing alone
//! is rejected because it could mean either `c*I` or `c*J`.
//!
//! Positions in errors are 1-based character offsets.

use std::collections::HashMap;

use super::ast::{DPoly, Kind};
use crate::error::{Error, Result};
use crate::exactcore::{Field, Rational};

/// Exponent cap for `^k` and `^.k`.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    X,
    I,
    J,
    Ident(String),
    Let,
    Eq,
    Semi,
    Plus,
    Minus,
    Star,
    Dot,
    Caret,
    Prime,
    LParen,
    RParen,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(r) => format!("number `{r}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}"),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '.' => Some(Tok::Dot),
            '^' => Some(Tok::Caret),
            '\'' => Some(Tok::Prime),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            let r: Rational = lit
                .parse()
                .map_err(|_| Error::Syntax { pos, msg: format!("invalid number `{lit}`") })?;
            out.push((pos, Tok::Num(r)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let t = match word.as_str() {
                "x" => Tok::X,
                "I" => Tok::I,
                "J" => Tok::J,
                "let" => Tok::Let,
                _ => Tok::Ident(word),
            };
            out.push((pos, t));
            continue;
        }
        return Err(Error::UnknownToken { pos, token: c.to_string() });
    }
    out.push((chars.len() + 1, Tok::Eof));
    Ok(out)
}

/// Intermediate parse value: a bare scalar keeps its meaning open until it
/// meets a product.
enum Val {
    Scalar(Rational),
    Poly(DPoly),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    env: HashMap<String, DPoly>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn program(&mut self) -> Result<DPoly> {
        while *self.peek() == Tok::Let {
            self.bump();
            let pos = self.pos();
            let name = match self.bump() {
                Tok::Ident(s) => s,
                t => return Err(Error::Syntax { pos, msg: format!("expected a binding name, found {}", describe(&t)) }),
            };
            self.expect(Tok::Eq, "`=`")?;
            let start = self.pos();
            let v = self.sum()?;
            let p = self.as_poly(v, start)?;
            self.expect(Tok::Semi, "`;`")?;
            self.env.insert(name, p);
        }
        let start = self.pos();
        let v = self.sum()?;
        if *self.peek() != Tok::Eof {
            return self.err(format!("unexpected {}", describe(self.peek())));
        }
        self.as_poly(v, start)
    }

    fn as_poly(&self, v: Val, pos: usize) -> Result<DPoly> {
        match v {
            Val::Poly(p) => Ok(p),
            Val::Scalar(c) => Err(Error::Syntax {
                pos,
                msg: format!("bare scalar `{c}` is ambiguous; write `{c}*I` or `{c}*J`"),
            }),
        }
    }

    fn sum(&mut self) -> Result<Val> {
        let start = self.pos();
        let first = self.signed()?;
        if !matches!(self.peek(), Tok::Plus | Tok::Minus) {
            return Ok(first);
        }
        let mut terms = vec![self.as_poly(first, start)?];
        while matches!(self.peek(), Tok::Plus | Tok::Minus) {
            let neg = self.bump() == Tok::Minus;
            let start = self.pos();
            let t = self.signed()?;
            let t = self.as_poly(t, start)?;
            terms.push(if neg { t.neg() } else { t });
        }
        Ok(Val::Poly(DPoly::sum(terms)))
    }

    fn signed(&mut self) -> Result<Val> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(match self.signed()? {
                Val::Scalar(c) => Val::Scalar(-c),
                Val::Poly(p) => Val::Poly(p.neg()),
            });
        }
        self.bullet()
    }

    fn chain(&mut self, sep: Tok, next: fn(&mut Self) -> Result<Val>, op: fn(&DPoly, &DPoly) -> DPoly) -> Result<Val> {
        let first = next(self)?;
        if *self.peek() != sep {
            return Ok(first);
        }
        let mut coeff = Rational::one();
        let mut acc: Option<DPoly> = None;
        let mut v = first;
        loop {
            match v {
                Val::Scalar(c) => coeff = &coeff * &c,
                Val::Poly(p) => {
                    acc = Some(match acc {
                        None => p,
                        Some(a) => op(&a, &p),
                    })
                }
            }
            if *self.peek() != sep {
                break;
            }
            self.bump();
            v = next(self)?;
        }
        Ok(match acc {
            None => Val::Scalar(coeff),
            Some(p) => Val::Poly(DPoly::scale(coeff, &p)),
        })
    }

    fn bullet(&mut self) -> Result<Val> {
        self.chain(Tok::Star, Self::circ, DPoly::bullet)
    }

    fn circ(&mut self) -> Result<Val> {
        self.chain(Tok::Dot, Self::postfix, DPoly::circ)
    }

    fn exponent(&mut self) -> Result<u32> {
        match self.peek().clone() {
            Tok::Num(r) => match r.to_i64() {
                Some(k) if (0..=MAX_EXPONENT as i64).contains(&k) => {
                    self.bump();
                    Ok(k as u32)
                }
                _ => self.err(format!("exponent must be an integer in 0..={MAX_EXPONENT}")),
            },
            t => self.err(format!("expected an exponent, found {}", describe(&t))),
        }
    }

    fn postfix(&mut self) -> Result<Val> {
        let mut v = self.atom()?;
        loop {
            match self.peek() {
                Tok::Prime => {
                    self.bump();
                    v = match v {
                        Val::Poly(p) => Val::Poly(p.involution()),
                        s => s,
                    };
                }
                Tok::Caret => {
                    self.bump();
                    let circ = *self.peek() == Tok::Dot;
                    if circ {
                        self.bump();
                    }
                    let k = self.exponent()?;
                    v = match v {
                        Val::Scalar(c) => Val::Scalar(c.pow(k)),
                        Val::Poly(p) if circ => Val::Poly(p.circ_pow(k)),
                        Val::Poly(p) => Val::Poly(p.bullet_pow(k)),
                    };
                }
                _ => return Ok(v),
            }
        }
    }

    fn atom(&mut self) -> Result<Val> {
        let pos = self.pos();
        match self.bump() {
            Tok::X => Ok(Val::Poly(DPoly::x())),
            Tok::I => Ok(Val::Poly(DPoly::bullet_one())),
            Tok::J => Ok(Val::Poly(DPoly::circ_one())),
            Tok::Num(r) => Ok(Val::Scalar(r)),
            Tok::Ident(name) => match self.env.get(&name) {
                Some(p) => Ok(Val::Poly(p.clone())),
                None => Err(Error::UnknownToken { pos, token: name }),
            },
            Tok::LParen => {
                let v = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            t => {
                Err(Error::Syntax { pos, msg: format!("expected an operand, found {}", describe(&t)) })
            }
        }
    }
}

pub fn parse(text: &str) -> Result<DPoly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, env: HashMap::new() };
    p.program()
}

// Printer precedence levels; an operand printed below its required level
// gets parentheses.
const SUM: u8 = 0;
const NEG: u8 = 1;
const SCALE: u8 = 2;
const BULLET: u8 = 3;
const CIRC: u8 = 4;
const ATOM: u8 = 6;

struct Printer {
    names: HashMap<usize, String>,
}

impl Printer {
    fn level(&self, p: &DPoly) -> u8 {
        if self.names.contains_key(&p.node_id()) {
            return ATOM;
        }
        match p.kind() {
            Kind::Var | Kind::BulletOne | Kind::CircOne => ATOM,
            Kind::Sum(ts) if ts.is_empty() => SCALE,
            Kind::Sum(_) => SUM,
            Kind::ScalarMul(c, _) if c.is_negative() => NEG,
            Kind::ScalarMul(..) => SCALE,
            Kind::BulletProd(..) => BULLET,
            Kind::CircProd(..) => CIRC,
        }
    }

    fn at(&self, p: &DPoly, min: u8, out: &mut String) {
        if self.level(p) < min {
            out.push('(');
            self.body(p, out);
            out.push(')');
        } else {
            self.body(p, out);
        }
    }

    fn positive_scale(&self, c: &Rational, q: &DPoly, out: &mut String) {
        if c.is_one() {
            self.at(q, SCALE, out);
        } else {
            out.push_str(&c.to_string());
            out.push('*');
            self.at(q, BULLET, out);
        }
    }

    fn body(&self, p: &DPoly, out: &mut String) {
        if let Some(name) = self.names.get(&p.node_id()) {
            out.push_str(name);
            return;
        }
        self.expand(p, out);
    }

    fn expand(&self, p: &DPoly, out: &mut String) {
        match p.kind() {
            Kind::Var => out.push('x'),
            Kind::BulletOne => out.push('I'),
            Kind::CircOne => out.push('J'),
            Kind::Sum(ts) if ts.is_empty() => out.push_str("0*J"),
            Kind::Sum(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    let negative = !self.names.contains_key(&t.node_id())
                        && matches!(t.kind(), Kind::ScalarMul(c, _) if c.is_negative());
                    if i == 0 {
                        self.at(t, NEG, out);
                    } else if negative {
                        let Kind::ScalarMul(c, q) = t.kind() else { unreachable!() };
                        out.push_str(" - ");
                        self.positive_scale(&-c, q, out);
                    } else {
                        out.push_str(" + ");
                        self.at(t, SCALE, out);
                    }
                }
            }
            Kind::ScalarMul(c, q) if c.is_negative() => {
                out.push('-');
                self.positive_scale(&-c, q, out);
            }
            Kind::ScalarMul(c, q) => self.positive_scale(c, q, out),
            Kind::BulletProd(a, b) => {
                self.at(a, BULLET, out);
                out.push('*');
                self.at(b, CIRC, out);
            }
            Kind::CircProd(a, b) => {
                self.at(a, CIRC, out);
                out.push('.');
                self.at(b, CIRC + 1, out);
            }
        }
    }
}

/// Canonical text. Non-leaf nodes that are shared within the DAG are bound
/// once with `let` so the text stays proportional to the DAG size.
pub fn print(p: &DPoly) -> String {
    let order = p.post_order();
    let mut uses: HashMap<usize, usize> = HashMap::new();
    for node in &order {
        for c in node.children() {
            *uses.entry(c.node_id()).or_default() += 1;
        }
    }
    let mut printer = Printer { names: HashMap::new() };
    let mut out = String::new();
    let mut next = 0usize;
    for node in &order {
        let leaf = matches!(node.kind(), Kind::Var | Kind::BulletOne | Kind::CircOne);
        if leaf || node.ptr_eq(p) || uses.get(&node.node_id()).copied().unwrap_or(0) < 2 {
            continue;
        }
        let name = format!("t{next}");
        next += 1;
        out.push_str("let ");
        out.push_str(&name);
        out.push_str(" = ");
        printer.expand(node, &mut out);
        out.push_str("; ");
        printer.names.insert(node.node_id(), name);
    }
    printer.at(p, SUM, &mut out);
    out
}
