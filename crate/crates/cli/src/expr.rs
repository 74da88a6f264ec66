//! Function expressions over the catalog.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := compose (('*' | '/') compose)*
//! compose := unary (('∘' | '@') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := number | number 'i' | 'i' | 'z' | name '(' args ')' | '(' expr ')'
//! ```
//!
//! Constants fold, so `0.5+0.2i` is a complex literal. Names: `const`,
//! `identity`, `monomial`, `mobius`, `log1m` (`log_recip_one_minus`), `inner`
//! (`inner_singular`), `pow1m` (`power_one_minus`), `poly`, `comp`, `deriv`,
//! `prim`.

use bmoalab::{AnalyticFn, Complex64};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{msg} at offset {pos} in {src:?}")]
pub struct ParseError {
    pub src: String,
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let err = |pos: usize, msg: &str| ParseError { src: src.into(), pos, msg: msg.into() };
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            // exponent, only when followed by digits
            if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let end = if i < chars.len() { chars[i].0 } else { src.len() };
            let v: f64 = src[pos..end].parse().map_err(|_| err(chars[start].0, "bad number"))?;
            if i < chars.len() && chars[i].1 == 'i' && !(i + 1 < chars.len() && chars[i + 1].1.is_alphanumeric()) {
                i += 1;
                out.push((pos, Tok::Imag(v)));
            } else {
                out.push((pos, Tok::Num(v)));
            }
        } else if ch.is_alphabetic() || ch == '_' {
            let start = pos;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let end = if i < chars.len() { chars[i].0 } else { src.len() };
            out.push((start, Tok::Ident(src[start..end].to_string())));
        } else if "+-*/^()@,∘".contains(ch) {
            out.push((pos, Tok::Sym(if ch == '@' { '∘' } else { ch })));
            i += 1;
        } else {
            return Err(err(pos, &format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

/// Parsed value: constants stay symbolic until they meet a function.
#[derive(Debug, Clone)]
enum Val {
    C(Complex64),
    F(AnalyticFn),
}

impl Val {
    fn into_fn(self) -> AnalyticFn {
        match self {
            Val::C(c) => AnalyticFn::constant(c),
            Val::F(f) => f,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let pos = self.toks.get(self.at).map(|t| t.0).unwrap_or(self.src.len());
        Err(ParseError { src: self.src.into(), pos, msg: msg.into() })
    }

    fn peek_sym(&self) -> Option<char> {
        match self.toks.get(self.at) {
            Some((_, Tok::Sym(c))) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek_sym() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn lift<T>(&self, r: bmoalab::Result<T>) -> Result<T, ParseError> {
        r.or_else(|e| self.err(e.to_string()))
    }

    fn expr(&mut self) -> Result<Val, ParseError> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_sym() {
            self.at += 1;
            let rhs = self.term()?;
            lhs = match (lhs, rhs, op) {
                (Val::C(a), Val::C(b), '+') => Val::C(a + b),
                (Val::C(a), Val::C(b), _) => Val::C(a - b),
                (a, b, '+') => Val::F(a.into_fn().add(&b.into_fn())),
                (a, b, _) => Val::F(a.into_fn().sub(&b.into_fn())),
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Val, ParseError> {
        let mut lhs = self.compose()?;
        while let Some(op @ ('*' | '/')) = self.peek_sym() {
            self.at += 1;
            let rhs = self.compose()?;
            lhs = match (lhs, rhs, op) {
                (Val::C(a), Val::C(b), '*') => Val::C(a * b),
                (Val::C(a), Val::F(f), '*') | (Val::F(f), Val::C(a), '*') => Val::F(f.scale(a)),
                (Val::F(f), Val::F(g), '*') => Val::F(f.mul(&g)),
                (_, Val::C(b), '/') if b.norm() == 0.0 => return self.err("division by zero"),
                (Val::C(a), Val::C(b), _) => Val::C(a / b),
                (Val::F(f), Val::C(b), _) => Val::F(f.scale(1.0 / b)),
                _ => return self.err("only division by a constant is supported"),
            };
        }
        Ok(lhs)
    }

    fn compose(&mut self) -> Result<Val, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek_sym() == Some('∘') {
            self.at += 1;
            let rhs = self.unary()?;
            lhs = match lhs {
                Val::C(c) => Val::C(c),
                Val::F(f) => Val::F(self.lift(f.compose(&rhs.into_fn()))?),
            };
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Val, ParseError> {
        let base = self.atom()?;
        if self.peek_sym() != Some('^') {
            return Ok(base);
        }
        self.at += 1;
        let n = match self.toks.get(self.at) {
            Some((_, Tok::Num(v))) if v.fract() == 0.0 && *v >= 0.0 && *v <= 64.0 => *v as u32,
            _ => return self.err("exponent must be an integer in 0..=64"),
        };
        self.at += 1;
        Ok(match base {
            Val::C(c) => Val::C(c.powu(n)),
            Val::F(f) if f.as_symbol() == Some(&bmoalab::CatalogSymbol::Identity) => Val::F(AnalyticFn::monomial(n)),
            Val::F(f) => {
                let mut acc = AnalyticFn::real_constant(1.0);
                for _ in 0..n {
                    acc = acc.mul(&f);
                }
                Val::F(acc)
            }
        })
    }

    fn unary(&mut self) -> Result<Val, ParseError> {
        if self.peek_sym() == Some('-') {
            self.at += 1;
            return Ok(match self.unary()? {
                Val::C(c) => Val::C(-c),
                Val::F(f) => Val::F(f.scale(Complex64::new(-1.0, 0.0))),
            });
        }
        if self.peek_sym() == Some('+') {
            self.at += 1;
            return self.unary();
        }
        self.power()
    }

    fn atom(&mut self) -> Result<Val, ParseError> {
        let Some((_, tok)) = self.toks.get(self.at).cloned() else {
            return self.err("unexpected end of expression");
        };
        self.at += 1;
        match tok {
            Tok::Num(v) => Ok(Val::C(Complex64::new(v, 0.0))),
            Tok::Imag(v) => Ok(Val::C(Complex64::new(0.0, v))),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(name) if self.peek_sym() == Some('(') => {
                self.at += 1;
                let mut args = Vec::new();
                if self.peek_sym() != Some(')') {
                    args.push(self.expr()?);
                    while self.peek_sym() == Some(',') {
                        self.at += 1;
                        args.push(self.expr()?);
                    }
                }
                self.expect(')')?;
                self.call(&name, args)
            }
            Tok::Ident(name) => match name.as_str() {
                "z" | "identity" => Ok(Val::F(AnalyticFn::identity())),
                "i" => Ok(Val::C(Complex64::new(0.0, 1.0))),
                _ => {
                    self.at -= 1;
                    self.err(format!("unknown identifier {name:?}"))
                }
            },
            Tok::Sym(c) => {
                self.at -= 1;
                self.err(format!("unexpected '{c}'"))
            }
        }
    }

    fn call(&mut self, name: &str, args: Vec<Val>) -> Result<Val, ParseError> {
        let arity = |n: usize| -> Result<(), ParseError> {
            if args.len() == n {
                Ok(())
            } else {
                self.err(format!("{name} takes {n} argument(s), got {}", args.len()))
            }
        };
        let consts = || -> Result<Vec<Complex64>, ParseError> {
            args.iter()
                .map(|a| match a {
                    Val::C(c) => Ok(*c),
                    Val::F(_) => self.err(format!("{name} needs constant arguments")),
                })
                .collect()
        };
        let real = |c: Complex64| -> Result<f64, ParseError> {
            if c.im == 0.0 {
                Ok(c.re)
            } else {
                self.err(format!("{name} needs a real argument"))
            }
        };
        let v = match name {
            "const" => {
                arity(1)?;
                AnalyticFn::constant(consts()?[0])
            }
            "identity" => {
                arity(0)?;
                AnalyticFn::identity()
            }
            "monomial" => {
                arity(1)?;
                let n = real(consts()?[0])?;
                if n.fract() != 0.0 || !(0.0..=64.0).contains(&n) {
                    return self.err("monomial degree must be an integer in 0..=64");
                }
                AnalyticFn::monomial(n as u32)
            }
            "mobius" => {
                arity(1)?;
                self.lift(AnalyticFn::mobius(consts()?[0]))?
            }
            "log1m" | "log_recip_one_minus" => {
                arity(1)?;
                self.lift(AnalyticFn::log_recip_one_minus(consts()?[0]))?
            }
            "inner" | "inner_singular" => {
                arity(2)?;
                let c = consts()?;
                self.lift(AnalyticFn::inner_singular(real(c[0])?, c[1]))?
            }
            "pow1m" | "power_one_minus" => {
                arity(1)?;
                self.lift(AnalyticFn::power_one_minus(real(consts()?[0])?))?
            }
            "poly" => self.lift(AnalyticFn::polynomial(consts()?))?,
            "comp" => {
                arity(2)?;
                let mut it = args.into_iter();
                let (f, g) = (it.next().unwrap(), it.next().unwrap());
                return match f {
                    Val::C(c) => Ok(Val::C(c)),
                    Val::F(f) => Ok(Val::F(self.lift(f.compose(&g.into_fn()))?)),
                };
            }
            "deriv" => {
                arity(1)?;
                return Ok(match args.into_iter().next().unwrap() {
                    Val::C(_) => Val::C(Complex64::new(0.0, 0.0)),
                    Val::F(f) => Val::F(f.derivative()),
                });
            }
            "prim" => {
                arity(2)?;
                let base = match &args[1] {
                    Val::C(c) if c.norm() < 1.0 => *c,
                    _ => return self.err("prim base must be a constant inside the disc"),
                };
                args.into_iter().next().unwrap().into_fn().primitive(base)
            }
            _ => {
                self.at -= 1;
                return self.err(format!("unknown function {name:?}"));
            }
        };
        Ok(Val::F(v))
    }
}

pub fn parse(src: &str) -> Result<AnalyticFn, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, at: 0 };
    let v = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v.into_fn())
}
