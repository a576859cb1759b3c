//! A small expression language shared by polynomial parsing and the
//! algebraic expressions used for first integrals and linearizing maps.
//!
//! Grammar: sums and differences of products and quotients of powers, where
//! an exponent is a rational constant (`^3`, `^(4/3)`, `^(-1/6)`), plus
//! `sqrt(e)` as sugar for `e^(1/2)`.

use std::collections::BTreeSet;
use std::fmt;

use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rat),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rat),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::parse(s, format!("unexpected character `{c}` at offset {i}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::parse(self.src, format!("{msg} (token {})", self.pos))
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat_op('-') {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.eat_op('+');
            self.product()?
        };
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat_op('^') {
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rat> {
        let neg = self.eat_op('-');
        let e = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                n.parse::<Rat>()?
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat_op(')') {
                    return Err(self.err("expected `)` after exponent"));
                }
                inner
                    .constant_value()
                    .ok_or_else(|| self.err("exponent must be a rational constant"))?
            }
            _ => return Err(self.err("expected exponent")),
        };
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n.parse::<Rat>()?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "sqrt" && self.eat_op('(') {
                    let inner = self.sum()?;
                    if !self.eat_op(')') {
                        return Err(self.err("expected `)`"));
                    }
                    return Ok(Expr::Pow(Box::new(inner), Rat::new(1, 2)));
                }
                Ok(Expr::Var(name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat_op(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(Error::parse(s, "empty expression"));
        }
        let mut p = Parser { src: s, toks, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    /// Value of an expression built only from numbers and integer powers.
    pub fn constant_value(&self) -> Option<Rat> {
        Some(match self {
            Expr::Num(r) => r.clone(),
            Expr::Var(_) => return None,
            Expr::Neg(a) => -a.constant_value()?,
            Expr::Add(a, b) => a.constant_value()? + b.constant_value()?,
            Expr::Sub(a, b) => a.constant_value()? - b.constant_value()?,
            Expr::Mul(a, b) => a.constant_value()? * b.constant_value()?,
            Expr::Div(a, b) => {
                let d = b.constant_value()?;
                if d.is_zero() {
                    return None;
                }
                a.constant_value()? / d
            }
            Expr::Pow(a, e) if e.is_integer() => {
                let base = a.constant_value()?;
                let k: i64 = e.to_string().parse().ok()?;
                if base.is_zero() && k < 0 {
                    return None;
                }
                base.powi(k)
            }
            Expr::Pow(..) => return None,
        })
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// `true` when every exponent is an integer (the expression is a rational function).
    pub fn is_rational_function(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) => true,
            Expr::Neg(a) => a.is_rational_function(),
            Expr::Pow(a, e) => e.is_integer() && a.is_rational_function(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_rational_function() && b.is_rational_function()
            }
        }
    }

    /// Substitutes variables by expressions.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Var(v) => map(v).unwrap_or_else(|| self.clone()),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(map))),
            Expr::Pow(a, e) => Expr::Pow(Box::new(a.substitute(map)), e.clone()),
            Expr::Add(a, b) => Expr::Add(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Expr::Div(a, b) => Expr::Div(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) if r.signum() < 0 || !r.is_integer() => write!(f, "({r})"),
            Expr::Num(r) => write!(f, "{r}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/({b})"),
            Expr::Pow(a, e) if e.is_integer() && e.signum() > 0 => write!(f, "({a})^{e}"),
            Expr::Pow(a, e) => write!(f, "({a})^({e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence_and_powers() {
        let e = Expr::parse("2*x^3 - y/(1+x)^(4/3)").unwrap();
        assert_eq!(e.variables().into_iter().collect::<Vec<_>>(), vec!["x", "y"]);
        assert!(!e.is_rational_function());
        let c = Expr::parse("-(3 - 1/2)^2 * 4").unwrap();
        assert_eq!(c.constant_value(), Some(Rat::new(-25, 1)));
        let s = Expr::parse("sqrt(4)").unwrap();
        assert_eq!(s, Expr::Pow(Box::new(Expr::Num(Rat::from_int(4))), Rat::new(1, 2)));
        assert_eq!(Expr::parse("x^(-2)").unwrap(), Expr::Pow(Box::new(Expr::Var("x".into())), Rat::from_int(-2)));
    }

    #[test]
    fn rejects_garbage() {
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("x +").is_err());
        assert!(Expr::parse("x ^ y").is_err());
        assert!(Expr::parse("(x").is_err());
        assert!(Expr::parse("x $ y").is_err());
    }
}
