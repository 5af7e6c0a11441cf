//! Infix syntax for [`JetExpr`]:
//! `+ - * /`, `^` with an integer or a parenthesised rational exponent,
//! `exp(..)`, `ln(..)`, `sqrt(..)`, and (when enabled) `d(atom)`.

use num_traits::Signed;

use crate::error::JetError;
use crate::jetcalc::expr::JetExpr;
use crate::scalars::Rational;

/// Atom name used for the differential `d(name)` when differentials are enabled.
pub fn differential_atom(name: &str) -> String {
    format!("d({name})")
}

/// Inverse of [`differential_atom`].
pub fn differential_target(atom: &str) -> Option<&str> {
    atom.strip_prefix("d(").and_then(|s| s.strip_suffix(')'))
}

type Resolver<'a> = &'a dyn Fn(&str) -> Result<String, String>;

/// Parser configuration: identifier resolution (canonical jet names,
/// declared-atom checks) and whether `d(atom)` is accepted.
#[derive(Clone, Copy, Default)]
pub struct ExprSyntax<'a> {
    pub resolve: Option<Resolver<'a>>,
    pub differentials: bool,
    /// Line and column offset used in error positions.
    pub line: usize,
    pub column: usize,
}

pub fn parse_expr(text: &str) -> Result<JetExpr, JetError> {
    ExprSyntax { line: 1, ..Default::default() }.parse(text)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

struct Parser<'a, 's> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    syn: &'s ExprSyntax<'a>,
}

impl<'a> ExprSyntax<'a> {
    pub fn parse(&self, text: &str) -> Result<JetExpr, JetError> {
        let toks = tokenize(text).map_err(|(col, msg)| self.err(col, msg))?;
        let mut p = Parser { toks, pos: 0, end: text.chars().count(), syn: self };
        let e = p.expr()?;
        if p.pos < p.toks.len() {
            let (t, col) = &p.toks[p.pos];
            return Err(self.err(*col, format!("unexpected {t:?}")));
        }
        Ok(e)
    }

    fn err(&self, col: usize, message: String) -> JetError {
        JetError::Syntax { line: self.line.max(1), column: self.column + col + 1, message }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, (usize, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(chars[start..i].iter().collect()), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err((i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), JetError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(self.syn.err(self.col(), format!("expected '{op}'")))
        }
    }

    fn expr(&mut self) -> Result<JetExpr, JetError> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<JetExpr, JetError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat('/') {
                let col = self.col();
                let d = self.factor()?;
                if d.is_zero() {
                    return Err(self.syn.err(col, "division by zero".into()));
                }
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<JetExpr, JetError> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let col = self.col();
        let exponent = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Rational::from_integer(n.parse().unwrap())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                e.as_constant().ok_or_else(|| self.syn.err(col, "exponent must be a rational constant".into()))?
            }
            _ => return Err(self.syn.err(col, "expected an integer or a parenthesised exponent".into())),
        };
        if base.is_zero() && exponent.is_negative() {
            return Err(self.syn.err(col, "zero to a negative power".into()));
        }
        base.pow(&exponent)
    }

    fn primary(&mut self) -> Result<JetExpr, JetError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(JetExpr::constant(Rational::from_integer(n.parse().unwrap())))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let is_call = self.peek() == Some(&Tok::Op('('));
                match name.as_str() {
                    "exp" | "ln" | "sqrt" if is_call => {
                        self.pos += 1;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        match name.as_str() {
                            "exp" => arg.exp(),
                            "ln" => arg.ln(),
                            _ => arg.pow(&Rational::new(1.into(), 2.into())),
                        }
                    }
                    "d" if is_call && self.syn.differentials => {
                        self.pos += 1;
                        let acol = self.col();
                        let target = match self.peek().cloned() {
                            Some(Tok::Ident(a)) => a,
                            _ => return Err(self.syn.err(acol, "expected an atom inside d(..)".into())),
                        };
                        self.pos += 1;
                        self.expect(')')?;
                        let target = self.resolve(&target, acol)?;
                        Ok(JetExpr::atom(&differential_atom(&target)))
                    }
                    _ => {
                        let atom = self.resolve(&name, col)?;
                        Ok(JetExpr::atom(&atom))
                    }
                }
            }
            Some(t) => Err(self.syn.err(col, format!("unexpected {t:?}"))),
            None => Err(self.syn.err(col, "unexpected end of expression".into())),
        }
    }

    fn resolve(&self, name: &str, col: usize) -> Result<String, JetError> {
        match self.syn.resolve {
            Some(f) => f(name).map_err(|m| self.syn.err(col, m)),
            None => Ok(name.to_string()),
        }
    }
}
