//! Line-oriented text format for algebra presentations.
//!
//! ```text
//! algebra h
//! form theta1 theta2
//! prolongation chi          # generators without a known differential
//! ideal theta1 theta2       # generators of the exterior ideal
//! closed zeta = theta1      # closed 1-form candidates
//! cocycle omega = theta1^theta2
//! d theta1 = 0
//! d theta2 = -theta1^theta2
//! ```
//!
//! Terms are `[RATIONAL *] factor ^ factor`, where a factor is a generator
//! name or a parenthesized linear combination such as `(eta1 - 3*eta2)`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::PresentationError;
use crate::exterior::{check_compatibility, exterior_derivative, ClosedMarkResidual, Coframe, CompatibilityReport, KForm, StructureTable};
use crate::scalars::{parse_rational, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct NamedForm {
    pub name: String,
    pub form: KForm<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraPresentation {
    pub name: String,
    coframe: Arc<Coframe>,
    table: StructureTable,
    ideal: Vec<usize>,
    closed_marks: Vec<NamedForm>,
    cocycles: Vec<NamedForm>,
}

impl AlgebraPresentation {
    pub fn coframe(&self) -> &Arc<Coframe> {
        &self.coframe
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    /// Ideal generators in declaration order (empty when none declared).
    pub fn ideal(&self) -> &[usize] {
        &self.ideal
    }

    pub fn closed_marks(&self) -> &[NamedForm] {
        &self.closed_marks
    }

    pub fn closed_mark(&self, name: &str) -> Option<&KForm<Rational>> {
        self.closed_marks.iter().find(|m| m.name == name).map(|m| &m.form)
    }

    pub fn cocycles(&self) -> &[NamedForm] {
        &self.cocycles
    }

    pub fn cocycle(&self, name: &str) -> Option<&KForm<Rational>> {
        self.cocycles.iter().find(|m| m.name == name).map(|m| &m.form)
    }

    pub fn known_count(&self) -> usize {
        self.coframe.known_indices().len()
    }

    /// Parses a form written with this presentation's generator names.
    pub fn parse_form(&self, text: &str, degree: usize) -> Result<KForm<Rational>, PresentationError> {
        let mut p = LineParser::new(text, 1, 1, &self.coframe);
        let f = p.form(degree)?;
        p.end()?;
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
}

struct LineParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    frame: &'a Arc<Coframe>,
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<(Vec<(Tok, usize)>, usize), PresentationError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            toks.push((Tok::Number(chars[start..i].iter().collect()), col));
        } else if "+-*^()=".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(PresentationError::Syntax { line, column: col, expected: "a name, number or one of + - * ^ ( ) =".into() });
        }
    }
    Ok((toks, col0 + chars.len()))
}

impl<'a> LineParser<'a> {
    fn new(text: &str, line: usize, col0: usize, frame: &'a Arc<Coframe>) -> Self {
        // Tokenization errors are deferred to the first `peek`.
        match tokenize(text, line, col0) {
            Ok((toks, end_col)) => LineParser { toks, pos: 0, line, end_col, frame },
            Err(PresentationError::Syntax { column, .. }) => LineParser {
                toks: vec![(Tok::Sym('\u{0}'), column)],
                pos: 0,
                line,
                end_col: column,
                frame,
            },
            Err(_) => unreachable!(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn err(&self, expected: &str) -> PresentationError {
        PresentationError::Syntax { line: self.line, column: self.col(), expected: expected.to_string() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PresentationError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("`{c}`")))
        }
    }

    fn end(&self) -> Result<(), PresentationError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("end of line"))
        }
    }

    fn ident(&mut self) -> Result<String, PresentationError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("a name")),
        }
    }

    fn symbol(&mut self) -> Result<usize, PresentationError> {
        let name = self.ident()?;
        self.frame
            .index_of(&name)
            .ok_or(PresentationError::UndeclaredSymbol { name, line: self.line })
    }

    /// `expr := ["+"|"-"] term (("+"|"-") term)*`, or a lone `0`.
    fn form(&mut self, degree: usize) -> Result<KForm<Rational>, PresentationError> {
        if self.peek() == Some(&Tok::Number("0".into())) && self.toks.len() == self.pos + 1 {
            self.pos += 1;
            return Ok(KForm::zero(self.frame, degree));
        }
        let mut out = KForm::zero(self.frame, degree);
        let mut sign = if self.eat('-') {
            -<Rational as Scalar>::one()
        } else {
            self.eat('+');
            <Rational as Scalar>::one()
        };
        loop {
            let t = self.term(degree)?;
            out = out.add_scale(&sign, &t).expect("same frame and degree");
            if self.eat('+') {
                sign = Scalar::one();
            } else if self.eat('-') {
                sign = -<Rational as Scalar>::one();
            } else {
                break;
            }
        }
        Ok(out)
    }

    /// `term := [RATIONAL "*"] factor ("^" factor)*` with exactly `degree` factors.
    fn term(&mut self, degree: usize) -> Result<KForm<Rational>, PresentationError> {
        let col = self.col();
        let mut coeff: Rational = Scalar::one();
        if let Some(Tok::Number(n)) = self.peek() {
            let n = n.clone();
            coeff = parse_rational(&n).map_err(|_| self.err("a rational number"))?;
            self.pos += 1;
            self.expect('*')?;
        }
        let mut acc = KForm::constant(self.frame, coeff);
        let mut count = 0;
        loop {
            let f = self.factor()?;
            acc = acc.wedge(&f).expect("same frame");
            count += 1;
            if !self.eat('^') {
                break;
            }
        }
        if count != degree {
            return Err(PresentationError::Syntax {
                line: self.line,
                column: col,
                expected: format!("a term with {degree} wedge factor(s), found {count}"),
            });
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<KForm<Rational>, PresentationError> {
        if self.eat('(') {
            let f = self.form(1)?;
            self.expect(')')?;
            Ok(f)
        } else {
            match self.peek() {
                Some(Tok::Ident(_)) => Ok(KForm::generator(self.frame, self.symbol()?)),
                _ => Err(self.err("a generator name or `(`")),
            }
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Splits `KEYWORD rest`; returns the keyword and the 1-based column where `rest` starts.
fn split_keyword(line: &str) -> (&str, &str, usize) {
    let trimmed = line.trim_start();
    let lead = line.len() - trimmed.len();
    let kw_end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
    let rest = &trimmed[kw_end..];
    let col = line[..lead + kw_end].chars().count() + 1;
    (&trimmed[..kw_end], rest, col)
}

pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation, PresentationError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    let mut name = None;
    let mut decls: Vec<(String, bool)> = Vec::new();
    let mut seen = HashSet::new();
    for (idx, &(ln, line)) in lines.iter().enumerate() {
        let (kw, rest, _) = split_keyword(line);
        if idx == 0 {
            if kw != "algebra" {
                return Err(PresentationError::MissingHeader);
            }
            let words: Vec<&str> = rest.split_whitespace().collect();
            if words.len() != 1 || !is_ident(words[0]) {
                return Err(PresentationError::Syntax { line: ln, column: line.len() + 1, expected: "`algebra NAME`".into() });
            }
            name = Some(words[0].to_string());
            continue;
        }
        match kw {
            "form" | "prolongation" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                if words.is_empty() {
                    return Err(PresentationError::Syntax { line: ln, column: line.len() + 1, expected: "at least one name".into() });
                }
                for w in words {
                    if !is_ident(w) {
                        return Err(PresentationError::Syntax { line: ln, column: column_of(line, w), expected: "a name".into() });
                    }
                    if !seen.insert(w.to_string()) {
                        return Err(PresentationError::DuplicateDeclaration { name: w.to_string(), line: ln });
                    }
                    decls.push((w.to_string(), kw == "form"));
                }
            }
            "algebra" => return Err(PresentationError::DuplicateDeclaration { name: "algebra".into(), line: ln }),
            "ideal" | "closed" | "cocycle" | "d" => {}
            _ => return Err(PresentationError::Syntax { line: ln, column: column_of(line, kw), expected: "a declaration keyword".into() }),
        }
    }
    let name = name.ok_or(PresentationError::MissingHeader)?;
    let frame = Coframe::new(decls);

    let mut table = StructureTable::new(&frame);
    let mut ideal = Vec::new();
    let mut closed_marks: Vec<NamedForm> = Vec::new();
    let mut cocycles: Vec<NamedForm> = Vec::new();
    let mut defined = HashSet::new();
    for &(ln, line) in lines.iter().skip(1) {
        let (kw, rest, col) = split_keyword(line);
        match kw {
            "ideal" => {
                for w in rest.split_whitespace() {
                    let i = frame
                        .index_of(w)
                        .ok_or(PresentationError::UndeclaredSymbol { name: w.to_string(), line: ln })?;
                    if ideal.contains(&i) {
                        return Err(PresentationError::DuplicateDeclaration { name: w.to_string(), line: ln });
                    }
                    ideal.push(i);
                }
            }
            "closed" | "cocycle" | "d" => {
                let mut p = LineParser::new(rest, ln, col, &frame);
                let target = p.ident()?;
                p.expect('=')?;
                match kw {
                    "d" => {
                        let i = frame
                            .index_of(&target)
                            .ok_or(PresentationError::UndeclaredSymbol { name: target.clone(), line: ln })?;
                        if !frame.is_known(i) {
                            return Err(PresentationError::DifferentialOfProlongation { name: target, line: ln });
                        }
                        if !defined.insert(i) {
                            return Err(PresentationError::DuplicateDeclaration { name: format!("d {target}"), line: ln });
                        }
                        let f = p.form(2)?;
                        p.end()?;
                        table.set(i, f).expect("validated above");
                    }
                    _ => {
                        let list = if kw == "closed" { &mut closed_marks } else { &mut cocycles };
                        if list.iter().any(|m| m.name == target) {
                            return Err(PresentationError::DuplicateDeclaration { name: target, line: ln });
                        }
                        let f = p.form(if kw == "closed" { 1 } else { 2 })?;
                        p.end()?;
                        list.push(NamedForm { name: target, form: f });
                    }
                }
            }
            _ => {}
        }
    }
    for s in frame.symbols() {
        if s.known_differential && !defined.contains(&s.index) {
            return Err(PresentationError::MissingDifferential(s.name.clone()));
        }
    }
    Ok(AlgebraPresentation { name, coframe: frame, table, ideal, closed_marks, cocycles })
}

fn is_ident(w: &str) -> bool {
    let mut c = w.chars();
    matches!(c.next(), Some(f) if f.is_ascii_alphabetic() || f == '_') && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

fn column_of(line: &str, word: &str) -> usize {
    line.find(word).map(|b| line[..b].chars().count() + 1).unwrap_or(1)
}

/// Declarations, then ideal, closed marks, cocycles and `d` lines in symbol order.
pub fn serialize_presentation(p: &AlgebraPresentation) -> String {
    let mut out = String::new();
    writeln!(out, "algebra {}", p.name).unwrap();
    let syms = p.coframe.symbols();
    let mut i = 0;
    while i < syms.len() {
        let kind = syms[i].known_differential;
        let mut j = i;
        while j < syms.len() && syms[j].known_differential == kind {
            j += 1;
        }
        let names: Vec<&str> = syms[i..j].iter().map(|s| s.name.as_str()).collect();
        writeln!(out, "{} {}", if kind { "form" } else { "prolongation" }, names.join(" ")).unwrap();
        i = j;
    }
    if !p.ideal.is_empty() {
        let names: Vec<&str> = p.ideal.iter().map(|&i| p.coframe.name(i)).collect();
        writeln!(out, "ideal {}", names.join(" ")).unwrap();
    }
    for m in &p.closed_marks {
        writeln!(out, "closed {} = {}", m.name, m.form).unwrap();
    }
    for m in &p.cocycles {
        writeln!(out, "cocycle {} = {}", m.name, m.form).unwrap();
    }
    for (&i, f) in p.table.entries() {
        writeln!(out, "d {} = {}", p.coframe.name(i), f).unwrap();
    }
    out
}

/// Compatibility of the structure equations plus closedness of every closed mark.
pub fn validate_presentation(p: &AlgebraPresentation) -> CompatibilityReport {
    let mut report = check_compatibility(&p.table);
    report.closed_marks = p
        .closed_marks
        .iter()
        .map(|m| {
            let residual = match exterior_derivative(&m.form, &p.table) {
                Ok(d) => d.to_string(),
                Err(e) => e.to_string(),
            };
            ClosedMarkResidual { name: m.name.clone(), residual }
        })
        .collect();
    report.recompute_pass();
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationChange {
    pub symbol: String,
    pub raw: String,
    pub curated: String,
}

/// Machine-readable record of how a curated presentation differs from its
/// literal transcription.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationDiff {
    pub raw: String,
    pub curated: String,
    pub changed_equations: Vec<EquationChange>,
    pub changed_closed_marks: Vec<EquationChange>,
}

impl PresentationDiff {
    pub fn changed_symbols(&self) -> Vec<&str> {
        self.changed_equations.iter().map(|c| c.symbol.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Compares two presentations equation by equation (by symbol name).
pub fn presentation_diff(raw: &AlgebraPresentation, curated: &AlgebraPresentation) -> PresentationDiff {
    fn lines(p: &AlgebraPresentation) -> BTreeMap<String, (usize, String)> {
        p.table.entries().iter().map(|(&i, f)| (p.coframe.name(i).to_string(), (i, f.to_string()))).collect()
    }
    let (a, b) = (lines(raw), lines(curated));
    let mut names: Vec<(&String, usize)> = b.iter().map(|(n, (i, _))| (n, *i)).collect();
    for (n, (i, _)) in &a {
        if !b.contains_key(n) {
            names.push((n, *i + curated.coframe.len()));
        }
    }
    names.sort_by_key(|(_, i)| *i);
    let missing = || "(absent)".to_string();
    let changed_equations = names
        .into_iter()
        .filter_map(|(n, _)| {
            let r = a.get(n).map(|x| x.1.clone()).unwrap_or_else(missing);
            let c = b.get(n).map(|x| x.1.clone()).unwrap_or_else(missing);
            (r != c).then(|| EquationChange { symbol: n.clone(), raw: r, curated: c })
        })
        .collect();
    let marks = |p: &AlgebraPresentation| -> BTreeMap<String, String> {
        p.closed_marks.iter().map(|m| (m.name.clone(), m.form.to_string())).collect()
    };
    let (ma, mb) = (marks(raw), marks(curated));
    let mut mark_names: Vec<&String> = ma.keys().chain(mb.keys()).collect();
    mark_names.sort();
    mark_names.dedup();
    let changed_closed_marks = mark_names
        .into_iter()
        .filter_map(|n| {
            let r = ma.get(n).cloned().unwrap_or_else(missing);
            let c = mb.get(n).cloned().unwrap_or_else(missing);
            (r != c).then(|| EquationChange { symbol: n.clone(), raw: r, curated: c })
        })
        .collect();
    PresentationDiff { raw: raw.name.clone(), curated: curated.name.clone(), changed_equations, changed_closed_marks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;
    use proptest::prelude::*;

    const H: &str = "algebra h
form theta1 theta2 theta3 theta4 theta5
closed zeta = theta1
d theta1 = 0
d theta2 = -theta1^theta2
d theta3 = theta1^theta3
d theta4 = 2*theta1^theta4
d theta5 = theta2^theta3
";

    #[test]
    fn parses_example() {
        let p = parse_presentation(H).unwrap();
        assert_eq!(p.known_count(), 5);
        let t5 = p.coframe().index_of("theta5").unwrap();
        assert_eq!(p.table().get(t5).unwrap().to_string(), "theta2^theta3");
        assert!(validate_presentation(&p).pass);
    }

    #[test]
    fn rejects_undeclared() {
        let e = parse_presentation("algebra a\nform x\nd x = x ^ y").unwrap_err();
        assert_eq!(e, PresentationError::UndeclaredSymbol { name: "y".into(), line: 3 });
    }

    #[test]
    fn normalizes_sign() {
        let p = parse_presentation("algebra a\nform x y\nd x = 2 * y ^ x\nd y = 0").unwrap();
        assert_eq!(p.table().get(0).unwrap().coefficient(&[0, 1]), int(-2));
    }

    #[test]
    fn parenthesized_factors_expand() {
        let p = parse_presentation("algebra a\nform x y z\nd x = 1/2*(y - 3*z)^x\nd y = 0\nd z = 0").unwrap();
        assert_eq!(p.table().get(0).unwrap().to_string(), "-1/2*x^y + 3/2*x^z");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_presentation("algebra a\nform x y\nd x = x ^\nd y = 0").unwrap_err();
        assert!(matches!(e, PresentationError::Syntax { line: 3, column: 10, .. }), "{e:?}");
        let e = parse_presentation("algebra a\nform x y\nd x = x\nd y = 0").unwrap_err();
        assert!(matches!(e, PresentationError::Syntax { line: 3, .. }));
        assert_eq!(parse_presentation("form x").unwrap_err(), PresentationError::MissingHeader);
        assert_eq!(
            parse_presentation("algebra a\nform x y\nd x = 0").unwrap_err(),
            PresentationError::MissingDifferential("y".into())
        );
        assert!(matches!(
            parse_presentation("algebra a\nform x\nprolongation c\nd x = 0\nd c = 0").unwrap_err(),
            PresentationError::DifferentialOfProlongation { .. }
        ));
        assert!(matches!(
            parse_presentation("algebra a\nform x x\nd x = 0").unwrap_err(),
            PresentationError::DuplicateDeclaration { .. }
        ));
    }

    #[test]
    fn empty_table_serializes_to_declarations() {
        let p = parse_presentation("algebra a\nprolongation c e").unwrap();
        assert_eq!(serialize_presentation(&p), "algebra a\nprolongation c e\n");
    }

    #[test]
    fn round_trip_example() {
        let p = parse_presentation(H).unwrap();
        let s = serialize_presentation(&p);
        assert_eq!(parse_presentation(&s).unwrap(), p);
    }

    #[test]
    fn raw_vs_curated_diff() {
        let raw = parse_presentation("algebra r\nform x y\nd x = 2*x^y\nd y = 0").unwrap();
        let cur = parse_presentation("algebra c\nform x y\nd x = x^y\nd y = 0").unwrap();
        let d = presentation_diff(&raw, &cur);
        assert_eq!(d.changed_symbols(), vec!["x"]);
        assert!(d.to_json().contains("\"raw\": \"2*x^y\""));
    }

    fn random_presentation() -> impl Strategy<Value = String> {
        (1usize..5, 0usize..3).prop_flat_map(|(nk, nu)| {
            let n = nk + nu;
            let term = (0..n, 0..n, -4i64..=4, 1i64..=3);
            (Just((nk, nu)), prop::collection::vec(prop::collection::vec(term, 0..4), nk), prop::collection::vec(0..nk, 0..3))
        })
        .prop_map(|((nk, nu), eqs, ideal)| {
            let name = |i: usize| if i < nk { format!("w{i}") } else { format!("c{}", i - nk) };
            let mut s = String::from("algebra r\n");
            s += &format!("form {}\n", (0..nk).map(name).collect::<Vec<_>>().join(" "));
            if nu > 0 {
                s += &format!("prolongation {}\n", (nk..nk + nu).map(name).collect::<Vec<_>>().join(" "));
            }
            let mut id: Vec<usize> = ideal;
            id.sort();
            id.dedup();
            if !id.is_empty() {
                s += &format!("ideal {}\n", id.iter().map(|&i| name(i)).collect::<Vec<_>>().join(" "));
            }
            for (i, terms) in eqs.iter().enumerate() {
                let body: Vec<String> = terms.iter().map(|(a, b, p, q)| format!("{p}/{q}*{}^{}", name(*a), name(*b))).collect();
                let body = if body.is_empty() { "0".to_string() } else { body.join(" + ").replace("+ -", "- ") };
                s += &format!("d {} = {}\n", name(i), body);
            }
            s
        })
    }

    proptest! {
        #[test]
        fn round_trip_random(text in random_presentation()) {
            let p = parse_presentation(&text).unwrap();
            let s = serialize_presentation(&p);
            let q = parse_presentation(&s).unwrap();
            prop_assert_eq!(&q, &p);
            prop_assert_eq!(serialize_presentation(&q), s);
        }
    }
}
