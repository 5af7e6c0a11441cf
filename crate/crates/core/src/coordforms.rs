//! Differential forms in jet coordinates and the checks that tie explicit
//! Maurer–Cartan forms, closed 1-forms and extension solutions to a presentation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use serde::Serialize;

use crate::error::{CoordError, JetError};
use crate::exterior::{canonical_tuple, KForm};
use crate::jetcalc::parse::{differential_target, ExprSyntax};
use crate::jetcalc::JetExpr;
use crate::presentation::AlgebraPresentation;
use crate::scalars::{fmt_rational, parse_rational, Rational};

/// A form `Σ f · da₁∧…∧da_k` over a fixed, ordered atom universe.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordForm {
    universe: Arc<Vec<String>>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, JetExpr>,
}

impl CoordForm {
    pub fn zero(universe: &Arc<Vec<String>>, degree: usize) -> Self {
        CoordForm { universe: universe.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn function(universe: &Arc<Vec<String>>, f: JetExpr) -> Self {
        let mut out = Self::zero(universe, 0);
        out.add_term(&[], f);
        out
    }

    pub fn differential(universe: &Arc<Vec<String>>, atom: &str) -> Result<Self, CoordError> {
        let i = index(universe, atom)?;
        let mut out = Self::zero(universe, 1);
        out.add_term(&[i], JetExpr::int(1));
        Ok(out)
    }

    pub fn universe(&self) -> &Arc<Vec<String>> {
        &self.universe
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, JetExpr> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `d(atoms[0])∧…` (in the given order, with sign).
    pub fn coefficient(&self, atoms: &[&str]) -> Result<JetExpr, CoordError> {
        let idx: Vec<usize> = atoms.iter().map(|a| index(&self.universe, a)).collect::<Result<_, _>>()?;
        Ok(match canonical_tuple(&idx) {
            None => JetExpr::zero(),
            Some((odd, t)) => {
                let c = self.terms.get(&t).cloned().unwrap_or_default();
                if odd {
                    c.neg()
                } else {
                    c
                }
            }
        })
    }

    fn add_term(&mut self, tuple: &[usize], c: JetExpr) {
        let Some((odd, t)) = canonical_tuple(tuple) else { return };
        let c = if odd { c.neg() } else { c };
        let next = self.terms.get(&t).map(|v| v.add(&c)).unwrap_or(c);
        if next.is_zero() {
            self.terms.remove(&t);
        } else {
            self.terms.insert(t, next);
        }
    }

    fn check_compatible(&self, other: &CoordForm) -> Result<(), CoordError> {
        if !Arc::ptr_eq(&self.universe, &other.universe) && self.universe != other.universe {
            return Err(CoordError::UnknownAtom("forms over different atom universes".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &CoordForm) -> Result<CoordForm, CoordError> {
        self.check_compatible(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(crate::error::FormError::DegreeMismatch { left: self.degree, right: other.degree }.into());
        }
        let mut out = if self.is_zero() { CoordForm { degree: other.degree, ..self.clone() } } else { self.clone() };
        for (t, c) in &other.terms {
            out.add_term(t, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CoordForm) -> Result<CoordForm, CoordError> {
        self.add(&other.scale(&JetExpr::int(-1)))
    }

    pub fn scale(&self, f: &JetExpr) -> CoordForm {
        let mut out = Self::zero(&self.universe, self.degree);
        for (t, c) in &self.terms {
            out.add_term(t, c.mul(f));
        }
        out
    }

    pub fn wedge(&self, other: &CoordForm) -> Result<CoordForm, CoordError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.universe, self.degree + other.degree);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                let joined: Vec<usize> = ta.iter().chain(tb).copied().collect();
                out.add_term(&joined, ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn map_coefficients(&self, f: impl Fn(&JetExpr) -> Result<JetExpr, JetError>) -> Result<CoordForm, CoordError> {
        let mut out = Self::zero(&self.universe, self.degree);
        for (t, c) in &self.terms {
            out.add_term(t, f(c)?);
        }
        Ok(out)
    }
}

fn index(universe: &[String], atom: &str) -> Result<usize, CoordError> {
    universe.iter().position(|a| a == atom).ok_or_else(|| CoordError::UnknownAtom(atom.to_string()))
}

/// Exterior derivative in coordinates: `d(f·dA) = Σ_b ∂f/∂b · db∧dA`.
pub fn coord_d(f: &CoordForm) -> Result<CoordForm, CoordError> {
    let mut out = CoordForm::zero(&f.universe, f.degree + 1);
    for (t, c) in &f.terms {
        for b in c.atoms() {
            let i = index(&f.universe, &b)?;
            let mut tuple = vec![i];
            tuple.extend(t);
            out.add_term(&tuple, c.partial_derivative(&b));
        }
    }
    Ok(out)
}

/// Substitutes `atom := value`. When `atom` is a coordinate of the universe
/// this is a pullback: `d(atom)` becomes `d(value)`.
pub fn pullback(f: &CoordForm, atom: &str, value: &JetExpr) -> Result<CoordForm, CoordError> {
    let pos = f.universe.iter().position(|a| a == atom);
    let dv = match pos {
        Some(_) => Some(coord_d(&CoordForm::function(&f.universe, value.clone()))?),
        None => None,
    };
    let mut out = CoordForm::zero(&f.universe, f.degree);
    for (t, c) in &f.terms {
        let c = c.substitute(atom, value)?;
        let mut piece = CoordForm::function(&f.universe, c);
        for &i in t {
            let factor = match (&dv, pos) {
                (Some(dv), Some(p)) if p == i => dv.clone(),
                _ => {
                    let mut g = CoordForm::zero(&f.universe, 1);
                    g.add_term(&[i], JetExpr::int(1));
                    g
                }
            };
            piece = piece.wedge(&factor)?;
        }
        out = out.add(&piece)?;
    }
    Ok(out)
}

impl fmt::Display for CoordForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (t, c) in &self.terms {
            let basis: Vec<String> = t.iter().map(|&i| format!("d({})", self.universe[i])).collect();
            let basis = basis.join("^");
            let text = c.to_string();
            let (neg, body) = match c.as_single() {
                Some(_) => match text.strip_prefix('-') {
                    Some(b) => (true, b.to_string()),
                    None => (false, text.clone()),
                },
                None => (false, format!("({text})")),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if basis.is_empty() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{basis}")?;
            } else {
                write!(f, "{body}*{basis}")?;
            }
        }
        Ok(())
    }
}

/// Extension equation `d ω + λ ζ∧ω = Ω` with ω given in coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionSpec {
    pub name: String,
    pub lambda: Rational,
    pub zeta: String,
    pub cocycle: String,
    pub omega: CoordForm,
}

/// Coordinate expressions for part of a presentation's coframe.
#[derive(Clone, Debug, PartialEq)]
pub struct McFixture {
    pub name: String,
    pub presentation: AlgebraPresentation,
    pub universe: Arc<Vec<String>>,
    pub independents: Vec<String>,
    pub nonlocal: Option<String>,
    pub forms: BTreeMap<String, CoordForm>,
    pub substitutions: Vec<(String, JetExpr)>,
    pub extensions: Vec<ExtensionSpec>,
}

impl McFixture {
    pub fn form(&self, symbol: &str) -> Option<&CoordForm> {
        self.forms.get(symbol)
    }

    pub fn extension(&self, name: &str) -> Option<&ExtensionSpec> {
        self.extensions.iter().find(|e| e.name == name)
    }

    /// Evaluates an abstract form by replacing each coframe symbol with its coordinate expression.
    pub fn evaluate(&self, form: &KForm<Rational>) -> Result<CoordForm, CoordError> {
        let coframe = form.coframe();
        let mut out = CoordForm::zero(&self.universe, form.degree());
        for (t, c) in form.terms() {
            let mut piece = CoordForm::function(&self.universe, JetExpr::constant(c.clone()));
            for &i in t {
                let name = coframe.name(i);
                let f = self.forms.get(name).ok_or_else(|| {
                    CoordError::NotVerifiable(name.to_string(), format!("`{name}` has no coordinate expression"))
                })?;
                piece = piece.wedge(f)?;
            }
            out = out.add(&piece)?;
        }
        Ok(out)
    }

    /// Applies every substitution in declaration order.
    pub fn substitute(&self, f: &CoordForm) -> Result<CoordForm, CoordError> {
        let mut out = f.clone();
        for (atom, value) in &self.substitutions {
            out = pullback(&out, atom, value)?;
        }
        Ok(out)
    }

    /// Symbols whose structure equation only involves coordinately known forms.
    pub fn verifiable_equations(&self) -> Vec<String> {
        let coframe = self.presentation.coframe();
        coframe
            .symbols()
            .iter()
            .filter(|s| self.verify_structure_equation(&s.name).is_ok())
            .map(|s| s.name.clone())
            .collect()
    }

    /// `coord_d(symbol) − (right side of its structure equation)`, evaluated in coordinates.
    pub fn verify_structure_equation(&self, symbol: &str) -> Result<CoordForm, CoordError> {
        let p = &self.presentation;
        let i = p.coframe().index_of(symbol).ok_or_else(|| CoordError::UnknownItem(symbol.to_string()))?;
        let lhs = self
            .forms
            .get(symbol)
            .ok_or_else(|| CoordError::NotVerifiable(symbol.to_string(), "no coordinate expression".into()))?;
        let rhs = p
            .table()
            .get(i)
            .ok_or_else(|| CoordError::NotVerifiable(symbol.to_string(), "no structure equation".into()))?;
        let rhs = self.evaluate(rhs).map_err(|e| match e {
            CoordError::NotVerifiable(_, why) => CoordError::NotVerifiable(symbol.to_string(), format!("right side: {why}")),
            other => other,
        })?;
        coord_d(lhs)?.sub(&rhs)
    }

    /// `coord_d` of a 1-form given abstractly.
    pub fn verify_closed(&self, zeta: &KForm<Rational>) -> Result<CoordForm, CoordError> {
        coord_d(&self.evaluate(zeta)?)
    }

    /// `coord_d(ω) + λ ζ∧ω − Ω` after substitutions, with ζ, Ω evaluated in coordinates.
    pub fn verify_extension(&self, name: &str) -> Result<CoordForm, CoordError> {
        let ext = self.extension(name).ok_or_else(|| CoordError::UnknownItem(name.to_string()))?;
        let p = &self.presentation;
        let zeta = p.closed_mark(&ext.zeta).ok_or_else(|| CoordError::UnknownItem(ext.zeta.clone()))?;
        let cocycle = p.cocycle(&ext.cocycle).ok_or_else(|| CoordError::UnknownItem(ext.cocycle.clone()))?;
        verify_extension_in_coords(self, &ext.omega, &ext.lambda, zeta, cocycle)
    }
}

pub fn verify_structure_equation_in_coords(fx: &McFixture, symbol: &str) -> Result<CoordForm, CoordError> {
    fx.verify_structure_equation(symbol)
}

pub fn verify_closed_in_coords(fx: &McFixture, zeta: &KForm<Rational>) -> Result<CoordForm, CoordError> {
    fx.verify_closed(zeta)
}

pub fn verify_extension_in_coords(
    fx: &McFixture,
    omega: &CoordForm,
    lambda: &Rational,
    zeta: &KForm<Rational>,
    cocycle: &KForm<Rational>,
) -> Result<CoordForm, CoordError> {
    let omega = fx.substitute(omega)?;
    let zeta = fx.substitute(&fx.evaluate(zeta)?)?;
    let cocycle = fx.substitute(&fx.evaluate(cocycle)?)?;
    let deformed = zeta.wedge(&omega)?.scale(&JetExpr::constant(lambda.clone()));
    coord_d(&omega)?.add(&deformed)?.sub(&cocycle)
}

/// Covering relations read off from `μ (dq − Σ T_k dx^k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WahlquistEstabrook {
    pub nonlocal: String,
    /// Direction whose relation is the identity `q_k = q_k`, if any.
    pub fiber: Option<String>,
    pub relations: Vec<(String, JetExpr)>,
}

pub fn extract_wahlquist_estabrook(
    omega: &CoordForm,
    q: &str,
    independents: &[String],
) -> Result<WahlquistEstabrook, CoordError> {
    if omega.degree() != 1 {
        return Err(CoordError::NotWEShape(format!("degree {} form", omega.degree())));
    }
    let mu = omega.coefficient(&[q])?;
    if mu.is_zero() {
        return Err(CoordError::NotWEShape(format!("no d({q}) term")));
    }
    let inv = mu
        .pow(&-Rational::one())
        .map_err(|_| CoordError::NotWEShape(format!("coefficient of d({q}) is not a monomial: {mu}")))?;
    let mut out = WahlquistEstabrook { nonlocal: q.to_string(), fiber: None, relations: Vec::new() };
    for t in omega.terms().keys() {
        let atom = &omega.universe()[t[0]];
        if atom == q {
            continue;
        }
        if !independents.contains(atom) {
            return Err(CoordError::NotWEShape(format!("d({atom}) is not the differential of an independent variable")));
        }
    }
    for x in independents {
        if !omega.universe().contains(x) {
            continue;
        }
        let t = omega.coefficient(&[x])?.mul(&inv).neg();
        if t.is_zero() {
            continue;
        }
        if t == JetExpr::atom(&format!("{q}_{x}")) {
            if out.fiber.is_some() {
                return Err(CoordError::NotWEShape("more than one identity relation".into()));
            }
            out.fiber = Some(x.clone());
        } else {
            out.relations.push((x.clone(), t));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Equation,
    Closed,
    Extension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Fail { residual: String },
    NotVerifiable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordCheck {
    pub kind: CheckKind,
    pub name: String,
    pub outcome: CheckOutcome,
}

fn outcome(r: Result<CoordForm, CoordError>) -> Result<CheckOutcome, CoordError> {
    match r {
        Ok(res) if res.is_zero() => Ok(CheckOutcome::Pass),
        Ok(res) => Ok(CheckOutcome::Fail { residual: res.to_string() }),
        Err(CoordError::NotVerifiable(_, reason)) => Ok(CheckOutcome::NotVerifiable { reason }),
        Err(e) => Err(e),
    }
}

impl McFixture {
    pub fn check_equation(&self, symbol: &str) -> Result<CoordCheck, CoordError> {
        let o = outcome(self.verify_structure_equation(symbol))?;
        Ok(CoordCheck { kind: CheckKind::Equation, name: symbol.to_string(), outcome: o })
    }

    pub fn check_closed(&self, mark: &str) -> Result<CoordCheck, CoordError> {
        let zeta = self.presentation.closed_mark(mark).ok_or_else(|| CoordError::UnknownItem(mark.to_string()))?;
        let o = outcome(self.verify_closed(zeta))?;
        Ok(CoordCheck { kind: CheckKind::Closed, name: mark.to_string(), outcome: o })
    }

    pub fn check_extension(&self, name: &str) -> Result<CoordCheck, CoordError> {
        let o = outcome(self.verify_extension(name))?;
        Ok(CoordCheck { kind: CheckKind::Extension, name: name.to_string(), outcome: o })
    }

    /// Every structure equation of a known symbol, every closed mark, every extension.
    pub fn check_all(&self) -> Result<Vec<CoordCheck>, CoordError> {
        let p = &self.presentation;
        let mut out = Vec::new();
        for s in p.coframe().symbols().iter().filter(|s| s.known_differential) {
            out.push(self.check_equation(&s.name)?);
        }
        for m in p.closed_marks() {
            out.push(self.check_closed(&m.name)?);
        }
        for e in &self.extensions {
            out.push(self.check_extension(&e.name)?);
        }
        Ok(out)
    }
}

/// Parses a `.mcf` file:
///
/// ```text
/// fixture pkz
/// algebra pkz
/// independent t x y
/// nonlocal q
/// atoms t x y u_x a q
/// form xi1 = d(t)/a
/// subst q_x = u_xxy/u_xxx + u_xxx^(-1/2)/a
/// extension omega lambda=-1/4 zeta=zeta cocycle=omega : a^2*(d(q) - q_x*d(x))
/// ```
///
/// `lookup` resolves the algebra name to its presentation.
pub fn parse_mcf(text: &str, lookup: impl Fn(&str) -> Option<AlgebraPresentation>) -> Result<McFixture, CoordError> {
    let mut name = None;
    let mut presentation: Option<AlgebraPresentation> = None;
    let mut universe: Option<Arc<Vec<String>>> = None;
    let mut independents = Vec::new();
    let mut nonlocal = None;
    let mut forms = BTreeMap::new();
    let mut substitutions: Vec<(String, JetExpr)> = Vec::new();
    let mut extensions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let decl = |message: String| CoordError::Declaration { line, message };
        let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let words: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "fixture" => name = Some(rest.trim().to_string()),
            "algebra" => {
                let n = rest.trim();
                presentation = Some(lookup(n).ok_or_else(|| decl(format!("unknown algebra `{n}`")))?);
            }
            "independent" => independents = words.iter().map(|s| s.to_string()).collect(),
            "nonlocal" => nonlocal = Some(rest.trim().to_string()),
            "atoms" => {
                if universe.is_some() {
                    return Err(decl("atoms declared twice".into()));
                }
                let atoms: Vec<String> = words.iter().map(|s| s.to_string()).collect();
                for (i, a) in atoms.iter().enumerate() {
                    if atoms[..i].contains(a) {
                        return Err(decl(format!("atom `{a}` declared twice")));
                    }
                }
                universe = Some(Arc::new(atoms));
            }
            "form" | "subst" | "extension" => {
                let u = universe.clone().ok_or_else(|| decl("`atoms` must come before forms".into()))?;
                let p = presentation.as_ref().ok_or_else(|| decl("`algebra` must come before forms".into()))?;
                let sep = if keyword == "extension" { ':' } else { '=' };
                let at = trimmed.find(sep).ok_or_else(|| decl(format!("expected `{sep}`")))?;
                let head: Vec<&str> = trimmed[keyword.len()..at].split_whitespace().collect();
                let body = &trimmed[at + 1..];
                let column = indent + trimmed[..at + 1].chars().count();
                let known: Vec<String> = substitutions.iter().map(|(a, _)| a.clone()).collect();
                let resolve = |n: &str| {
                    if u.iter().any(|a| a == n) || known.iter().any(|a| a == n) {
                        Ok(n.to_string())
                    } else {
                        Err(format!("atom `{n}` is not declared"))
                    }
                };
                let syn = ExprSyntax { resolve: Some(&resolve), differentials: true, line, column };
                let expr = syn.parse(body)?;
                match keyword {
                    "form" => {
                        let [symbol] = head[..] else { return Err(decl("expected `form NAME = ...`".into())) };
                        if p.coframe().index_of(symbol).is_none() {
                            return Err(decl(format!("`{symbol}` is not a symbol of `{}`", p.name)));
                        }
                        if forms.contains_key(symbol) {
                            return Err(decl(format!("form `{symbol}` given twice")));
                        }
                        forms.insert(symbol.to_string(), one_form(&u, &expr).map_err(|m| decl(m))?);
                    }
                    "subst" => {
                        let [atom] = head[..] else { return Err(decl("expected `subst ATOM = ...`".into())) };
                        if expr.contains_atom(atom) {
                            return Err(decl(format!("`{atom}` is defined in terms of itself")));
                        }
                        if expr.atoms().iter().any(|a| differential_target(a).is_some()) {
                            return Err(decl("substituted values are functions, not forms".into()));
                        }
                        substitutions.push((atom.to_string(), expr));
                    }
                    _ => {
                        let (ext_name, opts) = head.split_first().ok_or_else(|| decl("expected an extension name".into()))?;
                        let mut lambda = None;
                        let mut zeta = None;
                        let mut cocycle = None;
                        for o in opts {
                            match o.split_once('=') {
                                Some(("lambda", v)) => {
                                    lambda = Some(parse_rational(v).map_err(|e| decl(e.to_string()))?)
                                }
                                Some(("zeta", v)) => zeta = Some(v.to_string()),
                                Some(("cocycle", v)) => cocycle = Some(v.to_string()),
                                _ => return Err(decl(format!("unknown option `{o}`"))),
                            }
                        }
                        let zeta = zeta.ok_or_else(|| decl("missing zeta=".into()))?;
                        let cocycle = cocycle.ok_or_else(|| decl("missing cocycle=".into()))?;
                        if p.closed_mark(&zeta).is_none() {
                            return Err(decl(format!("`{zeta}` is not a closed mark of `{}`", p.name)));
                        }
                        if p.cocycle(&cocycle).is_none() {
                            return Err(decl(format!("`{cocycle}` is not a cocycle of `{}`", p.name)));
                        }
                        extensions.push(ExtensionSpec {
                            name: ext_name.to_string(),
                            lambda: lambda.ok_or_else(|| decl("missing lambda=".into()))?,
                            zeta,
                            cocycle,
                            omega: one_form(&u, &expr).map_err(|m| decl(m))?,
                        });
                    }
                }
            }
            other => return Err(decl(format!("unknown keyword `{other}`"))),
        }
    }
    let missing = |what: &str| CoordError::Declaration { line: 0, message: format!("missing `{what}` line") };
    let universe = universe.ok_or_else(|| missing("atoms"))?;
    for x in &independents {
        if !universe.contains(x) {
            return Err(CoordError::UnknownAtom(x.clone()));
        }
    }
    Ok(McFixture {
        name: name.ok_or_else(|| missing("fixture"))?,
        presentation: presentation.ok_or_else(|| missing("algebra"))?,
        universe,
        independents,
        nonlocal,
        forms,
        substitutions,
        extensions,
    })
}

/// Splits an expression linear in `d(atom)` markers into a 1-form.
fn one_form(universe: &Arc<Vec<String>>, e: &JetExpr) -> Result<CoordForm, String> {
    let mut out = CoordForm::zero(universe, 1);
    for (m, c) in e.terms() {
        let diffs: Vec<(&String, &Rational)> = m.powers.iter().filter(|(a, _)| differential_target(a).is_some()).collect();
        let in_exp = m.exps.keys().chain(m.logs.keys()).any(|a| differential_target(a).is_some());
        if diffs.len() != 1 || !diffs[0].1.is_one() || in_exp {
            return Err(format!("term `{}` is not linear in exactly one differential", JetExpr::monomial(c.clone(), m.clone())));
        }
        let atom = differential_target(diffs[0].0).unwrap();
        let mut rest = m.clone();
        rest.powers.remove(diffs[0].0);
        let i = universe.iter().position(|a| a == atom).ok_or_else(|| format!("d({atom}) of an undeclared atom"))?;
        out.add_term(&[i], JetExpr::monomial(c.clone(), rest));
    }
    Ok(out)
}

/// Loads one of the shipped coordinate fixtures (`pkz` or `bf`).
pub fn load_fixture(name: &str) -> Result<McFixture, CoordError> {
    let text = crate::fixtures::embedded(&format!("{name}.mcf")).ok_or_else(|| CoordError::UnknownItem(name.to_string()))?;
    parse_mcf(text, crate::fixtures::presentation_by_name)
}

impl fmt::Display for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{0} + ({1})*{2}^{0} = {3}", self.name, fmt_rational(&self.lambda), self.zeta, self.cocycle)
    }
}
