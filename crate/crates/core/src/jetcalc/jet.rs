//! Jet coordinates, total derivatives, reduction modulo a solved PDE, and
//! compatibility of one-component differential coverings.

use crate::error::JetError;
use crate::jetcalc::expr::JetExpr;
use crate::jetcalc::parse::ExprSyntax;

/// Rewrite budget for reduction; exceeding it signals a mis-specified system.
pub const REWRITE_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomKind {
    Independent(usize),
    /// Derivative of the dependent variable with the given multi-index.
    Jet(Vec<u32>),
    /// Fiber-direction derivative of the nonlocal variable of the given order.
    Nonlocal(u32),
    Parameter,
    Defined,
}

/// Independent variables (single letters), one dependent variable, at most
/// one nonlocal variable with its fiber direction, parameters and defined atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSpace {
    independents: Vec<String>,
    dependent: String,
    nonlocal: Option<(String, usize)>,
    parameters: Vec<String>,
    definitions: Vec<(String, JetExpr)>,
}

impl JetSpace {
    pub fn new(independents: &[&str], dependent: &str) -> Result<Self, JetError> {
        let mut space = JetSpace {
            independents: Vec::new(),
            dependent: String::new(),
            nonlocal: None,
            parameters: Vec::new(),
            definitions: Vec::new(),
        };
        space.set_independents(independents.iter().map(|s| s.to_string()).collect(), 0)?;
        space.set_dependent(dependent, 0)?;
        Ok(space)
    }

    fn set_independents(&mut self, names: Vec<String>, line: usize) -> Result<(), JetError> {
        for (i, n) in names.iter().enumerate() {
            if n.chars().count() != 1 || !n.chars().all(|c| c.is_ascii_lowercase()) {
                return Err(decl(line, format!("independent variable `{n}` must be a single lowercase letter")));
            }
            if names[..i].contains(n) {
                return Err(decl(line, format!("independent variable `{n}` declared twice")));
            }
        }
        if names.is_empty() {
            return Err(decl(line, "no independent variables".into()));
        }
        self.independents = names;
        Ok(())
    }

    fn set_dependent(&mut self, name: &str, line: usize) -> Result<(), JetError> {
        if !is_plain_ident(name) || self.independents.iter().any(|x| x == name) {
            return Err(decl(line, format!("invalid dependent variable `{name}`")));
        }
        self.dependent = name.to_string();
        Ok(())
    }

    pub fn with_nonlocal(mut self, name: &str, fiber: &str) -> Result<Self, JetError> {
        let f = self.direction(fiber)?;
        self.declare_name(name, 0)?;
        self.nonlocal = Some((name.to_string(), f));
        Ok(self)
    }

    pub fn with_parameter(mut self, name: &str) -> Result<Self, JetError> {
        self.declare_name(name, 0)?;
        self.parameters.push(name.to_string());
        Ok(self)
    }

    /// Declares `name := value`; the value may only use atoms declared earlier.
    pub fn with_definition(mut self, name: &str, value: JetExpr) -> Result<Self, JetError> {
        self.add_definition(name, value, 0)?;
        Ok(self)
    }

    fn add_definition(&mut self, name: &str, value: JetExpr, line: usize) -> Result<(), JetError> {
        for a in value.atoms() {
            self.classify(&a).map_err(|e| decl(line, e.to_string()))?;
        }
        self.declare_name(name, line)?;
        let value = self.expand(&value)?;
        self.definitions.push((name.to_string(), value));
        Ok(())
    }

    fn declare_name(&self, name: &str, line: usize) -> Result<(), JetError> {
        if !is_plain_ident(name) || matches!(name, "exp" | "ln" | "sqrt" | "d") {
            return Err(decl(line, format!("invalid name `{name}`")));
        }
        if self.classify(name).is_ok() || self.nonlocal.as_ref().is_some_and(|(q, _)| name.starts_with(&format!("{q}_"))) {
            return Err(decl(line, format!("`{name}` is already declared")));
        }
        Ok(())
    }

    pub fn independents(&self) -> &[String] {
        &self.independents
    }

    pub fn dependent(&self) -> &str {
        &self.dependent
    }

    pub fn nonlocal(&self) -> Option<&str> {
        self.nonlocal.as_ref().map(|(q, _)| q.as_str())
    }

    pub fn fiber(&self) -> Option<usize> {
        self.nonlocal.as_ref().map(|(_, f)| *f)
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn definitions(&self) -> &[(String, JetExpr)] {
        &self.definitions
    }

    pub fn direction(&self, name: &str) -> Result<usize, JetError> {
        self.independents.iter().position(|x| x == name).ok_or_else(|| JetError::NotIndependent(name.to_string()))
    }

    fn letters(&self, counts: &[u32]) -> String {
        let mut s = String::new();
        for (i, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                s.push_str(&self.independents[i]);
            }
        }
        s
    }

    /// Canonical name of the jet coordinate with the given multi-index.
    pub fn jet_name(&self, multi: &[u32]) -> String {
        let l = self.letters(multi);
        if l.is_empty() {
            self.dependent.clone()
        } else {
            format!("{}_{l}", self.dependent)
        }
    }

    /// Name of the fiber-direction derivative of the nonlocal variable.
    pub fn nonlocal_name(&self, order: u32) -> Option<String> {
        let (q, f) = self.nonlocal.as_ref()?;
        let mut counts = vec![0; self.independents.len()];
        counts[*f] = order;
        let l = self.letters(&counts);
        Some(if l.is_empty() { q.clone() } else { format!("{q}_{l}") })
    }

    /// Multi-index of `base_letters` (e.g. `"xxt"`), if every letter is an independent variable.
    fn multi_index(&self, letters: &str) -> Option<Vec<u32>> {
        let mut counts = vec![0u32; self.independents.len()];
        for c in letters.chars() {
            let i = self.independents.iter().position(|x| x.starts_with(c))?;
            counts[i] += 1;
        }
        Some(counts)
    }

    pub fn classify(&self, name: &str) -> Result<AtomKind, JetError> {
        if let Some(i) = self.independents.iter().position(|x| x == name) {
            return Ok(AtomKind::Independent(i));
        }
        if self.parameters.iter().any(|p| p == name) {
            return Ok(AtomKind::Parameter);
        }
        if self.definitions.iter().any(|(d, _)| d == name) {
            return Ok(AtomKind::Defined);
        }
        if name == self.dependent {
            return Ok(AtomKind::Jet(vec![0; self.independents.len()]));
        }
        if let Some(rest) = name.strip_prefix(&format!("{}_", self.dependent)) {
            if let Some(m) = self.multi_index(rest).filter(|_| !rest.is_empty()) {
                return Ok(AtomKind::Jet(m));
            }
        }
        if let Some((q, f)) = &self.nonlocal {
            if name == q {
                return Ok(AtomKind::Nonlocal(0));
            }
            if let Some(rest) = name.strip_prefix(&format!("{q}_")) {
                if let Some(m) = self.multi_index(rest).filter(|_| !rest.is_empty()) {
                    if m.iter().enumerate().all(|(i, &c)| i == *f || c == 0) {
                        return Ok(AtomKind::Nonlocal(m[*f]));
                    }
                    return Err(JetError::NonlocalOffFiber(name.to_string()));
                }
            }
        }
        Err(JetError::UnsupportedShape(format!("undeclared atom `{name}`")))
    }

    /// Canonical spelling of an atom name (`u_xt` becomes `u_tx`).
    pub fn canonical(&self, name: &str) -> Result<String, JetError> {
        Ok(match self.classify(name)? {
            AtomKind::Jet(m) => self.jet_name(&m),
            AtomKind::Nonlocal(k) => self.nonlocal_name(k).unwrap(),
            _ => name.to_string(),
        })
    }

    /// Replaces every defined atom by its value.
    pub fn expand(&self, e: &JetExpr) -> Result<JetExpr, JetError> {
        let mut out = e.clone();
        for (name, value) in self.definitions.iter().rev() {
            if out.contains_atom(name) {
                out = out.substitute(name, value)?;
            }
        }
        Ok(out)
    }

    /// Parses an expression, canonicalising jet names and rejecting undeclared atoms.
    pub fn parse(&self, text: &str) -> Result<JetExpr, JetError> {
        self.parse_at(text, 1, 0)
    }

    fn parse_at(&self, text: &str, line: usize, column: usize) -> Result<JetExpr, JetError> {
        let resolve = |n: &str| self.canonical(n).map_err(|e| e.to_string());
        ExprSyntax { resolve: Some(&resolve), differentials: false, line, column }.parse(text)
    }
}

fn decl(line: usize, message: String) -> JetError {
    JetError::Declaration { line, message }
}

fn is_plain_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic()) && cs.all(|c| c.is_alphanumeric() || c == '_')
}

/// The equation solved for one jet; every jet whose multi-index dominates
/// the solved one is eliminated by the prolonged solved form.
#[derive(Clone, Debug, PartialEq)]
pub struct EquationReduction {
    pub solved: String,
    pub multi: Vec<u32>,
    pub rhs: JetExpr,
}

impl EquationReduction {
    pub fn eliminates(&self, multi: &[u32]) -> bool {
        multi.iter().zip(&self.multi).all(|(a, b)| a >= b)
    }
}

/// Flat relations `q_k = T_k` for every direction except the fiber.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringSpec {
    pub nonlocal: String,
    pub fiber: String,
    pub relations: Vec<(String, JetExpr)>,
}

impl CoveringSpec {
    pub fn relation(&self, direction: &str) -> Option<&JetExpr> {
        self.relations.iter().find(|(d, _)| d == direction).map(|(_, e)| e)
    }
}

/// A jet space with an optional equation and an optional covering.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSystem {
    pub space: JetSpace,
    pub reduction: Option<EquationReduction>,
    pub covering: Option<CoveringSpec>,
    /// Order in which the prolonged solved form applies total derivatives.
    pub prolongation_order: Vec<usize>,
}

impl JetSystem {
    pub fn new(space: JetSpace) -> Self {
        let n = space.independents.len();
        JetSystem { space, reduction: None, covering: None, prolongation_order: (0..n).collect() }
    }

    /// Sets the reduction `solved = rhs`.
    pub fn with_reduction(mut self, solved: &str, rhs: JetExpr) -> Result<Self, JetError> {
        self.set_reduction(solved, rhs, 0)?;
        Ok(self)
    }

    fn set_reduction(&mut self, solved: &str, rhs: JetExpr, line: usize) -> Result<(), JetError> {
        let multi = match self.space.classify(solved) {
            Ok(AtomKind::Jet(m)) => m,
            _ => return Err(decl(line, format!("`{solved}` is not a jet of `{}`", self.space.dependent))),
        };
        let red = EquationReduction { solved: self.space.jet_name(&multi), multi, rhs: self.space.expand(&rhs)? };
        for a in red.rhs.atoms() {
            match self.space.classify(&a)? {
                AtomKind::Jet(m) if red.eliminates(&m) => {
                    return Err(decl(line, format!("right side contains the eliminated jet `{a}`")))
                }
                AtomKind::Nonlocal(_) => return Err(decl(line, format!("right side contains the nonlocal atom `{a}`"))),
                _ => {}
            }
        }
        self.reduction = Some(red);
        Ok(())
    }

    /// Sets the covering relations; they must cover every non-fiber direction exactly once.
    pub fn with_covering(mut self, relations: Vec<(String, JetExpr)>) -> Result<Self, JetError> {
        self.set_covering(relations, 0)?;
        Ok(self)
    }

    fn set_covering(&mut self, relations: Vec<(String, JetExpr)>, line: usize) -> Result<(), JetError> {
        let (q, f) = self.space.nonlocal.clone().ok_or_else(|| decl(line, "covering without a nonlocal variable".into()))?;
        let mut rels = Vec::new();
        for (dir, t) in relations {
            let d = self.space.direction(&dir)?;
            if d == f {
                return Err(decl(line, format!("relation given for the fiber direction `{dir}`")));
            }
            if rels.iter().any(|(x, _): &(String, JetExpr)| *x == dir) {
                return Err(decl(line, format!("two relations for direction `{dir}`")));
            }
            rels.push((dir, self.space.expand(&t)?));
        }
        for (i, x) in self.space.independents.iter().enumerate() {
            if i != f && !rels.iter().any(|(d, _)| d == x) {
                return Err(decl(line, format!("no covering relation for direction `{x}`")));
            }
        }
        self.covering = Some(CoveringSpec { nonlocal: q, fiber: self.space.independents[f].clone(), relations: rels });
        Ok(())
    }

    /// Total derivative in direction `dir`; reduced modulo the equation when `reduce` is set.
    pub fn total_derivative(&self, e: &JetExpr, dir: &str, reduce: bool) -> Result<JetExpr, JetError> {
        let d = self.space.direction(dir)?;
        self.total(&self.space.expand(e)?, d, reduce, 0)
    }

    pub fn reduce(&self, e: &JetExpr) -> Result<JetExpr, JetError> {
        self.reduce_at(&self.space.expand(e)?, 0)
    }

    fn total(&self, e: &JetExpr, dir: usize, reduce: bool, depth: usize) -> Result<JetExpr, JetError> {
        let mut out = JetExpr::zero();
        for a in e.atoms() {
            let da = self.atom_derivative(&a, dir, reduce, depth)?;
            if !da.is_zero() {
                out = out.add(&e.partial_derivative(&a).mul(&da));
            }
        }
        if reduce {
            out = self.reduce_at(&out, depth)?;
        }
        Ok(out)
    }

    fn atom_derivative(&self, atom: &str, dir: usize, reduce: bool, depth: usize) -> Result<JetExpr, JetError> {
        Ok(match self.space.classify(atom)? {
            AtomKind::Independent(i) => JetExpr::int((i == dir) as i64),
            AtomKind::Parameter => JetExpr::zero(),
            AtomKind::Defined => return Err(JetError::UnsupportedShape(format!("unexpanded defined atom `{atom}`"))),
            AtomKind::Jet(mut m) => {
                m[dir] += 1;
                JetExpr::atom(&self.space.jet_name(&m))
            }
            AtomKind::Nonlocal(order) => {
                let f = self.space.fiber().unwrap();
                if dir == f {
                    JetExpr::atom(&self.space.nonlocal_name(order + 1).unwrap())
                } else {
                    let direction = &self.space.independents[dir];
                    let missing = || JetError::MissingCoveringRelation { atom: atom.to_string(), direction: direction.clone() };
                    let t = self.covering.as_ref().and_then(|c| c.relation(direction)).ok_or_else(missing)?;
                    let mut v = t.clone();
                    for _ in 0..order {
                        v = self.total(&v, f, reduce, depth + 1)?;
                    }
                    if reduce && order == 0 {
                        v = self.reduce_at(&v, depth + 1)?;
                    }
                    v
                }
            }
        })
    }

    fn reduce_at(&self, e: &JetExpr, depth: usize) -> Result<JetExpr, JetError> {
        let Some(red) = &self.reduction else { return Ok(e.clone()) };
        let mut cur = e.clone();
        for _ in 0..REWRITE_LIMIT {
            let mut changed = false;
            for a in cur.atoms() {
                if let AtomKind::Jet(m) = self.space.classify(&a)? {
                    if red.eliminates(&m) {
                        let v = self.prolonged(red, &m, depth + 1)?;
                        cur = cur.substitute(&a, &v)?;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(cur);
            }
        }
        Err(JetError::NonTermination(REWRITE_LIMIT))
    }

    /// The solved form differentiated up to the jet `multi`, reduced.
    fn prolonged(&self, red: &EquationReduction, multi: &[u32], depth: usize) -> Result<JetExpr, JetError> {
        if depth > REWRITE_LIMIT {
            return Err(JetError::NonTermination(REWRITE_LIMIT));
        }
        let step = self.prolongation_order.iter().copied().find(|&k| multi[k] > red.multi[k]);
        match step {
            None => Ok(red.rhs.clone()),
            Some(k) => {
                let mut prev = multi.to_vec();
                prev[k] -= 1;
                let base = self.prolonged(red, &prev, depth + 1)?;
                self.total(&base, k, true, depth + 1)
            }
        }
    }

    /// Directions in file order: covered directions as listed, then the fiber.
    fn covering_directions(&self) -> Vec<(String, JetExpr)> {
        let Some(c) = &self.covering else { return Vec::new() };
        let mut dirs = c.relations.clone();
        dirs.push((c.fiber.clone(), JetExpr::atom(&self.space.nonlocal_name(1).unwrap())));
        dirs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairResidual {
    pub primary: String,
    pub secondary: String,
    pub off_shell: JetExpr,
    pub on_shell: JetExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringReport {
    pub pairs: Vec<PairResidual>,
    pub pass: bool,
}

/// For directions `i < j` (file order), `D_j(T_i) - D_i(T_j)` computed
/// without the equation, and its reduction modulo the equation.
pub fn covering_compatibility_residual(sys: &JetSystem) -> Result<CoveringReport, JetError> {
    if sys.covering.is_none() {
        return Err(decl(0, "no covering relations".into()));
    }
    let dirs = sys.covering_directions();
    let mut pairs = Vec::new();
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let (pi, ti) = &dirs[i];
            let (pj, tj) = &dirs[j];
            let off = sys.total_derivative(ti, pj, false)?.sub(&sys.total_derivative(tj, pi, false)?);
            let on = sys.reduce(&off)?;
            pairs.push(PairResidual { primary: pi.clone(), secondary: pj.clone(), off_shell: off, on_shell: on });
        }
    }
    let pass = pairs.iter().all(|p| p.on_shell.is_zero());
    Ok(CoveringReport { pairs, pass })
}

/// Parses a `.pde` file:
///
/// ```text
/// independent t x y
/// dependent u
/// nonlocal q fiber x
/// parameter a
/// define b = exp(u_y)
/// solve u_yy = u_tx + u_x*u_xx
/// q_t = 1/3*q_x^3 - u_x*q_x - u_y
/// ```
pub fn parse_pde(text: &str) -> Result<JetSystem, JetError> {
    let mut independents: Option<Vec<String>> = None;
    let mut sys: Option<JetSystem> = None;
    let mut relations: Vec<(String, JetExpr)> = Vec::new();
    let mut relations_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let mut words = trimmed.split_whitespace();
        let keyword = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        match keyword {
            "independent" => {
                if independents.is_some() {
                    return Err(decl(line, "independent variables declared twice".into()));
                }
                independents = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            "dependent" => {
                let ind = independents.clone().ok_or_else(|| decl(line, "`independent` must come first".into()))?;
                if sys.is_some() || rest.len() != 1 {
                    return Err(decl(line, "expected exactly one `dependent` declaration with one name".into()));
                }
                let mut space = JetSpace {
                    independents: Vec::new(),
                    dependent: String::new(),
                    nonlocal: None,
                    parameters: Vec::new(),
                    definitions: Vec::new(),
                };
                space.set_independents(ind, line)?;
                space.set_dependent(rest[0], line)?;
                sys = Some(JetSystem::new(space));
            }
            _ => {
                let s = sys.as_mut().ok_or_else(|| decl(line, "`independent` and `dependent` must come first".into()))?;
                match keyword {
                    "nonlocal" => {
                        if rest.len() != 3 || rest[1] != "fiber" {
                            return Err(decl(line, "expected `nonlocal NAME fiber VAR`".into()));
                        }
                        if s.space.nonlocal.is_some() {
                            return Err(decl(line, "only one nonlocal variable is supported".into()));
                        }
                        let f = s.space.direction(rest[2]).map_err(|e| decl(line, e.to_string()))?;
                        s.space.declare_name(rest[0], line)?;
                        s.space.nonlocal = Some((rest[0].to_string(), f));
                    }
                    "parameter" => {
                        for p in rest {
                            s.space.declare_name(p, line)?;
                            s.space.parameters.push(p.to_string());
                        }
                    }
                    "define" | "solve" => {
                        let (lhs, rhs, col) = split_equation(trimmed, keyword.len(), indent, line)?;
                        let value = s.space.parse_at(rhs, line, col)?;
                        if keyword == "define" {
                            s.space.add_definition(lhs, value, line)?;
                        } else {
                            if s.reduction.is_some() {
                                return Err(decl(line, "only one `solve` line is supported".into()));
                            }
                            s.set_reduction(lhs, value, line)?;
                        }
                    }
                    _ => {
                        let skip = if keyword == "cover" { keyword.len() } else { 0 };
                        let (lhs, rhs, col) = split_equation(trimmed, skip, indent, line)?;
                        let q = s.space.nonlocal().ok_or_else(|| decl(line, format!("unknown keyword `{keyword}`")))?.to_string();
                        let dir = lhs
                            .strip_prefix(&format!("{q}_"))
                            .filter(|d| s.space.direction(d).is_ok())
                            .ok_or_else(|| decl(line, format!("expected `{q}_VAR = ...`, found `{lhs}`")))?;
                        relations.push((dir.to_string(), s.space.parse_at(rhs, line, col)?));
                        relations_line = line;
                    }
                }
            }
        }
    }
    let mut sys = sys.ok_or_else(|| decl(0, "missing `independent`/`dependent` declarations".into()))?;
    if !relations.is_empty() {
        sys.set_covering(relations, relations_line)?;
    }
    Ok(sys)
}

/// Splits `[keyword] LHS = RHS`, returning the RHS and its column offset.
fn split_equation(trimmed: &str, skip: usize, indent: usize, line: usize) -> Result<(&str, &str, usize), JetError> {
    let body = &trimmed[skip..];
    let eq = body.find('=').ok_or_else(|| decl(line, "expected `=`".into()))?;
    let lhs = body[..eq].trim();
    let rhs = &body[eq + 1..];
    let col = indent + trimmed[..skip + eq + 1].chars().count();
    Ok((lhs, rhs, col))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::jetcalc::parse::parse_expr;
    use proptest::prelude::*;

    fn e(s: &str) -> JetExpr {
        parse_expr(s).unwrap()
    }

    fn pkz() -> JetSystem {
        parse_pde(fixtures::PKZ_COVERING_PDE).unwrap()
    }

    fn bf() -> JetSystem {
        parse_pde(fixtures::BF_COVERING_PDE).unwrap()
    }

    #[test]
    fn canonical_names() {
        let s = pkz();
        assert_eq!(s.space.canonical("u_yxt").unwrap(), "u_txy");
        assert_eq!(s.space.classify("q_xx").unwrap(), AtomKind::Nonlocal(2));
        assert!(matches!(s.space.classify("q_y"), Err(JetError::NonlocalOffFiber(_))));
        assert!(matches!(s.space.classify("v_x"), Err(JetError::UnsupportedShape(_))));
    }

    #[test]
    fn total_derivative_examples() {
        let s = pkz();
        assert_eq!(s.total_derivative(&e("u_x"), "x", false).unwrap(), e("u_xx"));
        assert_eq!(s.total_derivative(&e("t*u"), "t", false).unwrap(), e("u + t*u_t"));
        // D_x(q_y) = D_x(T_y)
        assert_eq!(s.total_derivative(&e("1/2*q_x^2 - u_x"), "x", true).unwrap(), e("q_x*q_xx - u_xx"));
        let b = bf();
        // D_y(q_x) with q_x = T_x
        let got = b.total_derivative(&e("-exp(u_y - q_y)"), "y", true).unwrap();
        assert_eq!(got, e("-exp(u_y - q_y)*(u_yy - q_yy)"));
        let q = b.total_derivative(&e("q"), "x", false).unwrap();
        assert_eq!(q, e("-exp(u_y - q_y)"));
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(pkz().reduce(&e("u_yy")).unwrap(), e("u_tx + u_x*u_xx"));
        assert_eq!(bf().reduce(&e("u_tx")).unwrap(), e("exp(u_y)*u_yy"));
        assert_eq!(pkz().reduce(&e("u_x")).unwrap(), e("u_x"));
        assert_eq!(bf().reduce(&e("u_x")).unwrap(), e("u_x"));
        assert_eq!(pkz().reduce(&e("u_yyy")).unwrap(), e("u_txy + u_xy*u_xx + u_x*u_xxy"));
        let ttxx = bf().reduce(&e("u_ttxx")).unwrap();
        assert!(ttxx.atoms().iter().all(|a| !(a.contains('t') && a.contains('x'))), "{ttxx}");
    }

    #[test]
    fn covering_residuals() {
        let r = covering_compatibility_residual(&pkz()).unwrap();
        assert!(r.pass);
        let ty = r.pairs.iter().find(|p| p.primary == "t" && p.secondary == "y").unwrap();
        assert_eq!(ty.off_shell, e("u_tx + u_x*u_xx - u_yy"));
        let r = covering_compatibility_residual(&bf()).unwrap();
        assert!(r.pass);
        let tx = r.pairs.iter().find(|p| p.primary == "t" && p.secondary == "x").unwrap();
        assert_eq!(tx.off_shell, e("u_tx - exp(u_y)*u_yy"));
        for p in &r.pairs {
            assert!(p.on_shell.is_zero());
        }
    }

    #[test]
    fn broken_and_gradient_coverings() {
        let broken = parse_pde(fixtures::BROKEN_PKZ_COVERING_PDE).unwrap();
        let r = covering_compatibility_residual(&broken).unwrap();
        assert!(!r.pass);
        let bad: Vec<String> = r.pairs.iter().filter(|p| !p.on_shell.is_zero()).map(|p| p.on_shell.to_string()).collect();
        assert_eq!(bad, vec!["-2*q_x*u_xy + 2*u_tx + 2*u_x*u_xx"]);
        let grad = parse_pde(fixtures::GRADIENT_COVERING_PDE).unwrap();
        let r = covering_compatibility_residual(&grad).unwrap();
        assert!(r.pass);
        assert!(r.pairs.iter().all(|p| p.off_shell.is_zero()));
    }

    #[test]
    fn pde_errors() {
        let missing = "independent t x y\ndependent u\nnonlocal q fiber x\nq_t = q_x\n";
        assert!(matches!(parse_pde(missing), Err(JetError::Declaration { line: 4, .. })));
        let bad_rhs = "independent t x\ndependent u\nsolve u_x = u_xx\n";
        assert!(matches!(parse_pde(bad_rhs), Err(JetError::Declaration { line: 3, .. })));
        let syntax = "independent t x\ndependent u\nsolve u_x = u_t +* 2\n";
        match parse_pde(syntax) {
            Err(JetError::Syntax { line: 3, column: 18, .. }) => {}
            other => panic!("{other:?}"),
        }
        let off_fiber = "independent t x y\ndependent u\nnonlocal q fiber x\nq_t = q_y\nq_y = u\n";
        assert!(matches!(parse_pde(off_fiber), Err(JetError::Syntax { line: 4, .. })));
        let missing_relation = "independent t x\ndependent u\nnonlocal q fiber x\n";
        let sys = parse_pde(missing_relation).unwrap();
        assert!(matches!(
            sys.total_derivative(&e("q"), "t", false),
            Err(JetError::MissingCoveringRelation { .. })
        ));
    }

    #[test]
    fn defined_atoms_expand() {
        let text = "independent t x y\ndependent u\nnonlocal q fiber y\ndefine a = u_yy*exp(q_y)\nq_t = u_t + a/u_yy\nq_x = -exp(u_y)*u_yy/a\nsolve u_tx = exp(u_y)*u_yy\n";
        let sys = parse_pde(text).unwrap();
        assert_eq!(sys.covering.as_ref().unwrap(), bf().covering.as_ref().unwrap());
        assert!(covering_compatibility_residual(&sys).unwrap().pass);
    }

    #[test]
    fn non_termination_is_caught() {
        let space = JetSpace::new(&["t", "x"], "u").unwrap();
        let mut sys = JetSystem::new(space);
        // A deliberately inconsistent reduction slipped past validation.
        sys.reduction = Some(EquationReduction { solved: "u_x".into(), multi: vec![0, 1], rhs: e("u_xx") });
        assert!(matches!(sys.reduce(&e("u_x")), Err(JetError::NonTermination(_))));
    }

    fn arb_u_expr() -> impl Strategy<Value = JetExpr> {
        let atoms = ["u", "u_t", "u_x", "u_y", "u_tx", "u_xy", "u_xxy"];
        prop::collection::vec((prop::sample::select(atoms.to_vec()), prop::sample::select(vec!["u", "u_t", "u_x", "u_y"]), -3i64..=3, 1i64..=3), 1..4)
            .prop_map(|terms| {
                terms.iter().fold(JetExpr::zero(), |acc, (a, b, c, p)| {
                    let m = JetExpr::atom(a).pow_u32(*p as u32).mul(&JetExpr::atom(b).exp().unwrap());
                    acc.add(&m.scale(&crate::scalars::rat(*c, 1)))
                })
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn total_derivatives_commute(x in arb_u_expr()) {
            let s = pkz();
            let xy = s.total_derivative(&s.total_derivative(&x, "x", false).unwrap(), "y", false).unwrap();
            let yx = s.total_derivative(&s.total_derivative(&x, "y", false).unwrap(), "x", false).unwrap();
            prop_assert_eq!(xy, yx);
        }

        #[test]
        fn reduction_is_order_independent(x in arb_u_expr(), order in Just(vec![0usize, 1, 2]).prop_shuffle(), extra in 0usize..2) {
            for base in [pkz(), bf()] {
                let mut shuffled = base.clone();
                shuffled.prolongation_order = order.clone();
                let mut lifted = x.clone();
                for _ in 0..extra {
                    lifted = base.total_derivative(&lifted, "y", false).unwrap();
                    lifted = base.total_derivative(&lifted, "t", false).unwrap();
                }
                lifted = base.total_derivative(&lifted, "x", false).unwrap();
                prop_assert_eq!(base.reduce(&lifted).unwrap(), shuffled.reduce(&lifted).unwrap());
            }
        }
    }
}
