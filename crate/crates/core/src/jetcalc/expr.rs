//! Canonical expressions: finite sums of
//! `c · Π atom^{p} · Π ln(atom)^{n} · exp(Σ r·atom)` with rational `c`, `p`, `r`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::JetError;
use crate::scalars::{fmt_rational, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub powers: BTreeMap<String, Rational>,
    pub logs: BTreeMap<String, u32>,
    pub exps: BTreeMap<String, Rational>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn atom(name: &str) -> Self {
        let mut m = Monomial::default();
        m.powers.insert(name.to_string(), Rational::one());
        m
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty() && self.logs.is_empty() && self.exps.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (a, p) in &other.powers {
            add_entry(&mut out.powers, a, p);
        }
        for (a, n) in &other.logs {
            *out.logs.entry(a.clone()).or_insert(0) += n;
        }
        for (a, r) in &other.exps {
            add_entry(&mut out.exps, a, r);
        }
        out
    }

    pub fn atoms(&self) -> impl Iterator<Item = &String> {
        self.powers.keys().chain(self.logs.keys()).chain(self.exps.keys())
    }

    fn mentions(&self, atom: &str) -> bool {
        self.powers.contains_key(atom) || self.logs.contains_key(atom) || self.exps.contains_key(atom)
    }
}

fn add_entry(map: &mut BTreeMap<String, Rational>, key: &str, v: &Rational) {
    let next = map.get(key).cloned().unwrap_or_else(Rational::zero) + v;
    if next.is_zero() {
        map.remove(key);
    } else {
        map.insert(key.to_string(), next);
    }
}

/// Exact `c^p` for rational `c` and `p`, when it is rational.
pub fn rational_pow(c: &Rational, p: &Rational) -> Option<Rational> {
    if p.is_integer() {
        let e = p.to_integer().to_i32()?;
        if c.is_zero() && e < 0 {
            return None;
        }
        return Some(num_traits::pow::Pow::pow(c, e));
    }
    let d = p.denom().to_u32()?;
    let n = p.numer().to_i32()?;
    if c.is_negative() {
        return None;
    }
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.nth_root(d);
        (num_traits::pow::Pow::pow(&r, d) == *x).then_some(r)
    };
    let base = Rational::new(root(c.numer())?, root(c.denom())?);
    if base.is_zero() && n < 0 {
        return None;
    }
    Some(num_traits::pow::Pow::pow(&base, n))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct JetExpr {
    terms: BTreeMap<Monomial, Rational>,
}

impl JetExpr {
    pub fn zero() -> Self {
        JetExpr::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn atom(name: &str) -> Self {
        Self::monomial(Rational::one(), Monomial::atom(name))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut e = JetExpr::zero();
        e.add_monomial(m, c);
        e
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the expression has no atoms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.iter().next().filter(|(m, _)| m.is_one()).map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn as_single(&self) -> Option<(&Monomial, &Rational)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }

    fn add_monomial(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let next = self.terms.get(&m).cloned().unwrap_or_else(Rational::zero) + c;
        if next.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, next);
        }
    }

    pub fn add(&self, other: &JetExpr) -> JetExpr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_monomial(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &JetExpr) -> JetExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> JetExpr {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> JetExpr {
        if c.is_zero() {
            return JetExpr::zero();
        }
        JetExpr { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &JetExpr) -> JetExpr {
        let mut out = JetExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_monomial(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow_u32(&self, n: u32) -> JetExpr {
        let mut out = JetExpr::int(1);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Rational power: expands non-negative integer powers, otherwise the
    /// base must be a single monomial without logarithms.
    pub fn pow(&self, p: &Rational) -> Result<JetExpr, JetError> {
        if p.is_integer() && !p.is_negative() {
            let n = p.to_integer().to_u32().ok_or_else(|| JetError::UnsupportedShape("exponent too large".into()))?;
            return Ok(self.pow_u32(n));
        }
        let (m, c) = self
            .as_single()
            .ok_or_else(|| JetError::UnsupportedShape(format!("({self})^({}) of a sum", fmt_rational(p))))?;
        if !m.logs.is_empty() {
            return Err(JetError::UnsupportedShape(format!("({self})^({}) of a logarithm", fmt_rational(p))));
        }
        let c = rational_pow(c, p)
            .ok_or_else(|| JetError::UnsupportedShape(format!("irrational constant ({})^({})", fmt_rational(c), fmt_rational(p))))?;
        let scale = |map: &BTreeMap<String, Rational>| map.iter().map(|(a, r)| (a.clone(), r * p)).collect();
        let m = Monomial { powers: scale(&m.powers), logs: BTreeMap::new(), exps: scale(&m.exps) };
        Ok(JetExpr::monomial(c, m))
    }

    /// Division by a single monomial.
    pub fn div(&self, other: &JetExpr) -> Result<JetExpr, JetError> {
        if other.terms.len() != 1 {
            return Err(JetError::UnsupportedShape(format!("division by the sum {other}")));
        }
        Ok(self.mul(&other.pow(&-Rational::one())?))
    }

    /// `exp(self)`, for `self` a rational combination of atoms and logarithms of atoms.
    pub fn exp(&self) -> Result<JetExpr, JetError> {
        let mut m = Monomial::one();
        for (mono, c) in &self.terms {
            let simple_atom = mono.logs.is_empty() && mono.exps.is_empty() && mono.powers.len() == 1;
            let simple_log = mono.powers.is_empty() && mono.exps.is_empty() && mono.logs.len() == 1;
            if simple_atom {
                let (a, p) = mono.powers.iter().next().unwrap();
                if p.is_one() {
                    add_entry(&mut m.exps, a, c);
                    continue;
                }
            } else if simple_log {
                let (a, n) = mono.logs.iter().next().unwrap();
                if *n == 1 {
                    add_entry(&mut m.powers, a, c);
                    continue;
                }
            }
            return Err(JetError::UnsupportedShape(format!("exp({self})")));
        }
        Ok(JetExpr::monomial(Rational::one(), m))
    }

    /// `ln(self)`, for `self` a single monomial with coefficient 1 and no logarithms.
    pub fn ln(&self) -> Result<JetExpr, JetError> {
        let (m, c) = self.as_single().ok_or_else(|| JetError::UnsupportedShape(format!("ln({self})")))?;
        if !c.is_one() || !m.logs.is_empty() {
            return Err(JetError::UnsupportedShape(format!("ln({self})")));
        }
        let mut out = JetExpr::zero();
        for (a, p) in &m.powers {
            let mut lm = Monomial::one();
            lm.logs.insert(a.clone(), 1);
            out.add_monomial(lm, p.clone());
        }
        for (a, r) in &m.exps {
            out.add_monomial(Monomial::atom(a), r.clone());
        }
        Ok(out)
    }

    /// Every atom occurring anywhere, sorted.
    pub fn atoms(&self) -> Vec<String> {
        let mut v: Vec<String> = self.terms.keys().flat_map(|m| m.atoms().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn contains_atom(&self, atom: &str) -> bool {
        self.terms.keys().any(|m| m.mentions(atom))
    }

    pub fn partial_derivative(&self, atom: &str) -> JetExpr {
        let mut out = JetExpr::zero();
        for (m, c) in &self.terms {
            if !m.mentions(atom) {
                continue;
            }
            if let Some(p) = m.powers.get(atom) {
                let mut dm = m.clone();
                add_entry(&mut dm.powers, atom, &-Rational::one());
                out.add_monomial(dm, c * p);
            }
            if let Some(&n) = m.logs.get(atom) {
                let mut dm = m.clone();
                if n == 1 {
                    dm.logs.remove(atom);
                } else {
                    dm.logs.insert(atom.to_string(), n - 1);
                }
                add_entry(&mut dm.powers, atom, &-Rational::one());
                out.add_monomial(dm, c * Rational::from_integer(n.into()));
            }
            if let Some(r) = m.exps.get(atom) {
                out.add_monomial(m.clone(), c * r);
            }
        }
        out
    }

    /// Replaces `atom` by `value` everywhere.
    pub fn substitute(&self, atom: &str, value: &JetExpr) -> Result<JetExpr, JetError> {
        let mut out = JetExpr::zero();
        let mut log_cache: Option<JetExpr> = None;
        for (m, c) in &self.terms {
            if !m.mentions(atom) {
                out.add_monomial(m.clone(), c.clone());
                continue;
            }
            let mut rest = m.clone();
            let p = rest.powers.remove(atom);
            let n = rest.logs.remove(atom);
            let r = rest.exps.remove(atom);
            let mut piece = JetExpr::monomial(c.clone(), rest);
            if let Some(p) = p {
                piece = piece.mul(&value.pow(&p)?);
            }
            if let Some(n) = n {
                if log_cache.is_none() {
                    log_cache = Some(value.ln()?);
                }
                piece = piece.mul(&log_cache.as_ref().unwrap().pow_u32(n));
            }
            if let Some(r) = r {
                piece = piece.mul(&value.scale(&r).exp()?);
            }
            out = out.add(&piece);
        }
        Ok(out)
    }
}

impl From<Rational> for JetExpr {
    fn from(c: Rational) -> Self {
        JetExpr::constant(c)
    }
}

fn fmt_exponent(p: &Rational) -> String {
    if p.is_integer() && !p.is_negative() {
        fmt_rational(p)
    } else {
        format!("({})", fmt_rational(p))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (a, p) in &self.powers {
            parts.push(if p.is_one() { a.clone() } else { format!("{a}^{}", fmt_exponent(p)) });
        }
        for (a, n) in &self.logs {
            parts.push(if *n == 1 { format!("ln({a})") } else { format!("ln({a})^{n}") });
        }
        if !self.exps.is_empty() {
            let mut lin = String::new();
            for (i, (a, r)) in self.exps.iter().enumerate() {
                let neg = r.is_negative();
                let mag = r.abs();
                if i == 0 {
                    if neg {
                        lin.push('-');
                    }
                } else {
                    lin.push_str(if neg { " - " } else { " + " });
                }
                if !mag.is_one() {
                    lin.push_str(&format!("{}*", fmt_rational(&mag)));
                }
                lin.push_str(a);
            }
            parts.push(format!("exp({lin})"));
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Display for JetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcalc::parse::parse_expr;
    use crate::scalars::rat;
    use proptest::prelude::*;

    fn e(s: &str) -> JetExpr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(e("u_x*u_x"), e("u_x^2"));
        let ex = e("exp(u_y)*exp(-q_y)");
        assert_eq!(ex.terms().len(), 1);
        let (m, _) = ex.as_single().unwrap();
        assert_eq!(m.exps.get("u_y"), Some(&rat(1, 1)));
        assert_eq!(m.exps.get("q_y"), Some(&rat(-1, 1)));
        assert_eq!(ex, e("exp(u_y - q_y)"));
        assert_eq!(e("u_xxx^(1/2)*u_xxx"), e("u_xxx^(3/2)"));
    }

    #[test]
    fn unsupported_shapes() {
        assert!(matches!(parse_expr("exp(u_x*u_y)"), Err(JetError::UnsupportedShape(_))));
        assert!(matches!(parse_expr("ln(u_x + u_y)"), Err(JetError::UnsupportedShape(_))));
        assert!(matches!(parse_expr("1/(u_x + u_y)"), Err(JetError::UnsupportedShape(_))));
        assert!(matches!(parse_expr("2^(1/2)"), Err(JetError::UnsupportedShape(_))));
        assert_eq!(e("4^(1/2)"), JetExpr::int(2));
    }

    #[test]
    fn partial_examples() {
        assert_eq!(e("u_xxx^(1/2)").partial_derivative("u_xxx"), e("1/2*u_xxx^(-1/2)"));
        assert_eq!(e("exp(u_y - q_y)").partial_derivative("q_y"), e("-exp(u_y - q_y)"));
        assert_eq!(e("ln(u_yy)").partial_derivative("u_yy"), e("u_yy^(-1)"));
        assert_eq!(e("ln(u_yy)^3").partial_derivative("u_yy"), e("3*ln(u_yy)^2/u_yy"));
    }

    #[test]
    fn substitute_examples() {
        let qx = e("u_xxy*u_xxx^(-1) + a^(-1)*u_xxx^(-1/2)");
        let sq = e("q_x^2").substitute("q_x", &qx).unwrap();
        assert_eq!(sq.terms().len(), 3);
        assert_eq!(sq, e("u_xxy^2/u_xxx^2 + 2*u_xxy*u_xxx^(-3/2)/a + 1/(a^2*u_xxx)"));
        let r = e("u_yy/a").substitute("a", &e("u_yy*exp(q_y)")).unwrap();
        assert_eq!(r, e("exp(-q_y)"));
        let untouched = e("u_x + 3");
        assert_eq!(untouched.substitute("a", &qx).unwrap(), untouched);
        let lg = e("ln(a)").substitute("a", &e("u_yy*exp(q_y)")).unwrap();
        assert_eq!(lg, e("ln(u_yy) + q_y"));
    }

    #[test]
    fn substitution_round_trip() {
        // a = u_yy*exp(q_y)  <=>  q_y = ln(a) - ln(u_yy)
        let expr = e("u_yy^2*exp(u_y - q_y) + q_y*u_t");
        let there = expr.substitute("q_y", &e("ln(a) - ln(u_yy)")).unwrap();
        let back = there.substitute("a", &e("u_yy*exp(q_y)")).unwrap();
        assert_eq!(back, expr);
    }

    #[test]
    fn display_round_trips() {
        for s in ["-u_x^2*exp(-2*q_y + u_y) + 1/3", "a^(-1)*u_xxx^(3/2) - ln(u_yy)^2", "0", "7/2"] {
            let x = e(s);
            assert_eq!(e(&x.to_string()), x, "{s}");
        }
    }

    const ATOMS: [&str; 4] = ["a", "b", "u_x", "q_y"];

    fn arb_monomial() -> impl Strategy<Value = JetExpr> {
        (
            -3i64..=3,
            prop::collection::vec((0usize..4, -3i64..=3, 1i64..=2), 0..3),
            prop::collection::vec((0usize..4, 1u32..=2), 0..2),
            prop::collection::vec((0usize..4, -2i64..=2), 0..2),
        )
            .prop_map(|(c, pw, lg, ex)| {
                let mut m = Monomial::one();
                for (a, n, d) in pw {
                    add_entry(&mut m.powers, ATOMS[a], &rat(n, d));
                }
                for (a, n) in lg {
                    m.logs.insert(ATOMS[a].to_string(), n);
                }
                for (a, r) in ex {
                    add_entry(&mut m.exps, ATOMS[a], &rat(r, 1));
                }
                JetExpr::monomial(rat(c, 1), m)
            })
    }

    fn arb_expr() -> impl Strategy<Value = JetExpr> {
        prop::collection::vec(arb_monomial(), 0..4).prop_map(|ms| ms.iter().fold(JetExpr::zero(), |acc, m| acc.add(m)))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn partials_commute(a in arb_expr(), i in 0usize..4, j in 0usize..4) {
            let ab = a.partial_derivative(ATOMS[i]).partial_derivative(ATOMS[j]);
            let ba = a.partial_derivative(ATOMS[j]).partial_derivative(ATOMS[i]);
            prop_assert_eq!(ab, ba);
        }

        #[test]
        fn leibniz(a in arb_expr(), b in arb_expr(), i in 0usize..4) {
            let x = ATOMS[i];
            let lhs = a.mul(&b).partial_derivative(x);
            let rhs = a.partial_derivative(x).mul(&b).add(&a.mul(&b.partial_derivative(x)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn print_parse_idempotent(a in arb_expr()) {
            let again = parse_expr(&a.to_string()).unwrap();
            prop_assert_eq!(&again, &a);
            prop_assert_eq!(again.to_string(), a.to_string());
        }
    }
}
