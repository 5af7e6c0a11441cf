//! Exterior algebra over a named coframe, with differentials driven by a
//! table of structure equations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::FormError;
use crate::linalg::{Echelon, SparseVec};
use crate::scalars::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormSymbol {
    pub name: String,
    pub index: usize,
    pub known_differential: bool,
}

/// Ordered set of named generators. Indices are dense from 0.
#[derive(Debug)]
pub struct Coframe {
    symbols: Vec<FormSymbol>,
    by_name: HashMap<String, usize>,
}

impl PartialEq for Coframe {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Coframe {}

impl Coframe {
    /// Builds a coframe from `(name, known_differential)` pairs. Names must
    /// be distinct; the caller validates that.
    pub fn new<I, N>(symbols: I) -> Arc<Self>
    where
        I: IntoIterator<Item = (N, bool)>,
        N: Into<String>,
    {
        let symbols: Vec<FormSymbol> = symbols
            .into_iter()
            .enumerate()
            .map(|(index, (name, known_differential))| FormSymbol { name: name.into(), index, known_differential })
            .collect();
        let by_name = symbols.iter().map(|s| (s.name.clone(), s.index)).collect();
        Arc::new(Coframe { symbols, by_name })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[FormSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &FormSymbol {
        &self.symbols[index]
    }

    pub fn name(&self, index: usize) -> &str {
        &self.symbols[index].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn is_known(&self, index: usize) -> bool {
        self.symbols[index].known_differential
    }

    pub fn known_indices(&self) -> Vec<usize> {
        self.symbols.iter().filter(|s| s.known_differential).map(|s| s.index).collect()
    }
}

/// Sorts an index tuple. Returns `None` for a repeated index, otherwise
/// whether the permutation was odd together with the sorted tuple.
pub fn canonical_tuple(tuple: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut t = tuple.to_vec();
    let mut odd = false;
    // insertion sort; tuples are short
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && t[j - 1] == t[j] {
            return None;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((odd, t))
}

fn same_frame(a: &Arc<Coframe>, b: &Arc<Coframe>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Homogeneous k-form with canonical sparse terms.
#[derive(Clone, Debug)]
pub struct KForm<S> {
    coframe: Arc<Coframe>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> PartialEq for KForm<S> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.terms == other.terms && same_frame(&self.coframe, &other.coframe)
    }
}

impl<S: Scalar> KForm<S> {
    pub fn zero(coframe: &Arc<Coframe>, degree: usize) -> Self {
        KForm { coframe: coframe.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn constant(coframe: &Arc<Coframe>, c: S) -> Self {
        let mut f = Self::zero(coframe, 0);
        f.add_term(&[], c);
        f
    }

    pub fn generator(coframe: &Arc<Coframe>, index: usize) -> Self {
        let mut f = Self::zero(coframe, 1);
        f.add_term(&[index], S::one());
        f
    }

    /// Builds a form from possibly non-canonical tuples of equal length.
    pub fn from_terms<I>(coframe: &Arc<Coframe>, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, S)>,
    {
        let mut f = Self::zero(coframe, degree);
        for (t, c) in terms {
            f.add_term(&t, c);
        }
        f
    }

    /// Adds `c` times the wedge of the listed generators, reordering with sign.
    pub fn add_term(&mut self, tuple: &[usize], c: S) {
        assert_eq!(tuple.len(), self.degree, "tuple length must equal form degree");
        if c.is_zero() {
            return;
        }
        let Some((odd, t)) = canonical_tuple(tuple) else { return };
        let c = if odd { c.neg() } else { c };
        let next = match self.terms.get(&t) {
            Some(cur) => cur.add(&c),
            None => c,
        };
        if next.is_zero() {
            self.terms.remove(&t);
        } else {
            self.terms.insert(t, next);
        }
    }

    pub fn coframe(&self) -> &Arc<Coframe> {
        &self.coframe
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, S> {
        &self.terms
    }

    pub fn coefficient(&self, tuple: &[usize]) -> S {
        self.terms.get(tuple).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Symbols occurring in some term, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.terms.keys().flatten().copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(&self.coframe, self.degree);
        }
        let terms = self.terms.iter().map(|(t, v)| (t.clone(), c.mul(v))).filter(|(_, v)| !v.is_zero()).collect();
        KForm { coframe: self.coframe.clone(), degree: self.degree, terms }
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::one().neg())
    }

    /// `self + c·other`.
    pub fn add_scale(&self, c: &S, other: &Self) -> Result<Self, FormError> {
        if !same_frame(&self.coframe, &other.coframe) {
            return Err(FormError::MixedPresentation);
        }
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let mut out = self.clone();
        if c.is_zero() {
            return Ok(out);
        }
        for (t, v) in &other.terms {
            out.add_term(t, c.mul(v));
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormError> {
        self.add_scale(&S::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FormError> {
        self.add_scale(&S::one().neg(), other)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        if !same_frame(&self.coframe, &other.coframe) {
            return Err(FormError::MixedPresentation);
        }
        let mut out = Self::zero(&self.coframe, self.degree + other.degree);
        for (ta, va) in &self.terms {
            for (tb, vb) in &other.terms {
                let mut t = ta.clone();
                t.extend_from_slice(tb);
                out.add_term(&t, va.mul(vb));
            }
        }
        Ok(out)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> KForm<T> {
        let terms = self.terms.iter().map(|(t, v)| (t.clone(), f(v))).filter(|(_, v)| !v.is_zero()).collect();
        KForm { coframe: self.coframe.clone(), degree: self.degree, terms }
    }
}

impl KForm<Rational> {
    /// Explicit promotion into a richer scalar ring.
    pub fn promote<T: Scalar>(&self) -> KForm<T> {
        self.map_scalars(T::from_rational)
    }
}

/// Renders a coefficient as a multiplicative prefix: "", "-", "3/4*", "(λ + 3)*".
pub(crate) fn coefficient_prefix(s: &str) -> String {
    match s {
        "1" => String::new(),
        "-1" => "-".to_string(),
        _ if s.chars().skip(1).any(|c| matches!(c, ' ' | '+' | '-')) => format!("({s})*"),
        _ => format!("{s}*"),
    }
}

impl<S: Scalar> fmt::Display for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            if t.is_empty() {
                return write!(f, "{cs}");
            }
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains([' ', '+', '-']) => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let names: Vec<&str> = t.iter().map(|&j| self.coframe.name(j)).collect();
            write!(f, "{}{}", coefficient_prefix(&body), names.join("^"))?;
        }
        Ok(())
    }
}

/// Exterior derivatives of the generators with known differential.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTable {
    coframe: Arc<Coframe>,
    entries: BTreeMap<usize, KForm<Rational>>,
}

impl StructureTable {
    pub fn new(coframe: &Arc<Coframe>) -> Self {
        StructureTable { coframe: coframe.clone(), entries: BTreeMap::new() }
    }

    pub fn coframe(&self) -> &Arc<Coframe> {
        &self.coframe
    }

    pub fn set(&mut self, index: usize, d: KForm<Rational>) -> Result<(), FormError> {
        if !same_frame(&self.coframe, d.coframe()) {
            return Err(FormError::MixedPresentation);
        }
        if d.degree() != 2 {
            return Err(FormError::DegreeMismatch { left: 2, right: d.degree() });
        }
        if !self.coframe.is_known(index) {
            return Err(FormError::UnknownDifferential(self.coframe.name(index).to_string()));
        }
        self.entries.insert(index, d);
        Ok(())
    }

    pub fn get(&self, index: usize) -> Option<&KForm<Rational>> {
        self.entries.get(&index)
    }

    pub fn entries(&self) -> &BTreeMap<usize, KForm<Rational>> {
        &self.entries
    }
}

/// Unique antiderivation extending the table; coefficients are constants.
pub fn exterior_derivative<S: Scalar>(a: &KForm<S>, table: &StructureTable) -> Result<KForm<S>, FormError> {
    if !same_frame(a.coframe(), table.coframe()) {
        return Err(FormError::MixedPresentation);
    }
    let mut out = KForm::zero(a.coframe(), a.degree() + 1);
    for (t, c) in a.terms() {
        for (pos, &j) in t.iter().enumerate() {
            let dj = table
                .get(j)
                .ok_or_else(|| FormError::UnknownDifferential(a.coframe().name(j).to_string()))?;
            let c = if pos % 2 == 1 { c.neg() } else { c.clone() };
            for (pair, v) in dj.terms() {
                let mut tuple = Vec::with_capacity(t.len() + 1);
                tuple.extend_from_slice(&t[..pos]);
                tuple.extend_from_slice(pair);
                tuple.extend_from_slice(&t[pos + 1..]);
                out.add_term(&tuple, c.mul(&S::from_rational(v)));
            }
        }
    }
    Ok(out)
}

/// Checks that `zeta` is a closed 1-form.
pub fn ensure_closed_one_form(zeta: &KForm<Rational>, table: &StructureTable) -> Result<(), FormError> {
    if zeta.degree() != 1 {
        return Err(FormError::NotOneForm(zeta.degree()));
    }
    let dz = exterior_derivative(zeta, table)?;
    if dz.is_zero() {
        Ok(())
    } else {
        Err(FormError::NotClosed { residual: dz.to_string() })
    }
}

/// `dθ + λ ζ∧θ`, applied to the cochain as a whole.
pub fn deformed_derivative<S: Scalar>(
    a: &KForm<S>,
    lambda: &S,
    zeta: &KForm<Rational>,
    table: &StructureTable,
) -> Result<KForm<S>, FormError> {
    ensure_closed_one_form(zeta, table)?;
    deformed_derivative_unchecked(a, lambda, zeta, table)
}

/// As [`deformed_derivative`] but trusts the caller that `zeta` is closed.
pub fn deformed_derivative_unchecked<S: Scalar>(
    a: &KForm<S>,
    lambda: &S,
    zeta: &KForm<Rational>,
    table: &StructureTable,
) -> Result<KForm<S>, FormError> {
    let da = exterior_derivative(a, table)?;
    let za = zeta.promote::<S>().wedge(a)?;
    da.add_scale(lambda, &za)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorResidual {
    pub symbol: String,
    pub residual: String,
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedMarkResidual {
    pub name: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompatibilityReport {
    /// One entry per generator with known differential, in symbol order.
    pub per_generator: Vec<GeneratorResidual>,
    /// Closedness of the declared ζ candidates (filled by presentation validation).
    pub closed_marks: Vec<ClosedMarkResidual>,
    pub pass: bool,
}

impl CompatibilityReport {
    pub fn failing_generators(&self) -> Vec<&str> {
        self.per_generator.iter().filter(|g| g.terms > 0).map(|g| g.symbol.as_str()).collect()
    }

    pub fn failing_marks(&self) -> Vec<&str> {
        self.closed_marks.iter().filter(|m| m.residual != "0").map(|m| m.name.as_str()).collect()
    }

    pub(crate) fn recompute_pass(&mut self) {
        self.pass = self.per_generator.iter().all(|g| g.terms == 0) && self.closed_marks.iter().all(|m| m.residual == "0");
    }
}

/// Verifies d(dω) = 0 for every generator with known differential.
///
/// Generators without a known differential contribute unknown 2-forms dχ.
/// The check passes iff some choice of those 2-forms makes every d(dω)
/// vanish; each reported residual is the part of d(dω) (with the dχ terms
/// dropped) that no such choice can cancel. Without unknown generators
/// this is plain d(dω).
pub fn check_compatibility(table: &StructureTable) -> CompatibilityReport {
    compatibility_with_completion(table).0
}

/// Extends the table with differentials for the prolongation generators
/// (one particular solution of the compatibility system, free parameters
/// set to zero) so that d∘d = 0 on every cochain over the original
/// generators. `None` when the table fails the compatibility check.
pub fn complete_table(table: &StructureTable) -> Option<StructureTable> {
    compatibility_with_completion(table).1
}

fn compatibility_with_completion(table: &StructureTable) -> (CompatibilityReport, Option<StructureTable>) {
    let frame = table.coframe().clone();
    let n = frame.len();
    let unknown: Vec<usize> = (0..n).filter(|&i| !frame.is_known(i)).collect();
    let pairs: Vec<[usize; 2]> = (0..n).flat_map(|a| (a + 1..n).map(move |b| [a, b])).collect();

    // Known part of d(dω_i), and the linear contribution of each unknown dχ_u (pair p).
    let mut known_part: BTreeMap<(usize, Vec<usize>), Rational> = BTreeMap::new();
    let mut columns: BTreeMap<(usize, usize), BTreeMap<(usize, Vec<usize>), Rational>> = BTreeMap::new();
    for (&i, di) in table.entries() {
        for (t, c) in di.terms() {
            for (pos, &j) in t.iter().enumerate() {
                let c = if pos % 2 == 1 { -c.clone() } else { c.clone() };
                let splice = |pair: &[usize], v: &Rational, target: &mut BTreeMap<(usize, Vec<usize>), Rational>| {
                    let mut tuple = t[..pos].to_vec();
                    tuple.extend_from_slice(pair);
                    tuple.extend_from_slice(&t[pos + 1..]);
                    if let Some((odd, s)) = canonical_tuple(&tuple) {
                        let mut x = &c * v;
                        if odd {
                            x = -x;
                        }
                        let e = target.entry((i, s)).or_insert_with(Scalar::zero);
                        *e += x;
                    }
                };
                match table.get(j) {
                    Some(dj) => {
                        for (pair, v) in dj.terms() {
                            splice(pair, v, &mut known_part);
                        }
                    }
                    None => {
                        let one: Rational = Scalar::one();
                        for (pi, p) in pairs.iter().enumerate() {
                            let col = columns.entry((j, pi)).or_default();
                            splice(p, &one, col);
                        }
                    }
                }
            }
        }
    }
    known_part.retain(|_, v| !Scalar::is_zero(v));

    let mut keys: Vec<(usize, Vec<usize>)> = known_part.keys().cloned().collect();
    for col in columns.values() {
        keys.extend(col.iter().filter(|(_, v)| !Scalar::is_zero(*v)).map(|(k, _)| k.clone()));
    }
    keys.sort();
    keys.dedup();
    let key_index: BTreeMap<&(usize, Vec<usize>), usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let encode = |m: &BTreeMap<(usize, Vec<usize>), Rational>| -> SparseVec<Rational> {
        m.iter().filter(|(_, v)| !Scalar::is_zero(*v)).map(|(k, v)| (key_index[k], v.clone())).collect()
    };

    let mut ech = Echelon::new();
    let column_keys: Vec<(usize, usize)> = columns.keys().copied().collect();
    if !unknown.is_empty() {
        for col in columns.values() {
            ech.insert(&encode(col));
        }
    }
    let target = encode(&known_part);
    let remainder = ech.reduce(&target);
    let completion = remainder.is_empty().then(|| {
        let negated: SparseVec<Rational> = target.iter().map(|(k, v)| (*k, -v.clone())).collect();
        let x = ech.solve(&negated).expect("remainder is zero");
        let mut full = table.clone();
        for &u in &unknown {
            full.entries.insert(u, KForm::zero(&frame, 2));
        }
        for (ci, v) in x {
            let (u, pi) = column_keys[ci];
            full.entries.get_mut(&u).expect("inserted").add_term(&pairs[pi], v);
        }
        full
    });

    let mut per_symbol: BTreeMap<usize, KForm<Rational>> = BTreeMap::new();
    for (k, v) in remainder {
        let (i, tuple) = &keys[k];
        per_symbol.entry(*i).or_insert_with(|| KForm::zero(&frame, 3)).add_term(tuple, v);
    }
    let per_generator: Vec<GeneratorResidual> = table
        .entries()
        .keys()
        .map(|&i| {
            let r = per_symbol.remove(&i).unwrap_or_else(|| KForm::zero(&frame, 3));
            GeneratorResidual { symbol: frame.name(i).to_string(), residual: r.to_string(), terms: r.terms().len() }
        })
        .collect();
    let mut report = CompatibilityReport { per_generator, closed_marks: Vec::new(), pass: false };
    report.recompute_pass();
    (report, completion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, LambdaPoly};
    use proptest::prelude::*;

    fn example_frame() -> (Arc<Coframe>, StructureTable) {
        let frame = Coframe::new((1..=5).map(|i| (format!("t{i}"), true)));
        let mut table = StructureTable::new(&frame);
        let two = |a: usize, b: usize, c: i64| KForm::from_terms(&frame, 2, [(vec![a, b], int(c))]);
        table.set(0, KForm::zero(&frame, 2)).unwrap();
        table.set(1, two(0, 1, -1)).unwrap();
        table.set(2, two(0, 2, 1)).unwrap();
        table.set(3, two(0, 3, 2)).unwrap();
        table.set(4, two(1, 2, 1)).unwrap();
        (frame, table)
    }

    fn g(frame: &Arc<Coframe>, i: usize) -> KForm<Rational> {
        KForm::generator(frame, i)
    }

    #[test]
    fn wedge_examples() {
        let (f, _) = example_frame();
        assert!(g(&f, 0).wedge(&g(&f, 0)).unwrap().is_zero());
        let a = g(&f, 0).wedge(&g(&f, 1)).unwrap();
        let b = g(&f, 1).wedge(&g(&f, 0)).unwrap();
        assert_eq!(a.coefficient(&[0, 1]), int(1));
        assert_eq!(b.coefficient(&[0, 1]), int(-1));
        let s = g(&f, 0).add(&g(&f, 1)).unwrap().wedge(&g(&f, 2)).unwrap();
        assert_eq!(s.to_string(), "t1^t3 + t2^t3");
    }

    #[test]
    fn wedge_rejects_foreign_frame() {
        let (f, _) = example_frame();
        let other = Coframe::new([("z", true)]);
        assert_eq!(g(&f, 0).wedge(&g(&other, 0)), Err(FormError::MixedPresentation));
    }

    #[test]
    fn add_scale_examples() {
        let (f, _) = example_frame();
        let a = g(&f, 0).wedge(&g(&f, 1)).unwrap();
        assert_eq!(a.add_scale(&int(0), &a).unwrap(), a);
        let z = a.add_scale(&int(-1), &a).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 2);
        assert_eq!(
            a.add_scale(&int(1), &g(&f, 0)),
            Err(FormError::DegreeMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn derivative_examples() {
        let (f, t) = example_frame();
        assert_eq!(exterior_derivative(&g(&f, 4), &t).unwrap().to_string(), "t2^t3");
        let t23 = g(&f, 1).wedge(&g(&f, 2)).unwrap();
        assert!(exterior_derivative(&t23, &t).unwrap().is_zero());
        let t34 = g(&f, 2).wedge(&g(&f, 3)).unwrap();
        assert_eq!(exterior_derivative(&t34, &t).unwrap().to_string(), "3*t1^t3^t4");
    }

    #[test]
    fn deformed_examples() {
        let (f, t) = example_frame();
        let zeta = g(&f, 0);
        let t34: KForm<LambdaPoly> = g(&f, 2).wedge(&g(&f, 3)).unwrap().promote();
        let d = deformed_derivative(&t34, &LambdaPoly::lambda(), &zeta, &t).unwrap();
        assert_eq!(d.coefficient(&[0, 2, 3]), LambdaPoly::from_ints(&[3, 1]));
        assert_eq!(d.terms().len(), 1);

        let t12 = g(&f, 0).wedge(&g(&f, 1)).unwrap();
        assert!(deformed_derivative(&t12, &int(1), &zeta, &t).unwrap().is_zero());

        let a = g(&f, 4);
        assert_eq!(
            deformed_derivative(&a, &int(0), &zeta, &t).unwrap(),
            exterior_derivative(&a, &t).unwrap()
        );
        assert!(matches!(
            deformed_derivative(&a, &int(1), &g(&f, 4), &t),
            Err(FormError::NotClosed { .. })
        ));
    }

    #[test]
    fn unknown_differential_is_reported() {
        let frame = Coframe::new([("a", true), ("chi", false)]);
        let mut t = StructureTable::new(&frame);
        t.set(0, KForm::zero(&frame, 2)).unwrap();
        let err = exterior_derivative(&KForm::<Rational>::generator(&frame, 1), &t).unwrap_err();
        assert_eq!(err, FormError::UnknownDifferential("chi".into()));
    }

    #[test]
    fn compatibility_examples() {
        let (_, t) = example_frame();
        assert!(check_compatibility(&t).pass);

        let frame = Coframe::new([("t1", true), ("t2", true), ("t3", true)]);
        let mut bad = StructureTable::new(&frame);
        bad.set(0, KForm::from_terms(&frame, 2, [(vec![1, 2], int(1))])).unwrap();
        bad.set(1, KForm::from_terms(&frame, 2, [(vec![0, 1], int(1))])).unwrap();
        bad.set(2, KForm::zero(&frame, 2)).unwrap();
        let r = check_compatibility(&bad);
        assert!(!r.pass);
        assert_eq!(r.failing_generators(), vec!["t1"]);
        assert_eq!(r.per_generator[0].residual, "t1^t2^t3");
    }

    #[test]
    fn compatibility_absorbs_unknown_differentials() {
        // da = chi^b, db = 0: d(da) = dchi^b, cancelled by any dchi.
        let frame = Coframe::new([("a", true), ("b", true), ("chi", false)]);
        let mut t = StructureTable::new(&frame);
        t.set(0, KForm::from_terms(&frame, 2, [(vec![2, 1], int(1))])).unwrap();
        t.set(1, KForm::zero(&frame, 2)).unwrap();
        assert!(check_compatibility(&t).pass);

        let full = complete_table(&t).unwrap();
        let chi = KForm::<Rational>::generator(&frame, 2);
        let dd = exterior_derivative(&exterior_derivative(&KForm::<Rational>::generator(&frame, 0), &full).unwrap(), &full).unwrap();
        assert!(dd.is_zero());
        assert!(exterior_derivative(&chi, &full).is_ok());

        // da = b^c, db = 0, dc = chi^c: d(dc) = dchi^c is absorbed by dchi = 0,
        // but d(da) = -b^chi^c contains no dchi and cannot be cancelled.
        let frame = Coframe::new([("a", true), ("b", true), ("c", true), ("chi", false)]);
        let mut t = StructureTable::new(&frame);
        t.set(0, KForm::from_terms(&frame, 2, [(vec![1, 2], int(1))])).unwrap();
        t.set(1, KForm::zero(&frame, 2)).unwrap();
        t.set(2, KForm::from_terms(&frame, 2, [(vec![3, 2], int(1))])).unwrap();
        let r = check_compatibility(&t);
        assert!(!r.pass);
        assert_eq!(r.failing_generators(), vec!["a"]);
    }

    fn random_form(frame: &Arc<Coframe>, degree: usize, raw: &[(Vec<usize>, i64)]) -> KForm<Rational> {
        KForm::from_terms(frame, degree, raw.iter().map(|(t, c)| (t.clone(), int(*c))))
    }

    fn raw_form(n: usize, degree: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
        prop::collection::vec((prop::collection::vec(0..n, degree), -5i64..=5), 0..6)
    }

    proptest! {
        #[test]
        fn wedge_associative_and_graded(
            (da, ra) in (0usize..3).prop_flat_map(|d| (Just(d), raw_form(5, d))),
            (db, rb) in (0usize..3).prop_flat_map(|d| (Just(d), raw_form(5, d))),
            (dc, rc) in (0usize..3).prop_flat_map(|d| (Just(d), raw_form(5, d))),
        ) {
            let (f, _) = example_frame();
            let (a, b, c) = (random_form(&f, da, &ra), random_form(&f, db, &rb), random_form(&f, dc, &rc));
            let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
            let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            let sign = if (da * db) % 2 == 1 { int(-1) } else { int(1) };
            prop_assert_eq!(ab, ba.scale(&sign));
        }

        #[test]
        fn antiderivation_and_nilpotence(
            ra in raw_form(5, 1), rb in raw_form(5, 2), rc in raw_form(5, 2),
            lam in -6i64..=6,
        ) {
            let (f, t) = example_frame();
            let a = random_form(&f, 1, &ra);
            let b = random_form(&f, 2, &rb);
            let c = random_form(&f, 2, &rc);
            // linearity
            let lin = exterior_derivative(&b.add_scale(&int(3), &c).unwrap(), &t).unwrap();
            let sep = exterior_derivative(&b, &t).unwrap().add_scale(&int(3), &exterior_derivative(&c, &t).unwrap()).unwrap();
            prop_assert_eq!(lin, sep);
            // d(a∧b) = da∧b − a∧db for deg a = 1
            let lhs = exterior_derivative(&a.wedge(&b).unwrap(), &t).unwrap();
            let rhs = exterior_derivative(&a, &t).unwrap().wedge(&b).unwrap()
                .sub(&a.wedge(&exterior_derivative(&b, &t).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(exterior_derivative(&exterior_derivative(&b, &t).unwrap(), &t).unwrap().is_zero());
            let zeta = g(&f, 0);
            let once = deformed_derivative(&a, &int(lam), &zeta, &t).unwrap();
            prop_assert!(deformed_derivative(&once, &int(lam), &zeta, &t).unwrap().is_zero());
        }
    }
}
