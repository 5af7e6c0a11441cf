//! Exact scalar tower: rationals, polynomials in the deformation parameter
//! λ over ℚ, and rational functions in λ.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ScalarError;

/// Arbitrary-precision rational; always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `[sign] digits [ "/" digits ]`.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let s = text.trim();
    let bad = || ScalarError::BadLiteral(text.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.map_or(true, digits) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ScalarError::ZeroDenominator);
    }
    let r = Rational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// Renders a rational in the literal syntax accepted by [`parse_rational`].
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Ring operations shared by every level of the tower.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// Dense univariate polynomial in λ; `coeffs[i]` multiplies λ^i.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LambdaPoly {
    coeffs: Vec<Rational>,
}

impl LambdaPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        LambdaPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial λ.
    pub fn lambda() -> Self {
        Self::new(vec![int(0), int(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = <Rational as Zero>::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Self::default(), Self::default());
        };
        if sd < dd {
            return (Self::default(), self.clone());
        }
        let mut quot = vec![<Rational as Zero>::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let c = &rem[i + dd] / &lead;
            if !Zero::is_zero(&c) {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        Scalar::is_zero(&r).then_some(q)
    }

    /// Least common multiple of the denominators times the polynomial,
    /// divided by the gcd of the resulting integer coefficients. Sign is
    /// normalized to a positive leading coefficient.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if !g.is_zero() {
            if ints.last().is_some_and(|l| l.is_negative()) {
                g = -g;
            }
            for c in &mut ints {
                *c /= &g;
            }
        }
        ints
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }
}

impl Scalar for LambdaPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::constant(int(1))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::default();
        }
        let mut out = vec![<Rational as Zero>::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
    fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{}", fmt_rational(&abs))?,
                _ => {
                    if !unit {
                        write!(f, "{}*", fmt_rational(&abs))?;
                    }
                    write!(f, "λ")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Monic greatest common divisor; `poly_gcd(0, 0) = 0`.
pub fn poly_gcd(p: &LambdaPoly, q: &LambdaPoly) -> LambdaPoly {
    let (mut a, mut b) = (p.clone(), q.clone());
    while !Scalar::is_zero(&b) {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// Exactly the rational roots of `p` (multiplicities dropped).
///
/// Works on the square-free primitive integer form q with leading
/// coefficient a: real roots are isolated by Sturm-sequence bisection on
/// dyadic points and refined to intervals narrower than 1/a². A rational
/// root has a denominator dividing a, and distinct fractions with such
/// denominators are at least 1/a² apart, so the simplest fraction in each
/// final interval is the only possible rational root there; it is checked
/// exactly. No integer factoring is involved.
pub fn rational_roots(p: &LambdaPoly) -> Result<BTreeSet<Rational>, ScalarError> {
    if Scalar::is_zero(p) {
        return Err(ScalarError::ZeroPolynomial);
    }
    let mut roots = BTreeSet::new();
    let lowest = p.coeffs().iter().position(|c| !Zero::is_zero(c)).expect("nonzero polynomial");
    if lowest > 0 {
        roots.insert(<Rational as Zero>::zero());
    }
    let shifted = LambdaPoly::new(p.coeffs()[lowest..].to_vec());
    let g = poly_gcd(&shifted, &shifted.derivative());
    let (square_free, _) = shifted.div_rem(&g);
    let q = square_free.primitive_integer_coeffs();
    let q_rat = LambdaPoly::new(q.iter().cloned().map(Rational::from_integer).collect());
    match q.len() {
        0 | 1 => return Ok(roots),
        2 => {
            roots.insert(-Rational::new(q[0].clone(), q[1].clone()));
            return Ok(roots);
        }
        _ => {}
    }
    let lead = Signed::abs(q.last().expect("nonzero"));
    // All roots lie in [-2^e, 2^e] (Cauchy bound).
    let cauchy = q.iter().map(|c| Signed::abs(c)).max().expect("nonzero") / &lead + BigInt::one();
    let e = cauchy.bits() as u32;
    let width = BigInt::one() << (e + 1);
    // Final intervals have width 2^(e+1-j) < 1/a².
    let depth = (&width * &lead * &lead).bits() as u32 + 1;
    let chain = sturm_chain(&q_rat);

    // Interval (lo/2^j, (lo + width)/2^j].
    let mut stack = vec![(-(BigInt::one() << e), 0u32)];
    while let Some((lo, j)) = stack.pop() {
        let hi = &lo + &width;
        let count = sign_variations(&chain, &lo, j) - sign_variations(&chain, &hi, j);
        if count == 0 {
            continue;
        }
        if count > 1 {
            stack.push((&lo * 2 + &width, j + 1));
            stack.push((lo * 2, j + 1));
            continue;
        }
        if let Some(r) = refine_single_root(&q, &q_rat, lo, j, &width, depth) {
            roots.insert(r);
        }
    }
    Ok(roots)
}

/// The unique root of q in (lo/2^j, (lo + width)/2^j], if rational.
fn refine_single_root(q: &[BigInt], q_rat: &LambdaPoly, mut lo: BigInt, mut j: u32, width: &BigInt, depth: u32) -> Option<Rational> {
    let point = |m: &BigInt, j: u32| Rational::new(m.clone(), BigInt::one() << j);
    let hi_sign = dyadic_sign(q, &(&lo + width), j);
    if hi_sign == 0 {
        return Some(point(&(&lo + width), j));
    }
    loop {
        let a = point(&lo, j);
        let b = point(&(&lo + width), j);
        if j >= depth || j % 8 == 0 {
            // The left endpoint lies outside the interval; if it is the
            // simplest fraction, no fraction of small denominator lies inside.
            let s = simplest_between(&a, &b);
            if s > a && Zero::is_zero(&q_rat.eval(&s)) {
                return Some(s);
            }
            if j >= depth {
                return None;
            }
        }
        lo *= 2;
        j += 1;
        let mid = &lo + width;
        match dyadic_sign(q, &mid, j) {
            0 => return Some(point(&mid, j)),
            s if s == hi_sign => {}
            _ => lo = mid,
        }
    }
}

/// Sign of Σ c_i x^i at x = m/2^j, from Σ c_i m^i 2^(j(d−i)) in integers.
fn dyadic_sign(c: &[BigInt], m: &BigInt, j: u32) -> i8 {
    let d = c.len() - 1;
    let mut acc = c[d].clone();
    for i in (0..d).rev() {
        acc = acc * m + (&c[i] << (j as usize * (d - i)));
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Sturm chain q, q', −rem, … each rescaled by a positive factor to
/// integer coefficients (signs are all that matter).
fn sturm_chain(q: &LambdaPoly) -> Vec<Vec<BigInt>> {
    let mut chain = vec![q.clone(), q.derivative()];
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if Scalar::is_zero(&r) {
            break;
        }
        chain.push(Scalar::neg(&r));
    }
    chain.iter().map(positive_integer_form).collect()
}

fn positive_integer_form(p: &LambdaPoly) -> Vec<BigInt> {
    let den = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    p.coeffs().iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect()
}

/// Sign changes of the chain at m/2^j; the number of distinct real roots in
/// (a, b] is V(a) − V(b).
fn sign_variations(chain: &[Vec<BigInt>], m: &BigInt, j: u32) -> usize {
    let signs: Vec<i8> = chain.iter().map(|p| dyadic_sign(p, m, j)).filter(|s| *s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// The fraction with the smallest denominator in [a, b] (a ≤ b).
fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    if !Signed::is_positive(a) && !Signed::is_negative(b) {
        return <Rational as Zero>::zero();
    }
    if Signed::is_negative(b) {
        return -simplest_between(&-b, &-a);
    }
    let up = a.ceil();
    if &up <= b {
        return up;
    }
    let n = a.floor();
    let inner = simplest_between(&(b - &n).recip(), &(a - &n).recip());
    n + inner.recip()
}

/// Reduced quotient of polynomials with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LambdaRatFun {
    num: LambdaPoly,
    den: LambdaPoly,
}

impl LambdaRatFun {
    pub fn new(num: LambdaPoly, den: LambdaPoly) -> Result<Self, ScalarError> {
        if Scalar::is_zero(&den) {
            return Err(ScalarError::ZeroDenominator);
        }
        if Scalar::is_zero(&num) {
            return Ok(Self::from_poly(LambdaPoly::zero()));
        }
        let g = poly_gcd(&num, &den);
        let mut n = num.div_exact(&g).expect("gcd divides numerator");
        let mut d = den.div_exact(&g).expect("gcd divides denominator");
        let lead = d.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(LambdaRatFun { num: n, den: d })
    }

    pub fn from_poly(p: LambdaPoly) -> Self {
        LambdaRatFun { num: p, den: LambdaPoly::one() }
    }

    pub fn numer(&self) -> &LambdaPoly {
        &self.num
    }

    pub fn denom(&self) -> &LambdaPoly {
        &self.den
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if Scalar::is_zero(&self.num) {
            return Err(ScalarError::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(Scalar::mul(self, &other.inverse()?))
    }

    /// Value at `x`; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!Zero::is_zero(&d)).then(|| self.num.eval(x) / d)
    }
}

impl Scalar for LambdaRatFun {
    fn zero() -> Self {
        Self::from_poly(LambdaPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(LambdaPoly::one())
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(&self.num)
    }
    fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }
    fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }
    fn neg(&self) -> Self {
        LambdaRatFun { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_rational(r: &Rational) -> Self {
        Self::from_poly(LambdaPoly::constant(r.clone()))
    }
}

impl fmt::Display for LambdaRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<Rational> for LambdaPoly {
    fn from(r: Rational) -> Self {
        LambdaPoly::constant(r)
    }
}

impl From<LambdaPoly> for LambdaRatFun {
    fn from(p: LambdaPoly) -> Self {
        LambdaRatFun::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> LambdaPoly {
        LambdaPoly::from_ints(c)
    }

    #[test]
    fn literal_syntax() {
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("3/0").is_err());
        assert!(parse_rational("/3").is_err());
        assert_eq!(fmt_rational(&rat(-3, 4)), "-3/4");
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(&[3, 1]), &LambdaPoly::zero()), p(&[3, 1]));
        // (λ+1)(λ-1) and (λ+1)^2
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[1, 2, 1])), p(&[1, 1]));
        assert_eq!(poly_gcd(&p(&[-2, 0, 1]), &p(&[1, 1])), LambdaPoly::one());
        assert_eq!(poly_gcd(&LambdaPoly::zero(), &LambdaPoly::zero()), LambdaPoly::zero());
        // monic output
        assert_eq!(poly_gcd(&p(&[6, 2]), &p(&[9, 3])), p(&[3, 1]));
    }

    #[test]
    fn root_examples() {
        let r = rational_roots(&p(&[3, 1])).unwrap();
        assert_eq!(r.into_iter().collect::<Vec<_>>(), vec![int(-3)]);
        // (2λ+1)(λ²+1) = 2λ³ + λ² + 2λ + 1
        let r = rational_roots(&p(&[1, 2, 1, 2])).unwrap();
        assert_eq!(r.into_iter().collect::<Vec<_>>(), vec![rat(-1, 2)]);
        assert!(rational_roots(&p(&[-2, 0, 1])).unwrap().is_empty());
        // adjacent roots −1 and −14/15 beside the irrational pair ±√5
        let near = p(&[-5, 0, 1]).mul(&p(&[14, 15])).mul(&p(&[1, 1]));
        assert_eq!(rational_roots(&near).unwrap().into_iter().collect::<Vec<_>>(), vec![int(-1), rat(-14, 15)]);
        // (1000000007λ − 998244353)(λ² − 2)(λ + 5)²: large prime coefficients
        let big = p(&[-998244353, 1000000007]).mul(&p(&[-2, 0, 1])).mul(&p(&[5, 1])).mul(&p(&[5, 1]));
        let r = rational_roots(&big).unwrap();
        assert_eq!(r.into_iter().collect::<Vec<_>>(), vec![int(-5), rat(998244353, 1000000007)]);
        assert!(matches!(rational_roots(&LambdaPoly::zero()), Err(ScalarError::ZeroPolynomial)));
        let r = rational_roots(&p(&[0, 0, -1, 4])).unwrap();
        assert_eq!(r.into_iter().collect::<Vec<_>>(), vec![int(0), rat(1, 4)]);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[3, 1]).to_string(), "λ + 3");
        assert_eq!(LambdaPoly::new(vec![rat(-1, 4), int(0), int(-2)]).to_string(), "-2*λ^2 - 1/4");
        assert_eq!(LambdaPoly::zero().to_string(), "0");
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
    }

    fn small_poly() -> impl Strategy<Value = LambdaPoly> {
        prop::collection::vec(small_rat(), 0..4).prop_map(LambdaPoly::new)
    }

    fn ratfun() -> impl Strategy<Value = LambdaRatFun> {
        (small_poly(), small_poly().prop_filter("nonzero", |d| !Scalar::is_zero(d)))
            .prop_map(|(n, d)| LambdaRatFun::new(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn ratfun_field_axioms(a in ratfun(), b in ratfun(), c in ratfun()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert!(a.sub(&a).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inverse().unwrap()), LambdaRatFun::one());
            }
        }

        #[test]
        fn ratfun_canonical(a in ratfun()) {
            prop_assert!(a.denom().leading().unwrap().is_one());
            prop_assert_eq!(poly_gcd(a.numer(), a.denom()).degree().unwrap_or(0), 0);
        }

        #[test]
        fn rational_field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!(Scalar::mul(&a, &Scalar::add(&b, &c)), Scalar::add(&Scalar::mul(&a, &b), &Scalar::mul(&a, &c)));
            if !Zero::is_zero(&a) {
                prop_assert!(Scalar::mul(&a, &a.recip()).is_one());
            }
        }

        #[test]
        fn gcd_divides_and_is_greatest(a in small_poly(), b in small_poly(), c in small_poly()) {
            let pa = a.mul(&c);
            let pb = b.mul(&c);
            let g = poly_gcd(&pa, &pb);
            if !Scalar::is_zero(&g) {
                prop_assert!(pa.div_exact(&g).is_some());
                prop_assert!(pb.div_exact(&g).is_some());
                // the common divisor c divides the gcd
                if !Scalar::is_zero(&c) {
                    prop_assert!(g.div_exact(&c).is_some());
                }
            } else {
                prop_assert!(Scalar::is_zero(&pa) && Scalar::is_zero(&pb));
            }
        }

        #[test]
        fn planted_roots_are_found(
            planted in prop::collection::vec((-40i64..=40, 1i64..=30), 1..5),
            irrational in 2i64..=7,
        ) {
            let mut poly = LambdaPoly::from_ints(&[-irrational * irrational - 1, 0, 1]);
            let mut expected = BTreeSet::new();
            for (n, d) in &planted {
                poly = poly.mul(&LambdaPoly::from_ints(&[-n, *d]));
                expected.insert(rat(*n, *d));
            }
            prop_assert_eq!(rational_roots(&poly).unwrap(), expected);
        }

        #[test]
        fn roots_match_enumeration(c in prop::collection::vec(-6i64..=6, 1..5)) {
            let poly = LambdaPoly::from_ints(&c);
            prop_assume!(!Scalar::is_zero(&poly));
            let roots = rational_roots(&poly).unwrap();
            for r in &roots {
                prop_assert!(Zero::is_zero(&poly.eval(r)));
            }
            // brute force over every fraction with bounded numerator/denominator
            let mut brute = BTreeSet::new();
            for n in -36i64..=36 {
                for d in 1i64..=6 {
                    let x = rat(n, d);
                    if Zero::is_zero(&poly.eval(&x)) {
                        brute.insert(x);
                    }
                }
            }
            prop_assert_eq!(roots, brute);
        }
    }
}
