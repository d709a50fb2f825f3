//! Rational functions of `n`, ordered by eventual sign.
//!
//! Every comparison set `{n : f(n) < g(n)}` between two such germs is finite
//! or cofinite, so all free ultrafilters on ω agree on it and the field
//! below is an ordered subfield of every ultrapower of ℚ by a free
//! ultrafilter.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::filters::PeriodicSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GermError {
    #[error("division by the zero germ")]
    DivisionByZeroGerm,
    #[error("the germ is infinite and has no standard part")]
    InfiniteGerm,
    #[error("parse error at offset {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("exponent {0} is too large")]
    ExponentTooLarge(u64),
}

/// Polynomial with integer coefficients, lowest degree first, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: BigInt) -> Poly {
        Poly::new(vec![c])
    }

    /// The monomial `n`.
    pub fn var() -> Poly {
        Poly::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        let zero = BigInt::zero();
        Poly::new(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, n: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * n + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    /// `1 + max |c_i| / |lead|` rounded up; every real root lies strictly
    /// below it in absolute value.
    pub fn cauchy_bound(&self) -> BigInt {
        if self.0.len() <= 1 {
            return BigInt::one();
        }
        let lead = self.lead().abs();
        let max = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        BigInt::one() + Integer::div_ceil(&max, &lead)
    }

    fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn fmt_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let power = match d {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{d}"),
            };
            match (d, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => f.write_str(&power)?,
                _ => write!(f, "{a}*{power}")?,
            }
        }
        Ok(())
    }

    fn term_count(&self) -> usize {
        self.0.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_terms(f)
    }
}

type QPoly = Vec<BigRational>;

fn to_q(p: &Poly) -> QPoly {
    p.0.iter().cloned().map(BigRational::from_integer).collect()
}

fn trim_q(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Quotient and remainder over ℚ; `b` must be nonzero.
fn divrem_q(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    trim_q(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let k = r[r.len() - 1].clone() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &k * c;
        }
        q[shift] = k;
        r.pop();
        trim_q(&mut r);
    }
    trim_q(&mut q);
    (q, r)
}

fn gcd_q(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim_q(&mut a);
    trim_q(&mut b);
    while !b.is_empty() {
        let (_, r) = divrem_q(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Clears denominators of a pair of rational polynomials jointly and
/// divides out the joint content.
fn integer_pair(num: &QPoly, den: &QPoly) -> (Poly, Poly) {
    let l = num
        .iter()
        .chain(den.iter())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let to_int = |p: &QPoly| Poly::new(p.iter().map(|c| (c * &l).to_integer()).collect());
    let (n, d) = (to_int(num), to_int(den));
    let g = n.content().gcd(&d.content());
    let n = Poly::new(n.0.iter().map(|c| c / &g).collect());
    let d = Poly::new(d.0.iter().map(|c| c / &g).collect());
    (n, d)
}

/// A rational function `num / den` in lowest terms: no common factor,
/// integer coefficients with joint content 1, positive leading denominator
/// coefficient. The zero germ is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Germ {
    num: Poly,
    den: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GermClass {
    Infinitesimal,
    Appreciable(BigRational),
    Infinite,
}

impl fmt::Display for GermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GermClass::Infinitesimal => f.write_str("Infinitesimal"),
            GermClass::Appreciable(c) => write!(f, "Appreciable({c})"),
            GermClass::Infinite => f.write_str("Infinite"),
        }
    }
}

impl Germ {
    pub fn new(num: Poly, den: Poly) -> Result<Germ, GermError> {
        if den.is_zero() {
            return Err(GermError::DivisionByZeroGerm);
        }
        if num.is_zero() {
            return Ok(Germ::zero());
        }
        let (qn, qd) = (to_q(&num), to_q(&den));
        let g = gcd_q(&qn, &qd);
        let (qn, _) = divrem_q(&qn, &g);
        let (qd, _) = divrem_q(&qd, &g);
        let (mut n, mut d) = integer_pair(&qn, &qd);
        if d.lead().is_negative() {
            n = n.neg();
            d = d.neg();
        }
        Ok(Germ { num: n, den: d })
    }

    pub fn zero() -> Germ {
        Germ {
            num: Poly::zero(),
            den: Poly::constant(BigInt::one()),
        }
    }

    pub fn one() -> Germ {
        Germ::from_int(1)
    }

    pub fn from_int(c: i64) -> Germ {
        Germ::constant(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn constant(c: &BigRational) -> Germ {
        Germ::new(Poly::constant(c.numer().clone()), Poly::constant(c.denom().clone()))
            .expect("nonzero denominator")
    }

    /// The identity germ `n ↦ n`.
    pub fn var() -> Germ {
        Germ {
            num: Poly::var(),
            den: Poly::constant(BigInt::one()),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    pub fn add(&self, other: &Germ) -> Germ {
        Germ::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &Germ) -> Germ {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Germ {
        Germ {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Germ) -> Germ {
        Germ::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("product of nonzero denominators")
    }

    pub fn inv(&self) -> Result<Germ, GermError> {
        if self.is_zero() {
            return Err(GermError::DivisionByZeroGerm);
        }
        Germ::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Germ) -> Result<Germ, GermError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn abs(&self) -> Germ {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Eventual sign; the denominator's leading coefficient is positive.
    pub fn signum(&self) -> Ordering {
        self.num.lead().sign().cmp_zero()
    }

    pub fn compare(&self, other: &Germ) -> Ordering {
        self.sub(other).signum()
    }

    /// Value at `n`, or `None` at a root of the denominator.
    pub fn eval(&self, n: &BigInt) -> Option<BigRational> {
        let d = self.den.eval_int(n);
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(self.num.eval_int(n), d))
    }

    pub fn classify(&self) -> GermClass {
        let (dn, dd) = match (self.num.degree(), self.den.degree()) {
            (None, _) => return GermClass::Appreciable(BigRational::zero()),
            (Some(a), Some(b)) => (a, b),
            (Some(_), None) => unreachable!("denominator is nonzero"),
        };
        match dn.cmp(&dd) {
            Ordering::Less => GermClass::Infinitesimal,
            Ordering::Greater => GermClass::Infinite,
            Ordering::Equal => GermClass::Appreciable(BigRational::new(self.num.lead(), self.den.lead())),
        }
    }

    pub fn standard_part(&self) -> Result<BigRational, GermError> {
        match self.classify() {
            GermClass::Infinitesimal => Ok(BigRational::zero()),
            GermClass::Appreciable(c) => Ok(c),
            GermClass::Infinite => Err(GermError::InfiniteGerm),
        }
    }

    /// `{n : self(n) < other(n)}`, undefined points excluded. Finite or
    /// cofinite.
    pub fn lt_set(&self, other: &Germ) -> PeriodicSet {
        let h = self.sub(other);
        let bound = [&h.num, &h.den, &self.den, &other.den]
            .iter()
            .map(|p| p.cauchy_bound())
            .max()
            .unwrap_or_else(BigInt::one);
        let threshold = bound
            .to_u64()
            .expect("root bound fits in u64 for germs built from machine-size input");
        let eventually = h.signum() == Ordering::Less;
        PeriodicSet::from_fn(1, threshold, |n| {
            if n >= threshold {
                return eventually;
            }
            let n = BigInt::from(n);
            match (self.eval(&n), other.eval(&n)) {
                (Some(a), Some(b)) => a < b,
                _ => false,
            }
        })
    }

    pub fn parse(text: &str) -> Result<Germ, GermError> {
        let mut p = GermParser {
            bytes: text.as_bytes(),
            at: 0,
        };
        let g = p.expr()?;
        p.skip_ws();
        if p.at < p.bytes.len() {
            return Err(p.error("an operator or end of input"));
        }
        Ok(g)
    }
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_is_one = self.den.degree() == Some(0) && self.den.lead().is_one();
        if den_is_one {
            return write!(f, "{}", self.num);
        }
        if self.num.term_count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.degree() == Some(0) {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

/// expr := term (('+' | '-') term)*
/// term := unary (('*' | '/') unary)*
/// unary := '-' unary | power
/// power := atom ('^' digits)?
/// atom := digits | 'n' | '(' expr ')'
struct GermParser<'t> {
    bytes: &'t [u8],
    at: usize,
}

impl GermParser<'_> {
    fn skip_ws(&mut self) {
        while self.at < self.bytes.len() && self.bytes[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.at).copied()
    }

    fn error(&self, expected: &str) -> GermError {
        GermError::Parse {
            position: self.at,
            expected: expected.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Germ, GermError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.at += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Germ, GermError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.at += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' { acc.mul(&rhs) } else { acc.div(&rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Germ, GermError> {
        if self.peek() == Some(b'-') {
            self.at += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Germ, GermError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.at += 1;
        self.skip_ws();
        let e = self.digits()?;
        let e = e.to_u64().filter(|&e| e <= 64).ok_or_else(|| GermError::ExponentTooLarge(e.to_u64().unwrap_or(u64::MAX)))?;
        let mut acc = Germ::one();
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn digits(&mut self) -> Result<BigInt, GermError> {
        let start = self.at;
        while self.at < self.bytes.len() && self.bytes[self.at].is_ascii_digit() {
            self.at += 1;
        }
        if start == self.at {
            return Err(self.error("a number"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.at]).expect("ascii digits");
        Ok(s.parse().expect("ascii digits"))
    }

    fn atom(&mut self) -> Result<Germ, GermError> {
        match self.peek() {
            Some(b'(') => {
                self.at += 1;
                let g = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("`)`"));
                }
                self.at += 1;
                Ok(g)
            }
            Some(b'n') => {
                self.at += 1;
                Ok(Germ::var())
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                Ok(Germ::constant(&BigRational::from_integer(d)))
            }
            _ => Err(self.error("a number, `n` or `(`")),
        }
    }
}
