use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::primes::smallest_prime_factor;
use super::radical::Radical;
use crate::error::{Error, Result};

/// A finite sum of radicals, keyed by squarefree radicand.
///
/// No stored coefficient is ever zero, so the empty map is the only
/// representation of zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct RadicalSum {
    terms: BTreeMap<BigUint, BigRational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        RadicalSum { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        RadicalSum::from_rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        RadicalSum::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        RadicalSum::from_rational(BigRational::new(p.into(), q.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut s = RadicalSum::zero();
        s.add_term(BigUint::one(), q);
        s
    }

    /// `sqrt(p/q)` for a nonnegative ratio.
    pub fn sqrt_ratio(p: i64, q: i64) -> Result<Self> {
        Radical::sqrt_ratio(p, q).map(RadicalSum::from)
    }

    fn add_term(&mut self, radicand: BigUint, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(radicand) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = Radical> + '_ {
        self.terms.iter().map(|(r, c)| Radical::from_parts_unchecked(c.clone(), r.clone()))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    pub fn as_radical(&self) -> Option<Radical> {
        match self.terms.len() {
            0 => Some(Radical::zero()),
            1 => self.terms().next(),
            _ => None,
        }
    }

    pub fn scale(&self, q: &BigRational) -> RadicalSum {
        if q.is_zero() {
            return RadicalSum::zero();
        }
        RadicalSum { terms: self.terms.iter().map(|(r, c)| (r.clone(), c * q)).collect() }
    }

    pub fn mul_radical(&self, x: &Radical) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for t in self.terms() {
            let p = t.mul(x);
            out.add_term(p.radicand().clone(), p.coeff().clone());
        }
        out
    }

    pub fn square(&self) -> RadicalSum {
        self * self
    }

    /// Split as `a + b sqrt(p)` where no radicand in `a` or `b` is divisible by `p`.
    fn split_at_prime(&self, p: &BigUint) -> (RadicalSum, RadicalSum) {
        let mut a = RadicalSum::zero();
        let mut b = RadicalSum::zero();
        for (r, c) in &self.terms {
            if (r % p).is_zero() {
                b.add_term(r / p, c.clone());
            } else {
                a.add_term(r.clone(), c.clone());
            }
        }
        (a, b)
    }

    pub fn inv(&self) -> Result<RadicalSum> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        if let Some(x) = self.as_radical() {
            return x.recip().map(RadicalSum::from);
        }
        // pick a prime from the largest radicand and multiply through by its conjugate
        let top = self.terms.keys().next_back().expect("nonempty");
        let p = smallest_prime_factor(top);
        let (a, b) = self.split_at_prime(&p);
        let conj = &a - &b.mul_radical(&Radical::sqrt(&big_rat(&p))?);
        let pb2 = b.square().scale(&big_rat(&p));
        let norm = &a.square() - &pb2;
        let inv_norm = norm.inv()?;
        Ok(&conj * &inv_norm)
    }

    pub fn checked_div(&self, other: &RadicalSum) -> Result<RadicalSum> {
        Ok(self * &other.inv()?)
    }

    /// Square root of a value that must be a nonnegative rational.
    pub fn sqrt(&self) -> Result<RadicalSum> {
        match self.as_rational() {
            Some(q) if q.is_negative() => Err(Error::NegativeRadicand),
            Some(q) => Radical::sqrt(&q).map(RadicalSum::from),
            None => Err(Error::NonRadicalNorm(self.to_string())),
        }
    }

    /// Interval `[lo, hi]` containing `self * 10^digits`.
    fn bracket(&self, digits: u32) -> (BigInt, BigInt) {
        let scale = BigUint::from(10u32).pow(2 * digits);
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for t in self.terms() {
            let sq = t.square();
            let num = sq.numer().magnitude() * &scale;
            let a = BigInt::from_biguint(Sign::Plus, (num / sq.denom().magnitude()).sqrt());
            let exact = &a * &a * sq.denom() == BigInt::from_biguint(Sign::Plus, sq.numer().magnitude() * &scale);
            let b = if exact { a.clone() } else { &a + 1 };
            if t.signum() > 0 {
                lo += a;
                hi += b;
            } else {
                lo -= b;
                hi -= a;
            }
        }
        (lo, hi)
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(x) = self.as_radical() {
            return x.signum();
        }
        let mut digits = 8;
        loop {
            let (lo, hi) = self.bracket(digits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            // nonzero by linear independence, so refinement terminates
            digits *= 2;
        }
    }

    pub fn abs(&self) -> RadicalSum {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.as_radical() {
            Some(x) => x.to_f64(),
            None => {
                let (lo, _) = self.bracket(30);
                lo.to_f64().unwrap_or(f64::NAN) / 1e30
            }
        }
    }

    /// Correctly rounded decimal with `places` digits after the point,
    /// ties away from zero.
    pub fn to_decimal(&self, places: u32) -> String {
        let mut guard = 4;
        loop {
            let (lo, hi) = self.bracket(places + guard);
            let unit = BigInt::from(10u32).pow(guard);
            let rl = round_div(&lo, &unit);
            let rh = round_div(&hi, &unit);
            if rl == rh {
                return format_fixed(&rl, places);
            }
            guard *= 2;
        }
    }
}

fn round_div(x: &BigInt, unit: &BigInt) -> BigInt {
    let half = unit / 2;
    if x.is_negative() {
        let m: BigInt = -x + &half;
        -(m.div_floor(unit))
    } else {
        let m: BigInt = x + &half;
        m.div_floor(unit)
    }
}

fn format_fixed(v: &BigInt, places: u32) -> String {
    let neg = v.is_negative();
    let digits = v.magnitude().to_string();
    let p = places as usize;
    let padded = if digits.len() <= p { format!("{}{}", "0".repeat(p + 1 - digits.len()), digits) } else { digits };
    let (int, frac) = padded.split_at(padded.len() - p);
    let sign = if neg && v.magnitude().bits() > 0 { "-" } else { "" };
    if p == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn big_rat(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n.clone()))
}

impl From<Radical> for RadicalSum {
    fn from(x: Radical) -> Self {
        let mut s = RadicalSum::zero();
        s.add_term(x.radicand().clone(), x.coeff().clone());
        s
    }
}

impl From<BigRational> for RadicalSum {
    fn from(q: BigRational) -> Self {
        RadicalSum::from_rational(q)
    }
}

impl From<i64> for RadicalSum {
    fn from(n: i64) -> Self {
        RadicalSum::from_integer(n)
    }
}

impl<'a> Add<&'a RadicalSum> for &'a RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a RadicalSum> for &'a RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a RadicalSum> for &'a RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for a in self.terms() {
            for b in rhs.terms() {
                let p = a.mul(&b);
                out.add_term(p.radicand().clone(), p.coeff().clone());
            }
        }
        out
    }
}

impl Add for RadicalSum {
    type Output = RadicalSum;
    fn add(mut self, rhs: RadicalSum) -> RadicalSum {
        self += &rhs;
        self
    }
}

impl Sub for RadicalSum {
    type Output = RadicalSum;
    fn sub(mut self, rhs: RadicalSum) -> RadicalSum {
        self -= &rhs;
        self
    }
}

impl Mul for RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: RadicalSum) -> RadicalSum {
        &self * &rhs
    }
}

impl AddAssign<&RadicalSum> for RadicalSum {
    fn add_assign(&mut self, rhs: &RadicalSum) {
        for (r, c) in &rhs.terms {
            self.add_term(r.clone(), c.clone());
        }
    }
}

impl SubAssign<&RadicalSum> for RadicalSum {
    fn sub_assign(&mut self, rhs: &RadicalSum) {
        for (r, c) in &rhs.terms {
            self.add_term(r.clone(), -c.clone());
        }
    }
}

impl Neg for RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum { terms: self.terms.into_iter().map(|(r, c)| (r, -c)).collect() }
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        -(self.clone())
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for t in self.terms() {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for RadicalSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        // split before every top-level sign that is not the first character
        let mut pieces = Vec::new();
        let mut start = 0;
        let mut depth = 0i32;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > start => {
                    pieces.push(&s[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        pieces.push(&s[start..]);
        let mut out = RadicalSum::zero();
        for p in pieces {
            out += &RadicalSum::from(p.parse::<Radical>()?);
        }
        Ok(out)
    }
}

impl From<RadicalSum> for String {
    fn from(s: RadicalSum) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for RadicalSum {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
