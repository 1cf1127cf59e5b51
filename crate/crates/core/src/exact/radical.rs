use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primes::square_free_split;
use crate::error::{Error, Result};

/// A signed rational multiple of the square root of a squarefree integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Radical {
    coeff: BigRational,
    radicand: BigUint,
}

impl Radical {
    pub fn zero() -> Self {
        Radical { coeff: BigRational::zero(), radicand: BigUint::one() }
    }

    pub fn one() -> Self {
        Radical::from_rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Radical::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Radical { coeff: q, radicand: BigUint::one() }
    }

    pub(crate) fn from_parts_unchecked(coeff: BigRational, radicand: BigUint) -> Self {
        debug_assert!(!coeff.is_zero() || radicand.is_one());
        Radical { coeff, radicand }
    }

    /// `coeff * sqrt(radicand)` brought to canonical form.
    pub fn canonicalize(coeff: BigRational, radicand: &BigRational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if coeff.is_zero() || radicand.is_zero() {
            return Ok(Radical::zero());
        }
        // sqrt(p/q) = sqrt(p q) / q
        let p = radicand.numer().magnitude();
        let q = radicand.denom().magnitude();
        let (s, f) = square_free_split(&(p * q));
        let scale = BigRational::new(BigInt::from_biguint(Sign::Plus, s), BigInt::from_biguint(Sign::Plus, q.clone()));
        Ok(Radical { coeff: coeff * scale, radicand: f })
    }

    /// Nonnegative square root of a nonnegative rational.
    pub fn sqrt(q: &BigRational) -> Result<Self> {
        Radical::canonicalize(BigRational::one(), q)
    }

    pub fn sqrt_ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroDivision);
        }
        Radical::sqrt(&BigRational::new(p.into(), q.into()))
    }

    /// `sign * sqrt(q)`.
    pub fn signed_sqrt(negative: bool, q: &BigRational) -> Result<Self> {
        let r = Radical::sqrt(q)?;
        Ok(if negative { -r } else { r })
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }

    pub fn signum(&self) -> i32 {
        if self.coeff.is_zero() {
            0
        } else if self.coeff.is_positive() {
            1
        } else {
            -1
        }
    }

    /// The square `coeff^2 * radicand`.
    pub fn square(&self) -> BigRational {
        let r = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, self.radicand.clone()));
        &self.coeff * &self.coeff * r
    }

    pub fn mul(&self, other: &Radical) -> Radical {
        if self.is_zero() || other.is_zero() {
            return Radical::zero();
        }
        // both radicands squarefree: r1 r2 = g^2 (r1/g)(r2/g) with the cofactor squarefree
        let g = self.radicand.gcd(&other.radicand);
        let radicand = (&self.radicand / &g) * (&other.radicand / &g);
        let g = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, g));
        Radical { coeff: &self.coeff * &other.coeff * g, radicand }
    }

    pub fn scale(&self, q: &BigRational) -> Radical {
        if q.is_zero() {
            return Radical::zero();
        }
        Radical { coeff: &self.coeff * q, radicand: self.radicand.clone() }
    }

    pub fn recip(&self) -> Result<Radical> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        // 1/(c sqrt r) = sqrt(r) / (c r)
        let r = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, self.radicand.clone()));
        Ok(Radical { coeff: (&self.coeff * r).recip(), radicand: self.radicand.clone() })
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl std::ops::Neg for Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        Radical { coeff: -self.coeff, radicand: self.radicand }
    }
}

impl std::ops::Neg for &Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        -(self.clone())
    }
}

impl From<i64> for Radical {
    fn from(n: i64) -> Self {
        Radical::from_integer(n)
    }
}

pub(crate) fn write_rational(f: &mut impl fmt::Write, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str(if self.coeff.is_negative() { "-sqrt(" } else { "+sqrt(" })?;
        write_rational(f, &self.square())?;
        f.write_str(")")
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
    }
}

impl FromStr for Radical {
    type Err = Error;

    /// Accepts `0`, `[+|-]sqrt(p/q)` and plain rationals.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (negative, body) = match t.as_bytes().first() {
            Some(b'-') => (true, t[1..].trim_start()),
            Some(b'+') => (false, t[1..].trim_start()),
            _ => (false, t),
        };
        if let Some(inner) = body.strip_prefix("sqrt(").and_then(|b| b.strip_suffix(')')) {
            let q = parse_rational(inner)?;
            return Radical::signed_sqrt(negative, &q).map_err(|_| Error::Parse(format!("bad radical: {s:?}")));
        }
        let q = parse_rational(body)?;
        Ok(Radical::from_rational(if negative { -q } else { q }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> BigRational {
        BigRational::new(p.into(), r.into())
    }

    #[test]
    fn canonical_forms() {
        let r = Radical::canonicalize(q(1, 1), &q(8, 9)).unwrap();
        assert_eq!(r.coeff(), &q(2, 3));
        assert_eq!(r.radicand(), &BigUint::from(2u32));
        let r = Radical::canonicalize(q(5, 1), &q(1, 1)).unwrap();
        assert_eq!(r, Radical::from_integer(5));
        let r = Radical::sqrt(&q(45, 32)).unwrap();
        assert_eq!(r.coeff(), &q(3, 8));
        assert_eq!(r.radicand(), &BigUint::from(10u32));
        assert!(Radical::sqrt(&q(0, 1)).unwrap().is_zero());
        assert_eq!(Radical::sqrt(&q(-1, 2)), Err(Error::NegativeRadicand));
    }

    #[test]
    fn render_and_parse() {
        let r = Radical::signed_sqrt(true, &q(4, 5)).unwrap();
        assert_eq!(r.to_string(), "-sqrt(4/5)");
        assert_eq!("-sqrt(4/5)".parse::<Radical>().unwrap(), r);
        assert_eq!(Radical::from_integer(3).to_string(), "+sqrt(9)");
        assert_eq!("1/2".parse::<Radical>().unwrap(), Radical::from_rational(q(1, 2)));
        assert_eq!("0".parse::<Radical>().unwrap(), Radical::zero());
        assert!("sqrt(-2)".parse::<Radical>().is_err());
    }

    #[test]
    fn products() {
        let a = Radical::sqrt(&q(1, 5)).unwrap();
        let b = Radical::sqrt(&q(4, 5)).unwrap();
        assert_eq!(a.mul(&b), Radical::from_rational(q(2, 5)));
        let c = Radical::sqrt(&q(6, 1)).unwrap().mul(&Radical::sqrt(&q(10, 1)).unwrap());
        assert_eq!(c, Radical::canonicalize(q(2, 1), &q(15, 1)).unwrap());
        assert_eq!(b.recip().unwrap(), Radical::sqrt(&q(5, 4)).unwrap());
    }
}
