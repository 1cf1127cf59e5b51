use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A spin-like value stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Integer value; `None` for odd half-integers.
    pub fn to_int(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// `(-1)^self` for integral values.
    pub fn phase(self) -> Option<i32> {
        self.to_int().map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    /// `2j+1`.
    pub fn dim(self) -> i64 {
        self.0 as i64 + 1
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Values `-j, -j+1, ..., j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.0;
        (0..=j).map(move |k| HalfInt(2 * k - j))
    }

    /// Values `lo, lo+1, ..., hi`.
    pub fn range_inclusive(lo: HalfInt, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
        let (lo, hi) = (lo.0, hi.0);
        (0..).map(move |k| HalfInt(lo + 2 * k)).take_while(move |v| v.0 <= hi)
    }
}

/// Whether `a`, `b`, `c` obey the angular momentum triangle rule.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    a.0 >= 0 && b.0 >= 0 && c.0 >= 0 && (a.0 + b.0 + c.0) % 2 == 0 && c.0 >= (a.0 - b.0).abs() && c.0 <= a.0 + b.0
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        match s.split_once('/') {
            Some((num, den)) => {
                let num: i32 = num.trim().parse().map_err(|_| bad())?;
                match den.trim() {
                    "1" => Ok(HalfInt(2 * num)),
                    "2" => Ok(HalfInt(num)),
                    _ => Err(bad()),
                }
            }
            None => s.parse::<i32>().map(HalfInt::int).map_err(|_| bad()),
        }
    }
}

impl From<HalfInt> for String {
    fn from(h: HalfInt) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for HalfInt {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        for (s, t) in [("0", 0), ("1/2", 1), ("-3/2", -3), ("2", 4), ("4/2", 4)] {
            assert_eq!(s.parse::<HalfInt>().unwrap().twice(), t);
        }
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
        assert_eq!(HalfInt::from_twice(4).to_string(), "2");
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
    }

    #[test]
    fn projections_and_triangle() {
        let m: Vec<i32> = HalfInt::from_twice(3).projections().map(|h| h.twice()).collect();
        assert_eq!(m, vec![-3, -1, 1, 3]);
        assert_eq!(HalfInt::from_twice(-1).projections().count(), 0);
        assert!(triangle(HalfInt::HALF, HalfInt::HALF, HalfInt::ONE));
        assert!(!triangle(HalfInt::HALF, HalfInt::HALF, HalfInt::HALF));
        assert!(!triangle(HalfInt::ONE, HalfInt::ONE, HalfInt::int(3)));
    }
}
