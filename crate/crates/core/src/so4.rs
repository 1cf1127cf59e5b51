//! SO(4) ~ SU(2) x SU(2) labels and factorized Wigner calculus.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Radical;
use crate::halfint::{triangle, HalfInt};
use crate::su2;

/// Irrep `(X,Y)` of SO(4). Ordering is by twice-X then twice-Y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct So4Irrep {
    pub x: HalfInt,
    pub y: HalfInt,
}

/// Weight `(M_X, M_Y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct So4Weight {
    pub mx: HalfInt,
    pub my: HalfInt,
}

/// The bitensor label `(1/2,1/2)` carried by the SO(5) generators outside SO(4).
pub const HALF_HALF: So4Irrep = So4Irrep { x: HalfInt::HALF, y: HalfInt::HALF };

impl So4Irrep {
    pub fn new(x: HalfInt, y: HalfInt) -> Result<Self> {
        if x.twice() < 0 || y.twice() < 0 {
            return Err(Error::OutOfRange(format!("negative SO(4) label ({x},{y})")));
        }
        Ok(So4Irrep { x, y })
    }

    pub fn from_twice(x: i32, y: i32) -> Self {
        So4Irrep::new(HalfInt::from_twice(x), HalfInt::from_twice(y)).expect("nonnegative labels")
    }

    pub fn dim(self) -> i64 {
        self.x.dim() * self.y.dim()
    }

    pub fn contains(self, w: So4Weight) -> bool {
        w.mx.abs() <= self.x && w.my.abs() <= self.y && (self.x - w.mx).is_integer() && (self.y - w.my).is_integer()
    }

    /// Weights in ascending `(M_X, M_Y)` order.
    pub fn weights(self) -> impl Iterator<Item = So4Weight> {
        self.x.projections().flat_map(move |mx| self.y.projections().map(move |my| So4Weight { mx, my }))
    }

    /// Highest-weight key used for peeling and phase fixing.
    pub fn height(self) -> (i32, i32) {
        (self.x.twice() + self.y.twice(), self.x.twice())
    }
}

impl So4Weight {
    pub fn new(mx: HalfInt, my: HalfInt) -> Self {
        So4Weight { mx, my }
    }

    pub fn from_twice(mx: i32, my: i32) -> Self {
        So4Weight { mx: HalfInt::from_twice(mx), my: HalfInt::from_twice(my) }
    }
}

impl std::ops::Add for So4Weight {
    type Output = So4Weight;
    fn add(self, o: So4Weight) -> So4Weight {
        So4Weight { mx: self.mx + o.mx, my: self.my + o.my }
    }
}

impl std::ops::Sub for So4Weight {
    type Output = So4Weight;
    fn sub(self, o: So4Weight) -> So4Weight {
        So4Weight { mx: self.mx - o.mx, my: self.my - o.my }
    }
}

pub fn triangle4(a: So4Irrep, b: So4Irrep, c: So4Irrep) -> bool {
    triangle(a.x, b.x, c.x) && triangle(a.y, b.y, c.y)
}

/// `<(X1Y1) w1; (X2Y2) w2 | (XY) w>`.
pub fn cg(i1: So4Irrep, w1: So4Weight, i2: So4Irrep, w2: So4Weight, i: So4Irrep, w: So4Weight) -> Result<Radical> {
    let a = su2::cg(i1.x, w1.mx, i2.x, w2.mx, i.x, w.mx)?;
    if a.is_zero() {
        return Ok(a);
    }
    Ok(a.mul(&su2::cg(i1.y, w1.my, i2.y, w2.my, i.y, w.my)?))
}

/// Product of the X-chain and Y-chain unitary recoupling coefficients.
pub fn usixj(a: So4Irrep, b: So4Irrep, ab: So4Irrep, c: So4Irrep, t: So4Irrep, bc: So4Irrep) -> Radical {
    let x = su2::usixj(a.x, b.x, ab.x, c.x, t.x, bc.x);
    if x.is_zero() {
        return x;
    }
    x.mul(&su2::usixj(a.y, b.y, ab.y, c.y, t.y, bc.y))
}

pub fn phi(a: So4Irrep, b: So4Irrep, c: So4Irrep) -> i32 {
    su2::phi(a.x, b.x, c.x) * su2::phi(a.y, b.y, c.y)
}

/// Clebsch-Gordan series of `i1 x i2` in canonical order.
pub fn kronecker(i1: So4Irrep, i2: So4Irrep) -> Vec<So4Irrep> {
    let xs = HalfInt::range_inclusive((i1.x - i2.x).abs(), i1.x + i2.x);
    let mut out = Vec::new();
    for x in xs {
        for y in HalfInt::range_inclusive((i1.y - i2.y).abs(), i1.y + i2.y) {
            out.push(So4Irrep { x, y });
        }
    }
    out
}

impl fmt::Display for So4Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for So4Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.mx, self.my)
    }
}

/// Parse `(a,b)` into two half-integers.
pub(crate) fn parse_pair(s: &str) -> Result<(HalfInt, HalfInt)> {
    let bad = || Error::Parse(format!("expected (a,b), got {s:?}"));
    let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

impl FromStr for So4Irrep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (x, y) = parse_pair(s)?;
        So4Irrep::new(x, y).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl From<So4Irrep> for String {
    fn from(i: So4Irrep) -> String {
        i.to_string()
    }
}

impl TryFrom<String> for So4Irrep {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn irr(x: i32, y: i32) -> So4Irrep {
        So4Irrep::from_twice(x, y)
    }

    #[test]
    fn series() {
        assert_eq!(kronecker(irr(0, 0), irr(3, 2)), vec![irr(3, 2)]);
        assert_eq!(kronecker(irr(1, 0), irr(0, 1)), vec![irr(1, 1)]);
        assert_eq!(kronecker(irr(1, 1), irr(1, 1)), vec![irr(0, 0), irr(0, 2), irr(2, 0), irr(2, 2)]);
    }

    #[test]
    fn coupling_values() {
        let w = So4Weight::from_twice;
        let v = cg(irr(1, 1), w(1, 1), irr(1, 1), w(-1, -1), irr(0, 0), w(0, 0)).unwrap();
        assert_eq!(v, "1/2".parse().unwrap());
        assert!(cg(irr(1, 1), w(1, 1), irr(1, 1), w(1, -1), irr(0, 0), w(0, 0)).unwrap().is_zero());
        let u = usixj(irr(1, 1), irr(1, 1), irr(2, 2), irr(1, 1), irr(1, 1), irr(2, 2));
        assert_eq!(u, "1/4".parse().unwrap());
        let x_only = usixj(irr(1, 0), irr(1, 0), irr(2, 0), irr(1, 0), irr(1, 0), irr(2, 0));
        assert_eq!(
            x_only,
            su2::usixj(HalfInt::HALF, HalfInt::HALF, HalfInt::ONE, HalfInt::HALF, HalfInt::HALF, HalfInt::ONE)
        );
    }

    #[test]
    fn text_form() {
        assert_eq!(irr(1, 0).to_string(), "(1/2,0)");
        assert_eq!("(3/2, 1)".parse::<So4Irrep>().unwrap(), irr(3, 2));
        assert!("(1/2,-1)".parse::<So4Irrep>().is_err());
        assert!("1/2,0".parse::<So4Irrep>().is_err());
    }
}
