//! SO(5) irreps in the SO(4) highest-weight labelling, branching to SO(4),
//! Kronecker products and SO(4)-reduced generator matrix elements.

mod basis;
mod labels;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use basis::{Generators, WeightBasis, WeightState};
pub use labels::{convert_label, Label, Scheme};

use crate::error::{Error, Result};
use crate::exact::Radical;
use crate::halfint::HalfInt;
use crate::so4::{self, parse_pair, So4Irrep};

/// SO(5) irrep `(R,S)` with `R >= S >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct So5Irrep {
    pub r: HalfInt,
    pub s: HalfInt,
}

impl So5Irrep {
    pub const SCALAR: So5Irrep = So5Irrep { r: HalfInt::ZERO, s: HalfInt::ZERO };

    pub fn new(r: HalfInt, s: HalfInt) -> Result<Self> {
        if s.twice() < 0 || r < s {
            return Err(Error::OutOfRange(format!("SO(5) label ({r},{s}) needs R >= S >= 0")));
        }
        Ok(So5Irrep { r, s })
    }

    pub fn from_twice(r: i32, s: i32) -> Self {
        So5Irrep::new(HalfInt::from_twice(r), HalfInt::from_twice(s)).expect("valid SO(5) label")
    }

    /// Every irrep with `R <= max_r`, in canonical order.
    pub fn all_up_to(max_r: HalfInt) -> Vec<So5Irrep> {
        let mut out = Vec::new();
        for r in 0..=max_r.twice() {
            for s in 0..=r {
                out.push(So5Irrep::from_twice(r, s));
            }
        }
        out
    }

    /// Weyl dimension formula written in `[l1 l2]` labels.
    pub fn weyl_dimension(self) -> i64 {
        // twice values: 2 l1 = 2R+2S, 2 l2 = 2R-2S
        let l1 = (self.r.twice() + self.s.twice()) as i64;
        let l2 = (self.r.twice() - self.s.twice()) as i64;
        // (2l1+3)(2l2+1)(l1-l2+1)(l1+l2+2)/6 with l = twice/2
        (l1 + 3) * (l2 + 1) * (l1 - l2 + 2) * (l1 + l2 + 4) / 24
    }

    /// SO(4) content in canonical order.
    pub fn branch(self) -> Vec<So4Irrep> {
        static CACHE: OnceLock<DashMap<So5Irrep, Vec<So4Irrep>>> = OnceLock::new();
        let cache = CACHE.get_or_init(DashMap::new);
        if let Some(v) = cache.get(&self) {
            return v.clone();
        }
        let mut out = Vec::new();
        for n in 0..=(self.r.twice() - self.s.twice()) {
            for m in 0..=self.s.twice() {
                let x = self.r.twice() - n - m;
                let y = self.s.twice() + n - m;
                out.push(So4Irrep::from_twice(x, y));
            }
        }
        out.sort();
        cache.insert(self, out.clone());
        out
    }

    pub fn contains(self, xy: So4Irrep) -> bool {
        self.branch().binary_search(&xy).is_ok()
    }

    pub fn dim(self) -> i64 {
        self.weyl_dimension()
    }
}

impl fmt::Display for So5Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.s)
    }
}

impl FromStr for So5Irrep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (r, sv) = parse_pair(s)?;
        So5Irrep::new(r, sv).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl From<So5Irrep> for String {
    fn from(g: So5Irrep) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for So5Irrep {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Kronecker series `g1 x g2`, highest weight first, with outer multiplicities.
pub fn kronecker(g1: So5Irrep, g2: So5Irrep) -> Result<Vec<(So5Irrep, usize)>> {
    type Series = Vec<(So5Irrep, usize)>;
    static CACHE: OnceLock<DashMap<(So5Irrep, So5Irrep), Series>> = OnceLock::new();
    let cache = CACHE.get_or_init(DashMap::new);
    if let Some(v) = cache.get(&(g1, g2)) {
        return Ok(v.clone());
    }
    let mut content: BTreeMap<So4Irrep, i64> = BTreeMap::new();
    for a in g1.branch() {
        for b in g2.branch() {
            for c in so4::kronecker(a, b) {
                *content.entry(c).or_default() += 1;
            }
        }
    }
    let mut out: Vec<(So5Irrep, usize)> = Vec::new();
    while let Some(top) = content.keys().copied().max_by_key(|k| k.height()) {
        let g = So5Irrep::new(top.x, top.y)
            .map_err(|_| Error::InternalInconsistency(format!("peeled label {top} is not an SO(5) highest weight")))?;
        for xy in g.branch() {
            match content.get_mut(&xy) {
                Some(n) if *n > 0 => {
                    *n -= 1;
                    if *n == 0 {
                        content.remove(&xy);
                    }
                }
                _ => return Err(Error::InternalInconsistency(format!("peeling {g} from {g1} x {g2}: {xy} missing"))),
            }
        }
        match out.last_mut() {
            Some((last, n)) if *last == g => *n += 1,
            _ => out.push((g, 1)),
        }
    }
    cache.insert((g1, g2), out.clone());
    Ok(out)
}

/// Outer multiplicity of `g` in `g1 x g2`.
pub fn multiplicity(g1: So5Irrep, g2: So5Irrep, g: So5Irrep) -> Result<usize> {
    Ok(kronecker(g1, g2)?.into_iter().find(|(h, _)| *h == g).map_or(0, |(_, n)| n))
}

fn hat2(x: i32) -> i64 {
    // (2x+1) for twice-value x
    x as i64 + 1
}

/// `<g bra || T || g ket>`, reduced with respect to SO(4).
pub fn generator_rme(g: So5Irrep, bra: So4Irrep, ket: So4Irrep) -> Result<Radical> {
    for label in [bra, ket] {
        if !g.contains(label) {
            return Err(Error::BranchingViolation { irrep: g.to_string(), label: label.to_string() });
        }
    }
    Ok(rme_unchecked(g, bra, ket))
}

fn rme_unchecked(g: So5Irrep, bra: So4Irrep, ket: So4Irrep) -> Radical {
    let (r, s) = (g.r.twice() as i64, g.s.twice() as i64);
    let (x, y) = (ket.x.twice() as i64, ket.y.twice() as i64);
    let dx = bra.x.twice() - ket.x.twice();
    let dy = bra.y.twice() - ket.y.twice();
    // all factors in twice units; rme^2 = prod / (16 * 4 * (2X'+1)(2Y'+1))
    let raising = |p: [i64; 4], bx: i32, by: i32| -> Radical {
        let num: i64 = p.iter().product();
        let den = 64 * hat2(bx) * hat2(by);
        Radical::sqrt(&BigRational::new(BigInt::from(num), BigInt::from(den))).unwrap_or_else(|_| Radical::zero())
    };
    match (dx, dy) {
        (1, 1) => raising(
            [r + s - x - y, r + s + x + y + 6, -r + s + x + y + 2, r - s + x + y + 4],
            bra.x.twice(),
            bra.y.twice(),
        ),
        (1, -1) => raising(
            [r + s - x + y + 2, r + s + x - y + 4, r - s - x + y, r - s + x - y + 2],
            bra.x.twice(),
            bra.y.twice(),
        ),
        (-1, -1) | (-1, 1) => {
            let up = rme_unchecked(g, ket, bra);
            let ratio = BigRational::new(
                BigInt::from(hat2(ket.x.twice()) * hat2(ket.y.twice())),
                BigInt::from(hat2(bra.x.twice()) * hat2(bra.y.twice())),
            );
            let v = up.mul(&Radical::sqrt(&ratio).expect("positive"));
            if dx + dy == -2 {
                -v
            } else {
                v
            }
        }
        _ => Radical::zero(),
    }
}
