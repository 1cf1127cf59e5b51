use std::fmt;
use std::str::FromStr;

use super::So5Irrep;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Labelling conventions for SO(5) irreps found in the literature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `[l1 l2]`
    Cartan,
    /// `(a1 a2)`
    Dynkin,
    /// `(v f)`
    DynkinModified,
    /// Sp(4) `<l1' l2'>`
    Sp4Cartan,
    /// Sp(4) `(a1' a2')`
    Sp4Dynkin,
    /// SO(4) highest weight `(R S)`
    HighestWeight,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Cartan,
        Scheme::Dynkin,
        Scheme::DynkinModified,
        Scheme::Sp4Cartan,
        Scheme::Sp4Dynkin,
        Scheme::HighestWeight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Cartan => "cartan",
            Scheme::Dynkin => "dynkin",
            Scheme::DynkinModified => "dynkin-modified",
            Scheme::Sp4Cartan => "sp4-cartan",
            Scheme::Sp4Dynkin => "sp4-dynkin",
            Scheme::HighestWeight => "hw",
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown label scheme {s:?}")))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A pair of labels in a given scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub scheme: Scheme,
    pub a: HalfInt,
    pub b: HalfInt,
}

impl Label {
    pub fn new(scheme: Scheme, a: HalfInt, b: HalfInt) -> Result<Self> {
        let l = Label { scheme, a, b };
        l.validate()?;
        Ok(l)
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = (self.a, self.b);
        let nonneg = a.twice() >= 0 && b.twice() >= 0;
        let ok = nonneg
            && match self.scheme {
                Scheme::Cartan => a >= b && (a - b).is_integer(),
                Scheme::Dynkin | Scheme::Sp4Dynkin => a.is_integer() && b.is_integer(),
                Scheme::DynkinModified => a.is_integer(),
                Scheme::Sp4Cartan => b.is_integer() && a >= b && (a - b).is_integer(),
                Scheme::HighestWeight => a >= b,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("{} labels ({a},{b})", self.scheme)))
        }
    }

    /// Cartan `[l1 l2]` values, as twice-integers.
    fn cartan_twice(&self) -> (i32, i32) {
        let (a, b) = (self.a.twice(), self.b.twice());
        match self.scheme {
            Scheme::Cartan => (a, b),
            // a1 = l1 - l2, a2 = 2 l2
            Scheme::Dynkin => (a + b / 2, b / 2),
            // v = l1 - l2, f = l2
            Scheme::DynkinModified => (a + b, b),
            // l1' = l1 + l2, l2' = l1 - l2
            Scheme::Sp4Cartan => ((a + b) / 2, (a - b) / 2),
            // a1' = 2 l2, a2' = l1 - l2
            Scheme::Sp4Dynkin => (b + a / 2, a / 2),
            // R = (l1 + l2)/2, S = (l1 - l2)/2
            Scheme::HighestWeight => (a + b, a - b),
        }
    }

    fn from_cartan_twice(scheme: Scheme, l1: i32, l2: i32) -> Label {
        let h = HalfInt::from_twice;
        let (a, b) = match scheme {
            Scheme::Cartan => (l1, l2),
            Scheme::Dynkin => (l1 - l2, 2 * l2),
            Scheme::DynkinModified => (l1 - l2, l2),
            Scheme::Sp4Cartan => (l1 + l2, l1 - l2),
            Scheme::Sp4Dynkin => (2 * l2, l1 - l2),
            Scheme::HighestWeight => ((l1 + l2) / 2, (l1 - l2) / 2),
        };
        Label { scheme, a: h(a), b: h(b) }
    }

    pub fn to_irrep(&self) -> Result<So5Irrep> {
        let hw = convert_label(*self, Scheme::HighestWeight)?;
        So5Irrep::new(hw.a, hw.b)
    }

    pub fn from_irrep(g: So5Irrep) -> Label {
        Label { scheme: Scheme::HighestWeight, a: g.r, b: g.s }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.scheme {
            Scheme::Cartan => write!(f, "[{},{}]", self.a, self.b),
            Scheme::Sp4Cartan => write!(f, "<{},{}>", self.a, self.b),
            _ => write!(f, "({},{})", self.a, self.b),
        }
    }
}

/// Convert between labelling schemes.
pub fn convert_label(value: Label, target: Scheme) -> Result<Label> {
    value.validate()?;
    let (l1, l2) = value.cartan_twice();
    Ok(Label::from_cartan_twice(target, l1, l2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn conversions() {
        let hw = Label::new(Scheme::HighestWeight, h(1), h(0)).unwrap();
        let c = convert_label(hw, Scheme::Cartan).unwrap();
        assert_eq!((c.a, c.b), (h(1), h(1)));
        let hw = Label::new(Scheme::HighestWeight, h(2), h(1)).unwrap();
        let c = convert_label(hw, Scheme::Cartan).unwrap();
        assert_eq!((c.a, c.b), (h(3), h(1)));
        let zero = Label::new(Scheme::HighestWeight, h(0), h(0)).unwrap();
        for k in Scheme::ALL {
            let z = convert_label(zero, k).unwrap();
            assert_eq!((z.a, z.b), (h(0), h(0)));
        }
    }

    #[test]
    fn round_trips() {
        for g in So5Irrep::all_up_to(h(6)) {
            for k in Scheme::ALL {
                let l = convert_label(Label::from_irrep(g), k).unwrap();
                assert!(l.validate().is_ok(), "{l} in {k}");
                assert_eq!(l.to_irrep().unwrap(), g);
            }
        }
    }

    #[test]
    fn ranges() {
        assert!(Label::new(Scheme::Cartan, h(1), h(3)).is_err());
        assert!(Label::new(Scheme::Dynkin, h(1), h(0)).is_err());
        assert!(Label::new(Scheme::Sp4Cartan, h(2), h(1)).is_err());
        assert!(convert_label(Label { scheme: Scheme::HighestWeight, a: h(1), b: h(2) }, Scheme::Cartan).is_err());
    }
}
