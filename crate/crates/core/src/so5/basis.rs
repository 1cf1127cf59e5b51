use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{rme_unchecked, So5Irrep};
use crate::exact::{Radical, RadicalSum, SparseMatrix};
use crate::halfint::HalfInt;
use crate::so4::{self, So4Irrep, So4Weight, HALF_HALF};

/// A canonical basis state `|(XY) M_X M_Y>` of an SO(5) irrep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeightState {
    pub xy: So4Irrep,
    pub w: So4Weight,
}

/// The SO(4)-adapted weight basis of one irrep, ordered by `(XY, M_X, M_Y)`.
#[derive(Clone, Debug)]
pub struct WeightBasis {
    pub irrep: So5Irrep,
    states: Vec<WeightState>,
    index: HashMap<WeightState, usize>,
}

impl WeightBasis {
    pub fn new(irrep: So5Irrep) -> Self {
        let states: Vec<WeightState> =
            irrep.branch().into_iter().flat_map(|xy| xy.weights().map(move |w| WeightState { xy, w })).collect();
        let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        WeightBasis { irrep, states, index }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[WeightState] {
        &self.states
    }

    pub fn index_of(&self, s: &WeightState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Indices of states at a weight point, in canonical `(XY)` order.
    pub fn at_weight(&self, w: So4Weight) -> Vec<usize> {
        (0..self.states.len()).filter(|&i| self.states[i].w == w).collect()
    }

    pub fn weights(&self) -> Vec<So4Weight> {
        let mut w: Vec<So4Weight> = self.states.iter().map(|s| s.w).collect();
        w.sort();
        w.dedup();
        w
    }
}

/// Exact generator matrices on the weight basis.
///
/// `x_plus` etc. are the SO(3) ladder operators; `t[a][b]` is the bitensor
/// component with `M_X = ±1/2` (a = 0 for +) and `M_Y = ±1/2` (b = 0 for +).
#[derive(Clone, Debug)]
pub struct Generators {
    pub basis: WeightBasis,
    pub x_plus: SparseMatrix,
    pub x_minus: SparseMatrix,
    pub x0: SparseMatrix,
    pub y_plus: SparseMatrix,
    pub y_minus: SparseMatrix,
    pub y0: SparseMatrix,
    pub t: [[SparseMatrix; 2]; 2],
}

fn ladder_factor(j: HalfInt, m_from: HalfInt, m_to: HalfInt) -> RadicalSum {
    // sqrt((j -/+ m)(j +/- m + 1)) in twice units
    let (j, m, to) = (j.twice() as i64, m_from.twice() as i64, m_to.twice() as i64);
    let v = if to > m { (j - m) * (j + m + 2) } else { (j + m) * (j - m + 2) };
    RadicalSum::from(Radical::sqrt(&BigRational::new(BigInt::from(v), BigInt::from(4))).expect("nonnegative"))
}

impl Generators {
    pub fn new(irrep: So5Irrep) -> Self {
        let basis = WeightBasis::new(irrep);
        let n = basis.len();
        let mut x_plus = SparseMatrix::zeros(n);
        let mut x_minus = SparseMatrix::zeros(n);
        let mut x0 = SparseMatrix::zeros(n);
        let mut y_plus = SparseMatrix::zeros(n);
        let mut y_minus = SparseMatrix::zeros(n);
        let mut y0 = SparseMatrix::zeros(n);
        let one = HalfInt::ONE;
        for (i, s) in basis.states().iter().enumerate() {
            let half = |h: HalfInt| RadicalSum::from_ratio(h.twice() as i64, 2);
            x0.add_entry(i, i, &half(s.w.mx));
            y0.add_entry(i, i, &half(s.w.my));
            let moves = [
                (&mut x_plus, s.w.mx + one, s.w.my),
                (&mut x_minus, s.w.mx - one, s.w.my),
                (&mut y_plus, s.w.mx, s.w.my + one),
                (&mut y_minus, s.w.mx, s.w.my - one),
            ];
            for (op, mx, my) in moves {
                let to = WeightState { xy: s.xy, w: So4Weight { mx, my } };
                if let Some(j) = basis.index_of(&to) {
                    let f = if mx != s.w.mx {
                        ladder_factor(s.xy.x, s.w.mx, mx)
                    } else {
                        ladder_factor(s.xy.y, s.w.my, my)
                    };
                    op.add_entry(j, i, &f);
                }
            }
        }
        let comp = |a: usize, b: usize| {
            let tw = So4Weight::from_twice(if a == 0 { 1 } else { -1 }, if b == 0 { 1 } else { -1 });
            let mut m = SparseMatrix::zeros(n);
            for (i, ket) in basis.states().iter().enumerate() {
                let w = ket.w + tw;
                for bra in so4::kronecker(ket.xy, HALF_HALF) {
                    let Some(j) = basis.index_of(&WeightState { xy: bra, w }) else { continue };
                    let c = so4::cg(ket.xy, ket.w, HALF_HALF, tw, bra, w).expect("consistent weights");
                    if c.is_zero() {
                        continue;
                    }
                    let r = rme_unchecked(irrep, bra, ket.xy);
                    m.add_entry(j, i, &RadicalSum::from(c.mul(&r)));
                }
            }
            m
        };
        let t = [[comp(0, 0), comp(0, 1)], [comp(1, 0), comp(1, 1)]];
        Generators { basis, x_plus, x_minus, x0, y_plus, y_minus, y0, t }
    }

    pub fn t_pp(&self) -> &SparseMatrix {
        &self.t[0][0]
    }

    pub fn t_pm(&self) -> &SparseMatrix {
        &self.t[0][1]
    }

    pub fn t_mp(&self) -> &SparseMatrix {
        &self.t[1][0]
    }

    pub fn t_mm(&self) -> &SparseMatrix {
        &self.t[1][1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RadicalSum {
        s.parse().unwrap()
    }

    /// Bitensor commutators close on SO(4) with the spherical components
    /// `X_{±1} = ∓X_±/√2`.
    #[test]
    fn bitensor_commutators() {
        for g in [
            So5Irrep::from_twice(1, 0),
            So5Irrep::from_twice(1, 1),
            So5Irrep::from_twice(2, 1),
            So5Irrep::from_twice(2, 0),
        ] {
            let gen = Generators::new(g);
            let c = |a: &SparseMatrix, b: &SparseMatrix| a.commutator(b);
            let half = rs("1/2");
            let mhalf = rs("-1/2");
            // -X_{+1}/√2 = X_+/2, -X_{-1}/√2 = -X_-/2
            assert_eq!(c(gen.t_pp(), gen.t_pm()), gen.x_plus.scale(&half), "{g}");
            assert_eq!(c(gen.t_pp(), gen.t_mp()), gen.y_plus.scale(&half), "{g}");
            assert_eq!(c(gen.t_pp(), gen.t_mm()), gen.x0.add(&gen.y0).scale(&mhalf), "{g}");
            assert_eq!(c(gen.t_pm(), gen.t_mp()), gen.x0.sub(&gen.y0).scale(&half), "{g}");
            assert_eq!(c(gen.t_pm(), gen.t_mm()), gen.y_minus.scale(&mhalf), "{g}");
            assert_eq!(c(gen.t_mp(), gen.t_mm()), gen.x_minus.scale(&mhalf), "{g}");
        }
    }

    #[test]
    fn su2_closure() {
        let gen = Generators::new(So5Irrep::from_twice(3, 1));
        let two = rs("2");
        assert_eq!(gen.x_plus.commutator(&gen.x_minus), gen.x0.scale(&two));
        assert_eq!(gen.y_plus.commutator(&gen.y_minus), gen.y0.scale(&two));
        assert!(gen.x_plus.commutator(&gen.y_minus).is_zero());
    }
}
