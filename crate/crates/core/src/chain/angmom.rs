//! Chain SO(5) ⊃ SO_L(3): the maximal SO(3) subalgebra.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ladder_and_complete, verify_brackets, BracketSet};
use crate::error::{Error, Result};
use crate::exact::{Radical, RadicalSum, SparseMatrix};
use crate::halfint::{triangle, HalfInt};
use crate::racah::{Column, IsoscalarBlock, VerifyReport};
use crate::so4;
use crate::so5::{Generators, So5Irrep, WeightBasis, WeightState};
use crate::su2;

/// Chain label `(L, alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chain3Key {
    pub l: HalfInt,
    pub alpha: usize,
}

impl fmt::Display for Chain3Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L={} a={}", self.l, self.alpha)
    }
}

/// How repeated labels at one weight point are told apart.
pub const ALPHA_RULE: &str = "gram-schmidt:xy-mx-ascending";

pub type Chain3Brackets = BracketSet<Chain3Key>;

/// `M_L = M_X + 3 M_Y`.
pub fn m_l(s: &WeightState) -> HalfInt {
    HalfInt::from_twice(s.w.mx.twice() + 3 * s.w.my.twice())
}

/// Content `(L, multiplicity)` of `g` by `M_L` weight counting.
pub fn chain3_branch(g: So5Irrep) -> Vec<(HalfInt, usize)> {
    let basis = WeightBasis::new(g);
    let mut count: BTreeMap<i32, i64> = BTreeMap::new();
    for s in basis.states() {
        *count.entry(m_l(s).twice()).or_default() += 1;
    }
    let mut out = Vec::new();
    for (&ml, &n) in count.range(0..) {
        let d = n - count.get(&(ml + 2)).copied().unwrap_or(0);
        if d > 0 {
            out.push((HalfInt::from_twice(ml), d as usize));
        }
    }
    out
}

/// Spherical components `L_q` (q = 1, 0, -1) and `O_q` (q = 3..-3).
#[derive(Clone, Debug)]
pub struct Chain3Generators {
    pub l: BTreeMap<i32, SparseMatrix>,
    pub o: BTreeMap<i32, SparseMatrix>,
}

fn sq(n: i64) -> RadicalSum {
    let r = Radical::sqrt_ratio(n.abs(), 1).expect("positive");
    RadicalSum::from(if n < 0 { -r } else { r })
}

pub fn chain3_generator_matrices(gen: &Generators) -> Chain3Generators {
    let lin = |terms: &[(RadicalSum, &SparseMatrix)]| {
        let mut m = SparseMatrix::zeros(gen.basis.len());
        for (c, op) in terms {
            m = m.add(&op.scale(c));
        }
        m
    };
    let int = RadicalSum::from_integer;
    let l = BTreeMap::from([
        (1, lin(&[(sq(-2), &gen.x_plus), (sq(-6), gen.t_mp())])),
        (0, lin(&[(int(1), &gen.x0), (int(3), &gen.y0)])),
        (-1, lin(&[(sq(2), &gen.x_minus), (sq(6), gen.t_pm())])),
    ]);
    let o = BTreeMap::from([
        (3, lin(&[(sq(-5), &gen.y_plus)])),
        (2, lin(&[(sq(10), gen.t_pp())])),
        (1, lin(&[(sq(-3), &gen.x_plus), (int(2), gen.t_mp())])),
        (0, lin(&[(int(3), &gen.x0), (int(-1), &gen.y0)])),
        (-1, lin(&[(sq(3), &gen.x_minus), (int(-2), gen.t_pm())])),
        (-2, lin(&[(sq(-10), gen.t_mm())])),
        (-3, lin(&[(sq(5), &gen.y_minus)])),
    ]);
    Chain3Generators { l, o }
}

impl Chain3Generators {
    /// `L^2 = L_0^2 - L_{+1} L_{-1} - L_{-1} L_{+1}`.
    pub fn l_squared(&self) -> SparseMatrix {
        let (p, z, m) = (&self.l[&1], &self.l[&0], &self.l[&-1]);
        z.mul(z).sub(&p.mul(m)).sub(&m.mul(p))
    }

    /// `L_- = sqrt(2) L_{-1}`.
    pub fn l_minus(&self) -> SparseMatrix {
        self.l[&-1].scale(&sq(2))
    }

    /// Spherically coupled commutator `[A, B]^(k)_q`.
    pub fn coupled(
        a: &BTreeMap<i32, SparseMatrix>,
        ka: i32,
        b: &BTreeMap<i32, SparseMatrix>,
        kb: i32,
        k: i32,
        q: i32,
    ) -> Result<SparseMatrix> {
        let dim = a.values().next().map_or(0, SparseMatrix::dim);
        let mut out = SparseMatrix::zeros(dim);
        let h = HalfInt::int;
        for m1 in -ka..=ka {
            let m2 = q - m1;
            if m2.abs() > kb {
                continue;
            }
            let c = su2::cg(h(ka), h(m1), h(kb), h(m2), h(k), h(q))?;
            if c.is_zero() {
                continue;
            }
            out = out.add(&a[&m1].commutator(&b[&m2]).scale(&RadicalSum::from(c)));
        }
        Ok(out)
    }
}

/// Brackets by inward laddering from the top `M_L` level.
pub fn chain3_brackets(g: So5Irrep) -> Result<Chain3Brackets> {
    chain3_brackets_with(&Generators::new(g))
}

pub fn chain3_brackets_with(gen: &Generators) -> Result<Chain3Brackets> {
    let g = gen.basis.irrep;
    let basis = &gen.basis;
    let lower = chain3_generator_matrices(gen).l_minus();
    let mut levels: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, s) in basis.states().iter().enumerate() {
        levels.entry(m_l(s).twice()).or_default().push(i);
    }
    // basis order is (XY, M_X, M_Y), which at fixed M_L is the seed order (XY, M_X)
    let levels: Vec<(HalfInt, Vec<usize>)> =
        levels.into_iter().rev().map(|(m, v)| (HalfInt::from_twice(m), v)).collect();
    let mut entries = BTreeMap::new();
    for mp in ladder_and_complete(basis.len(), &levels, &lower, &g.to_string())? {
        entries.insert(Chain3Key { l: mp.j, alpha: mp.index }, mp.vectors);
    }
    Ok(BracketSet { irrep: g, states: basis.states().to_vec(), entries })
}

/// Orthonormality at each `M_L` level and `L^2` eigen-relations.
pub fn verify_chain3_brackets(gen: &Generators, b: &Chain3Brackets) -> VerifyReport {
    verify_brackets(b, &chain3_generator_matrices(gen).l_squared(), |k| k.l, |_| ())
}

/// One row of a transformed coupling table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain3Row {
    pub k1: Chain3Key,
    pub k2: Chain3Key,
    pub k: Chain3Key,
    pub values: Vec<RadicalSum>,
}

fn evaluate(
    block: &IsoscalarBlock,
    b1: &Chain3Brackets,
    b2: &Chain3Brackets,
    b: &Chain3Brackets,
    [k1, k2, k]: [&Chain3Key; 3],
    ml: HalfInt,
) -> Result<Vec<RadicalSum>> {
    let mut out = vec![RadicalSum::zero(); block.multiplicity()];
    let target = b.sparse(k, ml);
    for ml1 in k1.l.projections() {
        let ml2 = ml - ml1;
        if ml2.abs() > k2.l {
            continue;
        }
        let cl = su2::cg(k1.l, ml1, k2.l, ml2, k.l, ml)?;
        if cl.is_zero() {
            continue;
        }
        let v1 = b1.sparse(k1, ml1);
        let v2 = b2.sparse(k2, ml2);
        for &(i, x1) in &v1 {
            let s1 = b1.states[i];
            for &(j, x2) in &v2 {
                let s2 = b2.states[j];
                for &(l, x) in &target {
                    let s = b.states[l];
                    if s1.w + s2.w != s.w {
                        continue;
                    }
                    let Some(col) = block.column_index(&Column { x1y1: s1.xy, x2y2: s2.xy, xy: s.xy }) else {
                        continue;
                    };
                    let c4 = so4::cg(s1.xy, s1.w, s2.xy, s2.w, s.xy, s.w)?;
                    if c4.is_zero() {
                        continue;
                    }
                    let f = RadicalSum::from(cl.mul(&c4));
                    let f = &(&(&f * x1) * x2) * x;
                    for (rho, o) in out.iter_mut().enumerate() {
                        let iso = &block.values[rho][col];
                        if !iso.is_zero() {
                            *o += &(&f * iso);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Reduced coefficients in the angular-momentum chain for one coupling block.
///
/// Each entry is evaluated at `M_L = L` and at `M_L = -L`; a mismatch is an error.
/// Rows that vanish for every `rho` are omitted.
pub fn chain3_transform(
    block: &IsoscalarBlock,
    b1: &Chain3Brackets,
    b2: &Chain3Brackets,
    b: &Chain3Brackets,
) -> Result<Vec<Chain3Row>> {
    let key = block.key;
    if (b1.irrep, b2.irrep, b.irrep) != (key.g1, key.g2, key.g) {
        return Err(Error::InternalInconsistency(format!("brackets do not match {key}")));
    }
    let mut rows = Vec::new();
    for k1 in b1.entries.keys() {
        for k2 in b2.entries.keys() {
            for k in b.entries.keys() {
                if !triangle(k1.l, k2.l, k.l) {
                    continue;
                }
                let values = evaluate(block, b1, b2, b, [k1, k2, k], k.l)?;
                if k.l.twice() > 0 {
                    let other = evaluate(block, b1, b2, b, [k1, k2, k], -k.l)?;
                    if other != values {
                        return Err(Error::TransformInconsistent(format!("{key}: {k1} {k2} {k}")));
                    }
                }
                if values.iter().any(|v| !v.is_zero()) {
                    rows.push(Chain3Row { k1: *k1, k2: *k2, k: *k, values });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(r: i32, s: i32) -> So5Irrep {
        So5Irrep::from_twice(r, s)
    }

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn branching() {
        assert_eq!(chain3_branch(g(0, 0)), vec![(h(0), 1)]);
        assert_eq!(chain3_branch(g(2, 0)), vec![(h(2), 1), (h(6), 1)]);
        assert_eq!(chain3_branch(g(2, 2)), vec![(h(4), 1), (h(8), 1)]);
    }

    #[test]
    fn commutators() {
        for irrep in [g(1, 1), g(2, 0), g(2, 1)] {
            let gen = Generators::new(irrep);
            let c = chain3_generator_matrices(&gen);
            type Ops = BTreeMap<i32, SparseMatrix>;
            let cases: [(&Ops, i32, &Ops, i32, i32, &Ops, RadicalSum); 4] = [
                (&c.l, 1, &c.l, 1, 1, &c.l, sq(-2)),
                (&c.l, 1, &c.o, 3, 3, &c.o, -&sq(12)),
                (&c.o, 3, &c.o, 3, 1, &c.l, -&sq(28)),
                (&c.o, 3, &c.o, 3, 3, &c.o, sq(6)),
            ];
            for (a, ka, b, kb, k, res, f) in cases {
                for q in -k..=k {
                    let lhs = Chain3Generators::coupled(a, ka, b, kb, k, q).unwrap();
                    assert_eq!(lhs, res[&q].scale(&f), "{irrep} k={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn adjoint_l_squared_spectrum() {
        let gen = Generators::new(g(2, 0));
        let l2 = chain3_generator_matrices(&gen).l_squared();
        let b = chain3_brackets_with(&gen).unwrap();
        let mut count = BTreeMap::new();
        for (k, by_m) in &b.entries {
            let ll = RadicalSum::from_ratio((k.l.twice() as i64) * (k.l.twice() as i64 + 2), 4);
            for v in by_m.values() {
                let lv = l2.apply(v);
                for (x, y) in lv.iter().zip(v) {
                    assert_eq!(*x, &ll * y);
                }
                *count.entry(k.l).or_insert(0) += 1;
            }
        }
        assert_eq!(count, BTreeMap::from([(h(2), 3), (h(6), 7)]));
        let top = b.sparse(&Chain3Key { l: h(6), alpha: 1 }, h(6));
        assert_eq!(top.len(), 1);
        assert!(top[0].1.is_one());
    }
}
