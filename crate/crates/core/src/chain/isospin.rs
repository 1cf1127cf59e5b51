//! Chain SO(5) ⊃ U(1) x SO_T(3): number and isospin.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ladder_and_complete, verify_brackets, BracketSet};
use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, Radical, RadicalSum, SparseMatrix};
use crate::halfint::{triangle, HalfInt};
use crate::racah::{Column, IsoscalarBlock, VerifyReport};
use crate::so4::{self, So4Weight, HALF_HALF};
use crate::so5::{generator_rme, Generators, So5Irrep, WeightBasis};
use crate::su2;

/// Chain label `(M_S, T, kappa)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chain2Key {
    pub ms: HalfInt,
    pub t: HalfInt,
    pub kappa: usize,
}

impl fmt::Display for Chain2Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M_S={} T={} k={}", self.ms, self.t, self.kappa)
    }
}

/// How repeated labels at one weight point are told apart.
pub const KAPPA_RULE: &str = "gram-schmidt:xy-ascending";

pub type Chain2Brackets = BracketSet<Chain2Key>;

/// Weight point for `(M_S, M_T)`.
pub fn weight_of(ms: HalfInt, mt: HalfInt) -> So4Weight {
    So4Weight::from_twice((ms.twice() + mt.twice()) / 2, (ms.twice() - mt.twice()) / 2)
}

fn f_count(u2: i64, v2: i64, w2: i64) -> i64 {
    // twice-valued arguments; quantities below are in units of 1/4
    let hi = (2 * u2).min(u2 + v2 + w2).div_euclid(4);
    let lo = 0.max(u2 - v2 + w2);
    let lo = -((-lo).div_euclid(4));
    (hi - lo + 1).max(0)
}

/// Closed-form multiplicity of `(M_S, T)` in `g`.
pub fn multiplicity(g: So5Irrep, ms: HalfInt, t: HalfInt) -> usize {
    let (r, s) = (g.r.twice() as i64, g.s.twice() as i64);
    let (ms2, t2) = (ms.twice() as i64, t.twice() as i64);
    if t2 < 0 || (t2 - ms2) % 2 != 0 || ms2.abs() > r + s || t2 > r + s {
        return 0;
    }
    let n = if t2 <= r - s { f_count(2 * s, t2, ms2) } else { f_count(r + s - t2, r - s, ms2) };
    n as usize
}

/// Content `(M_S, T, multiplicity)` of `g`, by `M_S` descending then `T` ascending.
pub fn chain2_branch(g: So5Irrep) -> Vec<(HalfInt, HalfInt, usize)> {
    let top = g.r.twice() + g.s.twice();
    let mut out = Vec::new();
    let mut ms = top;
    while ms >= -top {
        let mut t = ms.rem_euclid(2);
        while t <= top {
            let n = multiplicity(g, HalfInt::from_twice(ms), HalfInt::from_twice(t));
            if n > 0 {
                out.push((HalfInt::from_twice(ms), HalfInt::from_twice(t), n));
            }
            t += 2;
        }
        ms -= 2;
    }
    out
}

/// The same content by counting weights of the canonical basis.
pub fn chain2_branch_by_weights(g: So5Irrep) -> Vec<(HalfInt, HalfInt, usize)> {
    let basis = WeightBasis::new(g);
    let mut count: BTreeMap<(i32, i32), i64> = BTreeMap::new();
    for s in basis.states() {
        *count.entry((s.w.mx.twice() + s.w.my.twice(), s.w.mx.twice() - s.w.my.twice())).or_default() += 1;
    }
    let mut out = Vec::new();
    let mut keys: Vec<(i32, i32)> = count.keys().copied().filter(|(_, mt)| *mt >= 0).collect();
    keys.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (ms, mt) in keys {
        let n = count[&(ms, mt)] - count.get(&(ms, mt + 2)).copied().unwrap_or(0);
        if n > 0 {
            out.push((HalfInt::from_twice(ms), HalfInt::from_twice(mt), n as usize));
        }
    }
    out
}

/// `T^2` on the canonical states at weight `w`, from reduced matrix elements.
pub fn t2_matrix(g: So5Irrep, w: So4Weight) -> Result<ExactMatrix> {
    let labels: Vec<_> = g.branch().into_iter().filter(|xy| xy.contains(w)).collect();
    if labels.is_empty() {
        return Err(Error::EmptySubspace(format!("{} in {g}", w)));
    }
    let branch = g.branch();
    let one_one = so4::So4Irrep::from_twice(2, 2);
    let zero = So4Weight::from_twice(0, 0);
    let mt = w.mx - w.my;
    let mt2 = RadicalSum::from_ratio((mt.twice() as i64).pow(2), 4);
    let mut m = ExactMatrix::zeros(labels.len(), labels.len());
    for (a, &bra) in labels.iter().enumerate() {
        for (b, &ket) in labels.iter().enumerate() {
            let mut v = if a == b { mt2.clone() } else { RadicalSum::zero() };
            let c11 = so4::cg(ket, w, one_one, zero, bra, w)?;
            if !c11.is_zero() {
                let mut s = RadicalSum::zero();
                for &mid in &branch {
                    let u = so4::usixj(HALF_HALF, HALF_HALF, one_one, ket, bra, mid);
                    if u.is_zero() {
                        continue;
                    }
                    let p = u.mul(&generator_rme(g, bra, mid)?).mul(&generator_rme(g, mid, ket)?);
                    s += &RadicalSum::from(p);
                }
                let c = RadicalSum::from(c11).mul_radical(&Radical::from_integer(2));
                v += &(&c * &s);
            }
            if a == b {
                for &mid in &branch {
                    let r = generator_rme(g, ket, mid)?;
                    v += &RadicalSum::from_rational(r.square());
                }
            }
            m.set(a, b, v);
        }
    }
    Ok(m)
}

/// `T^2 = (X0 - Y0)^2 + 2 (T_{+-} T_{-+} + T_{-+} T_{+-})` on the full basis.
pub fn t2_operator(gen: &Generators) -> SparseMatrix {
    let d = gen.x0.sub(&gen.y0);
    let two = RadicalSum::from_integer(2);
    d.mul(&d).add(&gen.t_pm().mul(gen.t_mp()).add(&gen.t_mp().mul(gen.t_pm())).scale(&two))
}

/// Brackets by inward laddering along each `M_S` diagonal.
pub fn chain2_brackets(g: So5Irrep) -> Result<Chain2Brackets> {
    chain2_brackets_with(&Generators::new(g))
}

pub fn chain2_brackets_with(gen: &Generators) -> Result<Chain2Brackets> {
    let g = gen.basis.irrep;
    let basis = &gen.basis;
    let lower = gen.t_mp().scale(&RadicalSum::from_integer(2));
    let mut diagonals: BTreeMap<i32, BTreeMap<i32, Vec<usize>>> = BTreeMap::new();
    for (i, s) in basis.states().iter().enumerate() {
        let ms = s.w.mx.twice() + s.w.my.twice();
        let mt = s.w.mx.twice() - s.w.my.twice();
        diagonals.entry(ms).or_default().entry(mt).or_default().push(i);
    }
    let mut entries = BTreeMap::new();
    for (ms, points) in diagonals.into_iter().rev() {
        let levels: Vec<(HalfInt, Vec<usize>)> =
            points.into_iter().rev().map(|(mt, idx)| (HalfInt::from_twice(mt), idx)).collect();
        let context = format!("{g} at M_S={}", HalfInt::from_twice(ms));
        for mp in ladder_and_complete(basis.len(), &levels, &lower, &context)? {
            let key = Chain2Key { ms: HalfInt::from_twice(ms), t: mp.j, kappa: mp.index };
            entries.insert(key, mp.vectors);
        }
    }
    Ok(BracketSet { irrep: g, states: basis.states().to_vec(), entries })
}

/// Orthonormality at each weight point and `T^2` eigen-relations.
pub fn verify_chain2_brackets(gen: &Generators, b: &Chain2Brackets) -> VerifyReport {
    verify_brackets(b, &t2_operator(gen), |k| k.t, |k| k.ms)
}

/// One row of a transformed coupling table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain2Row {
    pub k1: Chain2Key,
    pub k2: Chain2Key,
    pub k: Chain2Key,
    pub values: Vec<RadicalSum>,
}

fn row_order(a: &Chain2Row, b: &Chain2Row) -> std::cmp::Ordering {
    (b.k1.ms, b.k2.ms).cmp(&(a.k1.ms, a.k2.ms)).then(
        (a.k1.t, a.k2.t, a.k.t, a.k1.kappa, a.k2.kappa, a.k.kappa)
            .cmp(&(b.k1.t, b.k2.t, b.k.t, b.k1.kappa, b.k2.kappa, b.k.kappa)),
    )
}

fn evaluate(
    block: &IsoscalarBlock,
    b1: &Chain2Brackets,
    b2: &Chain2Brackets,
    b: &Chain2Brackets,
    [k1, k2, k]: [&Chain2Key; 3],
    mt: HalfInt,
) -> Result<Vec<RadicalSum>> {
    let rho_count = block.multiplicity();
    let mut out = vec![RadicalSum::zero(); rho_count];
    let target = b.sparse(k, mt);
    for mt1 in k1.t.projections() {
        let mt2 = mt - mt1;
        if mt2.abs() > k2.t {
            continue;
        }
        let ct = su2::cg(k1.t, mt1, k2.t, mt2, k.t, mt)?;
        if ct.is_zero() {
            continue;
        }
        let v1 = b1.sparse(k1, mt1);
        let v2 = b2.sparse(k2, mt2);
        for &(i, x1) in &v1 {
            let s1 = b1.states[i];
            for &(j, x2) in &v2 {
                let s2 = b2.states[j];
                for &(l, x) in &target {
                    let s = b.states[l];
                    let Some(col) = block.column_index(&Column { x1y1: s1.xy, x2y2: s2.xy, xy: s.xy }) else {
                        continue;
                    };
                    let c4 = so4::cg(s1.xy, s1.w, s2.xy, s2.w, s.xy, s.w)?;
                    if c4.is_zero() {
                        continue;
                    }
                    let f = RadicalSum::from(ct.mul(&c4));
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

/// Reduced coefficients in the isospin chain for one coupling block.
///
/// Each entry is evaluated at `M_T = T` and at `M_T = -T`; a mismatch is an error.
/// Rows that vanish for every `rho` are omitted.
pub fn chain2_transform(
    block: &IsoscalarBlock,
    b1: &Chain2Brackets,
    b2: &Chain2Brackets,
    b: &Chain2Brackets,
) -> Result<Vec<Chain2Row>> {
    let key = block.key;
    if (b1.irrep, b2.irrep, b.irrep) != (key.g1, key.g2, key.g) {
        return Err(Error::InternalInconsistency(format!("brackets do not match {key}")));
    }
    let mut rows = Vec::new();
    for k1 in b1.entries.keys() {
        for k2 in b2.entries.keys() {
            for k in b.entries.keys() {
                if k1.ms + k2.ms != k.ms || !triangle(k1.t, k2.t, k.t) {
                    continue;
                }
                let values = evaluate(block, b1, b2, b, [k1, k2, k], k.t)?;
                if k.t.twice() > 0 {
                    let other = evaluate(block, b1, b2, b, [k1, k2, k], -k.t)?;
                    if other != values {
                        return Err(Error::TransformInconsistent(format!("{key}: {k1} {k2} {k}")));
                    }
                }
                if values.iter().any(|v| !v.is_zero()) {
                    rows.push(Chain2Row { k1: *k1, k2: *k2, k: *k, values });
                }
            }
        }
    }
    rows.sort_by(row_order);
    Ok(rows)
}
