//! Transformation from the canonical SO(4) basis to the isospin and
//! angular-momentum chains.

pub mod angmom;
pub mod isospin;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Radical, RadicalSum, SparseMatrix};
use crate::halfint::HalfInt;
use crate::racah::VerifyReport;
use crate::so5::{So5Irrep, WeightState};

/// Overlaps `<canonical state | chain state>` for one irrep.
///
/// Each entry maps a chain label to its vectors at every projection `m`,
/// stored densely over the canonical weight basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketSet<K: Ord> {
    pub irrep: So5Irrep,
    pub states: Vec<WeightState>,
    pub entries: BTreeMap<K, BTreeMap<HalfInt, Vec<RadicalSum>>>,
}

/// One bracket vector in sparse form, as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketRecord<K> {
    pub label: K,
    pub m: HalfInt,
    pub components: Vec<(WeightState, RadicalSum)>,
}

impl<K: Ord + Clone> BracketSet<K> {
    pub fn vector(&self, label: &K, m: HalfInt) -> Option<&[RadicalSum]> {
        self.entries.get(label).and_then(|v| v.get(&m)).map(Vec::as_slice)
    }

    /// Nonzero components of one vector.
    pub fn sparse(&self, label: &K, m: HalfInt) -> Vec<(usize, &RadicalSum)> {
        self.vector(label, m).map(|v| v.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()).unwrap_or_default()
    }

    pub fn records(&self) -> Vec<BracketRecord<K>> {
        let mut out = Vec::new();
        for (label, by_m) in &self.entries {
            for (m, v) in by_m.iter().rev() {
                let components = v
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (self.states[i], x.clone()))
                    .collect();
                out.push(BracketRecord { label: label.clone(), m: *m, components });
            }
        }
        out
    }

    /// Vectors sharing a projection `m` within the same group must be orthonormal.
    pub fn check_unitarity<G: Ord>(&self, group: impl Fn(&K) -> G) -> Vec<String> {
        type Level<'a, K> = Vec<(&'a K, &'a Vec<RadicalSum>)>;
        let mut by_level: BTreeMap<(G, HalfInt), Level<K>> = BTreeMap::new();
        for (k, by_m) in &self.entries {
            for (m, v) in by_m {
                by_level.entry((group(k), *m)).or_default().push((k, v));
            }
        }
        let mut failures = Vec::new();
        for ((_, m), vs) in by_level {
            for (i, (_, u)) in vs.iter().enumerate() {
                for (j, (_, v)) in vs.iter().enumerate().skip(i) {
                    let d = crate::exact::dot(u, v);
                    let want = if i == j { RadicalSum::one() } else { RadicalSum::zero() };
                    if d != want {
                        failures.push(format!("{}: overlap at m={m} between vectors {i} and {j} is {d}", self.irrep));
                    }
                }
            }
        }
        failures
    }
}

/// `sqrt((j+m+1)(j-m))`, the step factor from `m+1` down to `m`.
fn step_factor(j: HalfInt, m: HalfInt) -> Result<RadicalSum> {
    let (j, m) = (j.twice() as i64, m.twice() as i64);
    let v = (j + m + 2) * (j - m);
    Ok(RadicalSum::from(Radical::sqrt(&BigRational::new(BigInt::from(v), BigInt::from(4)))?))
}

/// A multiplet found while laddering: its `j`, its creation index among
/// multiplets of equal `j`, and its vectors by projection.
pub(crate) struct Multiplet {
    pub j: HalfInt,
    pub index: usize,
    pub vectors: BTreeMap<HalfInt, Vec<RadicalSum>>,
}

/// Inward laddering with Gram-Schmidt completion.
///
/// `levels` lists each projection from the top down to the bottom together with
/// the canonical states at that projection, in seed order. New multiplets
/// start at the top of their projection and are then lowered to `-j`.
pub(crate) fn ladder_and_complete(
    dim: usize,
    levels: &[(HalfInt, Vec<usize>)],
    lower: &SparseMatrix,
    context: &str,
) -> Result<Vec<Multiplet>> {
    let mut multiplets: Vec<Multiplet> = Vec::new();
    let mut counts: BTreeMap<HalfInt, usize> = BTreeMap::new();
    let lower_one = |v: &[RadicalSum], j: HalfInt, m_new: HalfInt| -> Result<Vec<RadicalSum>> {
        let w = lower.apply(v);
        if w.iter().all(RadicalSum::is_zero) {
            return Err(Error::LadderNullUnexpected(format!("{context}: j={j} at m={m_new}")));
        }
        let inv = step_factor(j, m_new)?.inv()?;
        Ok(w.iter().map(|x| x * &inv).collect())
    };
    for (m, seeds) in levels.iter().filter(|(m, _)| m.twice() >= 0) {
        let m = *m;
        let above = m + HalfInt::ONE;
        let mut current: Vec<Vec<RadicalSum>> = Vec::new();
        for mp in multiplets.iter_mut() {
            if let Some(v) = mp.vectors.get(&above) {
                let w = lower_one(v, mp.j, m)?;
                current.push(w.clone());
                mp.vectors.insert(m, w);
            }
        }
        for &i in seeds {
            let mut e = vec![RadicalSum::zero(); dim];
            e[i] = RadicalSum::one();
            let mut n2 = RadicalSum::one();
            for c in &current {
                if c[i].is_zero() {
                    continue;
                }
                let ci = c[i].clone();
                for (k, ck) in c.iter().enumerate() {
                    if !ck.is_zero() {
                        e[k] -= &(&ci * ck);
                    }
                }
                n2 -= &ci.square();
            }
            if n2.is_zero() {
                continue;
            }
            if n2.signum() < 0 {
                return Err(Error::DegenerateForm);
            }
            let inv = n2.sqrt()?.inv()?;
            let e: Vec<RadicalSum> = e.iter().map(|x| x * &inv).collect();
            current.push(e.clone());
            let count = counts.entry(m).or_default();
            *count += 1;
            multiplets.push(Multiplet { j: m, index: *count, vectors: BTreeMap::from([(m, e)]) });
        }
    }
    for mp in multiplets.iter_mut() {
        let mut m = *mp.vectors.keys().next().expect("seeded");
        while m > -mp.j {
            let next = m - HalfInt::ONE;
            let w = lower_one(&mp.vectors[&m], mp.j, next)?;
            mp.vectors.insert(next, w);
            m = next;
        }
    }
    Ok(multiplets)
}

/// Unitarity plus the Casimir eigen-relation `C v = j(j+1) v` for every vector.
pub(crate) fn verify_brackets<K: Ord + Clone + fmt::Display, G: Ord>(
    b: &BracketSet<K>,
    casimir: &SparseMatrix,
    spin: impl Fn(&K) -> HalfInt,
    group: impl Fn(&K) -> G,
) -> VerifyReport {
    let mut report = VerifyReport { failures: b.check_unitarity(group) };
    let count: usize = b.entries.values().map(BTreeMap::len).sum();
    if count != b.states.len() {
        report.failures.push(format!("{}: {count} bracket vectors for {} states", b.irrep, b.states.len()));
    }
    for (k, by_m) in &b.entries {
        let j = spin(k).twice() as i64;
        let jj = RadicalSum::from_ratio(j * (j + 2), 4);
        for (m, v) in by_m {
            let cv = casimir.apply(v);
            if cv.iter().zip(v).any(|(x, y)| *x != &jj * y) {
                report.failures.push(format!("{}: {k} at m={m} is not an eigenvector", b.irrep));
            }
        }
    }
    report
}
