//! Racah's generator method for SO(5) ⊃ SO(4) reduced coupling coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{gram_schmidt, ExactMatrix, RadicalSum};
use crate::so4::{self, So4Irrep, HALF_HALF};
use crate::so5::{self, generator_rme, So5Irrep};

/// Which coupling `g1 x g2 -> g` a block describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CouplingKey {
    pub g1: So5Irrep,
    pub g2: So5Irrep,
    pub g: So5Irrep,
}

impl fmt::Display for CouplingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {} -> {}", self.g1, self.g2, self.g)
    }
}

impl std::str::FromStr for CouplingKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected \"g1 x g2 -> g\", got {s:?}"));
        let (lhs, g) = s.split_once("->").ok_or_else(bad)?;
        let (g1, g2) = lhs.split_once(" x ").ok_or_else(bad)?;
        Ok(CouplingKey { g1: g1.parse()?, g2: g2.parse()?, g: g.parse()? })
    }
}

/// Column label `(X1Y1, X2Y2, XY)` of a reduced coupling coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Column {
    pub x1y1: So4Irrep,
    pub x2y2: So4Irrep,
    pub xy: So4Irrep,
}

impl Column {
    fn order_key(&self) -> (So4Irrep, So4Irrep, So4Irrep) {
        (self.xy, self.x1y1, self.x2y2)
    }
}

impl PartialOrd for Column {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Column {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.x1y1, self.x2y2, self.xy)
    }
}

/// One equation of the homogeneous system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RacahRow {
    pub x1y1: So4Irrep,
    pub x2y2: So4Irrep,
    pub xy: So4Irrep,
    pub xy_prime: So4Irrep,
    pub coeffs: BTreeMap<usize, RadicalSum>,
}

/// The assembled system for one coupling.
#[derive(Clone, Debug)]
pub struct RacahSystem {
    pub key: CouplingKey,
    pub multiplicity: usize,
    pub columns: Vec<Column>,
    pub rows: Vec<RacahRow>,
    /// Rows that use a label outside the branching of `g` in the `XY` slot.
    pub augmented_rows: usize,
}

impl RacahSystem {
    pub fn matrix(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.rows.len(), self.columns.len());
        for (i, r) in self.rows.iter().enumerate() {
            for (&j, v) in &r.coeffs {
                m.set(i, j, v.clone());
            }
        }
        m
    }
}

pub const PHASE_RULE: &str = "positive-first:x1y1-desc,xy-desc,x2y2-desc";
pub const MULTIPLICITY_RULE: &str = "gram-schmidt:nullspace-free-column-desc";
pub const COLUMN_ORDER: &str = "xy,x1y1,x2y2";

/// Convention flags stamped into every block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conventions {
    pub phase_rule: String,
    pub multiplicity_rule: String,
    pub column_order: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            phase_rule: PHASE_RULE.into(),
            multiplicity_rule: MULTIPLICITY_RULE.into(),
            column_order: COLUMN_ORDER.into(),
        }
    }
}

/// All reduced coupling coefficients of one coupling, one vector per `rho`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsoscalarBlock {
    pub key: CouplingKey,
    pub columns: Vec<Column>,
    pub values: Vec<Vec<RadicalSum>>,
    pub conventions: Conventions,
}

impl IsoscalarBlock {
    pub fn multiplicity(&self) -> usize {
        self.values.len()
    }

    pub fn column_index(&self, c: &Column) -> Option<usize> {
        self.columns.binary_search(c).ok()
    }

    /// Coefficient for `rho` (1-based), zero for an absent column.
    pub fn get(&self, rho: usize, c: &Column) -> RadicalSum {
        self.column_index(c).map(|i| self.values[rho - 1][i].clone()).unwrap_or_default()
    }
}

fn not_in_series(key: CouplingKey) -> Error {
    Error::NotInSeries { g1: key.g1.to_string(), g2: key.g2.to_string(), g: key.g.to_string() }
}

/// Columns satisfying branching and SO(4) triangularity, canonical order.
pub fn enumerate_columns(g1: So5Irrep, g2: So5Irrep, g: So5Irrep) -> Result<Vec<Column>> {
    let key = CouplingKey { g1, g2, g };
    if so5::multiplicity(g1, g2, g)? == 0 {
        return Err(not_in_series(key));
    }
    Ok(columns_unchecked(g1, g2, g))
}

fn columns_unchecked(g1: So5Irrep, g2: So5Irrep, g: So5Irrep) -> Vec<Column> {
    let mut cols = Vec::new();
    for x1y1 in g1.branch() {
        for x2y2 in g2.branch() {
            for xy in g.branch() {
                if so4::triangle4(x1y1, x2y2, xy) {
                    cols.push(Column { x1y1, x2y2, xy });
                }
            }
        }
    }
    cols.sort();
    cols
}

fn rad(x: crate::exact::Radical) -> RadicalSum {
    RadicalSum::from(x)
}

/// Rows for every `(X1Y1, X2Y2, XY, X'Y')` with `XY` taken from `labels`.
fn rows_for(key: CouplingKey, columns: &[Column], labels: &[So4Irrep]) -> Result<Vec<RacahRow>> {
    let CouplingKey { g1, g2, g } = key;
    let index: BTreeMap<Column, usize> = columns.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let b1 = g1.branch();
    let b2 = g2.branch();
    let bg = g.branch();
    let mut rows = Vec::new();
    for &a in &b1 {
        for &b in &b2 {
            for &c in labels {
                if !so4::triangle4(a, b, c) {
                    continue;
                }
                for &cp in &bg {
                    if !so4::triangle4(cp, HALF_HALF, c) {
                        continue;
                    }
                    let mut coeffs: BTreeMap<usize, RadicalSum> = BTreeMap::new();
                    let mut put = |col: usize, v: RadicalSum| {
                        let e = coeffs.entry(col).or_default();
                        *e += &v;
                    };
                    if let Some(&i) = index.get(&Column { x1y1: a, x2y2: b, xy: c }) {
                        put(i, -rad(generator_rme(g, c, cp)?));
                    }
                    for &ap in &b1 {
                        if let Some(&i) = index.get(&Column { x1y1: ap, x2y2: b, xy: cp }) {
                            let u = so4::usixj(b, ap, cp, HALF_HALF, c, a);
                            if u.is_zero() {
                                continue;
                            }
                            let sign = so4::phi(a, b, c) * so4::phi(ap, b, cp);
                            let v = u.mul(&generator_rme(g1, a, ap)?);
                            put(i, rad(if sign < 0 { -v } else { v }));
                        }
                    }
                    for &bp in &b2 {
                        if let Some(&i) = index.get(&Column { x1y1: a, x2y2: bp, xy: cp }) {
                            let u = so4::usixj(a, bp, cp, HALF_HALF, c, b);
                            if u.is_zero() {
                                continue;
                            }
                            put(i, rad(u.mul(&generator_rme(g2, b, bp)?)));
                        }
                    }
                    coeffs.retain(|_, v| !v.is_zero());
                    if !coeffs.is_empty() {
                        rows.push(RacahRow { x1y1: a, x2y2: b, xy: c, xy_prime: cp, coeffs });
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// SO(4) labels reachable from `branch(g)` by one bitensor step but not in it.
fn forbidden_labels(g: So5Irrep) -> Vec<So4Irrep> {
    let inside: BTreeSet<So4Irrep> = g.branch().into_iter().collect();
    let mut out = BTreeSet::new();
    for xy in &inside {
        for c in so4::kronecker(*xy, HALF_HALF) {
            if !inside.contains(&c) {
                out.insert(c);
            }
        }
    }
    out.into_iter().collect()
}

/// The Racah system for `g1 x g2 -> g`, without augmentation.
pub fn build_system(g1: So5Irrep, g2: So5Irrep, g: So5Irrep) -> Result<RacahSystem> {
    let key = CouplingKey { g1, g2, g };
    let multiplicity = so5::multiplicity(g1, g2, g)?;
    if multiplicity == 0 {
        return Err(not_in_series(key));
    }
    let columns = columns_unchecked(g1, g2, g);
    let rows = rows_for(key, &columns, &g.branch())?;
    Ok(RacahSystem { key, multiplicity, columns, rows, augmented_rows: 0 })
}

/// Intermediate results of a solve, kept for inspection and testing.
#[derive(Clone, Debug)]
pub struct Solution {
    pub system: RacahSystem,
    pub null_basis: Vec<Vec<RadicalSum>>,
    /// Inner product matrix of the null basis over one `XY` group.
    pub form: Vec<Vec<RadicalSum>>,
    pub block: IsoscalarBlock,
}

fn group_form(basis: &[Vec<RadicalSum>], group: &[usize]) -> Vec<Vec<RadicalSum>> {
    basis
        .iter()
        .map(|u| {
            basis
                .iter()
                .map(|v| {
                    let mut acc = RadicalSum::zero();
                    for &i in group {
                        acc += &(&u[i] * &v[i]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn groups(columns: &[Column]) -> BTreeMap<So4Irrep, Vec<usize>> {
    let mut out: BTreeMap<So4Irrep, Vec<usize>> = BTreeMap::new();
    for (i, c) in columns.iter().enumerate() {
        out.entry(c.xy).or_default().push(i);
    }
    out
}

/// Column indices ordered for the phase rule.
fn phase_order(columns: &[Column]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..columns.len()).collect();
    idx.sort_by(|&a, &b| {
        let ka = (columns[a].x1y1.height(), columns[a].xy.height(), columns[a].x2y2.height());
        let kb = (columns[b].x1y1.height(), columns[b].xy.height(), columns[b].x2y2.height());
        kb.cmp(&ka)
    });
    idx
}

pub fn solve_detailed(g1: So5Irrep, g2: So5Irrep, g: So5Irrep) -> Result<Solution> {
    let mut system = build_system(g1, g2, g)?;
    let d = system.multiplicity;
    let mut null_basis = system.matrix().nullspace()?;
    if null_basis.len() > d {
        for label in forbidden_labels(g) {
            let extra = rows_for(system.key, &system.columns, &[label])?;
            if extra.is_empty() {
                continue;
            }
            system.augmented_rows += extra.len();
            system.rows.extend(extra);
            null_basis = system.matrix().nullspace()?;
            if null_basis.len() <= d {
                break;
            }
        }
    }
    if null_basis.len() != d {
        return Err(Error::RankDefect { expected: d, found: null_basis.len() });
    }
    let groups = groups(&system.columns);
    let mut first: Option<Vec<Vec<RadicalSum>>> = None;
    for (xy, members) in &groups {
        let m = group_form(&null_basis, members);
        match &first {
            None => first = Some(m),
            Some(f) if *f != m => {
                return Err(Error::NormInconsistency(format!("{} group {xy}", system.key)));
            }
            _ => {}
        }
    }
    let form = first.expect("at least one group");
    let group0 = groups.values().next().expect("nonempty").clone();
    let mut values = gram_schmidt(&null_basis, |u, v| {
        let mut acc = RadicalSum::zero();
        for &i in &group0 {
            acc += &(&u[i] * &v[i]);
        }
        acc
    })?;
    let order = phase_order(&system.columns);
    for v in &mut values {
        let lead = order.iter().find(|&&i| !v[i].is_zero()).expect("nonzero vector");
        if v[*lead].signum() < 0 {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
    let block = IsoscalarBlock {
        key: system.key,
        columns: system.columns.clone(),
        values,
        conventions: Conventions::default(),
    };
    Ok(Solution { system, null_basis, form, block })
}

pub fn solve_isoscalars(g1: So5Irrep, g2: So5Irrep, g: So5Irrep) -> Result<IsoscalarBlock> {
    Ok(solve_detailed(g1, g2, g)?.block)
}

/// Every block in the Kronecker series of `g1 x g2`.
pub fn solve_series(g1: So5Irrep, g2: So5Irrep) -> Result<Vec<IsoscalarBlock>> {
    so5::kronecker(g1, g2)?.into_iter().map(|(g, _)| solve_isoscalars(g1, g2, g)).collect()
}

/// Outcome of the consistency checks on a block.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.failures.extend(other.failures);
    }
}

/// Bra-sum orthonormality per `XY`, and annihilation by every Racah row.
pub fn verify_block(b: &IsoscalarBlock) -> VerifyReport {
    let mut report = VerifyReport::default();
    let key = b.key;
    let expected = columns_unchecked(key.g1, key.g2, key.g);
    if expected != b.columns {
        report.failures.push(format!("{key}: column list differs from the branching"));
        return report;
    }
    if b.values.iter().any(|v| v.len() != b.columns.len()) {
        report.failures.push(format!("{key}: value vector length mismatch"));
        return report;
    }
    for (xy, members) in groups(&b.columns) {
        let m = group_form(&b.values, &members);
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { RadicalSum::one() } else { RadicalSum::zero() };
                if *x != want {
                    report.failures.push(format!("{key}: bra-sum for {xy}, rho {} {} gives {x}", i + 1, j + 1));
                }
            }
        }
    }
    let rows = match rows_for(key, &b.columns, &key.g.branch()) {
        Ok(r) => r,
        Err(e) => {
            report.failures.push(format!("{key}: {e}"));
            return report;
        }
    };
    for (rho, v) in b.values.iter().enumerate() {
        for r in &rows {
            let mut acc = RadicalSum::zero();
            for (&j, c) in &r.coeffs {
                acc += &(c * &v[j]);
            }
            if !acc.is_zero() {
                report.failures.push(format!(
                    "{key}: rho {} violates row {}{}{}{}",
                    rho + 1,
                    r.x1y1,
                    r.x2y2,
                    r.xy,
                    r.xy_prime
                ));
                break;
            }
        }
    }
    report
}

/// Ket-sum completeness over a full Kronecker series of `g1 x g2`.
pub fn verify_series(blocks: &[IsoscalarBlock]) -> VerifyReport {
    let mut report = VerifyReport::default();
    let Some(first) = blocks.first() else { return report };
    let (g1, g2) = (first.key.g1, first.key.g2);
    // (XY) -> (X1Y1, X2Y2) -> list of coefficients across (g, rho)
    let mut table: BTreeMap<So4Irrep, BTreeMap<(So4Irrep, So4Irrep), Vec<RadicalSum>>> = BTreeMap::new();
    let mut slot = 0;
    for b in blocks {
        if (b.key.g1, b.key.g2) != (g1, g2) {
            report.failures.push(format!("{}: not part of the {g1} x {g2} series", b.key));
            return report;
        }
        for v in &b.values {
            for (c, x) in b.columns.iter().zip(v) {
                let e = table.entry(c.xy).or_default().entry((c.x1y1, c.x2y2)).or_default();
                e.resize(slot + 1, RadicalSum::zero());
                e[slot] = x.clone();
            }
            slot += 1;
        }
    }
    for a in g1.branch() {
        for b2 in g2.branch() {
            for xy in so4::kronecker(a, b2) {
                table.entry(xy).or_default().entry((a, b2)).or_default();
            }
        }
    }
    for (xy, rows) in &table {
        let keys: Vec<&(So4Irrep, So4Irrep)> = rows.keys().collect();
        for (i, p) in keys.iter().enumerate() {
            for q in &keys[i..] {
                let u = &rows[*p];
                let v = &rows[*q];
                let mut acc = RadicalSum::zero();
                for (x, y) in u.iter().zip(v.iter()) {
                    acc += &(x * y);
                }
                let want = if p == q { RadicalSum::one() } else { RadicalSum::zero() };
                if acc != want {
                    report
                        .failures
                        .push(format!("{g1} x {g2}: ket-sum at {xy} for {}{} / {}{} gives {acc}", p.0, p.1, q.0, q.1));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(r: i32, s: i32) -> So5Irrep {
        So5Irrep::from_twice(r, s)
    }

    fn rs(s: &str) -> RadicalSum {
        s.parse().unwrap()
    }

    #[test]
    fn identity_coupling() {
        for h in [g(1, 0), g(2, 0), g(2, 1)] {
            let b = solve_isoscalars(g(0, 0), h, h).unwrap();
            assert_eq!(b.columns.len(), h.branch().len());
            assert!(b.values[0].iter().all(RadicalSum::is_one), "{h}");
        }
    }

    #[test]
    fn small_block() {
        let b = solve_isoscalars(g(1, 1), g(1, 0), g(1, 0)).unwrap();
        let want = ["-sqrt(1/5)", "-sqrt(4/5)", "+sqrt(1/5)", "+sqrt(4/5)"].map(rs);
        assert_eq!(b.values, vec![want.to_vec()]);
        assert!(verify_block(&b).ok());
    }

    #[test]
    fn not_in_series_is_reported() {
        assert!(matches!(build_system(g(1, 1), g(1, 0), g(2, 2)), Err(Error::NotInSeries { .. })));
    }

    #[test]
    fn flipped_sign_is_caught() {
        let mut b = solve_isoscalars(g(1, 1), g(1, 0), g(1, 0)).unwrap();
        b.values[0][1] = -&b.values[0][1];
        assert!(!verify_block(&b).ok());
    }

    #[test]
    fn completeness_small_series() {
        let blocks = solve_series(g(1, 1), g(1, 0)).unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(verify_series(&blocks).ok());
        for b in &blocks {
            assert!(verify_block(b).ok());
        }
    }
}
