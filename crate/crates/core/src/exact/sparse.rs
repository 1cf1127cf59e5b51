use std::collections::BTreeMap;

use super::matrix::ExactMatrix;
use super::sum::RadicalSum;

/// Square sparse operator over exact scalars, stored by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<BTreeMap<usize, RadicalSum>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        SparseMatrix { dim, rows: vec![BTreeMap::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SparseMatrix::zeros(dim);
        for i in 0..dim {
            m.add_entry(i, i, &RadicalSum::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> RadicalSum {
        self.rows[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: &RadicalSum) {
        if v.is_zero() {
            return;
        }
        let e = self.rows[i].entry(j).or_default();
        *e += v;
        if e.is_zero() {
            self.rows[i].remove(&j);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RadicalSum)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    pub fn apply(&self, v: &[RadicalSum]) -> Vec<RadicalSum> {
        assert_eq!(v.len(), self.dim);
        self.rows
            .iter()
            .map(|r| {
                let mut acc = RadicalSum::zero();
                for (&j, a) in r {
                    if !v[j].is_zero() {
                        acc += &(a * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, r) in self.rows.iter().enumerate() {
            for (&k, a) in r {
                for (&j, b) in &other.rows[k] {
                    out.add_entry(i, j, &(a * b));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &RadicalSum) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, j, v) in self.entries() {
            out.add_entry(i, j, &(c * v));
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            out.add_entry(i, j, v);
        }
        out
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add(&other.scale(&RadicalSum::from_integer(-1)))
    }

    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, j, v) in self.entries() {
            out.add_entry(j, i, v);
        }
        out
    }

    /// Restriction to the given row and column index sets.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if let Some(v) = self.rows[i].get(&j) {
                    m.set(a, b, v.clone());
                }
            }
        }
        m
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.dim]; self.dim];
        for (i, j, v) in self.entries() {
            out[i][j] = v.to_f64();
        }
        out
    }
}
