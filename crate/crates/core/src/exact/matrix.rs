use super::sum::RadicalSum;
use crate::error::{Error, Result};

/// Dense row-major matrix over exact radical sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RadicalSum>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![RadicalSum::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<RadicalSum>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        ExactMatrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RadicalSum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RadicalSum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &RadicalSum) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[RadicalSum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<RadicalSum>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[RadicalSum]) -> Vec<RadicalSum> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RadicalSum::is_zero)
    }

    /// Reduced row echelon form and the pivot columns.
    ///
    /// For each column the pivot row is the remaining row whose entry has the
    /// fewest terms, ties going to the lowest row index.
    pub fn rref(&self) -> Result<(ExactMatrix, Vec<usize>)> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..m.cols {
            if next == m.rows {
                break;
            }
            let choice =
                (next..m.rows).filter(|&r| !m.get(r, col).is_zero()).min_by_key(|&r| (m.get(r, col).num_terms(), r));
            let Some(p) = choice else { continue };
            m.swap_rows(p, next);
            let inv = m.get(next, col).inv()?;
            for j in col..m.cols {
                let v = m.get(next, j);
                if !v.is_zero() {
                    let scaled = v * &inv;
                    m.set(next, j, scaled);
                }
            }
            let pivot_row: Vec<RadicalSum> = m.row(next).to_vec();
            for r in 0..m.rows {
                if r == next {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for (j, pv) in pivot_row.iter().enumerate().skip(col) {
                    if !pv.is_zero() {
                        let d = &f * pv;
                        let cur = &m.data[r * m.cols + j];
                        m.data[r * m.cols + j] = cur - &d;
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        Ok((m, pivots))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Null space basis, one vector per free column with a unit entry there,
    /// listed by descending free column.
    pub fn nullspace(&self) -> Result<Vec<Vec<RadicalSum>>> {
        let (m, pivots) = self.rref()?;
        let mut basis = Vec::new();
        for free in (0..self.cols).rev() {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![RadicalSum::zero(); self.cols];
            v[free] = RadicalSum::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(i, free);
            }
            basis.push(v);
        }
        Ok(basis)
    }
}

pub fn dot(a: &[RadicalSum], b: &[RadicalSum]) -> RadicalSum {
    let mut acc = RadicalSum::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn axpy(alpha: &RadicalSum, x: &[RadicalSum], y: &mut [RadicalSum]) {
    if alpha.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += &(alpha * xi);
        }
    }
}

pub fn scale_vec(alpha: &RadicalSum, x: &[RadicalSum]) -> Vec<RadicalSum> {
    x.iter().map(|v| alpha * v).collect()
}

/// Orthonormalize in order under the inner product `form`.
pub fn gram_schmidt<F>(vectors: &[Vec<RadicalSum>], mut form: F) -> Result<Vec<Vec<RadicalSum>>>
where
    F: FnMut(&[RadicalSum], &[RadicalSum]) -> RadicalSum,
{
    let mut out: Vec<Vec<RadicalSum>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let w = orthogonalize(v, &out, &mut form);
        let n2 = form(&w, &w);
        if n2.signum() <= 0 {
            return Err(Error::DegenerateForm);
        }
        let inv = n2.sqrt()?.inv()?;
        out.push(scale_vec(&inv, &w));
    }
    Ok(out)
}

/// `v` minus its projection on already orthonormal `basis`.
pub fn orthogonalize<F>(v: &[RadicalSum], basis: &[Vec<RadicalSum>], form: &mut F) -> Vec<RadicalSum>
where
    F: FnMut(&[RadicalSum], &[RadicalSum]) -> RadicalSum,
{
    let mut w = v.to_vec();
    for u in basis {
        let c = form(u, v);
        axpy(&-c, u, &mut w);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RadicalSum {
        s.parse().unwrap()
    }

    #[test]
    fn rank_and_null() {
        let m = ExactMatrix::from_rows(vec![
            vec![r("1"), r("+sqrt(2)"), r("0")],
            vec![r("+sqrt(2)"), r("2"), r("0")],
            vec![r("0"), r("0"), r("1")],
        ]);
        assert_eq!(m.rank().unwrap(), 2);
        let ns = m.nullspace().unwrap();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(RadicalSum::is_zero));
        assert_eq!(ns[0], vec![r("-sqrt(2)"), r("1"), r("0")]);
    }

    #[test]
    fn orthonormalizes() {
        let vs = vec![vec![r("1"), r("1")], vec![r("1"), r("0")]];
        let gs = gram_schmidt(&vs, dot).unwrap();
        assert_eq!(gs[0], vec![r("+sqrt(1/2)"), r("+sqrt(1/2)")]);
        assert_eq!(gs[1], vec![r("+sqrt(1/2)"), r("-sqrt(1/2)")]);
        let dep = vec![vec![r("1"), r("1")], vec![r("2"), r("2")]];
        assert_eq!(gram_schmidt(&dep, dot), Err(Error::DegenerateForm));
    }
}
