//! Dense linear algebra.
//!
//! Exact Gaussian elimination over any [`Field`] (used for the intertwining
//! operator and for kernels of the Dunkl Laplacian), plus two small `f64`
//! eigenvalue routines used by the quadrature and conditioning code.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<F> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged matrix rows");
        Self { rows: r, cols: c, data }
    }

    pub fn from_columns(cols: &[Vec<F>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    let v = a.clone() * b;
                    self_add(&mut out.data[idx], v);
                }
            }
        }
        Ok(out)
    }

    /// Stack matrices with equal column counts vertically.
    pub fn vstack(blocks: &[Self]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: b.cols });
            }
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        Ok(Self { rows, cols, data })
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Field::to_f64).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

fn self_add<F: Field>(slot: &mut F, v: F) {
    let cur = core::mem::replace(slot, F::zero());
    *slot = cur + &v;
}

/// Reduced row echelon form in place, pivoting only within the first
/// `pivot_cols` columns (the rest are carried along, e.g. right-hand sides).
/// Returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>, pivot_cols: usize) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols.min(cols) {
        if r == rows {
            break;
        }
        let candidate = if F::EXACT {
            (r..rows).find(|&i| !m.get(i, c).is_zero())
        } else {
            (r..rows)
                .filter(|&i| !m.get(i, c).is_negligible())
                .max_by(|&a, &b| {
                    libm::fabs(m.get(a, c).to_f64())
                        .partial_cmp(&libm::fabs(m.get(b, c).to_f64()))
                        .unwrap_or(core::cmp::Ordering::Equal)
                })
        };
        let Some(p) = candidate else { continue };
        m.swap_rows(r, p);
        let inv = F::one() / m.get(r, c);
        let nz: Vec<usize> = (c..cols).filter(|&j| !m.get(r, j).is_zero()).collect();
        for &j in &nz {
            let v = m.get(r, j).clone() * &inv;
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &nz {
                let v = m.get(i, j).clone() - &(factor.clone() * m.get(r, j));
                m.set(i, j, v);
            }
            if !F::EXACT {
                m.set(i, c, F::zero());
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(a: &Matrix<F>) -> usize {
    let mut m = a.clone();
    let cols = m.cols;
    rref(&mut m, cols).len()
}

/// Unique solution `X` of `A X = B` for an `A` of full column rank, possibly
/// overdetermined. Every row left without a pivot must reduce to zero on the
/// right-hand side, otherwise [`Error::Inconsistent`].
pub fn solve<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Matrix<F>> {
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, found: b.rows });
    }
    let n = a.cols;
    let k = b.cols;
    let mut aug = Matrix::zeros(a.rows, n + k);
    for i in 0..a.rows {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        for j in 0..k {
            aug.set(i, n + j, b.get(i, j).clone());
        }
    }
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return Err(Error::Singular);
    }
    for i in n..aug.rows {
        if (0..k).any(|j| !aug.get(i, n + j).is_negligible()) {
            return Err(Error::Inconsistent);
        }
    }
    let mut x = Matrix::zeros(n, k);
    for (r, &c) in pivots.iter().enumerate() {
        for j in 0..k {
            x.set(c, j, aug.get(r, n + j).clone());
        }
    }
    Ok(x)
}

/// Basis of the right null space, one vector per free column; each vector
/// has a 1 in its free column.
pub fn nullspace<F: Field>(a: &Matrix<F>) -> Vec<Vec<F>> {
    let mut m = a.clone();
    let cols = m.cols;
    let pivots = rref(&mut m, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, free).clone();
            }
            v
        })
        .collect()
}

/// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with Wilkinson
/// shifts). `off[i]` couples entries `i` and `i + 1`. Sorted ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n - 1, found: off.len() });
    }
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.iter().copied().chain(core::iter::once(0.0)).collect();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = libm::fabs(d[m]) + libm::fabs(d[m + 1]);
                if libm::fabs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::Quadrature("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m as isize - 1;
            let mut early = false;
            while i >= l as isize {
                let iu = i as usize;
                let f = s * e[iu];
                let b = c * e[iu];
                r = libm::hypot(f, g);
                e[iu + 1] = r;
                if r == 0.0 {
                    d[iu + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[iu + 1] - p;
                r = (d[iu] - g) * s + 2.0 * c * b;
                p = s * r;
                d[iu + 1] = g + p;
                g = c * r - b;
                i -= 1;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    Ok(d)
}

/// Eigenvalues of a small dense symmetric matrix by cyclic Jacobi sweeps.
pub fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| m[i][i] * m[i][i]).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q] == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for row in m.iter_mut() {
                    let (a, b) = (row[p], row[q]);
                    row[p] = c * a - s * b;
                    row[q] = s * a + c * b;
                }
                let (lo, hi) = m.split_at_mut(q);
                for (a, b) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = c * x - s * y;
                    *b = s * x + c * y;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    ev
}
