//! Dense square matrices with exact nonnegative integer entries, plus the
//! small float helpers shared by the numerical modules.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("integer overflow in matrix arithmetic")]
pub struct Overflow;

/// Row-major square matrix over `u64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    n: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from rows; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "ragged rows");
            data.extend_from_slice(r);
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.n + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        (0..self.n).all(|c| self.get(r, c) == 0)
    }

    pub fn col_is_zero(&self, c: usize) -> bool {
        (0..self.n).all(|r| self.get(r, c) == 0)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let p = a.checked_mul(b).ok_or(Overflow)?;
                    let cell = &mut out.data[i * n + j];
                    *cell = cell.checked_add(p).ok_or(Overflow)?;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_pow(&self, mut e: u32) -> Result<Self, Overflow> {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Principal submatrix on `idx`, in the given order.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// Rectangular block with rows `ri` and columns `ci`.
    pub fn block_f64(&self, ri: &[usize], ci: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(ri.len(), ci.len(), |a, b| self.get(ri[a], ci[b]) as f64)
    }

    /// `P A P^T` where `perm[new] = old`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        self.restrict(perm)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| self.get(r, c) as f64)
    }

    pub fn row_sums(&self) -> Vec<u128> {
        (0..self.n).map(|r| (0..self.n).map(|c| self.get(r, c) as u128).sum()).collect()
    }

    /// Exact determinant of `c·I − A` by fraction-free elimination.
    /// `None` when an intermediate value leaves the `i128` range.
    pub fn char_poly_at(&self, c: i128) -> Option<i128> {
        let n = self.n;
        if n == 0 {
            return Some(1);
        }
        let mut m: Vec<Vec<i128>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|k| {
                        let a = self.get(r, k) as i128;
                        if r == k {
                            c - a
                        } else {
                            -a
                        }
                    })
                    .collect()
            })
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&r| m[r][k] != 0) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Some(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                    m[i][j] = t / prev;
                }
            }
            prev = m[k][k];
        }
        m[n - 1][n - 1].checked_mul(sign)
    }
}

/// Supremum norm of a vector.
pub fn norm_inf(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |a, &x| a.max(x.abs()))
}

/// `∏_i (I − c_i M_i)` applied to `v`; factors commute so order is irrelevant.
pub fn apply_gap_product(ms: &[DMatrix<f64>], coeffs: &[f64], v: &DVector<f64>) -> DVector<f64> {
    let mut out = v.clone();
    for (m, &c) in ms.iter().zip(coeffs) {
        out = &out - m * &out * c;
    }
    out
}

/// `∏_i (I − c_i M_i)^{-1}` applied to `v` by successive LU solves.
/// Returns `None` if a factor is numerically singular.
pub fn apply_resolvent_product(ms: &[DMatrix<f64>], coeffs: &[f64], v: &DVector<f64>) -> Option<DVector<f64>> {
    let mut out = v.clone();
    for (m, &c) in ms.iter().zip(coeffs) {
        let n = m.nrows();
        let f = DMatrix::<f64>::identity(n, n) - m * c;
        out = f.lu().solve(&out)?;
    }
    Some(out)
}

/// 1-norm condition number estimate of `I − c M`, via the explicit inverse.
pub fn condition_number(m: &DMatrix<f64>, c: f64) -> f64 {
    let n = m.nrows();
    let f = DMatrix::<f64>::identity(n, n) - m * c;
    let norm1 = |a: &DMatrix<f64>| (0..a.ncols()).map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    match f.clone().try_inverse() {
        Some(inv) => norm1(&f) * norm1(&inv),
        None => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_product() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![0, 3]]);
        let p = a.checked_pow(3).unwrap();
        let q = a.checked_mul(&a).unwrap().checked_mul(&a).unwrap();
        assert_eq!(p, q);
        assert_eq!(a.checked_pow(0).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn overflow_is_detected() {
        let a = IntMatrix::from_rows(&[vec![u64::MAX / 2]]);
        assert_eq!(a.checked_pow(2), Err(Overflow));
    }

    #[test]
    fn char_poly_roots() {
        // [[0,2],[3,0]]: c^2 - 6
        let a = IntMatrix::from_rows(&[vec![0, 2], vec![3, 0]]);
        assert_eq!(a.char_poly_at(0), Some(-6));
        assert_eq!(a.char_poly_at(3), Some(3));
        let b = IntMatrix::from_rows(&[vec![2, 6, 1, 0], vec![0, 0, 0, 1], vec![0, 0, 0, 12], vec![0, 0, 0, 8]]);
        assert_eq!(b.char_poly_at(8), Some(0));
        assert_eq!(b.char_poly_at(2), Some(0));
        assert_ne!(b.char_poly_at(3), Some(0));
    }

    #[test]
    fn resolvent_inverts_gap_product() {
        let m = vec![DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0])];
        let v = DVector::from_vec(vec![1.0, 2.0]);
        let r = apply_resolvent_product(&m, &[0.25], &v).unwrap();
        let back = apply_gap_product(&m, &[0.25], &r);
        assert!((back - v).amax() < 1e-14);
    }
}
