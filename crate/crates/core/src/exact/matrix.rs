//! Dense matrices over a `Ring`, with exact minors.

use super::ring::{Rational, Ring};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].plus(&a.times(b));
                }
            }
        }
        Ok(out)
    }

    /// Submatrix on 0-based row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Determinant by row-by-row Laplace expansion memoized over column sets.
    /// Division-free, so valid over any commutative ring.
    pub fn det(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        if n > 20 {
            return Err(Error::InvalidInput("cofactor determinant limited to 20x20".into()));
        }
        let full = 1usize << n;
        let mut dp: Vec<Option<T>> = vec![None; full];
        dp[0] = Some(T::one());
        let mut masks: Vec<usize> = (1..full).collect();
        masks.sort_by_key(|m| m.count_ones());
        for mask in masks {
            let r = mask.count_ones() as usize - 1;
            let mut acc = T::zero();
            let mut pos = 0;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let a = self.get(r, j);
                if !a.is_zero() {
                    if let Some(sub) = &dp[mask ^ (1 << j)] {
                        if !sub.is_zero() {
                            let t = a.times(sub);
                            acc = if (r + pos).is_multiple_of(2) { acc.plus(&t) } else { acc.minus(&t) };
                        }
                    }
                }
                pos += 1;
            }
            dp[mask] = Some(acc);
        }
        Ok(dp[full - 1].take().unwrap())
    }

    /// Minor on 0-based row and column index lists.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<T> {
        if rows.len() != cols.len() {
            return Err(Error::DimensionMismatch("minor needs as many rows as columns".into()));
        }
        self.select(rows, cols).det()
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    *x == T::one()
                } else if j < i {
                    x.is_zero()
                } else {
                    true
                }
            })
        })
    }
}

impl Matrix<Rational> {
    /// Fraction-free Bareiss elimination with row pivoting.
    pub fn det_bareiss(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = Rational::one();
        let mut prev = Rational::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    None => return Ok(Rational::zero()),
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * prev)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.rows;
        if self.cols != n || b.len() != n {
            return Err(Error::DimensionMismatch("solve".into()));
        }
        let mut a = self.clone();
        let mut x: Vec<Rational> = b.to_vec();
        for k in 0..n {
            let p = (k..n).find(|&i| !a.get(i, k).is_zero()).ok_or(Error::Singular)?;
            if p != k {
                a.swap_rows(p, k);
                x.swap(p, k);
            }
            let piv = a.get(k, k).clone();
            for i in k + 1..n {
                let f = a.get(i, k) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a.get(i, j) - &f * a.get(k, j);
                    a.set(i, j, v);
                }
                let v = &x[i] - &f * &x[k];
                x[i] = v;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k].clone();
            for (j, xj) in x.iter().enumerate().skip(k + 1) {
                s -= a.get(k, j) * xj;
            }
            x[k] = s / a.get(k, k);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for j in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            let col = self.solve(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::rat_int;

    #[test]
    fn small_determinants() {
        let m = Matrix::from_rows(vec![
            vec![rat_int(2), rat_int(-1), rat_int(0)],
            vec![rat_int(1), rat_int(3), rat_int(4)],
            vec![rat_int(0), rat_int(5), rat_int(1)],
        ])
        .unwrap();
        assert_eq!(m.det().unwrap(), rat_int(-33));
        assert_eq!(m.det_bareiss().unwrap(), rat_int(-33));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn singular_solve() {
        let m = Matrix::from_rows(vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(4)]]).unwrap();
        assert_eq!(m.solve(&[rat_int(1), rat_int(1)]), Err(Error::Singular));
        assert_eq!(m.det_bareiss().unwrap(), rat_int(0));
    }
}
