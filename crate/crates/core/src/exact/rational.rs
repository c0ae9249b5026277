use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// Dense rational matrix. `BigRational` keeps every entry reduced with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(
                "rational product of mismatched shapes".into(),
            ));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        }))
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("rational vector length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows) && self.rows == self.cols
    }

    /// The integer matrix with the same entries, if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if !self.data.iter().all(|x| x.is_integer()) {
            return None;
        }
        Some(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).to_integer()
        }))
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RationalMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<BigRational>> =
            (0..n).map(|i| Self::identity(n).row(i).to_vec()).collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a[i][c].is_zero())
                .ok_or(Error::Singular)?;
            a.swap(p, c);
            inv.swap(p, c);
            let pivot = a[c][c].clone();
            for j in 0..n {
                a[c][j] = &a[c][j] / &pivot;
                inv[c][j] = &inv[c][j] / &pivot;
            }
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[i][j] -= t;
                }
            }
        }
        Ok(Self::from_fn(n, n, |i, j| inv[i][j].clone()))
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut a: Vec<Vec<BigRational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            let pivot = a[r][c].clone();
            for x in &mut a[r][c..] {
                *x = &*x / &pivot;
            }
            let prow = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                    *x -= &f * y;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            Self::from_fn(self.rows, self.cols, |i, j| a[i][j].clone()),
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }
}

impl From<&IntMatrix> for RationalMatrix {
    fn from(m: &IntMatrix) -> Self {
        m.to_rational()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Converts an integer to a rational.
pub fn rat(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}
