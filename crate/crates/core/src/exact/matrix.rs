use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RationalMatrix;
use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.into() } else { 0.into() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows of machine integers. Ragged input is an error.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        if let Some(bad) = columns.iter().position(|c| c.len() != rows) {
            return Err(Error::Dimension(format!(
                "column {bad} has length {}, expected {rows}",
                columns[bad].len()
            )));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| {
            columns[j][i].clone()
        }))
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Returns a copy with entry (i, j) replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: BigInt) -> Self {
        let mut m = self.clone();
        m.data[i * self.cols + j] = value;
        m
    }

    /// Returns a copy with column `j` replaced by `col`.
    pub fn with_column(&self, j: usize, col: &[BigInt]) -> Result<Self> {
        if col.len() != self.rows || j >= self.cols {
            return Err(Error::Dimension("column replacement out of shape".into()));
        }
        let mut m = self.clone();
        for (i, v) in col.iter().enumerate() {
            m.data[i * self.cols + j] = v.clone();
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &IntMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("addition of mismatched shapes".into()));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
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
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Unipotent lower triangular: ones on the diagonal, zeros above it.
    pub fn is_unipotent_lower_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_one() && (i + 1..self.cols).all(|j| self.get(i, j).is_zero())
            })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn principal_minor(&self, idx: &[usize]) -> Result<BigInt> {
        self.submatrix(idx, idx).det()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.to_rows();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        negate = !negate;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), Ok(d) if d.abs().is_one())
    }

    /// Rank over the rationals, via fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.to_rows();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, rank);
            for i in rank + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = &m[i][j] * &m[rank][c] - &m[i][c] * &m[rank][j];
                    m[i][j] = v / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[rank][c].clone();
            rank += 1;
        }
        rank
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| {
            BigRational::from_integer(self.get(i, j).clone())
        })
    }

    /// Exact inverse over the rationals.
    pub fn inverse_rational(&self) -> Result<RationalMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        self.to_rational().inverse()
    }

    /// Integer inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let inv = self.inverse_rational()?;
        inv.to_integer()
            .ok_or_else(|| Error::Dimension("matrix is not unimodular".into()))
    }

    /// Solves `self * x = rhs` over the rationals for a square nonsingular matrix.
    pub fn solve_rational(&self, rhs: &[BigInt]) -> Result<Vec<BigRational>> {
        let inv = self.inverse_rational()?;
        let r: Vec<BigRational> = rhs
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        inv.mul_vec(&r)
    }

    /// Primitive integer basis of the rational kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        self.to_rational()
            .kernel_basis()
            .into_iter()
            .map(|v| primitive_integer_vector(&v))
            .collect()
    }
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = vector_gcd(&ints);
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Nonnegative gcd of the entries; zero for the zero vector.
pub fn vector_gcd(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

impl fmt::Display for IntMatrix {
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

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(IntMatrix::identity(3).det().unwrap(), 1.into());
        assert_eq!(IntMatrix::zeros(0, 0).det().unwrap(), 1.into());
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).det().unwrap(), (-1).into());
        // cyclic form with a = (1,1,1)
        let a = m(&[vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(a.det().unwrap(), 2.into());
        assert!(m(&[vec![1, 2, 3]]).det().is_err());
    }

    #[test]
    fn det_needs_pivot_swap() {
        let a = m(&[vec![0, 0, 1], vec![0, 2, 0], vec![3, 0, 0]]);
        assert_eq!(a.det().unwrap(), (-6).into());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(m(&[vec![0, 0], vec![0, 0]]).rank(), 0);
        assert_eq!(m(&[vec![0, 1, 2], vec![0, 2, 5], vec![0, 0, 0]]).rank(), 2);
    }

    #[test]
    fn inverse_of_diagonal() {
        let inv = m(&[vec![2, 0], vec![0, 1]]).inverse_rational().unwrap();
        assert_eq!(inv.get(0, 0), &BigRational::new(1.into(), 2.into()));
        assert_eq!(inv.get(1, 1), &BigRational::from_integer(1.into()));
        assert!(m(&[vec![1, 2], vec![2, 4]]).inverse_rational().is_err());
    }

    #[test]
    fn kernel_is_primitive() {
        let k = m(&[vec![2, 4, 6]]).kernel_basis();
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!(vector_gcd(&v), BigInt::one());
        }
    }
}
