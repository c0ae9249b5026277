use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U · M · V = D` with `U`, `V` unimodular and the
/// diagonal of `D` nonnegative with `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1, .., d_min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|x| !x.is_zero() && *x != BigInt::from(1))
            .collect()
    }
}

struct Work {
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap(a, b);
        self.u.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            row.swap(a, b);
        }
    }

    // row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.d, &mut self.u] {
            for j in 0..m[dst].len() {
                let t = q * &m[src][j];
                m[dst][j] -= t;
            }
        }
    }

    // col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.d, &mut self.v] {
            for row in m.iter_mut() {
                let t = q * &row[src];
                row[dst] -= t;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for m in [&mut self.d, &mut self.u] {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
    }
}

/// Quotient rounded to nearest, so remainders are at most half the divisor.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = r * 2;
    if twice.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Smith normal form by row and column reduction with pivot minimization.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        d: m.to_rows(),
        u: IntMatrix::identity(rows).to_rows(),
        v: IntMatrix::identity(cols).to_rows(),
    };
    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !w.d[i][j].is_zero())
                .min_by(|&(a, b), &(c, d)| w.d[a][b].abs().cmp(&w.d[c][d].abs()));
            let Some((pi, pj)) = pivot else {
                return finish(w, rows, cols);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.d[t][t].clone();
            for i in t + 1..rows {
                if !w.d[i][t].is_zero() {
                    let q = round_div(&w.d[i][t], &p);
                    w.row_axpy(i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !w.d[t][j].is_zero() {
                    let q = round_div(&w.d[t][j], &p);
                    w.col_axpy(j, t, &q);
                }
            }
            let clean = (t + 1..rows).all(|i| w.d[i][t].is_zero())
                && (t + 1..cols).all(|j| w.d[t][j].is_zero());
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.d[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    // fold the offending row in; the next pass finds a smaller pivot
                    w.row_axpy(t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if w.d[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    finish(w, rows, cols)
}

fn finish(w: Work, rows: usize, cols: usize) -> SmithForm {
    let flat = |m: Vec<Vec<BigInt>>, r: usize, c: usize| {
        IntMatrix::new(r, c, m.into_iter().flatten().collect()).expect("shape preserved")
    };
    SmithForm {
        u: flat(w.u, rows, rows),
        d: flat(w.d, rows, cols),
        v: flat(w.v, cols, cols),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.det().unwrap().abs().is_one());
        assert!(s.v.det().unwrap().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.u.is_identity() && s.v.is_identity() && s.d.is_zero());
    }

    #[test]
    fn diag_2_3() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(check(&m).diagonal(), vec![1.into(), 6.into()]);
    }

    #[test]
    fn sign_normalized() {
        let m = IntMatrix::from_rows(&[vec![-5]]).unwrap();
        assert_eq!(check(&m).diagonal(), vec![5.into()]);
    }

    #[test]
    fn rectangular() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        assert_eq!(check(&m).diagonal(), vec![2.into(), 6.into(), 12.into()]);
        let m = IntMatrix::from_rows(&[vec![6, 4], vec![3, 9], vec![0, 12]]).unwrap();
        check(&m);
    }
}
