//! Exact phase-one simplex with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Result of searching for `y >= 0` with `M y = c`.
pub(crate) enum PhaseOne {
    /// A nonnegative solution.
    Feasible(Vec<BigRational>),
    /// No solution; `pi` satisfies `Mᵀ pi <= 0` and `cᵀ pi > 0`.
    Infeasible(Vec<BigRational>),
}

/// Solves `min 𝟙ᵀs` subject to `M y + s = c`, `y, s >= 0`, for `c >= 0`.
/// `m` is given as rows of equal length.
pub(crate) fn phase_one(m: &[Vec<BigRational>], c: &[BigRational]) -> PhaseOne {
    let rows = m.len();
    let k = m.first().map_or(0, Vec::len);
    let width = k + rows;
    // tableau rows: coefficients for y then s, followed by the right-hand side
    let mut t: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r = m[i].clone();
            r.extend((0..rows).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r.push(c[i].clone());
            r
        })
        .collect();
    let mut basis: Vec<usize> = (k..width).collect();
    // reduced costs, last entry is minus the objective value
    let mut d: Vec<BigRational> = (0..=width)
        .map(|j| {
            let base = if j >= k && j < width {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            base - t.iter().map(|r| &r[j]).sum::<BigRational>()
        })
        .collect();

    while let Some(enter) = (0..width).find(|&j| d[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero, so a leaving row always exists
        let (r, _) = leave.expect("phase one cannot be unbounded");
        let piv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        let f = d[enter].clone();
        for (x, p) in d.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
        basis[r] = enter;
    }

    let value = -d[width].clone();
    if value.is_zero() {
        let mut y = vec![BigRational::zero(); k];
        for (i, &b) in basis.iter().enumerate() {
            if b < k {
                y[b] = t[i][width].clone();
            }
        }
        PhaseOne::Feasible(y)
    } else {
        // dual of the artificial column s_i: reduced cost d = 1 - pi_i
        let pi = (0..rows).map(|i| BigRational::one() - &d[k + i]).collect();
        PhaseOne::Infeasible(pi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn simple_feasible_system() {
        // y1 + y2 = 1, y1 - y2 = 0
        let m = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        match phase_one(&m, &[rat(1), rat(0)]) {
            PhaseOne::Feasible(y) => {
                assert_eq!(y, vec![BigRational::new(1.into(), 2.into()); 2]);
            }
            PhaseOne::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn simple_infeasible_system() {
        // y1 = 1, y1 = 0
        let m = vec![vec![rat(1)], vec![rat(1)]];
        match phase_one(&m, &[rat(1), rat(0)]) {
            PhaseOne::Feasible(_) => panic!("expected infeasible"),
            PhaseOne::Infeasible(pi) => {
                assert!(pi[0].is_positive());
                assert!(&pi[0] + &pi[1] <= rat(0));
            }
        }
    }
}
