//! Fourier–Motzkin elimination for small systems `g·x >= r`, with Imbert's
//! history rule discarding combinations that are certainly redundant.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exact::primitive_integer_vector;

#[derive(Clone)]
struct Row {
    g: Vec<BigRational>,
    r: BigRational,
    history: Vec<u64>,
}

fn history_len(h: &[u64]) -> u32 {
    h.iter().map(|w| w.count_ones()).sum()
}

fn merge(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

/// Scales the row so the coefficient vector is primitive integral, which lets
/// parallel rows be merged by keeping the strongest right-hand side.
fn normalize(row: Row) -> Row {
    if row.g.iter().all(Zero::is_zero) {
        return row;
    }
    let ints = primitive_integer_vector(&row.g);
    // positive factor mapping g to ints
    let (i, gi) = row
        .g
        .iter()
        .enumerate()
        .find(|(_, x)| !x.is_zero())
        .expect("nonzero row");
    let factor = BigRational::from_integer(ints[i].clone()) / gi;
    Row {
        g: ints.into_iter().map(BigRational::from_integer).collect(),
        r: &row.r * factor,
        history: row.history,
    }
}

/// Decides whether `rows[k]·x >= rhs[k]` has a real solution.
pub fn fm_feasible(rows: &[Vec<BigRational>], rhs: &[BigRational]) -> bool {
    let vars = rows.first().map_or(0, Vec::len);
    let words = rows.len().div_ceil(64);
    let mut sys: Vec<Row> = rows
        .iter()
        .zip(rhs)
        .enumerate()
        .map(|(k, (g, r))| {
            let mut history = vec![0u64; words];
            history[k / 64] |= 1 << (k % 64);
            normalize(Row {
                g: g.clone(),
                r: r.clone(),
                history,
            })
        })
        .collect();
    for (eliminated, j) in (0..vars).enumerate() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for row in sys {
            if row.g[j].is_positive() {
                pos.push(row);
            } else if row.g[j].is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        let limit = eliminated as u32 + 2;
        for p in &pos {
            for q in &neg {
                let history = merge(&p.history, &q.history);
                if history_len(&history) > limit {
                    continue;
                }
                let (a, b) = (-q.g[j].clone(), p.g[j].clone());
                let g = p.g.iter().zip(&q.g).map(|(x, y)| &a * x + &b * y).collect();
                rest.push(normalize(Row {
                    g,
                    r: &a * &p.r + &b * &q.r,
                    history,
                }));
            }
        }
        let mut best: HashMap<Vec<BigInt>, Row> = HashMap::new();
        for row in rest {
            if row.g.iter().all(Zero::is_zero) {
                if row.r.is_positive() {
                    return false;
                }
                continue;
            }
            let key: Vec<BigInt> = row.g.iter().map(|x| x.to_integer()).collect();
            match best.get(&key) {
                Some(old) if old.r >= row.r => {}
                _ => {
                    best.insert(key, row);
                }
            }
        }
        sys = best.into_values().collect();
    }
    sys.iter().all(|row| !row.r.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn interval_systems() {
        // x >= 1, -x >= -2
        assert!(fm_feasible(
            &[vec![rat(1)], vec![rat(-1)]],
            &[rat(1), rat(-2)]
        ));
        // x >= 3, -x >= -2
        assert!(!fm_feasible(
            &[vec![rat(1)], vec![rat(-1)]],
            &[rat(3), rat(-2)]
        ));
    }
}
