//! One graded piece of a quotient ring: the monomials of a fixed degree
//! modulo the ideal, as a free abelian group with a chosen basis.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{monomials_of_degree, Monomial, Poly};
use crate::exact::{smith_normal_form, IntMatrix};

/// Degree-`k` part of `Z[t_1..t_N] / I`.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: usize,
    /// Every monomial of this degree.
    pub monomials: Vec<Monomial>,
    /// Number of relation rows (ideal generators times monomials).
    pub relation_rows: usize,
    /// Representative polynomials of the chosen basis.
    pub basis: Vec<Poly>,
    /// Whether the basis consists of the requested monomials.
    pub preferred_basis: bool,
    /// Row `j` holds the coordinates of monomial `j` in the basis.
    pub normal_form: IntMatrix,
    /// Invariant factors greater than one; empty when the piece is free.
    pub torsion: Vec<BigInt>,
    index: HashMap<Monomial, usize>,
}

type SparseRow = BTreeMap<usize, BigInt>;

impl GradedPiece {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn monomial_index(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a homogeneous polynomial of this degree.
    pub fn coordinates(&self, p: &Poly) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rank()];
        for (m, c) in p.terms() {
            let j = self.index[m];
            for (o, v) in out.iter_mut().zip(self.normal_form.row(j)) {
                *o += c * v;
            }
        }
        out
    }

    /// Builds the piece. Monomials in `preferred` are kept to the end of the
    /// elimination order and used as the basis when they form one.
    pub fn compute(
        nvars: usize,
        relations: &[Poly],
        k: usize,
        preferred: Option<&[Monomial]>,
    ) -> GradedPiece {
        let pref: Vec<Monomial> = preferred.map(<[Monomial]>::to_vec).unwrap_or_default();
        let pref_set: BTreeSet<&Monomial> = pref.iter().collect();
        let mut monomials: Vec<Monomial> = monomials_of_degree(nvars, k)
            .into_iter()
            .filter(|m| !pref_set.contains(m))
            .collect();
        monomials.extend(pref.iter().cloned());
        let index: HashMap<Monomial, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let cols = monomials.len();

        let mut rows: Vec<SparseRow> = Vec::new();
        for r in relations {
            let Some(d) = r.homogeneous_degree() else {
                continue;
            };
            if d > k {
                continue;
            }
            for m in monomials_of_degree(nvars, k - d) {
                let prod = r.mul(&Poly::monomial(m, BigInt::one()));
                let row: SparseRow = prod.terms().map(|(mm, c)| (index[mm], c.clone())).collect();
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
        let relation_rows = rows.len();

        let elim = eliminate_unit_pivots(rows, cols);
        let free: Vec<usize> = (0..cols)
            .filter(|c| !elim.pivot_rows.contains_key(c))
            .collect();
        let free_pos: HashMap<usize, usize> =
            free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let f = free.len();

        // lattice of residual relations among free columns
        let res_rows: Vec<Vec<BigInt>> = elim
            .residual
            .iter()
            .map(|row| {
                let mut dense = vec![BigInt::zero(); f];
                for (c, v) in row {
                    dense[free_pos[c]] = v.clone();
                }
                dense
            })
            .collect();

        let (v, r, torsion) = if res_rows.is_empty() {
            (IntMatrix::identity(f), 0, Vec::new())
        } else {
            let e = IntMatrix::from_rows(&res_rows).expect("rectangular");
            let snf = smith_normal_form(&e);
            let diag = snf.diagonal();
            let r = diag.iter().filter(|d| !d.is_zero()).count();
            let torsion: Vec<BigInt> = diag
                .into_iter()
                .filter(|d| !d.is_zero() && !d.is_one())
                .collect();
            (snf.v, r, torsion)
        };
        let h = f - r;

        // coordinates in the free quotient before choosing a basis
        let free_coords = |fi: usize| -> Vec<BigInt> { v.row(fi)[r..].to_vec() };
        let mut coords: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); h]; cols];
        for (&c, &fi) in &free_pos {
            coords[c] = free_coords(fi);
        }
        for (&c, &ri) in &elim.pivot_rows {
            let row = &elim.rows[ri];
            let mut acc = vec![BigInt::zero(); h];
            for (&cc, val) in row {
                if cc == c {
                    continue;
                }
                for (a, b) in acc.iter_mut().zip(free_coords(free_pos[&cc])) {
                    *a -= val * b;
                }
            }
            coords[c] = acc;
        }

        let mut chosen: Option<Vec<usize>> = None;
        let mut preferred_basis = false;
        if !pref.is_empty() && pref.len() == h {
            let idx: Vec<usize> = pref.iter().map(|m| index[m]).collect();
            if unimodular_rows(&coords, &idx, h) {
                chosen = Some(idx);
                preferred_basis = true;
            }
        }
        if chosen.is_none() {
            chosen = greedy_monomial_basis(
                &coords,
                &pref.iter().map(|m| index[m]).collect::<Vec<_>>(),
                h,
            );
        }

        let (basis, normal_form) = match chosen {
            Some(idx) => {
                let p = IntMatrix::from_fn(h, h, |i, j| coords[idx[i]][j].clone());
                let p_inv = p.inverse_unimodular().expect("unimodular by selection");
                let nf = IntMatrix::from_fn(cols, h, |j, i| {
                    (0..h).map(|t| &coords[j][t] * p_inv.get(t, i)).sum()
                });
                let basis = idx
                    .iter()
                    .map(|&j| Poly::monomial(monomials[j].clone(), BigInt::one()))
                    .collect();
                (basis, nf)
            }
            None => {
                // basis of free coordinates: row i of V⁻¹ restricted to free columns
                let v_inv = v.inverse_unimodular().expect("V is unimodular");
                let basis = (0..h)
                    .map(|i| {
                        let mut p = Poly::zero(nvars);
                        for (fi, &c) in free.iter().enumerate() {
                            p.add_term(monomials[c].clone(), v_inv.get(r + i, fi).clone());
                        }
                        p
                    })
                    .collect();
                let nf = IntMatrix::from_fn(cols, h, |j, i| coords[j][i].clone());
                (basis, nf)
            }
        };

        GradedPiece {
            degree: k,
            monomials,
            relation_rows,
            basis,
            preferred_basis,
            normal_form,
            torsion,
            index,
        }
    }
}

struct Elimination {
    rows: Vec<SparseRow>,
    pivot_rows: BTreeMap<usize, usize>,
    residual: Vec<SparseRow>,
}

/// Gauss–Jordan elimination using only pivots equal to `±1`, taking columns
/// in index order and preferring short rows.
fn eliminate_unit_pivots(mut rows: Vec<SparseRow>, cols: usize) -> Elimination {
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            col_rows[c].insert(i);
        }
    }
    let mut is_pivot_row = vec![false; rows.len()];
    let mut pivot_rows: BTreeMap<usize, usize> = BTreeMap::new();
    loop {
        let mut progress = false;
        for c in 0..cols {
            if pivot_rows.contains_key(&c) {
                continue;
            }
            let cand = col_rows[c]
                .iter()
                .copied()
                .filter(|&i| !is_pivot_row[i] && rows[i][&c].abs().is_one())
                .min_by_key(|&i| rows[i].len());
            let Some(p) = cand else {
                continue;
            };
            progress = true;
            if rows[p][&c].is_negative() {
                for v in rows[p].values_mut() {
                    *v = -&*v;
                }
            }
            is_pivot_row[p] = true;
            pivot_rows.insert(c, p);
            let prow = rows[p].clone();
            let targets: Vec<usize> = col_rows[c].iter().copied().filter(|&i| i != p).collect();
            for i in targets {
                let f = rows[i][&c].clone();
                for (&cc, v) in &prow {
                    let e = rows[i].entry(cc).or_default();
                    *e -= &f * v;
                    if e.is_zero() {
                        rows[i].remove(&cc);
                        col_rows[cc].remove(&i);
                    } else {
                        col_rows[cc].insert(i);
                    }
                }
            }
        }
        if !progress {
            break;
        }
    }
    let residual = rows
        .iter()
        .enumerate()
        .filter(|(i, r)| !is_pivot_row[*i] && !r.is_empty())
        .map(|(_, r)| r.clone())
        .collect();
    Elimination {
        rows,
        pivot_rows,
        residual,
    }
}

fn unimodular_rows(coords: &[Vec<BigInt>], idx: &[usize], h: usize) -> bool {
    if idx.len() != h {
        return false;
    }
    let m = IntMatrix::from_fn(h, h, |i, j| coords[idx[i]][j].clone());
    m.is_unimodular()
}

/// Chooses monomials, preferred ones first, whose coordinate rows extend to a
/// basis of the free quotient.
fn greedy_monomial_basis(
    coords: &[Vec<BigInt>],
    preferred: &[usize],
    h: usize,
) -> Option<Vec<usize>> {
    if h == 0 {
        return Some(Vec::new());
    }
    let order: Vec<usize> = preferred
        .iter()
        .copied()
        .chain((0..coords.len()).filter(|j| !preferred.contains(j)))
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    for j in order {
        if coords[j].iter().all(Zero::is_zero) {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(j);
        let m = IntMatrix::from_fn(trial.len(), h, |i, c| coords[trial[i]][c].clone());
        let snf = smith_normal_form(&m);
        let diag = snf.diagonal();
        if diag.iter().all(|d| d.is_one()) {
            chosen = trial;
            if chosen.len() == h {
                return Some(chosen);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line() {
        // Z[t1, t2] / (t1 - t2, t1 t2): degree-one rank 1, degree-two rank 0
        let t1 = Poly::var(2, 0);
        let t2 = Poly::var(2, 1);
        let rels = vec![t1.add(&t2.neg()), t1.mul(&t2)];
        assert_eq!(GradedPiece::compute(2, &rels, 1, None).rank(), 1);
        assert_eq!(GradedPiece::compute(2, &rels, 2, None).rank(), 0);
        assert_eq!(GradedPiece::compute(2, &rels, 0, None).rank(), 1);
    }

    #[test]
    fn detects_torsion() {
        // Z[t] / (2t): degree one is Z/2
        let rels = vec![Poly::var(1, 0).scale(&2.into())];
        let p = GradedPiece::compute(1, &rels, 1, None);
        assert_eq!(p.rank(), 0);
        assert_eq!(p.torsion, vec![BigInt::from(2)]);
    }
}
