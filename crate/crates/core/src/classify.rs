//! Validation, type assignment, normal forms and isomorphism decisions for
//! pairs `(A, b)`, plus the integer identities for determinant-two matrices.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat, IntMatrix, Permutation, RationalMatrix};
use crate::fans::{raw_fan_from_pair, VcPair};
use crate::json::JsonInt;

/// Outcome of `validate_pair`: empty `failures` means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `(A, b)` defines a complete nonsingular fan over `C_n`:
/// proper principal minors of `A` are 1, the relation between `b` and the
/// columns of `A` holds, each column replaced by `b` gives determinant 1,
/// and the fan itself is nonsingular and complete.
pub fn validate_pair(p: &VcPair) -> ValidationReport {
    let n = p.n();
    let a = p.a();
    let mut failures = Vec::new();

    for mask in 1u64..(1 << n) - 1 {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let minor = a.principal_minor(&idx).expect("square");
        if !minor.is_one() {
            let shown: Vec<usize> = idx.iter().map(|i| i + 1).collect();
            failures.push(format!(
                "principal minor on {shown:?} is {minor}, expected 1"
            ));
            break;
        }
    }

    let det = a.det().expect("square");
    let col_sum: Vec<BigInt> = (0..n).map(|i| a.row(i).iter().sum()).collect();
    if det.is_zero() {
        let s: BigInt = p.b().iter().sum();
        if !s.is_one() {
            failures.push("Type 0 requires sum(b)=1".into());
        }
    } else {
        let ok = col_sum.iter().zip(p.b()).all(|(s, b)| *s == &det * b);
        if !ok {
            failures.push(format!(
                "b must equal (1/det A) times the sum of the columns of A (det A = {det})"
            ));
        }
    }

    for i in 0..n {
        let m = a.with_column(i, p.b()).expect("shape");
        let d = m.det().expect("square");
        if !d.is_one() {
            failures.push(format!(
                "replacing column {} of A by b gives determinant {d}, expected 1",
                i + 1
            ));
        }
    }

    if failures.is_empty() {
        match raw_fan_from_pair(p) {
            Ok(f) => {
                if !f.is_nonsingular() {
                    failures.push("the fan over C_n is singular".into());
                } else if let Err(e) = f.check_complete() {
                    failures.push(format!("the fan over C_n is not complete: {e}"));
                }
            }
            Err(e) => failures.push(format!("rays do not form a fan over C_n: {e}")),
        }
    }
    ValidationReport { failures }
}

/// Type of a valid pair together with its determinant and normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeTag {
    pub type_index: u8,
    pub det: BigInt,
    pub canonical: VcPair,
}

fn ensure_valid(p: &VcPair) -> Result<()> {
    let r = validate_pair(p);
    if r.valid() {
        Ok(())
    } else {
        Err(Error::InvalidPair(r.failures))
    }
}

/// For a matrix whose off-diagonal support is a single n-cycle, the
/// permutation conjugating it into cyclic form with row `start` first.
fn cyclic_ordering(a: &IntMatrix, start: usize) -> Option<Permutation> {
    let n = a.rows();
    let pred = |r: usize| -> Option<usize> {
        let mut it = (0..n).filter(|&c| c != r && !a.get(r, c).is_zero());
        let c = it.next()?;
        it.next().is_none().then_some(c)
    };
    let mut images = vec![start; n];
    let mut cur = start;
    for i in (1..n).rev() {
        cur = pred(cur)?;
        images[i] = cur;
    }
    if pred(cur)? != start && n > 1 {
        return None;
    }
    Permutation::new(images).ok()
}

/// Conjugates a pair whose matrix has single-cycle off-diagonal support into
/// cyclic form, trying each starting row.
fn cyclic_forms(p: &VcPair) -> Result<Vec<VcPair>> {
    (0..p.n())
        .map(|s| {
            let sigma = cyclic_ordering(p.a(), s).ok_or_else(|| {
                Error::Structural("off-diagonal support of A is not a single cycle".into())
            })?;
            p.conjugate(&sigma)
        })
        .collect()
}

/// Lexicographically least `A_σ` over the orderings `σ` making `A` lower
/// triangular, found by branch and bound over topological orders.
fn type1_normal_form(p: &VcPair) -> Result<VcPair> {
    let a = p.a();
    let n = a.rows();
    // order[i] = old index placed at position i
    struct Search<'a> {
        a: &'a IntMatrix,
        n: usize,
        order: Vec<usize>,
        used: Vec<bool>,
        best: Option<(Vec<BigInt>, Vec<usize>)>,
    }
    impl Search<'_> {
        fn row_of(&self, pos: usize) -> Vec<BigInt> {
            let r = self.order[pos];
            (0..=pos)
                .map(|j| self.a.get(r, self.order[j]).clone())
                .collect()
        }
        fn go(&mut self, pos: usize, prefix: &mut Vec<BigInt>) {
            if pos == self.n {
                if self.best.as_ref().is_none_or(|(b, _)| prefix[..] < b[..]) {
                    self.best = Some((prefix.clone(), self.order.clone()));
                }
                return;
            }
            for r in 0..self.n {
                if self.used[r] {
                    continue;
                }
                // every nonzero A[r][c] with c != r must already be placed
                let ready =
                    (0..self.n).all(|c| c == r || self.a.get(r, c).is_zero() || self.used[c]);
                if !ready {
                    continue;
                }
                self.used[r] = true;
                self.order.push(r);
                let row = self.row_of(pos);
                let len = prefix.len();
                prefix.extend(row);
                // padding to row-major length happens implicitly: rows are
                // compared in placement order and upper entries are all zero
                let keep = match &self.best {
                    Some((b, _)) => prefix[..] <= b[..prefix.len()],
                    None => true,
                };
                if keep {
                    self.go(pos + 1, prefix);
                }
                prefix.truncate(len);
                self.order.pop();
                self.used[r] = false;
            }
        }
    }
    let mut s = Search {
        a,
        n,
        order: Vec::new(),
        used: vec![false; n],
        best: None,
    };
    s.go(0, &mut Vec::new());
    let (_, order) = s
        .best
        .ok_or_else(|| Error::Structural("A cannot be made lower triangular".into()))?;
    p.conjugate(&Permutation::new(order)?)
}

fn rotate<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    (0..v.len()).map(|i| v[(i + k) % v.len()].clone()).collect()
}

/// Type index, determinant and normal form of a valid pair.
pub fn classify_pair(p: &VcPair) -> Result<TypeTag> {
    ensure_valid(p)?;
    let det = p.a().det()?;
    if det.is_one() {
        return Ok(TypeTag {
            type_index: 1,
            canonical: type1_normal_form(p)?,
            det,
        });
    }
    let forms = cyclic_forms(p)?;
    let entries: Vec<Vec<BigInt>> = forms
        .iter()
        .map(|f| f.cyclic_entries().expect("cyclic by construction"))
        .collect();
    let minus = BigInt::from(-1);
    if det.is_zero() {
        if entries[0].iter().any(|c| *c != minus) {
            return Err(Error::Structural(
                "determinant zero but the cyclic entries are not all -1".into(),
            ));
        }
        let best = forms
            .iter()
            .min_by(|x, y| x.b().cmp(y.b()))
            .expect("n >= 2")
            .clone();
        return Ok(TypeTag {
            type_index: 0,
            det,
            canonical: best,
        });
    }
    let signs = entries[0].iter().all(|c| c.abs().is_one());
    if det == BigInt::from(2) && signs {
        let best = (0..forms.len())
            .min_by(|&x, &y| entries[x].cmp(&entries[y]))
            .expect("n >= 2");
        return Ok(TypeTag {
            type_index: 2,
            det,
            canonical: forms[best].clone(),
        });
    }
    let special: Vec<usize> = (0..forms.len())
        .filter(|&k| entries[k][1..].iter().all(|c| *c == minus))
        .collect();
    match special.first() {
        Some(&k) => Ok(TypeTag {
            type_index: 3,
            det,
            canonical: forms[k].clone(),
        }),
        None => Err(Error::Structural(format!(
            "cyclic entries {:?} are not of the form (a, -1, .., -1)",
            entries[0]
        ))),
    }
}

/// Normal form of a classified pair; see `classify_pair`.
pub fn canonical_representative(p: &VcPair) -> Result<VcPair> {
    Ok(classify_pair(p)?.canonical)
}

/// Whether two pairs define isomorphic varieties (`n >= 3`).
pub fn variety_isomorphic(p1: &VcPair, p2: &VcPair) -> Result<bool> {
    if p1.n() < 3 || p2.n() < 3 {
        return Err(Error::Unsupported(
            "variety isomorphism is decided for n >= 3 only".into(),
        ));
    }
    if p1.n() != p2.n() {
        return Ok(false);
    }
    let (t1, t2) = (classify_pair(p1)?, classify_pair(p2)?);
    Ok(t1.type_index == t2.type_index && t1.canonical == t2.canonical)
}

/// Least cyclic rotation of a sign sequence, with `-1 < 1`.
pub fn canonical_sign_rotation(signs: &[i64]) -> Vec<i64> {
    (0..signs.len())
        .map(|k| rotate(signs, k))
        .min()
        .unwrap_or_default()
}

/// Canonical `±1` sequences with an odd number of `+1`, one per rotation class.
pub fn enumerate_type2(n: usize) -> Result<Vec<Vec<i64>>> {
    if !(3..=24).contains(&n) {
        return Err(Error::Unsupported(format!(
            "enumeration needs 3 <= n <= 24, got {n}"
        )));
    }
    let classes: BTreeSet<Vec<i64>> = (0u64..1 << n)
        .into_par_iter()
        .filter(|m| m.count_ones() % 2 == 1)
        .map(|m| {
            let v: Vec<i64> = (0..n)
                .map(|i| if m >> i & 1 == 1 { 1 } else { -1 })
                .collect();
            canonical_sign_rotation(&v)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(classes.into_iter().collect())
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Number of binary necklaces of length `n` with an odd number of zeros.
pub fn necklace_count(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Unsupported("necklace count needs n >= 1".into()));
    }
    let total: BigUint = (1..=n)
        .filter(|d| n.is_multiple_of(*d) && d % 2 == 1)
        .map(|d| BigUint::from(totient(d)) << (n / d) as usize)
        .sum();
    let (q, r) = total.div_rem(&BigUint::from(2 * n));
    if !r.is_zero() {
        return Err(Error::Structural(
            "necklace sum is not divisible by 2n".into(),
        ));
    }
    Ok(q)
}

/// `R = A⁻¹ + J/2` for a determinant-two matrix, asserted integral.
pub fn r_matrix(a: &IntMatrix) -> Result<IntMatrix> {
    if !a.is_square() || a.det()? != BigInt::from(2) {
        return Err(Error::NotApplicable(
            "R is defined for determinant-two matrices".into(),
        ));
    }
    let inv = a.inverse_rational()?;
    let half = BigRational::new(1.into(), 2.into());
    let r = RationalMatrix::from_fn(a.rows(), a.cols(), |i, j| inv.get(i, j) + &half);
    r.to_integer()
        .ok_or_else(|| Error::NotApplicable("A⁻¹ + J/2 is not integral".into()))
}

/// Which of the three row identities for `R` hold for a determinant-two pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RIdentities {
    pub r: IntMatrix,
    /// `Σ_j r_ij u_j = ½ Σ_j u_j + e_i` with `u_j` the rows of `A`.
    pub rows_of_ra: bool,
    /// `Σ_j r_ij b_j = ½ (1 + Σ_j b_j)`.
    pub r_times_b: bool,
    /// `Σ_j u_ij r_j − b_i 𝟙 = e_i`.
    pub ar_minus_b: bool,
}

impl RIdentities {
    pub fn all_hold(&self) -> bool {
        self.rows_of_ra && self.r_times_b && self.ar_minus_b
    }
}

pub fn r_identities(p: &VcPair) -> Result<RIdentities> {
    let a = p.a();
    let n = p.n();
    let r = r_matrix(a)?;
    let (aq, rq) = (a.to_rational(), r.to_rational());
    let half = BigRational::new(1.into(), 2.into());
    let e = |i: usize, j: usize| if i == j { rat(1) } else { rat(0) };

    let ra = rq.mul(&aq)?;
    let col_sums: Vec<BigRational> = (0..n)
        .map(|j| (0..n).map(|k| aq.get(k, j).clone()).sum())
        .collect();
    let rows_of_ra =
        (0..n).all(|i| (0..n).all(|j| *ra.get(i, j) == &half * &col_sums[j] + e(i, j)));

    let bq: Vec<BigRational> = p
        .b()
        .iter()
        .cloned()
        .map(BigRational::from_integer)
        .collect();
    let rb = rq.mul_vec(&bq)?;
    let sb: BigRational = bq.iter().sum();
    let target = &half * (rat(1) + sb);
    let r_times_b = rb.iter().all(|x| *x == target);

    let ar = aq.mul(&rq)?;
    let ar_minus_b = (0..n).all(|i| (0..n).all(|j| ar.get(i, j) - &bq[i] == e(i, j)));

    Ok(RIdentities {
        r,
        rows_of_ra,
        r_times_b,
        ar_minus_b,
    })
}

/// Partial sums `c_k = b_1 + .. + b_k` for `k < n`; requires `Σ b = 1`.
pub fn type0_c_vector(b: &[BigInt]) -> Result<Vec<BigInt>> {
    let s: BigInt = b.iter().sum();
    if !s.is_one() || b.len() < 2 {
        return Err(Error::InvalidPair(vec!["Type 0 requires sum(b)=1".into()]));
    }
    let mut acc = BigInt::zero();
    Ok(b[..b.len() - 1]
        .iter()
        .map(|x| {
            acc += x;
            acc.clone()
        })
        .collect())
}

/// `Σ_{i<n} (n - i) b_i`, the weighted sum equal to the sum of the c-vector.
pub fn type0_weighted_sum(b: &[BigInt]) -> BigInt {
    let n = b.len();
    b.iter()
        .enumerate()
        .map(|(i, x)| x * BigInt::from(n - 1 - i))
        .sum()
}

/// Smooth-classification label: `det=q`, or the Bott matrix when `q = 1`.
pub fn diffeo_label(p: &VcPair) -> Result<String> {
    let tag = classify_pair(p)?;
    Ok(label_for(&tag))
}

fn label_for(tag: &TypeTag) -> String {
    if tag.det.is_one() {
        format!("bott:{}", tag.canonical.a())
    } else {
        format!("det={}", tag.det)
    }
}

/// Cohomology-ring label. Rings of pairs with equal determinant `q ≠ 1` are
/// isomorphic; for `q = 1` the label carries the Bott matrix and decides nothing.
pub fn cohomology_class_label(p: &VcPair) -> Result<String> {
    let tag = classify_pair(p)?;
    Ok(if tag.det.is_one() {
        format!("det=1;bott:{}", tag.canonical.a())
    } else {
        format!("det={}", tag.det)
    })
}

/// A classification summary of one pair.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub tag: TypeTag,
    /// `None` when projectivity was not computed.
    pub projective: Option<bool>,
    pub diffeo_label: String,
    pub cohomology_class_label: String,
}

pub fn classification_report(p: &VcPair, with_projectivity: bool) -> Result<ClassificationReport> {
    let tag = classify_pair(p)?;
    let projective = if with_projectivity && p.n() >= 3 {
        Some(crate::projectivity::is_projective(p)?)
    } else {
        None
    };
    let cohomology_class_label = cohomology_class_label(p)?;
    Ok(ClassificationReport {
        diffeo_label: label_for(&tag),
        cohomology_class_label,
        projective,
        tag,
    })
}

/// Serialized report: `{type, det, canonical, diffeo_label, ...}`.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    #[serde(rename = "type")]
    pub type_index: u8,
    pub det: JsonInt,
    pub canonical: crate::fans::PairDocument,
    pub diffeo_label: String,
    pub cohomology_class_label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projective: Option<bool>,
}

impl ClassificationReport {
    pub fn to_document(&self) -> ReportDocument {
        ReportDocument {
            type_index: self.tag.type_index,
            det: JsonInt(self.tag.det.clone()),
            canonical: self.tag.canonical.to_document(),
            diffeo_label: self.diffeo_label.clone(),
            cohomology_class_label: self.cohomology_class_label.clone(),
            projective: self.projective,
        }
    }
}

/// Least Bott matrix, up to lower-triangular reordering, over all
/// relabelings of the Bott fan by automorphisms of `B_n`. Exhaustive over
/// `2^n n!` relabelings, so limited to `n <= 7`.
pub fn bott_canonical_form(a: &IntMatrix) -> Result<IntMatrix> {
    let n = a.rows();
    if n > 7 {
        return Err(Error::Unsupported(
            "Bott canonical form is limited to n <= 7".into(),
        ));
    }
    let fan = crate::fans::bott_fan(a)?;
    let basis: Vec<usize> = (1..=n).collect();
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let candidates: Vec<IntMatrix> = (0u64..1 << n)
        .into_par_iter()
        .flat_map_iter(|flips| {
            let fan = &fan;
            let basis = &basis;
            perms.iter().map(move |s| -> Result<IntMatrix> {
                // vertex i of the relabeled fan is old vertex σ(i), swapped with its
                // partner when bit σ(i) of `flips` is set
                let old = |i: usize, upper: bool| {
                    let k = s.apply(i);
                    let flip = flips >> k & 1 == 1;
                    if flip != upper {
                        n + k + 1
                    } else {
                        k + 1
                    }
                };
                let lower: Vec<usize> = basis.iter().map(|&i| old(i - 1, false)).collect();
                let upper: Vec<usize> = basis.iter().map(|&i| old(i - 1, true)).collect();
                let b_inv = fan.facet_matrix(&lower).inverse_unimodular()?.neg();
                let a2 = b_inv.mul(&fan.facet_matrix(&upper))?;
                let b = vec![BigInt::zero(); n];
                let pair = VcPair::new(a2, b)?;
                Ok(type1_normal_form(&pair)?.a().clone())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    candidates
        .into_iter()
        .min_by(|x, y| x.entries().cmp(y.entries()))
        .ok_or_else(|| Error::Structural("no relabeling found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_types() {
        let t = classify_pair(&VcPair::type2(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!((t.type_index, t.det.clone()), (2, 2.into()));
        let t = classify_pair(&VcPair::type3(3, 5).unwrap()).unwrap();
        assert_eq!((t.type_index, t.det.clone()), (3, 6.into()));
        let t = classify_pair(&VcPair::type0(&[0, 0, 1]).unwrap()).unwrap();
        assert_eq!(t.type_index, 0);
    }

    #[test]
    fn even_number_of_ones_is_invalid() {
        assert!(!validate_pair(&VcPair::type2(&[1, 1, -1]).unwrap()).valid());
    }

    #[test]
    fn type3_with_a_one_is_type2() {
        let t = classify_pair(&VcPair::type3(3, 1).unwrap()).unwrap();
        assert_eq!(t.type_index, 2);
    }

    #[test]
    fn sum_b_message() {
        let r = validate_pair(&VcPair::type0(&[0, 1, 1]).unwrap());
        assert!(r.failures.contains(&"Type 0 requires sum(b)=1".to_string()));
    }

    #[test]
    fn necklaces() {
        let v: Vec<u64> = (3..=8)
            .map(|n| necklace_count(n).unwrap().try_into().unwrap())
            .collect();
        assert_eq!(v, vec![2, 2, 4, 6, 10, 16]);
    }

    #[test]
    fn r_for_oda() {
        let p = VcPair::type2(&[1, 1, 1]).unwrap();
        let id = r_identities(&p).unwrap();
        assert_eq!(
            id.r,
            IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap()
        );
        assert!(id.all_hold());
    }

    #[test]
    fn c_vectors() {
        let b: Vec<BigInt> = [2, -1, 0].iter().map(|&x| x.into()).collect();
        assert_eq!(type0_c_vector(&b).unwrap(), vec![2.into(), 1.into()]);
        assert_eq!(type0_weighted_sum(&b), 3.into());
    }
}
