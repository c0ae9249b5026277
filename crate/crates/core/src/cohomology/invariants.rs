//! Invariants read off from the ring alone: the class `x`, `|det A|`, the
//! Poincaré pairing and isotropic classes modulo `x`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{GradedRing, RingElement};
use crate::exact::{primitive_integer_vector, smith_normal_form, vector_gcd, IntMatrix};
use crate::{Error, Result};

/// Matrix of `w ↦ z·w` from degree `k` to degree `k + deg z`, in the pieces'
/// bases.
pub fn multiplication_matrix(r: &GradedRing, z: &RingElement, k: usize) -> Result<IntMatrix> {
    let src = r.piece(k)?;
    let target = r.piece(k + z.degree)?.rank();
    let mut cols = Vec::with_capacity(src.rank());
    for j in 0..src.rank() {
        let mut e = vec![BigInt::zero(); src.rank()];
        e[j] = BigInt::one();
        let w = RingElement {
            degree: k,
            coords: e,
        };
        cols.push(r.multiply(z, &w)?.coords);
    }
    if cols.is_empty() {
        return Ok(IntMatrix::zeros(target, 0));
    }
    IntMatrix::from_columns(target, &cols)
}

/// Rank of the annihilator of a degree-one class inside degree one.
pub fn ann_rank(r: &GradedRing, z: &RingElement) -> Result<usize> {
    if z.degree != 1 {
        return Err(Error::Dimension(
            "annihilator rank needs a degree-one class".into(),
        ));
    }
    let m = multiplication_matrix(r, z, 1)?;
    Ok(m.cols() - m.rank())
}

/// Coefficient of `z^top` against the generator of the rank-one top piece.
pub fn top_power(r: &GradedRing, z: &RingElement) -> Result<BigInt> {
    let top = r.top_degree();
    if r.piece(top)?.rank() != 1 {
        return Err(Error::Structural("top piece does not have rank one".into()));
    }
    Ok(r.power(z, top)?.coords[0].clone())
}

/// `x^n` against the top generator (`±(det A)^{n-1}`).
pub fn top_power_x(r: &GradedRing) -> Result<BigInt> {
    top_power(r, &r.x()?)
}

/// The primitive degree-one class whose annihilator has rank `n`, found as
/// the unique (up to scalar) `c` making `w ↦ (Σ c_i e_i) w` of rank one. All
/// 2×2 minors of that map are quadratic in `c`; they are solved linearly in
/// the products `c_i c_j`.
pub fn find_x_class(r: &GradedRing) -> Result<RingElement> {
    let n = r.top_degree();
    if n < 3 {
        return Err(Error::Unsupported(
            "the class x is characterized for n >= 3".into(),
        ));
    }
    let h = r.piece(1)?.rank();
    let mats: Vec<IntMatrix> = (0..h)
        .map(|i| {
            let mut e = vec![BigInt::zero(); h];
            e[i] = BigInt::one();
            multiplication_matrix(
                r,
                &RingElement {
                    degree: 1,
                    coords: e,
                },
                1,
            )
        })
        .collect::<Result<_>>()?;
    let rows = mats[0].rows();
    let mut pair_index = HashMap::new();
    for i in 0..h {
        for j in i..h {
            let len = pair_index.len();
            pair_index.insert((i, j), len);
        }
    }
    let unknowns = pair_index.len();
    let mut eqs: Vec<Vec<BigInt>> = Vec::new();
    for a in 0..rows {
        for b in a + 1..rows {
            for i in 0..h {
                for j in i + 1..h {
                    let mut eq = vec![BigInt::zero(); unknowns];
                    for k in 0..h {
                        for l in 0..h {
                            let v = mats[k].get(a, i) * mats[l].get(b, j)
                                - mats[k].get(a, j) * mats[l].get(b, i);
                            if !v.is_zero() {
                                eq[pair_index[&(k.min(l), k.max(l))]] += v;
                            }
                        }
                    }
                    if eq.iter().any(|v| !v.is_zero()) && !eqs.contains(&eq) {
                        eqs.push(eq);
                    }
                }
            }
        }
    }
    let kernel = if eqs.is_empty() {
        return Err(Error::Structural(
            "every class has a rank-one multiplication map".into(),
        ));
    } else {
        IntMatrix::from_rows(&eqs)?.kernel_basis()
    };
    if kernel.len() != 1 {
        return Err(Error::Structural(format!(
            "expected a unique class with annihilator of rank n, found a {}-dimensional family",
            kernel.len()
        )));
    }
    let xv = &kernel[0];
    let sym = |i: usize, j: usize| &xv[pair_index[&(i.min(j), i.max(j))]];
    let pivot = (0..h)
        .filter(|&i| !sym(i, i).is_zero())
        .max_by_key(|&i| sym(i, i).abs())
        .ok_or_else(|| Error::Structural("degenerate rank-one solution".into()))?;
    let raw: Vec<BigInt> = (0..h).map(|j| sym(pivot, j).clone()).collect();
    let g = vector_gcd(&raw);
    let mut c: Vec<BigInt> = raw.iter().map(|v| v / &g).collect();
    if c.iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| v.is_negative())
    {
        c.iter_mut().for_each(|v| *v = -&*v);
    }
    let z = RingElement {
        degree: 1,
        coords: c,
    };
    if ann_rank(r, &z)? != h - 1 {
        return Err(Error::Structural(
            "recovered class does not have annihilator of rank n".into(),
        ));
    }
    Ok(z)
}

/// `|det A|`, recovered from the ring as the `(n-1)`-th root of `|x^n|`
/// with `x` found by [`find_x_class`].
pub fn ring_det_invariant(r: &GradedRing) -> Result<BigInt> {
    let n = r.top_degree();
    let x = find_x_class(r)?;
    let t = top_power(r, &x)?.abs();
    let root = t.nth_root((n - 1) as u32);
    if num_traits::pow(root.clone(), n - 1) != t {
        return Err(Error::Structural(format!(
            "{t} is not a perfect {}-th power",
            n - 1
        )));
    }
    Ok(root)
}

/// Determinant of the pairing between degrees `k` and `top - k`.
pub fn poincare_pairing_det(r: &GradedRing, k: usize) -> Result<BigInt> {
    let top = r.top_degree();
    if k > top {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            max: top,
        });
    }
    let pk = r.piece(k)?;
    let pl = r.piece(top - k)?;
    if pk.rank() != pl.rank() || r.piece(top)?.rank() != 1 {
        return Err(Error::Structural("pairing is not square".into()));
    }
    let unit = |d: usize, i: usize, len: usize| {
        let mut e = vec![BigInt::zero(); len];
        e[i] = BigInt::one();
        RingElement {
            degree: d,
            coords: e,
        }
    };
    let m = IntMatrix::from_fn(pk.rank(), pl.rank(), |i, j| {
        r.multiply(&unit(k, i, pk.rank()), &unit(top - k, j, pl.rank()))
            .expect("degrees in range")
            .coords[0]
            .clone()
    });
    m.det()
}

/// Outcome of the search for a nonzero degree-one class whose square lies in
/// the ideal `(x)`.
#[derive(Clone, Debug)]
pub struct IsotropicResult {
    /// The class `x` used.
    pub x: RingElement,
    /// Degree-one classes completing `x` to a basis.
    pub complement: Vec<RingElement>,
    /// Coefficients along `complement` of a primitive witness.
    pub witness: Option<Vec<BigInt>>,
}

impl IsotropicResult {
    pub fn exists(&self) -> bool {
        self.witness.is_some()
    }

    pub fn witness_class(&self) -> Option<RingElement> {
        let w = self.witness.as_ref()?;
        let len = self.x.coords.len();
        let mut coords = vec![BigInt::zero(); len];
        for (c, f) in w.iter().zip(&self.complement) {
            for (o, v) in coords.iter_mut().zip(&f.coords) {
                *o += c * v;
            }
        }
        Some(RingElement { degree: 1, coords })
    }
}

/// Quadratic forms `q_t(c)` whose common zeros are the `c` with
/// `(Σ c_i f_i)^2 ∈ x·H^2`. `forms[t][i][j]` is the coefficient of `c_i c_j`
/// for `i ≤ j`.
struct IsotropicSystem {
    x: RingElement,
    complement: Vec<RingElement>,
    forms: Vec<Vec<Vec<BigInt>>>,
}

fn isotropic_system(r: &GradedRing) -> Result<IsotropicSystem> {
    let x = find_x_class(r)?;
    let h = x.coords.len();
    // drop a basis vector where x has a unit coordinate
    let drop = (0..h)
        .rev()
        .find(|&j| x.coords[j].abs().is_one())
        .ok_or_else(|| Error::Structural("x is not part of a basis".into()))?;
    let complement: Vec<RingElement> = (0..h)
        .filter(|&j| j != drop)
        .map(|j| {
            let mut e = vec![BigInt::zero(); h];
            e[j] = BigInt::one();
            RingElement {
                degree: 1,
                coords: e,
            }
        })
        .collect();
    let image = multiplication_matrix(r, &x, 1)?;
    let quotient = quotient_map(&image)?;
    let m = complement.len();
    let mut products = vec![vec![Vec::new(); m]; m];
    for i in 0..m {
        for j in i..m {
            products[i][j] = quotient(&r.multiply(&complement[i], &complement[j])?.coords);
        }
    }
    let dims = products[0][0].len();
    let mut forms = vec![vec![vec![BigInt::zero(); m]; m]; dims];
    for (t, form) in forms.iter_mut().enumerate() {
        for i in 0..m {
            for j in i..m {
                let v = &products[i][j][t];
                form[i][j] = if i == j { v.clone() } else { v * 2 };
            }
        }
    }
    Ok(IsotropicSystem {
        x,
        complement,
        forms,
    })
}

type QuotientMap = Box<dyn Fn(&[BigInt]) -> Vec<BigInt>>;

/// Coordinates on `Z^rows / image`, which must be free. When the image is
/// spanned by one vector with a unit entry the remaining standard
/// coordinates are kept, so monomial structure survives.
fn quotient_map(image: &IntMatrix) -> Result<QuotientMap> {
    let rows = image.rows();
    let snf = smith_normal_form(image);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    if diag.iter().any(|d| !d.is_zero() && !d.is_one()) {
        return Err(Error::Unsupported("quotient by x has torsion".into()));
    }
    if rank == 1 {
        let col = (0..image.cols())
            .map(|j| image.column(j))
            .find(|c| c.iter().any(|v| !v.is_zero()))
            .expect("rank one");
        let s = primitive_integer_vector(
            &col.iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect::<Vec<_>>(),
        );
        if let Some(j0) = (0..rows).find(|&j| s[j].abs().is_one()) {
            return Ok(Box::new(move |w: &[BigInt]| {
                let t = &w[j0] * &s[j0];
                (0..rows)
                    .filter(|&i| i != j0)
                    .map(|i| &w[i] - &t * &s[i])
                    .collect()
            }));
        }
    }
    let u = snf.u.clone();
    Ok(Box::new(move |w: &[BigInt]| {
        let y = u.mul_vec(w).expect("dimensions match");
        y[rank..].to_vec()
    }))
}

fn eval_form(form: &[Vec<BigInt>], c: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..c.len() {
        for j in i..c.len() {
            if !form[i][j].is_zero() {
                acc += BigRational::from_integer(form[i][j].clone()) * &c[i] * &c[j];
            }
        }
    }
    acc
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

/// Roots of `A t^2 + B t + C`, or `None` when every value is a root.
fn quadratic_roots(a: &BigRational, b: &BigRational, c: &BigRational) -> Option<Vec<BigRational>> {
    if a.is_zero() && b.is_zero() {
        return if c.is_zero() { None } else { Some(Vec::new()) };
    }
    if a.is_zero() {
        return Some(vec![-c / b]);
    }
    let disc = b * b - BigRational::from_integer(4.into()) * a * c;
    let Some(s) = rational_sqrt(&disc) else {
        return Some(Vec::new());
    };
    let two_a = a * BigRational::from_integer(2.into());
    let mut roots = vec![(-b + &s) / &two_a, (-b - &s) / &two_a];
    roots.dedup();
    Some(roots)
}

fn support_max(form: &[Vec<BigInt>]) -> Option<usize> {
    let m = form.len();
    (0..m)
        .rev()
        .find(|&j| (0..=j).any(|i| !form[i][j].is_zero()))
}

/// Depth-first search over the variable order. The first nonzero variable is
/// normalized to one; every later variable is a root of an equation whose
/// support ends there.
fn solve_forms(forms: &[Vec<Vec<BigInt>>], m: usize) -> Result<Option<Vec<BigInt>>> {
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (t, f) in forms.iter().enumerate() {
        if let Some(j) = support_max(f) {
            by_last[j].push(t);
        }
    }
    fn rec(
        forms: &[Vec<Vec<BigInt>>],
        by_last: &[Vec<usize>],
        c: &mut Vec<BigRational>,
        j: usize,
    ) -> Result<bool> {
        let m = by_last.len();
        if j == m {
            return Ok(true);
        }
        let mut candidates: Option<Vec<BigRational>> = None;
        for &t in &by_last[j] {
            let f = &forms[t];
            let a = BigRational::from_integer(f[j][j].clone());
            let b: BigRational = (0..j)
                .map(|i| BigRational::from_integer(f[i][j].clone()) * &c[i])
                .sum();
            let mut cc = BigRational::zero();
            for i in 0..j {
                for k in i..j {
                    if !f[i][k].is_zero() {
                        cc += BigRational::from_integer(f[i][k].clone()) * &c[i] * &c[k];
                    }
                }
            }
            match quadratic_roots(&a, &b, &cc) {
                None => continue,
                Some(roots) => {
                    candidates = Some(match candidates {
                        None => roots,
                        Some(prev) => prev.into_iter().filter(|v| roots.contains(v)).collect(),
                    });
                }
            }
        }
        let Some(mut cands) = candidates else {
            return Err(Error::Unsupported(
                "isotropy system leaves a variable unconstrained".into(),
            ));
        };
        cands.sort_by(|p, q| p.abs().cmp(&q.abs()).then(q.cmp(p)));
        for v in cands {
            c.push(v);
            if rec(forms, by_last, c, j + 1)? {
                return Ok(true);
            }
            c.pop();
        }
        Ok(false)
    }
    for anchor in 0..m {
        let mut c: Vec<BigRational> = vec![BigRational::zero(); anchor];
        c.push(BigRational::one());
        let prefix_ok = (0..=anchor)
            .flat_map(|j| by_last[j].iter())
            .all(|&t| eval_form(&forms[t], &c).is_zero());
        if !prefix_ok {
            continue;
        }
        if rec(forms, &by_last, &mut c, anchor + 1)? {
            if forms.iter().any(|f| !eval_form(f, &c).is_zero()) {
                return Err(Error::Structural(
                    "isotropic witness fails verification".into(),
                ));
            }
            return Ok(Some(primitive_integer_vector(&c)));
        }
    }
    Ok(None)
}

/// Decides whether some nonzero class of `H^2 / (x)` squares into `(x)`.
pub fn isotropic_mod_x(r: &GradedRing) -> Result<IsotropicResult> {
    let sys = isotropic_system(r)?;
    let witness = solve_forms(&sys.forms, sys.complement.len())?;
    Ok(IsotropicResult {
        x: sys.x,
        complement: sys.complement,
        witness,
    })
}

/// Exhaustive search over coefficient vectors in `[-bound, bound]^n`.
pub fn isotropic_oracle(r: &GradedRing, bound: i64) -> Result<Option<Vec<BigInt>>> {
    let sys = isotropic_system(r)?;
    let m = sys.complement.len();
    let mut c = vec![-bound; m];
    loop {
        if c.iter().any(|&v| v != 0) {
            let q: Vec<BigRational> = c
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect();
            if sys.forms.iter().all(|f| eval_form(f, &q).is_zero()) {
                return Ok(Some(c.iter().map(|&v| BigInt::from(v)).collect()));
            }
        }
        let mut i = 0;
        loop {
            if i == m {
                return Ok(None);
            }
            if c[i] < bound {
                c[i] += 1;
                break;
            }
            c[i] = -bound;
            i += 1;
        }
    }
}

/// Number of `r ∈ (Z/p)^n` with every `r_i ≠ 0` satisfying
/// `2 r_1 (r_n + r_1) ≡ 0`, `r_i (2 r_{i-1} + r_i) ≡ 0` for `i ≥ 2`, and
/// `2 r_i r_j ≡ 0` for `i - j ≥ 2`, `(i, j) ≠ (n, 1)`. These are the
/// constraints a ring isomorphism between two cut-cube rings with
/// `a + a' = -2` imposes modulo a prime `p` dividing `a`.
pub fn type3_mod_p_solutions(n: usize, p: u64) -> u64 {
    let total = p.pow(n as u32);
    let mut count = 0;
    let mut r = vec![0u64; n];
    for code in 0..total {
        let mut t = code;
        for v in r.iter_mut() {
            *v = t % p;
            t /= p;
        }
        if r.contains(&0) {
            continue;
        }
        let ok = (2 * r[0] % p * ((r[n - 1] + r[0]) % p)).is_multiple_of(p)
            && (1..n).all(|i| (r[i] * ((2 * r[i - 1] + r[i]) % p)).is_multiple_of(p))
            && (0..n).all(|i| {
                (0..i).all(|j| {
                    i - j < 2 || (i == n - 1 && j == 0) || ((2 * r[i] % p) * r[j]).is_multiple_of(p)
                })
            });
        if ok {
            count += 1;
        }
    }
    count
}
