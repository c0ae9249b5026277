//! Fans as a complex together with an integer ray matrix, and the
//! constructions on fans over `C_n` and `B_n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::{bott_complex, vc_complex, ComplexDocument, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exact::{
    permutation_conjugate, permute_vector, smith_normal_form, vector_gcd, IntMatrix, Permutation,
    RationalMatrix,
};
use crate::json::{ints, unints, JsonInt};

/// A simplicial fan: column `i-1` of `rays` is the ray of vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    complex: SimplicialComplex,
    rays: IntMatrix,
}

impl Fan {
    /// Checks that rays are primitive and that each facet spans independent rays.
    pub fn new(complex: SimplicialComplex, rays: IntMatrix) -> Result<Self> {
        if rays.cols() != complex.vertex_count() {
            return Err(Error::InvalidFan(format!(
                "{} rays for {} vertices",
                rays.cols(),
                complex.vertex_count()
            )));
        }
        for (j, col) in rays.columns().iter().enumerate() {
            if !vector_gcd(col).is_one() {
                return Err(Error::InvalidFan(format!("ray {} is not primitive", j + 1)));
            }
        }
        let fan = Fan { complex, rays };
        for f in fan.complex.facets() {
            if f.len() > fan.n() || fan.facet_matrix(f).rank() != f.len() {
                return Err(Error::InvalidFan(format!(
                    "rays of facet {f:?} are linearly dependent"
                )));
            }
        }
        Ok(fan)
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.rays.rows()
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn rays(&self) -> &IntMatrix {
        &self.rays
    }

    /// The ray of vertex `v` (one-based).
    pub fn ray(&self, v: usize) -> Vec<BigInt> {
        self.rays.column(v - 1)
    }

    /// Matrix whose columns are the rays of the given vertices.
    pub fn facet_matrix(&self, vertices: &[usize]) -> IntMatrix {
        let cols: Vec<usize> = vertices.iter().map(|v| v - 1).collect();
        let rows: Vec<usize> = (0..self.n()).collect();
        self.rays.submatrix(&rows, &cols)
    }

    /// Every maximal cone is generated by a lattice basis.
    pub fn is_nonsingular(&self) -> bool {
        self.complex
            .facets()
            .iter()
            .all(|f| f.len() == self.n() && self.facet_matrix(f).is_unimodular())
    }

    /// Whether the cones cover the whole space.
    pub fn is_complete(&self) -> bool {
        self.check_complete().is_ok()
    }

    /// Completeness with the reason for failure. The complex must be a
    /// pseudomanifold with full-dimensional facets; on top of that every wall
    /// must be crossed properly and one generic ray must meet exactly one cone.
    pub fn check_complete(&self) -> Result<()> {
        let n = self.n();
        let facets = self.complex.facets();
        if facets.iter().any(|f| f.len() != n) {
            return Err(Error::Structural("facets are not full-dimensional".into()));
        }
        let ridges = self.complex.ridges_and_adjacency()?;
        if let Some(r) = ridges.iter().find(|r| r.facets.len() != 2) {
            return Err(Error::Structural(format!(
                "ridge {:?} lies in {} facets",
                r.face,
                r.facets.len()
            )));
        }
        let inverses: Vec<RationalMatrix> = facets
            .iter()
            .map(|f| self.facet_matrix(f).inverse_rational())
            .collect::<Result<_>>()?;
        for r in &ridges {
            let (p, q) = (r.facets[0], r.facets[1]);
            let extra = |idx: usize| facets[idx].iter().copied().find(|v| !r.face.contains(v));
            let (i, j) = (extra(p).expect("ridge"), extra(q).expect("ridge"));
            let vj: Vec<BigRational> = self
                .ray(j)
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
            let coeffs = inverses[p].mul_vec(&vj)?;
            let pos = facets[p].iter().position(|&v| v == i).expect("in facet");
            if !coeffs[pos].is_negative() {
                return Err(Error::Structural(format!(
                    "rays {i} and {j} lie on the same side of the wall {:?}",
                    r.face
                )));
            }
        }
        let mut t = BigInt::from(1_000_000);
        'shot: loop {
            let w: Vec<BigRational> = (0..n)
                .map(|k| BigRational::from_integer(num_traits::pow(t.clone(), k)))
                .collect();
            let mut hits = 0;
            for inv in &inverses {
                let c = inv.mul_vec(&w)?;
                if c.iter().any(Zero::is_zero) {
                    t += 1;
                    continue 'shot;
                }
                if c.iter().all(Signed::is_positive) {
                    hits += 1;
                }
            }
            return if hits == 1 {
                Ok(())
            } else {
                Err(Error::Structural(format!(
                    "a generic ray lies in {hits} maximal cones"
                )))
            };
        }
    }

    /// The fan with every ray multiplied by `g`.
    pub fn transform(&self, g: &IntMatrix) -> Result<Fan> {
        if !g.is_unimodular() || g.rows() != self.n() {
            return Err(Error::Dimension(
                "transformation must be unimodular of size n".into(),
            ));
        }
        Fan::new(self.complex.clone(), g.mul(&self.rays)?)
    }

    /// Relabels vertices so that the new vertex `i` carries the old vertex
    /// `l(i)` together with its ray.
    pub fn relabel(&self, l: &Permutation) -> Result<Fan> {
        let m = self.complex.vertex_count();
        if l.len() != m {
            return Err(Error::Dimension("relabeling has the wrong size".into()));
        }
        let inv = l.inverse();
        let facets: Vec<Vec<usize>> = self
            .complex
            .facets()
            .iter()
            .map(|f| f.iter().map(|&v| inv.apply(v - 1) + 1).collect())
            .collect();
        let complex = SimplicialComplex::from_facets(m, &facets)?;
        let rays = IntMatrix::from_fn(self.n(), m, |i, j| self.rays.get(i, l.apply(j)).clone());
        Fan::new(complex, rays)
    }

    pub fn to_document(&self) -> FanDocument {
        FanDocument {
            n: self.n(),
            complex: self.complex.to_document(self.n()),
            rays: self.rays.columns().iter().map(|c| ints(c)).collect(),
        }
    }
}

/// Serialized fan: `{n, complex, rays}` with one entry of `rays` per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDocument {
    pub n: usize,
    pub complex: ComplexDocument,
    pub rays: Vec<Vec<JsonInt>>,
}

impl FanDocument {
    pub fn to_fan(&self) -> Result<Fan> {
        let complex = self.complex.to_complex()?;
        let cols: Vec<Vec<BigInt>> = self.rays.iter().map(|r| unints(r)).collect();
        Fan::new(complex, IntMatrix::from_columns(self.n, &cols)?)
    }
}

/// The integer data `(A, b)` of a fan over `C_n` in the basis `v_i = -e_i`:
/// `v_{n+i}` is column `i` of `A` and `v_{2n+1} = b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VcPair {
    a: IntMatrix,
    b: Vec<BigInt>,
}

impl VcPair {
    /// Checks shapes only; use `classify::validate_pair` for the fan conditions.
    pub fn new(a: IntMatrix, b: Vec<BigInt>) -> Result<Self> {
        if !a.is_square() || a.rows() != b.len() {
            return Err(Error::Dimension(format!(
                "A is {}x{} but b has length {}",
                a.rows(),
                a.cols(),
                b.len()
            )));
        }
        if a.rows() < 2 {
            return Err(Error::Unsupported("pairs need n >= 2".into()));
        }
        Ok(VcPair { a, b })
    }

    pub fn from_i64(a: &[Vec<i64>], b: &[i64]) -> Result<Self> {
        Self::new(
            IntMatrix::from_rows(a)?,
            b.iter().map(|&x| x.into()).collect(),
        )
    }

    /// The cyclic matrix with unit diagonal, `c_1` at `(1, n)` and `c_i` at `(i, i-1)`.
    pub fn cyclic_matrix(c: &[BigInt]) -> IntMatrix {
        let n = c.len();
        IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::one()
            } else if j == (i + n - 1) % n {
                c[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Determinant-zero pair: all cyclic entries `-1`; requires `sum(b) = 1`.
    pub fn type0(b: &[i64]) -> Result<Self> {
        let c = vec![BigInt::from(-1); b.len()];
        Self::new(
            Self::cyclic_matrix(&c),
            b.iter().map(|&x| x.into()).collect(),
        )
    }

    /// Blow-up of a Bott matrix: `A` unipotent lower triangular, `b` = sum of columns.
    pub fn type1(a: IntMatrix) -> Result<Self> {
        if !a.is_unipotent_lower_triangular() {
            return Err(Error::InvalidPair(vec![
                "A must be unipotent lower triangular".into(),
            ]));
        }
        let b = (0..a.rows()).map(|i| a.row(i).iter().sum()).collect();
        Self::new(a, b)
    }

    /// Determinant-two pair from a cyclic `±1` sequence; `b_i = (1 + a_i)/2`.
    pub fn type2(signs: &[i64]) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidPair(vec!["entries must be +1 or -1".into()]));
        }
        let c: Vec<BigInt> = signs.iter().map(|&s| s.into()).collect();
        let b = signs.iter().map(|&s| BigInt::from((1 + s) / 2)).collect();
        Self::new(Self::cyclic_matrix(&c), b)
    }

    /// Cyclic pair with `a` at `(1, n)`, `-1` below the diagonal and `b = e_1`.
    pub fn type3(n: usize, a: impl Into<BigInt>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Unsupported("pairs need n >= 2".into()));
        }
        let mut c = vec![BigInt::from(-1); n];
        c[0] = a.into();
        let mut b = vec![BigInt::zero(); n];
        b[0] = BigInt::one();
        Self::new(Self::cyclic_matrix(&c), b)
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn b(&self) -> &[BigInt] {
        &self.b
    }

    /// Column `i` (zero-based) of `A`.
    pub fn column(&self, i: usize) -> Vec<BigInt> {
        self.a.column(i)
    }

    /// `(A_σ, b_σ)`.
    pub fn conjugate(&self, sigma: &Permutation) -> Result<VcPair> {
        Ok(VcPair {
            a: permutation_conjugate(&self.a, sigma)?,
            b: permute_vector(&self.b, sigma),
        })
    }

    /// The sequence `(c_1, .., c_n)` if `A` is literally in cyclic form.
    pub fn cyclic_entries(&self) -> Option<Vec<BigInt>> {
        let n = self.n();
        let c: Vec<BigInt> = (0..n)
            .map(|i| self.a.get(i, (i + n - 1) % n).clone())
            .collect();
        (Self::cyclic_matrix(&c) == self.a).then_some(c)
    }

    pub fn to_document(&self) -> PairDocument {
        PairDocument {
            n: self.n(),
            a: self.a.to_rows().iter().map(|r| ints(r)).collect(),
            b: ints(&self.b),
            label: None,
        }
    }
}

/// Serialized pair: `{n, A, b}` with an optional label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDocument {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<JsonInt>>,
    pub b: Vec<JsonInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl PairDocument {
    pub fn to_pair(&self) -> Result<VcPair> {
        if self.a.len() != self.n || self.b.len() != self.n {
            return Err(Error::Dimension(format!(
                "document declares n = {} but A has {} rows and b has {} entries",
                self.n,
                self.a.len(),
                self.b.len()
            )));
        }
        let rows: Vec<Vec<BigInt>> = self.a.iter().map(|r| unints(r)).collect();
        VcPair::new(IntMatrix::from_rows(&rows)?, unints(&self.b))
    }
}

/// The fan over `C_n` given by the pair, without validating it.
pub fn raw_fan_from_pair(p: &VcPair) -> Result<Fan> {
    let n = p.n();
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    if k == i {
                        -BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    cols.extend(p.a.columns());
    cols.push(p.b.clone());
    Fan::new(vc_complex(n)?, IntMatrix::from_columns(n, &cols)?)
}

/// The complete nonsingular fan over `C_n` defined by a valid pair.
pub fn fan_from_pair(p: &VcPair) -> Result<Fan> {
    let report = crate::classify::validate_pair(p);
    if !report.valid() {
        return Err(Error::InvalidPair(report.failures));
    }
    raw_fan_from_pair(p)
}

/// Reads `(A, b)` back from a nonsingular fan over `C_n`, using `v_1..v_n`
/// as the basis.
pub fn pair_from_fan(f: &Fan) -> Result<VcPair> {
    let n = f.n();
    if f.complex() != &vc_complex(n)? {
        return Err(Error::InvalidFan("complex is not C_n".into()));
    }
    if !f.is_nonsingular() {
        return Err(Error::InvalidFan("fan is singular".into()));
    }
    f.check_complete()?;
    let basis: Vec<usize> = (1..=n).collect();
    let b_inv = f.facet_matrix(&basis).inverse_unimodular()?.neg();
    let others: Vec<usize> = (n + 1..=2 * n).collect();
    let a = b_inv.mul(&f.facet_matrix(&others))?;
    let b = b_inv.mul_vec(&f.ray(2 * n + 1))?;
    VcPair::new(a, b)
}

/// The fan over `B_n` of a Bott matrix: `v_i = -e_i`, `v_{n+i}` = column `i`.
pub fn bott_fan(a: &IntMatrix) -> Result<Fan> {
    if !a.is_unipotent_lower_triangular() {
        return Err(Error::InvalidPair(vec![
            "Bott matrix must be unipotent lower triangular".into(),
        ]));
    }
    let n = a.rows();
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    if k == i {
                        -BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .chain(a.columns())
        .collect();
    Fan::new(bott_complex(n)?, IntMatrix::from_columns(n, &cols)?)
}

/// Star subdivision of the Bott fan at the cone `{n+1, .., 2n}`, with the
/// new ray `2n+1` equal to the sum of that cone's generators.
pub fn blow_up_bott(a: &IntMatrix) -> Result<Fan> {
    let bott = bott_fan(a)?;
    let n = a.rows();
    if n < 2 {
        return Err(Error::Unsupported("blow-up needs n >= 2".into()));
    }
    let sum: Vec<BigInt> = (0..n).map(|i| a.row(i).iter().sum()).collect();
    let mut cols = bott.rays().columns();
    cols.push(sum);
    Fan::new(vc_complex(n)?, IntMatrix::from_columns(n, &cols)?)
}

/// Removes the ray `2n+1` of a fan over `C_n`, restoring the cone
/// `{n+1, .., 2n}`. Succeeds only when the result is a nonsingular complete
/// fan over `B_n`.
pub fn blow_down(f: &Fan) -> Result<Fan> {
    let n = f.n();
    if f.complex() != &vc_complex(n)? {
        return Err(Error::InvalidFan("complex is not C_n".into()));
    }
    let cols: Vec<Vec<BigInt>> = f.rays().columns().into_iter().take(2 * n).collect();
    let fan = Fan::new(bott_complex(n)?, IntMatrix::from_columns(n, &cols)?)?;
    if !fan.is_nonsingular() {
        return Err(Error::InvalidFan("blown-down fan is singular".into()));
    }
    fan.check_complete()?;
    Ok(fan)
}

/// Projects the fan of a cyclic-form pair along the ray `n+k` (`k` one-based):
/// the link of that vertex is a copy of `C_{n-1}` whose rays are taken in
/// `Z^n / (a_k)`. The result is checked against the closed form
/// `(c_1, .., c_{k-1}, -c_k c_{k+1}, c_{k+2}, .., c_n)`.
pub fn project_along_ray(p: &VcPair, k: usize) -> Result<VcPair> {
    let n = p.n();
    if n < 3 {
        return Err(Error::Unsupported("projection needs n >= 3".into()));
    }
    if k == 0 || k > n {
        return Err(Error::Dimension(format!("k = {k} outside 1..={n}")));
    }
    let c = p
        .cyclic_entries()
        .ok_or_else(|| Error::NotApplicable("projection expects A in cyclic form".into()))?;
    let det = p.a().det()?;
    if det.is_zero() || det.is_one() {
        return Err(Error::NotApplicable(format!(
            "projection applies to cyclic pairs of determinant other than 0 and 1, got {det}"
        )));
    }
    let f = fan_from_pair(p)?;
    let projected = quotient_link(&f, n + k)?;
    let q = pair_from_fan(&projected)?;

    let mut expected = c.clone();
    let next = k % n;
    expected[next] = -(&c[k - 1] * &c[next]);
    expected.remove(k - 1);
    if q.cyclic_entries().as_ref() != Some(&expected) {
        return Err(Error::Structural(format!(
            "lattice quotient gave {} but the closed form predicts cyclic entries {expected:?}",
            q.a()
        )));
    }
    Ok(q)
}

/// The link of vertex `v = n+k` of a fan over `C_n`, as a fan over `C_{n-1}`
/// in the quotient lattice by the ray of `v`.
fn quotient_link(f: &Fan, v: usize) -> Result<Fan> {
    let n = f.n();
    let k = v - n;
    let ray = IntMatrix::from_columns(n, &[f.ray(v)])?;
    // U·ray = ±e_1, so dropping the first row of U kills the ray
    let snf = smith_normal_form(&ray);
    let rows: Vec<usize> = (1..n).collect();
    let all: Vec<usize> = (0..n).collect();
    let proj = snf.u.submatrix(&rows, &all);

    let old_of_new = |w: usize| -> usize {
        // new labels: i -> rank among [n]\{k}, n+i likewise, 2n+1 -> 2n-1
        let m = n - 1;
        if w == 2 * m + 1 {
            2 * n + 1
        } else if w > m {
            let r = w - m;
            n + if r < k { r } else { r + 1 }
        } else if w < k {
            w
        } else {
            w + 1
        }
    };
    let m = n - 1;
    let new_vertices = 2 * m + 1;
    let new_of_old = |u: usize| (1..=new_vertices).find(|&w| old_of_new(w) == u);
    let link = f.complex().link_facets(v);
    let facets: Vec<Vec<usize>> = link
        .iter()
        .map(|fc| {
            fc.iter()
                .map(|&u| new_of_old(u).ok_or_else(|| Error::Structural("bad link".into())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let complex = SimplicialComplex::from_facets(new_vertices, &facets)?;
    if complex != vc_complex(m)? {
        return Err(Error::Structural("link is not a copy of C_{n-1}".into()));
    }
    let cols: Vec<Vec<BigInt>> = (1..=new_vertices)
        .map(|w| proj.mul_vec(&f.ray(old_of_new(w))))
        .collect::<Result<_>>()?;
    Fan::new(complex, IntMatrix::from_columns(m, &cols)?)
}

/// Searches for an automorphism of `C_n` and a unimodular map carrying the
/// rays of `f1` onto those of `f2`.
pub fn fans_isomorphic(f1: &Fan, f2: &Fan) -> Result<bool> {
    Ok(fan_isomorphism(f1, f2)?.is_some())
}

/// The permutation of `[n]` and lattice map realizing an isomorphism, if any.
pub fn fan_isomorphism(f1: &Fan, f2: &Fan) -> Result<Option<(Permutation, IntMatrix)>> {
    let n = f1.n();
    if n < 3 {
        return Err(Error::Unsupported(
            "fan isomorphism over C_n needs n >= 3".into(),
        ));
    }
    let c = vc_complex(n)?;
    if f2.n() != n {
        return Ok(None);
    }
    if f1.complex() != &c || f2.complex() != &c {
        return Err(Error::InvalidFan("both fans must lie over C_n".into()));
    }
    let autos = crate::complexes::vc_automorphisms(n)?;
    let basis: Vec<usize> = (1..=n).collect();
    let inv1 = f1.facet_matrix(&basis).inverse_rational()?;
    let elements: Vec<(Permutation, Permutation)> = autos.elements().collect();
    let found = elements.par_iter().find_map_first(|(sigma, lift)| {
        let target: Vec<usize> = basis.iter().map(|&i| lift.apply(i - 1) + 1).collect();
        let r = f2
            .facet_matrix(&target)
            .to_rational()
            .mul(&inv1)
            .ok()?
            .to_integer()?;
        if !r.is_unimodular() {
            return None;
        }
        let all = (1..=2 * n + 1).all(|v| {
            r.mul_vec(&f1.ray(v)).ok().as_deref() == Some(&f2.ray(lift.apply(v - 1) + 1)[..])
        });
        all.then(|| (sigma.clone(), r))
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_space_fan() {
        let c = SimplicialComplex::from_facets(3, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        let rays = IntMatrix::from_rows(&[vec![1, 0, -1], vec![0, 1, -1]]).unwrap();
        let f = Fan::new(c, rays).unwrap();
        assert!(f.is_nonsingular());
        assert!(f.is_complete());
    }

    #[test]
    fn missing_facet_is_incomplete() {
        let c = SimplicialComplex::from_facets(3, &[vec![1, 2], vec![1, 3]]).unwrap();
        let rays = IntMatrix::from_rows(&[vec![1, 0, -1], vec![0, 1, -1]]).unwrap();
        assert!(!Fan::new(c, rays).unwrap().is_complete());
    }

    #[test]
    fn determinant_two_cone_is_singular() {
        let c = SimplicialComplex::from_facets(2, &[vec![1, 2]]).unwrap();
        let rays = IntMatrix::from_rows(&[vec![1, 0], vec![0, 2]]).unwrap();
        // (0,2) is not primitive, so use (1,2)
        assert!(Fan::new(c.clone(), rays).is_err());
        let rays = IntMatrix::from_rows(&[vec![1, 1], vec![0, 2]]).unwrap();
        assert!(!Fan::new(c, rays).unwrap().is_nonsingular());
    }

    #[test]
    fn oda_rays() {
        let p = VcPair::type2(&[1, 1, 1]).unwrap();
        let f = fan_from_pair(&p).unwrap();
        assert_eq!(f.ray(7), vec![1.into(), 1.into(), 1.into()]);
        for i in 0..3 {
            assert_eq!(f.ray(4 + i), p.column(i));
        }
        assert!(f.is_nonsingular() && f.is_complete());
        assert_eq!(pair_from_fan(&f).unwrap(), p);
    }

    #[test]
    fn projection_examples() {
        let p = VcPair::type2(&[-1, 1, 1, 1]).unwrap();
        let q = project_along_ray(&p, 1).unwrap();
        assert_eq!(q, VcPair::type2(&[1, 1, 1]).unwrap());
        let q = project_along_ray(&VcPair::type2(&[1, 1, 1]).unwrap(), 1).unwrap();
        assert_eq!(q.cyclic_entries().unwrap(), vec![(-1).into(), 1.into()]);
    }
}
