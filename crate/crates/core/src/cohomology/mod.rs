//! Integral cohomology rings of the toric manifolds over `C_n` and `B_n`,
//! computed degree by degree as quotients of polynomial rings.

mod invariants;
mod maps;
mod piece;
mod poly;

pub use invariants::{
    ann_rank, find_x_class, isotropic_mod_x, isotropic_oracle, multiplication_matrix,
    poincare_pairing_det, ring_det_invariant, top_power_x, type3_mod_p_solutions, IsotropicResult,
};
pub use maps::{
    check_substitution_iso, relabel_map, type0_iso_chain, type0_iso_map, type0_reference_vector,
    type2_chain_to_reference, type2_reference, type2_window_moves, GeneratorMap, WindowMove,
};
pub use piece::GradedPiece;
pub use poly::{monomials_of_degree, Monomial, Poly};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::classify::validate_pair;
use crate::exact::IntMatrix;
use crate::fans::{bott_fan, raw_fan_from_pair, Fan, VcPair};
use crate::{Error, Result};

/// Which monomials the graded pieces should use as a basis when they can.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BasisStyle {
    /// `x_I` for proper subsets `I`, plus `x x_1 .. x_{k-1}`; the last
    /// variable is `x`.
    CutCube,
    /// Squarefree `x_I`.
    Cube,
    Any,
}

/// `Z[t_1..t_N] / I` with all generators in cohomological degree two, stored
/// as its graded pieces `0..=top`.
#[derive(Clone, Debug)]
pub struct GradedRing {
    labels: Vec<String>,
    relations: Vec<Poly>,
    top: usize,
    x_var: Option<usize>,
    pieces: Vec<GradedPiece>,
}

/// A homogeneous class: `degree` counts generators, so the cohomological
/// degree is twice this.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub degree: usize,
    pub coords: Vec<BigInt>,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            degree: self.degree,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl GradedRing {
    fn build(
        labels: Vec<String>,
        relations: Vec<Poly>,
        top: usize,
        x_var: Option<usize>,
        style: BasisStyle,
    ) -> Self {
        let nvars = labels.len();
        let pieces = (0..=top)
            .map(|k| {
                let pref = preferred_monomials(style, nvars, k);
                GradedPiece::compute(nvars, &relations, k, pref.as_deref())
            })
            .collect();
        GradedRing {
            labels,
            relations,
            top,
            x_var,
            pieces,
        }
    }

    /// A ring from explicit generators and homogeneous relations, computed in
    /// degrees `0..=top`.
    pub fn from_relations(labels: Vec<String>, relations: Vec<Poly>, top: usize) -> Result<Self> {
        for r in &relations {
            if r.nvars() != labels.len() {
                return Err(Error::Dimension("relation variable count".into()));
            }
            if !r.is_zero() && r.homogeneous_degree().is_none() {
                return Err(Error::Structural("relation is not homogeneous".into()));
            }
        }
        Ok(Self::build(labels, relations, top, None, BasisStyle::Any))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn nvars(&self) -> usize {
        self.labels.len()
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    /// Highest nonzero degree (complex dimension).
    pub fn top_degree(&self) -> usize {
        self.top
    }

    /// Index of the generator `x` for rings over `C_n`.
    pub fn x_var(&self) -> Option<usize> {
        self.x_var
    }

    pub fn piece(&self, k: usize) -> Result<&GradedPiece> {
        self.pieces.get(k).ok_or(Error::DegreeOutOfRange {
            degree: k,
            max: self.top,
        })
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.pieces.iter().map(GradedPiece::rank).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.ranks().iter().sum()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.pieces.iter().all(|p| p.torsion.is_empty())
    }

    /// Relations rendered with the generator labels.
    pub fn relation_strings(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|r| r.render(&self.labels))
            .collect()
    }

    /// Class of a homogeneous polynomial.
    pub fn element(&self, p: &Poly) -> Result<RingElement> {
        if p.nvars() != self.nvars() {
            return Err(Error::Dimension("polynomial variable count".into()));
        }
        let Some(k) = p.homogeneous_degree() else {
            if p.is_zero() {
                return Err(Error::Structural("zero polynomial has no degree".into()));
            }
            return Err(Error::Structural("polynomial is not homogeneous".into()));
        };
        if k > self.top {
            // everything above the top degree vanishes
            return Ok(RingElement {
                degree: k,
                coords: Vec::new(),
            });
        }
        Ok(RingElement {
            degree: k,
            coords: self.pieces[k].coordinates(p),
        })
    }

    pub fn zero(&self, k: usize) -> Result<RingElement> {
        Ok(RingElement {
            degree: k,
            coords: vec![BigInt::zero(); self.piece(k)?.rank()],
        })
    }

    pub fn one(&self) -> RingElement {
        self.element(&Poly::one(self.nvars())).expect("degree zero")
    }

    pub fn generator(&self, i: usize) -> RingElement {
        self.element(&Poly::var(self.nvars(), i))
            .expect("degree one")
    }

    /// The generator `x` of a ring over `C_n`.
    pub fn x(&self) -> Result<RingElement> {
        let i = self
            .x_var
            .ok_or_else(|| Error::NotApplicable("ring has no distinguished x".into()))?;
        Ok(self.generator(i))
    }

    /// Degree-one class with the given coordinates in the generators.
    pub fn linear(&self, coeffs: &[BigInt]) -> Result<RingElement> {
        if coeffs.len() != self.nvars() {
            return Err(Error::Dimension("linear form length".into()));
        }
        let p = Poly::linear(coeffs);
        if p.is_zero() {
            return self.zero(1);
        }
        self.element(&p)
    }

    /// The polynomial `Σ coords_i · basis_i` representing an element.
    pub fn poly_of(&self, u: &RingElement) -> Result<Poly> {
        let piece = self.piece(u.degree)?;
        if u.coords.len() != piece.rank() {
            return Err(Error::Dimension("coordinate vector length".into()));
        }
        let mut p = Poly::zero(self.nvars());
        for (c, b) in u.coords.iter().zip(&piece.basis) {
            if !c.is_zero() {
                p = p.add(&b.scale(c));
            }
        }
        Ok(p)
    }

    pub fn add(&self, u: &RingElement, v: &RingElement) -> Result<RingElement> {
        if u.degree != v.degree || u.coords.len() != v.coords.len() {
            return Err(Error::Dimension(
                "adding elements of different degrees".into(),
            ));
        }
        Ok(RingElement {
            degree: u.degree,
            coords: u.coords.iter().zip(&v.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, u: &RingElement, c: &BigInt) -> RingElement {
        RingElement {
            degree: u.degree,
            coords: u.coords.iter().map(|a| a * c).collect(),
        }
    }

    pub fn multiply(&self, u: &RingElement, v: &RingElement) -> Result<RingElement> {
        let k = u.degree + v.degree;
        if k > self.top {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                max: self.top,
            });
        }
        let prod = self.poly_of(u)?.mul(&self.poly_of(v)?);
        if prod.is_zero() {
            return self.zero(k);
        }
        Ok(RingElement {
            degree: k,
            coords: self.pieces[k].coordinates(&prod),
        })
    }

    pub fn power(&self, u: &RingElement, e: usize) -> Result<RingElement> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply(&acc, u)?;
        }
        Ok(acc)
    }

    /// Whether a homogeneous polynomial vanishes in the ring.
    pub fn vanishes(&self, p: &Poly) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        Ok(self.element(p)?.is_zero())
    }

    /// Report for serialization.
    pub fn summary(&self) -> RingSummary {
        RingSummary {
            generators: self.labels.clone(),
            betti: self.ranks(),
            relations: self.relation_strings(),
            torsion_free: self.is_torsion_free(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RingSummary {
    pub generators: Vec<String>,
    pub betti: Vec<usize>,
    pub relations: Vec<String>,
    pub torsion_free: bool,
}

fn preferred_monomials(style: BasisStyle, nvars: usize, k: usize) -> Option<Vec<Monomial>> {
    let squarefree = |count: usize| -> Vec<Monomial> {
        let mut out: Vec<Monomial> = monomials_of_degree(nvars, k)
            .into_iter()
            .filter(|m| m.iter().all(|&e| e <= 1) && m[count..].iter().all(|&e| e == 0))
            .collect();
        out.sort_by(|a, b| b.cmp(a));
        out
    };
    match style {
        BasisStyle::Any => None,
        BasisStyle::Cube => Some(squarefree(nvars)),
        BasisStyle::CutCube => {
            let n = nvars - 1;
            if k == 0 {
                return Some(vec![vec![0; nvars]]);
            }
            let mut out: Vec<Monomial> = squarefree(n)
                .into_iter()
                .filter(|m| k < n || m[..n].contains(&0))
                .collect();
            let mut xm = vec![0u32; nvars];
            xm[n] = 1;
            for e in xm.iter_mut().take(k - 1) {
                *e = 1;
            }
            out.push(xm);
            Some(out)
        }
    }
}

/// Eliminates the classes of the rays of `basis_facet` with the linear
/// relations `Σ <u, v_i> μ_i` (for `u` the dual basis of that facet) and
/// returns the remaining variables' images of each ray class, in ray order.
fn eliminate_basis_facet(f: &Fan, basis_facet: &[usize]) -> Result<(Vec<usize>, Vec<Poly>)> {
    let n = f.n();
    let m = f.complex().vertex_count();
    if basis_facet.len() != n || !f.complex().is_facet(basis_facet) {
        return Err(Error::Structural("basis facet is not a facet".into()));
    }
    let vb = f.facet_matrix(basis_facet);
    let u = vb.inverse_unimodular()?;
    let others: Vec<usize> = (1..=m).filter(|v| !basis_facet.contains(v)).collect();
    let nv = others.len();
    let mut images = vec![Poly::zero(nv); m];
    for (t, &v) in others.iter().enumerate() {
        images[v - 1] = Poly::var(nv, t);
    }
    for (k, &bv) in basis_facet.iter().enumerate() {
        let coeffs: Vec<BigInt> = others
            .iter()
            .map(|&v| {
                -u.row(k)
                    .iter()
                    .zip(f.ray(v))
                    .map(|(a, b)| a * b)
                    .sum::<BigInt>()
            })
            .collect();
        images[bv - 1] = Poly::linear(&coeffs);
    }
    Ok((others, images))
}

fn eliminated_relations(f: &Fan, images: &[Poly]) -> Vec<Poly> {
    let nv = images[0].nvars();
    f.complex()
        .minimal_nonfaces()
        .iter()
        .map(|s| {
            s.iter()
                .fold(Poly::one(nv), |acc, &v| acc.mul(&images[v - 1]))
        })
        .collect()
}

/// Ring of a nonsingular complete fan with the classes of one facet's rays
/// eliminated. Generators are labelled `t<v>` by ray.
pub fn presentation_from_fan(f: &Fan, basis_facet: &[usize]) -> Result<GradedRing> {
    f.check_complete()?;
    if !f.is_nonsingular() {
        return Err(Error::InvalidFan("fan is singular".into()));
    }
    let (others, images) = eliminate_basis_facet(f, basis_facet)?;
    let labels = others.iter().map(|v| format!("t{v}")).collect();
    let rels = eliminated_relations(f, &images);
    Ok(GradedRing::build(
        labels,
        rels,
        f.n(),
        None,
        BasisStyle::Any,
    ))
}

/// Ring of the toric manifold of a valid pair, generated by
/// `x_1, .., x_n` (rays `n+1..2n`) and `x` (ray `2n+1`).
pub fn presentation_from_pair(p: &VcPair) -> Result<GradedRing> {
    let report = validate_pair(p);
    if !report.valid() {
        return Err(Error::InvalidPair(report.failures));
    }
    let n = p.n();
    let f = raw_fan_from_pair(p)?;
    let basis: Vec<usize> = (1..=n).collect();
    let (_, images) = eliminate_basis_facet(&f, &basis)?;
    let rels = eliminated_relations(&f, &images);
    let mut labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    labels.push("x".into());
    Ok(GradedRing::build(
        labels,
        rels,
        n,
        Some(n),
        BasisStyle::CutCube,
    ))
}

/// Ring of the Bott manifold of a unipotent lower triangular matrix:
/// `Z[x_1..x_n] / (x_i (x_i + Σ_{j<i} a_ij x_j))`.
pub fn bott_presentation(a: &IntMatrix) -> Result<GradedRing> {
    let f = bott_fan(a)?;
    let n = a.rows();
    let basis: Vec<usize> = (1..=n).collect();
    let (_, images) = eliminate_basis_facet(&f, &basis)?;
    let rels = eliminated_relations(&f, &images);
    let labels = (1..=n).map(|i| format!("x{i}")).collect();
    Ok(GradedRing::build(labels, rels, n, None, BasisStyle::Cube))
}

/// Graded ranks of the uneliminated Stanley–Reisner presentation: one
/// generator per ray, the monomials of the minimal nonfaces, and the linear
/// forms `Σ <e_k, v_i> μ_i`.
pub fn stanley_reisner_ranks(f: &Fan) -> Result<Vec<usize>> {
    let m = f.complex().vertex_count();
    let n = f.n();
    let mut rels: Vec<Poly> = f
        .complex()
        .minimal_nonfaces()
        .iter()
        .map(|s| {
            let mut e = vec![0u32; m];
            for &v in s {
                e[v - 1] = 1;
            }
            Poly::monomial(e, BigInt::one())
        })
        .collect();
    for k in 0..n {
        let coeffs: Vec<BigInt> = (0..m).map(|i| f.rays().get(k, i).clone()).collect();
        rels.push(Poly::linear(&coeffs));
    }
    Ok((0..=n)
        .map(|k| GradedPiece::compute(m, &rels, k, None).rank())
        .collect())
}

pub fn graded_piece(r: &GradedRing, k: usize) -> Result<&GradedPiece> {
    r.piece(k)
}

pub fn multiply(r: &GradedRing, u: &RingElement, v: &RingElement) -> Result<RingElement> {
    r.multiply(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::vc_complex;

    #[test]
    fn type0_ranks_and_basis() {
        let p = VcPair::type0(&[0, 0, 1]).unwrap();
        let r = presentation_from_pair(&p).unwrap();
        assert_eq!(r.ranks(), vec![1, 4, 4, 1]);
        assert!(r.is_torsion_free());
        for k in 0..=3 {
            assert!(r.piece(k).unwrap().preferred_basis, "degree {k}");
        }
        let h = vc_complex(3).unwrap().h_vector();
        let ranks: Vec<BigInt> = r.ranks().into_iter().map(BigInt::from).collect();
        assert_eq!(ranks, h);
    }

    #[test]
    fn degree_two_identities() {
        for p in [
            VcPair::type0(&[0, 1, 0]).unwrap(),
            VcPair::type2(&[1, 1, 1]).unwrap(),
            VcPair::type3(3, 5).unwrap(),
        ] {
            let det = p.a().det().unwrap();
            let r = presentation_from_pair(&p).unwrap();
            let x = r.x().unwrap();
            let xx1 = r.multiply(&x, &r.generator(0)).unwrap();
            for i in 0..3 {
                assert_eq!(r.multiply(&x, &r.generator(i)).unwrap(), xx1);
            }
            assert_eq!(r.multiply(&x, &x).unwrap(), r.scale(&xx1, &-det));
            assert!(r
                .vanishes(&(0..3).fold(Poly::one(4), |a, i| a.mul(&Poly::var(4, i))))
                .unwrap());
        }
    }

    #[test]
    fn bott_ranks() {
        let one = IntMatrix::identity(1);
        assert_eq!(bott_presentation(&one).unwrap().ranks(), vec![1, 1]);
        let a = IntMatrix::from_rows(&[vec![1, 0, 0], vec![2, 1, 0], vec![-1, 3, 1]]).unwrap();
        let r = bott_presentation(&a).unwrap();
        assert_eq!(r.total_rank(), 8);
        assert!(r.is_torsion_free());
    }

    #[test]
    fn stanley_reisner_agrees() {
        let p = VcPair::type3(3, -3).unwrap();
        let f = raw_fan_from_pair(&p).unwrap();
        let r = presentation_from_pair(&p).unwrap();
        assert_eq!(stanley_reisner_ranks(&f).unwrap(), r.ranks());
        let g = presentation_from_fan(&f, &[4, 5, 7]).unwrap();
        assert_eq!(g.ranks(), r.ranks());
    }
}
