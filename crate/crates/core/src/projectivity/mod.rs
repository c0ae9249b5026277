//! Projectivity through strictly convex piecewise-linear support functions.
//!
//! A complete nonsingular fan is projective exactly when some function `ψ`
//! on the rays, extended linearly on each maximal cone `σ` to `ψ_σ`,
//! satisfies `ψ_σ(v_i) > ψ(v_i)` for every ray `v_i` outside `σ`. The
//! system is homogeneous, so the strict inequalities may be replaced by
//! `ψ_σ(v_i) − ψ(v_i) >= 1`.

mod fm;
mod simplex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::classify::classify_pair;
use crate::error::{Error, Result};
use crate::exact::{primitive_integer_vector, rat, RationalMatrix};
use crate::fans::{fan_from_pair, Fan, VcPair};
use crate::json::{rationals, JsonRational};

pub use fm::fm_feasible;

/// Values `ψ(v_i)` of a piecewise-linear function, one per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    pub values: Vec<BigRational>,
}

impl SupportFunction {
    pub fn from_integers(values: &[i64]) -> Self {
        SupportFunction {
            values: values.iter().map(|&v| rat(v)).collect(),
        }
    }

    /// The linear form `ψ_σ = Σ_{j∈σ} ψ(v_j) u_j` of each facet, where `u_j`
    /// is the dual basis to the facet's rays.
    pub fn facet_forms(&self, f: &Fan) -> Result<Vec<Vec<BigRational>>> {
        f.complex()
            .facets()
            .iter()
            .map(|facet| {
                let inv = f.facet_matrix(facet).inverse_rational()?;
                Ok((0..f.n())
                    .map(|c| {
                        facet
                            .iter()
                            .enumerate()
                            .map(|(r, &v)| &self.values[v - 1] * inv.get(r, c))
                            .sum()
                    })
                    .collect())
            })
            .collect()
    }

    /// The same function scaled to the smallest positive integer multiple
    /// with integral values.
    pub fn integral(&self) -> Vec<BigInt> {
        if self.values.iter().all(Zero::is_zero) {
            return vec![BigInt::zero(); self.values.len()];
        }
        let prim = primitive_integer_vector(&self.values);
        // primitive_integer_vector divides by the gcd, so restore the sign only
        let i = self
            .values
            .iter()
            .position(|x| !x.is_zero())
            .expect("nonzero");
        if prim[i].is_negative() != self.values[i].is_negative() {
            prim.into_iter().map(|x| -x).collect()
        } else {
            prim
        }
    }
}

/// The margin-one system `G ψ >= 𝟙`, one row per (facet, ray outside it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictLPSystem {
    pub variables: usize,
    pub rows: Vec<Vec<BigRational>>,
    /// Facet index and one-based ray for each row.
    pub labels: Vec<(usize, usize)>,
}

impl StrictLPSystem {
    /// Whether `ψ` satisfies every row with margin at least one.
    pub fn satisfied_by(&self, psi: &[BigRational]) -> bool {
        self.rows.iter().all(|g| {
            let v: BigRational = g.iter().zip(psi).map(|(a, b)| a * b).sum();
            v >= BigRational::one()
        })
    }

    /// Whether `y` is a Farkas certificate: `y >= 0`, `yᵀG = 0`, `Σ y > 0`.
    pub fn certifies_infeasible(&self, y: &[BigRational]) -> bool {
        if y.len() != self.rows.len() || y.iter().any(Signed::is_negative) {
            return false;
        }
        let total: BigRational = y.iter().sum();
        total.is_positive()
            && (0..self.variables).all(|j| {
                self.rows
                    .iter()
                    .zip(y)
                    .map(|(g, w)| &g[j] * w)
                    .sum::<BigRational>()
                    .is_zero()
            })
    }
}

pub fn build_lp(f: &Fan) -> Result<StrictLPSystem> {
    if !f.is_nonsingular() {
        return Err(Error::InvalidFan("fan is singular".into()));
    }
    f.check_complete()?;
    let m = f.complex().vertex_count();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (idx, facet) in f.complex().facets().iter().enumerate() {
        let inv: RationalMatrix = f.facet_matrix(facet).inverse_rational()?;
        for i in 1..=m {
            if facet.contains(&i) {
                continue;
            }
            let vi: Vec<BigRational> = f
                .ray(i)
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
            let coords = inv.mul_vec(&vi)?;
            let mut row = vec![BigRational::zero(); m];
            for (r, &v) in facet.iter().enumerate() {
                row[v - 1] = coords[r].clone();
            }
            row[i - 1] -= BigRational::one();
            rows.push(row);
            labels.push((idx, i));
        }
    }
    Ok(StrictLPSystem {
        variables: m,
        rows,
        labels,
    })
}

/// Exact decision of a margin-one system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible { witness: Vec<BigRational> },
    Infeasible { farkas: Vec<BigRational> },
}

/// Decides `G ψ >= 𝟙` through the alternative system `yᵀG = 0`, `Σy = 1`,
/// `y >= 0`: a solution is a Farkas certificate, and otherwise the phase-one
/// duals yield `ψ`. Both outcomes are re-verified.
pub fn lp_feasible(sys: &StrictLPSystem) -> Result<LpOutcome> {
    let k = sys.rows.len();
    let mut m: Vec<Vec<BigRational>> = (0..sys.variables)
        .map(|j| sys.rows.iter().map(|g| g[j].clone()).collect())
        .collect();
    m.push(vec![BigRational::one(); k]);
    let mut c = vec![BigRational::zero(); sys.variables];
    c.push(BigRational::one());
    match simplex::phase_one(&m, &c) {
        simplex::PhaseOne::Feasible(y) => {
            if !sys.certifies_infeasible(&y) {
                return Err(Error::Structural(
                    "Farkas certificate failed verification".into(),
                ));
            }
            Ok(LpOutcome::Infeasible { farkas: y })
        }
        simplex::PhaseOne::Infeasible(pi) => {
            let scale = pi[sys.variables].clone();
            if !scale.is_positive() {
                return Err(Error::Structural(
                    "phase-one duals have no positive scale".into(),
                ));
            }
            let witness: Vec<BigRational> =
                pi[..sys.variables].iter().map(|x| -x / &scale).collect();
            if !sys.satisfied_by(&witness) {
                return Err(Error::Structural(
                    "support function failed verification".into(),
                ));
            }
            Ok(LpOutcome::Feasible { witness })
        }
    }
}

/// Fourier–Motzkin second opinion, fixing `ψ` to zero on `v_1..v_n` to remove
/// the lineality. Intended for `n <= 3`.
pub fn lp_feasible_fm(sys: &StrictLPSystem, fixed: &[usize]) -> bool {
    let keep: Vec<usize> = (0..sys.variables)
        .filter(|j| !fixed.contains(&(j + 1)))
        .collect();
    let rows: Vec<Vec<BigRational>> = sys
        .rows
        .iter()
        .map(|g| keep.iter().map(|&j| g[j].clone()).collect())
        .collect();
    fm_feasible(&rows, &vec![BigRational::one(); rows.len()])
}

/// Whether a support function is strictly convex on the fan.
pub fn verify_psi(f: &Fan, psi: &SupportFunction) -> bool {
    let m = f.complex().vertex_count();
    if psi.values.len() != m {
        return false;
    }
    let Ok(forms) = psi.facet_forms(f) else {
        return false;
    };
    f.complex()
        .facets()
        .iter()
        .zip(&forms)
        .all(|(facet, form)| {
            (1..=m).filter(|i| !facet.contains(i)).all(|i| {
                let at: BigRational = form
                    .iter()
                    .zip(f.ray(i))
                    .map(|(a, b)| a * BigRational::from_integer(b))
                    .sum();
                at > psi.values[i - 1]
            })
        })
}

/// Projectivity of a pair by the closed-form rule: non-projective exactly for
/// determinant two with at least three `+1` cyclic entries.
pub fn closed_form_projective(p: &VcPair) -> Result<bool> {
    let tag = classify_pair(p)?;
    if tag.type_index != 2 {
        return Ok(true);
    }
    let ones = tag
        .canonical
        .cyclic_entries()
        .expect("Type 2 normal form is cyclic")
        .iter()
        .filter(|c| c.is_one())
        .count();
    Ok(ones < 3)
}

/// Full projectivity decision with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivityReport {
    pub projective: bool,
    pub outcome: LpOutcome,
}

/// Serialized form `{projective, witness?, farkas?}`.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectivityDocument {
    pub projective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<JsonRational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farkas: Option<Vec<JsonRational>>,
}

impl ProjectivityReport {
    pub fn to_document(&self) -> ProjectivityDocument {
        let (witness, farkas) = match &self.outcome {
            LpOutcome::Feasible { witness } => (Some(rationals(witness)), None),
            LpOutcome::Infeasible { farkas } => (None, Some(rationals(farkas))),
        };
        ProjectivityDocument {
            projective: self.projective,
            witness,
            farkas,
        }
    }
}

pub fn fan_projectivity(f: &Fan) -> Result<ProjectivityReport> {
    let outcome = lp_feasible(&build_lp(f)?)?;
    Ok(ProjectivityReport {
        projective: matches!(outcome, LpOutcome::Feasible { .. }),
        outcome,
    })
}

/// Decides projectivity of a valid pair (`n >= 3`) by linear programming and
/// cross-checks the answer against the closed-form rule.
pub fn projectivity_report(p: &VcPair) -> Result<ProjectivityReport> {
    if p.n() < 3 {
        return Err(Error::Unsupported(
            "projectivity of pairs is decided for n >= 3".into(),
        ));
    }
    let report = fan_projectivity(&fan_from_pair(p)?)?;
    if report.projective != closed_form_projective(p)? {
        return Err(Error::Structural(format!(
            "linear programming says projective = {} but the closed-form rule disagrees",
            report.projective
        )));
    }
    Ok(report)
}

pub fn is_projective(p: &VcPair) -> Result<bool> {
    Ok(projectivity_report(p)?.projective)
}

/// The explicit support function for a determinant-zero pair: `-1` on
/// `v_1..v_{2n}` and `-n(n-1)/2 · max|b_i|` on `b`.
pub fn psi_type0(p: &VcPair) -> Result<SupportFunction> {
    let tag = classify_pair(p)?;
    if tag.type_index != 0 {
        return Err(Error::NotApplicable(
            "psi_type0 needs a determinant-zero pair".into(),
        ));
    }
    let n = p.n();
    let bmax = p.b().iter().map(|x| x.abs()).max().expect("n >= 2");
    let mut values = vec![rat(-1); 2 * n];
    values.push(BigRational::from_integer(
        -(bmax * BigInt::from(n * (n - 1) / 2)),
    ));
    Ok(SupportFunction { values })
}

/// The explicit support function for the cyclic pair with entries
/// `(a, -1, .., -1)`, `a ∉ {0, -1}`: `-1` on `v_1..v_{2n-1}`, `-n|a|` on
/// `v_{2n}` and `-(n-1)` on `b`.
pub fn psi_type3(p: &VcPair) -> Result<SupportFunction> {
    let n = p.n();
    let entries = p.cyclic_entries().ok_or_else(|| {
        Error::NotApplicable("psi_type3 needs a pair in cyclic normal form".into())
    })?;
    let minus = BigInt::from(-1);
    let a = &entries[0];
    if entries[1..].iter().any(|c| *c != minus) {
        return Err(Error::NotApplicable(
            "psi_type3 needs cyclic entries (a, -1, .., -1)".into(),
        ));
    }
    if a.is_zero() || *a == minus {
        return Err(Error::NotApplicable(
            "psi_type3 needs a not in {0, -1}".into(),
        ));
    }
    let mut values = vec![rat(-1); 2 * n - 1];
    values.push(BigRational::from_integer(-(a.abs() * BigInt::from(n))));
    values.push(rat(-(n as i64 - 1)));
    Ok(SupportFunction { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oda_is_not_projective() {
        let p = VcPair::type2(&[1, 1, 1]).unwrap();
        let r = projectivity_report(&p).unwrap();
        assert!(!r.projective);
    }

    #[test]
    fn c3_system_shape() {
        let f = fan_from_pair(&VcPair::type0(&[0, 0, 1]).unwrap()).unwrap();
        let sys = build_lp(&f).unwrap();
        assert_eq!((sys.rows.len(), sys.variables), (40, 7));
    }

    #[test]
    fn explicit_functions() {
        let p = VcPair::type0(&[0, 0, 1]).unwrap();
        let psi = psi_type0(&p).unwrap();
        assert_eq!(
            psi,
            SupportFunction::from_integers(&[-1, -1, -1, -1, -1, -1, -3])
        );
        assert!(verify_psi(&fan_from_pair(&p).unwrap(), &psi));
        let p = VcPair::type3(3, 2).unwrap();
        let psi = psi_type3(&p).unwrap();
        assert_eq!(
            psi,
            SupportFunction::from_integers(&[-1, -1, -1, -1, -1, -6, -2])
        );
        assert!(verify_psi(&fan_from_pair(&p).unwrap(), &psi));
    }
}
