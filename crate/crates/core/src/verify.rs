//! Executable checks of the classification, cohomology and projectivity
//! results, shared by the `verify-paper` command and the acceptance tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{
    classify_pair, diffeo_label, enumerate_type2, necklace_count, r_identities, r_matrix,
    type0_c_vector, type0_weighted_sum, variety_isomorphic,
};
use crate::cohomology::{
    ann_rank, check_substitution_iso, find_x_class, isotropic_mod_x, presentation_from_pair,
    ring_det_invariant, top_power_x, type0_iso_map, type2_chain_to_reference, type2_reference,
    type2_window_moves, GradedRing, Poly,
};
use crate::complexes::vc_complex;
use crate::fans::{fan_from_pair, fans_isomorphic, VcPair};
use crate::projectivity::{
    build_lp, closed_form_projective, fan_projectivity, psi_type0, psi_type3, verify_psi, LpOutcome,
};
use crate::sample::PairSampler;
use crate::{Error, Result};

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    pub details: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub claims: Vec<ClaimResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

struct Claim {
    id: &'static str,
    statement: &'static str,
    run: fn(u64) -> Result<String>,
}

const CLAIMS: &[Claim] = &[
    Claim {
        id: "type2-count",
        statement: "Type 2 classes are necklaces with an odd number of +1; counts follow the totient formula for n = 3..12",
        run: type2_count,
    },
    Claim {
        id: "variety-isomorphism",
        statement: "normal-form comparison agrees with the fan-level isomorphism search",
        run: variety_isomorphism,
    },
    Claim {
        id: "cohomology-structure",
        statement: "graded ranks equal the h-vector, no torsion, x^n = ±(det A)^(n-1), H^4 basis {x_i x_j, x x_1}",
        run: cohomology_structure,
    },
    Claim {
        id: "degree-two-products",
        statement: "x x_i = x x_1 for all i and x^2 = -(det A) x x_1, n = 3..6",
        run: degree_two_products,
    },
    Claim {
        id: "annihilator-rank",
        statement: "ann(x) has rank n and every other primitive degree-two class has smaller annihilator",
        run: annihilator_rank,
    },
    Claim {
        id: "ring-isomorphisms",
        statement: "the Type 0 shift substitution and the Type 2 window substitution are ring isomorphisms",
        run: ring_isomorphisms,
    },
    Claim {
        id: "determinant-rigidity",
        statement: "|det A| is recovered from the ring alone; Type 1 has a class squaring into (x), Type 3 with a = -2 has none",
        run: determinant_rigidity,
    },
    Claim {
        id: "projectivity-rule",
        statement: "the fan is non-projective exactly for Type 2 with at least three +1",
        run: projectivity_rule,
    },
    Claim {
        id: "r-matrix-identities",
        statement: "R = A^-1 + J/2 is integral and satisfies its three row identities for every Type 2 matrix, n <= 8; Type 0 c-vectors sum to the weighted sum of b",
        run: r_matrix_identities,
    },
    Claim {
        id: "diffeo-labels",
        statement: "smooth classification appears only as labels, constant on variety-isomorphism classes",
        run: diffeo_labels,
    },
];

pub fn claim_ids() -> Vec<&'static str> {
    CLAIMS.iter().map(|c| c.id).collect()
}

/// Runs one claim; errors raised inside the check count as failures.
pub fn run_claim(id: &str, seed: u64) -> Result<ClaimResult> {
    let claim = CLAIMS.iter().find(|c| c.id == id).ok_or_else(|| {
        Error::Unsupported(format!(
            "unknown claim {id:?}; known: {}",
            claim_ids().join(", ")
        ))
    })?;
    let (passed, details) = match (claim.run)(seed) {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    Ok(ClaimResult {
        id: claim.id.into(),
        statement: claim.statement.into(),
        passed,
        details,
    })
}

/// Runs every claim, or only `scope`.
pub fn verify(scope: Option<&str>, seed: u64) -> Result<VerificationReport> {
    let ids: Vec<&str> = match scope {
        None | Some("all") => claim_ids(),
        Some(id) => vec![id],
    };
    let claims = ids
        .into_iter()
        .map(|id| run_claim(id, seed))
        .collect::<Result<_>>()?;
    Ok(VerificationReport { seed, claims })
}

fn fail(msg: String) -> Error {
    Error::Structural(msg)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(fail(msg()))
    }
}

fn type2_count(_seed: u64) -> Result<String> {
    let spot = [2u64, 2, 4, 6, 10, 16];
    let mut counts = Vec::new();
    for n in 3..=12usize {
        let classes = enumerate_type2(n)?.len();
        let formula = necklace_count(n as u64)?;
        ensure(BigInt::from(classes) == formula.into(), || {
            format!(
                "n={n}: {classes} classes, formula gives {}",
                necklace_count(n as u64).unwrap()
            )
        })?;
        if n <= 8 {
            ensure(classes as u64 == spot[n - 3], || {
                format!("n={n}: {classes} != {}", spot[n - 3])
            })?;
        }
        counts.push(classes);
    }
    Ok(format!("counts n=3..12: {counts:?}"))
}

fn variety_isomorphism(seed: u64) -> Result<String> {
    let mut checked = 0usize;
    let mut positives = 0usize;
    for n in 3..=5 {
        let reps: Vec<VcPair> = enumerate_type2(n)?
            .iter()
            .map(|a| VcPair::type2(a))
            .collect::<Result<_>>()?;
        for p in &reps {
            for q in &reps {
                let fast = variety_isomorphic(p, q)?;
                let slow = fans_isomorphic(&fan_from_pair(p)?, &fan_from_pair(q)?)?;
                ensure(fast == slow, || {
                    format!("Type 2 {p:?} vs {q:?}: {fast} vs {slow}")
                })?;
                checked += 1;
                positives += usize::from(fast);
            }
        }
    }
    let mut s = PairSampler::new(seed);
    s.bound = 1;
    let mut jobs = Vec::new();
    for n in 3..=5 {
        for _ in 0..200 {
            let t = [0u8, 1, 3][s.rng().gen_range(0..3)];
            let p = s.hidden(t, n)?;
            let q = if s.rng().gen_bool(0.5) {
                let sigma = s.permutation(n);
                p.conjugate(&sigma)?
            } else {
                s.hidden(t, n)?
            };
            jobs.push((p, q));
        }
    }
    let results: Vec<Result<bool>> = jobs
        .par_iter()
        .map(|(p, q)| {
            let fast = variety_isomorphic(p, q)?;
            let slow = fans_isomorphic(&fan_from_pair(p)?, &fan_from_pair(q)?)?;
            ensure(fast == slow, || format!("{p:?} vs {q:?}: {fast} vs {slow}"))?;
            Ok(fast)
        })
        .collect();
    for r in results {
        positives += usize::from(r?);
        checked += 1;
    }
    Ok(format!("{checked} pairs agree ({positives} isomorphic)"))
}

/// One pair of each type for each `n`, drawn from the sampler.
fn one_of_each(seed: u64, n: usize) -> Result<Vec<VcPair>> {
    let mut s = PairSampler::new(seed ^ (n as u64) << 8);
    (0..4u8).map(|t| s.hidden(t, n)).collect()
}

fn check_h4_basis(r: &GradedRing, n: usize) -> Result<()> {
    let p2 = r.piece(2)?;
    let mut expected: Vec<Poly> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            expected.push(Poly::var(n + 1, i).mul(&Poly::var(n + 1, j)));
        }
    }
    expected.push(Poly::var(n + 1, n).mul(&Poly::var(n + 1, 0)));
    ensure(
        p2.preferred_basis
            && p2.basis.len() == expected.len()
            && expected.iter().all(|e| p2.basis.contains(e)),
        || {
            format!(
                "degree-two basis is {:?}",
                p2.basis
                    .iter()
                    .map(|b| b.render(r.labels()))
                    .collect::<Vec<_>>()
            )
        },
    )
}

fn cohomology_structure(seed: u64) -> Result<String> {
    let mut rings = 0;
    for n in 3..=6 {
        let h: Vec<BigInt> = vc_complex(n)?.h_vector();
        for p in one_of_each(seed, n)? {
            let r = presentation_from_pair(&p)?;
            let ranks: Vec<BigInt> = r.ranks().into_iter().map(BigInt::from).collect();
            ensure(ranks == h, || {
                format!("n={n}: ranks {ranks:?} vs h-vector {h:?}")
            })?;
            ensure(r.is_torsion_free(), || format!("n={n}: torsion in {p:?}"))?;
            let det = p.a().det()?;
            let top = top_power_x(&r)?;
            ensure(top.abs() == num_traits::pow(det.abs(), n - 1), || {
                format!("n={n}: x^n coefficient {top}, det {det}")
            })?;
            check_h4_basis(&r, n)?;
            rings += 1;
        }
    }
    Ok(format!("{rings} rings, n = 3..6"))
}

fn degree_two_products(seed: u64) -> Result<String> {
    let mut rings = 0;
    for n in 3..=6 {
        for p in one_of_each(seed, n)? {
            let r = presentation_from_pair(&p)?;
            let det = p.a().det()?;
            let x = r.x()?;
            let xx1 = r.multiply(&x, &r.generator(0))?;
            for i in 1..n {
                ensure(r.multiply(&x, &r.generator(i))? == xx1, || {
                    format!("n={n}: x x_{} != x x_1", i + 1)
                })?;
            }
            ensure(r.multiply(&x, &x)? == r.scale(&xx1, &-&det), || {
                format!("n={n}: x^2 for det {det}")
            })?;
            rings += 1;
        }
    }
    Ok(format!("{rings} rings, n = 3..6"))
}

fn annihilator_rank(seed: u64) -> Result<String> {
    let mut s = PairSampler::new(seed);
    let mut tested = 0;
    for n in 3..=5 {
        let t = s.rng().gen_range(0..4u8);
        let p = s.hidden(t, n)?;
        let r = presentation_from_pair(&p)?;
        ensure(ann_rank(&r, &r.x()?)? == n, || {
            format!("n={n}: ann(x) rank differs from n")
        })?;
        let found = find_x_class(&r)?;
        ensure(found == r.x()? || found == r.x()?.neg(), || {
            format!("n={n}: recovered class is not ±x")
        })?;
        let mut count = 0;
        while count < 100 {
            let c: Vec<BigInt> = (0..=n)
                .map(|_| BigInt::from(s.rng().gen_range(-3..=3i64)))
                .collect();
            let g = c.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !g.is_one() || c[..n].iter().all(Zero::is_zero) {
                continue;
            }
            let z = r.linear(&c)?;
            let k = ann_rank(&r, &z)?;
            ensure(k < n, || {
                format!("n={n}: class {c:?} has annihilator rank {k}")
            })?;
            count += 1;
        }
        tested += count;
    }
    Ok(format!("{tested} classes besides ±x, n = 3..5"))
}

fn ring_isomorphisms(seed: u64) -> Result<String> {
    let mut s = PairSampler::new(seed);
    let mut type0 = 0;
    for n in 3..=5 {
        for _ in 0..50 {
            let p = s.type0(n)?;
            // a second vector with congruent weighted sum
            let q = loop {
                let q = s.type0(n)?;
                if (type0_weighted_sum(p.b()) - type0_weighted_sum(q.b()))
                    .is_multiple_of(&BigInt::from(n))
                {
                    break q;
                }
            };
            let (phi, c) = type0_iso_map(p.b(), q.b())?;
            ensure(c.iter().sum::<BigInt>().is_zero(), || {
                format!("c-vector {c:?} does not sum to zero")
            })?;
            let src = presentation_from_pair(&q)?;
            let dst = presentation_from_pair(&p)?;
            ensure(check_substitution_iso(&phi, &src, &dst)?, || {
                format!("shift map fails for {:?} -> {:?}", q.b(), p.b())
            })?;
            ensure(check_substitution_iso(&phi.inverse()?, &dst, &src)?, || {
                "inverse shift map fails".into()
            })?;
            type0 += 1;
        }
    }
    let mut moves = 0;
    for n in 3..=5 {
        for a in enumerate_type2(n)? {
            let dst = presentation_from_pair(&VcPair::type2(&a)?)?;
            for mv in type2_window_moves(&a) {
                let src = presentation_from_pair(&VcPair::type2(&mv.target)?)?;
                ensure(check_substitution_iso(&mv.map, &src, &dst)?, || {
                    format!("window move {}..{} on {a:?}", mv.i, mv.j)
                })?;
                ensure(
                    check_substitution_iso(&mv.map.inverse()?, &dst, &src)?,
                    || "inverse window move fails".into(),
                )?;
                moves += 1;
            }
            let reference = presentation_from_pair(&VcPair::type2(&type2_reference(n))?)?;
            let chain = type2_chain_to_reference(&a)?;
            ensure(check_substitution_iso(&chain, &reference, &dst)?, || {
                format!("chain to reference fails for {a:?}")
            })?;
        }
    }
    Ok(format!("{type0} Type 0 maps, {moves} window moves"))
}

fn determinant_rigidity(seed: u64) -> Result<String> {
    let mut s = PairSampler::new(seed);
    let mut sampled = 0;
    for n in 3..=5 {
        for t in 0..4u8 {
            for _ in 0..3 {
                let p = s.hidden(t, n)?;
                let r = presentation_from_pair(&p)?;
                let d = ring_det_invariant(&r)?;
                ensure(d == p.a().det()?.abs(), || {
                    format!("ring gives {d} for {p:?}")
                })?;
                sampled += 1;
            }
        }
        for _ in 0..2 {
            let p = s.hidden(1, n)?;
            let r = presentation_from_pair(&p)?;
            ensure(isotropic_mod_x(&r)?.exists(), || {
                format!("no isotropic class for Type 1 {p:?}")
            })?;
        }
        let r = presentation_from_pair(&VcPair::type3(n, -2)?)?;
        ensure(!isotropic_mod_x(&r)?.exists(), || {
            format!("isotropic class for Type 3, a = -2, n = {n}")
        })?;
    }
    Ok(format!("{sampled} determinants recovered"))
}

fn projectivity_rule(seed: u64) -> Result<String> {
    let mut jobs: Vec<VcPair> = Vec::new();
    for n in 3..=6 {
        for a in enumerate_type2(n)? {
            jobs.push(VcPair::type2(&a)?);
        }
    }
    let type2 = jobs.len();
    let mut s = PairSampler::new(seed);
    for n in 3..=5 {
        for _ in 0..100 {
            let t = [0u8, 1, 3][s.rng().gen_range(0..3)];
            jobs.push(s.hidden(t, n)?);
        }
    }
    let results: Vec<Result<()>> = jobs
        .par_iter()
        .map(|p| {
            let lp = fan_projectivity(&fan_from_pair(p)?)?;
            let rule = closed_form_projective(p)?;
            ensure(lp.projective == rule, || {
                format!("{p:?}: LP {} vs rule {rule}", lp.projective)
            })
        })
        .collect();
    results.into_iter().collect::<Result<Vec<()>>>()?;

    let all_plus = fan_from_pair(&VcPair::type2(&[1, 1, 1])?)?;
    let sys = build_lp(&all_plus)?;
    match crate::projectivity::lp_feasible(&sys)? {
        LpOutcome::Infeasible { farkas } => ensure(sys.certifies_infeasible(&farkas), || {
            "Farkas certificate does not verify".into()
        })?,
        LpOutcome::Feasible { .. } => {
            return Err(fail("the (1,1,1) fan came out projective".into()))
        }
    }

    let mut certs = 0;
    for n in 3..=5 {
        for _ in 0..5 {
            let p = s.type0(n)?;
            ensure(verify_psi(&fan_from_pair(&p)?, &psi_type0(&p)?), || {
                format!("psi fails for {p:?}")
            })?;
            let q = s.type3(n)?;
            ensure(verify_psi(&fan_from_pair(&q)?, &psi_type3(&q)?), || {
                format!("psi fails for {q:?}")
            })?;
            certs += 2;
        }
    }
    Ok(format!(
        "{type2} Type 2 classes and {} sampled pairs agree; Farkas certificate stored; {certs} explicit support functions verified",
        jobs.len() - type2
    ))
}

fn r_matrix_identities(seed: u64) -> Result<String> {
    let mut matrices = 0;
    for n in 3..=8usize {
        for m in 0u64..1 << n {
            if m.count_ones() % 2 == 0 {
                continue;
            }
            let a: Vec<i64> = (0..n)
                .map(|i| if m >> i & 1 == 1 { 1 } else { -1 })
                .collect();
            let p = VcPair::type2(&a)?;
            let r = r_matrix(p.a())?;
            let ids = r_identities(&p)?;
            ensure(ids.all_hold() && ids.r == r, || {
                format!("identities fail for {a:?}")
            })?;
            matrices += 1;
        }
    }
    let r111 = r_matrix(VcPair::type2(&[1, 1, 1])?.a())?;
    ensure(
        r111.to_rows()
            == [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
                .map(|r| r.map(BigInt::from).to_vec())
                .to_vec(),
        || format!("R for (1,1,1) is {r111}"),
    )?;
    let mut s = PairSampler::new(seed);
    for _ in 0..100 {
        let n = s.rng().gen_range(3..=8);
        let p = s.type0(n)?;
        let c = type0_c_vector(p.b())?;
        ensure(
            c.iter().sum::<BigInt>() == type0_weighted_sum(p.b()),
            || format!("c-vector sum for {:?}", p.b()),
        )?;
    }
    Ok(format!("{matrices} Type 2 matrices, 100 c-vectors"))
}

fn diffeo_labels(seed: u64) -> Result<String> {
    let mut s = PairSampler::new(seed);
    let mut n_checked = 0;
    for n in 3..=5 {
        for t in 0..4u8 {
            for _ in 0..5 {
                let p = s.hidden(t, n)?;
                let sigma = s.permutation(n);
                let q = p.conjugate(&sigma)?;
                let (lp, lq) = (diffeo_label(&p)?, diffeo_label(&q)?);
                ensure(lp == lq, || {
                    format!("labels differ on isomorphic pairs: {lp} vs {lq}")
                })?;
                let det = classify_pair(&p)?.det;
                let expect_bott = det.is_one();
                ensure(lp.starts_with("bott:") == expect_bott, || {
                    format!("label {lp} for det {det}")
                })?;
                if !expect_bott {
                    ensure(lp == format!("det={det}"), || {
                        format!("label {lp} for det {det}")
                    })?;
                }
                n_checked += 1;
            }
        }
    }
    Ok(format!(
        "{n_checked} labels are functions of the variety class"
    ))
}
