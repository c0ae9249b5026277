//! Simplicial complexes on labeled vertices `1..=m`, with the two fixed
//! complexes used throughout: the cube boundary dual `B_n` and the
//! vertex-cut complex `C_n`.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Permutation;

type Mask = u64;

fn contains_mask(outer: Mask, inner: Mask) -> bool {
    outer & inner == inner
}

const MAX_VERTICES: usize = 63;

fn mask_of(face: &[usize]) -> Mask {
    face.iter().fold(0, |m, &v| m | (1 << (v - 1)))
}

fn members(mask: Mask) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

/// A simplicial complex given by its facets. Vertices are `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    minimal_nonfaces: Vec<Vec<usize>>,
    facets: Vec<Vec<usize>>,
    facet_masks: Vec<Mask>,
}

/// A codimension-one face and the indices of the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ridge {
    pub face: Vec<usize>,
    pub facets: Vec<usize>,
}

impl SimplicialComplex {
    /// The complex whose faces are the subsets of `1..=m` containing none of
    /// the given sets.
    pub fn from_minimal_nonfaces(m: usize, nonfaces: &[Vec<usize>]) -> Result<Self> {
        check_vertex_count(m)?;
        for s in nonfaces {
            check_face_labels(m, s)?;
            if s.is_empty() {
                return Err(Error::Structural(
                    "the empty set cannot be a non-face".into(),
                ));
            }
        }
        let masks: Vec<Mask> = nonfaces.iter().map(|s| mask_of(s)).collect();
        for (i, a) in masks.iter().enumerate() {
            for (j, b) in masks.iter().enumerate() {
                if i != j && a & b == *a {
                    return Err(Error::Structural(format!(
                        "minimal non-face {:?} is contained in {:?}",
                        members(*a),
                        members(*b)
                    )));
                }
            }
        }
        let mut facet_masks = Vec::new();
        maximal_faces(m, &masks, 0, 0, &mut facet_masks);
        Ok(Self::assemble(m, normalize(nonfaces), facet_masks))
    }

    /// The complex generated by the given facets (maximal faces).
    pub fn from_facets(m: usize, facets: &[Vec<usize>]) -> Result<Self> {
        check_vertex_count(m)?;
        for f in facets {
            check_face_labels(m, f)?;
        }
        let mut masks: Vec<Mask> = facets.iter().map(|f| mask_of(f)).collect();
        masks.sort_unstable();
        masks.dedup();
        if masks
            .iter()
            .any(|a| masks.iter().any(|b| a != b && a & b == *a))
        {
            return Err(Error::Structural(
                "a listed facet is contained in another".into(),
            ));
        }
        let nonfaces = compute_minimal_nonfaces(m, &masks);
        Ok(Self::assemble(m, nonfaces, masks))
    }

    fn assemble(m: usize, minimal_nonfaces: Vec<Vec<usize>>, masks: Vec<Mask>) -> Self {
        let mut facets: Vec<Vec<usize>> = masks.iter().map(|&f| members(f)).collect();
        facets.sort();
        let facet_masks = facets.iter().map(|f| mask_of(f)).collect();
        SimplicialComplex {
            vertex_count: m,
            minimal_nonfaces,
            facets,
            facet_masks,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertices(&self) -> Vec<usize> {
        (1..=self.vertex_count).collect()
    }

    pub fn minimal_nonfaces(&self) -> &[Vec<usize>] {
        &self.minimal_nonfaces
    }

    /// Facets as sorted vertex lists, in lexicographic order.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_face(&self, s: &[usize]) -> bool {
        if s.iter().any(|&v| v == 0 || v > self.vertex_count) {
            return false;
        }
        let m = mask_of(s);
        self.facet_masks.iter().any(|f| f & m == m)
    }

    pub fn is_facet(&self, s: &[usize]) -> bool {
        let m = mask_of(s);
        s.iter().all(|&v| v >= 1 && v <= self.vertex_count) && self.facet_masks.contains(&m)
    }

    /// Index of the facet with exactly these vertices.
    pub fn facet_index(&self, s: &[usize]) -> Option<usize> {
        let m = mask_of(s);
        self.facet_masks.iter().position(|&f| f == m)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.facets.first().map_or(0, Vec::len);
        self.facets.iter().all(|f| f.len() == d)
    }

    /// Number of vertices of each facet, if pure.
    pub fn facet_size(&self) -> Option<usize> {
        self.is_pure()
            .then(|| self.facets.first().map_or(0, Vec::len))
    }

    /// Every ridge with the facets containing it, ordered by ridge.
    pub fn ridges_and_adjacency(&self) -> Result<Vec<Ridge>> {
        if !self.is_pure() {
            return Err(Error::Structural("complex is not pure".into()));
        }
        let mut map: HashMap<Mask, Vec<usize>> = HashMap::new();
        for (idx, &f) in self.facet_masks.iter().enumerate() {
            for v in members(f) {
                map.entry(f & !(1 << (v - 1))).or_default().push(idx);
            }
        }
        let mut ridges: Vec<Ridge> = map
            .into_iter()
            .map(|(r, facets)| Ridge {
                face: members(r),
                facets,
            })
            .collect();
        ridges.sort_by(|a, b| a.face.cmp(&b.face));
        Ok(ridges)
    }

    /// True when the complex is pure and every ridge lies in exactly two facets.
    pub fn is_pseudomanifold(&self) -> bool {
        self.ridges_and_adjacency()
            .map(|rs| rs.iter().all(|r| r.facets.len() == 2))
            .unwrap_or(false)
    }

    /// Facets of the link of `v`, as sorted vertex lists.
    pub fn link_facets(&self, v: usize) -> Vec<Vec<usize>> {
        let bit = 1 << (v - 1);
        let mut out: Vec<Vec<usize>> = self
            .facet_masks
            .iter()
            .filter(|&&f| f & bit != 0)
            .map(|&f| members(f & !bit))
            .collect();
        out.sort();
        out
    }

    /// Vertices of the link of `v`.
    pub fn link_vertices(&self, v: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.link_facets(v).into_iter().flatten().collect();
        set.into_iter().collect()
    }

    /// Number of vertices adjacent to `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.link_vertices(v).len()
    }

    /// `f[k]` counts faces with `k` vertices, starting from the empty face.
    pub fn f_vector(&self) -> Vec<u64> {
        let d = self.facets.iter().map(Vec::len).max().unwrap_or(0);
        let mut faces: HashSet<Mask> = HashSet::new();
        for &f in &self.facet_masks {
            let mut sub = f;
            loop {
                faces.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f;
            }
        }
        let mut counts = vec![0u64; d + 1];
        for f in faces {
            counts[f.count_ones() as usize] += 1;
        }
        counts
    }

    /// h-vector of a pure complex with facets of size `d`.
    pub fn h_vector(&self) -> Vec<BigInt> {
        let f = self.f_vector();
        let d = f.len() - 1;
        (0..=d)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                        BigInt::from(sign) * binomial(d - i, k - i) * f[i]
                    })
                    .sum()
            })
            .collect()
    }

    /// All vertex bijections mapping faces onto faces, found by backtracking.
    pub fn automorphisms(&self) -> Vec<Permutation> {
        let m = self.vertex_count;
        let nf: HashSet<Mask> = self.minimal_nonfaces.iter().map(|s| mask_of(s)).collect();
        let deg: Vec<usize> = (1..=m)
            .map(|v| {
                self.facet_masks
                    .iter()
                    .filter(|&&f| f >> (v - 1) & 1 == 1)
                    .count()
            })
            .collect();
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; m];
        let mut used = vec![false; m];
        self.extend_automorphism(0, &nf, &deg, &mut image, &mut used, &mut out);
        out
    }

    fn extend_automorphism(
        &self,
        k: usize,
        nf: &HashSet<Mask>,
        deg: &[usize],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Permutation>,
    ) {
        let m = self.vertex_count;
        if k == m {
            out.push(Permutation::new(image.clone()).expect("bijection by construction"));
            return;
        }
        for t in 0..m {
            if used[t] || deg[t] != deg[k] {
                continue;
            }
            image[k] = t;
            let ok = nf.iter().all(|&s| {
                // only non-faces whose largest vertex is k become fully assigned now
                if s >> k != 1 {
                    return true;
                }
                let img = members(s).iter().fold(0, |acc, &v| acc | 1 << image[v - 1]);
                nf.contains(&img)
            });
            if ok {
                used[t] = true;
                self.extend_automorphism(k + 1, nf, deg, image, used, out);
                used[t] = false;
            }
        }
        image[k] = usize::MAX;
    }

    pub fn to_document(&self, n: usize) -> ComplexDocument {
        ComplexDocument {
            n,
            vertices: self.vertex_count,
            facets: self.facets.clone(),
        }
    }
}

/// Serialized form of a complex: `{n, vertices, facets}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub n: usize,
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
}

impl ComplexDocument {
    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_facets(self.vertices, &self.facets)
    }
}

fn check_vertex_count(m: usize) -> Result<()> {
    if m > MAX_VERTICES {
        return Err(Error::Unsupported(format!(
            "at most {MAX_VERTICES} vertices are supported, got {m}"
        )));
    }
    Ok(())
}

fn check_face_labels(m: usize, s: &[usize]) -> Result<()> {
    if let Some(&v) = s.iter().find(|&&v| v == 0 || v > m) {
        return Err(Error::Structural(format!("vertex {v} outside 1..={m}")));
    }
    let mut t = s.to_vec();
    t.sort_unstable();
    t.dedup();
    if t.len() != s.len() {
        return Err(Error::Structural(format!("repeated vertex in {s:?}")));
    }
    Ok(())
}

fn normalize(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| {
            let mut t = s.clone();
            t.sort_unstable();
            t
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn maximal_faces(m: usize, nonfaces: &[Mask], v: usize, face: Mask, out: &mut Vec<Mask>) {
    if v == m {
        let maximal = (0..m).all(|w| {
            face >> w & 1 == 1 || {
                let g = face | 1 << w;
                nonfaces.iter().any(|&s| contains_mask(g, s))
            }
        });
        if maximal {
            out.push(face);
        }
        return;
    }
    let with = face | 1 << v;
    if !nonfaces.iter().any(|&s| contains_mask(with, s)) {
        maximal_faces(m, nonfaces, v + 1, with, out);
    }
    maximal_faces(m, nonfaces, v + 1, face, out);
}

fn compute_minimal_nonfaces(m: usize, facets: &[Mask]) -> Vec<Vec<usize>> {
    let is_face = |s: Mask| facets.iter().any(|f| f & s == s);
    let mut faces: HashSet<Mask> = HashSet::new();
    for &f in facets {
        let mut sub = f;
        loop {
            faces.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & f;
        }
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for &face in &faces {
        for w in 0..m {
            if face >> w & 1 == 1 {
                continue;
            }
            let s = face | 1 << w;
            if is_face(s) {
                continue;
            }
            if members(s).iter().all(|&u| is_face(s & !(1 << (u - 1)))) {
                found.insert(members(s));
            }
        }
    }
    found.into_iter().collect()
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// The vertex-cut complex `C_n` on `2n+1` vertices, with minimal non-faces
/// `{i, n+i}`, `{i, 2n+1}` and `{n+1, .., 2n}`.
pub fn vc_complex(n: usize) -> Result<SimplicialComplex> {
    if n < 2 {
        return Err(Error::Unsupported(format!("C_n needs n >= 2, got {n}")));
    }
    let mut nf: Vec<Vec<usize>> = Vec::new();
    for i in 1..=n {
        nf.push(vec![i, n + i]);
        nf.push(vec![i, 2 * n + 1]);
    }
    nf.push((n + 1..=2 * n).collect());
    SimplicialComplex::from_minimal_nonfaces(2 * n + 1, &nf)
}

/// The complex `B_n` dual to the n-cube boundary, with minimal non-faces `{i, n+i}`.
pub fn bott_complex(n: usize) -> Result<SimplicialComplex> {
    if n < 1 {
        return Err(Error::Unsupported("B_n needs n >= 1".into()));
    }
    let nf: Vec<Vec<usize>> = (1..=n).map(|i| vec![i, n + i]).collect();
    SimplicialComplex::from_minimal_nonfaces(2 * n, &nf)
}

/// The vertex map of `C_n` induced by a permutation `σ` of `[n]`:
/// `i ↦ σ(i)`, `n+i ↦ n+σ(i)`, `2n+1` fixed.
pub fn lift_permutation(sigma: &Permutation) -> Permutation {
    let n = sigma.len();
    let mut images: Vec<usize> = sigma.images().to_vec();
    images.extend(sigma.images().iter().map(|&x| n + x));
    images.push(2 * n);
    Permutation::new(images).expect("lift of a bijection")
}

/// Automorphisms of `C_n` for `n >= 3`, all induced from permutations of `[n]`.
#[derive(Clone, Debug)]
pub struct VcAutomorphisms {
    pub n: usize,
    /// Lifts of the transposition `(1 2)` and the cycle `(1 2 .. n)`.
    pub generators: Vec<Permutation>,
}

impl VcAutomorphisms {
    /// Every automorphism, paired with the permutation of `[n]` inducing it.
    pub fn elements(&self) -> impl Iterator<Item = (Permutation, Permutation)> {
        Permutation::all(self.n).map(|s| {
            let l = lift_permutation(&s);
            (s, l)
        })
    }

    pub fn order(&self) -> BigInt {
        (1..=self.n).map(BigInt::from).product()
    }
}

pub fn vc_automorphisms(n: usize) -> Result<VcAutomorphisms> {
    if n < 3 {
        return Err(Error::Unsupported(
            "the automorphism group of C_n is only described for n >= 3".into(),
        ));
    }
    let swap = Permutation::new(
        (0..n)
            .map(|i| [1, 0].get(i).copied().unwrap_or(i))
            .collect(),
    )?;
    let cycle = Permutation::cyclic_shift(n, 1);
    Ok(VcAutomorphisms {
        n,
        generators: vec![lift_permutation(&swap), lift_permutation(&cycle)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c3_basic_shape() {
        let c = vc_complex(3).unwrap();
        assert_eq!(c.vertex_count(), 7);
        assert_eq!(c.facets().len(), 10);
        assert!(c.is_facet(&[1, 2, 3]));
        assert!(!c.is_face(&[1, 4]));
        assert!(c.is_face(&[4, 5]));
        assert!(!c.is_face(&[4, 5, 6]));
    }

    #[test]
    fn b_complexes() {
        let b1 = bott_complex(1).unwrap();
        assert_eq!(b1.facets(), &[vec![1], vec![2]]);
        assert_eq!(bott_complex(3).unwrap().facets().len(), 8);
        assert_eq!(
            bott_complex(2).unwrap().minimal_nonfaces(),
            &[vec![1, 3], vec![2, 4]]
        );
        assert!(bott_complex(0).is_err());
        assert!(vc_complex(1).is_err());
    }

    #[test]
    fn from_facets_recovers_nonfaces() {
        let c = vc_complex(3).unwrap();
        let d = SimplicialComplex::from_facets(7, c.facets()).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn lift_of_three_cycle() {
        let s = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(
            lift_permutation(&s).images_one_based(),
            vec![2, 3, 1, 5, 6, 4, 7]
        );
        assert!(lift_permutation(&Permutation::identity(3)).is_identity());
    }

    #[test]
    fn rejects_nested_nonfaces() {
        assert!(SimplicialComplex::from_minimal_nonfaces(3, &[vec![1, 2], vec![1, 2, 3]]).is_err());
    }
}
