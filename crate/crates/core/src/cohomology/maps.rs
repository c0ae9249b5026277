//! Explicit ring isomorphisms given by linear substitutions of the degree-two
//! generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{GradedRing, Poly};
use crate::classify::type0_weighted_sum;
use crate::exact::{IntMatrix, Permutation};
use crate::{Error, Result};

/// A substitution of generators: column `j` holds the image of source
/// generator `j` as a linear form in the target generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap {
    pub matrix: IntMatrix,
}

impl GeneratorMap {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension("generator map must be square".into()));
        }
        Ok(GeneratorMap { matrix })
    }

    pub fn identity(n: usize) -> Self {
        GeneratorMap {
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn image(&self, j: usize) -> Poly {
        Poly::linear(&self.matrix.column(j))
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        let images: Vec<Poly> = (0..self.len()).map(|j| self.image(j)).collect();
        p.substitute(&images)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &GeneratorMap) -> Result<GeneratorMap> {
        GeneratorMap::new(self.matrix.mul(&inner.matrix)?)
    }

    pub fn inverse(&self) -> Result<GeneratorMap> {
        GeneratorMap::new(self.matrix.inverse_unimodular()?)
    }

    pub fn is_unimodular(&self) -> bool {
        self.matrix.is_unimodular()
    }

    /// Matrix of the induced map from degree `k` of `src` to degree `k` of
    /// `dst`, in the pieces' bases.
    pub fn induced_matrix(
        &self,
        src: &GradedRing,
        dst: &GradedRing,
        k: usize,
    ) -> Result<IntMatrix> {
        let ps = src.piece(k)?;
        let pd = dst.piece(k)?;
        let cols: Vec<Vec<BigInt>> = ps
            .basis
            .iter()
            .map(|b| {
                let img = self.apply(b);
                if img.is_zero() {
                    vec![BigInt::zero(); pd.rank()]
                } else {
                    pd.coordinates(&img)
                }
            })
            .collect();
        if cols.is_empty() {
            return Ok(IntMatrix::zeros(pd.rank(), 0));
        }
        IntMatrix::from_columns(pd.rank(), &cols)
    }
}

/// Whether `φ` (unimodular on generators) sends every relation of `src` to
/// zero in `dst`, so that it induces a ring isomorphism.
pub fn check_substitution_iso(
    phi: &GeneratorMap,
    src: &GradedRing,
    dst: &GradedRing,
) -> Result<bool> {
    if phi.len() != src.nvars() || phi.len() != dst.nvars() {
        return Err(Error::Dimension(
            "generator map does not match the rings".into(),
        ));
    }
    if !phi.is_unimodular() {
        return Ok(false);
    }
    for r in src.relations() {
        if !dst.vanishes(&phi.apply(r))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Map `ring(p.conjugate(σ)) → ring(p)` with `x'_i ↦ x_{σ(i)}` and `x ↦ x`.
pub fn relabel_map(sigma: &Permutation) -> GeneratorMap {
    let n = sigma.len();
    let m = IntMatrix::from_fn(n + 1, n + 1, |i, j| {
        let hit = if j == n { i == n } else { i == sigma.apply(j) };
        if hit {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    GeneratorMap { matrix: m }
}

fn check_type0_vector(b: &[BigInt]) -> Result<()> {
    if b.len() < 2 || !b.iter().sum::<BigInt>().is_one() {
        return Err(Error::InvalidPair(vec!["Type 0 requires sum(b)=1".into()]));
    }
    Ok(())
}

/// The vector with a single 1 whose weighted sum `Σ (n-i) b_i` agrees with
/// that of `b` modulo `n`.
pub fn type0_reference_vector(b: &[BigInt]) -> Result<Vec<BigInt>> {
    check_type0_vector(b)?;
    let n = b.len();
    let l = type0_weighted_sum(b).mod_floor(&BigInt::from(n));
    let l: usize = l.try_into().expect("residue fits");
    let mut out = vec![BigInt::zero(); n];
    out[n - 1 - l] = BigInt::one();
    Ok(out)
}

/// The substitution `x_i ↦ x_i + c_i x`, `x ↦ x` from `ring(b')` to
/// `ring(b)`, with `c_i - c_{i-1} = b_i - b'_i` and `Σ c_i = 0`. Exists only
/// when the weighted sums of `b` and `b'` agree modulo `n`.
pub fn type0_iso_map(b: &[BigInt], b_prime: &[BigInt]) -> Result<(GeneratorMap, Vec<BigInt>)> {
    check_type0_vector(b)?;
    check_type0_vector(b_prime)?;
    let n = b.len();
    if b_prime.len() != n {
        return Err(Error::Dimension("vectors of different lengths".into()));
    }
    let diff = type0_weighted_sum(b) - type0_weighted_sum(b_prime);
    let (alpha, rem) = (-&diff).div_rem(&BigInt::from(n));
    if !rem.is_zero() {
        return Err(Error::NotApplicable(format!(
            "weighted sums differ by {diff}, not a multiple of {n}"
        )));
    }
    let mut c = Vec::with_capacity(n);
    let mut acc = BigInt::zero();
    for i in 0..n {
        acc += &b[i] - &b_prime[i];
        c.push(&acc + &alpha);
    }
    let m = IntMatrix::from_fn(n + 1, n + 1, |i, j| {
        if i == j {
            BigInt::one()
        } else if i == n && j < n {
            c[j].clone()
        } else {
            BigInt::zero()
        }
    });
    Ok((GeneratorMap { matrix: m }, c))
}

/// An isomorphism `ring(b_src) → ring(b_dst)` for any two Type 0 vectors,
/// routed through the single-1 reference vectors and a cyclic relabeling.
pub fn type0_iso_chain(b_src: &[BigInt], b_dst: &[BigInt]) -> Result<GeneratorMap> {
    let n = b_src.len();
    if b_dst.len() != n {
        return Err(Error::Dimension("vectors of different lengths".into()));
    }
    let r_src = type0_reference_vector(b_src)?;
    let r_dst = type0_reference_vector(b_dst)?;
    let (to_src, _) = type0_iso_map(b_src, &r_src)?;
    let (to_dst, _) = type0_iso_map(b_dst, &r_dst)?;
    let q_src = r_src.iter().position(One::is_one).expect("single one");
    let q_dst = r_dst.iter().position(One::is_one).expect("single one");
    // σ(q_src) = q_dst; r_dst conjugated by σ equals r_src
    let sigma = Permutation::cyclic_shift(n, (q_dst + n - q_src) % n);
    let relabel = relabel_map(&sigma);
    to_dst.compose(&relabel)?.compose(&to_src.inverse()?)
}

/// One move on a Type 2 sign vector: the window `i..=j` (one-based, cyclic,
/// `j - i` even) bounded by `-1`s with only `+1`s inside becomes all `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowMove {
    pub i: usize,
    pub j: usize,
    pub target: Vec<i64>,
    /// `ring(target) → ring(source)`: `x_k ↦ -(x_k + x)` for `i ≤ k < j`.
    pub map: GeneratorMap,
}

/// All window moves available on `a`.
pub fn type2_window_moves(a: &[i64]) -> Vec<WindowMove> {
    let n = a.len();
    let minus: Vec<usize> = (0..n).filter(|&k| a[k] == -1).collect();
    if minus.len() < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (t, &i) in minus.iter().enumerate() {
        let next = minus[(t + 1) % minus.len()];
        let gap = (next + n - i) % n;
        if !gap.is_multiple_of(2) {
            continue;
        }
        let mut target = a.to_vec();
        let window: Vec<usize> = (0..=gap).map(|s| (i + s) % n).collect();
        for &k in &window {
            target[k] = 1;
        }
        let mut m = IntMatrix::identity(n + 1);
        for &k in &window[..gap] {
            m = m.with_entry(k, k, -BigInt::one());
            m = m.with_entry(n, k, -BigInt::one());
        }
        out.push(WindowMove {
            i: i + 1,
            j: i + gap + 1,
            target,
            map: GeneratorMap { matrix: m },
        });
    }
    out
}

/// All `+1` for odd `n`; `(1, .., 1, -1)` for even `n`.
pub fn type2_reference(n: usize) -> Vec<i64> {
    let mut a = vec![1; n];
    if n.is_multiple_of(2) {
        a[n - 1] = -1;
    }
    a
}

/// A map `ring(reference) → ring(a)` built from window moves and one cyclic
/// relabeling.
pub fn type2_chain_to_reference(a: &[i64]) -> Result<GeneratorMap> {
    let n = a.len();
    if a.iter().any(|&v| v != 1 && v != -1) || a.iter().filter(|&&v| v == 1).count() % 2 == 0 {
        return Err(Error::InvalidPair(vec![
            "Type 2 needs entries ±1 with an odd number of +1".into(),
        ]));
    }
    let mut current = a.to_vec();
    let mut map = GeneratorMap::identity(n + 1);
    while let Some(mv) = type2_window_moves(&current).into_iter().next() {
        map = map.compose(&mv.map)?;
        current = mv.target;
    }
    if n.is_multiple_of(2) {
        let q = current
            .iter()
            .position(|&v| v == -1)
            .expect("one -1 remains");
        // conjugating by the shift i ↦ i + q + 1 moves that -1 to the end
        let sigma = Permutation::cyclic_shift(n, (q + 1) % n);
        map = map.compose(&relabel_map(&sigma))?;
    }
    Ok(map)
}
