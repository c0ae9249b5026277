use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}`. Constructors and display accept the
/// one-based convention `{1, .., n}` as well.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// `images[i]` is the image of `i` (zero-based).
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Dimension(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// `images[i-1]` is the image of `i` (one-based).
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Dimension(
                "one-based images may not contain 0".into(),
            ));
        }
        Self::new(images.iter().map(|&x| x - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// `i -> i + k (mod n)`.
    pub fn cyclic_shift(n: usize, k: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| (i + k) % n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn images_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::Dimension(
                "composing permutations of different sizes".into(),
            ));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Permutation matrix with `P e_j = e_{σ(j)}`.
    pub fn matrix(&self) -> IntMatrix {
        let n = self.len();
        IntMatrix::from_fn(n, n, |i, j| {
            if self.images[j] == i {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    /// All permutations of size `n` in lexicographic order of images.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(|images| Permutation { images })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.images_one_based().iter().join(","))
    }
}

/// `A_σ` with `(A_σ)_{ij} = A_{σ(i)σ(j)}`, i.e. `P_σ⁻¹ A P_σ`.
pub fn permutation_conjugate(a: &IntMatrix, sigma: &Permutation) -> Result<IntMatrix> {
    if !a.is_square() || a.rows() != sigma.len() {
        return Err(Error::Dimension(format!(
            "cannot conjugate a {}x{} matrix by a permutation of size {}",
            a.rows(),
            a.cols(),
            sigma.len()
        )));
    }
    let n = a.rows();
    Ok(IntMatrix::from_fn(n, n, |i, j| {
        a.get(sigma.apply(i), sigma.apply(j)).clone()
    }))
}

/// `(v_σ)_i = v_{σ(i)}`.
pub fn permute_vector<T: Clone>(v: &[T], sigma: &Permutation) -> Vec<T> {
    (0..v.len()).map(|i| v[sigma.apply(i)].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_matches_matrix_product() {
        let a = IntMatrix::from_rows(&[vec![1, 0, 1], vec![1, 1, 0], vec![0, -1, 1]]).unwrap();
        for s in Permutation::all(3) {
            let p = s.matrix();
            let pinv = p.transpose();
            let prod = pinv.mul(&a).unwrap().mul(&p).unwrap();
            assert_eq!(permutation_conjugate(&a, &s).unwrap(), prod);
        }
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert_eq!(
            Permutation::from_one_based(&[2, 3, 1]).unwrap().images(),
            &[1, 2, 0]
        );
    }

    #[test]
    fn compose_and_inverse() {
        let s = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert!(s.compose(&s.inverse()).unwrap().is_identity());
        assert_eq!(Permutation::all(4).count(), 24);
    }
}
