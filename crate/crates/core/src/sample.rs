//! Seeded random valid pairs of each type, optionally hidden behind a random
//! relabeling of the coordinates.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{IntMatrix, Permutation};
use crate::fans::VcPair;
use crate::{Error, Result};

/// Deterministic sampler of valid pairs.
pub struct PairSampler {
    rng: ChaCha8Rng,
    /// Entries are drawn from `[-bound, bound]`.
    pub bound: i64,
}

impl PairSampler {
    pub fn new(seed: u64) -> Self {
        PairSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound: 3,
        }
    }

    pub fn permutation(&mut self, n: usize) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut self.rng);
        Permutation::new(images).expect("shuffle is a bijection")
    }

    /// Cyclic all `-1` matrix with `Σ b = 1`.
    pub fn type0(&mut self, n: usize) -> Result<VcPair> {
        let mut b: Vec<i64> = (0..n - 1)
            .map(|_| self.rng.gen_range(-self.bound..=self.bound))
            .collect();
        b.push(1 - b.iter().sum::<i64>());
        VcPair::type0(&b)
    }

    /// Unipotent lower triangular matrix.
    pub fn type1(&mut self, n: usize) -> Result<VcPair> {
        let bound = self.bound;
        let a = IntMatrix::from_fn(n, n, |i, j| {
            BigInt::from(match i.cmp(&j) {
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Greater => self.rng.gen_range(-bound..=bound),
                std::cmp::Ordering::Less => 0,
            })
        });
        VcPair::type1(a)
    }

    /// Cyclic `±1` matrix with an odd number of `+1`.
    pub fn type2(&mut self, n: usize) -> Result<VcPair> {
        loop {
            let a: Vec<i64> = (0..n)
                .map(|_| if self.rng.gen_bool(0.5) { 1 } else { -1 })
                .collect();
            if a.iter().filter(|&&v| v == 1).count() % 2 == 1 {
                return VcPair::type2(&a);
            }
        }
    }

    /// `(a, -1, .., -1)` with `a ∉ {-1, 0, 1}`.
    pub fn type3(&mut self, n: usize) -> Result<VcPair> {
        let bound = self.bound.max(2) * 2;
        loop {
            let a = self.rng.gen_range(-bound..=bound);
            if !(-1..=1).contains(&a) {
                return VcPair::type3(n, a);
            }
        }
    }

    pub fn of_type(&mut self, t: u8, n: usize) -> Result<VcPair> {
        match t {
            0 => self.type0(n),
            1 => self.type1(n),
            2 => self.type2(n),
            3 => self.type3(n),
            _ => Err(Error::Unsupported(format!("no Type {t}"))),
        }
    }

    /// A pair of the given type conjugated by a random permutation.
    pub fn hidden(&mut self, t: u8, n: usize) -> Result<VcPair> {
        let p = self.of_type(t, n)?;
        let sigma = self.permutation(n);
        p.conjugate(&sigma)
    }

    pub fn unimodular(&mut self, n: usize, steps: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        for _ in 0..steps {
            let i = self.rng.gen_range(0..n);
            let mut j = self.rng.gen_range(0..n);
            while n > 1 && j == i {
                j = self.rng.gen_range(0..n);
            }
            let k = BigInt::from(self.rng.gen_range(-2..=2i64));
            // row i += k row j
            let rows: Vec<Vec<BigInt>> = (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| {
                            if r == i && n > 1 {
                                m.get(i, c) + &k * m.get(j, c)
                            } else {
                                m.get(r, c).clone()
                            }
                        })
                        .collect()
                })
                .collect();
            m = IntMatrix::from_rows(&rows).expect("square");
            if self.rng.gen_bool(0.3) {
                let neg: Vec<Vec<BigInt>> = (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|c| {
                                if r == i {
                                    -m.get(r, c)
                                } else {
                                    m.get(r, c).clone()
                                }
                            })
                            .collect()
                    })
                    .collect();
                m = IntMatrix::from_rows(&neg).expect("square");
            }
        }
        m
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
