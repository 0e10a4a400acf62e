//! Deterministic splittable random streams.
//!
//! A stream is identified by a base seed and a derivation path of
//! `(label, index)` steps. The generator key is a hash of the whole path, so
//! two streams with the same path replay the same sequence no matter which
//! thread builds them or in which order they are derived.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// One step of a derivation path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep {
    pub label: &'static str,
    pub index: u64,
}

pub struct RngStream {
    base_seed: u64,
    path: Vec<PathStep>,
    key: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(base_seed: u64) -> Self {
        Self::from_parts(base_seed, Vec::new(), splitmix64(base_seed))
    }

    fn from_parts(base_seed: u64, path: Vec<PathStep>, key: u64) -> Self {
        let mut seed = [0u8; 32];
        let mut s = key;
        for chunk in seed.chunks_exact_mut(8) {
            s = splitmix64(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        Self {
            base_seed,
            path,
            key,
            rng: ChaCha8Rng::from_seed(seed),
        }
    }

    /// Child stream at `path + (label, index)`. Does not consume output from
    /// `self`.
    pub fn derive(&self, label: &'static str, index: u64) -> Self {
        let key = splitmix64(self.key ^ fnv1a(label.as_bytes()))
            .wrapping_add(splitmix64(index.wrapping_add(GOLDEN)));
        let mut path = self.path.clone();
        path.push(PathStep { label, index });
        Self::from_parts(self.base_seed, path, splitmix64(key))
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed
    }

    pub fn path(&self) -> &[PathStep] {
        &self.path
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn uniform01(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform01()
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Uniform index in `0..n` different from `excluded`. Needs `n >= 2`.
    pub fn index_excluding(&mut self, n: usize, excluded: usize) -> usize {
        let j = self.index(n - 1);
        if j >= excluded {
            j + 1
        } else {
            j
        }
    }

    /// Benefit factor, uniform over {1, 2}.
    pub fn benefit_factor(&mut self) -> f64 {
        if self.rng.next_u32() & 1 == 0 {
            1.0
        } else {
            2.0
        }
    }

    pub fn coin(&mut self) -> bool {
        self.rng.next_u32() & 1 == 1
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

impl fmt::Debug for RngStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RngStream(seed={}", self.base_seed)?;
        for step in &self.path {
            write!(f, "/{}:{}", step.label, step.index)?;
        }
        write!(f, ")")
    }
}

/// Stateless hash of a seed and a bit pattern onto `[0, 1)`.
pub(crate) fn hash_unit(seed: u64, words: impl IntoIterator<Item = u64>) -> f64 {
    let h = words
        .into_iter()
        .fold(splitmix64(seed), |acc, w| splitmix64(acc ^ w));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draws(s: &mut RngStream) -> Vec<u64> {
        (0..16).map(|_| s.next_u64()).collect()
    }

    #[test]
    fn same_path_same_sequence() {
        let a = RngStream::new(7).derive("trial", 3).derive("init", 0);
        let b = RngStream::new(7).derive("trial", 3).derive("init", 0);
        assert_eq!(draws(&mut { a }), draws(&mut { b }));
    }

    #[test]
    fn derivation_does_not_depend_on_parent_consumption() {
        let mut parent = RngStream::new(1);
        let before = parent.derive("x", 0);
        parent.next_u64();
        let after = parent.derive("x", 0);
        assert_eq!(draws(&mut { before }), draws(&mut { after }));
    }

    #[test]
    fn distinct_paths_differ() {
        let root = RngStream::new(11);
        let seqs = [
            draws(&mut root.derive("a", 0)),
            draws(&mut root.derive("a", 1)),
            draws(&mut root.derive("b", 0)),
            draws(&mut root.derive("a", 0).derive("a", 0)),
            draws(&mut RngStream::new(12).derive("a", 0)),
        ];
        for i in 0..seqs.len() {
            for j in i + 1..seqs.len() {
                assert_ne!(seqs[i], seqs[j], "{i} vs {j}");
            }
        }
    }

    #[test]
    fn index_excluding_never_returns_excluded() {
        let mut s = RngStream::new(5);
        for n in 2..20 {
            for ex in 0..n {
                for _ in 0..20 {
                    let j = s.index_excluding(n, ex);
                    assert!(j < n && j != ex);
                }
            }
        }
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut s = RngStream::new(9);
        for _ in 0..10_000 {
            let u = s.uniform(-1.0, 1.0);
            assert!((-1.0..1.0).contains(&u));
        }
    }

    #[test]
    fn benefit_factor_hits_both_values() {
        let mut s = RngStream::new(2);
        let ones = (0..1000).filter(|_| s.benefit_factor() == 1.0).count();
        assert!((400..600).contains(&ones), "{ones}");
    }

    #[test]
    fn debug_shows_provenance() {
        let s = RngStream::new(4).derive("trial", 2);
        assert_eq!(format!("{s:?}"), "RngStream(seed=4/trial:2)");
    }
}
