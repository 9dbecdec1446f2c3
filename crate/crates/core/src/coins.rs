//! Randomness for the engines.
//!
//! Every primitive draw is addressed by a [`DrawKey`] (iteration, color,
//! draw kind, target vertex). [`CounterCoins`] hashes the key with the run
//! seed, so a draw never depends on how many draws came before it: runs are
//! reproducible, independent of evaluation order, and single trials can be
//! perturbed in isolation.

use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum DrawKind {
    Activation = 1,
    Selection = 2,
    Class = 3,
    /// Upper-threshold equalizing coin (μ).
    Pin = 4,
    /// Lower-threshold equalizing coin (ℓ).
    Keep = 5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DrawKey {
    /// 0-based position of the vertex being processed.
    pub step: u32,
    pub color: u32,
    pub kind: DrawKind,
    /// Right-neighbor the draw belongs to, 0 when the draw is per (step, color).
    pub target: u32,
}

impl DrawKey {
    pub fn new(step: usize, color: usize, kind: DrawKind, target: usize) -> Self {
        Self {
            step: step as u32,
            color: color as u32,
            kind,
            target: target as u32,
        }
    }
}

/// Source of the Bernoulli and class draws consumed by an engine.
pub trait Coins<W: Weight> {
    /// Returns `true` with probability `p`.
    fn flip(&mut self, p: &W, key: DrawKey) -> bool;
    /// Uniform index in `0..r`.
    fn class(&mut self, r: usize, key: DrawKey) -> usize;
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateless keyed generator.
#[derive(Debug, Clone, Copy)]
pub struct CounterCoins {
    key: u64,
}

impl CounterCoins {
    pub fn new(seed: u64) -> Self {
        Self {
            key: mix64(seed ^ 0x9E37_79B9_7F4A_7C15),
        }
    }

    #[inline]
    pub fn bits(&self, key: DrawKey) -> u64 {
        let a = ((key.step as u64) << 32) | key.color as u64;
        let b = ((key.kind as u64) << 32) | key.target as u64;
        let h = mix64(self.key ^ a);
        mix64(h.wrapping_add(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&self, key: DrawKey) -> f64 {
        (self.bits(key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl Coins<f64> for CounterCoins {
    #[inline]
    fn flip(&mut self, p: &f64, key: DrawKey) -> bool {
        self.uniform(key) < *p
    }

    #[inline]
    fn class(&mut self, r: usize, key: DrawKey) -> usize {
        // multiply-shift keeps the bias below 2^-32 for any practical r
        (((self.bits(key) >> 32) * r as u64) >> 32) as usize
    }
}

/// Derives the seed of the `index`-th run from a master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_mul(0xA076_1D64_78BD_642F))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_depend_only_on_key() {
        let a = CounterCoins::new(7);
        let b = CounterCoins::new(7);
        let k = DrawKey::new(3, 11, DrawKind::Activation, 0);
        assert_eq!(a.bits(k), b.bits(k));
        assert_ne!(
            a.bits(k),
            a.bits(DrawKey::new(3, 11, DrawKind::Selection, 0))
        );
        assert_ne!(a.bits(k), CounterCoins::new(8).bits(k));
    }

    #[test]
    fn uniform_mean_and_class_balance() {
        let mut c = CounterCoins::new(1);
        let n = 200_000;
        let mut sum = 0.0;
        let mut counts = [0usize; 3];
        for i in 0..n {
            sum += c.uniform(DrawKey::new(i, 0, DrawKind::Activation, 0));
            counts[c.class(3, DrawKey::new(i, 0, DrawKind::Class, 0))] += 1;
        }
        let mean = sum / n as f64;
        // sd of the mean is 1/sqrt(12 n) ≈ 6.5e-4
        assert!((mean - 0.5).abs() < 4e-3, "mean {mean}");
        for count in counts {
            let frac = count as f64 / n as f64;
            assert!((frac - 1.0 / 3.0).abs() < 5e-3, "class fraction {frac}");
        }
    }

    #[test]
    fn flip_extremes() {
        let mut c = CounterCoins::new(5);
        for i in 0..1000 {
            let k = DrawKey::new(i, 0, DrawKind::Pin, 1);
            assert!(!c.flip(&0.0, k));
            assert!(c.flip(&1.0, k));
        }
    }
}
