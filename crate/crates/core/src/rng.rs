//! Seeded random streams.
//!
//! A [`Stream`] is a value: cloning it forks an identical sequence, and child
//! streams are derived by keyed hashing so that no stage ever shares state
//! with another. Per-pixel noise uses [`Stream::counter_normal`], which is a
//! pure function of `(key, index)` and therefore independent of evaluation
//! order.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive combination of two 64-bit keys.
#[inline]
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b).rotate_left(17))
}

/// FNV-1a over the label bytes; stable across platforms and releases.
pub fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stream {
    key: u64,
    rng: ChaCha8Rng,
}

impl Stream {
    pub fn new(key: u64) -> Self {
        Self {
            key,
            rng: ChaCha8Rng::seed_from_u64(key),
        }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// Child stream keyed on this stream's key and `label`; the parent's
    /// position is irrelevant.
    pub fn derive(&self, label: &str) -> Stream {
        Stream::new(mix(self.key, label_hash(label)))
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform in `[lo, hi]`; returns `lo` for a degenerate range.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            // keep the stream advancing identically either way
            let _ = self.uniform();
            lo
        } else {
            lo + (hi - lo) * self.uniform()
        }
    }

    /// Uniform integer in the inclusive range `[lo, hi]`.
    pub fn range_u32(&mut self, lo: u32, hi: u32) -> u32 {
        if hi <= lo {
            let _ = self.rng.next_u32();
            lo
        } else {
            self.rng.random_range(lo..=hi)
        }
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Standard normal variate that depends only on `(self.key, index)`.
    pub fn counter_normal(&self, index: u64) -> f64 {
        let base = mix(self.key, index);
        let a = splitmix64(base);
        let b = splitmix64(base ^ GOLDEN);
        // 53-bit uniforms; u1 in (0, 1] keeps the log finite
        let u1 = ((a >> 11) as f64 + 1.0) / (1u64 << 53) as f64;
        let u2 = (b >> 11) as f64 / (1u64 << 53) as f64;
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clones_replay() {
        let mut a = Stream::new(42);
        let _ = a.uniform();
        let mut b = a.clone();
        assert_eq!(a.uniform(), b.uniform());
    }

    #[test]
    fn derive_ignores_position() {
        let a = Stream::new(7);
        let mut b = Stream::new(7);
        b.uniform();
        assert_eq!(a.derive("dirt"), b.derive("dirt"));
        assert_ne!(a.derive("dirt"), a.derive("noise"));
    }

    #[test]
    fn counter_normal_moments() {
        let s = Stream::new(3);
        let n = 200_000u64;
        let (mut m, mut v) = (0.0, 0.0);
        for i in 0..n {
            let z = s.counter_normal(i);
            m += z;
            v += z * z;
        }
        m /= n as f64;
        v = v / n as f64 - m * m;
        assert!(m.abs() < 0.01, "mean {m}");
        assert!((v - 1.0).abs() < 0.02, "var {v}");
    }

    #[test]
    fn degenerate_ranges() {
        let mut s = Stream::new(1);
        assert_eq!(s.range(0.5, 0.5), 0.5);
        assert_eq!(s.range_u32(3, 3), 3);
    }
}
