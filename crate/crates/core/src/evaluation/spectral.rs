//! 2-D FFT helpers shared by the quality proxy and the matcher.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward and inverse plans for a fixed `width x height` grid.
pub struct Fft2 {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            col_fwd: planner.plan_fft_forward(height),
            row_inv: planner.plan_fft_inverse(width),
            col_inv: planner.plan_fft_inverse(height),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Forward transform of a row-major `width x height` grid. The spectrum
    /// is left transposed: bin `(kx, ky)` sits at index `kx * height + ky`.
    pub fn forward(&self, data: &mut Vec<Complex64>) {
        assert_eq!(data.len(), self.len());
        self.row_fwd.process(data);
        let mut t = transpose(data, self.width, self.height);
        self.col_fwd.process(&mut t);
        *data = t;
    }

    /// Inverse of [`Fft2::forward`], scaled by `1 / len`; returns to the
    /// row-major spatial layout.
    pub fn inverse(&self, data: &mut Vec<Complex64>) {
        assert_eq!(data.len(), self.len());
        self.col_inv.process(data);
        let mut t = transpose(data, self.height, self.width);
        self.row_inv.process(&mut t);
        let s = 1.0 / self.len() as f64;
        for v in t.iter_mut() {
            *v *= s;
        }
        *data = t;
    }

    /// Frequencies `(fx, fy)` of spectrum index `i` in the transposed layout.
    pub fn frequency_at(&self, i: usize) -> (f64, f64) {
        (bin_frequency(i / self.height, self.width), bin_frequency(i % self.height, self.height))
    }
}

/// Row-major `w x h` to row-major `h x w`.
fn transpose(src: &[Complex64], w: usize, h: usize) -> Vec<Complex64> {
    const B: usize = 16;
    let mut dst = vec![Complex64::default(); src.len()];
    for by in (0..h).step_by(B) {
        for bx in (0..w).step_by(B) {
            for y in by..(by + B).min(h) {
                for x in bx..(bx + B).min(w) {
                    dst[x * h + y] = src[y * w + x];
                }
            }
        }
    }
    dst
}

/// Signed frequency in cycles per sample of DFT bin `k` out of `n`.
pub fn bin_frequency(k: usize, n: usize) -> f64 {
    let k = if k > n / 2 { k as f64 - n as f64 } else { k as f64 };
    k / n as f64
}

/// Smallest integer `>= n` whose prime factors are all at most 7.
pub fn smooth_size(n: usize) -> usize {
    (n.max(1)..)
        .find(|&m| {
            let mut r = m;
            for p in [2, 3, 5, 7] {
                while r % p == 0 {
                    r /= p;
                }
            }
            r == 1
        })
        .expect("smooth numbers are unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = Fft2::new(6, 5);
        let orig: Vec<Complex64> = (0..30).map(|i| Complex64::new((i * 7 % 11) as f64, 0.0)).collect();
        let mut d = orig.clone();
        f.forward(&mut d);
        f.inverse(&mut d);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn dc_bin_is_sum() {
        let f = Fft2::new(4, 3);
        let mut d = vec![Complex64::new(0.5, 0.0); 12];
        f.forward(&mut d);
        assert!((d[0].re - 6.0).abs() < 1e-12);
        assert!(d[1..].iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn transposed_layout() {
        // a pure horizontal cosine with 1 cycle lands on bins (+-1, 0)
        let (w, h) = (8, 4);
        let f = Fft2::new(w, h);
        let mut d: Vec<Complex64> = (0..w * h)
            .map(|i| Complex64::new((std::f64::consts::TAU * (i % w) as f64 / w as f64).cos(), 0.0))
            .collect();
        f.forward(&mut d);
        for (i, c) in d.iter().enumerate() {
            let (fx, fy) = f.frequency_at(i);
            if c.norm() > 1e-9 {
                assert_eq!(fy, 0.0);
                assert_eq!(fx.abs(), 1.0 / 8.0);
            }
        }
    }

    #[test]
    fn smooth_sizes() {
        assert_eq!(smooth_size(220), 224);
        assert_eq!(smooth_size(292), 294);
        assert_eq!(smooth_size(11), 12);
        assert_eq!(bin_frequency(3, 4), -0.25);
    }
}
