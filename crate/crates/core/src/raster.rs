//! Dense row-major rasters shared by every pipeline stage.
//!
//! Intensities are `f64` in `[0, 1]`. A [`Pixel`] is either a single gray
//! value or an [`Rgb`] triple; the generic operations (bilinear sampling,
//! separable convolution, blending) work on both.

use std::fmt::Debug;

use rayon::prelude::*;

use crate::error::{ensure_dims, Result};

pub trait Pixel: Copy + Default + PartialEq + Debug + Send + Sync + 'static {
    const CHANNELS: usize;

    fn splat(v: f64) -> Self;
    fn map(self, f: impl Fn(f64) -> f64) -> Self;
    fn zip(self, other: Self, f: impl Fn(f64, f64) -> f64) -> Self;
    fn channel(&self, c: usize) -> f64;
    /// Builds a pixel from the first `CHANNELS` entries.
    fn from_channels(c: [f64; 3]) -> Self;

    fn add(self, other: Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    fn scale(self, s: f64) -> Self {
        self.map(|a| a * s)
    }

    /// `self + (other - self) * t`
    fn lerp(self, other: Self, t: f64) -> Self {
        self.zip(other, |a, b| a + (b - a) * t)
    }
}

impl Pixel for f64 {
    const CHANNELS: usize = 1;

    fn splat(v: f64) -> Self {
        v
    }
    fn map(self, f: impl Fn(f64) -> f64) -> Self {
        f(self)
    }
    fn zip(self, other: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        f(self, other)
    }
    fn channel(&self, _c: usize) -> f64 {
        *self
    }
    fn from_channels(c: [f64; 3]) -> Self {
        c[0]
    }
}

/// Linear RGB triple with channels in `[0, 1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Rgb(pub [f64; 3]);

impl Rgb {
    pub const BLACK: Rgb = Rgb([0.0; 3]);

    pub fn new(r: f64, g: f64, b: f64) -> Self {
        Rgb([r, g, b])
    }

    /// Rec. 601 luma.
    pub fn luma(&self) -> f64 {
        0.299 * self.0[0] + 0.587 * self.0[1] + 0.114 * self.0[2]
    }

    /// Channel mean, summed in sorted order so any channel permutation gives
    /// the same bits.
    pub fn channel_mean(&self) -> f64 {
        let mut c = self.0;
        c.sort_by(f64::total_cmp);
        (c[0] + c[1] + c[2]) / 3.0
    }
}

impl Pixel for Rgb {
    const CHANNELS: usize = 3;

    fn splat(v: f64) -> Self {
        Rgb([v; 3])
    }
    fn map(self, f: impl Fn(f64) -> f64) -> Self {
        Rgb([f(self.0[0]), f(self.0[1]), f(self.0[2])])
    }
    fn zip(self, other: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Rgb([
            f(self.0[0], other.0[0]),
            f(self.0[1], other.0[1]),
            f(self.0[2], other.0[2]),
        ])
    }
    fn channel(&self, c: usize) -> f64 {
        self.0[c]
    }
    fn from_channels(c: [f64; 3]) -> Self {
        Rgb(c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Raster<P> {
    width: usize,
    height: usize,
    data: Vec<P>,
}

pub type GrayImage = Raster<f64>;
pub type ColorImage = Raster<Rgb>;

impl<P: Pixel> Raster<P> {
    pub fn new(width: usize, height: usize, fill: P) -> Self {
        Self {
            width,
            height,
            data: vec![fill; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<P>) -> Self {
        assert_eq!(data.len(), width * height, "raster buffer length");
        Self {
            width,
            height,
            data,
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> P + Sync) -> Self {
        let mut data = vec![P::default(); width * height];
        if width > 0 {
            data.par_chunks_mut(width).enumerate().for_each(|(y, row)| {
                for (x, px) in row.iter_mut().enumerate() {
                    *px = f(x, y);
                }
            });
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn pixels(&self) -> &[P] {
        &self.data
    }

    pub fn pixels_mut(&mut self) -> &mut [P] {
        &mut self.data
    }

    pub fn into_pixels(self) -> Vec<P> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> P {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: P) {
        self.data[y * self.width + x] = v;
    }

    /// Pixel at signed coordinates, clamped to the nearest edge pixel.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> P {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.get(xc, yc)
    }

    pub fn map<Q: Pixel>(&self, f: impl Fn(P) -> Q + Sync) -> Raster<Q> {
        Raster {
            width: self.width,
            height: self.height,
            data: self.data.par_iter().map(|&p| f(p)).collect(),
        }
    }

    pub fn zip_map<Q: Pixel, R: Pixel>(
        &self,
        other: &Raster<Q>,
        f: impl Fn(P, Q) -> R + Sync,
    ) -> Result<Raster<R>> {
        ensure_dims(self.dims(), other.dims())?;
        Ok(Raster {
            width: self.width,
            height: self.height,
            data: self
                .data
                .par_iter()
                .zip(other.data.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Bilinear sample at real-valued coordinates; coordinates outside the
    /// raster clamp to the nearest edge. The result is clamped to the range of
    /// the four contributing pixels so interpolation never overshoots.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> P {
        let xm = (self.width - 1) as f64;
        let ym = (self.height - 1) as f64;
        let xc = x.clamp(0.0, xm);
        let yc = y.clamp(0.0, ym);
        let x0 = xc.floor() as usize;
        let y0 = yc.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = xc - x0 as f64;
        let fy = yc - y0 as f64;
        let p00 = self.get(x0, y0);
        let p10 = self.get(x1, y0);
        let p01 = self.get(x0, y1);
        let p11 = self.get(x1, y1);
        let w00 = (1.0 - fx) * (1.0 - fy);
        let w10 = fx * (1.0 - fy);
        let w01 = (1.0 - fx) * fy;
        let w11 = fx * fy;
        let mut out = [0.0; 3];
        for (c, o) in out.iter_mut().enumerate().take(P::CHANNELS) {
            let (a, b, d, e) = (p00.channel(c), p10.channel(c), p01.channel(c), p11.channel(c));
            let v = a * w00 + b * w10 + d * w01 + e * w11;
            let lo = a.min(b).min(d).min(e);
            let hi = a.max(b).max(d).max(e);
            *o = v.clamp(lo, hi);
        }
        P::from_channels(out)
    }

    pub fn clamp01(&self) -> Self {
        self.map(|p| p.map(|v| v.clamp(0.0, 1.0)))
    }
}

impl GrayImage {
    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len().max(1) as f64
    }
}

impl ColorImage {
    pub fn luma(&self) -> GrayImage {
        self.map(|p| p.luma())
    }

    /// Per-pixel channel mean; invariant under channel permutation.
    pub fn gray(&self) -> GrayImage {
        self.map(|p| p.channel_mean())
    }

    pub fn channel(&self, c: usize) -> GrayImage {
        self.map(|p| p.0[c])
    }
}

/// Normalized, symmetric 1D Gaussian kernel truncated at `ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil().max(1.0) as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|w| *w /= sum);
    k
}

/// Separable convolution with a symmetric odd-length kernel, clamp-to-edge.
pub fn convolve_separable<P: Pixel>(img: &Raster<P>, kernel: &[f64]) -> Raster<P> {
    let r = (kernel.len() / 2) as isize;
    let (w, h) = img.dims();
    let horizontal = Raster::from_fn(w, h, |x, y| {
        let mut acc = P::splat(0.0);
        for (i, &k) in kernel.iter().enumerate() {
            let sx = x as isize + i as isize - r;
            acc = acc.add(img.get_clamped(sx, y as isize).scale(k));
        }
        acc
    });
    Raster::from_fn(w, h, |x, y| {
        let mut acc = P::splat(0.0);
        for (i, &k) in kernel.iter().enumerate() {
            let sy = y as isize + i as isize - r;
            acc = acc.add(horizontal.get_clamped(x as isize, sy).scale(k));
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear_hits_grid_points_exactly() {
        let img = GrayImage::from_fn(5, 4, |x, y| (x * 7 + y * 3) as f64 / 40.0);
        for y in 0..4 {
            for x in 0..5 {
                assert_eq!(img.sample_bilinear(x as f64, y as f64), img.get(x, y));
            }
        }
    }

    #[test]
    fn bilinear_clamps_outside() {
        let img = GrayImage::from_fn(4, 4, |x, _| x as f64);
        assert_eq!(img.sample_bilinear(-5.0, 1.0), 0.0);
        assert_eq!(img.sample_bilinear(10.0, 1.0), 3.0);
        assert!((img.sample_bilinear(1.25, 2.0) - 1.25).abs() < 1e-12);
    }

    #[test]
    fn rgb_sample_keeps_channels_apart() {
        let img = ColorImage::from_fn(3, 3, |x, y| Rgb::new(x as f64, y as f64, 1.0));
        let p = img.sample_bilinear(0.5, 1.5);
        assert_eq!(p, Rgb::new(0.5, 1.5, 1.0));
    }

    #[test]
    fn kernel_is_normalized() {
        for s in [0.3, 1.0, 2.5, 7.0] {
            let k = gaussian_kernel(s);
            assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert_eq!(k.len() % 2, 1);
        }
    }

    #[test]
    fn channel_mean_is_permutation_invariant() {
        let a = Rgb::new(0.1, 0.7, 0.3);
        let b = Rgb::new(0.3, 0.1, 0.7);
        assert_eq!(a.channel_mean().to_bits(), b.channel_mean().to_bits());
    }
}
