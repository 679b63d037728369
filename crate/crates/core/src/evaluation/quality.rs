//! Tile-based proxy quality score in `[0, 100]`, higher is better.
//!
//! Each fully-inside tile is scored on three components in `[0, 1]`:
//! - contrast: amplitude of the ridge band relative to the tile mean
//!   (Michelson contrast of the dominant ridge sinusoid);
//! - frequency fidelity: closeness of the band's mean frequency to the
//!   nominal ridge frequency, times the fraction of AC energy in the band;
//! - sharpness: coherent gradient energy of the lightly smoothed tile (the
//!   structure-tensor eigenvalue difference), relative to that of a
//!   full-contrast sinusoid at the nominal frequency.
//!
//! The image score is 100 times the weighted component sum, averaged over
//! tiles. The grey projection is the channel mean, so the score does not
//! depend on channel order.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectral::Fft2;
use crate::capture::blur_gaussian;
use crate::error::{ensure_dims, Error, Result};
use crate::raster::{ColorImage, GrayImage};
use crate::ridge::ShapeMask;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityWeights {
    pub contrast: f64,
    pub frequency: f64,
    pub sharpness: f64,
}

impl Default for QualityWeights {
    fn default() -> Self {
        Self {
            contrast: 0.4,
            frequency: 0.3,
            sharpness: 0.3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityParams {
    pub tile: usize,
    /// Cycles per pixel.
    pub nominal_frequency: f64,
    /// Minimum fraction of support pixels for a tile to count.
    pub min_coverage: f64,
    pub weights: QualityWeights,
}

impl Default for QualityParams {
    fn default() -> Self {
        Self {
            tile: 32,
            nominal_frequency: 1.0 / 9.0,
            min_coverage: 0.9,
            weights: QualityWeights::default(),
        }
    }
}

/// Band edges as multiples of the nominal frequency.
const BAND: (f64, f64) = (1.0 / 1.6, 1.6);
const SMOOTHING_SIGMA: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct QualityScore(f64);

impl QualityScore {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=100.0).contains(&value) {
            return Err(Error::param("quality", "must lie in [0, 100]"));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QualityComponents {
    pub contrast: f64,
    pub frequency: f64,
    pub sharpness: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityReport {
    pub score: QualityScore,
    /// Tile means of each component.
    pub components: QualityComponents,
    pub tiles: usize,
}

pub fn proxy_quality(img: &ColorImage, shape: &ShapeMask) -> Result<QualityScore> {
    Ok(proxy_quality_with(img, shape, &QualityParams::default())?.score)
}

pub fn proxy_quality_with(img: &ColorImage, shape: &ShapeMask, params: &QualityParams) -> Result<QualityReport> {
    ensure_dims(shape.dims(), img.dims())?;
    let gray = img.gray();
    let smooth = blur_gaussian(&gray, SMOOTHING_SIGMA);
    let t = params.tile;
    let fft = Fft2::new(t, t);
    let window: Vec<f64> = (0..t)
        .map(|i| 0.5 - 0.5 * (std::f64::consts::TAU * (i as f64 + 0.5) / t as f64).cos())
        .collect();
    let (w, h) = img.dims();
    let mut sum = QualityComponents::default();
    let mut tiles = 0usize;
    for ty in 0..h / t {
        for tx in 0..w / t {
            let (x0, y0) = (tx * t, ty * t);
            let covered = (0..t * t).filter(|i| shape.in_support(x0 + i % t, y0 + i / t)).count();
            if (covered as f64) < params.min_coverage * (t * t) as f64 {
                continue;
            }
            let c = tile_components(&gray, &smooth, shape, (x0, y0), params, &fft, &window);
            sum.contrast += c.contrast;
            sum.frequency += c.frequency;
            sum.sharpness += c.sharpness;
            tiles += 1;
        }
    }
    let n = tiles.max(1) as f64;
    let components = QualityComponents {
        contrast: sum.contrast / n,
        frequency: sum.frequency / n,
        sharpness: sum.sharpness / n,
    };
    let wts = params.weights;
    let value =
        100.0 * (wts.contrast * components.contrast + wts.frequency * components.frequency + wts.sharpness * components.sharpness);
    Ok(QualityReport {
        score: QualityScore::new(value.clamp(0.0, 100.0))?,
        components,
        tiles,
    })
}

fn tile_components(
    gray: &GrayImage,
    smooth: &GrayImage,
    shape: &ShapeMask,
    origin: (usize, usize),
    params: &QualityParams,
    fft: &Fft2,
    window: &[f64],
) -> QualityComponents {
    let t = params.tile;
    let f0 = params.nominal_frequency;
    let at = |i: usize| (origin.0 + i % t, origin.1 + i / t);
    let inside: Vec<bool> = (0..t * t)
        .map(|i| {
            let (x, y) = at(i);
            shape.in_support(x, y)
        })
        .collect();
    let count = inside.iter().filter(|&&b| b).count() as f64;
    let mean = (0..t * t)
        .filter(|&i| inside[i])
        .map(|i| {
            let (x, y) = at(i);
            gray.get(x, y)
        })
        .sum::<f64>()
        / count;
    if mean <= 0.0 {
        return QualityComponents::default();
    }

    // flat tiles carry no ridge signal; skip rounding residue
    let flat = (0..t * t).filter(|&i| inside[i]).all(|i| {
        let (x, y) = at(i);
        (gray.get(x, y) - mean).abs() <= 1e-12
    });
    if flat {
        return QualityComponents::default();
    }
    let mut data: Vec<Complex64> = (0..t * t)
        .map(|i| {
            let (x, y) = at(i);
            let v = if inside[i] { gray.get(x, y) - mean } else { 0.0 };
            Complex64::new(v * window[i % t] * window[i / t], 0.0)
        })
        .collect();
    fft.forward(&mut data);
    let (mut band, mut total, mut weighted) = (0.0, 0.0, 0.0);
    for (i, c) in data.iter().enumerate() {
        let (fx, fy) = fft.frequency_at(i);
        let f = fx.hypot(fy);
        if f == 0.0 {
            continue;
        }
        let e = c.norm_sqr();
        total += e;
        if f >= BAND.0 * f0 && f <= BAND.1 * f0 {
            band += e;
            weighted += e * f;
        }
    }
    let window_energy: f64 = window.iter().map(|v| v * v).sum::<f64>().powi(2);
    // Parseval: sinusoid amplitude from band energy under the window
    let amplitude = (2.0 * band / ((t * t) as f64 * window_energy)).sqrt();
    let contrast = (amplitude / mean).min(1.0);
    let frequency = if band > 0.0 {
        let centroid = weighted / band;
        let proximity = (1.0 - (centroid - f0).abs() / (0.5 * f0)).max(0.0);
        proximity * band / total
    } else {
        0.0
    };

    // structure tensor; isotropic noise adds equally to both eigenvalues
    let (mut jxx, mut jyy, mut jxy) = (0.0, 0.0, 0.0);
    let mut n = 0usize;
    for y in origin.1..origin.1 + t - 1 {
        for x in origin.0..origin.0 + t - 1 {
            if shape.in_support(x, y) && shape.in_support(x + 1, y) && shape.in_support(x, y + 1) {
                let gx = smooth.get(x + 1, y) - smooth.get(x, y);
                let gy = smooth.get(x, y + 1) - smooth.get(x, y);
                jxx += gx * gx;
                jyy += gy * gy;
                jxy += gx * gy;
                n += 1;
            }
        }
    }
    let n = n.max(1) as f64;
    let (jxx, jyy, jxy) = (jxx / n, jyy / n, jxy / n);
    let coherent = ((jxx - jyy).powi(2) + 4.0 * jxy * jxy).sqrt();
    let rms = coherent.sqrt();
    let attenuation = (-2.0 * (std::f64::consts::PI * f0 * SMOOTHING_SIGMA).powi(2)).exp();
    let reference = std::f64::consts::SQRT_2 * std::f64::consts::PI * f0 * mean * attenuation;
    let sharpness = (rms / reference).min(1.0);
    QualityComponents {
        contrast,
        frequency,
        sharpness,
    }
}
