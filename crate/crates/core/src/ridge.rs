//! Ridge pattern sources and the fingertip silhouette.
//!
//! A ridge pattern is either ingested from an image file (for example a
//! master print exported by an external generator) or synthesized here:
//! a zero-pole orientation model around cores and deltas, a smooth density
//! map, and seeded patches grown by iterated oriented band-pass filtering
//! until the fingertip area is covered.

use std::f64::consts::PI;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use rayon::prelude::*;

use crate::distance::interior_distance;
use crate::error::{Error, Result};
use crate::raster::{ColorImage, GrayImage};
use crate::rng::Stream;

pub const MIN_SIDE: usize = 64;
pub const DEFAULT_DPI: f64 = 500.0;

/// Single-channel ridge raster; 0 is ridge (dark), 1 is valley (bright).
#[derive(Clone, Debug, PartialEq)]
pub struct RidgeMap {
    image: GrayImage,
    nominal_resolution: f64,
}

impl RidgeMap {
    pub fn new(image: GrayImage, nominal_resolution: f64) -> Result<Self> {
        let (width, height) = image.dims();
        if width < MIN_SIDE || height < MIN_SIDE {
            return Err(Error::TooSmall { width, height });
        }
        if !(nominal_resolution > 0.0) {
            return Err(Error::param("nominal_resolution", "must be positive"));
        }
        if image.pixels().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::param("ridge pixels", "must lie in [0, 1]"));
        }
        Ok(Self {
            image,
            nominal_resolution,
        })
    }

    /// Replaces the raster, clamping into `[0, 1]`. Used by stages that keep
    /// the dimensions and resolution.
    pub(crate) fn with_image(&self, image: GrayImage) -> Self {
        debug_assert_eq!(image.dims(), self.image.dims());
        Self {
            image: image.clamp01(),
            nominal_resolution: self.nominal_resolution,
        }
    }

    pub fn image(&self) -> &GrayImage {
        &self.image
    }

    pub fn into_image(self) -> GrayImage {
        self.image
    }

    pub fn width(&self) -> usize {
        self.image.width()
    }

    pub fn height(&self) -> usize {
        self.image.height()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.image.dims()
    }

    pub fn nominal_resolution(&self) -> f64 {
        self.nominal_resolution
    }
}

/// Fingertip silhouette weights in `[0, 1]` (1 inside).
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeMask {
    weights: GrayImage,
    distance: GrayImage,
    centroid: (f64, f64),
    max_distance: f64,
}

impl ShapeMask {
    /// Wraps an arbitrary weight raster and precomputes the interior distance
    /// transform of its support.
    pub fn from_weights(weights: GrayImage) -> Result<Self> {
        if weights.pixels().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::param("mask weights", "must lie in [0, 1]"));
        }
        let (w, h) = weights.dims();
        let inside: Vec<bool> = weights.pixels().iter().map(|&v| v > 0.0).collect();
        let count = inside.iter().filter(|&&b| b).count();
        if count == 0 {
            return Err(Error::EmptySupport);
        }
        let (mut sx, mut sy) = (0.0, 0.0);
        for (i, _) in inside.iter().enumerate().filter(|(_, &b)| b) {
            sx += (i % w) as f64;
            sy += (i / w) as f64;
        }
        let distance = GrayImage::from_vec(w, h, interior_distance(&inside, w, h));
        let max_distance = distance.min_max().1;
        Ok(Self {
            weights,
            distance,
            centroid: (sx / count as f64, sy / count as f64),
            max_distance,
        })
    }

    /// Support = pixels with any nonzero channel; the generator writes pure
    /// black background.
    pub fn from_foreground(img: &ColorImage) -> Result<Self> {
        Self::from_weights(img.map(|p| if p.0.iter().any(|&c| c > 0.0) { 1.0 } else { 0.0 }))
    }

    pub fn weights(&self) -> &GrayImage {
        &self.weights
    }

    pub fn weight(&self, x: usize, y: usize) -> f64 {
        self.weights.get(x, y)
    }

    pub fn in_support(&self, x: usize, y: usize) -> bool {
        self.weights.get(x, y) > 0.0
    }

    /// Euclidean distance to the nearest pixel outside the support.
    pub fn distance(&self) -> &GrayImage {
        &self.distance
    }

    pub fn max_distance(&self) -> f64 {
        self.max_distance
    }

    pub fn centroid(&self) -> (f64, f64) {
        self.centroid
    }

    pub fn dims(&self) -> (usize, usize) {
        self.weights.dims()
    }

    pub fn support_count(&self) -> usize {
        self.weights.pixels().iter().filter(|&&v| v > 0.0).count()
    }
}

/// Cores and deltas in normalized `[0,1]^2` coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SingularityLayout {
    pub cores: Vec<(f64, f64)>,
    pub deltas: Vec<(f64, f64)>,
}

impl SingularityLayout {
    pub const MIN_SEPARATION: f64 = 0.05;

    pub fn arch() -> Self {
        Self::default()
    }

    pub fn new(cores: Vec<(f64, f64)>, deltas: Vec<(f64, f64)>) -> Result<Self> {
        let layout = Self { cores, deltas };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cores.len() > 2 || self.deltas.len() > 2 {
            return Err(Error::InvalidLayout(format!(
                "{} cores and {} deltas, at most 2 of each",
                self.cores.len(),
                self.deltas.len()
            )));
        }
        let all: Vec<(f64, f64)> = self.cores.iter().chain(&self.deltas).copied().collect();
        for &(x, y) in &all {
            if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
                return Err(Error::InvalidLayout(format!("({x}, {y}) outside the unit square")));
            }
        }
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if (a.0 - b.0).hypot(a.1 - b.1) < Self::MIN_SEPARATION {
                    return Err(Error::InvalidLayout("singularities closer than 0.05".into()));
                }
            }
        }
        Ok(())
    }

    /// Draws a plausible layout (arch, loop or whorl) from `stream`.
    pub fn sample(stream: &mut Stream) -> Self {
        let kind = stream.uniform();
        let jitter = |s: &mut Stream, c: f64, a: f64| c + s.range(-a, a);
        if kind < 0.1 {
            Self::arch()
        } else if kind < 0.75 {
            let core = (jitter(stream, 0.5, 0.08), jitter(stream, 0.42, 0.05));
            let side = if stream.uniform() < 0.5 { -1.0 } else { 1.0 };
            let delta = (jitter(stream, 0.5 + side * 0.22, 0.05), jitter(stream, 0.74, 0.05));
            Self {
                cores: vec![core],
                deltas: vec![delta],
            }
        } else {
            let cx = jitter(stream, 0.5, 0.05);
            let cy = jitter(stream, 0.44, 0.04);
            let tilt = stream.range(-0.03, 0.03);
            Self {
                cores: vec![(cx - tilt, cy - 0.05), (cx + tilt, cy + 0.05)],
                deltas: vec![
                    (jitter(stream, 0.24, 0.04), jitter(stream, 0.76, 0.04)),
                    (jitter(stream, 0.76, 0.04), jitter(stream, 0.76, 0.04)),
                ],
            }
        }
    }
}

/// Parameters of the procedural ridge generator.
#[derive(Clone, Debug, PartialEq)]
pub struct RidgeParams {
    pub width: usize,
    pub height: usize,
    /// Mean ridge frequency in cycles per pixel.
    pub frequency: f64,
    pub max_iterations: usize,
}

impl Default for RidgeParams {
    fn default() -> Self {
        Self {
            width: 416,
            height: 560,
            frequency: 1.0 / 9.0,
            max_iterations: 60,
        }
    }
}

impl RidgeParams {
    pub const MIN_FREQUENCY: f64 = 1.0 / 12.0;
    pub const MAX_FREQUENCY: f64 = 1.0 / 6.0;

    pub fn validate(&self) -> Result<()> {
        if self.width < MIN_SIDE || self.height < MIN_SIDE {
            return Err(Error::TooSmall {
                width: self.width,
                height: self.height,
            });
        }
        // small tolerance so that 1/12 and 1/6 written as decimals pass
        if !(Self::MIN_FREQUENCY - 1e-9..=Self::MAX_FREQUENCY + 1e-9).contains(&self.frequency) {
            return Err(Error::param("frequency", "must lie in [1/12, 1/6] cycles per pixel"));
        }
        if self.max_iterations == 0 {
            return Err(Error::param("max_iterations", "must be at least 1"));
        }
        Ok(())
    }
}

/// Ridge orientation (radians, modulo pi) at every pixel.
///
/// Zero-pole model: each core adds half its polar angle, each delta
/// subtracts half. Without singularities a gentle arch is used instead.
pub fn orientation_field(layout: &SingularityLayout, width: usize, height: usize) -> GrayImage {
    GrayImage::from_fn(width, height, |x, y| orientation_at(layout, width, height, x as f64, y as f64))
}

pub fn orientation_at(layout: &SingularityLayout, width: usize, height: usize, x: f64, y: f64) -> f64 {
    let (w, h) = (width as f64, height as f64);
    let theta = if layout.cores.is_empty() && layout.deltas.is_empty() {
        let cx = 0.5 * w;
        let s = 0.3 * w;
        let amp = 0.12 * h;
        let dx = x - cx;
        let slope = amp * dx / (s * s) * (-dx * dx / (2.0 * s * s)).exp();
        slope.atan()
    } else {
        let mut t = 0.0;
        for &(cx, cy) in &layout.cores {
            t += 0.5 * (y - cy * h).atan2(x - cx * w);
        }
        for &(dx, dy) in &layout.deltas {
            t -= 0.5 * (y - dy * h).atan2(x - dx * w);
        }
        t
    };
    theta.rem_euclid(PI)
}

const PAD: usize = 16;
const ORIENTATION_BINS: usize = 48;
const FREQUENCY_BINS: usize = 7;
const FREQUENCY_SPREAD: f64 = 0.12;
const GAIN: f64 = 2.0;
const COVERED: f64 = 0.5;
const REFINE_ITERATIONS: usize = 3;
const SEED_SPACING: f64 = 36.0;
const BLOCK: usize = 16;

/// Bank of zero-mean oriented Gabor kernels indexed by
/// `frequency_bin * ORIENTATION_BINS + orientation_bin`.
struct GaborBank {
    radius: usize,
    kernels: Vec<Vec<f64>>,
    frequencies: Vec<f64>,
}

impl GaborBank {
    fn new(f0: f64) -> Self {
        let frequencies: Vec<f64> = (0..FREQUENCY_BINS)
            .map(|i| {
                let t = i as f64 / (FREQUENCY_BINS - 1) as f64;
                f0 * (1.0 - FREQUENCY_SPREAD + 2.0 * FREQUENCY_SPREAD * t)
            })
            .collect();
        let f_min = frequencies[0];
        let sigma_along = 0.5 / f_min;
        let radius = (1.8 * sigma_along).ceil() as usize;
        let mut kernels = Vec::with_capacity(FREQUENCY_BINS * ORIENTATION_BINS);
        for &f in &frequencies {
            for o in 0..ORIENTATION_BINS {
                let theta = o as f64 * PI / ORIENTATION_BINS as f64;
                kernels.push(gabor_kernel(theta, f, radius));
            }
        }
        Self {
            radius,
            kernels,
            frequencies,
        }
    }

    fn index(&self, theta: f64, f: f64) -> usize {
        let o = ((theta / PI * ORIENTATION_BINS as f64).round() as usize) % ORIENTATION_BINS;
        let lo = self.frequencies[0];
        let hi = self.frequencies[FREQUENCY_BINS - 1];
        let t = ((f - lo) / (hi - lo)).clamp(0.0, 1.0);
        let fi = (t * (FREQUENCY_BINS - 1) as f64).round() as usize;
        fi * ORIENTATION_BINS + o
    }
}

/// Gabor kernel for ridges running along `theta`, normalized to unit gain on
/// a matching unit-amplitude sinusoid.
fn gabor_kernel(theta: f64, f: f64, radius: usize) -> Vec<f64> {
    let sigma_along = 0.5 / f;
    let sigma_across = 0.42 / f;
    let (s, c) = theta.sin_cos();
    let r = radius as isize;
    let mut env = Vec::new();
    let mut wave = Vec::new();
    for v in -r..=r {
        for u in -r..=r {
            let (u, v) = (u as f64, v as f64);
            let along = u * c + v * s;
            let across = -u * s + v * c;
            env.push((-(along * along) / (2.0 * sigma_along * sigma_along) - (across * across) / (2.0 * sigma_across * sigma_across)).exp());
            wave.push((2.0 * PI * f * across).cos());
        }
    }
    let env_sum: f64 = env.iter().sum();
    let dc: f64 = env.iter().zip(&wave).map(|(e, w)| e * w).sum::<f64>() / env_sum;
    let mut k: Vec<f64> = env.iter().zip(&wave).map(|(e, w)| e * (w - dc)).collect();
    let gain: f64 = k.iter().zip(&wave).map(|(a, w)| a * w).sum();
    k.iter_mut().for_each(|a| *a /= gain);
    k
}

/// Smooth multiplicative density variation around 1, within +-6%.
fn density_factor(stream: &mut Stream, width: usize, height: usize) -> impl Fn(f64, f64) -> f64 {
    let waves: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            let kx = stream.range(0.3, 1.2) * 2.0 * PI / width as f64;
            let ky = stream.range(0.3, 1.2) * 2.0 * PI / height as f64;
            (kx, ky, stream.range(0.0, 2.0 * PI))
        })
        .collect();
    move |x, y| 1.0 + 0.02 * waves.iter().map(|(kx, ky, p)| (kx * x + ky * y + p).sin()).sum::<f64>()
}

/// Synthesizes a near-binary ridge pattern.
///
/// The result is a pure function of the arguments.
pub fn generate_ridge_pattern(
    identity_seed: u64,
    layout: &SingularityLayout,
    params: &RidgeParams,
) -> Result<RidgeMap> {
    layout.validate()?;
    params.validate()?;
    let (w, h) = (params.width, params.height);
    let (pw, ph) = (w + 2 * PAD, h + 2 * PAD);
    let mut stream = Stream::new(identity_seed).derive("ridge-pattern");

    let bank = GaborBank::new(params.frequency);
    let density = density_factor(&mut stream, w, h);
    let kernel_index: Vec<u16> = (0..pw * ph)
        .into_par_iter()
        .map(|i| {
            let x = (i % pw) as f64 - PAD as f64;
            let y = (i / pw) as f64 - PAD as f64;
            let theta = orientation_at(layout, w, h, x, y);
            bank.index(theta, params.frequency * density(x, y)) as u16
        })
        .collect();

    // seeds: jittered grid of unit-peak kernel stamps with random polarity
    let mut field = vec![0.0f64; pw * ph];
    let r = bank.radius as isize;
    let nx = (pw as f64 / SEED_SPACING).ceil() as usize;
    let ny = (ph as f64 / SEED_SPACING).ceil() as usize;
    for gy in 0..ny {
        for gx in 0..nx {
            let sx = ((gx as f64 + stream.range(0.15, 0.85)) * SEED_SPACING) as isize;
            let sy = ((gy as f64 + stream.range(0.15, 0.85)) * SEED_SPACING) as isize;
            let sign = if stream.uniform() < 0.5 { -1.0 } else { 1.0 };
            if sx >= pw as isize || sy >= ph as isize {
                continue;
            }
            let k = &bank.kernels[kernel_index[sy as usize * pw + sx as usize] as usize];
            let peak = k.iter().cloned().fold(0.0, f64::max);
            let side = 2 * r + 1;
            for v in -r..=r {
                for u in -r..=r {
                    let (x, y) = (sx + u, sy + v);
                    if x < 0 || y < 0 || x >= pw as isize || y >= ph as isize {
                        continue;
                    }
                    let kv = k[((v + r) * side + (u + r)) as usize] / peak;
                    let cell = &mut field[y as usize * pw + x as usize];
                    if kv.abs() > cell.abs() {
                        *cell = sign * kv;
                    }
                }
            }
        }
    }

    let coverage_mask = shape_support(w, h);
    let mut iterations = 0;
    let mut refine_left = REFINE_ITERATIONS;
    loop {
        field = filter_step(&field, pw, ph, &kernel_index, &bank);
        iterations += 1;
        let cov = coverage(&field, pw, &coverage_mask, w, h);
        if cov >= 0.99 {
            if refine_left == 0 {
                break;
            }
            refine_left -= 1;
        } else if iterations >= params.max_iterations {
            return Err(Error::NonConvergence {
                coverage: cov,
                iterations,
            });
        }
        if iterations >= params.max_iterations + REFINE_ITERATIONS {
            break;
        }
    }

    let norm = 3.0f64.tanh();
    let image = GrayImage::from_fn(w, h, |x, y| {
        let v = field[(y + PAD) * pw + x + PAD];
        (0.5 + 0.5 * (3.0 * v).tanh() / norm).clamp(0.0, 1.0)
    });
    RidgeMap::new(image, DEFAULT_DPI)
}

fn filter_step(field: &[f64], pw: usize, ph: usize, kernel_index: &[u16], bank: &GaborBank) -> Vec<f64> {
    let r = bank.radius;
    let side = 2 * r + 1;
    // blocks that touch any nonzero value (dilated by the kernel reach)
    let bw = pw.div_ceil(BLOCK);
    let bh = ph.div_ceil(BLOCK);
    let mut live = vec![false; bw * bh];
    for y in 0..ph {
        for x in 0..pw {
            if field[y * pw + x] != 0.0 {
                live[(y / BLOCK) * bw + x / BLOCK] = true;
            }
        }
    }
    let reach = r.div_ceil(BLOCK) as isize;
    let mut active = vec![false; bw * bh];
    for by in 0..bh as isize {
        for bx in 0..bw as isize {
            if !live[by as usize * bw + bx as usize] {
                continue;
            }
            for dy in -reach..=reach {
                for dx in -reach..=reach {
                    let (x, y) = (bx + dx, by + dy);
                    if x >= 0 && y >= 0 && x < bw as isize && y < bh as isize {
                        active[y as usize * bw + x as usize] = true;
                    }
                }
            }
        }
    }

    let mut out = vec![0.0f64; pw * ph];
    out.par_chunks_mut(pw).enumerate().for_each(|(y, row)| {
        for (x, o) in row.iter_mut().enumerate() {
            if !active[(y / BLOCK) * bw + x / BLOCK] {
                continue;
            }
            let k = &bank.kernels[kernel_index[y * pw + x] as usize];
            let mut acc = 0.0;
            if x >= r && y >= r && x + r < pw && y + r < ph {
                for (ky, krow) in k.chunks_exact(side).enumerate() {
                    let start = (y + ky - r) * pw + x - r;
                    let src = &field[start..start + side];
                    acc += krow.iter().zip(src).map(|(a, b)| a * b).sum::<f64>();
                }
            } else {
                for ky in 0..side {
                    let sy = y as isize + ky as isize - r as isize;
                    if sy < 0 || sy >= ph as isize {
                        continue;
                    }
                    for kx in 0..side {
                        let sx = x as isize + kx as isize - r as isize;
                        if sx < 0 || sx >= pw as isize {
                            continue;
                        }
                        acc += k[ky * side + kx] * field[sy as usize * pw + sx as usize];
                    }
                }
            }
            *o = (GAIN * acc).clamp(-1.0, 1.0);
        }
    });
    out
}

fn shape_support(w: usize, h: usize) -> Vec<bool> {
    let geom = FingertipGeometry::new(w, h, 0);
    (0..w * h)
        .map(|i| geom.signed_inside_distance((i % w) as f64, (i / w) as f64) > 0.0)
        .collect()
}

/// Fraction of support pixels whose 5x5 neighbourhood reaches `COVERED`;
/// the window bridges the zero crossings between ridges and valleys.
fn coverage(field: &[f64], pw: usize, support: &[bool], w: usize, h: usize) -> f64 {
    let ph = field.len() / pw;
    let at = |x: isize, y: isize| -> f64 {
        if x < 0 || y < 0 || x >= pw as isize || y >= ph as isize {
            0.0
        } else {
            field[y as usize * pw + x as usize].abs()
        }
    };
    let mut inside = 0usize;
    let mut covered = 0usize;
    for y in 0..h {
        for x in 0..w {
            if !support[y * w + x] {
                continue;
            }
            inside += 1;
            let (cx, cy) = ((x + PAD) as isize, (y + PAD) as isize);
            let hit = (-2..=2).any(|dy| (-2..=2).any(|dx| at(cx + dx, cy + dy) > COVERED));
            if hit {
                covered += 1;
            }
        }
    }
    covered as f64 / inside.max(1) as f64
}

/// Rounded fingertip: semicircular top over a rectangle, inset by a margin
/// and spanning `FINGER_WIDTH` of the inset canvas width.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FingertipGeometry {
    pub center_x: f64,
    pub arc_center_y: f64,
    pub radius: f64,
    pub bottom: f64,
}

pub(crate) const FINGER_WIDTH: f64 = 0.8;

impl FingertipGeometry {
    pub fn new(width: usize, height: usize, margin: usize) -> Self {
        let inset_w = width as f64 - 2.0 * margin as f64;
        let radius = 0.5 * FINGER_WIDTH * inset_w;
        let top = margin as f64 - 0.5;
        Self {
            center_x: (width as f64 - 1.0) / 2.0,
            arc_center_y: top + radius,
            radius,
            bottom: height as f64 - margin as f64 - 0.5,
        }
    }

    /// Distance to the silhouette boundary, positive inside.
    pub fn signed_inside_distance(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.center_x;
        let side = self.radius - dx.abs();
        let to_bottom = self.bottom - y;
        if y < self.arc_center_y {
            let dy = y - self.arc_center_y;
            (self.radius - dx.hypot(dy)).min(to_bottom)
        } else {
            side.min(to_bottom)
        }
    }
}

/// Fingertip silhouette for `ridge` with a cosine edge falloff.
pub fn compute_shape_mask(ridge: &RidgeMap, margin: usize, edge_softness: f64) -> Result<ShapeMask> {
    shape_mask_for_dims(ridge.dims(), margin, edge_softness)
}

pub fn shape_mask_for_dims(dims: (usize, usize), margin: usize, edge_softness: f64) -> Result<ShapeMask> {
    let (w, h) = dims;
    if !(edge_softness >= 1.0) {
        return Err(Error::param("edge_softness", "must be at least 1 px"));
    }
    if 2 * margin >= w || 2 * margin >= h {
        return Err(Error::MarginTooLarge {
            margin,
            width: w,
            height: h,
        });
    }
    let geom = FingertipGeometry::new(w, h, margin);
    if geom.radius < 1.0 || geom.bottom <= geom.arc_center_y - geom.radius {
        return Err(Error::MarginTooLarge {
            margin,
            width: w,
            height: h,
        });
    }
    let weights = GrayImage::from_fn(w, h, |x, y| {
        let d = geom.signed_inside_distance(x as f64, y as f64);
        if d <= 0.0 {
            0.0
        } else if d >= edge_softness {
            1.0
        } else {
            0.5 - 0.5 * (PI * d / edge_softness).cos()
        }
    });
    ShapeMask::from_weights(weights)
}

/// Reads a ridge image. RGB input is averaged per channel; intensities are
/// scaled by the maximum representable value of the sample type.
pub fn load_ridge_pattern(path: impl AsRef<Path>) -> Result<RidgeMap> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let decode_err = |e: &dyn std::fmt::Display| Error::Decode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    };
    let img = image::ImageReader::open(path)
        .map_err(|e| decode_err(&e))?
        .with_guessed_format()
        .map_err(|e| decode_err(&e))?
        .decode()
        .map_err(|e| decode_err(&e))?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w < MIN_SIDE || h < MIN_SIDE {
        return Err(Error::TooSmall { width: w, height: h });
    }
    let sixteen = img.color().bytes_per_pixel() / img.color().channel_count() > 1;
    let data: Vec<f64> = match (img.color().has_color(), sixteen) {
        (false, false) => img.to_luma8().into_raw().into_iter().map(|v| v as f64 / 255.0).collect(),
        (false, true) => img.to_luma16().into_raw().into_iter().map(|v| v as f64 / 65535.0).collect(),
        (true, false) => img
            .to_rgb8()
            .pixels()
            .map(|p| (p.0[0] as f64 + p.0[1] as f64 + p.0[2] as f64) / (3.0 * 255.0))
            .collect(),
        (true, true) => img
            .to_rgb16()
            .pixels()
            .map(|p| (p.0[0] as f64 + p.0[1] as f64 + p.0[2] as f64) / (3.0 * 65535.0))
            .collect(),
    };
    let dpi = png_dpi(path).unwrap_or(DEFAULT_DPI);
    RidgeMap::new(GrayImage::from_vec(w, h, data), dpi)
}

/// Horizontal resolution from a PNG `pHYs` chunk, when present.
fn png_dpi(path: &Path) -> Option<f64> {
    let file = File::open(path).ok()?;
    let reader = png::Decoder::new(BufReader::new(file)).read_info().ok()?;
    let dims = reader.info().pixel_dims?;
    match dims.unit {
        png::Unit::Meter if dims.xppu > 0 => Some(dims.xppu as f64 * 0.0254),
        _ => None,
    }
}
