//! Environmental influences: global tone, shadow, ridge inversion, camera
//! noise and dirt.

use crate::capture::blur_gaussian;
use crate::error::{ensure_dims, Error, Result};
use crate::raster::{ColorImage, GrayImage, Pixel, Rgb};
use crate::ridge::ShapeMask;
use crate::rng::Stream;
use crate::subject::{sample_interior_point, RidgeChannel};

pub const DEFAULT_LIT_THRESHOLD: f64 = 0.55;
pub const DEFAULT_TRANSITION_BAND: f64 = 8.0;
/// Normalized projection range over which the shadow ramps in.
const SHADOW_EDGES: (f64, f64) = (-0.3, 0.6);
/// Ridge brightening gain at full strength in lit regions.
const INVERSION_GAIN: f64 = 1.0;
/// Ridge darkening gain at full strength in shadowed regions.
const SHADOW_RIDGE_GAIN: f64 = 0.25;

fn smoothstep(e0: f64, e1: f64, x: f64) -> f64 {
    let t = ((x - e0) / (e1 - e0)).clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Rotation about the grey axis by `angle` radians.
fn hue_rotation(angle: f64) -> [[f64; 3]; 3] {
    let (s, c) = angle.sin_cos();
    let k = 1.0 / 3.0_f64.sqrt();
    let t = 1.0 - c;
    let d = c + t / 3.0;
    let p = t / 3.0 - s * k;
    let q = t / 3.0 + s * k;
    [[d, p, q], [q, d, p], [p, q, d]]
}

/// Draws one gain and one hue angle (fraction of a full turn) and applies
/// them to every pixel. Black stays black, so the background is unaffected.
pub fn apply_global_tone(img: &ColorImage, rng: &mut Stream, hue_shift_max: f64, gain_range: (f64, f64)) -> Result<ColorImage> {
    if !(0.0..=0.1).contains(&hue_shift_max) {
        return Err(Error::param("hue_shift_max", "must lie in [0, 0.1]"));
    }
    if !(0.7 <= gain_range.0 && gain_range.0 <= gain_range.1 && gain_range.1 <= 1.3) {
        return Err(Error::param("gain_range", "must be a subrange of [0.7, 1.3]"));
    }
    let gain = rng.range(gain_range.0, gain_range.1);
    let hue = rng.range(-hue_shift_max, hue_shift_max);
    if gain == 1.0 && hue == 0.0 {
        return Ok(img.clone());
    }
    let m = hue_rotation(std::f64::consts::TAU * hue);
    Ok(img.map(|p| {
        Rgb(m.map(|row| (gain * (row[0] * p.0[0] + row[1] * p.0[1] + row[2] * p.0[2])).clamp(0.0, 1.0)))
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowMask {
    weights: GrayImage,
    light_direction: (f64, f64),
}

impl ShadowMask {
    pub fn weights(&self) -> &GrayImage {
        &self.weights
    }

    pub fn light_direction(&self) -> (f64, f64) {
        self.light_direction
    }

    pub fn dims(&self) -> (usize, usize) {
        self.weights.dims()
    }

    /// A caller-supplied lighting map, e.g. for controlled experiments.
    pub fn from_weights(weights: GrayImage, light_direction: (f64, f64)) -> Result<Self> {
        if weights.pixels().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::param("shadow weights", "must lie in [0, 1]"));
        }
        Ok(Self {
            weights,
            light_direction: unit(light_direction)?,
        })
    }
}

fn unit(d: (f64, f64)) -> Result<(f64, f64)> {
    let n = d.0.hypot(d.1);
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::param("light_direction", "must be a nonzero finite vector"));
    }
    Ok((d.0 / n, d.1 / n))
}

/// Darkens the side facing away from the light. The ramp is a smoothstep of
/// the centroid-relative projection onto the light direction, normalized by
/// the silhouette radius.
pub fn build_shadow_mask(shape: &ShapeMask, light_direction: (f64, f64), depth: f64) -> Result<ShadowMask> {
    if !(0.0..=1.0).contains(&depth) {
        return Err(Error::param("depth", "must lie in [0, 1]"));
    }
    let (lx, ly) = unit(light_direction)?;
    let (w, h) = shape.dims();
    let (cx, cy) = shape.centroid();
    let mut extent: f64 = 1.0;
    for y in 0..h {
        for x in 0..w {
            if shape.in_support(x, y) {
                extent = extent.max((x as f64 - cx).hypot(y as f64 - cy));
            }
        }
    }
    let weights = GrayImage::from_fn(w, h, |x, y| {
        let t = ((x as f64 - cx) * lx + (y as f64 - cy) * ly) / extent;
        1.0 - depth * smoothstep(SHADOW_EDGES.0, SHADOW_EDGES.1, -t)
    });
    Ok(ShadowMask {
        weights,
        light_direction: (lx, ly),
    })
}

pub fn apply_shadow(img: &ColorImage, shadow: &ShadowMask, strength: f64) -> Result<ColorImage> {
    ensure_dims(img.dims(), shadow.dims())?;
    if !(0.0..=1.0).contains(&strength) {
        return Err(Error::param("strength", "must lie in [0, 1]"));
    }
    if strength == 0.0 {
        return Ok(img.clone());
    }
    img.zip_map(&shadow.weights, |p, w| p.scale(1.0 - strength * (1.0 - w)))
}

/// Smoothed polarity map in `[-1, 1]`: +1 where lit, -1 where shadowed.
pub fn inversion_sign(shadow: &ShadowMask, lit_threshold: f64, band: f64) -> GrayImage {
    let hard = shadow.weights.map(|w| if w > lit_threshold { 1.0 } else { -1.0 });
    blur_gaussian(&hard, band / 4.0)
}

/// Brightens ridges in lit regions and darkens them in shadow, scaled by
/// the ridge depth of the carried ridge channel.
pub fn apply_ridge_inversion(
    img: &ColorImage,
    ridge: &RidgeChannel,
    shadow: &ShadowMask,
    inversion_strength: f64,
    lit_threshold: f64,
    band: f64,
) -> Result<ColorImage> {
    ensure_dims(img.dims(), ridge.image().dims())?;
    ensure_dims(img.dims(), shadow.dims())?;
    if !(0.0..=1.0).contains(&inversion_strength) {
        return Err(Error::param("inversion_strength", "must lie in [0, 1]"));
    }
    if !(0.0..=1.0).contains(&lit_threshold) {
        return Err(Error::param("lit_threshold", "must lie in [0, 1]"));
    }
    if !(band >= 0.0) {
        return Err(Error::param("band", "must be non-negative"));
    }
    if inversion_strength == 0.0 {
        return Ok(img.clone());
    }
    let sign = inversion_sign(shadow, lit_threshold, band);
    let lit_gain = INVERSION_GAIN * inversion_strength;
    let dark_gain = SHADOW_RIDGE_GAIN * inversion_strength;
    let (w, h) = img.dims();
    let r = ridge.image();
    Ok(ColorImage::from_fn(w, h, |x, y| {
        let depth = 1.0 - r.get(x, y);
        let s = sign.get(x, y);
        let factor = if s >= 0.0 {
            1.0 + s * lit_gain * depth
        } else {
            1.0 / (1.0 - s * dark_gain * depth)
        };
        img.get(x, y).map(|v| (v * factor).clamp(0.0, 1.0))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IlluminationLevel(f64);

impl IlluminationLevel {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::param("illumination", "must lie in [0, 1]"));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

pub fn noise_sigma(illumination: IlluminationLevel, sigma_at_dark: f64) -> f64 {
    sigma_at_dark * (1.0 - illumination.0)
}

/// Additive Gaussian noise; each (pixel, channel) draw is addressed by its
/// index, so the result does not depend on evaluation order.
pub fn apply_camera_noise(img: &ColorImage, rng: &Stream, illumination: IlluminationLevel, sigma_at_dark: f64) -> Result<ColorImage> {
    if !(sigma_at_dark >= 0.0) {
        return Err(Error::param("sigma_at_dark", "must be non-negative"));
    }
    let sigma = noise_sigma(illumination, sigma_at_dark);
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let (w, h) = img.dims();
    Ok(ColorImage::from_fn(w, h, |x, y| {
        let base = 3 * (y * w + x) as u64;
        let p = img.get(x, y);
        Rgb([0, 1, 2].map(|c| (p.0[c] + sigma * rng.counter_normal(base + c as u64)).clamp(0.0, 1.0)))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirtParams {
    pub particle_count_range: (u32, u32),
    pub particle_radius_range: (f64, f64),
    pub darkness: f64,
}

impl DirtParams {
    pub fn validate(&self) -> Result<()> {
        let (c0, c1) = self.particle_count_range;
        let (r0, r1) = self.particle_radius_range;
        if c0 > c1 {
            return Err(Error::param("particle_count_range", "empty range"));
        }
        if !(r0 > 0.0 && r0 <= r1) {
            return Err(Error::param("particle_radius_range", "must be positive and nonempty"));
        }
        if !(0.0..=1.0).contains(&self.darkness) {
            return Err(Error::param("darkness", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Particle {
    pub center: (usize, usize),
    pub radius: f64,
}

/// Particle placement only; centers are drawn uniformly over the support.
pub fn sample_particles(shape: &ShapeMask, rng: &mut Stream, params: &DirtParams) -> Result<Vec<Particle>> {
    params.validate()?;
    let (c0, c1) = params.particle_count_range;
    let count = rng.range_u32(c0, c1);
    (0..count)
        .map(|_| {
            let radius = rng.range(params.particle_radius_range.0, params.particle_radius_range.1);
            let center = sample_interior_point(shape, rng, 0.0)?;
            Ok(Particle { center, radius })
        })
        .collect()
}

/// Soft dark discs: full darkness over the inner half radius, smooth falloff
/// to zero at the rim.
pub fn apply_dirt(img: &ColorImage, shape: &ShapeMask, rng: &mut Stream, params: &DirtParams) -> Result<ColorImage> {
    ensure_dims(img.dims(), shape.dims())?;
    let particles = sample_particles(shape, rng, params)?;
    if particles.is_empty() {
        return Ok(img.clone());
    }
    let mut out = img.clone();
    let (w, h) = img.dims();
    for p in &particles {
        let r = p.radius;
        let reach = r.ceil() as isize;
        let (cx, cy) = (p.center.0 as isize, p.center.1 as isize);
        for y in (cy - reach).max(0)..=(cy + reach).min(h as isize - 1) {
            for x in (cx - reach).max(0)..=(cx + reach).min(w as isize - 1) {
                let d = ((x - cx) as f64).hypot((y - cy) as f64);
                let cover = 1.0 - smoothstep(0.5 * r, r, d);
                if cover > 0.0 {
                    let (ux, uy) = (x as usize, y as usize);
                    out.set(ux, uy, out.get(ux, uy).scale(1.0 - params.darkness * cover));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ridge::shape_mask_for_dims;

    fn shape() -> ShapeMask {
        shape_mask_for_dims((120, 160), 4, 2.0).unwrap()
    }

    #[test]
    fn hue_rotation_preserves_grey() {
        let m = hue_rotation(0.7);
        for row in m {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn global_tone_gain() {
        let img = ColorImage::new(8, 8, Rgb::splat(0.5));
        let mut rng = Stream::new(1);
        let out = apply_global_tone(&img, &mut rng, 0.0, (0.8, 0.8)).unwrap();
        for p in out.pixels() {
            for c in p.0 {
                assert!((c - 0.4).abs() < 1e-12);
            }
        }
        assert_eq!(apply_global_tone(&img, &mut rng, 0.0, (1.0, 1.0)).unwrap(), img);
    }

    #[test]
    fn shadow_depth_zero_is_all_ones() {
        let s = build_shadow_mask(&shape(), (1.0, 0.0), 0.0).unwrap();
        assert!(s.weights().pixels().iter().all(|&w| w == 1.0));
    }

    #[test]
    fn shadow_mirror_symmetry() {
        let sh = shape();
        let s = build_shadow_mask(&sh, (1.0, 0.0), 0.8).unwrap();
        let (w, h) = sh.dims();
        for y in 0..h {
            for x in w / 2..w {
                assert!(s.weights().get(x, y) >= s.weights().get(w - 1 - x, y) - 1e-12);
            }
        }
    }

    #[test]
    fn full_shadow_is_black() {
        let img = ColorImage::new(4, 4, Rgb::splat(0.8));
        let s = ShadowMask::from_weights(GrayImage::new(4, 4, 0.0), (1.0, 0.0)).unwrap();
        let out = apply_shadow(&img, &s, 1.0).unwrap();
        assert!(out.pixels().iter().all(|p| *p == Rgb::BLACK));
    }

    #[test]
    fn noise_identity_at_full_light() {
        let img = ColorImage::new(8, 8, Rgb::splat(0.3));
        let out = apply_camera_noise(&img, &Stream::new(3), IlluminationLevel::new(1.0).unwrap(), 0.2).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn dirt_center_black() {
        let sh = shape();
        let img = ColorImage::new(120, 160, Rgb::splat(0.7));
        let params = DirtParams {
            particle_count_range: (1, 1),
            particle_radius_range: (3.0, 3.0),
            darkness: 1.0,
        };
        let mut a = Stream::new(11);
        let mut b = a.clone();
        let out = apply_dirt(&img, &sh, &mut a, &params).unwrap();
        let p = sample_particles(&sh, &mut b, &params).unwrap();
        let (x, y) = p[0].center;
        assert_eq!(out.get(x, y).luma(), 0.0);
    }
}
