//! Subject-related appearance: worn low-contrast regions, skin colour and
//! skin-tone variation.

use std::path::Path;

use crate::capture::blur_gaussian;
use crate::error::{ensure_dims, Error, Result};
use crate::raster::{ColorImage, GrayImage, Pixel, Raster, Rgb};
use crate::ridge::{RidgeMap, ShapeMask};
use crate::rng::Stream;

const DEFAULT_PALETTE: &str = include_str!("../data/skin_palette.txt");

/// Default blur radius inside low-contrast regions, in pixels.
pub const LOW_CONTRAST_SIGMA: f64 = 4.0;
pub const MAX_TONE_AMPLITUDE: f64 = 0.3;
pub const MIN_TONE_SCALE: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkinColor(Rgb);

impl SkinColor {
    pub fn new(r: f64, g: f64, b: f64) -> Result<Self> {
        let c = Rgb::new(r, g, b);
        if c.0.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::param("skin colour", "channels must lie in [0, 1]"));
        }
        let l = c.luma();
        if !(0.25..=0.9).contains(&l) {
            return Err(Error::param("skin colour", format!("luminance {l:.3} outside [0.25, 0.9]")));
        }
        Ok(Self(c))
    }

    pub fn rgb(&self) -> Rgb {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkinPalette {
    entries: Vec<SkinColor>,
}

impl SkinPalette {
    pub fn new(entries: Vec<SkinColor>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::param("palette", "must contain at least one colour"));
        }
        for (i, a) in entries.iter().enumerate() {
            if entries[i + 1..].contains(a) {
                return Err(Error::param("palette", "entries must be pairwise distinct"));
            }
        }
        Ok(Self { entries })
    }

    /// Plain-text table: one colour per line as three floats, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let values: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::ConfigInvalid(format!("palette line {}: {e}", n + 1)))?;
            if values.len() != 3 {
                return Err(Error::ConfigInvalid(format!(
                    "palette line {}: expected 3 values, found {}",
                    n + 1,
                    values.len()
                )));
            }
            entries.push(SkinColor::new(values[0], values[1], values[2])?);
        }
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::FileNotFound(path.to_path_buf()));
        }
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn entries(&self) -> &[SkinColor] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for SkinPalette {
    fn default() -> Self {
        Self::parse(DEFAULT_PALETTE).expect("bundled palette is valid")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Blob {
    pub center: (f64, f64),
    pub radius: f64,
}

/// Smooth radial bumps, each fully inside the shape support.
#[derive(Clone, Debug, PartialEq)]
pub struct BlobMask {
    weights: GrayImage,
    blobs: Vec<Blob>,
}

impl BlobMask {
    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            weights: GrayImage::new(width, height, 0.0),
            blobs: Vec::new(),
        }
    }

    /// Wraps blended weights; blob bookkeeping is lost.
    pub fn from_weights(weights: GrayImage) -> Self {
        Self {
            weights,
            blobs: Vec::new(),
        }
    }

    pub fn weights(&self) -> &GrayImage {
        &self.weights
    }

    pub fn blobs(&self) -> &[Blob] {
        &self.blobs
    }

    pub fn blob_count(&self) -> usize {
        self.blobs.len()
    }
}

fn bump(d: f64, r: f64) -> f64 {
    if d >= r {
        0.0
    } else {
        let t = 1.0 - (d / r) * (d / r);
        t * t
    }
}

/// Draws a uniform point whose interior distance is at least `min_depth`.
pub(crate) fn sample_interior_point(shape: &ShapeMask, rng: &mut Stream, min_depth: f64) -> Result<(usize, usize)> {
    let (w, h) = shape.dims();
    for _ in 0..4096 {
        let x = rng.index(w);
        let y = rng.index(h);
        if shape.in_support(x, y) && shape.distance().get(x, y) >= min_depth {
            return Ok((x, y));
        }
    }
    Err(Error::EmptySupport)
}

pub fn build_low_contrast_mask(
    shape: &ShapeMask,
    rng: &mut Stream,
    count_range: (u32, u32),
    radius_range: (f64, f64),
) -> Result<BlobMask> {
    if count_range.0 > count_range.1 {
        return Err(Error::param("count_range", "empty range"));
    }
    if !(radius_range.0 > 0.0 && radius_range.0 <= radius_range.1) {
        return Err(Error::param("radius_range", "must be positive and nonempty"));
    }
    let (w, h) = shape.dims();
    let count = rng.range_u32(count_range.0, count_range.1);
    // small silhouettes cannot hold large blobs; cap at half the deepest point
    let max_radius = 0.5 * shape.max_distance();
    let mut blobs = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let radius = rng.range(radius_range.0, radius_range.1).min(max_radius);
        let (x, y) = sample_interior_point(shape, rng, radius)?;
        blobs.push(Blob {
            center: (x as f64, y as f64),
            radius,
        });
    }
    let weights = GrayImage::from_fn(w, h, |x, y| {
        blobs
            .iter()
            .map(|b| bump((x as f64 - b.center.0).hypot(y as f64 - b.center.1), b.radius))
            .fold(0.0, f64::max)
    });
    Ok(BlobMask { weights, blobs })
}

/// Blends towards a blurred copy with weight `strength * mask`.
pub fn apply_low_contrast<P: Pixel>(img: &Raster<P>, mask: &BlobMask, strength: f64, sigma: f64) -> Result<Raster<P>> {
    ensure_dims(img.dims(), mask.weights.dims())?;
    if !(0.0..=1.0).contains(&strength) {
        return Err(Error::param("strength", "must lie in [0, 1]"));
    }
    if strength == 0.0 || mask.weights.pixels().iter().all(|&v| v == 0.0) {
        return Ok(img.clone());
    }
    let blurred = blur_gaussian(img, sigma);
    let (w, h) = img.dims();
    Ok(Raster::from_fn(w, h, |x, y| {
        let t = strength * mask.weights.get(x, y);
        if t == 0.0 {
            img.get(x, y)
        } else {
            img.get(x, y).lerp(blurred.get(x, y), t)
        }
    }))
}

pub fn sample_skin_color(rng: &mut Stream, palette: &SkinPalette) -> SkinColor {
    palette.entries[rng.index(palette.len())]
}

/// The pre-colour ridge intensity, carried unchanged for ridge inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct RidgeChannel(RidgeMap);

impl RidgeChannel {
    pub fn ridge(&self) -> &RidgeMap {
        &self.0
    }

    pub fn image(&self) -> &GrayImage {
        self.0.image()
    }
}

/// Renders the ridge map in skin colour. Ridges are the colour darkened by
/// `ridge_depth`; pixels outside the support are black.
pub fn colorize(ridge: &RidgeMap, shape: &ShapeMask, color: SkinColor, ridge_depth: f64) -> Result<(ColorImage, RidgeChannel)> {
    ensure_dims(shape.dims(), ridge.dims())?;
    if !(0.0..=1.0).contains(&ridge_depth) {
        return Err(Error::param("ridge_depth", "must lie in [0, 1]"));
    }
    let c = color.rgb();
    let img = ridge.image().zip_map(shape.weights(), |v, m| {
        if m > 0.0 {
            c.scale(1.0 - ridge_depth * (1.0 - v))
        } else {
            Rgb::BLACK
        }
    })?;
    Ok((img, RidgeChannel(ridge.clone())))
}

/// Zero-mean, band-limited field in `[-1, 1]` over the support with
/// correlation length about `scale`: white noise on a coarse lattice,
/// smoothed and bilinearly upsampled.
pub fn band_limited_field(shape: &ShapeMask, rng: &mut Stream, scale: f64) -> GrayImage {
    let (w, h) = shape.dims();
    let spacing = scale / 2.0;
    let cw = (w as f64 / spacing).ceil() as usize + 4;
    let ch = (h as f64 / spacing).ceil() as usize + 4;
    let coarse: Vec<f64> = (0..cw * ch).map(|_| rng.normal()).collect();
    let coarse = blur_gaussian(&GrayImage::from_vec(cw, ch, coarse), 1.0);
    let field = GrayImage::from_fn(w, h, |x, y| coarse.sample_bilinear(x as f64 / spacing + 2.0, y as f64 / spacing + 2.0));

    let (mut sum, mut n) = (0.0, 0usize);
    for (v, m) in field.pixels().iter().zip(shape.weights().pixels()) {
        if *m > 0.0 {
            sum += v;
            n += 1;
        }
    }
    let mean = sum / n.max(1) as f64;
    let peak = field
        .pixels()
        .iter()
        .zip(shape.weights().pixels())
        .filter(|(_, m)| **m > 0.0)
        .map(|(v, _)| (v - mean).abs())
        .fold(0.0, f64::max);
    let norm = if peak > 0.0 { 1.0 / peak } else { 0.0 };
    field.map(|v| (v - mean) * norm)
}

/// Slight local brightness and colour variation inside the finger.
pub fn apply_tone_variation(img: &ColorImage, shape: &ShapeMask, rng: &mut Stream, amplitude: f64, scale: f64) -> Result<ColorImage> {
    ensure_dims(shape.dims(), img.dims())?;
    if amplitude > MAX_TONE_AMPLITUDE {
        return Err(Error::AmplitudeTooLarge(amplitude));
    }
    if !(amplitude >= 0.0) {
        return Err(Error::param("amplitude", "must be non-negative"));
    }
    if !(scale >= MIN_TONE_SCALE) {
        return Err(Error::param("scale", "must be at least 8 px"));
    }
    // draw the fields even at zero amplitude so stream consumption is stable
    let fields: Vec<GrayImage> = (0..3).map(|_| band_limited_field(shape, rng, scale)).collect();
    if amplitude == 0.0 {
        return Ok(img.clone());
    }
    let (w, h) = img.dims();
    Ok(ColorImage::from_fn(w, h, |x, y| {
        let m = shape.weight(x, y);
        let p = img.get(x, y);
        if m == 0.0 {
            return p;
        }
        Rgb([0, 1, 2].map(|c| (p.0[c] + amplitude * m * fields[c].get(x, y)).clamp(0.0, 1.0)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ridge::shape_mask_for_dims;

    fn shape() -> ShapeMask {
        shape_mask_for_dims((160, 200), 4, 2.0).unwrap()
    }

    #[test]
    fn default_palette_has_25_valid_entries() {
        let p = SkinPalette::default();
        assert_eq!(p.len(), 25);
    }

    #[test]
    fn palette_parse_errors() {
        assert!(SkinPalette::parse("0.5 0.5\n").is_err());
        assert!(SkinPalette::parse("# only a comment\n").is_err());
        assert!(SkinPalette::parse("0.5 0.5 0.5\n0.5 0.5 0.5\n").is_err());
        assert!(SkinPalette::parse("0.05 0.05 0.05\n").is_err());
        let p = SkinPalette::parse("0.6 0.5 0.4 # tan\n\n0.8 0.7 0.6\n").unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn empty_count_gives_empty_mask() {
        let mut rng = Stream::new(1);
        let m = build_low_contrast_mask(&shape(), &mut rng, (0, 0), (10.0, 20.0)).unwrap();
        assert_eq!(m.blob_count(), 0);
        assert!(m.weights().pixels().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn huge_blobs_are_capped_to_the_silhouette() {
        let s = shape();
        let mut rng = Stream::new(1);
        let m = build_low_contrast_mask(&s, &mut rng, (2, 2), (500.0, 600.0)).unwrap();
        assert_eq!(m.blob_count(), 2);
        assert!(m.blobs().iter().all(|b| b.radius <= 0.5 * s.max_distance()));
    }

    #[test]
    fn vanishing_support_is_reported() {
        let mut weights = GrayImage::new(400, 400, 0.0);
        weights.set(200, 200, 1.0);
        let s = ShapeMask::from_weights(weights).unwrap();
        let mut rng = Stream::new(1);
        let err = build_low_contrast_mask(&s, &mut rng, (1, 1), (10.0, 20.0)).unwrap_err();
        assert!(matches!(err, Error::EmptySupport));
    }

    #[test]
    fn low_contrast_identities() {
        let s = shape();
        let img = GrayImage::from_fn(160, 200, |x, _| if x % 8 < 4 { 0.0 } else { 1.0 });
        let mut rng = Stream::new(4);
        let m = build_low_contrast_mask(&s, &mut rng, (3, 3), (10.0, 20.0)).unwrap();
        assert_eq!(apply_low_contrast(&img, &m, 0.0, 4.0).unwrap(), img);
        let empty = BlobMask::empty(160, 200);
        assert_eq!(apply_low_contrast(&img, &empty, 1.0, 4.0).unwrap(), img);
    }

    #[test]
    fn single_entry_palette() {
        let c = SkinColor::new(0.7, 0.5, 0.4).unwrap();
        let p = SkinPalette::new(vec![c]).unwrap();
        let mut rng = Stream::new(9);
        for _ in 0..10 {
            assert_eq!(sample_skin_color(&mut rng, &p), c);
        }
    }

    #[test]
    fn tone_variation_preconditions() {
        let s = shape();
        let img = ColorImage::new(160, 200, Rgb::splat(0.5));
        let mut rng = Stream::new(2);
        assert!(matches!(
            apply_tone_variation(&img, &s, &mut rng, 0.31, 16.0),
            Err(Error::AmplitudeTooLarge(_))
        ));
        assert!(apply_tone_variation(&img, &s, &mut rng, 0.1, 4.0).is_err());
        assert_eq!(apply_tone_variation(&img, &s, &mut rng, 0.0, 16.0).unwrap(), img);
    }

    #[test]
    fn colorize_depth_zero_is_flat() {
        let s = shape();
        let ridge = RidgeMap::new(GrayImage::from_fn(160, 200, |x, _| (x % 9) as f64 / 8.0), 500.0).unwrap();
        let c = SkinColor::new(0.8, 0.6, 0.5).unwrap();
        let (img, channel) = colorize(&ridge, &s, c, 0.0).unwrap();
        for y in 0..200 {
            for x in 0..160 {
                if s.in_support(x, y) {
                    assert_eq!(img.get(x, y), c.rgb());
                } else {
                    assert_eq!(img.get(x, y), Rgb::BLACK);
                }
            }
        }
        assert_eq!(channel.ridge(), &ridge);
    }
}
