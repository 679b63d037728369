//! Deformation fields and image warping.
//!
//! Fields use backward mapping: output pixel `p` samples the source at
//! `p + displacement(p)` with bilinear interpolation. A deformation vector
//! describes the forward motion of the pattern, so its splat contributes the
//! opposite displacement.

use crate::error::{ensure_dims, Error, Result};
use crate::raster::{GrayImage, Pixel, Raster};
use crate::ridge::{RidgeMap, ShapeMask};

/// Largest allowed displacement difference between 4-neighbours, in pixels.
pub const SMOOTHNESS_LIMIT: f64 = 1.5;
/// Default magnitude cap as a fraction of `min(width, height)`.
pub const FIELD_CAP_FRACTION: f64 = 0.25;
pub const MAX_ROLL_DEG: f64 = 7.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformationVector {
    pub anchor: (f64, f64),
    pub direction: (f64, f64),
    pub length: f64,
    pub influence_radius: f64,
}

impl DeformationVector {
    pub fn new(anchor: (f64, f64), direction: (f64, f64), length: f64, influence_radius: f64) -> Result<Self> {
        let norm = direction.0.hypot(direction.1);
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::param("direction", format!("norm {norm} is not 1")));
        }
        if !(length >= 0.0) {
            return Err(Error::param("length", "must be non-negative"));
        }
        if !(influence_radius > 0.0) {
            return Err(Error::param("influence_radius", "must be positive"));
        }
        Ok(Self {
            anchor,
            direction,
            length,
            influence_radius,
        })
    }

    /// Smoothstep falloff: 1 at the anchor, 0 at `influence_radius`.
    pub fn weight_at(&self, x: f64, y: f64) -> f64 {
        let r = (x - self.anchor.0).hypot(y - self.anchor.1);
        let t = (1.0 - r / self.influence_radius).clamp(0.0, 1.0);
        t * t * (3.0 - 2.0 * t)
    }
}

/// Dense per-pixel displacement in pixels.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationField {
    dx: GrayImage,
    dy: GrayImage,
}

impl DeformationField {
    pub fn zero(width: usize, height: usize) -> Self {
        Self {
            dx: GrayImage::new(width, height, 0.0),
            dy: GrayImage::new(width, height, 0.0),
        }
    }

    pub fn constant(width: usize, height: usize, d: (f64, f64)) -> Self {
        Self {
            dx: GrayImage::new(width, height, d.0),
            dy: GrayImage::new(width, height, d.1),
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> (f64, f64) + Sync) -> Self {
        Self {
            dx: GrayImage::from_fn(width, height, |x, y| f(x, y).0),
            dy: GrayImage::from_fn(width, height, |x, y| f(x, y).1),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dx.dims()
    }

    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        (self.dx.get(x, y), self.dy.get(x, y))
    }

    pub fn dx(&self) -> &GrayImage {
        &self.dx
    }

    pub fn dy(&self) -> &GrayImage {
        &self.dy
    }

    /// Bilinear sample, clamped at the borders.
    pub fn sample(&self, x: f64, y: f64) -> (f64, f64) {
        (self.dx.sample_bilinear(x, y), self.dy.sample_bilinear(x, y))
    }

    pub fn is_zero(&self) -> bool {
        self.dx.pixels().iter().chain(self.dy.pixels()).all(|&v| v == 0.0)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.dx
            .pixels()
            .iter()
            .zip(self.dy.pixels())
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }

    /// Largest `|d(p) - d(q)|` over horizontally and vertically adjacent pixels.
    pub fn max_neighbor_step(&self) -> f64 {
        let (w, h) = self.dims();
        let mut worst = 0.0f64;
        for y in 0..h {
            for x in 0..w {
                let p = self.at(x, y);
                if x + 1 < w {
                    let q = self.at(x + 1, y);
                    worst = worst.max((p.0 - q.0).hypot(p.1 - q.1));
                }
                if y + 1 < h {
                    let q = self.at(x, y + 1);
                    worst = worst.max((p.0 - q.0).hypot(p.1 - q.1));
                }
            }
        }
        worst
    }

    pub fn default_cap(&self) -> f64 {
        let (w, h) = self.dims();
        FIELD_CAP_FRACTION * w.min(h) as f64
    }

    /// Checks finiteness, the magnitude cap and the fold-over bound.
    pub fn validate(&self, cap: f64) -> Result<()> {
        if self.dx.pixels().iter().chain(self.dy.pixels()).any(|v| !v.is_finite()) {
            return Err(Error::param("displacement", "must be finite"));
        }
        let max = self.max_magnitude();
        if max > cap {
            return Err(Error::param("displacement", format!("magnitude {max:.2} exceeds cap {cap:.2}")));
        }
        let step = self.max_neighbor_step();
        if step > SMOOTHNESS_LIMIT {
            return Err(Error::SmoothnessViolation {
                step,
                limit: SMOOTHNESS_LIMIT,
            });
        }
        Ok(())
    }
}

/// Layout constants of the contactless deformation, as fractions of the
/// silhouette width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactlessLayout {
    /// Contour length per vector; at least `min_vectors` are placed.
    pub spacing: f64,
    pub min_vectors: usize,
    pub side_length: f64,
    pub top_boost: f64,
    pub offset: f64,
    pub influence: f64,
}

impl Default for ContactlessLayout {
    fn default() -> Self {
        Self {
            spacing: 24.0,
            min_vectors: 16,
            side_length: 0.04,
            top_boost: 1.8,
            offset: 0.03,
            influence: 0.3,
        }
    }
}

/// Vectors placed equally spaced on the silhouette outline, pointing inward.
pub fn contactless_vectors(shape: &ShapeMask, layout: &ContactlessLayout) -> Vec<DeformationVector> {
    let (w, h) = shape.dims();
    let (cx, cy) = shape.centroid();
    let mut boundary = Vec::new();
    let (mut min_x, mut max_x, mut min_y) = (usize::MAX, 0usize, usize::MAX);
    for y in 0..h {
        for x in 0..w {
            if !shape.in_support(x, y) {
                continue;
            }
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            let edge = x == 0
                || y == 0
                || x + 1 == w
                || y + 1 == h
                || !shape.in_support(x - 1, y)
                || !shape.in_support(x + 1, y)
                || !shape.in_support(x, y - 1)
                || !shape.in_support(x, y + 1);
            if edge {
                boundary.push((x as f64, y as f64));
            }
        }
    }
    boundary.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.total_cmp(&tb).then(a.0.total_cmp(&b.0)).then(a.1.total_cmp(&b.1))
    });
    let n_b = boundary.len();
    let mut cumulative = Vec::with_capacity(n_b + 1);
    cumulative.push(0.0);
    for i in 0..n_b {
        let a = boundary[i];
        let b = boundary[(i + 1) % n_b];
        let last = *cumulative.last().unwrap();
        cumulative.push(last + (a.0 - b.0).hypot(a.1 - b.1));
    }
    let perimeter = cumulative[n_b];
    let count = ((perimeter / layout.spacing).round() as usize).max(layout.min_vectors);

    let shape_width = (max_x - min_x + 1) as f64;
    let cap_bottom = min_y as f64 + 0.5 * shape_width;
    let side_len = layout.side_length * shape_width;
    let offset = layout.offset * shape_width;
    let radius = layout.influence * shape_width;

    let mut seg = 0;
    (0..count)
        .map(|k| {
            let s = perimeter * k as f64 / count as f64;
            while cumulative[seg + 1] < s {
                seg += 1;
            }
            let a = boundary[seg];
            let b = boundary[(seg + 1) % n_b];
            let span = cumulative[seg + 1] - cumulative[seg];
            let t = if span > 0.0 { (s - cumulative[seg]) / span } else { 0.0 };
            let p = (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
            let (ix, iy) = (cx - p.0, cy - p.1);
            let n = ix.hypot(iy).max(1e-9);
            let dir = (ix / n, iy / n);
            let length = if p.1 < cap_bottom {
                side_len * layout.top_boost
            } else {
                side_len
            };
            DeformationVector {
                anchor: (p.0 - dir.0 * offset, p.1 - dir.1 * offset),
                direction: dir,
                length,
                influence_radius: radius,
            }
        })
        .collect()
}

/// Splats vectors into a dense backward field. Overlapping contributions are
/// averaged once their total weight exceeds one.
pub fn splat_vectors(dims: (usize, usize), vectors: &[DeformationVector], strength: f64) -> DeformationField {
    let (w, h) = dims;
    let pairs = Raster::from_fn(w, h, |x, y| {
        let (x, y) = (x as f64, y as f64);
        let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
        for v in vectors {
            let wt = v.weight_at(x, y);
            if wt > 0.0 {
                sx -= wt * v.direction.0 * v.length;
                sy -= wt * v.direction.1 * v.length;
                sw += wt;
            }
        }
        let norm = sw.max(1.0);
        crate::raster::Rgb::new(strength * sx / norm, strength * sy / norm, 0.0)
    });
    DeformationField {
        dx: pairs.map(|p| p.0[0]),
        dy: pairs.map(|p| p.0[1]),
    }
}

/// Contact-to-contactless deformation for a fingertip silhouette.
pub fn build_contactless_field(dims: (usize, usize), shape: &ShapeMask, strength: f64) -> Result<DeformationField> {
    build_contactless_field_with(dims, shape, strength, &ContactlessLayout::default())
}

pub fn build_contactless_field_with(
    dims: (usize, usize),
    shape: &ShapeMask,
    strength: f64,
    layout: &ContactlessLayout,
) -> Result<DeformationField> {
    ensure_dims(dims, shape.dims())?;
    if !(0.0..=1.0).contains(&strength) {
        return Err(Error::param("strength", "must lie in [0, 1]"));
    }
    if strength == 0.0 {
        return Ok(DeformationField::zero(dims.0, dims.1));
    }
    let vectors = contactless_vectors(shape, layout);
    let field = splat_vectors(dims, &vectors, strength);
    field.validate(field.default_cap())?;
    Ok(field)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RollingSpec {
    angle_deg: f64,
}

impl RollingSpec {
    pub fn new(angle_deg: f64) -> Result<Self> {
        if !(angle_deg.abs() <= MAX_ROLL_DEG) {
            return Err(Error::AngleOutOfRange(angle_deg));
        }
        Ok(Self { angle_deg })
    }

    pub fn angle_deg(&self) -> f64 {
        self.angle_deg
    }
}

/// Lateral shift at the finger centre for a 7 degree roll, as a fraction of
/// the canvas width.
pub const ROLL_SHIFT_FRACTION: f64 = 0.04;

/// Horizontal rolling deformation: a parabolic shift profile stretches the
/// side facing the roll and compresses the other. Linear in the angle.
pub fn build_rolling_field(dims: (usize, usize), roll: RollingSpec) -> Result<DeformationField> {
    let (w, h) = dims;
    if roll.angle_deg == 0.0 {
        return Ok(DeformationField::zero(w, h));
    }
    let amplitude = roll.angle_deg / MAX_ROLL_DEG * ROLL_SHIFT_FRACTION * w as f64;
    let half = (w as f64 - 1.0) / 2.0;
    let field = DeformationField::from_fn(w, h, |x, _| {
        let u = (x as f64 - half) / half;
        (amplitude * (1.0 - u * u), 0.0)
    });
    field.validate(field.default_cap())?;
    Ok(field)
}

/// `result(p) = a(p) + b(p + a(p))`: warping with the result equals warping
/// with `b` first and then with `a`.
pub fn compose_fields(a: &DeformationField, b: &DeformationField) -> Result<DeformationField> {
    ensure_dims(a.dims(), b.dims())?;
    let (w, h) = a.dims();
    let composed = DeformationField::from_fn(w, h, |x, y| {
        let (ax, ay) = a.at(x, y);
        let (bx, by) = b.sample(x as f64 + ax, y as f64 + ay);
        (ax + bx, ay + by)
    });
    composed.validate(f64::INFINITY)?;
    Ok(composed)
}

pub trait Warp: Sized {
    fn warp(&self, field: &DeformationField) -> Result<Self>;
}

impl<P: Pixel> Warp for Raster<P> {
    fn warp(&self, field: &DeformationField) -> Result<Self> {
        ensure_dims(self.dims(), field.dims())?;
        let (w, h) = self.dims();
        Ok(Raster::from_fn(w, h, |x, y| {
            let (dx, dy) = field.at(x, y);
            self.sample_bilinear(x as f64 + dx, y as f64 + dy)
        }))
    }
}

impl Warp for RidgeMap {
    fn warp(&self, field: &DeformationField) -> Result<Self> {
        Ok(self.with_image(self.image().warp(field)?))
    }
}

/// Backward bilinear warp; samples outside the source clamp to the edge.
pub fn apply_warp<T: Warp>(img: &T, field: &DeformationField) -> Result<T> {
    img.warp(field)
}
