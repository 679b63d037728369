//! Capture-process appearance: ridge thinning, global smoothing and the
//! depth-of-field blur towards the finger border.

use crate::error::{ensure_dims, Error, Result};
use crate::raster::{convolve_separable, gaussian_kernel, Pixel, Raster};
use crate::ridge::{RidgeMap, ShapeMask};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CaptureParams {
    pub erosion_radius: usize,
    pub global_sigma: f64,
    pub border_sigma_max: f64,
    /// Normalized interior distance at which the border blur starts.
    pub border_onset: f64,
}

impl Default for CaptureParams {
    fn default() -> Self {
        Self {
            erosion_radius: 1,
            global_sigma: 0.8,
            border_sigma_max: 3.0,
            border_onset: 0.3,
        }
    }
}

impl CaptureParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.global_sigma >= 0.0) {
            return Err(Error::param("global_sigma", "must be non-negative"));
        }
        if !(self.border_sigma_max >= 0.0) {
            return Err(Error::param("border_sigma_max", "must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.border_onset) {
            return Err(Error::param("border_onset", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Thins dark ridges by grayscale dilation of the intensity with a disc of
/// the given radius. Radius 0 returns the input unchanged.
pub fn thin_ridges(img: &RidgeMap, radius: usize) -> RidgeMap {
    if radius == 0 {
        return img.clone();
    }
    img.with_image(dilate_disc(img.image(), radius))
}

/// Maximum over a disc structuring element; pixels beyond the border are
/// ignored.
pub fn dilate_disc(img: &Raster<f64>, radius: usize) -> Raster<f64> {
    let r = radius as isize;
    let offsets: Vec<(isize, isize)> = (-r..=r)
        .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
        .filter(|(dx, dy)| dx * dx + dy * dy <= r * r)
        .collect();
    let (w, h) = img.dims();
    Raster::from_fn(w, h, |x, y| {
        offsets
            .iter()
            .filter_map(|&(dx, dy)| {
                let (sx, sy) = (x as isize + dx, y as isize + dy);
                (sx >= 0 && sy >= 0 && sx < w as isize && sy < h as isize).then(|| img.get(sx as usize, sy as usize))
            })
            .fold(f64::NEG_INFINITY, f64::max)
    })
}

/// Separable Gaussian blur, kernel truncated at 3 sigma, clamp-to-edge.
pub fn blur_gaussian<P: Pixel>(img: &Raster<P>, sigma: f64) -> Raster<P> {
    if sigma <= 0.0 {
        return img.clone();
    }
    convolve_separable(img, &gaussian_kernel(sigma))
}

/// Blends towards a blurred copy near the silhouette edge. The blend weight
/// falls linearly from 1 at the edge to 0 at `border_onset` (normalized
/// interior distance); pixels deeper inside are returned untouched.
pub fn blur_border<P: Pixel>(img: &Raster<P>, shape: &ShapeMask, params: &CaptureParams) -> Result<Raster<P>> {
    ensure_dims(shape.dims(), img.dims())?;
    params.validate()?;
    if params.border_sigma_max == 0.0 || params.border_onset == 0.0 {
        return Ok(img.clone());
    }
    let blurred = blur_gaussian(img, params.border_sigma_max);
    let weight = border_weight(shape, params.border_onset);
    let (w, h) = img.dims();
    Ok(Raster::from_fn(w, h, |x, y| {
        let t = weight.get(x, y);
        if t == 0.0 {
            img.get(x, y)
        } else {
            img.get(x, y).lerp(blurred.get(x, y), t)
        }
    }))
}

/// Border blend weight in `[0, 1]`; 1 outside the support.
pub fn border_weight(shape: &ShapeMask, onset: f64) -> Raster<f64> {
    let max = shape.max_distance().max(1.0);
    shape.distance().map(|d| {
        let nd = d / max;
        if nd >= onset {
            0.0
        } else {
            ((onset - nd) / onset).clamp(0.0, 1.0)
        }
    })
}
