//! 8-bit PNG emission and loading of generated samples.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use image::{GrayImage as Gray8, RgbImage};

use crate::error::{Error, Result};
use crate::raster::{ColorImage, GrayImage, Pixel, Rgb};

fn to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Quantizes to 8-bit RGB without alpha.
pub fn to_rgb8(img: &ColorImage) -> RgbImage {
    let (w, h) = img.dims();
    let raw: Vec<u8> = img.pixels().iter().flat_map(|p| p.0.map(to_u8)).collect();
    RgbImage::from_raw(w as u32, h as u32, raw).expect("buffer matches dimensions")
}

pub fn from_rgb8(img: &RgbImage) -> ColorImage {
    let (w, h) = img.dimensions();
    let data = img
        .pixels()
        .map(|p| Rgb::new(p.0[0] as f64 / 255.0, p.0[1] as f64 / 255.0, p.0[2] as f64 / 255.0))
        .collect();
    ColorImage::from_vec(w as usize, h as usize, data)
}

pub fn save_color_png(img: &ColorImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    to_rgb8(img)
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::unwritable(path, e))
}

pub fn save_gray_png(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (w, h) = img.dims();
    let raw: Vec<u8> = img.pixels().iter().map(|&v| to_u8(v)).collect();
    Gray8::from_raw(w as u32, h as u32, raw)
        .expect("buffer matches dimensions")
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::unwritable(path, e))
}

/// 8-bit grayscale PNG carrying its resolution in a `pHYs` chunk, the layout
/// most external fingerprint quality tools expect.
pub fn save_gray_png_with_dpi(img: &GrayImage, dpi: f64, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if !(dpi.is_finite() && dpi > 0.0) {
        return Err(Error::param("dpi", "must be positive"));
    }
    let (w, h) = img.dims();
    let raw: Vec<u8> = img.pixels().iter().map(|&v| to_u8(v)).collect();
    let file = File::create(path).map_err(|e| Error::unwritable(path, e))?;
    let mut enc = png::Encoder::new(BufWriter::new(file), w as u32, h as u32);
    enc.set_color(png::ColorType::Grayscale);
    enc.set_depth(png::BitDepth::Eight);
    let ppm = (dpi / 0.0254).round() as u32;
    enc.set_pixel_dims(Some(png::PixelDimensions {
        xppu: ppm,
        yppu: ppm,
        unit: png::Unit::Meter,
    }));
    enc.write_header()
        .and_then(|mut wr| wr.write_image_data(&raw))
        .map_err(|e| Error::unwritable(path, e))
}

pub fn load_color_png(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let img = image::open(path).map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    Ok(from_rgb8(&img.to_rgb8()))
}

/// Round-trips a raster through 8-bit quantization, as if written and read
/// back from disk.
pub fn quantize(img: &ColorImage) -> ColorImage {
    img.map(|p| p.map(|v| to_u8(v) as f64 / 255.0))
}
