//! Loads an externally produced ridge image (grey or RGB PNG) as a ridge map.
//!
//! cargo run --release --example ingest_ridge [image.png]

use fingersynth::io::save_gray_png;
use fingersynth::raster::GrayImage;
use fingersynth::ridge::{compute_shape_mask, load_ridge_pattern};

fn main() -> fingersynth::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => p.into(),
        None => {
            // stand-in for an exported master print: concentric rings
            let dir = std::env::temp_dir().join("fingersynth/ingest_ridge");
            std::fs::create_dir_all(&dir)?;
            let img = GrayImage::from_fn(320, 400, |x, y| {
                let r = ((x as f64 - 160.0).powi(2) + (y as f64 - 230.0).powi(2)).sqrt();
                0.5 + 0.5 * (std::f64::consts::TAU * r / 9.0).cos()
            });
            let p = dir.join("external.png");
            save_gray_png(&img, &p)?;
            p
        }
    };
    let ridge = load_ridge_pattern(&path)?;
    let shape = compute_shape_mask(&ridge, 16, 6.0)?;
    println!(
        "{}: {}x{} at {} dpi, support {} px",
        path.display(),
        ridge.width(),
        ridge.height(),
        ridge.nominal_resolution(),
        shape.support_count()
    );
    Ok(())
}
