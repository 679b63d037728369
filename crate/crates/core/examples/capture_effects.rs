//! Ridge thinning, capture blur and depth-of-field border blur.
//!
//! cargo run --release --example capture_effects [out_dir]

use fingersynth::capture::{blur_border, blur_gaussian, thin_ridges, CaptureParams};
use fingersynth::io::save_gray_png;
use fingersynth::ridge::{compute_shape_mask, generate_ridge_pattern, RidgeParams, SingularityLayout};
use fingersynth::rng::Stream;

fn main() -> fingersynth::Result<()> {
    let out = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fingersynth/capture_effects"));
    std::fs::create_dir_all(&out)?;
    let layout = SingularityLayout::sample(&mut Stream::new(11));
    let ridge = generate_ridge_pattern(11, &layout, &RidgeParams::default())?;
    let shape = compute_shape_mask(&ridge, 24, 6.0)?;
    let params = CaptureParams::default();

    let thinned = thin_ridges(&ridge, params.erosion_radius);
    let blurred = blur_gaussian(thinned.image(), params.global_sigma);
    let bordered = blur_border(&blurred, &shape, &params)?;
    save_gray_png(thinned.image(), out.join("1_thinned.png"))?;
    save_gray_png(&blurred, out.join("2_blurred.png"))?;
    save_gray_png(&bordered, out.join("3_border_blur.png"))?;
    println!("mean intensity: input {:.3}, thinned {:.3}", ridge.image().mean(), thinned.image().mean());
    println!("written to {}", out.display());
    Ok(())
}
