//! Procedural ridge pattern and fingertip silhouette for one identity.
//!
//! cargo run --release --example ridge_pattern [out_dir]

use fingersynth::io::save_gray_png;
use fingersynth::ridge::{compute_shape_mask, generate_ridge_pattern, RidgeParams, SingularityLayout};
use fingersynth::rng::Stream;

fn main() -> fingersynth::Result<()> {
    let out = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fingersynth/ridge_pattern"));
    std::fs::create_dir_all(&out)?;
    let seed = 42;
    let layout = SingularityLayout::sample(&mut Stream::new(seed));
    println!("cores {:?}\ndeltas {:?}", layout.cores, layout.deltas);
    let ridge = generate_ridge_pattern(seed, &layout, &RidgeParams::default())?;
    let shape = compute_shape_mask(&ridge, 24, 6.0)?;
    save_gray_png(ridge.image(), out.join("ridge.png"))?;
    save_gray_png(shape.weights(), out.join("shape.png"))?;
    println!("{}x{} ridge map, {} px of fingertip support -> {}", ridge.width(), ridge.height(), shape.support_count(), out.display());
    Ok(())
}
