//! Contactless and rolling deformation composed and applied to a ridge map.
//!
//! cargo run --release --example contactless_warp [out_dir]

use fingersynth::geometry::{apply_warp, build_contactless_field, build_rolling_field, compose_fields, RollingSpec};
use fingersynth::io::save_gray_png;
use fingersynth::ridge::{compute_shape_mask, generate_ridge_pattern, RidgeParams, SingularityLayout};
use fingersynth::rng::Stream;

fn main() -> fingersynth::Result<()> {
    let out = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fingersynth/contactless_warp"));
    std::fs::create_dir_all(&out)?;
    let layout = SingularityLayout::sample(&mut Stream::new(3));
    let ridge = generate_ridge_pattern(3, &layout, &RidgeParams::default())?;
    let shape = compute_shape_mask(&ridge, 24, 6.0)?;
    let dims = ridge.dims();

    let contactless = build_contactless_field(dims, &shape, 1.0)?;
    save_gray_png(apply_warp(&ridge, &contactless)?.image(), out.join("contactless.png"))?;
    for angle in [-7.0, 7.0] {
        let rolling = build_rolling_field(dims, RollingSpec::new(angle)?)?;
        let field = compose_fields(&rolling, &contactless)?;
        println!("roll {angle:+} deg: max displacement {:.2} px", field.max_magnitude());
        save_gray_png(apply_warp(&ridge, &field)?.image(), out.join(format!("roll_{angle:+}.png")))?;
    }
    // anything past the 7 degree rolling limit is rejected
    assert!(RollingSpec::new(7.5).is_err());
    println!("written to {}", out.display());
    Ok(())
}
