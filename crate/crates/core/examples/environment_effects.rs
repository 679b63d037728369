//! Global tone, directional shadow, ridge-line inversion, camera noise and
//! dirt applied to a colorized fingertip.
//!
//! cargo run --release --example environment_effects [out_dir]

use fingersynth::environment::{
    apply_camera_noise, apply_dirt, apply_global_tone, apply_ridge_inversion, apply_shadow, build_shadow_mask, DirtParams,
    IlluminationLevel, DEFAULT_LIT_THRESHOLD, DEFAULT_TRANSITION_BAND,
};
use fingersynth::io::{save_color_png, save_gray_png};
use fingersynth::ridge::{compute_shape_mask, generate_ridge_pattern, RidgeParams, SingularityLayout};
use fingersynth::rng::Stream;
use fingersynth::subject::{colorize, SkinPalette};

fn main() -> fingersynth::Result<()> {
    let out = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fingersynth/environment_effects"));
    std::fs::create_dir_all(&out)?;
    let layout = SingularityLayout::sample(&mut Stream::new(8));
    let ridge = generate_ridge_pattern(8, &layout, &RidgeParams::default())?;
    let shape = compute_shape_mask(&ridge, 24, 6.0)?;
    let (img, ridge_channel) = colorize(&ridge, &shape, SkinPalette::default().entries()[4], 0.35)?;
    let rng = Stream::new(2024);

    let img = apply_global_tone(&img, &mut rng.derive("tone"), 0.03, (0.9, 1.1))?;
    // light from the left
    let shadow = build_shadow_mask(&shape, (-1.0, 0.0), 0.6)?;
    save_gray_png(shadow.weights(), out.join("shadow_mask.png"))?;
    let img = apply_shadow(&img, &shadow, 1.0)?;
    let img = apply_ridge_inversion(&img, &ridge_channel, &shadow, 0.4, DEFAULT_LIT_THRESHOLD, DEFAULT_TRANSITION_BAND)?;
    save_color_png(&img, out.join("inverted.png"))?;
    let img = apply_camera_noise(&img, &rng.derive("noise"), IlluminationLevel::new(0.5)?, 0.1)?;
    let dirt = DirtParams {
        particle_count_range: (10, 10),
        particle_radius_range: (2.0, 5.0),
        darkness: 0.8,
    };
    let img = apply_dirt(&img, &shape, &mut rng.derive("dirt"), &dirt)?;
    save_color_png(&img, out.join("final.png"))?;
    println!("written to {}", out.display());
    Ok(())
}
