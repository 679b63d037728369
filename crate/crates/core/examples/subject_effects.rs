//! Low-contrast regions, skin colorization and skin-tone variation.
//!
//! cargo run --release --example subject_effects [out_dir]

use fingersynth::io::{save_color_png, save_gray_png};
use fingersynth::ridge::{compute_shape_mask, generate_ridge_pattern, RidgeMap, RidgeParams, SingularityLayout};
use fingersynth::rng::Stream;
use fingersynth::subject::{apply_low_contrast, apply_tone_variation, build_low_contrast_mask, colorize, sample_skin_color, SkinPalette};

fn main() -> fingersynth::Result<()> {
    let out = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fingersynth/subject_effects"));
    std::fs::create_dir_all(&out)?;
    let layout = SingularityLayout::sample(&mut Stream::new(5));
    let ridge = generate_ridge_pattern(5, &layout, &RidgeParams::default())?;
    let shape = compute_shape_mask(&ridge, 24, 6.0)?;
    let mut rng = Stream::new(99);

    let mask = build_low_contrast_mask(&shape, &mut rng, (3, 3), (30.0, 50.0))?;
    let worn = RidgeMap::new(apply_low_contrast(ridge.image(), &mask, 0.9, 4.0)?, ridge.nominal_resolution())?;
    save_gray_png(mask.weights(), out.join("low_contrast_mask.png"))?;

    let palette = SkinPalette::default();
    let color = sample_skin_color(&mut rng, &palette);
    println!("palette of {} tones, drew {:?}", palette.len(), color.rgb());
    let (colored, _ridge_channel) = colorize(&worn, &shape, color, 0.35)?;
    save_color_png(&colored, out.join("colorized.png"))?;
    let toned = apply_tone_variation(&colored, &shape, &mut rng, 0.1, 64.0)?;
    save_color_png(&toned, out.join("tone_variation.png"))?;
    println!("{} blobs, written to {}", mask.blob_count(), out.display());
    Ok(())
}
