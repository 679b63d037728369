//! Correlation matcher: self match, shifted copy, mated and non-mated pairs.
//!
//! cargo run --release --example matcher

use fingersynth::evaluation::match_score;
use fingersynth::generation::{prepare_identity, render_session, GenerationConfig, PresetName};
use fingersynth::raster::{ColorImage, Rgb};

fn main() -> fingersynth::Result<()> {
    let config = GenerationConfig::default();
    let palette = config.palette()?;
    let preset = config.preset(PresetName::High);
    let a = prepare_identity(&config, &palette, 1, None)?;
    let b = prepare_identity(&config, &palette, 2, None)?;
    let a0 = render_session(&config, &a, &preset, 0, false)?.image;
    let a1 = render_session(&config, &a, &preset, 1, false)?.image;
    let b0 = render_session(&config, &b, &preset, 0, false)?.image;
    let (w, h) = a0.dims();
    let shifted = ColorImage::from_fn(w, h, |x, y| if x >= 10 { a0.get(x - 10, y) } else { Rgb::BLACK });

    println!("self      {:.3}", match_score(&a0, &a0)?.value());
    println!("shift 10  {:.3}", match_score(&a0, &shifted)?.value());
    println!("mated     {:.3}", match_score(&a0, &a1)?.value());
    println!("nonmated  {:.3}", match_score(&a0, &b0)?.value());
    Ok(())
}
