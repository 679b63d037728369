//! One full pipeline run with every intermediate stage written out.
//!
//! cargo run --release --example single_sample [out_dir]

use fingersynth::generation::{prepare_identity, render_session, GenerationConfig, PresetName, StageImage};
use fingersynth::io::{save_color_png, save_gray_png};

fn main() -> fingersynth::Result<()> {
    let out = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fingersynth/single_sample"));
    std::fs::create_dir_all(&out)?;
    let config = GenerationConfig::default();
    let assets = prepare_identity(&config, &config.palette()?, 1234, None)?;
    for preset in PresetName::ALL {
        let sample = render_session(&config, &assets, &config.preset(preset), 0, true)?;
        println!("{preset}: {:?}", sample.draws);
        for (i, (name, stage)) in sample.stages.iter().enumerate() {
            let path = out.join(format!("{preset}_{i:02}_{name}.png"));
            match stage {
                StageImage::Gray(g) => save_gray_png(g, path)?,
                StageImage::Color(c) => save_color_png(c, path)?,
            }
        }
        save_color_png(&sample.image, out.join(format!("{preset}_final.png")))?;
    }
    println!("written to {}", out.display());
    Ok(())
}
