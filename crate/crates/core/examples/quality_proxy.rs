//! Proxy quality per preset, with its three components, and the effect of
//! extra blur.
//!
//! cargo run --release --example quality_proxy

use fingersynth::capture::blur_gaussian;
use fingersynth::evaluation::{proxy_quality_with, QualityParams};
use fingersynth::generation::{prepare_identity, render_session, GenerationConfig, PresetName};
use fingersynth::ridge::ShapeMask;

fn main() -> fingersynth::Result<()> {
    let config = GenerationConfig::default();
    let assets = prepare_identity(&config, &config.palette()?, 9, None)?;
    let params = QualityParams::default();
    for preset in PresetName::ALL {
        let img = render_session(&config, &assets, &config.preset(preset), 0, false)?.image;
        let shape = ShapeMask::from_foreground(&img)?;
        let r = proxy_quality_with(&img, &shape, &params)?;
        let blurred = proxy_quality_with(&blur_gaussian(&img, 4.0), &shape, &params)?;
        println!(
            "{preset:<6} score {:5.1}  contrast {:.3} frequency {:.3} sharpness {:.3}  over {} tiles; blurred {:5.1}",
            r.score.value(),
            r.components.contrast,
            r.components.frequency,
            r.components.sharpness,
            r.tiles,
            blurred.score.value()
        );
    }
    Ok(())
}
