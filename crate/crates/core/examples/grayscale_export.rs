//! Exports a small dataset as 8-bit grayscale PNGs tagged at 500 ppi, the
//! input layout expected by external fingerprint quality tools.
//!
//! cargo run --release --example grayscale_export [out_dir]

use fingersynth::evaluation::export_grayscale;
use fingersynth::generation::{generate_dataset, DatasetOptions, GenerationConfig, PresetName, MANIFEST_FILE};

fn main() -> fingersynth::Result<()> {
    let out: std::path::PathBuf =
        std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fingersynth/grayscale_export"));
    let data = out.join("data");
    generate_dataset(&GenerationConfig::default(), 2, 1, &PresetName::ALL, &data, &DatasetOptions::default())?;
    let files = export_grayscale(data.join(MANIFEST_FILE), out.join("gray"))?;
    for f in &files {
        println!("{}", f.display());
    }
    Ok(())
}
