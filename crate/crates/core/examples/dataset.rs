//! Small multi-preset dataset with manifest; a second run resumes and
//! rewrites nothing.
//!
//! cargo run --release --example dataset [out_dir]

use fingersynth::generation::{expected_rows, generate_dataset, DatasetOptions, GenerationConfig, PresetName, MANIFEST_FILE};

fn main() -> fingersynth::Result<()> {
    let out = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fingersynth/dataset"));
    let config = GenerationConfig::default();
    let options = DatasetOptions { jobs: 2, ..Default::default() };
    let manifest = generate_dataset(&config, 3, 2, &PresetName::ALL, &out, &options)?;
    assert_eq!(manifest.len(), expected_rows(3, 2, 3));
    for row in manifest.rows().take(4) {
        println!("{} q={:.1}", row.path, row.proxy_quality.unwrap_or(f64::NAN));
    }
    let t = std::time::Instant::now();
    generate_dataset(&config, 3, 2, &PresetName::ALL, &out, &options)?;
    println!("resume pass took {:?}", t.elapsed());
    println!("{} rows in {}", manifest.len(), out.join(MANIFEST_FILE).display());
    Ok(())
}
