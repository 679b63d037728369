//! Generates a small dataset, then runs the comparison protocol and writes
//! DET curves plus quality and EER summaries.
//!
//! cargo run --release --example evaluate_report [out_dir]

use fingersynth::evaluation::{evaluate_manifest, ProtocolParams, REPORT_FMR};
use fingersynth::generation::{generate_dataset, DatasetOptions, GenerationConfig, PresetName, MANIFEST_FILE};

fn main() -> fingersynth::Result<()> {
    let out: std::path::PathBuf =
        std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fingersynth/evaluate_report"));
    let data = out.join("data");
    generate_dataset(&GenerationConfig::default(), 6, 3, &PresetName::ALL, &data, &DatasetOptions::default())?;
    let eval = evaluate_manifest(data.join(MANIFEST_FILE), &PresetName::ALL, out.join("report"), &ProtocolParams::default())?;
    for (preset, e) in &eval.presets {
        let mean = e.qualities.iter().sum::<f64>() / e.qualities.len() as f64;
        println!(
            "{preset:<6} quality {mean:5.1}  mated {}  nonmated {}  EER {:.3}  FNMR@FMR={REPORT_FMR} {:.3}",
            e.scores.mated.len(),
            e.scores.nonmated.len(),
            e.curve.eer(),
            e.curve.fnmr_at_fmr(REPORT_FMR)
        );
    }
    println!("reports in {}", out.join("report").display());
    Ok(())
}
