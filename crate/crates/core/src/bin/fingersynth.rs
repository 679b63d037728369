use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use fingersynth::evaluation::{evaluate_manifest, ProtocolParams, DEFAULT_NONMATED_CAP, REPORT_FMR};
use fingersynth::generation::{generate_dataset, generate_sample, DatasetOptions, GenerationConfig, PresetName};
use fingersynth::io::save_color_png;

#[derive(Parser)]
#[command(name = "fingersynth", version, about = "Synthetic contactless fingerprint generator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render one sample for an identity seed and session index.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        identity_seed: u64,
        #[arg(long)]
        session: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render identities x sessions x presets and write manifest.csv.
    Dataset {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        identities: usize,
        #[arg(long)]
        sessions: usize,
        #[arg(long, default_value = "high,medium,low")]
        presets: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        dump_intermediates: bool,
    },
    /// Score a generated dataset and write DET and quality reports.
    Evaluate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "high,medium,low")]
        presets: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NONMATED_CAP)]
        nonmated_cap: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate {
            config,
            identity_seed,
            session,
            out,
        } => {
            let config = GenerationConfig::load(&config)?;
            let sample = generate_sample(&config, identity_seed, session)?;
            save_color_png(&sample.image, &out)?;
            println!("{}", out.display());
        }
        Command::Dataset {
            config,
            identities,
            sessions,
            presets,
            out,
            jobs,
            dump_intermediates,
        } => {
            let config = GenerationConfig::load(&config)?;
            let presets = PresetName::parse_list(&presets)?;
            let options = DatasetOptions {
                jobs,
                dump_intermediates,
            };
            let manifest = generate_dataset(&config, identities, sessions, &presets, &out, &options)?;
            println!("{} rows in {}", manifest.len(), out.display());
        }
        Command::Evaluate {
            manifest,
            presets,
            out,
            nonmated_cap,
            jobs,
        } => {
            let presets = PresetName::parse_list(&presets)?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global()
                .context("cannot start worker pool")?;
            let params = ProtocolParams {
                nonmated_cap,
                ..ProtocolParams::default()
            };
            let eval = evaluate_manifest(&manifest, &presets, &out, &params)?;
            println!("preset,quality_mean,eer,fnmr_at_fmr_0.01");
            for (preset, e) in &eval.presets {
                let mean = e.qualities.iter().sum::<f64>() / e.qualities.len() as f64;
                println!("{preset},{mean:.2},{:.4},{:.4}", e.curve.eer(), e.curve.fnmr_at_fmr(REPORT_FMR));
            }
        }
    }
    Ok(())
}
