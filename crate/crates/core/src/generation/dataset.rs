//! Batch generation of mated sample sets with a manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::GenerationConfig;
use super::manifest::{ManifestRow, SampleManifest, MANIFEST_FILE};
use super::pipeline::{prepare_identity, render_session, IdentityAssets, Sample, StageImage};
use super::preset::{PresetName, QualityPreset};
use super::seeds::session_seed_material;
use crate::error::{Error, Result};
use crate::evaluation::proxy_quality;
use crate::io::{quantize, save_color_png, save_gray_png};
use crate::ridge::{load_ridge_pattern, ShapeMask};
use crate::rng::mix;

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetOptions {
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub dump_intermediates: bool,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        Self {
            jobs: 1,
            dump_intermediates: false,
        }
    }
}

pub fn identity_seed(run_seed: u64, identity_id: u32) -> u64 {
    mix(run_seed, identity_id as u64)
}

pub fn expected_rows(n_identities: usize, sessions: usize, presets: usize) -> usize {
    n_identities * sessions * presets
}

pub fn sample_relative_path(preset: PresetName, identity_id: u32, session_index: u32, extension: &str) -> String {
    format!("{preset}/id{identity_id:05}_s{session_index:02}.{extension}")
}

fn ridge_inputs(dir: &Path, needed: usize) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "pgm" | "ppm" | "pnm"))
        })
        .collect();
    files.sort();
    if files.len() < needed {
        return Err(Error::InsufficientData(format!(
            "{} holds {} ridge images, {} identities requested",
            dir.display(),
            files.len(),
            needed
        )));
    }
    files.truncate(needed);
    Ok(files)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::unwritable(dir, e))
}

/// Quality of a sample as it will be read back from disk.
pub fn quality_of_written(sample: &Sample) -> Result<f64> {
    let q = quantize(&sample.image);
    let shape = ShapeMask::from_foreground(&q)?;
    Ok(proxy_quality(&q, &shape)?.value())
}

fn dump_stages(dir: &Path, sample: &Sample) -> Result<()> {
    create_dir(dir)?;
    for (i, (name, img)) in sample.stages.iter().enumerate() {
        let path = dir.join(format!("{i:02}_{name}.png"));
        match img {
            StageImage::Gray(g) => save_gray_png(g, &path)?,
            StageImage::Color(c) => save_color_png(c, &path)?,
        }
    }
    Ok(())
}

struct Job<'a> {
    config: &'a GenerationConfig,
    presets: Vec<(PresetName, QualityPreset)>,
    sessions: u32,
    out_dir: &'a Path,
    previous: &'a SampleManifest,
    options: &'a DatasetOptions,
    palette: crate::subject::SkinPalette,
    ridge_files: Option<Vec<PathBuf>>,
}

impl Job<'_> {
    fn reusable(&self, row: &ManifestRow) -> bool {
        self.previous.get(row.key()).is_some_and(|old| {
            old.identity_seed == row.identity_seed
                && old.session_seed_material == row.session_seed_material
                && old.path == row.path
        }) && self.out_dir.join(&row.path).is_file()
    }

    fn run_identity(&self, identity_id: u32) -> Result<Vec<ManifestRow>> {
        let seed = identity_seed(self.config.run.seed, identity_id);
        let ext = self.config.output.format.extension();
        let mut assets: Option<IdentityAssets> = None;
        let mut rows = Vec::new();
        for (name, preset) in &self.presets {
            for session in 0..self.sessions {
                let mut row = ManifestRow {
                    identity_id,
                    session_index: session,
                    preset: *name,
                    identity_seed: seed,
                    session_seed_material: session_seed_material(seed, session),
                    path: sample_relative_path(*name, identity_id, session, ext),
                    proxy_quality: None,
                };
                if self.reusable(&row) {
                    row.proxy_quality = self.previous.get(row.key()).and_then(|r| r.proxy_quality);
                    rows.push(row);
                    continue;
                }
                if assets.is_none() {
                    let external = match &self.ridge_files {
                        Some(files) => Some(load_ridge_pattern(&files[identity_id as usize])?),
                        None => None,
                    };
                    assets = Some(prepare_identity(self.config, &self.palette, seed, external)?);
                }
                let assets = assets.as_ref().expect("prepared above");
                let sample = render_session(self.config, assets, preset, session, self.options.dump_intermediates)?;
                let path = self.out_dir.join(&row.path);
                save_color_png(&sample.image, &path)?;
                if self.options.dump_intermediates {
                    let stem = Path::new(&row.path).with_extension("");
                    dump_stages(&self.out_dir.join("intermediates").join(stem), &sample)?;
                }
                row.proxy_quality = Some(quality_of_written(&sample)?);
                rows.push(row);
            }
        }
        Ok(rows)
    }
}

/// Emits `n_identities x sessions x presets` samples into `out_dir` and
/// writes `manifest.csv`. Rows whose files already exist and whose seeds
/// match the existing manifest are kept without regenerating.
pub fn generate_dataset(
    config: &GenerationConfig,
    n_identities: usize,
    sessions: usize,
    presets: &[PresetName],
    out_dir: impl AsRef<Path>,
    options: &DatasetOptions,
) -> Result<SampleManifest> {
    if n_identities == 0 || sessions == 0 {
        return Err(Error::param("dataset size", "identities and sessions must be at least 1"));
    }
    if presets.is_empty() {
        return Err(Error::param("presets", "at least one preset is required"));
    }
    config.validate()?;
    let out_dir = out_dir.as_ref();
    create_dir(out_dir)?;
    for p in presets {
        create_dir(&out_dir.join(p.as_str()))?;
    }
    let manifest_path = out_dir.join(MANIFEST_FILE);
    let previous = if manifest_path.is_file() {
        SampleManifest::read(&manifest_path)?
    } else {
        SampleManifest::new()
    };
    let job = Job {
        config,
        presets: presets.iter().map(|&p| (p, config.preset(p))).collect(),
        sessions: sessions as u32,
        out_dir,
        previous: &previous,
        options,
        palette: config.palette()?,
        ridge_files: match &config.ridge.input_dir {
            Some(dir) => Some(ridge_inputs(dir, n_identities)?),
            None => None,
        },
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| Error::param("jobs", e.to_string()))?;
    let results: Vec<Result<Vec<ManifestRow>>> =
        pool.install(|| (0..n_identities as u32).into_par_iter().map(|i| job.run_identity(i)).collect());

    // rows from earlier runs with other presets or sizes are kept if present on disk
    let mut merged: BTreeMap<_, ManifestRow> = previous
        .rows()
        .filter(|r| out_dir.join(&r.path).is_file())
        .map(|r| (r.key(), r.clone()))
        .collect();
    for rows in results {
        for r in rows? {
            merged.insert(r.key(), r);
        }
    }
    let manifest = SampleManifest::from_rows(merged.into_values())?;
    manifest.write(&manifest_path)?;
    Ok(manifest)
}
