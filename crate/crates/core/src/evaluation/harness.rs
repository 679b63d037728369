//! End-to-end evaluation of a generated dataset directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::det::{compute_det, DetCurve};
use super::protocol::{run_protocol, ProtocolParams, ProtocolScores};
use super::quality::proxy_quality;
use super::report::{emit_report, ReportFiles};
use crate::error::{Error, Result};
use crate::generation::{PresetName, SampleManifest, MANIFEST_FILE};
use crate::io::{load_color_png, save_gray_png_with_dpi};
use crate::ridge::{ShapeMask, DEFAULT_DPI};

pub struct PresetEvaluation {
    pub scores: ProtocolScores,
    pub curve: DetCurve,
    pub qualities: Vec<f64>,
}

pub struct Evaluation {
    pub presets: BTreeMap<PresetName, PresetEvaluation>,
    pub files: ReportFiles,
}

/// Proxy quality of every row of `preset`, taken from the manifest when
/// present and recomputed from the stored image otherwise.
pub fn manifest_qualities(manifest: &SampleManifest, preset: PresetName, base_dir: &Path) -> Result<Vec<f64>> {
    let rows: Vec<_> = manifest.rows_for(preset).collect();
    if rows.is_empty() {
        return Err(Error::InsufficientData(format!("manifest has no rows for preset {preset}")));
    }
    rows.par_iter()
        .map(|r| match r.proxy_quality {
            Some(q) => Ok(q),
            None => {
                let img = load_color_png(base_dir.join(&r.path))?;
                let shape = ShapeMask::from_foreground(&img)?;
                Ok(proxy_quality(&img, &shape)?.value())
            }
        })
        .collect()
}

/// Scores, DET curves and quality summaries for each preset, written to
/// `out_dir`. Sample paths resolve against the manifest's directory.
pub fn evaluate_manifest(
    manifest_path: impl AsRef<Path>,
    presets: &[PresetName],
    out_dir: impl AsRef<Path>,
    params: &ProtocolParams,
) -> Result<Evaluation> {
    let manifest_path = manifest_path.as_ref();
    let manifest = SampleManifest::read(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let mut out = BTreeMap::new();
    for &preset in presets {
        let qualities = manifest_qualities(&manifest, preset, base)?;
        let scores = run_protocol(&manifest, preset, base, params)?;
        let curve = compute_det(&scores.mated, &scores.nonmated)?;
        out.insert(
            preset,
            PresetEvaluation {
                scores,
                curve,
                qualities,
            },
        );
    }
    let curves = out.iter().map(|(p, e)| (*p, e.curve.clone())).collect();
    let qualities = out.iter().map(|(p, e)| (*p, e.qualities.clone())).collect();
    let files = emit_report(&curves, &qualities, out_dir)?;
    Ok(Evaluation { presets: out, files })
}

/// Writes every sample of `manifest_path` as an 8-bit luma PNG tagged at
/// 500 ppi under `out_dir`, mirroring the dataset layout, for use with
/// external quality tools. A copy of the manifest is written alongside with
/// paths rewritten to the exported files. Returns the exported paths.
pub fn export_grayscale(manifest_path: impl AsRef<Path>, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let manifest_path = manifest_path.as_ref();
    let out_dir = out_dir.as_ref();
    let manifest = SampleManifest::read(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    std::fs::create_dir_all(out_dir).map_err(|e| Error::unwritable(out_dir, e))?;
    let rows: Vec<_> = manifest
        .rows()
        .map(|r| {
            let mut row = r.clone();
            row.path = Path::new(&r.path).with_extension("png").to_string_lossy().replace('\\', "/");
            (r, row)
        })
        .collect();
    let written = rows
        .par_iter()
        .map(|(src, dst)| {
            let target = out_dir.join(&dst.path);
            if let Some(parent) = target.parent() {
                std::fs::create_dir_all(parent).map_err(|e| Error::unwritable(parent, e))?;
            }
            let img = load_color_png(base.join(&src.path))?;
            save_gray_png_with_dpi(&img.luma(), DEFAULT_DPI, &target)?;
            Ok(target)
        })
        .collect::<Result<Vec<_>>>()?;
    SampleManifest::from_rows(rows.into_iter().map(|(_, r)| r))?.write(out_dir.join(MANIFEST_FILE))?;
    Ok(written)
}
