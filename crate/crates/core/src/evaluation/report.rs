//! CSV emission of DET curves and quality summaries.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::det::{DetCurve, DetPoint};
use crate::error::{Error, Result};
use crate::generation::PresetName;

/// Operating point reported next to the EER.
pub const REPORT_FMR: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub n: usize,
}

/// Two-pass mean and population standard deviation.
pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::EmptyScores);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(Summary {
        mean,
        std: var.sqrt(),
        n: values.len(),
    })
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| Error::unwritable(path, e))
}

fn write_rows(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| Error::unwritable(path, e))?;
    for r in rows {
        w.write_record(&r).map_err(|e| Error::unwritable(path, e))?;
    }
    w.flush().map_err(|e| Error::unwritable(path, e))
}

pub fn write_det_csv(curve: &DetCurve, path: impl AsRef<Path>) -> Result<()> {
    let rows = curve
        .points()
        .iter()
        .map(|p| vec![p.threshold.to_string(), p.fmr.to_string(), p.fnmr.to_string()]);
    write_rows(path.as_ref(), &["threshold", "fmr", "fnmr"], rows)
}

pub fn read_det_csv(path: impl AsRef<Path>) -> Result<DetCurve> {
    let path = path.as_ref();
    let decode = |reason: String| Error::Decode {
        path: path.to_path_buf(),
        reason,
    };
    let mut r = csv::Reader::from_path(path).map_err(|e| decode(e.to_string()))?;
    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| decode(e.to_string()))?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| decode("missing column".into()))?
                .parse()
                .map_err(|e: std::num::ParseFloatError| decode(e.to_string()))
        };
        points.push(DetPoint {
            threshold: field(0)?,
            fmr: field(1)?,
            fnmr: field(2)?,
        });
    }
    DetCurve::from_points(points)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportFiles {
    pub det: Vec<PathBuf>,
    pub quality_summary: PathBuf,
    pub eer_summary: PathBuf,
}

/// Writes `det_<preset>.csv`, `quality_summary.csv` and `eer_summary.csv`.
pub fn emit_report(
    curves: &BTreeMap<PresetName, DetCurve>,
    qualities: &BTreeMap<PresetName, Vec<f64>>,
    dir: impl AsRef<Path>,
) -> Result<ReportFiles> {
    if curves.is_empty() || qualities.is_empty() {
        return Err(Error::EmptyScores);
    }
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::unwritable(dir, e))?;
    let mut det = Vec::new();
    for (preset, curve) in curves {
        let path = dir.join(format!("det_{preset}.csv"));
        write_det_csv(curve, &path)?;
        det.push(path);
    }
    let quality_summary = dir.join("quality_summary.csv");
    let rows = qualities
        .iter()
        .map(|(p, v)| {
            let s = summarize(v)?;
            Ok(vec![p.to_string(), s.mean.to_string(), s.std.to_string(), s.n.to_string()])
        })
        .collect::<Result<Vec<_>>>()?;
    write_rows(&quality_summary, &["preset", "mean", "std", "n"], rows)?;
    let eer_summary = dir.join("eer_summary.csv");
    let rows = curves
        .iter()
        .map(|(p, c)| vec![p.to_string(), c.eer().to_string(), c.fnmr_at_fmr(REPORT_FMR).to_string()]);
    write_rows(&eer_summary, &["preset", "eer", "fnmr_at_fmr_0.01"], rows)?;
    Ok(ReportFiles {
        det,
        quality_summary,
        eer_summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::compute_det;

    #[test]
    fn population_std() {
        let s = summarize(&[10.0, 20.0, 30.0]).unwrap();
        assert_eq!(s.mean, 20.0);
        assert!((s.std - 8.16496580927726).abs() < 1e-12);
        assert_eq!(s.n, 3);
    }

    #[test]
    fn empty_maps_fail() {
        let dir = tempfile::tempdir().unwrap();
        let q = BTreeMap::from([(PresetName::High, vec![1.0])]);
        assert!(matches!(emit_report(&BTreeMap::new(), &q, dir.path()), Err(Error::EmptyScores)));
    }

    #[test]
    fn det_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = compute_det(&[0.7, 0.61, 0.93, 0.5], &[0.2, 0.55, 0.3]).unwrap();
        let q = BTreeMap::from([(PresetName::Medium, vec![30.0, 40.0])]);
        let files = emit_report(&BTreeMap::from([(PresetName::Medium, c.clone())]), &q, dir.path()).unwrap();
        assert_eq!(read_det_csv(&files.det[0]).unwrap(), c);
        let text = std::fs::read_to_string(files.quality_summary).unwrap();
        assert_eq!(text, "preset,mean,std,n\nmedium,35,5,2\n");
    }
}
