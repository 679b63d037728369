//! CSV record of every emitted sample.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::preset::PresetName;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.csv";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub identity_id: u32,
    pub session_index: u32,
    pub preset: PresetName,
    pub identity_seed: u64,
    pub session_seed_material: u64,
    /// Relative to the manifest's directory.
    pub path: String,
    pub proxy_quality: Option<f64>,
}

impl ManifestRow {
    pub fn key(&self) -> (u32, u32, PresetName) {
        (self.identity_id, self.session_index, self.preset)
    }
}

/// Rows unique by `(identity_id, session_index, preset)`, kept sorted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleManifest {
    rows: BTreeMap<(u32, u32, PresetName), ManifestRow>,
}

impl SampleManifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows(rows: impl IntoIterator<Item = ManifestRow>) -> Result<Self> {
        let mut m = Self::new();
        for r in rows {
            if m.rows.insert(r.key(), r.clone()).is_some() {
                return Err(Error::ConfigInvalid(format!(
                    "duplicate manifest row for identity {}, session {}, preset {}",
                    r.identity_id, r.session_index, r.preset
                )));
            }
        }
        Ok(m)
    }

    /// Inserts or replaces the row with the same key.
    pub fn upsert(&mut self, row: ManifestRow) {
        self.rows.insert(row.key(), row);
    }

    pub fn get(&self, key: (u32, u32, PresetName)) -> Option<&ManifestRow> {
        self.rows.get(&key)
    }

    pub fn rows(&self) -> impl Iterator<Item = &ManifestRow> {
        self.rows.values()
    }

    pub fn rows_for(&self, preset: PresetName) -> impl Iterator<Item = &ManifestRow> {
        self.rows.values().filter(move |r| r.preset == preset)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let tmp = path.with_extension("csv.tmp");
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&tmp)
            .map_err(|e| Error::unwritable(&tmp, e))?;
        for row in self.rows.values() {
            w.serialize(row).map_err(|e| Error::unwritable(&tmp, e))?;
        }
        w.flush().map_err(|e| Error::unwritable(&tmp, e))?;
        drop(w);
        std::fs::rename(&tmp, path).map_err(|e| Error::unwritable(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::FileNotFound(path.to_path_buf()));
        }
        let mut r = csv::Reader::from_path(path).map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        let rows = r
            .deserialize()
            .collect::<std::result::Result<Vec<ManifestRow>, _>>()
            .map_err(|e| Error::Decode {
                path: path.to_path_buf(),
                reason: e.to_string(),
            })?;
        Self::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: u32, s: u32, p: PresetName) -> ManifestRow {
        ManifestRow {
            identity_id: id,
            session_index: s,
            preset: p,
            identity_seed: 99 + id as u64,
            session_seed_material: 7,
            path: format!("{p}/id{id}_s{s}.png"),
            proxy_quality: if s == 0 { Some(41.25) } else { None },
        }
    }

    #[test]
    fn csv_round_trip_sorted_lf() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(MANIFEST_FILE);
        let m = SampleManifest::from_rows(vec![
            row(1, 0, PresetName::Low),
            row(0, 1, PresetName::High),
            row(0, 0, PresetName::Medium),
            row(0, 0, PresetName::High),
        ])
        .unwrap();
        m.write(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "identity_id,session_index,preset,identity_seed,session_seed_material,path,proxy_quality"
        );
        assert!(lines[1].starts_with("0,0,high,"));
        assert!(lines[2].starts_with("0,0,medium,"));
        assert!(lines[3].starts_with("0,1,high,"));
        assert_eq!(SampleManifest::read(&path).unwrap(), m);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(SampleManifest::from_rows(vec![row(0, 0, PresetName::High), row(0, 0, PresetName::High)]).is_err());
    }
}
