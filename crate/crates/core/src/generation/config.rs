//! TOML run configuration. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::preset::{PresetName, QualityPreset};
use super::seeds::DEFAULT_ALTERATION_FACTOR;
use crate::capture::CaptureParams;
use crate::error::{Error, Result};
use crate::ridge::{shape_mask_for_dims, RidgeParams, MIN_SIDE};
use crate::subject::{SkinPalette, MIN_TONE_SCALE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    /// Root of all identity seeds in a dataset run.
    pub seed: u64,
    /// Preset used by single-sample generation.
    pub preset: PresetName,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            seed: 1,
            preset: PresetName::High,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CanvasSection {
    pub width: usize,
    pub height: usize,
    pub margin: usize,
    pub edge_softness: f64,
}

impl Default for CanvasSection {
    fn default() -> Self {
        Self {
            width: 416,
            height: 560,
            margin: 24,
            edge_softness: 6.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RidgeSection {
    /// Cycles per pixel.
    pub frequency: f64,
    pub max_iterations: usize,
    /// Directory of external ridge images; identity `i` uses the `i`-th
    /// file in name order. Procedural synthesis when absent.
    pub input_dir: Option<PathBuf>,
}

impl Default for RidgeSection {
    fn default() -> Self {
        let p = RidgeParams::default();
        Self {
            frequency: p.frequency,
            max_iterations: p.max_iterations,
            input_dir: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CaptureSection {
    pub contactless_strength: f64,
    pub erosion_radius: usize,
    pub border_sigma_max: f64,
    pub border_onset: f64,
}

impl Default for CaptureSection {
    fn default() -> Self {
        let c = CaptureParams::default();
        Self {
            contactless_strength: 1.0,
            erosion_radius: c.erosion_radius,
            border_sigma_max: c.border_sigma_max,
            border_onset: c.border_onset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SubjectSection {
    /// Palette file; the bundled palette when absent.
    pub palette: Option<PathBuf>,
    pub ridge_depth: f64,
    pub low_contrast_sigma: f64,
    pub alteration_factor: f64,
    pub tone_scale: f64,
}

impl Default for SubjectSection {
    fn default() -> Self {
        Self {
            palette: None,
            ridge_depth: 0.35,
            low_contrast_sigma: crate::subject::LOW_CONTRAST_SIGMA,
            alteration_factor: DEFAULT_ALTERATION_FACTOR,
            tone_scale: 64.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentSection {
    pub shadow_strength: f64,
    pub lit_threshold: f64,
    pub transition_band: f64,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        Self {
            shadow_strength: 1.0,
            lit_threshold: crate::environment::DEFAULT_LIT_THRESHOLD,
            transition_band: crate::environment::DEFAULT_TRANSITION_BAND,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    #[default]
    Png,
}

impl ImageFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ImageFormat::Png => "png",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub format: ImageFormat,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenerationConfig {
    pub run: RunSection,
    pub canvas: CanvasSection,
    pub ridge: RidgeSection,
    pub capture: CaptureSection,
    pub subject: SubjectSection,
    pub environment: EnvironmentSection,
    pub output: OutputSection,
    /// Full replacements of built-in presets.
    pub presets: BTreeMap<PresetName, QualityPreset>,
}

fn unit(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::param(name, "must lie in [0, 1]"));
    }
    Ok(())
}

impl GenerationConfig {
    /// Parses and validates; relative paths resolve against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: GenerationConfig = toml::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        for p in [&mut cfg.subject.palette, &mut cfg.ridge.input_dir].into_iter().flatten() {
            if p.is_relative() {
                *p = base_dir.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::FileNotFound(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn preset(&self, name: PresetName) -> QualityPreset {
        self.presets.get(&name).cloned().unwrap_or_else(|| QualityPreset::builtin(name))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.canvas.width, self.canvas.height)
    }

    pub fn ridge_params(&self) -> RidgeParams {
        RidgeParams {
            width: self.canvas.width,
            height: self.canvas.height,
            frequency: self.ridge.frequency,
            max_iterations: self.ridge.max_iterations,
        }
    }

    pub fn capture_params(&self, global_sigma: f64) -> CaptureParams {
        CaptureParams {
            erosion_radius: self.capture.erosion_radius,
            global_sigma,
            border_sigma_max: self.capture.border_sigma_max,
            border_onset: self.capture.border_onset,
        }
    }

    pub fn palette(&self) -> Result<SkinPalette> {
        match &self.subject.palette {
            Some(p) => SkinPalette::load(p),
            None => Ok(SkinPalette::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.canvas;
        if c.width < MIN_SIDE || c.height < MIN_SIDE {
            return Err(Error::TooSmall {
                width: c.width,
                height: c.height,
            });
        }
        shape_mask_for_dims(self.dims(), c.margin, c.edge_softness)?;
        self.ridge_params().validate()?;
        if let Some(dir) = &self.ridge.input_dir {
            if !dir.is_dir() {
                return Err(Error::FileNotFound(dir.clone()));
            }
        }
        unit("contactless_strength", self.capture.contactless_strength)?;
        self.capture_params(0.0).validate()?;
        unit("ridge_depth", self.subject.ridge_depth)?;
        unit("alteration_factor", self.subject.alteration_factor)?;
        if !(self.subject.low_contrast_sigma >= 0.0) {
            return Err(Error::param("low_contrast_sigma", "must be non-negative"));
        }
        if !(self.subject.tone_scale >= MIN_TONE_SCALE) {
            return Err(Error::param("tone_scale", "must be at least 8 px"));
        }
        self.palette()?;
        unit("shadow_strength", self.environment.shadow_strength)?;
        unit("lit_threshold", self.environment.lit_threshold)?;
        if !(self.environment.transition_band >= 0.0) {
            return Err(Error::param("transition_band", "must be non-negative"));
        }
        for name in PresetName::ALL {
            self.preset(name).validate()?;
        }
        Ok(())
    }
}
