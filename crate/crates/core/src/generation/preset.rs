use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::MAX_ROLL_DEG;
use crate::subject::MAX_TONE_AMPLITUDE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetName {
    High,
    Medium,
    Low,
}

impl PresetName {
    pub const ALL: [PresetName; 3] = [PresetName::High, PresetName::Medium, PresetName::Low];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::High => "high",
            PresetName::Medium => "medium",
            PresetName::Low => "low",
        }
    }

    /// Parses a comma-separated list such as `high,medium,low`.
    pub fn parse_list(s: &str) -> Result<Vec<PresetName>> {
        let mut out: Vec<PresetName> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let p: PresetName = part.parse()?;
            if !out.contains(&p) {
                out.push(p);
            }
        }
        if out.is_empty() {
            return Err(Error::ConfigInvalid("empty preset list".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "high" => Ok(PresetName::High),
            "medium" => Ok(PresetName::Medium),
            "low" => Ok(PresetName::Low),
            other => Err(Error::ConfigInvalid(format!("unknown preset '{other}'"))),
        }
    }
}

/// Per-stage parameter ranges of one quality level. Every session draws
/// each value uniformly from its range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QualityPreset {
    /// Magnitude range of the roll angle in degrees; the sign is random.
    pub rolling_deg: (f64, f64),
    /// Global capture blur sigma in pixels.
    pub capture_sigma: (f64, f64),
    pub low_contrast_count: (u32, u32),
    pub low_contrast_radius: (f64, f64),
    pub low_contrast_strength: (f64, f64),
    pub tone_amplitude: (f64, f64),
    pub gain: (f64, f64),
    pub hue_shift_max: f64,
    pub shadow_depth: (f64, f64),
    pub inversion_strength: (f64, f64),
    pub illumination: (f64, f64),
    pub noise_sigma_at_dark: f64,
    pub dirt_count: (u32, u32),
    pub dirt_radius: (f64, f64),
    pub dirt_darkness: (f64, f64),
}

fn mid(r: (f64, f64)) -> f64 {
    0.5 * (r.0 + r.1)
}

fn mid_u(r: (u32, u32)) -> f64 {
    0.5 * (r.0 as f64 + r.1 as f64)
}

fn check_range(name: &'static str, r: (f64, f64), lo: f64, hi: f64) -> Result<()> {
    if !(lo <= r.0 && r.0 <= r.1 && r.1 <= hi) {
        return Err(Error::param(name, format!("range [{}, {}] must be ordered within [{lo}, {hi}]", r.0, r.1)));
    }
    Ok(())
}

impl QualityPreset {
    pub fn builtin(name: PresetName) -> Self {
        match name {
            PresetName::High => Self {
                rolling_deg: (0.0, 2.0),
                capture_sigma: (0.5, 0.7),
                low_contrast_count: (0, 1),
                low_contrast_radius: (15.0, 30.0),
                low_contrast_strength: (0.3, 0.5),
                tone_amplitude: (0.0, 0.05),
                gain: (0.95, 1.05),
                hue_shift_max: 0.01,
                shadow_depth: (0.0, 0.3),
                inversion_strength: (0.0, 0.1),
                illumination: (0.8, 1.0),
                noise_sigma_at_dark: 0.05,
                dirt_count: (0, 2),
                dirt_radius: (1.5, 3.0),
                dirt_darkness: (0.3, 0.5),
            },
            PresetName::Medium => Self {
                rolling_deg: (1.0, 4.5),
                capture_sigma: (0.8, 1.1),
                low_contrast_count: (1, 3),
                low_contrast_radius: (25.0, 45.0),
                low_contrast_strength: (0.5, 0.8),
                tone_amplitude: (0.04, 0.08),
                gain: (0.85, 1.15),
                hue_shift_max: 0.02,
                shadow_depth: (0.2, 0.7),
                inversion_strength: (0.05, 0.55),
                illumination: (0.3, 0.85),
                noise_sigma_at_dark: 0.09,
                dirt_count: (2, 8),
                dirt_radius: (2.0, 4.0),
                dirt_darkness: (0.4, 0.7),
            },
            PresetName::Low => Self {
                rolling_deg: (3.0, 7.0),
                capture_sigma: (1.1, 1.6),
                low_contrast_count: (3, 6),
                low_contrast_radius: (35.0, 60.0),
                low_contrast_strength: (0.8, 1.0),
                tone_amplitude: (0.06, 0.12),
                gain: (0.75, 1.25),
                hue_shift_max: 0.04,
                shadow_depth: (0.4, 0.75),
                inversion_strength: (0.3, 0.8),
                illumination: (0.25, 0.6),
                noise_sigma_at_dark: 0.1,
                dirt_count: (6, 20),
                dirt_radius: (2.0, 5.0),
                dirt_darkness: (0.5, 0.9),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_range("rolling_deg", self.rolling_deg, 0.0, MAX_ROLL_DEG)
            .map_err(|_| Error::AngleOutOfRange(self.rolling_deg.1))?;
        check_range("capture_sigma", self.capture_sigma, 0.0, 10.0)?;
        if self.low_contrast_count.0 > self.low_contrast_count.1 {
            return Err(Error::param("low_contrast_count", "empty range"));
        }
        check_range("low_contrast_radius", self.low_contrast_radius, f64::MIN_POSITIVE, f64::MAX)?;
        check_range("low_contrast_strength", self.low_contrast_strength, 0.0, 1.0)?;
        if self.tone_amplitude.1 > MAX_TONE_AMPLITUDE {
            return Err(Error::AmplitudeTooLarge(self.tone_amplitude.1));
        }
        check_range("tone_amplitude", self.tone_amplitude, 0.0, MAX_TONE_AMPLITUDE)?;
        check_range("gain", self.gain, 0.7, 1.3)?;
        if !(0.0..=0.1).contains(&self.hue_shift_max) {
            return Err(Error::param("hue_shift_max", "must lie in [0, 0.1]"));
        }
        check_range("shadow_depth", self.shadow_depth, 0.0, 1.0)?;
        check_range("inversion_strength", self.inversion_strength, 0.0, 1.0)?;
        check_range("illumination", self.illumination, 0.0, 1.0)?;
        if !(self.noise_sigma_at_dark >= 0.0 && self.noise_sigma_at_dark.is_finite()) {
            return Err(Error::param("noise_sigma_at_dark", "must be non-negative"));
        }
        if self.dirt_count.0 > self.dirt_count.1 {
            return Err(Error::param("dirt_count", "empty range"));
        }
        check_range("dirt_radius", self.dirt_radius, f64::MIN_POSITIVE, f64::MAX)?;
        check_range("dirt_darkness", self.dirt_darkness, 0.0, 1.0)?;
        Ok(())
    }

    /// Scalar severity: the sum of range midpoints, each divided by a fixed
    /// reference scale so every term is roughly in `[0, 1]`:
    ///
    /// ```text
    /// roll/7 + sigma/2 + lc_count/6 + lc_radius/60 + lc_strength
    ///   + tone/0.3 + (gain_hi - gain_lo)/0.6 + hue/0.1 + shadow
    ///   + inversion + (1 - illumination) + noise/0.2
    ///   + dirt_count/20 + dirt_radius/5 + dirt_darkness
    /// ```
    pub fn severity(&self) -> f64 {
        mid(self.rolling_deg) / MAX_ROLL_DEG
            + mid(self.capture_sigma) / 2.0
            + mid_u(self.low_contrast_count) / 6.0
            + mid(self.low_contrast_radius) / 60.0
            + mid(self.low_contrast_strength)
            + mid(self.tone_amplitude) / MAX_TONE_AMPLITUDE
            + (self.gain.1 - self.gain.0) / 0.6
            + self.hue_shift_max / 0.1
            + mid(self.shadow_depth)
            + mid(self.inversion_strength)
            + (1.0 - mid(self.illumination))
            + self.noise_sigma_at_dark / 0.2
            + mid_u(self.dirt_count) / 20.0
            + mid(self.dirt_radius) / 5.0
            + mid(self.dirt_darkness)
    }

    /// Every range collapsed to its least severe end.
    pub fn at_minimum(&self) -> Self {
        let lo = |r: (f64, f64)| (r.0, r.0);
        let lo_u = |r: (u32, u32)| (r.0, r.0);
        Self {
            rolling_deg: lo(self.rolling_deg),
            capture_sigma: lo(self.capture_sigma),
            low_contrast_count: lo_u(self.low_contrast_count),
            low_contrast_radius: lo(self.low_contrast_radius),
            low_contrast_strength: lo(self.low_contrast_strength),
            tone_amplitude: lo(self.tone_amplitude),
            gain: lo(self.gain),
            hue_shift_max: self.hue_shift_max,
            shadow_depth: lo(self.shadow_depth),
            inversion_strength: lo(self.inversion_strength),
            illumination: (self.illumination.1, self.illumination.1),
            noise_sigma_at_dark: self.noise_sigma_at_dark,
            dirt_count: lo_u(self.dirt_count),
            dirt_radius: lo(self.dirt_radius),
            dirt_darkness: lo(self.dirt_darkness),
        }
    }

    /// No transient degradation at all: every effect is switched off.
    pub fn neutral() -> Self {
        Self {
            rolling_deg: (0.0, 0.0),
            capture_sigma: (0.0, 0.0),
            low_contrast_count: (0, 0),
            low_contrast_radius: (1.0, 1.0),
            low_contrast_strength: (0.0, 0.0),
            tone_amplitude: (0.0, 0.0),
            gain: (1.0, 1.0),
            hue_shift_max: 0.0,
            shadow_depth: (0.0, 0.0),
            inversion_strength: (0.0, 0.0),
            illumination: (1.0, 1.0),
            noise_sigma_at_dark: 0.0,
            dirt_count: (0, 0),
            dirt_radius: (1.0, 1.0),
            dirt_darkness: (0.0, 0.0),
        }
    }
}
