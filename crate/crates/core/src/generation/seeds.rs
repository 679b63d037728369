//! Mapping of randomized stages to persistence classes and stream keys.

use crate::error::{ensure_dims, Error, Result};
use crate::raster::GrayImage;
use crate::rng::{mix, Stream};
use crate::subject::BlobMask;

pub const DEFAULT_ALTERATION_FACTOR: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PersistenceClass {
    Persistent,
    /// Blend weight of the session draw: 0 is identity-stable, 1 is fully
    /// session-random.
    SemiPersistent(f64),
    Transient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Ridge,
    SkinColor,
    LowContrast,
    Rolling,
    ToneVariation,
    GlobalTone,
    Shadow,
    Noise,
    Dirt,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Ridge,
        Stage::SkinColor,
        Stage::LowContrast,
        Stage::Rolling,
        Stage::ToneVariation,
        Stage::GlobalTone,
        Stage::Shadow,
        Stage::Noise,
        Stage::Dirt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ridge => "ridge",
            Stage::SkinColor => "skin_color",
            Stage::LowContrast => "low_contrast",
            Stage::Rolling => "rolling",
            Stage::ToneVariation => "tone_variation",
            Stage::GlobalTone => "global_tone",
            Stage::Shadow => "shadow",
            Stage::Noise => "noise",
            Stage::Dirt => "dirt",
        }
    }

    pub fn class(self, alteration_factor: f64) -> PersistenceClass {
        match self {
            Stage::Ridge | Stage::SkinColor => PersistenceClass::Persistent,
            Stage::LowContrast => PersistenceClass::SemiPersistent(alteration_factor),
            _ => PersistenceClass::Transient,
        }
    }
}

/// Key material shared by every transient stream of one session.
pub fn session_seed_material(identity_seed: u64, session_index: u32) -> u64 {
    mix(identity_seed, 0x5E55_1011_0000_0000 | session_index as u64)
}

/// Named streams for one (identity, session). Transient streams do not
/// depend on the preset, so presets of the same session share their
/// underlying draws and differ only in the ranges those draws map into.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedPlan {
    pub identity_seed: u64,
    pub session_index: u32,
    pub alteration_factor: f64,
    identity: Stream,
    session: Stream,
}

impl SeedPlan {
    pub fn session_seed_material(&self) -> u64 {
        self.session.key()
    }

    /// Stream of a stage keyed according to its class. For the
    /// semi-persistent stage this is the identity-keyed draw.
    pub fn stream(&self, stage: Stage) -> Stream {
        match stage.class(self.alteration_factor) {
            PersistenceClass::Persistent | PersistenceClass::SemiPersistent(_) => self.identity.derive(stage.name()),
            PersistenceClass::Transient => self.session.derive(stage.name()),
        }
    }

    /// Session-keyed draw of a semi-persistent stage.
    pub fn session_stream(&self, stage: Stage) -> Stream {
        self.session.derive(stage.name())
    }
}

pub fn derive_streams(identity_seed: u64, session_index: u32, alteration_factor: f64) -> Result<SeedPlan> {
    if !(0.0..=1.0).contains(&alteration_factor) {
        return Err(Error::param("alteration_factor", "must lie in [0, 1]"));
    }
    Ok(SeedPlan {
        identity_seed,
        session_index,
        alteration_factor,
        identity: Stream::new(identity_seed),
        session: Stream::new(session_seed_material(identity_seed, session_index)),
    })
}

/// `(1 - alpha) * identity + alpha * session`, rescaled so the peak equals
/// the larger of the two input peaks.
pub fn blend_masks(identity: &BlobMask, session: &BlobMask, alpha: f64) -> Result<BlobMask> {
    ensure_dims(identity.weights().dims(), session.weights().dims())?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param("alteration_factor", "must lie in [0, 1]"));
    }
    if alpha == 0.0 {
        return Ok(identity.clone());
    }
    if alpha == 1.0 {
        return Ok(session.clone());
    }
    let blended: GrayImage = identity
        .weights()
        .zip_map(session.weights(), |a, b| (1.0 - alpha) * a + alpha * b)?;
    let peak = blended.min_max().1;
    let target = identity.weights().min_max().1.max(session.weights().min_max().1);
    let scale = if peak > 0.0 { target / peak } else { 0.0 };
    Ok(BlobMask::from_weights(blended.map(|v| (v * scale).min(1.0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn persistent_streams_ignore_session() {
        let a = derive_streams(42, 0, 0.3).unwrap();
        let b = derive_streams(42, 5, 0.3).unwrap();
        assert_eq!(a.stream(Stage::SkinColor), b.stream(Stage::SkinColor));
        assert_eq!(a.stream(Stage::Ridge), b.stream(Stage::Ridge));
        assert_eq!(a.stream(Stage::LowContrast), b.stream(Stage::LowContrast));
        assert_ne!(a.session_stream(Stage::LowContrast), b.session_stream(Stage::LowContrast));
    }

    #[test]
    fn transient_streams_follow_session() {
        let a = derive_streams(42, 0, 0.3).unwrap();
        let b = derive_streams(42, 1, 0.3).unwrap();
        for s in Stage::ALL {
            if s.class(0.3) == PersistenceClass::Transient {
                assert_ne!(a.stream(s), b.stream(s), "{}", s.name());
            }
        }
    }

    #[test]
    fn stages_get_distinct_streams() {
        let a = derive_streams(7, 0, 0.3).unwrap();
        let keys: std::collections::HashSet<u64> = Stage::ALL.iter().map(|&s| a.stream(s).key()).collect();
        assert_eq!(keys.len(), Stage::ALL.len());
    }

    #[test]
    fn alteration_factor_range() {
        assert!(derive_streams(1, 0, 1.1).is_err());
        assert!(derive_streams(1, 0, -0.1).is_err());
    }
}
