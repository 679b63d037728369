//! Pipeline orchestration, quality presets, seeding and dataset emission.

mod config;
mod dataset;
mod manifest;
mod pipeline;
mod preset;
mod seeds;

pub use config::{
    CanvasSection, CaptureSection, EnvironmentSection, GenerationConfig, ImageFormat, OutputSection, RidgeSection, RunSection,
    SubjectSection,
};
pub use dataset::{expected_rows, generate_dataset, identity_seed, quality_of_written, sample_relative_path, DatasetOptions};
pub use manifest::{ManifestRow, SampleManifest, MANIFEST_FILE};
pub use pipeline::{draw_low_contrast_mask, generate_sample, prepare_identity, render_session, IdentityAssets, Sample, SessionDraws, StageImage};
pub use preset::{PresetName, QualityPreset};
pub use seeds::{
    blend_masks, derive_streams, session_seed_material, PersistenceClass, SeedPlan, Stage, DEFAULT_ALTERATION_FACTOR,
};
