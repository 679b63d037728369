//! Single-sample rendering in stage order: capture, subject, environment.

use std::f64::consts::TAU;

use super::config::GenerationConfig;
use super::preset::QualityPreset;
use super::seeds::{blend_masks, derive_streams, SeedPlan, Stage};
use crate::capture::{blur_border, blur_gaussian, thin_ridges};
use crate::environment::{
    apply_camera_noise, apply_dirt, apply_global_tone, apply_ridge_inversion, apply_shadow, build_shadow_mask, DirtParams,
    IlluminationLevel,
};
use crate::error::{ensure_dims, Result};
use crate::geometry::{apply_warp, build_contactless_field, build_rolling_field, compose_fields, DeformationField, RollingSpec};
use crate::raster::{ColorImage, GrayImage, Pixel};
use crate::ridge::{compute_shape_mask, generate_ridge_pattern, RidgeMap, ShapeMask, SingularityLayout};
use crate::rng::Stream;
use crate::subject::{
    apply_low_contrast, apply_tone_variation, build_low_contrast_mask, colorize, sample_skin_color, BlobMask, SkinColor,
    SkinPalette,
};

/// Everything that is fixed per identity and shared by all its sessions.
#[derive(Clone, Debug)]
pub struct IdentityAssets {
    pub identity_seed: u64,
    pub ridge: RidgeMap,
    pub shape: ShapeMask,
    pub skin: SkinColor,
    pub contactless: DeformationField,
}

/// Builds the persistent part of an identity. `external` replaces the
/// procedural ridge pattern.
pub fn prepare_identity(
    config: &GenerationConfig,
    palette: &SkinPalette,
    identity_seed: u64,
    external: Option<RidgeMap>,
) -> Result<IdentityAssets> {
    let plan = derive_streams(identity_seed, 0, config.subject.alteration_factor)?;
    let ridge = match external {
        Some(r) => {
            ensure_dims(config.dims(), r.dims())?;
            r
        }
        None => {
            let stream = plan.stream(Stage::Ridge);
            let layout = SingularityLayout::sample(&mut stream.derive("layout"));
            generate_ridge_pattern(stream.key(), &layout, &config.ridge_params())?
        }
    };
    let shape = compute_shape_mask(&ridge, config.canvas.margin, config.canvas.edge_softness)?;
    let skin = sample_skin_color(&mut plan.stream(Stage::SkinColor), palette);
    let contactless = build_contactless_field(config.dims(), &shape, config.capture.contactless_strength)?;
    Ok(IdentityAssets {
        identity_seed,
        ridge,
        shape,
        skin,
        contactless,
    })
}

/// Parameter values drawn for one session.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SessionDraws {
    pub roll_deg: f64,
    pub capture_sigma: f64,
    pub low_contrast_strength: f64,
    pub tone_amplitude: f64,
    pub light_angle: f64,
    pub shadow_depth: f64,
    pub inversion_strength: f64,
    pub illumination: f64,
    pub dirt_darkness: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StageImage {
    Gray(GrayImage),
    Color(ColorImage),
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub image: ColorImage,
    pub draws: SessionDraws,
    pub session_seed_material: u64,
    /// Named intermediates in pipeline order; empty unless requested.
    pub stages: Vec<(&'static str, StageImage)>,
}

struct Recorder {
    on: bool,
    stages: Vec<(&'static str, StageImage)>,
}

impl Recorder {
    fn gray(&mut self, name: &'static str, img: &GrayImage) {
        if self.on {
            self.stages.push((name, StageImage::Gray(img.clone())));
        }
    }

    fn color(&mut self, name: &'static str, img: &ColorImage) {
        if self.on {
            self.stages.push((name, StageImage::Color(img.clone())));
        }
    }
}

/// The session's low-contrast mask: an identity-keyed and a session-keyed
/// draw blended by the plan's alteration factor.
pub fn draw_low_contrast_mask(shape: &ShapeMask, preset: &QualityPreset, plan: &SeedPlan) -> Result<BlobMask> {
    let draw = |mut stream: Stream| build_low_contrast_mask(shape, &mut stream, preset.low_contrast_count, preset.low_contrast_radius);
    let identity = draw(plan.stream(Stage::LowContrast))?;
    let session = draw(plan.session_stream(Stage::LowContrast))?;
    blend_masks(&identity, &session, plan.alteration_factor)
}

/// Renders one session of a prepared identity.
pub fn render_session(
    config: &GenerationConfig,
    assets: &IdentityAssets,
    preset: &QualityPreset,
    session_index: u32,
    record: bool,
) -> Result<Sample> {
    let plan: SeedPlan = derive_streams(assets.identity_seed, session_index, config.subject.alteration_factor)?;
    let shape = &assets.shape;
    let dims = config.dims();
    let mut rec = Recorder {
        on: record,
        stages: Vec::new(),
    };
    rec.gray("ridge", assets.ridge.image());

    // capture simulation
    let mut capture_stream = plan.stream(Stage::Rolling);
    let roll_mag = capture_stream.range(preset.rolling_deg.0, preset.rolling_deg.1);
    let roll_deg = if capture_stream.uniform() < 0.5 { -roll_mag } else { roll_mag };
    let capture_sigma = capture_stream.range(preset.capture_sigma.0, preset.capture_sigma.1);
    let rolling = build_rolling_field(dims, RollingSpec::new(roll_deg)?)?;
    let field = compose_fields(&rolling, &assets.contactless)?;
    let warped = apply_warp(&assets.ridge, &field)?;
    rec.gray("warped", warped.image());
    let capture = config.capture_params(capture_sigma);
    let thinned = thin_ridges(&warped, capture.erosion_radius);
    let smoothed = thinned.with_image(blur_gaussian(thinned.image(), capture.global_sigma));
    let captured = smoothed.with_image(blur_border(smoothed.image(), shape, &capture)?);
    rec.gray("captured", captured.image());

    // subject characteristics
    let low_contrast_mask = draw_low_contrast_mask(shape, preset, &plan)?;
    let low_contrast_strength = plan
        .session_stream(Stage::LowContrast)
        .derive("strength")
        .range(preset.low_contrast_strength.0, preset.low_contrast_strength.1);
    let worn = captured.with_image(apply_low_contrast(
        captured.image(),
        &low_contrast_mask,
        low_contrast_strength,
        config.subject.low_contrast_sigma,
    )?);
    rec.gray("low_contrast_mask", low_contrast_mask.weights());
    rec.gray("low_contrast", worn.image());

    let (colored, ridge_channel) = colorize(&worn, shape, assets.skin, config.subject.ridge_depth)?;
    rec.color("colorized", &colored);
    let mut tone_stream = plan.stream(Stage::ToneVariation);
    let tone_amplitude = tone_stream.range(preset.tone_amplitude.0, preset.tone_amplitude.1);
    let toned = apply_tone_variation(&colored, shape, &mut tone_stream, tone_amplitude, config.subject.tone_scale)?;
    rec.color("tone_variation", &toned);

    // environmental influences
    let graded = apply_global_tone(&toned, &mut plan.stream(Stage::GlobalTone), preset.hue_shift_max, preset.gain)?;
    rec.color("global_tone", &graded);
    let mut shadow_stream = plan.stream(Stage::Shadow);
    let light_angle = shadow_stream.range(0.0, TAU);
    let shadow_depth = shadow_stream.range(preset.shadow_depth.0, preset.shadow_depth.1);
    let inversion_strength = shadow_stream.range(preset.inversion_strength.0, preset.inversion_strength.1);
    let shadow = build_shadow_mask(shape, (light_angle.cos(), light_angle.sin()), shadow_depth)?;
    let shaded = apply_shadow(&graded, &shadow, config.environment.shadow_strength)?;
    rec.gray("shadow_mask", shadow.weights());
    rec.color("shadow", &shaded);
    let inverted = apply_ridge_inversion(
        &shaded,
        &ridge_channel,
        &shadow,
        inversion_strength,
        config.environment.lit_threshold,
        config.environment.transition_band,
    )?;
    rec.color("ridge_inversion", &inverted);
    let mut noise_stream = plan.stream(Stage::Noise);
    let illumination = noise_stream.range(preset.illumination.0, preset.illumination.1);
    let noisy = apply_camera_noise(
        &inverted,
        &noise_stream,
        IlluminationLevel::new(illumination)?,
        preset.noise_sigma_at_dark,
    )?;
    rec.color("camera_noise", &noisy);
    let mut dirt_stream = plan.stream(Stage::Dirt);
    let dirt_darkness = dirt_stream.range(preset.dirt_darkness.0, preset.dirt_darkness.1);
    let dirt = DirtParams {
        particle_count_range: preset.dirt_count,
        particle_radius_range: preset.dirt_radius,
        darkness: dirt_darkness,
    };
    let dirty = apply_dirt(&noisy, shape, &mut dirt_stream, &dirt)?;
    rec.color("dirt", &dirty);

    let image = dirty.zip_map(shape.weights(), |p, w| if w > 0.0 { p.scale(w) } else { Pixel::splat(0.0) })?;
    Ok(Sample {
        image,
        draws: SessionDraws {
            roll_deg,
            capture_sigma,
            low_contrast_strength,
            tone_amplitude,
            light_angle,
            shadow_depth,
            inversion_strength,
            illumination,
            dirt_darkness,
        },
        session_seed_material: plan.session_seed_material(),
        stages: rec.stages,
    })
}

/// One sample with the configured preset and a procedural ridge pattern.
pub fn generate_sample(config: &GenerationConfig, identity_seed: u64, session_index: u32) -> Result<Sample> {
    let palette = config.palette()?;
    let assets = prepare_identity(config, &palette, identity_seed, None)?;
    render_session(config, &assets, &config.preset(config.run.preset), session_index, false)
}
