mod common;

use std::collections::BTreeMap;

use common::pearson;
use fingersynth::capture::blur_gaussian;
use fingersynth::evaluation::{proxy_quality, Matcher, MatcherParams};
use fingersynth::generation::{
    generate_sample, prepare_identity, render_session, GenerationConfig, PresetName, QualityPreset, StageImage,
};
use fingersynth::io::{quantize, to_rgb8};
use fingersynth::raster::GrayImage;
use fingersynth::ridge::ShapeMask;

fn stage<'a>(stages: &'a [(&'static str, StageImage)], name: &str) -> &'a StageImage {
    &stages.iter().find(|(n, _)| *n == name).unwrap().1
}

#[test]
fn same_inputs_give_identical_bytes() {
    let mut config = GenerationConfig::default();
    for preset in PresetName::ALL {
        config.run.preset = preset;
        let a = generate_sample(&config, 77, 2).unwrap();
        let b = generate_sample(&config, 77, 2).unwrap();
        assert_eq!(to_rgb8(&a.image).into_raw(), to_rgb8(&b.image).into_raw());
        assert_eq!(a.draws, b.draws);
    }
}

#[test]
fn output_has_canvas_dims_and_black_background() {
    let mut config = GenerationConfig::default();
    config.canvas.width = 256;
    config.canvas.height = 320;
    config.run.preset = PresetName::Low;
    let assets = prepare_identity(&config, &config.palette().unwrap(), 5, None).unwrap();
    let img = render_session(&config, &assets, &config.preset(PresetName::Low), 3, false).unwrap().image;
    assert_eq!(img.dims(), (256, 320));
    for y in 0..320 {
        for x in 0..256 {
            if assets.shape.weight(x, y) == 0.0 {
                assert_eq!(img.get(x, y).0, [0.0; 3]);
            }
        }
    }
}

#[test]
fn ridge_input_is_identical_across_sessions() {
    let config = GenerationConfig::default();
    let assets = prepare_identity(&config, &config.palette().unwrap(), 123, None).unwrap();
    let preset = config.preset(PresetName::Medium);
    let a = render_session(&config, &assets, &preset, 0, true).unwrap();
    let b = render_session(&config, &assets, &preset, 4, true).unwrap();
    assert_eq!(stage(&a.stages, "ridge"), stage(&b.stages, "ridge"));
    assert_ne!(stage(&a.stages, "warped"), stage(&b.stages, "warped"));
    assert_ne!(a.image, b.image);
}

#[test]
fn least_severe_high_preset_only_colorizes() {
    let config = GenerationConfig::default();
    let preset = QualityPreset::builtin(PresetName::High).at_minimum();
    for seed in [3, 14, 15] {
        let assets = prepare_identity(&config, &config.palette().unwrap(), seed, None).unwrap();
        let s = render_session(&config, &assets, &preset, 1, true).unwrap();
        let StageImage::Gray(captured) = stage(&s.stages, "captured") else { panic!() };
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, (&w, &c)) in assets.shape.weights().pixels().iter().zip(captured.pixels()).enumerate() {
            if w >= 1.0 {
                a.push(c);
                b.push(s.image.pixels()[i].luma());
            }
        }
        let r = pearson(&a, &b);
        assert!(r >= 0.99, "seed {seed}: correlation {r}");
    }
}

#[test]
fn blur_lowers_quality_of_high_samples() {
    let config = GenerationConfig::default();
    let preset = config.preset(PresetName::High);
    let palette = config.palette().unwrap();
    let mut checked = 0;
    for seed in 0..5 {
        let assets = prepare_identity(&config, &palette, 1000 + seed, None).unwrap();
        for session in 0..4 {
            let img = quantize(&render_session(&config, &assets, &preset, session, false).unwrap().image);
            let shape = ShapeMask::from_foreground(&img).unwrap();
            let q = proxy_quality(&img, &shape).unwrap().value();
            let qb = proxy_quality(&blur_gaussian(&img, 4.0), &shape).unwrap().value();
            assert!(qb < q, "seed {seed} session {session}: {qb} !< {q}");
            checked += 1;
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn mated_pairs_outscore_nonmated_pairs() {
    let config = GenerationConfig::default();
    let preset = config.preset(PresetName::High);
    let palette = config.palette().unwrap();
    let matcher = Matcher::new(config.dims(), MatcherParams::default()).unwrap();
    let mut templates = BTreeMap::new();
    for id in 0..11u64 {
        let assets = prepare_identity(&config, &palette, 500 + id, None).unwrap();
        for session in 0..2 {
            let img = render_session(&config, &assets, &preset, session, false).unwrap().image;
            templates.insert((id, session), matcher.template(&quantize(&img)).unwrap());
        }
    }
    let mated: Vec<f64> = (0..11).map(|i| matcher.score(&templates[&(i, 0)], &templates[&(i, 1)]).value()).collect();
    let mut nonmated = Vec::new();
    for i in 0..11 {
        for j in i + 1..11 {
            nonmated.push(matcher.score(&templates[&(i, 0)], &templates[&(j, 0)]).value());
        }
    }
    assert!(nonmated.len() >= 50);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m, n) = (mean(&mated), mean(&nonmated));
    assert!(m - n >= 0.15, "mated {m:.3} nonmated {n:.3}");
}

#[test]
fn external_ridge_pattern_is_used() {
    let config = GenerationConfig::default();
    let (w, h) = config.dims();
    let rings = GrayImage::from_fn(w, h, |x, y| {
        let r = ((x as f64 - w as f64 / 2.0).powi(2) + (y as f64 - h as f64 / 2.0).powi(2)).sqrt();
        0.5 + 0.5 * (r / 9.0 * std::f64::consts::TAU).cos()
    });
    let ridge = fingersynth::ridge::RidgeMap::new(rings, 500.0).unwrap();
    let assets = prepare_identity(&config, &config.palette().unwrap(), 1, Some(ridge.clone())).unwrap();
    assert_eq!(assets.ridge, ridge);
    let small = fingersynth::ridge::RidgeMap::new(GrayImage::new(64, 64, 0.5), 500.0).unwrap();
    assert!(prepare_identity(&config, &config.palette().unwrap(), 1, Some(small)).is_err());
}
