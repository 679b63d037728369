mod common;

use common::{blur_oracle_error, eer_oracle_error, eer_sweep, stripe_card_inversion, warp_oracle_error};
use fingersynth::environment::{apply_camera_noise, IlluminationLevel};
use fingersynth::evaluation::{compute_det, match_score};
use fingersynth::generation::{generate_sample, GenerationConfig};
use fingersynth::raster::{ColorImage, Rgb};
use fingersynth::rng::Stream;
use fingersynth::subject::{sample_skin_color, SkinPalette};

#[test]
fn warp_matches_tent_oracle() {
    for seed in 0..20 {
        let err = warp_oracle_error(seed);
        assert!(err <= 1e-6, "seed {seed}: {err}");
    }
}

#[test]
fn blur_matches_direct_convolution() {
    for (seed, sigma) in [(1, 0.6), (2, 1.0), (3, 1.7), (4, 2.5), (5, 4.0)] {
        let err = blur_oracle_error(seed, sigma);
        assert!(err <= 1e-5, "sigma {sigma}: {err}");
    }
}

#[test]
fn eer_matches_exhaustive_sweep() {
    for seed in 0..10 {
        let err = eer_oracle_error(seed);
        assert!(err <= 1e-9, "seed {seed}: {err}");
    }
}

#[test]
fn eer_sweep_handles_ties() {
    let mated = [0.5, 0.5, 0.7, 0.4];
    let nonmated = [0.5, 0.3, 0.45, 0.5];
    let lib = compute_det(&mated, &nonmated).unwrap().eer();
    assert!((lib - eer_sweep(&mated, &nonmated)).abs() <= 1e-12);
}

#[test]
fn inversion_flips_with_illumination() {
    let (lit, shadowed) = stripe_card_inversion(0.8);
    assert!(lit > 0.0, "lit half ridge-valley {lit}");
    assert!(shadowed < 0.0, "shadowed half ridge-valley {shadowed}");
    // without inversion ridges stay dark everywhere
    let (lit0, _) = stripe_card_inversion(0.0);
    assert!(lit0 < 0.0);
}

#[test]
fn dark_noise_has_configured_sigma() {
    let img = ColorImage::new(256, 256, Rgb::new(0.5, 0.5, 0.5));
    let noisy = apply_camera_noise(&img, &Stream::new(3), IlluminationLevel::new(0.0).unwrap(), 0.05).unwrap();
    let d: Vec<f64> = noisy.pixels().iter().flat_map(|p| p.0).map(|v| v - 0.5).collect();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let std = (d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / d.len() as f64).sqrt();
    assert!((std - 0.05).abs() <= 0.005, "std {std}");
}

#[test]
fn palette_draws_are_uniform() {
    let palette = SkinPalette::default();
    let mut rng = Stream::new(17);
    let draws = 25_000;
    let mut counts = vec![0usize; palette.len()];
    for _ in 0..draws {
        let c = sample_skin_color(&mut rng, &palette);
        counts[palette.entries().iter().position(|e| *e == c).unwrap()] += 1;
    }
    let expect = draws as f64 / palette.len() as f64;
    for (i, &c) in counts.iter().enumerate() {
        assert!((c as f64 - expect).abs() < 0.2 * expect, "entry {i}: {c}");
    }
}

#[test]
fn matcher_self_and_shift() {
    let config = GenerationConfig::default();
    let img = generate_sample(&config, 31, 0).unwrap().image;
    assert!(match_score(&img, &img).unwrap().value() >= 0.99);
    let (w, h) = img.dims();
    for (dx, dy) in [(10isize, 0isize), (0, 10), (-7, 7)] {
        let shifted = ColorImage::from_fn(w, h, |x, y| {
            let (sx, sy) = (x as isize - dx, y as isize - dy);
            if sx < 0 || sy < 0 || sx >= w as isize || sy >= h as isize {
                Rgb::BLACK
            } else {
                img.get(sx as usize, sy as usize)
            }
        });
        let s = match_score(&img, &shifted).unwrap().value();
        assert!(s >= 0.95, "shift ({dx},{dy}): {s}");
    }
}
