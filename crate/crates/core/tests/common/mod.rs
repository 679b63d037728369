//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use fingersynth::capture::blur_gaussian;
use fingersynth::environment::{
    apply_ridge_inversion, apply_shadow, build_shadow_mask, DEFAULT_LIT_THRESHOLD, DEFAULT_TRANSITION_BAND,
};
use fingersynth::evaluation::compute_det;
use fingersynth::geometry::{apply_warp, DeformationField};
use fingersynth::raster::GrayImage;
use fingersynth::ridge::{shape_mask_for_dims, RidgeMap};
use fingersynth::rng::Stream;
use fingersynth::subject::{colorize, SkinPalette};

/// Bilinear interpolation written as a sum of separable tent weights over
/// every pixel, with edge clamping of the sample position.
pub fn tent_sample(img: &GrayImage, x: f64, y: f64) -> f64 {
    let (w, h) = img.dims();
    let x = x.clamp(0.0, (w - 1) as f64);
    let y = y.clamp(0.0, (h - 1) as f64);
    let mut acc = 0.0;
    for j in 0..h {
        for i in 0..w {
            let wx = (1.0 - (x - i as f64).abs()).max(0.0);
            let wy = (1.0 - (y - j as f64).abs()).max(0.0);
            acc += img.get(i, j) * wx * wy;
        }
    }
    acc
}

/// Largest per-pixel gap between the library warp and the tent oracle on a
/// random 8x8 image and field.
pub fn warp_oracle_error(seed: u64) -> f64 {
    let mut rng = Stream::new(seed);
    let img = GrayImage::from_vec(8, 8, (0..64).map(|_| rng.uniform()).collect());
    let shifts: Vec<(f64, f64)> = (0..64).map(|_| (rng.range(-3.0, 3.0), rng.range(-3.0, 3.0))).collect();
    let field = DeformationField::from_fn(8, 8, |x, y| shifts[y * 8 + x]);
    let warped = apply_warp(&img, &field).unwrap();
    let mut worst: f64 = 0.0;
    for y in 0..8 {
        for x in 0..8 {
            let (dx, dy) = shifts[y * 8 + x];
            let expect = tent_sample(&img, x as f64 + dx, y as f64 + dy);
            worst = worst.max((warped.get(x, y) - expect).abs());
        }
    }
    worst
}

/// Largest per-pixel gap between the separable blur and a direct 2D
/// convolution with a square-truncated Gaussian and clamp-to-edge borders.
pub fn blur_oracle_error(seed: u64, sigma: f64) -> f64 {
    let mut rng = Stream::new(seed);
    let n = 16usize;
    let img = GrayImage::from_vec(n, n, (0..n * n).map(|_| rng.uniform()).collect());
    let fast = blur_gaussian(&img, sigma);
    let r = (3.0 * sigma).ceil().max(1.0) as isize;
    let mut worst: f64 = 0.0;
    for y in 0..n as isize {
        for x in 0..n as isize {
            let (mut acc, mut norm) = (0.0, 0.0);
            for j in -r..=r {
                for i in -r..=r {
                    let k = (-((i * i + j * j) as f64) / (2.0 * sigma * sigma)).exp();
                    let sx = (x + i).clamp(0, n as isize - 1) as usize;
                    let sy = (y + j).clamp(0, n as isize - 1) as usize;
                    acc += k * img.get(sx, sy);
                    norm += k;
                }
            }
            worst = worst.max((fast.get(x as usize, y as usize) - acc / norm).abs());
        }
    }
    worst
}

/// EER by an exhaustive sweep: every observed score plus both infinities is
/// tried as a threshold with rates counted by linear scans, then the first
/// sign change of fmr - fnmr is interpolated linearly.
pub fn eer_sweep(mated: &[f64], nonmated: &[f64]) -> f64 {
    let mut ts: Vec<f64> = mated.iter().chain(nonmated).copied().collect();
    ts.push(f64::NEG_INFINITY);
    ts.push(f64::INFINITY);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let rates: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            let fmr = nonmated.iter().filter(|&&s| s >= t).count() as f64 / nonmated.len() as f64;
            let fnmr = mated.iter().filter(|&&s| s < t).count() as f64 / mated.len() as f64;
            (fmr, fnmr)
        })
        .collect();
    for k in 0..rates.len() {
        let (f1, n1) = rates[k];
        if f1 - n1 <= 0.0 {
            if k == 0 {
                return 0.5 * (f1 + n1);
            }
            let (f0, n0) = rates[k - 1];
            // intersection of the two straight segments
            let t = (f0 - n0) / ((f0 - n0) - (f1 - n1));
            return 0.5 * ((f0 + t * (f1 - f0)) + (n0 + t * (n1 - n0)));
        }
    }
    let (f, n) = rates[rates.len() - 1];
    0.5 * (f + n)
}

/// Library EER vs the sweep for 200 mated and 200 non-mated random scores.
pub fn eer_oracle_error(seed: u64) -> f64 {
    let mut rng = Stream::new(seed);
    let mated: Vec<f64> = (0..200).map(|_| (0.6 + 0.15 * rng.normal()).clamp(0.0, 1.0)).collect();
    let nonmated: Vec<f64> = (0..200).map(|_| (0.45 + 0.1 * rng.normal()).clamp(0.0, 1.0)).collect();
    let lib = compute_det(&mated, &nonmated).unwrap().eer();
    (lib - eer_sweep(&mated, &nonmated)).abs()
}

/// Ridge-minus-valley mean luminance on the lit (left) and shadowed (right)
/// halves of a horizontal stripe card lit from the left.
pub fn stripe_card_inversion(strength: f64) -> (f64, f64) {
    let (w, h) = (192, 192);
    let period = 10.0;
    let card = GrayImage::from_fn(w, h, |_, y| 0.5 + 0.5 * (std::f64::consts::TAU * y as f64 / period).cos());
    let ridge = RidgeMap::new(card, 500.0).unwrap();
    let shape = shape_mask_for_dims((w, h), 8, 3.0).unwrap();
    let (img, channel) = colorize(&ridge, &shape, SkinPalette::default().entries()[0], 0.35).unwrap();
    let shadow = build_shadow_mask(&shape, (-1.0, 0.0), 0.8).unwrap();
    let img = apply_shadow(&img, &shadow, 1.0).unwrap();
    let img = apply_ridge_inversion(&img, &channel, &shadow, strength, DEFAULT_LIT_THRESHOLD, DEFAULT_TRANSITION_BAND).unwrap();
    let (cx, _) = shape.centroid();
    let mut sums = [[0.0f64; 2]; 2];
    let mut counts = [[0usize; 2]; 2];
    for y in 0..h {
        for x in 0..w {
            if shape.weight(x, y) < 1.0 {
                continue;
            }
            let r = ridge.image().get(x, y);
            let class = if r < 0.25 {
                0
            } else if r > 0.75 {
                1
            } else {
                continue;
            };
            let half = usize::from(x as f64 > cx);
            sums[half][class] += img.get(x, y).luma();
            counts[half][class] += 1;
        }
    }
    let diff = |half: usize| sums[half][0] / counts[half][0] as f64 - sums[half][1] / counts[half][1] as f64;
    (diff(0), diff(1))
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    cov / (va * vb).sqrt()
}

/// Round-trips a configuration whose preset carries the given rolling range
/// through the TOML loader; true when the loader rejects it.
pub fn roll_config_rejected(preset: fingersynth::generation::PresetName, range: (f64, f64)) -> bool {
    use fingersynth::generation::GenerationConfig;
    let mut config = GenerationConfig::default();
    let mut p = config.preset(preset);
    p.rolling_deg = range;
    config.presets.insert(preset, p);
    let text = config.to_toml_string();
    GenerationConfig::from_toml_str(&text, std::path::Path::new(".")).is_err()
}
