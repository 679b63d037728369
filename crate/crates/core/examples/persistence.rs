//! Persistence classes: what stays fixed per identity and how the
//! alteration factor lets the low-contrast mask drift between sessions.
//!
//! cargo run --release --example persistence

use fingersynth::generation::{blend_masks, derive_streams, Stage};
use fingersynth::ridge::shape_mask_for_dims;
use fingersynth::subject::build_low_contrast_mask;

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

fn main() -> fingersynth::Result<()> {
    for stage in Stage::ALL {
        println!("{:<15} {:?}", stage.name(), stage.class(0.3));
    }
    let shape = shape_mask_for_dims((208, 280), 12, 4.0)?;
    let mask = |seed: u64, session: u32, alpha: f64| -> fingersynth::Result<_> {
        let plan = derive_streams(seed, session, alpha)?;
        let id = build_low_contrast_mask(&shape, &mut plan.stream(Stage::LowContrast), (3, 3), (20.0, 30.0))?;
        let ses = build_low_contrast_mask(&shape, &mut plan.session_stream(Stage::LowContrast), (3, 3), (20.0, 30.0))?;
        blend_masks(&id, &ses, alpha)
    };
    for alpha in [0.0, 0.3, 0.7, 1.0] {
        let a = mask(77, 0, alpha)?;
        let b = mask(77, 1, alpha)?;
        println!(
            "alteration {alpha:.1}: session 0 vs 1 mask correlation {:.3}",
            correlation(a.weights().pixels(), b.weights().pixels())
        );
    }
    Ok(())
}
