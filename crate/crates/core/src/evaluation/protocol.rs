//! Mated / non-mated comparison protocol over a manifest.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use super::matcher::{combine, Matcher, MatcherParams, Template};
use crate::error::{Error, Result};
use crate::generation::{PresetName, SampleManifest};
use crate::io::load_color_png;
use crate::rng::Stream;

pub const DEFAULT_NONMATED_CAP: usize = 2000;

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolParams {
    pub nonmated_cap: usize,
    /// Seeds the non-mated subsample.
    pub seed: u64,
    pub matcher: MatcherParams,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        Self {
            nonmated_cap: DEFAULT_NONMATED_CAP,
            seed: 0,
            matcher: MatcherParams::default(),
        }
    }
}

/// Comparison pairs as indices into `samples`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairPlan {
    /// Relative paths of the samples taking part, sorted by key.
    pub samples: Vec<String>,
    pub mated: Vec<(usize, usize)>,
    pub nonmated: Vec<(usize, usize)>,
}

/// Mated pairs are all session pairs within an identity; non-mated pairs
/// are first sessions of distinct identities, subsampled to `cap` if needed.
pub fn plan_pairs(manifest: &SampleManifest, preset: PresetName, cap: usize, seed: u64) -> Result<PairPlan> {
    let mut by_identity: BTreeMap<u32, Vec<(u32, String)>> = BTreeMap::new();
    for r in manifest.rows_for(preset) {
        by_identity.entry(r.identity_id).or_default().push((r.session_index, r.path.clone()));
    }
    let eligible: Vec<Vec<(u32, String)>> = by_identity.into_values().filter(|s| s.len() >= 2).collect();
    if eligible.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "preset {preset} needs at least 2 identities with 2 sessions each"
        )));
    }
    let mut samples = Vec::new();
    let mut mated = Vec::new();
    let mut firsts = Vec::new();
    for mut sessions in eligible {
        sessions.sort();
        let base = samples.len();
        let n = sessions.len();
        samples.extend(sessions.into_iter().map(|(_, p)| p));
        firsts.push(base);
        for i in 0..n {
            for j in i + 1..n {
                mated.push((base + i, base + j));
            }
        }
    }
    let mut nonmated: Vec<(usize, usize)> = Vec::new();
    for (k, &a) in firsts.iter().enumerate() {
        for &b in &firsts[k + 1..] {
            nonmated.push((a, b));
        }
    }
    if nonmated.len() > cap {
        let mut rng = Stream::new(seed).derive("nonmated");
        // partial Fisher-Yates
        for i in 0..cap {
            let j = i + rng.index(nonmated.len() - i);
            nonmated.swap(i, j);
        }
        nonmated.truncate(cap);
        nonmated.sort();
    }
    Ok(PairPlan {
        samples,
        mated,
        nonmated,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolScores {
    pub mated: Vec<f64>,
    pub nonmated: Vec<f64>,
}

/// Scores every planned pair. Each sample's rotated spectra are computed
/// once and reused for all pairs it takes part in.
pub fn score_pairs(plan: &PairPlan, templates: &[Template], matcher: &Matcher) -> ProtocolScores {
    let all: Vec<(usize, usize)> = plan.mated.iter().chain(&plan.nonmated).copied().collect();
    let mut partners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); templates.len()];
    for (k, &(a, b)) in all.iter().enumerate() {
        partners[b].push((k, a));
        partners[a].push((k, b));
    }
    // directional[k] holds (a->b, b->a) correlations of pair k
    let directional: Vec<Vec<(usize, usize, f64)>> = partners
        .par_iter()
        .enumerate()
        .filter(|(_, p)| !p.is_empty())
        .map(|(probe, list)| {
            let rotated = matcher.rotated_spectra(&templates[probe]);
            list.iter()
                .map(|&(k, reference)| (k, probe, matcher.directional(&templates[reference], &templates[probe], &rotated)))
                .collect()
        })
        .collect();
    let mut ab = vec![f64::NAN; all.len()];
    let mut ba = vec![f64::NAN; all.len()];
    for (k, probe, c) in directional.into_iter().flatten() {
        if all[k].1 == probe {
            ab[k] = c;
        } else {
            ba[k] = c;
        }
    }
    let scores: Vec<f64> = (0..all.len()).map(|k| combine(ab[k], ba[k]).value()).collect();
    let (m, n) = scores.split_at(plan.mated.len());
    ProtocolScores {
        mated: m.to_vec(),
        nonmated: n.to_vec(),
    }
}

/// Loads the preset's samples relative to `base_dir` and scores them.
pub fn run_protocol(
    manifest: &SampleManifest,
    preset: PresetName,
    base_dir: impl AsRef<Path>,
    params: &ProtocolParams,
) -> Result<ProtocolScores> {
    let plan = plan_pairs(manifest, preset, params.nonmated_cap, params.seed)?;
    let base = base_dir.as_ref();
    let images = plan
        .samples
        .par_iter()
        .map(|p| load_color_png(base.join(p)))
        .collect::<Result<Vec<_>>>()?;
    let dims = images[0].dims();
    let matcher = Matcher::new(dims, params.matcher)?;
    let templates = images
        .par_iter()
        .map(|img| matcher.template(img))
        .collect::<Result<Vec<_>>>()?;
    Ok(score_pairs(&plan, &templates, &matcher))
}
