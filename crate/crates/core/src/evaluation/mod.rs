//! Proxy quality, correlation matcher, comparison protocol and DET metrics.

mod det;
mod harness;
mod matcher;
mod protocol;
mod quality;
mod report;
pub mod spectral;

pub use det::{compute_det, DetCurve, DetPoint};
pub use harness::{evaluate_manifest, export_grayscale, manifest_qualities, Evaluation, PresetEvaluation};
pub use matcher::{combine, match_score, match_score_with, Matcher, MatcherParams, RotatedSpectrum, SimilarityScore, Template};
pub use protocol::{plan_pairs, run_protocol, score_pairs, PairPlan, ProtocolParams, ProtocolScores, DEFAULT_NONMATED_CAP};
pub use quality::{
    proxy_quality, proxy_quality_with, QualityComponents, QualityParams, QualityReport, QualityScore, QualityWeights,
};
pub use report::{emit_report, read_det_csv, summarize, write_det_csv, ReportFiles, Summary, REPORT_FMR};
