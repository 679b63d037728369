//! FMR / FNMR trade-off and equal error rate.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetPoint {
    pub threshold: f64,
    /// Fraction of non-mated scores at or above the threshold.
    pub fmr: f64,
    /// Fraction of mated scores below the threshold.
    pub fnmr: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetCurve {
    points: Vec<DetPoint>,
    eer: f64,
}

impl DetCurve {
    /// Checks ordering and monotonicity, then derives the EER.
    pub fn from_points(points: Vec<DetPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::EmptyScores);
        }
        for w in points.windows(2) {
            if !(w[0].threshold < w[1].threshold && w[1].fmr <= w[0].fmr && w[1].fnmr >= w[0].fnmr) {
                return Err(Error::InvalidParameter {
                    name: "det points",
                    reason: "thresholds must increase with non-increasing fmr and non-decreasing fnmr".into(),
                });
            }
        }
        let eer = equal_error_rate(&points);
        Ok(Self { points, eer })
    }

    pub fn points(&self) -> &[DetPoint] {
        &self.points
    }

    pub fn eer(&self) -> f64 {
        self.eer
    }

    /// Lowest FNMR among operating points with FMR at most `target`.
    pub fn fnmr_at_fmr(&self, target: f64) -> f64 {
        self.points
            .iter()
            .filter(|p| p.fmr <= target)
            .map(|p| p.fnmr)
            .fold(1.0, f64::min)
    }
}

/// Interpolates linearly between the last threshold with `fmr > fnmr` and
/// the first with `fmr <= fnmr`.
fn equal_error_rate(points: &[DetPoint]) -> f64 {
    let d = |p: &DetPoint| p.fmr - p.fnmr;
    match points.iter().position(|p| d(p) <= 0.0) {
        None => {
            let p = points[points.len() - 1];
            0.5 * (p.fmr + p.fnmr)
        }
        Some(0) => 0.5 * (points[0].fmr + points[0].fnmr),
        Some(i) => {
            let (a, b) = (points[i - 1], points[i]);
            let (da, db) = (d(&a), d(&b));
            if db == 0.0 {
                return b.fmr;
            }
            let t = da / (da - db);
            let fmr = a.fmr + t * (b.fmr - a.fmr);
            let fnmr = a.fnmr + t * (b.fnmr - a.fnmr);
            0.5 * (fmr + fnmr)
        }
    }
}

fn check_scores(scores: &[f64]) -> Result<()> {
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::param("scores", "must not contain NaN"));
    }
    Ok(())
}

pub fn compute_det(mated: &[f64], nonmated: &[f64]) -> Result<DetCurve> {
    check_scores(mated)?;
    check_scores(nonmated)?;
    let mut m = mated.to_vec();
    let mut n = nonmated.to_vec();
    m.sort_by(f64::total_cmp);
    n.sort_by(f64::total_cmp);
    let mut thresholds: Vec<f64> = m.iter().chain(&n).copied().collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    thresholds.insert(0, f64::NEG_INFINITY);
    thresholds.push(f64::INFINITY);

    let (nm, nn) = (m.len() as f64, n.len() as f64);
    let points = thresholds
        .into_iter()
        .map(|t| {
            // counts below t via partition points on the sorted lists
            let mated_below = m.partition_point(|&s| s < t);
            let nonmated_below = n.partition_point(|&s| s < t);
            DetPoint {
                threshold: t,
                fmr: (n.len() - nonmated_below) as f64 / nn,
                fnmr: mated_below as f64 / nm,
            }
        })
        .collect();
    DetCurve::from_points(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_separation() {
        let c = compute_det(&[0.9, 0.8], &[0.1, 0.2]).unwrap();
        assert_eq!(c.eer(), 0.0);
    }

    #[test]
    fn indistinguishable() {
        let c = compute_det(&[0.5], &[0.5]).unwrap();
        assert_eq!(c.eer(), 0.5);
    }

    #[test]
    fn sentinels_present() {
        let c = compute_det(&[0.3, 0.7], &[0.1]).unwrap();
        let p = c.points();
        assert_eq!((p[0].fmr, p[0].fnmr), (1.0, 0.0));
        let last = p[p.len() - 1];
        assert_eq!((last.fmr, last.fnmr), (0.0, 1.0));
    }

    #[test]
    fn empty_lists_fail() {
        assert!(matches!(compute_det(&[], &[0.1]), Err(Error::EmptyScores)));
        assert!(matches!(compute_det(&[0.1], &[]), Err(Error::EmptyScores)));
    }

    #[test]
    fn fully_inverted_scores() {
        let c = compute_det(&[0.1, 0.2], &[0.8, 0.9]).unwrap();
        assert_eq!(c.eer(), 1.0);
    }
}
