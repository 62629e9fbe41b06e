//! Per-sample reports and two-sample inference on the nonsticky leaf.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::openbook::{
    classify_moments, folded_means, frechet_mean, frechet_variance, Classification, Normalization, OpenBookPoint, OpenBookShape,
};

/// Summary of one sample of open-book points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanReport {
    pub sample_id: String,
    pub n: usize,
    pub folded_means: Vec<f64>,
    pub classification: Classification,
    pub mean: OpenBookPoint,
    pub variance: f64,
    pub normalization: Normalization,
}

impl MeanReport {
    pub fn regime(&self) -> AsymptoticRegime {
        asymptotic_regime(self.classification)
    }
}

/// Limit law of the scaled sample mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticRegime {
    Normal,
    TruncatedNormal,
    PointMass,
}

pub fn asymptotic_regime(c: Classification) -> AsymptoticRegime {
    match c {
        Classification::Nonsticky(_) => AsymptoticRegime::Normal,
        Classification::PartlySticky(_) => AsymptoticRegime::TruncatedNormal,
        Classification::Sticky => AsymptoticRegime::PointMass,
    }
}

/// Folded means, classification, Fréchet mean and Fréchet variance of a
/// sample.
pub fn analyze(
    shape: &OpenBookShape,
    sample_id: impl Into<String>,
    sample: &[OpenBookPoint],
    epsilon: f64,
    normalization: Normalization,
) -> Result<MeanReport> {
    let means = folded_means(shape, sample)?;
    let classification = classify_moments(&means, epsilon);
    let mean = frechet_mean(shape, sample, epsilon)?;
    let variance = frechet_variance(shape, sample, &mean, normalization)?;
    Ok(MeanReport {
        sample_id: sample_id.into(),
        n: sample.len(),
        folded_means: means,
        classification,
        mean,
        variance,
        normalization,
    })
}

/// Standard pooled variance `((n1-1)s1² + (n2-1)s2²) / (n1+n2-2)`.
pub fn pooled_variance(s1sq: f64, n1: usize, s2sq: f64, n2: usize) -> Result<f64> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::SampleTooSmall(n1.min(n2)));
    }
    if !(s1sq >= 0.0 && s2sq >= 0.0) {
        return Err(Error::InvalidConfig("variances must be nonnegative".into()));
    }
    Ok(pooled(s1sq, n1, s2sq, n2))
}

fn pooled(s1sq: f64, n1: usize, s2sq: f64, n2: usize) -> f64 {
    ((n1 - 1) as f64 * s1sq + (n2 - 1) as f64 * s2sq) / (n1 + n2 - 2) as f64
}

/// Pooled two-sample t statistic from summary numbers.
pub fn pooled_t(mean1: f64, mean2: f64, pooled_variance: f64, n1: usize, n2: usize) -> f64 {
    let diff = mean1 - mean2;
    if diff == 0.0 {
        return 0.0;
    }
    diff / (pooled_variance * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoSampleResult {
    /// Unset unless both samples are nonsticky on the same leaf.
    pub t: Option<f64>,
    pub df: usize,
    pub pooled_variance: f64,
    pub valid: bool,
    pub regime: AsymptoticRegime,
    /// Common nonsticky leaf when valid.
    pub leaf: Option<usize>,
}

impl TwoSampleResult {
    /// Two-sided p-value from the t distribution with `df` degrees of
    /// freedom. Only defined for a valid result in the normal regime.
    pub fn p_value(&self) -> Option<f64> {
        let t = self.t?;
        if !self.valid || self.regime != AsymptoticRegime::Normal || self.df == 0 || !t.is_finite() {
            return None;
        }
        let dist = StudentsT::new(0.0, 1.0, self.df as f64).ok()?;
        Some(2.0 * dist.cdf(-t.abs()))
    }
}

/// Pooled t-test of the Fréchet means of two reports.
///
/// Comparisons that are not both nonsticky on the same leaf come back with
/// `valid = false` and the regime of the stickier sample; this is not an
/// error.
pub fn two_sample_t(r1: &MeanReport, r2: &MeanReport) -> TwoSampleResult {
    let df = (r1.n + r2.n).saturating_sub(2);
    let pooled_variance = if df > 0 { pooled(r1.variance, r1.n, r2.variance, r2.n) } else { 0.0 };
    let regime = r1.regime().max(r2.regime());
    match (r1.classification, r2.classification) {
        (Classification::Nonsticky(a), Classification::Nonsticky(b)) if a == b && df > 0 => TwoSampleResult {
            t: Some(pooled_t(r1.mean.arm(), r2.mean.arm(), pooled_variance, r1.n, r2.n)),
            df,
            pooled_variance,
            valid: true,
            regime,
            leaf: Some(a),
        },
        _ => TwoSampleResult { t: None, df, pooled_variance, valid: false, regime, leaf: None },
    }
}
