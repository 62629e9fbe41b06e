//! Geometry and first-moment statistics on open books.
//!
//! An open book has `K >= 3` half-space leaves of dimension `d + 1` glued
//! along a shared spine `R^d`. A point on leaf `k` is `(t, s)` with arm
//! coordinate `t > 0` and spine coordinate `s`; spine points have `t = 0`
//! and no leaf. The K-spider is the `d = 0` case, whose spine is the single
//! center point.
//!
//! Distances between points on different leaves reflect one of them across
//! the spine: `|(t_p, s_p) - (-t_q, s_q)|`. Folding onto leaf `k` keeps that
//! leaf positive and sends every other leaf to negative arm values, which
//! turns the leaf-`k` part of the Fréchet function into an ordinary
//! quadratic. At most one folded mean can be positive; its sign pattern
//! decides whether the Fréchet mean sits inside a leaf or sticks to the
//! spine.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Leaf count and spine dimension of an open book.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenBookShape {
    leaves: usize,
    spine_dim: usize,
}

impl OpenBookShape {
    pub fn new(leaves: usize, spine_dim: usize) -> Result<Self> {
        if leaves < 3 {
            return Err(Error::InvalidShape(format!("an open book needs at least 3 leaves, got {leaves}")));
        }
        Ok(Self { leaves, spine_dim })
    }

    /// The K-spider.
    pub fn spider(leaves: usize) -> Result<Self> {
        Self::new(leaves, 0)
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn spine_dim(&self) -> usize {
        self.spine_dim
    }

    pub fn is_spider(&self) -> bool {
        self.spine_dim == 0
    }

    fn check_leaf(&self, leaf: usize) -> Result<()> {
        if leaf >= self.leaves {
            return Err(Error::InvalidLeaf { leaf, leaves: self.leaves });
        }
        Ok(())
    }
}

/// A point of an open book. `leaf` is zero-based; `None` means the spine
/// (the center, for a spider). A point on a leaf always has `arm > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpenBookPoint {
    leaf: Option<usize>,
    arm: f64,
    spine: Vec<f64>,
}

impl OpenBookPoint {
    /// General constructor. A zero arm coordinate puts the point on the
    /// spine regardless of `leaf`.
    pub fn new(leaf: Option<usize>, arm: f64, spine: Vec<f64>) -> Result<Self> {
        if !arm.is_finite() || arm < 0.0 {
            return Err(Error::ShapeMismatch(format!("arm coordinate must be finite and >= 0, got {arm}")));
        }
        if spine.iter().any(|s| !s.is_finite()) {
            return Err(Error::ShapeMismatch("spine coordinates must be finite".into()));
        }
        let leaf = if arm == 0.0 { None } else { leaf };
        if leaf.is_none() && arm != 0.0 {
            return Err(Error::ShapeMismatch("spine point with nonzero arm coordinate".into()));
        }
        Ok(Self { leaf, arm, spine })
    }

    /// Center of a spider.
    pub fn center() -> Self {
        Self { leaf: None, arm: 0.0, spine: Vec::new() }
    }

    /// Point at distance `t` from the center along spider leg `leaf`.
    ///
    /// Panics when `t` is negative or not finite.
    pub fn on_leg(leaf: usize, t: f64) -> Self {
        Self::new(Some(leaf), t, Vec::new()).expect("leg coordinate must be finite and nonnegative")
    }

    pub fn leaf(&self) -> Option<usize> {
        self.leaf
    }

    pub fn arm(&self) -> f64 {
        self.arm
    }

    pub fn spine(&self) -> &[f64] {
        &self.spine
    }

    pub fn is_spine(&self) -> bool {
        self.leaf.is_none()
    }

    pub fn check(&self, shape: &OpenBookShape) -> Result<()> {
        if let Some(k) = self.leaf {
            shape.check_leaf(k)?;
        }
        if self.spine.len() != shape.spine_dim {
            return Err(Error::ShapeMismatch(format!(
                "spine has {} coordinates, shape expects {}",
                self.spine.len(),
                shape.spine_dim
            )));
        }
        Ok(())
    }

    /// Same point with the arm coordinate multiplied by `factor > 0`.
    pub fn scaled_arm(&self, factor: f64) -> Self {
        Self { leaf: self.leaf, arm: self.arm * factor, spine: self.spine.clone() }
    }
}

impl fmt::Display for OpenBookPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.leaf {
            None if self.spine.is_empty() => write!(f, "center"),
            None => write!(f, "spine{:?}", self.spine),
            Some(k) if self.spine.is_empty() => write!(f, "leaf {k} at {}", self.arm),
            Some(k) => write!(f, "leaf {k} at {} spine{:?}", self.arm, self.spine),
        }
    }
}

/// A point after folding onto one leaf: signed arm value plus spine part.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldedVector {
    pub arm: f64,
    pub spine: Vec<f64>,
}

fn spine_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Geodesic distance between two points of the same open book.
pub fn distance(shape: &OpenBookShape, p: &OpenBookPoint, q: &OpenBookPoint) -> Result<f64> {
    p.check(shape)?;
    q.check(shape)?;
    let arm_gap = match (p.leaf, q.leaf) {
        (Some(a), Some(b)) if a != b => p.arm + q.arm,
        _ => p.arm - q.arm,
    };
    if shape.is_spider() {
        return Ok(arm_gap.abs());
    }
    Ok((arm_gap * arm_gap + spine_sq(&p.spine, &q.spine)).sqrt())
}

/// Folding map onto leaf `k`.
pub fn fold(shape: &OpenBookShape, k: usize, p: &OpenBookPoint) -> Result<FoldedVector> {
    shape.check_leaf(k)?;
    p.check(shape)?;
    Ok(FoldedVector { arm: signed_arm(k, p), spine: p.spine.clone() })
}

fn signed_arm(k: usize, p: &OpenBookPoint) -> f64 {
    match p.leaf {
        Some(j) if j == k => p.arm,
        _ => -p.arm,
    }
}

fn check_sample(shape: &OpenBookShape, sample: &[OpenBookPoint]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    sample.iter().try_for_each(|p| p.check(shape))
}

/// Mean of the folded arm values on leaf `k`: the empirical first moment of
/// that leaf.
pub fn folded_mean(shape: &OpenBookShape, k: usize, sample: &[OpenBookPoint]) -> Result<f64> {
    shape.check_leaf(k)?;
    Ok(folded_means(shape, sample)?[k])
}

/// Folded means of every leaf, computed from per-leaf arm sums.
///
/// Each mean is `(own - (total - own)) / n`. For integer-valued arms the
/// sums are exact, so a zero mean is exactly zero.
pub fn folded_means(shape: &OpenBookShape, sample: &[OpenBookPoint]) -> Result<Vec<f64>> {
    check_sample(shape, sample)?;
    let mut own = vec![0.0; shape.leaves];
    let mut total = 0.0;
    for p in sample {
        if let Some(k) = p.leaf {
            own[k] += p.arm;
        }
        total += p.arm;
    }
    let n = sample.len() as f64;
    Ok(own.iter().map(|&o| (o - (total - o)) / n).collect())
}

/// Where the Fréchet mean sits relative to the spine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "leaf", rename_all = "snake_case")]
pub enum Classification {
    /// One leaf has a positive first moment; the mean is inside that leaf.
    Nonsticky(usize),
    /// The largest first moment is zero (within epsilon).
    PartlySticky(usize),
    /// All first moments are negative; the mean is on the spine.
    Sticky,
}

impl Classification {
    pub fn leaf(&self) -> Option<usize> {
        match *self {
            Self::Nonsticky(k) | Self::PartlySticky(k) => Some(k),
            Self::Sticky => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Nonsticky(_) => "nonsticky",
            Self::PartlySticky(_) => "partly_sticky",
            Self::Sticky => "sticky",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.leaf() {
            Some(k) => write!(f, "{}({k})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Classifies a vector of per-leaf first moments.
pub fn classify_moments(moments: &[f64], epsilon: f64) -> Classification {
    let (k, max) = moments
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, m)| if m > best.1 { (i, m) } else { best });
    if max > epsilon {
        Classification::Nonsticky(k)
    } else if max.abs() <= epsilon {
        Classification::PartlySticky(k)
    } else {
        Classification::Sticky
    }
}

pub fn classify(shape: &OpenBookShape, sample: &[OpenBookPoint], epsilon: f64) -> Result<Classification> {
    Ok(classify_moments(&folded_means(shape, sample)?, epsilon))
}

fn spine_mean(shape: &OpenBookShape, sample: &[OpenBookPoint]) -> Vec<f64> {
    let mut acc = vec![0.0; shape.spine_dim];
    for p in sample {
        for (a, s) in acc.iter_mut().zip(&p.spine) {
            *a += s;
        }
    }
    let n = sample.len() as f64;
    acc.iter_mut().for_each(|a| *a /= n);
    acc
}

/// Fréchet sample mean: on the nonsticky leaf at its folded mean, otherwise
/// on the spine. The spine part is the plain mean of spine coordinates.
pub fn frechet_mean(shape: &OpenBookShape, sample: &[OpenBookPoint], epsilon: f64) -> Result<OpenBookPoint> {
    let means = folded_means(shape, sample)?;
    let spine = spine_mean(shape, sample);
    Ok(match classify_moments(&means, epsilon) {
        Classification::Nonsticky(k) => OpenBookPoint::new(Some(k), means[k], spine)?,
        _ => OpenBookPoint::new(None, 0.0, spine)?,
    })
}

/// Empirical Fréchet function: mean squared distance from `x` to the sample.
pub fn frechet_function(shape: &OpenBookShape, x: &OpenBookPoint, sample: &[OpenBookPoint]) -> Result<f64> {
    check_sample(shape, sample)?;
    let mut sum = 0.0;
    for p in sample {
        let d = distance(shape, x, p)?;
        sum += d * d;
    }
    Ok(sum / sample.len() as f64)
}

/// Divisor used for sample variances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Normalization {
    #[serde(rename = "n")]
    N,
    #[default]
    #[serde(rename = "n-1")]
    NMinusOne,
}

impl Normalization {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::N => "n",
            Self::NMinusOne => "n-1",
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" | "N" => Ok(Self::N),
            "n-1" | "N-1" => Ok(Self::NMinusOne),
            other => Err(Error::InvalidConfig(format!("unknown normalization `{other}`"))),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sum of squared distances to `mean`, divided by `n` or `n - 1`.
pub fn frechet_variance(
    shape: &OpenBookShape,
    sample: &[OpenBookPoint],
    mean: &OpenBookPoint,
    normalization: Normalization,
) -> Result<f64> {
    check_sample(shape, sample)?;
    let n = sample.len();
    let divisor = match normalization {
        Normalization::N => n as f64,
        Normalization::NMinusOne if n < 2 => return Err(Error::SampleTooSmall(n)),
        Normalization::NMinusOne => (n - 1) as f64,
    };
    Ok(frechet_function(shape, mean, sample)? * n as f64 / divisor)
}
