//! Monte Carlo checks of the three limit regimes of the spider sample mean.

use rand::distr::weighted::WeightedIndex;
use rand::distr::{Distribution, Uniform};
use rand::Rng;
use rand_distr::Exp;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::analyze;
use crate::openbook::{classify_moments, Classification, Normalization, OpenBookPoint, OpenBookShape};
use crate::rng;

const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Law of the arm coordinate on one leg, supported on `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LegLaw {
    Exponential { rate: f64 },
    Uniform { lo: f64, hi: f64 },
    Point { t: f64 },
}

impl LegLaw {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            LegLaw::Exponential { rate } => rate.is_finite() && rate > 0.0,
            LegLaw::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi,
            LegLaw::Point { t } => t.is_finite() && t >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidDistribution(format!("invalid leg law {self:?}")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            LegLaw::Exponential { rate } => 1.0 / rate,
            LegLaw::Uniform { lo, hi } => 0.5 * (lo + hi),
            LegLaw::Point { t } => t,
        }
    }

    pub fn second_moment(&self) -> f64 {
        match *self {
            LegLaw::Exponential { rate } => 2.0 / (rate * rate),
            LegLaw::Uniform { lo, hi } => (lo * lo + lo * hi + hi * hi) / 3.0,
            LegLaw::Point { t } => t * t,
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            LegLaw::Exponential { rate } => Exp::new(rate).expect("validated rate").sample(rng),
            LegLaw::Uniform { lo, hi } if lo == hi => lo,
            LegLaw::Uniform { lo, hi } => Uniform::new_inclusive(lo, hi).expect("validated bounds").sample(rng),
            LegLaw::Point { t } => t,
        }
    }
}

/// Mixture of an atom at the center (weight `w0`) and one law per leg
/// (weights `w1..wK`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpiderDistribution {
    shape: OpenBookShape,
    center_weight: f64,
    leaf_weights: Vec<f64>,
    legs: Vec<LegLaw>,
    #[serde(skip)]
    picker: WeightedIndex<f64>,
}

impl SpiderDistribution {
    pub fn new(leaves: usize, center_weight: f64, leaf_weights: Vec<f64>, legs: Vec<LegLaw>) -> Result<Self> {
        let shape = OpenBookShape::spider(leaves)?;
        if leaf_weights.len() != leaves || legs.len() != leaves {
            return Err(Error::InvalidDistribution(format!(
                "expected {leaves} leaf weights and legs, got {} and {}",
                leaf_weights.len(),
                legs.len()
            )));
        }
        let all = std::iter::once(center_weight).chain(leaf_weights.iter().copied());
        let mut total = 0.0;
        for w in all {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidDistribution(format!("weight {w} outside [0, 1]")));
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        legs.iter().try_for_each(LegLaw::validate)?;
        let picker = WeightedIndex::new(std::iter::once(center_weight).chain(leaf_weights.iter().copied()))
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        Ok(Self { shape, center_weight, leaf_weights, legs, picker })
    }

    pub fn shape(&self) -> &OpenBookShape {
        &self.shape
    }

    pub fn center_weight(&self) -> f64 {
        self.center_weight
    }

    pub fn leaf_weights(&self) -> &[f64] {
        &self.leaf_weights
    }

    pub fn legs(&self) -> &[LegLaw] {
        &self.legs
    }

    /// Population first moments `m_k = v_k - sum_{i != k} v_i` with
    /// `v_i = w_i E[T_i]`.
    pub fn population_moments(&self) -> Vec<f64> {
        let v: Vec<f64> = self.leaf_weights.iter().zip(&self.legs).map(|(w, l)| w * l.mean()).collect();
        let total: f64 = v.iter().sum();
        v.iter().map(|&vk| vk - (total - vk)).collect()
    }

    pub fn classification(&self) -> Classification {
        classify_moments(&self.population_moments(), 0.0)
    }

    /// Variance of the folded arm value on leaf `k`.
    pub fn folded_variance(&self, k: usize) -> f64 {
        let second: f64 = self.leaf_weights.iter().zip(&self.legs).map(|(w, l)| w * l.second_moment()).sum();
        let m = self.population_moments()[k];
        second - m * m
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> OpenBookPoint {
        match self.picker.sample(rng) {
            0 => OpenBookPoint::center(),
            i => OpenBookPoint::on_leg(i - 1, self.legs[i - 1].sample(rng)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of one replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepRecord {
    pub rep: usize,
    pub classification: Classification,
    pub folded_means: Vec<f64>,
    pub mean: OpenBookPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub config: SimConfig,
    pub population_moments: Vec<f64>,
    pub population_classification: Classification,
    /// Leaf with the largest population moment (lowest index on ties).
    pub designated_leaf: usize,
    pub fraction_at_center: f64,
    /// Folded mean of the designated leaf, per replication.
    pub designated_means: Vec<f64>,
    /// `sqrt(n) * (m_hat - m)` for the designated leaf, per replication.
    pub standardized: Vec<f64>,
    pub records: Vec<RepRecord>,
}

/// Draws `reps` samples of size `n` and analyzes each one. Replication `r`
/// uses its own generator stream, so the output depends only on
/// `(dist, cfg)`.
pub fn run_experiment(dist: &SpiderDistribution, cfg: &SimConfig) -> Result<SimSummary> {
    cfg.validate()?;
    let moments = dist.population_moments();
    let designated_leaf = moments
        .iter()
        .enumerate()
        .fold(0, |best, (i, &m)| if m > moments[best] { i } else { best });
    let target = moments[designated_leaf];
    let root_n = (cfg.n as f64).sqrt();

    let mut records = Vec::with_capacity(cfg.reps);
    let mut sample = Vec::with_capacity(cfg.n);
    for rep in 0..cfg.reps {
        let mut rng = rng::substream(cfg.seed, rng::replication_stream(rep));
        sample.clear();
        sample.extend((0..cfg.n).map(|_| dist.sample_point(&mut rng)));
        let report = analyze(dist.shape(), rep.to_string(), &sample, 0.0, Normalization::N)?;
        records.push(RepRecord {
            rep,
            classification: report.classification,
            folded_means: report.folded_means,
            mean: report.mean,
        });
    }

    let at_center = records.iter().filter(|r| r.mean.is_spine()).count();
    let designated_means: Vec<f64> = records.iter().map(|r| r.folded_means[designated_leaf]).collect();
    let standardized = designated_means.iter().map(|m| root_n * (m - target)).collect();
    Ok(SimSummary {
        config: *cfg,
        population_classification: dist.classification(),
        population_moments: moments,
        designated_leaf,
        fraction_at_center: at_center as f64 / cfg.reps as f64,
        designated_means,
        standardized,
        records,
    })
}
