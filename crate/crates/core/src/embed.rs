//! Single-linkage embedding of a three-language distance matrix onto the
//! 3-spider.
//!
//! The language joined last becomes the leaf and the height of that final
//! join becomes the arm coordinate. When all three distances are equal
//! everything merges at once and the point is the center.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::lexdist::DistanceMatrix3;
use crate::openbook::OpenBookPoint;

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Embedded datum: a leaf (index into the matrix labels) and arm coordinate.
/// `leaf` is `None` exactly when `t == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiderPoint {
    pub leaf: Option<usize>,
    pub t: f64,
}

impl SpiderPoint {
    pub const CENTER: SpiderPoint = SpiderPoint { leaf: None, t: 0.0 };

    pub fn new(leaf: usize, t: f64) -> Self {
        if t == 0.0 {
            Self::CENTER
        } else {
            Self { leaf: Some(leaf), t }
        }
    }

    pub fn to_point(self) -> OpenBookPoint {
        match self.leaf {
            Some(k) => OpenBookPoint::on_leg(k, self.t),
            None => OpenBookPoint::center(),
        }
    }

    /// Leaf label text: the language name, or `CENTER`.
    pub fn label<'a>(&self, labels: &'a [String; 3]) -> &'a str {
        self.leaf.map_or("CENTER", |k| labels[k].as_str())
    }
}

/// Which of the four clustering situations produced a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum EmbedCase {
    /// All three distances equal.
    Equidistant = 1,
    /// Unique closest pair; the outlier is equally far from both.
    EquidistantOutlier = 2,
    /// Unique closest pair; the outlier is nearer one of them.
    NearerOutlier = 3,
    /// Two pairs tie for the minimum; one was drawn at random.
    TiedMinimum = 4,
}

impl EmbedCase {
    pub fn id(self) -> u8 {
        self as u8
    }
}

impl From<EmbedCase> for u8 {
    fn from(c: EmbedCase) -> u8 {
        c.id()
    }
}

impl TryFrom<u8> for EmbedCase {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(Self::Equidistant),
            2 => Ok(Self::EquidistantOutlier),
            3 => Ok(Self::NearerOutlier),
            4 => Ok(Self::TiedMinimum),
            _ => Err(format!("case id must be 1..=4, got {v}")),
        }
    }
}

impl fmt::Display for EmbedCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedTrace {
    pub case: EmbedCase,
    /// First merged pair; `None` when all three merge together.
    pub merged_pair: Option<[usize; 2]>,
    pub tie_broken: bool,
}

/// Embeds one distance matrix. Draws from `rng` only for a tied minimum.
pub fn embed_triple<R: Rng + ?Sized>(d: &DistanceMatrix3, rng: &mut R) -> (SpiderPoint, EmbedTrace) {
    let dist = |(a, b): (usize, usize)| d.get(a, b);
    let values = PAIRS.map(dist);
    if values[0] == values[1] && values[1] == values[2] {
        let trace = EmbedTrace { case: EmbedCase::Equidistant, merged_pair: None, tie_broken: false };
        return (SpiderPoint::CENTER, trace);
    }

    let min = *values.iter().min().expect("three values");
    let tied: Vec<(usize, usize)> = PAIRS.into_iter().filter(|&p| dist(p) == min).collect();
    // three-way ties were handled above
    let (pair, tie_broken) = match tied.as_slice() {
        [only] => (*only, false),
        [first, second] => (if rng.random_bool(0.5) { *first } else { *second }, true),
        _ => unreachable!("all-equal distances are the center case"),
    };

    let (x, y) = pair;
    let z = 3 - x - y;
    let (dxz, dyz) = (d.get(x, z), d.get(y, z));
    let case = if tie_broken {
        EmbedCase::TiedMinimum
    } else if dxz == dyz {
        EmbedCase::EquidistantOutlier
    } else {
        EmbedCase::NearerOutlier
    };
    let point = SpiderPoint::new(z, f64::from(dxz.min(dyz)));
    (point, EmbedTrace { case, merged_pair: Some([x, y]), tie_broken })
}
