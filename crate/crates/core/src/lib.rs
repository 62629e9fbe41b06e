//! Fréchet means and stickiness on spiders and open books, and a pipeline
//! that embeds word triples from aligned Swadesh lists onto the 3-spider.
//!
//! * [`corpus`]: parsing word lists and seeded sampling of triples
//! * [`lexdist`]: first-letter distances and 3×3 distance matrices
//! * [`embed`]: single-linkage embedding of a matrix onto the 3-spider
//! * [`openbook`]: metric, folding, folded means, Fréchet mean and variance
//! * [`inference`]: per-sample reports and the pooled two-sample t-test
//! * [`sim`]: Monte Carlo experiments for the three limit regimes
//! * [`pipeline`]: the end-to-end language analysis

pub mod corpus;
pub mod embed;
pub mod error;
pub mod inference;
pub mod lexdist;
pub mod openbook;
pub mod pipeline;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
