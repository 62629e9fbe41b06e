//! Word lists to spider points to per-population reports.

use serde::Serialize;

use crate::corpus::{partition_populations, Lexicon, SamplingPlan};
use crate::embed::{embed_triple, EmbedTrace, SpiderPoint};
use crate::error::{Error, Result};
use crate::inference::{analyze, two_sample_t, MeanReport, TwoSampleResult};
use crate::lexdist::{triple_matrix, DistanceMatrix3};
use crate::openbook::{Normalization, OpenBookShape};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisConfig {
    /// Governs both the population split and tie-breaks.
    pub seed: u64,
    pub epsilon: f64,
    pub normalization: Normalization,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { seed: 0, epsilon: 0.0, normalization: Normalization::NMinusOne }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddedTriple {
    pub population_id: u8,
    pub triple_index: usize,
    pub concepts: [String; 3],
    pub matrix: DistanceMatrix3,
    pub point: SpiderPoint,
    pub trace: EmbedTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub languages: [String; 3],
    pub plan: SamplingPlan,
    pub triples: Vec<EmbeddedTriple>,
    pub reports: [MeanReport; 2],
    pub test: TwoSampleResult,
}

fn check_languages(lexicon: &Lexicon, languages: [&str; 3]) -> Result<()> {
    for l in languages {
        lexicon.language_index(l)?;
    }
    if languages[0] == languages[1] || languages[0] == languages[2] || languages[1] == languages[2] {
        return Err(Error::InvalidConfig("the three languages must be distinct".into()));
    }
    Ok(())
}

/// Distance matrix and spider point for every triple of `plan`. Each triple
/// draws its tie-break from a stream keyed by `(seed, population, index)`.
pub fn embed_plan(lexicon: &Lexicon, plan: &SamplingPlan, languages: [&str; 3]) -> Result<Vec<EmbeddedTriple>> {
    check_languages(lexicon, languages)?;
    let mut out = Vec::with_capacity(plan.triples.len());
    for population_id in [1u8, 2] {
        for (triple_index, triple) in plan.population(population_id) {
            let matrix = triple_matrix(lexicon, &triple.concepts, languages)?;
            let mut rng = rng::substream(plan.seed, rng::triple_stream(population_id, triple_index));
            let (point, trace) = embed_triple(&matrix, &mut rng);
            out.push(EmbeddedTriple {
                population_id,
                triple_index,
                concepts: triple.concepts.clone(),
                matrix,
                point,
                trace,
            });
        }
    }
    Ok(out)
}

/// Full analysis of three languages: split, embed, analyze each population
/// and compare them.
pub fn run_analysis(lexicon: &Lexicon, languages: [&str; 3], cfg: &AnalysisConfig) -> Result<Analysis> {
    check_languages(lexicon, languages)?;
    let plan = partition_populations(lexicon, cfg.seed)?;
    let triples = embed_plan(lexicon, &plan, languages)?;
    let shape = OpenBookShape::spider(3)?;
    let report = |population_id: u8| {
        let sample: Vec<_> = triples
            .iter()
            .filter(|t| t.population_id == population_id)
            .map(|t| t.point.to_point())
            .collect();
        analyze(&shape, format!("population-{population_id}"), &sample, cfg.epsilon, cfg.normalization)
    };
    let reports = [report(1)?, report(2)?];
    let test = two_sample_t(&reports[0], &reports[1]);
    Ok(Analysis { languages: languages.map(str::to_owned), plan, triples, reports, test })
}
