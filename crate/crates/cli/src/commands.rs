use std::fs;
use std::path::Path;

use lexspider::corpus::{Lexicon, PLAN_FORMAT, PLAN_VERSION};
use lexspider::inference::{AsymptoticRegime, MeanReport, TwoSampleResult};
use lexspider::openbook::{Classification, Normalization, OpenBookPoint};
use lexspider::pipeline::{embed_plan, run_analysis, AnalysisConfig};
use lexspider::sim::{run_experiment, LegLaw, SimConfig, SpiderDistribution};
use serde::{Deserialize, Serialize};

use crate::output::{num, render_csv, write_atomic, Document, RunManifest};
use crate::{Failure, Format, LexiconArgs};

fn three_languages(langs: &[String]) -> Result<[&str; 3], Failure> {
    match langs {
        [a, b, c] => Ok([a.as_str(), b.as_str(), c.as_str()]),
        _ => Err(Failure::Usage(format!("expected exactly 3 languages, got {}", langs.len()))),
    }
}

fn load_lexicon(path: &Path, languages: &[&str]) -> Result<Lexicon, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::io(path, e))?;
    Lexicon::parse_selected(&bytes, languages).map_err(|e| match e {
        lexspider::Error::Parse { .. } | lexspider::Error::NoConcepts => {
            Failure::Input(format!("{}: {e}", path.display()))
        }
        other => other.into(),
    })
}

fn lexicon_manifest(command: &'static str, format: &'static str, args: &LexiconArgs) -> RunManifest {
    let mut m = RunManifest::new(command, format);
    m.inputs = vec![args.lexicon.display().to_string()];
    m.languages = args.languages.clone();
    m.seed = args.seed;
    m
}

fn regime_name(r: AsymptoticRegime) -> &'static str {
    match r {
        AsymptoticRegime::Normal => "normal",
        AsymptoticRegime::TruncatedNormal => "truncated_normal",
        AsymptoticRegime::PointMass => "point_mass",
    }
}

fn leaf_name(languages: &[String; 3], leaf: Option<usize>) -> String {
    leaf.map_or_else(|| "CENTER".to_owned(), |k| languages[k].clone())
}

#[derive(Serialize)]
struct LeafMean<'a> {
    language: &'a str,
    folded_mean: f64,
}

#[derive(Serialize)]
struct MeanView {
    leaf: String,
    t: f64,
}

#[derive(Serialize)]
struct ReportView<'a> {
    sample_id: &'a str,
    n: usize,
    folded_means: Vec<LeafMean<'a>>,
    classification: &'static str,
    classification_leaf: Option<&'a str>,
    mean: MeanView,
    variance: f64,
    normalization: Normalization,
    regime: &'static str,
}

impl<'a> ReportView<'a> {
    fn new(r: &'a MeanReport, languages: &'a [String; 3]) -> Self {
        Self {
            sample_id: &r.sample_id,
            n: r.n,
            folded_means: languages
                .iter()
                .zip(&r.folded_means)
                .map(|(l, &m)| LeafMean { language: l, folded_mean: m })
                .collect(),
            classification: r.classification.name(),
            classification_leaf: r.classification.leaf().map(|k| languages[k].as_str()),
            mean: MeanView { leaf: leaf_name(languages, r.mean.leaf()), t: r.mean.arm() },
            variance: r.variance,
            normalization: r.normalization,
            regime: regime_name(r.regime()),
        }
    }
}

#[derive(Serialize)]
struct TestView {
    t: Option<f64>,
    df: usize,
    pooled_variance: f64,
    valid: bool,
    regime: &'static str,
    leaf: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_value: Option<Option<f64>>,
}

impl TestView {
    fn new(t: &TwoSampleResult, languages: &[String; 3], p_value: bool) -> Self {
        Self {
            t: t.t,
            df: t.df,
            pooled_variance: t.pooled_variance,
            valid: t.valid,
            regime: regime_name(t.regime),
            leaf: t.leaf.map(|k| languages[k].clone()),
            p_value: p_value.then(|| t.p_value()),
        }
    }
}

#[derive(Serialize)]
struct AnalysisBody<'a> {
    languages: &'a [String; 3],
    reports: Vec<ReportView<'a>>,
    test: TestView,
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn analyze(
    args: &LexiconArgs,
    epsilon: f64,
    normalization: Normalization,
    format: Format,
    p_value: bool,
) -> Result<(), Failure> {
    let langs = three_languages(&args.languages)?;
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Failure::Usage(format!("epsilon must be finite and >= 0, got {epsilon}")));
    }
    let lexicon = load_lexicon(&args.lexicon, &langs)?;
    let cfg = AnalysisConfig { seed: args.seed, epsilon, normalization };
    let analysis = run_analysis(&lexicon, langs, &cfg)?;
    let languages = &analysis.languages;

    let mut manifest = lexicon_manifest("analyze", format.as_str(), args);
    manifest.epsilon = Some(epsilon);
    manifest.normalization = Some(normalization.to_string());

    let plan_doc = Document { manifest: &manifest, format: PLAN_FORMAT, version: PLAN_VERSION, body: &analysis.plan };
    write_atomic(&args.out, "plan.json", &plan_doc.render())?;

    let test = TestView::new(&analysis.test, languages, p_value);
    match format {
        Format::Structured => {
            let body = AnalysisBody {
                languages,
                reports: analysis.reports.iter().map(|r| ReportView::new(r, languages)).collect(),
                test,
            };
            let doc = Document { manifest: &manifest, format: "lexspider.analysis", version: 1, body };
            write_atomic(&args.out, "analysis.json", &doc.render())?;
        }
        Format::Csv => {
            let mut header: Vec<String> = vec!["population".into(), "n".into()];
            header.extend(languages.iter().map(|l| format!("m_hat_{l}")));
            header.extend(
                ["classification", "classification_leaf", "mean_leaf", "mean_t", "variance", "normalization", "regime"]
                    .map(String::from),
            );
            let rows = analysis.reports.iter().map(|r| {
                let v = ReportView::new(r, languages);
                let mut row = vec![v.sample_id.to_owned(), v.n.to_string()];
                row.extend(r.folded_means.iter().map(|&m| num(m)));
                row.extend([
                    v.classification.to_owned(),
                    v.classification_leaf.unwrap_or("").to_owned(),
                    v.mean.leaf,
                    num(v.mean.t),
                    num(v.variance),
                    v.normalization.to_string(),
                    v.regime.to_owned(),
                ]);
                row
            });
            write_atomic(&args.out, "reports.csv", &render_csv(&manifest, &header, rows))?;

            let mut header: Vec<String> =
                ["t", "df", "pooled_variance", "valid", "regime", "leaf"].map(String::from).to_vec();
            let mut row = vec![
                opt_num(test.t),
                test.df.to_string(),
                num(test.pooled_variance),
                test.valid.to_string(),
                test.regime.to_owned(),
                test.leaf.clone().unwrap_or_default(),
            ];
            if let Some(p) = test.p_value {
                header.push("p_value".into());
                row.push(opt_num(p));
            }
            write_atomic(&args.out, "ttest.csv", &render_csv(&manifest, &header, [row]))?;
        }
    }

    for r in &analysis.reports {
        let means: Vec<String> = languages.iter().zip(&r.folded_means).map(|(l, m)| format!("{l} {m:.3}")).collect();
        let cls = match r.classification {
            Classification::Sticky => "sticky".to_owned(),
            c => format!("{} ({})", c.name(), leaf_name(languages, c.leaf())),
        };
        println!("{}: n={} {} -> {cls}, variance {:.3}", r.sample_id, r.n, means.join(", "), r.variance);
    }
    match analysis.test.t {
        Some(t) => println!("two-sample t = {t:.4} (df {})", analysis.test.df),
        None => println!("two-sample t not applicable ({})", regime_name(analysis.test.regime)),
    }
    Ok(())
}

pub fn embed(args: &LexiconArgs) -> Result<(), Failure> {
    let langs = three_languages(&args.languages)?;
    let lexicon = load_lexicon(&args.lexicon, &langs)?;
    let plan = lexspider::corpus::partition_populations(&lexicon, args.seed)?;
    let triples = embed_plan(&lexicon, &plan, langs)?;
    let languages = langs.map(str::to_owned);
    let manifest = lexicon_manifest("embed", "csv", args);

    let header = ["population", "triple_index", "case_id", "leaf", "t", "tie_broken"].map(String::from);
    let rows = triples.iter().map(|t| {
        vec![
            t.population_id.to_string(),
            t.triple_index.to_string(),
            t.trace.case.id().to_string(),
            leaf_name(&languages, t.point.leaf),
            num(t.point.t),
            t.trace.tie_broken.to_string(),
        ]
    });
    write_atomic(&args.out, "embedding.csv", &render_csv(&manifest, &header, rows))?;

    let header = ["population", "triple_index", "lang_a", "lang_b", "distance"].map(String::from);
    let rows = triples.iter().flat_map(|t| {
        [(0, 1), (0, 2), (1, 2)].map(|(a, b)| {
            vec![
                t.population_id.to_string(),
                t.triple_index.to_string(),
                languages[a].clone(),
                languages[b].clone(),
                t.matrix.get(a, b).to_string(),
            ]
        })
    });
    write_atomic(&args.out, "distances.csv", &render_csv(&manifest, &header, rows))?;

    let ties = triples.iter().filter(|t| t.trace.tie_broken).count();
    println!("embedded {} triples ({ties} tie-breaks)", triples.len());
    Ok(())
}

/// One leg of a simulated distribution in the TOML config.
#[derive(Debug, Deserialize)]
struct LegSpec {
    weight: f64,
    #[serde(flatten)]
    law: LegLaw,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimFile {
    #[serde(default)]
    seed: u64,
    n: usize,
    reps: usize,
    #[serde(default)]
    center_weight: f64,
    legs: Vec<LegSpec>,
}

#[derive(Serialize)]
struct SimSummaryBody<'a> {
    config: &'a SimConfig,
    distribution: &'a SpiderDistribution,
    population_moments: &'a [f64],
    population_classification: String,
    designated_leaf: usize,
    fraction_at_center: f64,
    designated_mean_average: f64,
    standardized_mean: f64,
    standardized_variance: f64,
    population_folded_variance: f64,
}

fn leaf1(p: &OpenBookPoint) -> String {
    p.leaf().map_or_else(|| "CENTER".to_owned(), |k| (k + 1).to_string())
}

fn classification1(c: Classification) -> String {
    match c.leaf() {
        Some(k) => format!("{}:{}", c.name(), k + 1),
        None => c.name().to_owned(),
    }
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var)
}

pub fn simulate(config: &Path, out: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(config).map_err(|e| Failure::io(config, e))?;
    let file: SimFile =
        toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
    let (weights, legs): (Vec<f64>, Vec<LegLaw>) = file.legs.iter().map(|l| (l.weight, l.law)).unzip();
    let dist = SpiderDistribution::new(legs.len(), file.center_weight, weights, legs)?;
    let cfg = SimConfig { n: file.n, reps: file.reps, seed: file.seed };
    let summary = run_experiment(&dist, &cfg)?;

    let mut manifest = RunManifest::new("simulate", "csv");
    manifest.inputs = vec![config.display().to_string()];
    manifest.seed = cfg.seed;

    let leaves = dist.shape().leaves();
    let mut header: Vec<String> = vec!["rep".into(), "classification".into()];
    header.extend((1..=leaves).map(|k| format!("m_hat_{k}")));
    header.extend(["mean_leaf".into(), "mean_t".into()]);
    let rows = summary.records.iter().map(|r| {
        let mut row = vec![r.rep.to_string(), classification1(r.classification)];
        row.extend(r.folded_means.iter().map(|&m| num(m)));
        row.extend([leaf1(&r.mean), num(r.mean.arm())]);
        row
    });
    write_atomic(out, "replications.csv", &render_csv(&manifest, &header, rows))?;

    let (standardized_mean, standardized_variance) = mean_var(&summary.standardized);
    let body = SimSummaryBody {
        config: &cfg,
        distribution: &dist,
        population_moments: &summary.population_moments,
        population_classification: classification1(summary.population_classification),
        designated_leaf: summary.designated_leaf + 1,
        fraction_at_center: summary.fraction_at_center,
        designated_mean_average: mean_var(&summary.designated_means).0,
        standardized_mean,
        standardized_variance,
        population_folded_variance: dist.folded_variance(summary.designated_leaf),
    };
    let mut structured = manifest.clone();
    structured.format = "structured";
    let doc = Document { manifest: &structured, format: "lexspider.simulation", version: 1, body };
    write_atomic(out, "summary.json", &doc.render())?;

    println!(
        "population {}; fraction at center {} over {} replications of n = {}",
        classification1(summary.population_classification),
        summary.fraction_at_center,
        cfg.reps,
        cfg.n
    );
    Ok(())
}
