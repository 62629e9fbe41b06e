
use lexspider::openbook::Classification;
use lexspider::sim::{run_experiment, LegLaw, SimConfig, SpiderDistribution};

fn sticky() -> SpiderDistribution {
    let w = 1.0 / 3.0;
    SpiderDistribution::new(3, 0.0, vec![w; 3], vec![LegLaw::Point { t: 1.0 }; 3]).unwrap()
}

/// Leaf 1 carries half the mass and its moment is exactly zero; the other
/// two leaves are strictly negative.
fn partly_sticky() -> SpiderDistribution {
    SpiderDistribution::new(3, 0.0, vec![0.5, 0.25, 0.25], vec![LegLaw::Point { t: 1.0 }; 3]).unwrap()
}

fn nonsticky() -> SpiderDistribution {
    SpiderDistribution::new(3, 0.0, vec![1.0, 0.0, 0.0], vec![LegLaw::Exponential { rate: 1.0 }; 3]).unwrap()
}

#[test]
fn sticky_mean_stays_at_center() {
    let s = run_experiment(&sticky(), &SimConfig { n: 200, reps: 500, seed: 1 }).unwrap();
    assert_eq!(s.population_classification, Classification::Sticky);
    assert_eq!(s.fraction_at_center, 1.0);
}

#[test]
fn partly_sticky_mean_is_at_center_about_half_the_time() {
    let d = partly_sticky();
    assert_eq!(d.classification(), Classification::PartlySticky(0));
    let s = run_experiment(&d, &SimConfig { n: 1000, reps: 2000, seed: 2 }).unwrap();
    assert!((0.45..=0.55).contains(&s.fraction_at_center), "{}", s.fraction_at_center);

    // off the center the scaled mean follows a half-normal: E|Z| = sigma sqrt(2/pi)
    let positive: Vec<f64> = s.standardized.iter().copied().filter(|&z| z > 0.0).collect();
    let sigma = d.folded_variance(0).sqrt();
    let expected = sigma * (2.0 / std::f64::consts::PI).sqrt();
    assert!((oracles::mean(&positive) - expected).abs() < 0.08, "{}", oracles::mean(&positive));
}

#[test]
fn two_leg_boundary_never_sticks() {
    // both boundary moments are zero: the mean flips between legs 1 and 2
    let d = SpiderDistribution::new(3, 0.0, vec![0.5, 0.5, 0.0], vec![LegLaw::Point { t: 1.0 }; 3]).unwrap();
    let s = run_experiment(&d, &SimConfig { n: 1000, reps: 400, seed: 5 }).unwrap();
    assert!(s.fraction_at_center < 0.1, "{}", s.fraction_at_center);
    let on_first = s.records.iter().filter(|r| r.mean.leaf() == Some(0)).count() as f64 / 400.0;
    assert!((0.4..0.6).contains(&on_first), "{on_first}");
}

#[test]
fn nonsticky_mean_is_asymptotically_normal() {
    let d = nonsticky();
    let s = run_experiment(&d, &SimConfig { n: 1000, reps: 2000, seed: 3 }).unwrap();
    assert_eq!(s.fraction_at_center, 0.0);
    assert!(s.records.iter().all(|r| r.classification == Classification::Nonsticky(0)));
    let var = oracles::variance(&s.standardized);
    assert!((var - d.folded_variance(0)).abs() <= 0.1 * d.folded_variance(0), "{var}");
    let (skew, kurt) = oracles::skew_kurtosis(&s.standardized);
    let reps = s.standardized.len() as f64;
    assert!(skew.abs() < 3.0 * (6.0 / reps).sqrt(), "skew {skew}");
    assert!(kurt.abs() < 3.0 * (24.0 / reps).sqrt(), "kurtosis {kurt}");
}

#[test]
fn at_most_one_positive_moment_per_replication() {
    let d = SpiderDistribution::new(
        4,
        0.1,
        vec![0.3, 0.3, 0.2, 0.1],
        vec![
            LegLaw::Exponential { rate: 0.5 },
            LegLaw::Uniform { lo: 0.0, hi: 4.0 },
            LegLaw::Point { t: 3.0 },
            LegLaw::Exponential { rate: 2.0 },
        ],
    )
    .unwrap();
    let s = run_experiment(&d, &SimConfig { n: 30, reps: 300, seed: 4 }).unwrap();
    for r in &s.records {
        assert!(r.folded_means.iter().filter(|&&m| m > 0.0).count() <= 1);
    }
}

#[test]
fn empirical_moments_average_to_population_moments() {
    let d = SpiderDistribution::new(
        3,
        0.2,
        vec![0.4, 0.3, 0.1],
        vec![LegLaw::Exponential { rate: 1.0 }, LegLaw::Uniform { lo: 1.0, hi: 2.0 }, LegLaw::Point { t: 4.0 }],
    )
    .unwrap();
    let cfg = SimConfig { n: 100, reps: 400, seed: 6 };
    let s = run_experiment(&d, &cfg).unwrap();
    let pop = d.population_moments();
    for (k, &expected) in pop.iter().enumerate() {
        let avg = s.records.iter().map(|r| r.folded_means[k]).sum::<f64>() / cfg.reps as f64;
        let tol = 4.0 * d.folded_variance(k).sqrt() / ((cfg.n * cfg.reps) as f64).sqrt();
        assert!((avg - expected).abs() <= tol, "leaf {k}: {avg} vs {expected}");
    }
}
