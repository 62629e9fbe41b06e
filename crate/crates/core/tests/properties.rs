use std::collections::HashSet;

use lexspider::corpus::{partition_populations, Lexicon};
use lexspider::embed::embed_triple;
use lexspider::inference::{analyze, pooled_variance, two_sample_t};
use lexspider::lexdist::{letter_distance, triple_matrix, DistanceMatrix3};
use lexspider::openbook::{
    classify, distance, fold, folded_means, Classification, Normalization, OpenBookPoint, OpenBookShape,
};
use lexspider::rng::substream;
use proptest::prelude::*;

fn leg_point(leaves: usize) -> impl Strategy<Value = OpenBookPoint> {
    (0..leaves, prop_oneof![Just(0.0), 0.0..10.0f64, (1u32..6).prop_map(f64::from)])
        .prop_map(|(k, t)| OpenBookPoint::on_leg(k, t))
}

fn spider_sample() -> impl Strategy<Value = (usize, Vec<OpenBookPoint>)> {
    (3usize..7).prop_flat_map(|k| (Just(k), prop::collection::vec(leg_point(k), 1..40)))
}

fn integer_sample() -> impl Strategy<Value = Vec<OpenBookPoint>> {
    prop::collection::vec((0usize..3, 0u32..4).prop_map(|(k, t)| OpenBookPoint::on_leg(k, f64::from(t))), 2..40)
}

fn word() -> impl Strategy<Value = String> {
    "[a-eé][a-z]{0,4}( [a-z]{1,3})?"
}

proptest! {
    #[test]
    fn at_most_one_positive_folded_mean((k, sample) in spider_sample()) {
        let shape = OpenBookShape::spider(k).unwrap();
        let m = folded_means(&shape, &sample).unwrap();
        for a in 0..k {
            for b in a + 1..k {
                prop_assert!(m[a] + m[b] <= 1e-12, "{:?}", m);
            }
        }
        prop_assert!(m.iter().filter(|&&x| x > 0.0).count() <= 1);
    }

    #[test]
    fn classification_is_scale_equivariant((k, sample) in spider_sample(), lambda in 0.1..20.0f64) {
        let shape = OpenBookShape::spider(k).unwrap();
        let scaled: Vec<_> = sample.iter().map(|p| p.scaled_arm(lambda)).collect();
        let m = folded_means(&shape, &sample).unwrap();
        let ms = folded_means(&shape, &scaled).unwrap();
        for (a, b) in m.iter().zip(&ms) {
            prop_assert!((a * lambda - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
        let c = classify(&shape, &sample, 0.0).unwrap();
        // exact zeros can turn into rounding noise after scaling
        if !matches!(c, Classification::PartlySticky(_)) && m.iter().all(|x| x.abs() > 1e-9) {
            prop_assert_eq!(c, classify(&shape, &scaled, 0.0).unwrap());
        }
    }

    #[test]
    fn integer_classification_is_exact_under_integer_scaling(sample in integer_sample(), lambda in 1u32..50) {
        let shape = OpenBookShape::spider(3).unwrap();
        let scaled: Vec<_> = sample.iter().map(|p| p.scaled_arm(f64::from(lambda))).collect();
        prop_assert_eq!(classify(&shape, &sample, 0.0).unwrap(), classify(&shape, &scaled, 0.0).unwrap());
    }

    #[test]
    fn fold_is_isometric_against_leaf_points(
        k in 0usize..4,
        t in 0.0..10.0f64,
        q in leg_point(4),
    ) {
        let shape = OpenBookShape::spider(4).unwrap();
        let p = OpenBookPoint::on_leg(k, t);
        let lhs = (fold(&shape, k, &p).unwrap().arm - fold(&shape, k, &q).unwrap().arm).abs();
        prop_assert!((lhs - distance(&shape, &p, &q).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn analyze_agrees_with_classify((k, sample) in spider_sample(), eps in prop_oneof![Just(0.0), 0.0..0.5f64]) {
        let shape = OpenBookShape::spider(k).unwrap();
        let r = analyze(&shape, "x", &sample, eps, Normalization::N).unwrap();
        prop_assert_eq!(r.classification, classify(&shape, &sample, eps).unwrap());
        prop_assert!(r.variance >= 0.0);
        prop_assert_eq!(r.mean.leaf(), match r.classification {
            Classification::Nonsticky(k) => Some(k),
            _ => None,
        });
    }

    #[test]
    fn two_sample_t_is_antisymmetric(a in integer_sample(), b in integer_sample()) {
        let shape = OpenBookShape::spider(3).unwrap();
        let ra = analyze(&shape, "a", &a, 0.0, Normalization::NMinusOne).unwrap();
        let rb = analyze(&shape, "b", &b, 0.0, Normalization::NMinusOne).unwrap();
        let ab = two_sample_t(&ra, &rb);
        let ba = two_sample_t(&rb, &ra);
        prop_assert_eq!(ab.valid, ba.valid);
        prop_assert_eq!(ab.df, a.len() + b.len() - 2);
        if let (Some(x), Some(y)) = (ab.t, ba.t) {
            prop_assert!(x == -y || (x.is_infinite() && y.is_infinite() && x.signum() == -y.signum()));
        }
    }

    #[test]
    fn t_ignores_relabeling_other_leaves(a in integer_sample(), b in integer_sample()) {
        // swap leaves 0 and 1, keep leaf 2
        let swap = |s: &[OpenBookPoint]| -> Vec<OpenBookPoint> {
            s.iter().map(|p| match p.leaf() {
                Some(0) => OpenBookPoint::on_leg(1, p.arm()),
                Some(1) => OpenBookPoint::on_leg(0, p.arm()),
                _ => p.clone(),
            }).collect()
        };
        let shape = OpenBookShape::spider(3).unwrap();
        let an = |s: &[OpenBookPoint]| analyze(&shape, "s", s, 0.0, Normalization::NMinusOne).unwrap();
        let base = two_sample_t(&an(&a), &an(&b));
        let relabeled = two_sample_t(&an(&swap(&a)), &an(&swap(&b)));
        if base.leaf == Some(2) {
            prop_assert_eq!(base.t, relabeled.t);
        }
    }

    #[test]
    fn pooled_variance_lies_between_inputs(s1 in 0.0..50.0f64, n1 in 2usize..200, s2 in 0.0..50.0f64, n2 in 2usize..200) {
        let p = pooled_variance(s1, n1, s2, n2).unwrap();
        prop_assert!(p >= s1.min(s2) - 1e-12 && p <= s1.max(s2) + 1e-12);
    }

    #[test]
    fn metric_axioms_on_open_books(
        pts in prop::collection::vec((0usize..4, 0.0..5.0f64, prop::collection::vec(-3.0..3.0f64, 2)), 3),
        spider in any::<bool>(),
    ) {
        let dim = if spider { 0 } else { 2 };
        let shape = OpenBookShape::new(4, dim).unwrap();
        let p: Vec<_> = pts.into_iter()
            .map(|(k, t, s)| OpenBookPoint::new(Some(k), t, s[..dim].to_vec()).unwrap())
            .collect();
        let d = |a: &OpenBookPoint, b: &OpenBookPoint| distance(&shape, a, b).unwrap();
        prop_assert_eq!(d(&p[0], &p[1]), d(&p[1], &p[0]));
        prop_assert_eq!(d(&p[0], &p[0]), 0.0);
        if p[0] != p[1] {
            prop_assert!(d(&p[0], &p[1]) > 0.0);
        }
        prop_assert!(d(&p[0], &p[2]) <= d(&p[0], &p[1]) + d(&p[1], &p[2]) + 1e-12);
    }

    #[test]
    fn partition_is_a_bijection(n in 6usize..120, seed in any::<u64>()) {
        let rows = (0..n).map(|i| (format!("c{i}"), vec![format!("w{i}")]));
        let lex = Lexicon::from_rows(["L"], rows).unwrap();
        let plan = partition_populations(&lex, seed).unwrap();
        let mut seen = HashSet::new();
        for t in &plan.triples {
            for c in &t.concepts {
                prop_assert!(seen.insert(c.clone()));
            }
        }
        for c in &plan.unused {
            prop_assert!(seen.insert(c.clone()));
        }
        prop_assert_eq!(seen.len(), n);
        prop_assert_eq!(plan.population_sizes.iter().sum::<usize>() + plan.unused.len(), n);
        prop_assert!(plan.population_sizes.iter().all(|s| s % 3 == 0));
        prop_assert_eq!(plan, partition_populations(&lex, seed).unwrap());
    }

    #[test]
    fn triple_matrix_matches_recount(rows in prop::collection::vec(prop::collection::vec(word(), 3), 1..6)) {
        let langs = ["A", "B", "C"];
        let lex = Lexicon::from_rows(
            langs,
            rows.iter().enumerate().map(|(i, r)| (format!("c{i}"), r.clone())),
        ).unwrap();
        let concepts = lex.concepts().to_vec();
        let m = triple_matrix(&lex, &concepts, langs).unwrap();
        prop_assert!(m.is_symmetric_zero_diagonal());
        for a in 0..3 {
            for b in 0..3 {
                let first = |w: &str| w.chars().next().unwrap();
                let recount = rows.iter().filter(|r| first(&r[a]) != first(&r[b])).count() as u32;
                prop_assert_eq!(m.get(a, b), recount);
                prop_assert!(m.get(a, b) as usize <= rows.len());
            }
        }
        // relabeling the languages permutes the matrix
        let p = triple_matrix(&lex, &concepts, ["C", "A", "B"]).unwrap();
        prop_assert_eq!(p, m.permuted([2, 0, 1]));
        prop_assert_eq!(letter_distance(&rows[0][0], &rows[0][0]).unwrap(), 0);
    }

    #[test]
    fn embedding_is_permutation_equivariant(d01 in 0u32..5, d02 in 0u32..5, d12 in 0u32..5, seed in any::<u64>()) {
        let m = DistanceMatrix3::from_pairs(["a", "b", "c"], d01, d02, d12);
        let (p, trace) = embed_triple(&m, &mut substream(seed, 0));
        let vals = [d01, d02, d12];
        if p.leaf.is_some() {
            prop_assert!(p.t >= f64::from(*vals.iter().min().unwrap()));
            prop_assert!(p.t <= f64::from(*vals.iter().max().unwrap()));
        }
        if !trace.tie_broken {
            for perm in [[1, 2, 0], [2, 1, 0], [0, 2, 1]] {
                let pm = m.permuted(perm);
                let (q, _) = embed_triple(&pm, &mut substream(seed, 0));
                prop_assert_eq!(q.t, p.t);
                prop_assert_eq!(q.label(&pm.labels), p.label(&m.labels));
            }
        }
    }

    #[test]
    fn lexicon_round_trips(rows in prop::collection::vec(prop::collection::vec("[^\t\r\n\"]{1,8}", 2), 1..10)) {
        let rows: Vec<Vec<String>> = rows.into_iter()
            .map(|r| r.into_iter().map(|w| w.trim().to_owned()).collect())
            .filter(|r: &Vec<String>| r.iter().all(|w| !w.is_empty()))
            .collect();
        prop_assume!(!rows.is_empty());
        let lex = Lexicon::from_rows(["X", "Y"], rows.into_iter().enumerate().map(|(i, r)| (format!("c{i}"), r))).unwrap();
        prop_assert_eq!(Lexicon::parse(lex.to_tsv().as_bytes()).unwrap(), lex);
    }
}
