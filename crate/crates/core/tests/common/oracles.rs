//! Reference implementations used only by tests. Nothing here calls into
//! the library's geometry or embedding code.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Possible (outlier leaf, final merge height) outcomes of agglomerative
/// single linkage on three items, branching over every tie. `None` is the
/// center: all three items merge at once, or the final join has height 0.
pub fn single_linkage_outcomes(d01: u32, d02: u32, d12: u32) -> BTreeSet<(Option<usize>, u32)> {
    let d = [[0, d01, d02], [d01, 0, d12], [d02, d12, 0]];
    let mut out = BTreeSet::new();
    if d01 == d02 && d02 == d12 {
        out.insert((None, 0));
        return out;
    }
    let clusters: Vec<Vec<usize>> = vec![vec![0], vec![1], vec![2]];
    agglomerate(&d, clusters, &mut out);
    out
}

fn link(d: &[[u32; 3]; 3], a: &[usize], b: &[usize]) -> u32 {
    a.iter().flat_map(|&i| b.iter().map(move |&j| d[i][j])).min().unwrap()
}

fn agglomerate(d: &[[u32; 3]; 3], clusters: Vec<Vec<usize>>, out: &mut BTreeSet<(Option<usize>, u32)>) {
    if clusters.len() == 2 {
        let h = link(d, &clusters[0], &clusters[1]);
        let single = clusters.iter().find(|c| c.len() == 1).unwrap()[0];
        out.insert(if h == 0 { (None, 0) } else { (Some(single), h) });
        return;
    }
    let mut best = u32::MAX;
    let mut candidates = Vec::new();
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let h = link(d, &clusters[i], &clusters[j]);
            if h < best {
                best = h;
                candidates.clear();
            }
            if h == best {
                candidates.push((i, j));
            }
        }
    }
    for (i, j) in candidates {
        let mut next: Vec<Vec<usize>> = Vec::new();
        let mut merged = clusters[i].clone();
        merged.extend(&clusters[j]);
        next.push(merged);
        for (k, c) in clusters.iter().enumerate() {
            if k != i && k != j {
                next.push(c.clone());
            }
        }
        agglomerate(d, next, out);
    }
}

/// Spider distance written out directly: legs are `(leaf, t)`, `t = 0` is
/// the center.
pub fn spider_distance(a: (usize, f64), b: (usize, f64)) -> f64 {
    if a.1 == 0.0 || b.1 == 0.0 || a.0 == b.0 {
        (a.1 - b.1).abs()
    } else {
        a.1 + b.1
    }
}

/// Grid minimizer of the empirical Fréchet function over every leg of a
/// K-spider: returns `(leaf, t)` with `t` on the grid `0, step, 2 step, ..`.
pub fn grid_frechet_mean(leaves: usize, sample: &[(usize, f64)], step: f64) -> (usize, f64) {
    let reach = sample.iter().map(|p| p.1).fold(0.0, f64::max) + step;
    let steps = (reach / step).ceil() as usize;
    let mut best = (0, 0.0, f64::INFINITY);
    for leaf in 0..leaves {
        for i in 0..=steps {
            let t = i as f64 * step;
            let f: f64 = sample.iter().map(|&p| spider_distance((leaf, t), p).powi(2)).sum();
            if f < best.2 {
                best = (leaf, t, f);
            }
        }
    }
    (best.0, best.1)
}

/// Folded means by literally folding every point.
pub fn folded_means_direct(leaves: usize, sample: &[(usize, f64)]) -> Vec<f64> {
    (0..leaves)
        .map(|k| sample.iter().map(|&(j, t)| if j == k { t } else { -t }).sum::<f64>() / sample.len() as f64)
        .collect()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with divisor `n - 1`.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Sample skewness and excess kurtosis (moment estimators).
pub fn skew_kurtosis(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - m).powi(3)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}
