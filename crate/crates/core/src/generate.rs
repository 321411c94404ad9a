//! Seeded synthetic instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, WeightKind};

/// Uniform integer points in `[0, side)^2`.
pub fn random_points<R: Rng + ?Sized>(n: usize, side: u32, rng: &mut R) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| {
            (
                rng.random_range(0..side) as f64,
                rng.random_range(0..side) as f64,
            )
        })
        .collect()
}

/// Splits `points` into `m` clusters around far-apart centers: the first
/// center is point 0, each next one is the point farthest from the centers
/// chosen so far, and every point joins its nearest center (lowest index on
/// ties).
pub fn center_clusters(points: &[(f64, f64)], m: usize) -> Vec<Vec<usize>> {
    assert!(m >= 1 && m <= points.len(), "need 1 <= m <= n");
    let d2 = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
    let mut centers = vec![0];
    let mut nearest: Vec<f64> = points.iter().map(|&p| d2(p, points[0])).collect();
    while centers.len() < m {
        let far = (0..points.len())
            .filter(|i| !centers.contains(i))
            .max_by(|&a, &b| nearest[a].total_cmp(&nearest[b]).then(b.cmp(&a)))
            .unwrap();
        centers.push(far);
        for (i, &p) in points.iter().enumerate() {
            nearest[i] = nearest[i].min(d2(p, points[far]));
        }
    }
    let mut clusters = vec![Vec::new(); m];
    for (i, &p) in points.iter().enumerate() {
        let c = (0..m)
            .min_by(|&a, &b| d2(p, points[centers[a]]).total_cmp(&d2(p, points[centers[b]])))
            .unwrap();
        clusters[c].push(i);
    }
    clusters
}

/// EUC_2D instance of `n` uniform points grouped by [`center_clusters`].
pub fn clustered(name: &str, n: usize, m: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = random_points(n, 1000, &mut rng);
    let clusters = center_clusters(&points, m);
    Instance::from_coords(name, WeightKind::Euc2d, points, clusters)
        .expect("center clustering is a partition")
}

/// EUC_2D instance with `m` clusters of random size `1..=max_size` and
/// shuffled vertex labels.
pub fn tiny(m: usize, max_size: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes: Vec<usize> = (0..m).map(|_| rng.random_range(1..=max_size)).collect();
    let n: usize = sizes.iter().sum();
    let points = random_points(n, 100, &mut rng);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut clusters = Vec::with_capacity(m);
    let mut next = 0;
    for s in sizes {
        let mut c = labels[next..next + s].to_vec();
        c.sort_unstable();
        clusters.push(c);
        next += s;
    }
    Instance::from_coords(
        format!("tiny{m}-{seed}"),
        WeightKind::Euc2d,
        points,
        clusters,
    )
    .expect("labels form a partition")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering_is_a_partition() {
        let inst = clustered("c", 150, 30, 7);
        assert_eq!(inst.n(), 150);
        assert_eq!(inst.m(), 30);
        assert!(inst.clusters().iter().all(|c| !c.is_empty()));
    }

    #[test]
    fn generation_is_seeded() {
        assert_eq!(tiny(6, 3, 1), tiny(6, 3, 1));
        assert_ne!(tiny(6, 3, 1), tiny(6, 3, 2));
        let t = tiny(7, 3, 9);
        assert_eq!(t.m(), 7);
        assert!(t.clusters().iter().all(|c| (1..=3).contains(&c.len())));
    }

    #[test]
    fn centers_spread_out() {
        let pts = vec![(0.0, 0.0), (1.0, 0.0), (100.0, 0.0), (101.0, 0.0)];
        assert_eq!(center_clusters(&pts, 2), vec![vec![0, 1], vec![2, 3]]);
    }
}
