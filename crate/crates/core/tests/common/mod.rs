#![allow(dead_code)]

use std::path::PathBuf;

use gtsp_dsta::{Instance, Tour, WeightKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/instances")
}

pub fn bundled_instances() -> Vec<Instance> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(data_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "gtsp"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| Instance::from_file(p).unwrap_or_else(|e| panic!("{}: {e}", p.display())))
        .collect()
}

/// Random EUC_2D instance with `m` clusters of size `1..=max_size`.
pub fn random_instance(m: usize, max_size: usize, seed: u64) -> Instance {
    gtsp_dsta::generate::tiny(m, max_size, seed)
}

/// m singleton clusters at random points.
pub fn singletons(m: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..m)
        .map(|_| {
            (
                rng.random_range(0..1000) as f64,
                rng.random_range(0..1000) as f64,
            )
        })
        .collect();
    Instance::from_coords(
        "pts",
        WeightKind::Euc2d,
        pts,
        (0..m).map(|i| vec![i]).collect(),
    )
    .unwrap()
}

/// Straight cycle cost of `vertices` (0-based), computed from scratch.
pub fn cycle_cost(inst: &Instance, vertices: &[usize]) -> i64 {
    let m = vertices.len();
    (0..m)
        .map(|i| inst.cost_idx(vertices[i], vertices[(i + 1) % m]))
        .sum()
}

/// Cheapest vertex assignment for a fixed cluster order by trying every
/// combination. `fixed` pins one position to a vertex.
pub fn enumerate_assignments(
    inst: &Instance,
    order: &[usize],
    fixed: Option<(usize, usize)>,
) -> i64 {
    let m = order.len();
    let options: Vec<Vec<usize>> = (0..m)
        .map(|p| match fixed {
            Some((fp, v)) if fp == p => vec![v],
            _ => inst.cluster_members_idx(order[p]).to_vec(),
        })
        .collect();
    let mut idx = vec![0; m];
    let mut best = i64::MAX;
    loop {
        let vs: Vec<usize> = (0..m).map(|p| options[p][idx[p]]).collect();
        best = best.min(cycle_cost(inst, &vs));
        let mut p = 0;
        loop {
            if p == m {
                return best;
            }
            idx[p] += 1;
            if idx[p] < options[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Exhaustive optimum over all cluster orders and assignments, written
/// independently of the library oracle.
pub fn exhaustive_optimum(inst: &Instance) -> i64 {
    let m = inst.m();
    let order: Vec<usize> = (0..m).collect();
    let mut best = i64::MAX;
    heap_permute(&mut order[1..].to_vec(), &mut |rest| {
        let mut o = vec![0];
        o.extend_from_slice(rest);
        best = best.min(enumerate_assignments(inst, &o, None));
    });
    best
}

fn heap_permute(items: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    fn go(k: usize, items: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        go(k - 1, items, visit);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
            go(k - 1, items, visit);
        }
    }
    let n = items.len();
    go(n, items, visit);
}

/// Canonical form of a cyclic undirected sequence: rotated to start at its
/// smallest element, then the lexicographically smaller direction.
pub fn canonical_cycle(seq: &[usize]) -> Vec<usize> {
    let m = seq.len();
    let k = (0..m).min_by_key(|&i| seq[i]).unwrap();
    let fwd: Vec<usize> = (0..m).map(|i| seq[(k + i) % m]).collect();
    let bwd: Vec<usize> = (0..m).map(|i| seq[(k + m - i) % m]).collect();
    fwd.min(bwd)
}

/// Upper chi-square critical value for `df` degrees of freedom at roughly
/// the 0.1% level (Wilson-Hilferty).
pub fn chi2_critical(df: usize) -> f64 {
    let df = df as f64;
    let z = 3.09;
    let a = 2.0 / (9.0 * df);
    df * (1.0 - a + z * a.sqrt()).powi(3)
}

pub fn chi2(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}

/// Tour from a 0-based cluster order, first member of every cluster.
pub fn first_member_tour(inst: &Instance, order: Vec<usize>) -> Tour {
    Tour::with_first_vertices(inst, order).unwrap()
}
