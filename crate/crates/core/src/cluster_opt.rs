//! Vertex selection for a fixed cluster order.
//!
//! Choosing one vertex per cluster for a given order is a shortest path
//! problem on a layered graph (one layer per cluster). [`full_co`] solves the
//! closed cycle exactly. [`short_co`] re-solves only small windows around
//! positions a move has touched, with the vertices just outside each window
//! held fixed.

use crate::instance::Instance;
use crate::tour::Tour;

/// Clusters in a short-CO window: the center, two on each side. The two
/// outermost ones are held fixed.
pub const WINDOW: usize = 5;
const HALF: usize = WINDOW / 2;

/// Best path `start -> one vertex of each layer -> end`. Returns the path
/// cost (including both end edges) and the chosen interior vertices.
/// Predecessor ties go to the smaller vertex index.
fn layered_path(inst: &Instance, start: usize, layers: &[usize], end: usize) -> (i64, Vec<usize>) {
    if layers.is_empty() {
        return (inst.cost_idx(start, end), Vec::new());
    }
    // preds[l][k]: index into layer l-1 members (or 0 for the start vertex)
    let mut preds: Vec<Vec<usize>> = Vec::with_capacity(layers.len());
    let first = inst.cluster_members_idx(layers[0]);
    let mut dist: Vec<i64> = first.iter().map(|&v| inst.cost_idx(start, v)).collect();
    preds.push(vec![0; first.len()]);
    for l in 1..layers.len() {
        let prev = inst.cluster_members_idx(layers[l - 1]);
        let cur = inst.cluster_members_idx(layers[l]);
        let mut next_dist = Vec::with_capacity(cur.len());
        let mut pred = Vec::with_capacity(cur.len());
        for &w in cur {
            let mut best = i64::MAX;
            let mut best_k = 0;
            for (k, &v) in prev.iter().enumerate() {
                let c = dist[k] + inst.cost_idx(v, w);
                if c < best || (c == best && v < prev[best_k]) {
                    best = c;
                    best_k = k;
                }
            }
            next_dist.push(best);
            pred.push(best_k);
        }
        dist = next_dist;
        preds.push(pred);
    }
    let last = inst.cluster_members_idx(*layers.last().unwrap());
    let mut best = i64::MAX;
    let mut best_k = 0;
    for (k, &v) in last.iter().enumerate() {
        let c = dist[k] + inst.cost_idx(v, end);
        if c < best || (c == best && v < last[best_k]) {
            best = c;
            best_k = k;
        }
    }
    let mut chosen = vec![0; layers.len()];
    let mut k = best_k;
    for l in (0..layers.len()).rev() {
        chosen[l] = inst.cluster_members_idx(layers[l])[k];
        k = preds[l][k];
    }
    (best, chosen)
}

/// Globally optimal vertex choice for the order of `t`.
///
/// The DP starts from the smallest cluster, trying each of its vertices as
/// the cycle anchor. The returned tour keeps `t`'s order exactly.
pub fn full_co(inst: &Instance, t: &Tour) -> Tour {
    let m = t.len();
    let mut out = t.clone();
    if m == 0 {
        return out;
    }
    let start = (0..m)
        .min_by_key(|&p| inst.cluster_members_idx(t.order[p]).len())
        .unwrap();
    let layers: Vec<usize> = (1..m).map(|i| t.order[(start + i) % m]).collect();
    let mut best: Option<(i64, usize, Vec<usize>)> = None;
    for &s in inst.cluster_members_idx(t.order[start]) {
        let (c, path) = if m == 1 {
            (0, Vec::new())
        } else {
            layered_path(inst, s, &layers, s)
        };
        let better = match &best {
            None => true,
            Some((bc, bs, _)) => c < *bc || (c == *bc && s < *bs),
        };
        if better {
            best = Some((c, s, path));
        }
    }
    let (cost, s, path) = best.unwrap();
    out.choice[start] = s;
    for (i, v) in path.into_iter().enumerate() {
        out.choice[(start + 1 + i) % m] = v;
    }
    out.cost = cost;
    out
}

/// Re-optimizes windows of at most [`WINDOW`] clusters around `changed`.
pub fn short_co(inst: &Instance, t: &Tour, changed: &[usize]) -> Tour {
    let mut out = t.clone();
    short_co_in_place(inst, &mut out, changed);
    out
}

/// In-place [`short_co`]; returns the cost reduction (never negative).
pub fn short_co_in_place(inst: &Instance, t: &mut Tour, changed: &[usize]) -> i64 {
    let m = t.len();
    if changed.is_empty() || m < 2 {
        return 0;
    }
    // Positions free to change: the three interior clusters of every window.
    let mut free = vec![false; m];
    for &c in changed {
        for off in 0..=2 * (HALF - 1) {
            free[(c + m + off - (HALF - 1)) % m] = true;
        }
    }
    if m <= WINDOW || free.iter().all(|&f| f) {
        // The window wraps onto itself: hold one position, free the rest.
        let fixed = (changed[0] + m - HALF % m) % m;
        return reopt_run(inst, t, (fixed + 1) % m, m - 1);
    }
    let anchor = free.iter().position(|&f| !f).unwrap();
    let mut gain = 0;
    let mut i = 1;
    while i < m {
        let p = (anchor + i) % m;
        if !free[p] {
            i += 1;
            continue;
        }
        let mut len = 0;
        while i < m && free[(anchor + i) % m] {
            len += 1;
            i += 1;
        }
        gain += reopt_run(inst, t, p, len);
    }
    gain
}

/// Re-solves `len` consecutive positions starting at `first`, holding the
/// vertices on either side fixed. Applies the result only if it is strictly
/// cheaper.
fn reopt_run(inst: &Instance, t: &mut Tour, first: usize, len: usize) -> i64 {
    let m = t.len();
    let before = (first + m - 1) % m;
    let after = (first + len) % m;
    let positions: Vec<usize> = (0..len).map(|i| (first + i) % m).collect();
    let layers: Vec<usize> = positions.iter().map(|&p| t.order[p]).collect();
    let mut old = 0;
    let mut prev = t.choice[before];
    for &p in &positions {
        old += inst.cost_idx(prev, t.choice[p]);
        prev = t.choice[p];
    }
    old += inst.cost_idx(prev, t.choice[after]);
    let (new, chosen) = layered_path(inst, t.choice[before], &layers, t.choice[after]);
    if new < old {
        for (&p, v) in positions.iter().zip(chosen) {
            t.choice[p] = v;
        }
        t.cost -= old - new;
        old - new
    } else {
        0
    }
}
