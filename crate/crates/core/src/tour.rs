//! GTSP tours: a cyclic cluster order plus the vertex chosen in each cluster.

use std::fmt;

use thiserror::Error;

use crate::instance::Instance;

/// A closed tour. Positions are 0-based offsets into `order`/`choice`, which
/// hold 0-based cluster and vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    pub(crate) order: Vec<usize>,
    pub(crate) choice: Vec<usize>,
    pub(crate) cost: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TourError {
    #[error("order and choice have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("tour visits {found} clusters, instance has {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("order not a permutation: cluster {0} repeated or out of range")]
    NotPermutation(usize),
    #[error("choice/cluster mismatch at position {position}: vertex {vertex} is not in cluster {cluster}")]
    ChoiceMismatch {
        position: usize,
        vertex: usize,
        cluster: usize,
    },
    #[error("cached cost {cached} differs from recomputed {actual}")]
    StaleCost { cached: i64, actual: i64 },
    #[error("malformed tour line: {0}")]
    Malformed(String),
}

impl Tour {
    /// Builds a tour from 0-based cluster order and vertex choices.
    pub fn new(inst: &Instance, order: Vec<usize>, choice: Vec<usize>) -> Result<Self, TourError> {
        let mut t = Tour {
            order,
            choice,
            cost: 0,
        };
        t.cost = t.recompute(inst);
        validate(inst, &t)?;
        Ok(t)
    }

    /// Builds a tour from a 0-based cluster order, taking the first listed
    /// vertex of every cluster.
    pub fn with_first_vertices(inst: &Instance, order: Vec<usize>) -> Result<Self, TourError> {
        let choice = order
            .iter()
            .map(|&c| {
                inst.clusters()
                    .get(c)
                    .and_then(|m| m.first().copied())
                    .ok_or(TourError::NotPermutation(c + 1))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Tour::new(inst, order, choice)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn cost(&self) -> i64 {
        self.cost
    }

    /// 0-based cluster order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 0-based chosen vertices, aligned with [`Tour::order`].
    pub fn choice(&self) -> &[usize] {
        &self.choice
    }

    /// Visiting order as 1-based cluster ids.
    pub fn cluster_sequence(&self) -> Vec<usize> {
        self.order.iter().map(|c| c + 1).collect()
    }

    /// Visited vertices as 1-based ids.
    pub fn vertex_sequence(&self) -> Vec<usize> {
        self.choice.iter().map(|v| v + 1).collect()
    }

    #[inline]
    pub(crate) fn next(&self, pos: usize) -> usize {
        if pos + 1 == self.order.len() {
            0
        } else {
            pos + 1
        }
    }

    /// Cost of the edge leaving `pos`.
    #[inline]
    pub(crate) fn edge_after(&self, inst: &Instance, pos: usize) -> i64 {
        inst.cost_idx(self.choice[pos], self.choice[self.next(pos)])
    }

    fn recompute(&self, inst: &Instance) -> i64 {
        tour_cost_of(inst, &self.choice)
    }

    /// Position of every cluster in this tour.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &c) in self.order.iter().enumerate() {
            pos[c] = i;
        }
        pos
    }

    /// Undirected edge set as sorted vertex pairs.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = (0..self.len())
            .map(|i| {
                let (a, b) = (self.choice[i], self.choice[self.next(i)]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    /// `cost;c1:v1,c2:v2,...` with 1-based ids.
    pub fn to_line(&self) -> String {
        self.to_string()
    }

    /// Parses [`Tour::to_line`] output and checks it against `inst`.
    pub fn from_line(inst: &Instance, line: &str) -> Result<Self, TourError> {
        let bad = || TourError::Malformed(line.to_string());
        let (cost, body) = line.trim().split_once(';').ok_or_else(bad)?;
        let cost: i64 = cost.parse().map_err(|_| bad())?;
        let mut order = Vec::new();
        let mut choice = Vec::new();
        for item in body.split(',') {
            let (c, v) = item.split_once(':').ok_or_else(bad)?;
            let c: usize = c.trim().parse().map_err(|_| bad())?;
            let v: usize = v.trim().parse().map_err(|_| bad())?;
            if c == 0 || v == 0 || v > inst.n() {
                return Err(bad());
            }
            order.push(c - 1);
            choice.push(v - 1);
        }
        let t = Tour::new(inst, order, choice)?;
        if t.cost != cost {
            return Err(TourError::StaleCost {
                cached: cost,
                actual: t.cost,
            });
        }
        Ok(t)
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.cost)?;
        for (i, (c, v)) in self.order.iter().zip(&self.choice).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", c + 1, v + 1)?;
        }
        Ok(())
    }
}

fn tour_cost_of(inst: &Instance, choice: &[usize]) -> i64 {
    let m = choice.len();
    (0..m)
        .map(|i| inst.cost_idx(choice[i], choice[(i + 1) % m]))
        .sum()
}

/// Full cyclic cost of `t`, recomputed from scratch.
pub fn tour_cost(inst: &Instance, t: &Tour) -> i64 {
    tour_cost_of(inst, &t.choice)
}

fn validate(inst: &Instance, t: &Tour) -> Result<(), TourError> {
    let m = inst.m();
    if t.order.len() != t.choice.len() {
        return Err(TourError::LengthMismatch(t.order.len(), t.choice.len()));
    }
    if t.order.len() != m {
        return Err(TourError::WrongLength {
            expected: m,
            found: t.order.len(),
        });
    }
    let mut seen = vec![false; m];
    for &c in &t.order {
        if c >= m || seen[c] {
            return Err(TourError::NotPermutation(c + 1));
        }
        seen[c] = true;
    }
    for (i, (&c, &v)) in t.order.iter().zip(&t.choice).enumerate() {
        if v >= inst.n() || inst.cluster_of_idx(v) != c {
            return Err(TourError::ChoiceMismatch {
                position: i + 1,
                vertex: v + 1,
                cluster: c + 1,
            });
        }
    }
    Ok(())
}

/// Checks every tour invariant, including the cached cost, and reports the
/// first violation.
pub fn is_valid_tour(inst: &Instance, t: &Tour) -> Result<(), TourError> {
    validate(inst, t)?;
    let actual = t.recompute(inst);
    if actual != t.cost {
        return Err(TourError::StaleCost {
            cached: t.cost,
            actual,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::WeightKind;

    fn triangle() -> Instance {
        // 3-4-5 right triangle, one vertex per cluster.
        Instance::from_coords(
            "tri",
            WeightKind::Euc2d,
            vec![(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)],
            vec![vec![0], vec![1], vec![2]],
        )
        .unwrap()
    }

    #[test]
    fn triangle_perimeter() {
        let inst = triangle();
        let t = Tour::with_first_vertices(&inst, vec![0, 1, 2]).unwrap();
        assert_eq!(t.cost(), 12);
        assert_eq!(tour_cost(&inst, &t), 12);
    }

    #[test]
    fn two_cluster_cycle_counts_edge_twice() {
        let inst =
            Instance::from_matrix("pair", 2, vec![0, 7, 7, 0], vec![vec![0], vec![1]]).unwrap();
        let t = Tour::with_first_vertices(&inst, vec![1, 0]).unwrap();
        assert_eq!(t.cost(), 14);
    }

    #[test]
    fn detects_repeated_cluster() {
        let inst = triangle();
        let t = Tour {
            order: vec![0, 1, 1],
            choice: vec![0, 1, 1],
            cost: 0,
        };
        assert_eq!(is_valid_tour(&inst, &t), Err(TourError::NotPermutation(2)));
        assert!(is_valid_tour(&inst, &t)
            .unwrap_err()
            .to_string()
            .starts_with("order not a permutation"));
    }

    #[test]
    fn detects_wrong_choice() {
        let inst = triangle();
        let t = Tour {
            order: vec![0, 1, 2],
            choice: vec![2, 1, 0],
            cost: 12,
        };
        let e = is_valid_tour(&inst, &t).unwrap_err();
        assert!(matches!(e, TourError::ChoiceMismatch { position: 1, .. }));
        assert!(e.to_string().starts_with("choice/cluster mismatch"));
    }

    #[test]
    fn detects_stale_cost() {
        let inst = triangle();
        let mut t = Tour::with_first_vertices(&inst, vec![0, 1, 2]).unwrap();
        t.cost = 11;
        assert_eq!(
            is_valid_tour(&inst, &t),
            Err(TourError::StaleCost {
                cached: 11,
                actual: 12
            })
        );
    }

    #[test]
    fn cluster_sequence_is_one_based_projection() {
        let inst = triangle();
        let t = Tour::with_first_vertices(&inst, vec![1, 0, 2]).unwrap();
        assert_eq!(t.cluster_sequence(), vec![2, 1, 3]);
    }

    #[test]
    fn line_round_trip() {
        let inst = triangle();
        let t = Tour::with_first_vertices(&inst, vec![2, 0, 1]).unwrap();
        assert_eq!(t.to_line(), "12;3:3,1:1,2:2");
        assert_eq!(Tour::from_line(&inst, &t.to_line()).unwrap(), t);
        assert!(matches!(
            Tour::from_line(&inst, "13;3:3,1:1,2:2"),
            Err(TourError::StaleCost { .. })
        ));
        assert!(Tour::from_line(&inst, "12;3-3").is_err());
    }
}
