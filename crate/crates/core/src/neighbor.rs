//! Cluster relevancy and K-Neighbor lists.
//!
//! Clusters are compared through the distances between their geometric
//! centers. Each distance is normalised by the row total into a correlation
//! index, the mutual product of the two directed indices is renormalised into
//! a relevancy, and the `k` most relevant clusters of every row become its
//! neighbor list. Everything here is scale free.

use std::io::Write;

use thiserror::Error;

use crate::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NeighborError {
    #[error("degenerate geometry: cluster {0} has no distinct partner")]
    DegenerateGeometry(usize),
    #[error("k must be at least 1")]
    ZeroK,
}

/// Dense row-major square matrix of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut m = SquareMatrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has the wrong length");
            m.row_mut(i).copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }
}

/// Distances between cluster centers (0-based cluster indices).
///
/// Coordinate instances use the Euclidean distance between centroids, left
/// unrounded. EXPLICIT instances have no geometry, so the mean cost over all
/// inter-cluster vertex pairs stands in for it.
pub fn centroid_distances(inst: &Instance) -> SquareMatrix {
    let m = inst.m();
    let mut d = SquareMatrix::zeros(m);
    match inst.coords() {
        Some(coords) => {
            let centers: Vec<(f64, f64)> = inst
                .clusters()
                .iter()
                .map(|members| {
                    let k = members.len() as f64;
                    let (sx, sy) = members.iter().fold((0.0, 0.0), |(sx, sy), &v| {
                        (sx + coords[v].0, sy + coords[v].1)
                    });
                    (sx / k, sy / k)
                })
                .collect();
            for i in 0..m {
                for j in (i + 1)..m {
                    let dist = (centers[i].0 - centers[j].0).hypot(centers[i].1 - centers[j].1);
                    d.set(i, j, dist);
                    d.set(j, i, dist);
                }
            }
        }
        None => {
            for i in 0..m {
                for j in (i + 1)..m {
                    let a = inst.cluster_members_idx(i);
                    let b = inst.cluster_members_idx(j);
                    let total: i64 = a
                        .iter()
                        .flat_map(|&u| b.iter().map(move |&v| (u, v)))
                        .map(|(u, v)| inst.cost_idx(u, v))
                        .sum();
                    let mean = total as f64 / (a.len() * b.len()) as f64;
                    d.set(i, j, mean);
                    d.set(j, i, mean);
                }
            }
        }
    }
    d
}

/// `r[i][j] = (1 - d[i][j] / d_i) / (m - 1)` with `d_i` the row total.
pub fn correlation_matrix(d: &SquareMatrix) -> Result<SquareMatrix, NeighborError> {
    let m = d.dim();
    let mut r = SquareMatrix::zeros(m);
    if m < 2 {
        return Err(NeighborError::DegenerateGeometry(1));
    }
    let denom = (m - 1) as f64;
    for i in 0..m {
        let di = d.row_sum(i);
        if di <= 0.0 {
            return Err(NeighborError::DegenerateGeometry(i + 1));
        }
        for j in 0..m {
            r.set(i, j, (1.0 - d.get(i, j) / di) / denom);
        }
    }
    Ok(r)
}

/// `p[i][j] = r[i][j] r[j][i] / sum_{l != i} r[i][l] r[l][i]`, zero diagonal.
pub fn relevancy_matrix(r: &SquareMatrix) -> Result<SquareMatrix, NeighborError> {
    let m = r.dim();
    let mut p = SquareMatrix::zeros(m);
    for i in 0..m {
        let mut total = 0.0;
        for j in (0..m).filter(|&j| j != i) {
            let v = r.get(i, j) * r.get(j, i);
            p.set(i, j, v);
            total += v;
        }
        if total <= 0.0 {
            return Err(NeighborError::DegenerateGeometry(i + 1));
        }
        for j in 0..m {
            p.set(i, j, p.get(i, j) / total);
        }
    }
    Ok(p)
}

/// Top `k` clusters of every row by descending relevancy, self excluded,
/// ties broken by ascending index.
pub fn k_neighbor_table(p: &SquareMatrix, k: usize) -> Result<Vec<Vec<usize>>, NeighborError> {
    if k == 0 {
        return Err(NeighborError::ZeroK);
    }
    let m = p.dim();
    Ok((0..m)
        .map(|i| {
            let mut row: Vec<usize> = (0..m).filter(|&j| j != i).collect();
            row.sort_by(|&a, &b| p.get(i, b).total_cmp(&p.get(i, a)).then(a.cmp(&b)));
            row.truncate(k.min(m.saturating_sub(1)));
            row
        })
        .collect())
}

/// Static search guidance for one instance.
#[derive(Debug, Clone)]
pub struct NeighborModel {
    pub centroid_dist: SquareMatrix,
    pub row_sums: Vec<f64>,
    pub correlation: SquareMatrix,
    pub relevancy: SquareMatrix,
    k: usize,
    neighbors: Vec<Vec<usize>>,
}

impl NeighborModel {
    pub fn build(inst: &Instance, k: usize) -> Result<Self, NeighborError> {
        let centroid_dist = centroid_distances(inst);
        let row_sums = (0..centroid_dist.dim())
            .map(|i| centroid_dist.row_sum(i))
            .collect();
        let correlation = correlation_matrix(&centroid_dist)?;
        let relevancy = relevancy_matrix(&correlation)?;
        let neighbors = k_neighbor_table(&relevancy, k)?;
        Ok(NeighborModel {
            centroid_dist,
            row_sums,
            correlation,
            relevancy,
            k,
            neighbors,
        })
    }

    /// Model whose neighbor lists hold every other cluster in index order.
    /// Used when the geometry cannot produce relevancies (one or two
    /// clusters, or all centers coincident).
    pub fn uniform(m: usize) -> Self {
        let mut relevancy = SquareMatrix::zeros(m);
        if m > 1 {
            for i in 0..m {
                for j in (0..m).filter(|&j| j != i) {
                    relevancy.set(i, j, 1.0 / (m - 1) as f64);
                }
            }
        }
        NeighborModel {
            centroid_dist: SquareMatrix::zeros(m),
            row_sums: vec![0.0; m],
            correlation: SquareMatrix::zeros(m),
            neighbors: (0..m)
                .map(|i| (0..m).filter(|&j| j != i).collect())
                .collect(),
            relevancy,
            k: m.saturating_sub(1),
        }
    }

    /// [`NeighborModel::build`], falling back to [`NeighborModel::uniform`]
    /// on degenerate geometry.
    pub fn build_or_uniform(inst: &Instance, k: usize) -> Self {
        NeighborModel::build(inst, k.max(1)).unwrap_or_else(|_| NeighborModel::uniform(inst.m()))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.neighbors.len()
    }

    /// 0-based neighbor list of 0-based cluster `c`.
    pub fn neighbors(&self, c: usize) -> &[usize] {
        &self.neighbors[c]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.neighbors
    }

    /// Relevancy matrix as CSV with 1-based cluster ids on both axes.
    pub fn write_relevancy_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let m = self.relevancy.dim();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![String::new()];
        header.extend((1..=m).map(|j| j.to_string()));
        w.write_record(&header)?;
        for i in 0..m {
            let mut row = vec![(i + 1).to_string()];
            row.extend(self.relevancy.row(i).iter().map(|v| v.to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
