//! Weighted self-loop graphs over the occupied children of one octree
//! subspace, their normalized Laplacians and spectral bases.
//!
//! A vertex carrying `a` points has a self-loop of weight `a(a-1)/2` (the
//! point pairs inside it); two vertices are joined by
//! `exp(-alpha * |x_i - x_j|^2) * a_i * a_j`.

mod basis;
mod jacobi;

pub use basis::StageBasis;
pub use jacobi::{eigendecompose, Eigen, MAX_SWEEPS};

use crate::error::{Error, Result};

/// Lower bound on off-diagonal weights; keeps degrees positive when the
/// exponential underflows.
pub const WEIGHT_FLOOR: f64 = 1e-300;

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { n, data: rows.concat() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self[(i, k)];
                for j in 0..self.n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Largest absolute entry of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

pub fn squared_distance(a: [u32; 3], b: [u32; 3]) -> f64 {
    a.iter()
        .zip(&b)
        .map(|(&p, &q)| {
            let d = f64::from(p) - f64::from(q);
            d * d
        })
        .sum()
}

/// Weight of the edge between two distinct vertices.
pub fn edge_weight(a_i: u32, a_j: u32, x_i: [u32; 3], x_j: [u32; 3], alpha: f64) -> f64 {
    let decay = (-alpha * squared_distance(x_i, x_j)).exp();
    (decay * f64::from(a_i) * f64::from(a_j)).max(WEIGHT_FLOOR)
}

/// Self-loop weight of a vertex holding `a` points.
pub fn self_weight(a: u32) -> f64 {
    let a = f64::from(a);
    0.5 * a * (a - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceGraph {
    positions: Vec<[u32; 3]>,
    counts: Vec<u32>,
    weights: SquareMatrix,
    alpha: f64,
}

impl SubspaceGraph {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn positions(&self) -> &[[u32; 3]] {
        &self.positions
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn weights(&self) -> &SquareMatrix {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Two-vertex graph with the distance term fixed to 1, the shape every
    /// RAHT butterfly sees.
    pub fn unit_pair(a1: u32, a2: u32) -> Self {
        let w = f64::from(a1) * f64::from(a2);
        let weights = SquareMatrix::from_rows(&[&[self_weight(a1), w], &[w, self_weight(a2)]]);
        Self { positions: vec![[0, 0, 0], [0, 0, 1]], counts: vec![a1, a2], weights, alpha: 0.0 }
    }
}

/// Complete graph over `(local position, point count)` vertices.
pub fn build_graph(children: &[([u32; 3], u32)], alpha: f64) -> Result<SubspaceGraph> {
    if children.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
    }
    if let Some(&(_, a)) = children.iter().find(|(_, a)| *a == 0) {
        return Err(Error::InvalidParams(format!("vertex point count must be >= 1, got {a}")));
    }
    let n = children.len();
    let mut weights = SquareMatrix::zeros(n);
    for i in 0..n {
        let (x_i, a_i) = children[i];
        weights[(i, i)] = self_weight(a_i);
        for j in i + 1..n {
            let (x_j, a_j) = children[j];
            if x_i == x_j {
                return Err(Error::DuplicatePosition(x_i));
            }
            let w = edge_weight(a_i, a_j, x_i, x_j, alpha);
            weights[(i, j)] = w;
            weights[(j, i)] = w;
        }
    }
    Ok(SubspaceGraph {
        positions: children.iter().map(|c| c.0).collect(),
        counts: children.iter().map(|c| c.1).collect(),
        weights,
        alpha,
    })
}

/// Vertex degrees, counting each self-loop twice:
/// `d_i = a_i(a_i - 1) + sum_{j != i} W_ij`.
pub fn degrees(g: &SubspaceGraph) -> Vec<f64> {
    let w = &g.weights;
    (0..g.len())
        .map(|i| {
            let off: f64 = (0..g.len()).filter(|&j| j != i).map(|j| w[(i, j)]).sum();
            2.0 * w[(i, i)] + off
        })
        .collect()
}

/// `D^{-1/2} L D^{-1/2}` with `L(i,i) = D(i,i) - 2 W(i,i)` and
/// `L(i,j) = -W(i,j)`.
pub fn normalized_laplacian(g: &SubspaceGraph) -> Result<SquareMatrix> {
    let n = g.len();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: n });
    }
    let d = degrees(g);
    if let Some(i) = d.iter().position(|&v| v.is_nan() || v <= 0.0) {
        return Err(Error::InvalidParams(format!("vertex {i} has zero degree")));
    }
    let inv_sqrt: Vec<f64> = d.iter().map(|v| 1.0 / v.sqrt()).collect();
    let w = &g.weights;
    let mut l = SquareMatrix::zeros(n);
    for i in 0..n {
        // D(i,i) - 2 W(i,i), summed directly: the subtraction cancels badly
        // when the off-diagonal weights are tiny next to the self-loop.
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| w[(i, j)]).sum();
        l[(i, i)] = off / d[i];
        for j in i + 1..n {
            let v = -w[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
            l[(i, j)] = v;
            l[(j, i)] = v;
        }
    }
    Ok(l)
}
