//! Cyclic Jacobi eigensolver for small dense symmetric matrices.
//!
//! The sweep order is fixed (row-major upper triangle), which makes the
//! output a deterministic function of the input bits. Encoder and decoder
//! both go through this single routine.

use crate::error::{Error, Result};
use crate::graph::SquareMatrix;

pub const MAX_SWEEPS: usize = 100;

/// Stop once the off-diagonal Frobenius norm falls below this fraction of the
/// input's Frobenius norm.
pub const RELATIVE_TOLERANCE: f64 = 1e-13;

/// Eigenpairs sorted by ascending eigenvalue; `vectors` holds them as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: SquareMatrix,
    pub sweeps: usize,
}

fn off_diagonal_norm(a: &SquareMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Applies the rotation annihilating `a[(p, q)]`, accumulating it into `v`.
fn rotate(a: &mut SquareMatrix, v: &mut SquareMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.dim();

    // A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    // A <- J^T A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Flips `column` so its largest-magnitude entry (first one on ties) is
/// positive.
fn normalize_sign(vectors: &mut SquareMatrix, column: usize) {
    let n = vectors.dim();
    let mut pivot = 0;
    for i in 1..n {
        if vectors[(i, column)].abs() > vectors[(pivot, column)].abs() {
            pivot = i;
        }
    }
    if vectors[(pivot, column)] < 0.0 {
        for i in 0..n {
            vectors[(i, column)] = -vectors[(i, column)];
        }
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// Eigenvalues come back ascending (ties keep the original diagonal order)
/// and every eigenvector's largest-magnitude entry is positive.
pub fn eigendecompose(m: &SquareMatrix) -> Result<Eigen> {
    let n = m.dim();
    let tolerance = RELATIVE_TOLERANCE * m.frobenius_norm();
    let mut a = m.clone();
    let mut v = SquareMatrix::identity(n);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= tolerance {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their column order
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));

    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = SquareMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    for column in 0..n {
        normalize_sign(&mut vectors, column);
    }
    Ok(Eigen { values, vectors, sweeps })
}
