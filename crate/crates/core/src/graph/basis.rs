use crate::error::{Error, Result};
use crate::graph::{degrees, eigendecompose, normalized_laplacian, SquareMatrix, SubspaceGraph};

/// Orthonormal graph Fourier basis of one subspace.
///
/// Column 0 is the DC kernel, parallel to `D^{1/2} 1`; the remaining
/// columns are the AC kernels in ascending eigenvalue order.
#[derive(Debug, Clone, PartialEq)]
pub struct StageBasis {
    pub phi: SquareMatrix,
    pub lambda: Vec<f64>,
    pub degree: Vec<f64>,
}

impl StageBasis {
    /// Basis for a graph. Single-vertex graphs get the 1x1 identity.
    pub fn for_graph(g: &SubspaceGraph) -> Result<Self> {
        let degree = degrees(g);
        if g.len() == 1 {
            return Ok(Self { phi: SquareMatrix::identity(1), lambda: vec![0.0], degree });
        }
        let eigen = eigendecompose(&normalized_laplacian(g)?)?;
        Ok(Self { phi: eigen.vectors, lambda: eigen.values, degree })
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    fn check(&self, actual: usize) -> Result<()> {
        if actual != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual });
        }
        Ok(())
    }

    /// `H = Phi^T f`, written into `out`.
    pub fn forward_into(&self, f: &[f64], out: &mut [f64]) -> Result<()> {
        self.check(f.len())?;
        self.check(out.len())?;
        for (k, h) in out.iter_mut().enumerate() {
            *h = f.iter().enumerate().map(|(i, v)| self.phi[(i, k)] * v).sum();
        }
        Ok(())
    }

    /// `f = Phi H`, written into `out`.
    pub fn inverse_into(&self, h: &[f64], out: &mut [f64]) -> Result<()> {
        self.check(h.len())?;
        self.check(out.len())?;
        for (i, f) in out.iter_mut().enumerate() {
            *f = self.phi.row(i).iter().zip(h).map(|(p, c)| p * c).sum();
        }
        Ok(())
    }

    /// Splits the spectrum into the DC coefficient and the ACs.
    pub fn forward(&self, f: &[f64]) -> Result<(f64, Vec<f64>)> {
        let mut h = vec![0.0; self.len()];
        self.forward_into(f, &mut h)?;
        let dc = h.remove(0);
        Ok((dc, h))
    }

    pub fn inverse(&self, dc: f64, ac: &[f64]) -> Result<Vec<f64>> {
        self.check(ac.len() + 1)?;
        let mut h = Vec::with_capacity(self.len());
        h.push(dc);
        h.extend_from_slice(ac);
        let mut f = vec![0.0; self.len()];
        self.inverse_into(&h, &mut f)?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn unit_pair_basis() {
        let b = StageBasis::for_graph(&SubspaceGraph::unit_pair(1, 1)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // second column follows the sign rule: magnitude tie, first entry positive
        let expect = SquareMatrix::from_rows(&[&[h, h], &[h, -h]]);
        assert!(b.phi.max_abs_diff(&expect) < 1e-15, "{:?}", b.phi);
        assert!(b.lambda[0].abs() < 1e-15 && (b.lambda[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn three_one_basis() {
        let b = StageBasis::for_graph(&SubspaceGraph::unit_pair(3, 1)).unwrap();
        let expect = SquareMatrix::from_rows(&[&[SQRT3 / 2.0, -0.5], &[0.5, SQRT3 / 2.0]]);
        assert!(b.phi.max_abs_diff(&expect) < 1e-15, "{:?}", b.phi);
        assert!((b.lambda[1] - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn forward_and_inverse_three_one() {
        let b = StageBasis::for_graph(&SubspaceGraph::unit_pair(3, 1)).unwrap();
        let (dc, ac) = b.forward(&[2.0, 2.0]).unwrap();
        assert!((dc - (SQRT3 + 1.0)).abs() < 1e-14);
        assert!((ac[0] - (SQRT3 - 1.0)).abs() < 1e-14);
        assert!((dc * dc + ac[0] * ac[0] - 8.0).abs() < 1e-13);
        let f = b.inverse(SQRT3 + 1.0, &[SQRT3 - 1.0]).unwrap();
        assert!((f[0] - 2.0).abs() < 1e-14 && (f[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn single_vertex_bypass() {
        let b = StageBasis::for_graph(&build_graph(&[([0, 0, 0], 9)], 0.1).unwrap()).unwrap();
        assert_eq!(b.forward(&[42.5]).unwrap(), (42.5, vec![]));
        assert_eq!(b.inverse(42.5, &[]).unwrap(), vec![42.5]);
    }

    #[test]
    fn dc_kernel_has_unit_response() {
        let g = build_graph(&[([0, 0, 0], 2), ([1, 0, 1], 1), ([3, 3, 0], 5)], 0.1).unwrap();
        let b = StageBasis::for_graph(&g).unwrap();
        let t0 = b.phi.column(0);
        let (dc, ac) = b.forward(&t0).unwrap();
        assert!((dc - 1.0).abs() < 1e-12);
        assert!(ac.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn dimension_mismatch() {
        let b = StageBasis::for_graph(&SubspaceGraph::unit_pair(1, 2)).unwrap();
        assert!(matches!(b.forward(&[1.0]), Err(Error::DimensionMismatch { expected: 2, actual: 1 })));
        assert!(b.inverse(1.0, &[]).is_err());
    }
}
