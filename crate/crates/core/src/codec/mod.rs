//! Hierarchical attribute transforms over the octree.
//!
//! Both codecs work on a [`TransformPlan`] built once from geometry and
//! shared by the three color channels. The decoder rebuilds the same plan from
//! decoded geometry; no basis data is transmitted.
//!
//! Coefficients are grouped in stages. Stage 0 is the root-most stage and
//! also carries the root DC; higher stage indices move towards the leaves.

mod raht;
mod ssgt;

pub use raht::{raht_butterfly, raht_inverse_butterfly, Axis, RahtPlan, DEFAULT_AXIS_ORDER};
pub use ssgt::{NodeTransform, SsgtPlan, SsgtStage};

use rayon::prelude::*;
use serde::Serialize;

use crate::cloud::VoxelizedCloud;
use crate::error::{Error, Result};
use crate::octree::Octree;

/// Kept small so the DC kernel sqrt(d_i) stays nearly proportional to
/// sqrt(a_i); larger values leak DC energy into the next stage's ACs.
pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Raht,
    Ssgt,
}

impl Transform {
    pub fn id(self) -> u8 {
        match self {
            Transform::Raht => 0,
            Transform::Ssgt => 1,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(Transform::Raht),
            1 => Some(Transform::Ssgt),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transform::Raht => "raht",
            Transform::Ssgt => "ssgt",
        }
    }
}

impl std::fmt::Display for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raht" => Ok(Transform::Raht),
            "ssgt" => Ok(Transform::Ssgt),
            other => Err(Error::InvalidParams(format!("unknown transform '{other}'"))),
        }
    }
}

/// Whether independent work (per-node eigensolves, per-channel transforms)
/// runs on the rayon pool. Output is identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecParams {
    pub transform: Transform,
    /// Octree depth `L`.
    pub depth: u8,
    /// Levels merged per SSGT stage: 1 gives 2x2x2 subspaces, 2 gives 4x4x4.
    pub step: u8,
    pub alpha: f64,
    /// Quantization step for Y, Cb, Cr.
    pub q: [f64; 3],
}

impl CodecParams {
    pub fn ssgt(depth: u8, step: u8) -> Self {
        Self { transform: Transform::Ssgt, depth, step, alpha: DEFAULT_ALPHA, q: [1.0; 3] }
    }

    pub fn raht(depth: u8) -> Self {
        Self { transform: Transform::Raht, depth, step: 1, alpha: DEFAULT_ALPHA, q: [1.0; 3] }
    }

    pub fn with_q(self, q: f64) -> Self {
        Self { q: [q; 3], ..self }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=crate::cloud::MAX_DEPTH).contains(&self.depth) {
            return Err(Error::InvalidParams(format!("depth {} outside 1..={}", self.depth, crate::cloud::MAX_DEPTH)));
        }
        if self.transform == Transform::Ssgt {
            if !matches!(self.step, 1 | 2) {
                return Err(Error::InvalidParams(format!("step must be 1 or 2, got {}", self.step)));
            }
            if !self.depth.is_multiple_of(self.step) {
                return Err(Error::InvalidParams(format!(
                    "depth {} is not a multiple of step {} (L mod s must be 0)",
                    self.depth, self.step
                )));
            }
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::InvalidParams(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if let Some(q) = self.q.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
            return Err(Error::InvalidParams(format!("quantization step must be finite and > 0, got {q}")));
        }
        Ok(())
    }
}

/// Transform coefficients of one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCoefficients {
    pub root_dc: f64,
    /// AC coefficients per stage, stage 0 root-most, each in canonical
    /// within-stage order.
    pub stages: Vec<Vec<f64>>,
}

impl ChannelCoefficients {
    pub fn len(&self) -> usize {
        1 + self.stages.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn energy(&self) -> f64 {
        self.root_dc * self.root_dc + self.stages.iter().flatten().map(|v| v * v).sum::<f64>()
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            root_dc: f(self.root_dc),
            stages: self.stages.iter().map(|s| s.iter().map(|&v| f(v)).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub channels: [ChannelCoefficients; 3],
}

/// Root DC first, then every stage from root-most to leaf-most.
pub fn canonical_order(coeffs: &ChannelCoefficients) -> Vec<f64> {
    let mut out = Vec::with_capacity(coeffs.len());
    out.push(coeffs.root_dc);
    for stage in &coeffs.stages {
        out.extend_from_slice(stage);
    }
    out
}

/// Inverse of [`canonical_order`] given the per-stage AC counts.
pub fn inverse_order(list: &[f64], stage_sizes: &[usize]) -> Result<ChannelCoefficients> {
    let expected = 1 + stage_sizes.iter().sum::<usize>();
    if list.len() != expected {
        return Err(Error::DimensionMismatch { expected, actual: list.len() });
    }
    let mut rest = &list[1..];
    let stages = stage_sizes
        .iter()
        .map(|&n| {
            let (head, tail) = rest.split_at(n);
            rest = tail;
            head.to_vec()
        })
        .collect();
    Ok(ChannelCoefficients { root_dc: list[0], stages })
}

#[derive(Debug, Clone)]
pub enum TransformPlan {
    Ssgt(SsgtPlan),
    Raht(RahtPlan),
}

impl TransformPlan {
    pub fn new(tree: &Octree, params: &CodecParams, exec: Execution) -> Result<Self> {
        params.validate()?;
        if tree.depth() != params.depth {
            return Err(Error::InvalidParams(format!(
                "tree depth {} does not match parameter depth {}",
                tree.depth(),
                params.depth
            )));
        }
        Ok(match params.transform {
            Transform::Ssgt => TransformPlan::Ssgt(SsgtPlan::new(tree, params.step, params.alpha, exec)?),
            Transform::Raht => TransformPlan::Raht(RahtPlan::new(tree, DEFAULT_AXIS_ORDER)),
        })
    }

    /// Number of AC coefficients in each stage, stage 0 first.
    pub fn stage_sizes(&self) -> Vec<usize> {
        match self {
            TransformPlan::Ssgt(p) => p.stage_sizes(),
            TransformPlan::Raht(p) => p.stage_sizes(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TransformPlan::Ssgt(p) => p.leaf_count(),
            TransformPlan::Raht(p) => p.leaf_count(),
        }
    }

    pub fn forward(&self, signal: &[f64]) -> Result<ChannelCoefficients> {
        match self {
            TransformPlan::Ssgt(p) => p.forward(signal),
            TransformPlan::Raht(p) => p.forward(signal),
        }
    }

    pub fn inverse(&self, coeffs: &ChannelCoefficients) -> Result<Vec<f64>> {
        let sizes = self.stage_sizes();
        let actual: Vec<usize> = coeffs.stages.iter().map(Vec::len).collect();
        if actual != sizes {
            return Err(Error::DimensionMismatch { expected: 1 + sizes.iter().sum::<usize>(), actual: coeffs.len() });
        }
        match self {
            TransformPlan::Ssgt(p) => p.inverse(coeffs),
            TransformPlan::Raht(p) => p.inverse(coeffs),
        }
    }

    /// Forward transform of all three channels.
    pub fn forward_cloud(&self, cloud: &VoxelizedCloud, exec: Execution) -> Result<CoefficientSet> {
        let signals = [cloud.channel(0), cloud.channel(1), cloud.channel(2)];
        let channels = map3(exec, |c| self.forward(&signals[c]))?;
        Ok(CoefficientSet { channels })
    }

    /// Inverse transform of all three channels into per-voxel YCbCr.
    pub fn inverse_cloud(&self, coeffs: &CoefficientSet, exec: Execution) -> Result<Vec<[f64; 3]>> {
        let [y, cb, cr] = map3(exec, |c| self.inverse(&coeffs.channels[c]))?;
        Ok((0..y.len()).map(|i| [y[i], cb[i], cr[i]]).collect())
    }
}

fn map3<T: Send>(exec: Execution, f: impl Fn(usize) -> Result<T> + Sync) -> Result<[T; 3]> {
    let out: Vec<T> = match exec {
        Execution::Sequential => (0..3).map(&f).collect::<Result<_>>()?,
        Execution::Parallel => (0..3).into_par_iter().map(&f).collect::<Result<_>>()?,
    };
    Ok(out.try_into().unwrap_or_else(|_| unreachable!()))
}

pub fn encode(cloud: &VoxelizedCloud, tree: &Octree, params: &CodecParams) -> Result<CoefficientSet> {
    let plan = TransformPlan::new(tree, params, Execution::default())?;
    if cloud.len() != plan.leaf_count() {
        return Err(Error::DimensionMismatch { expected: plan.leaf_count(), actual: cloud.len() });
    }
    plan.forward_cloud(cloud, Execution::default())
}

pub fn decode(coeffs: &CoefficientSet, tree: &Octree, params: &CodecParams) -> Result<Vec<[f64; 3]>> {
    TransformPlan::new(tree, params, Execution::default())?.inverse_cloud(coeffs, Execution::default())
}

fn require(params: &CodecParams, transform: Transform) -> Result<()> {
    if params.transform != transform {
        return Err(Error::InvalidParams(format!("expected {transform} parameters, got {}", params.transform)));
    }
    Ok(())
}

pub fn ssgt_encode(cloud: &VoxelizedCloud, tree: &Octree, params: &CodecParams) -> Result<CoefficientSet> {
    require(params, Transform::Ssgt)?;
    encode(cloud, tree, params)
}

pub fn ssgt_decode(coeffs: &CoefficientSet, tree: &Octree, params: &CodecParams) -> Result<Vec<[f64; 3]>> {
    require(params, Transform::Ssgt)?;
    decode(coeffs, tree, params)
}

pub fn raht_encode(cloud: &VoxelizedCloud, tree: &Octree, params: &CodecParams) -> Result<CoefficientSet> {
    require(params, Transform::Raht)?;
    encode(cloud, tree, params)
}

pub fn raht_decode(coeffs: &CoefficientSet, tree: &Octree, params: &CodecParams) -> Result<Vec<[f64; 3]>> {
    require(params, Transform::Raht)?;
    decode(coeffs, tree, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(CodecParams::ssgt(6, 2).validate().is_ok());
        let err = CodecParams::ssgt(5, 2).validate().unwrap_err();
        assert!(err.to_string().contains("L mod s"), "{err}");
        assert!(CodecParams::ssgt(6, 3).validate().is_err());
        assert!(CodecParams::raht(5).validate().is_ok());
        assert!(CodecParams::raht(5).with_q(0.0).validate().is_err());
        assert!(CodecParams::raht(5).with_alpha(f64::NAN).validate().is_err());
    }

    #[test]
    fn order_round_trip_single() {
        let c = ChannelCoefficients { root_dc: 7.0, stages: vec![vec![]] };
        assert_eq!(canonical_order(&c), vec![7.0]);
        assert_eq!(inverse_order(&[7.0], &[0]).unwrap(), c);
    }

    #[test]
    fn order_rejects_wrong_length() {
        assert!(inverse_order(&[1.0, 2.0], &[2]).is_err());
    }

    #[test]
    fn transform_names() {
        assert_eq!("SSGT".parse::<Transform>().unwrap(), Transform::Ssgt);
        assert_eq!(Transform::from_id(Transform::Raht.id()), Some(Transform::Raht));
        assert!(Transform::from_id(2).is_none());
    }
}
