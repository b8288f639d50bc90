//! Successive subspace graph transform.
//!
//! Every `step` octree levels, each occupied node gets a graph over its
//! occupied descendants `step` levels down, positioned by their integer
//! offsets inside the node. The graph's spectral basis turns the
//! descendants' signal into one DC, which becomes the node's signal for the
//! next stage up, and the ACs, which are emitted.

use std::ops::Range;

use rayon::prelude::*;

use crate::codec::{ChannelCoefficients, Execution};
use crate::error::{Error, Result};
use crate::graph::{build_graph, StageBasis};
use crate::octree::Octree;

#[derive(Debug, Clone)]
pub struct NodeTransform {
    /// Morton code of the parent node at the stage level.
    pub code: u64,
    /// Indices of its vertices in the child level's node list.
    pub children: Range<usize>,
    pub basis: StageBasis,
}

#[derive(Debug, Clone)]
pub struct SsgtStage {
    /// Level of the parent nodes.
    pub level: usize,
    pub nodes: Vec<NodeTransform>,
    /// Number of nodes at `level + step`.
    pub child_count: usize,
}

impl SsgtStage {
    pub fn ac_count(&self) -> usize {
        self.child_count - self.nodes.len()
    }
}

#[derive(Debug, Clone)]
pub struct SsgtPlan {
    pub step: usize,
    /// Stage 0 is the root stage.
    pub stages: Vec<SsgtStage>,
}

impl SsgtPlan {
    pub fn new(tree: &Octree, step: u8, alpha: f64, exec: Execution) -> Result<Self> {
        let step = step as usize;
        let depth = tree.depth() as usize;
        if step == 0 || !depth.is_multiple_of(step) {
            return Err(Error::InvalidParams(format!("depth {depth} is not a multiple of step {step}")));
        }
        let mask = (1u32 << step) - 1;
        let stages = (0..depth)
            .step_by(step)
            .map(|level| {
                let child_level = &tree.level(level + step);
                let build = |index: usize| -> Result<NodeTransform> {
                    let node = &tree.level(level)[index];
                    let children = tree.descendants(level, index, step);
                    let vertices: Vec<([u32; 3], u32)> = child_level[children.clone()]
                        .iter()
                        .map(|c| (tree.position(level + step, c).map(|v| v & mask), c.count))
                        .collect();
                    let basis = StageBasis::for_graph(&build_graph(&vertices, alpha)?)?;
                    Ok(NodeTransform { code: node.code, children, basis })
                };
                let count = tree.level(level).len();
                let nodes = match exec {
                    Execution::Sequential => (0..count).map(build).collect::<Result<Vec<_>>>()?,
                    Execution::Parallel => (0..count).into_par_iter().map(build).collect::<Result<Vec<_>>>()?,
                };
                Ok(SsgtStage { level, nodes, child_count: child_level.len() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { step, stages })
    }

    pub fn stage_sizes(&self) -> Vec<usize> {
        self.stages.iter().map(SsgtStage::ac_count).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.stages.last().map_or(1, |s| s.child_count)
    }

    pub fn bases(&self) -> impl Iterator<Item = &StageBasis> {
        self.stages.iter().flat_map(|s| s.nodes.iter().map(|n| &n.basis))
    }

    pub fn forward(&self, signal: &[f64]) -> Result<ChannelCoefficients> {
        if signal.len() != self.leaf_count() {
            return Err(Error::DimensionMismatch { expected: self.leaf_count(), actual: signal.len() });
        }
        let mut current = signal.to_vec();
        let mut stages = vec![Vec::new(); self.stages.len()];
        let mut spectrum = Vec::new();
        for (stage, acs) in self.stages.iter().zip(stages.iter_mut()).rev() {
            let mut next = Vec::with_capacity(stage.nodes.len());
            acs.reserve_exact(stage.ac_count());
            for node in &stage.nodes {
                spectrum.resize(node.children.len(), 0.0);
                node.basis.forward_into(&current[node.children.clone()], &mut spectrum)?;
                next.push(spectrum[0]);
                acs.extend_from_slice(&spectrum[1..]);
            }
            current = next;
        }
        debug_assert_eq!(current.len(), 1);
        Ok(ChannelCoefficients { root_dc: current[0], stages })
    }

    pub fn inverse(&self, coeffs: &ChannelCoefficients) -> Result<Vec<f64>> {
        let mut current = vec![coeffs.root_dc];
        let mut spectrum = Vec::new();
        for (stage, acs) in self.stages.iter().zip(&coeffs.stages) {
            if acs.len() != stage.ac_count() {
                return Err(Error::DimensionMismatch { expected: stage.ac_count(), actual: acs.len() });
            }
            let mut next = vec![0.0; stage.child_count];
            for (index, node) in stage.nodes.iter().enumerate() {
                // each earlier node contributed (children - 1) ACs
                let offset = node.children.start - index;
                let n = node.children.len();
                spectrum.clear();
                spectrum.push(current[index]);
                spectrum.extend_from_slice(&acs[offset..offset + n - 1]);
                node.basis.inverse_into(&spectrum, &mut next[node.children.clone()])?;
            }
            current = next;
        }
        Ok(current)
    }
}
