//! Region adaptive hierarchical transform.
//!
//! Each octree level is collapsed in three sub-steps, one per axis. A
//! sub-step pairs nodes whose keys differ only in that axis' child bit and
//! replaces each pair by a weighted butterfly DC; unpaired nodes pass
//! through unchanged.

use crate::codec::ChannelCoefficients;
use crate::error::{Error, Result};
use crate::octree::Octree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// The axis' bit inside a child index `(x << 2) | (y << 1) | z`.
    fn child_bit(self) -> u64 {
        match self {
            Axis::X => 4,
            Axis::Y => 2,
            Axis::Z => 1,
        }
    }
}

pub const DEFAULT_AXIS_ORDER: [Axis; 3] = [Axis::Z, Axis::Y, Axis::X];

/// Forward butterfly for a pair holding `a1` and `a2` points.
pub fn raht_butterfly(a1: u32, a2: u32, g1: f64, g2: f64) -> (f64, f64) {
    let (s1, s2, norm) = butterfly_weights(a1, a2);
    ((s1 * g1 + s2 * g2) / norm, (s1 * g2 - s2 * g1) / norm)
}

pub fn raht_inverse_butterfly(a1: u32, a2: u32, dc: f64, ac: f64) -> (f64, f64) {
    let (s1, s2, norm) = butterfly_weights(a1, a2);
    ((s1 * dc - s2 * ac) / norm, (s2 * dc + s1 * ac) / norm)
}

fn butterfly_weights(a1: u32, a2: u32) -> (f64, f64, f64) {
    let a1 = f64::from(a1);
    let a2 = f64::from(a2);
    (a1.sqrt(), a2.sqrt(), (a1 + a2).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Pair { first: usize, second: usize, a1: u32, a2: u32 },
    Pass(usize),
}

#[derive(Debug, Clone)]
struct SubStep {
    input_len: usize,
    /// One op per output node, in output order.
    ops: Vec<Op>,
    pairs: usize,
}

#[derive(Debug, Clone)]
struct Level {
    substeps: Vec<SubStep>,
}

impl Level {
    fn ac_count(&self) -> usize {
        self.substeps.iter().map(|s| s.pairs).sum()
    }
}

#[derive(Debug, Clone)]
pub struct RahtPlan {
    order: [Axis; 3],
    /// Index 0 collapses level 1 into the root.
    levels: Vec<Level>,
    leaf_count: usize,
}

impl RahtPlan {
    pub fn new(tree: &Octree, order: [Axis; 3]) -> Self {
        let depth = tree.depth() as usize;
        let levels = (0..depth)
            .map(|l| {
                let mut keys: Vec<u64> = tree.level(l + 1).iter().map(|n| n.code).collect();
                let mut counts: Vec<u32> = tree.level(l + 1).iter().map(|n| n.count).collect();
                let substeps = order
                    .iter()
                    .map(|axis| {
                        let (step, next_keys, next_counts) = plan_substep(&keys, &counts, axis.child_bit());
                        keys = next_keys;
                        counts = next_counts;
                        step
                    })
                    .collect();
                debug_assert!(keys.iter().zip(tree.level(l)).all(|(k, n)| k >> 3 == n.code));
                Level { substeps }
            })
            .collect();
        Self { order, levels, leaf_count: tree.leaf_count() }
    }

    pub fn axis_order(&self) -> [Axis; 3] {
        self.order
    }

    pub fn stage_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Level::ac_count).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    pub fn forward(&self, signal: &[f64]) -> Result<ChannelCoefficients> {
        if signal.len() != self.leaf_count {
            return Err(Error::DimensionMismatch { expected: self.leaf_count, actual: signal.len() });
        }
        let mut current = signal.to_vec();
        let mut stages = vec![Vec::new(); self.levels.len()];
        for (level, acs) in self.levels.iter().zip(stages.iter_mut()).rev() {
            for step in &level.substeps {
                let mut next = Vec::with_capacity(step.ops.len());
                for op in &step.ops {
                    match *op {
                        Op::Pass(i) => next.push(current[i]),
                        Op::Pair { first, second, a1, a2 } => {
                            let (dc, ac) = raht_butterfly(a1, a2, current[first], current[second]);
                            next.push(dc);
                            acs.push(ac);
                        }
                    }
                }
                current = next;
            }
        }
        debug_assert_eq!(current.len(), 1);
        Ok(ChannelCoefficients { root_dc: current[0], stages })
    }

    pub fn inverse(&self, coeffs: &ChannelCoefficients) -> Result<Vec<f64>> {
        let mut current = vec![coeffs.root_dc];
        for (level, acs) in self.levels.iter().zip(&coeffs.stages) {
            if acs.len() != level.ac_count() {
                return Err(Error::DimensionMismatch { expected: level.ac_count(), actual: acs.len() });
            }
            let mut end = acs.len();
            for step in level.substeps.iter().rev() {
                let start = end - step.pairs;
                let mut step_acs = acs[start..end].iter();
                end = start;
                let mut prev = vec![0.0; step.input_len];
                for (&value, op) in current.iter().zip(&step.ops) {
                    match *op {
                        Op::Pass(i) => prev[i] = value,
                        Op::Pair { first, second, a1, a2 } => {
                            let ac = *step_acs.next().expect("pair count matches AC slice");
                            let (g1, g2) = raht_inverse_butterfly(a1, a2, value, ac);
                            prev[first] = g1;
                            prev[second] = g2;
                        }
                    }
                }
                current = prev;
            }
        }
        Ok(current)
    }
}

/// Groups nodes by key with `bit` cleared. Output nodes are ordered by that
/// group key; the member with `bit` clear is the first of a pair.
fn plan_substep(keys: &[u64], counts: &[u32], bit: u64) -> (SubStep, Vec<u64>, Vec<u32>) {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by_key(|&i| (keys[i] & !bit, keys[i]));

    let mut ops = Vec::with_capacity(keys.len());
    let mut next_keys = Vec::with_capacity(keys.len());
    let mut next_counts = Vec::with_capacity(keys.len());
    let mut pairs = 0;
    let mut i = 0;
    while i < order.len() {
        let first = order[i];
        let group = keys[first] & !bit;
        match order.get(i + 1) {
            Some(&second) if keys[second] & !bit == group => {
                ops.push(Op::Pair { first, second, a1: counts[first], a2: counts[second] });
                next_counts.push(counts[first] + counts[second]);
                pairs += 1;
                i += 2;
            }
            _ => {
                ops.push(Op::Pass(first));
                next_counts.push(counts[first]);
                i += 1;
            }
        }
        next_keys.push(group);
    }
    (SubStep { input_len: keys.len(), ops, pairs }, next_keys, next_counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::VoxelizedCloud;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn equal_weights_annihilate_constants() {
        for a in [1, 2, 17, 1000] {
            let (_, ac) = raht_butterfly(a, a, 3.25, 3.25);
            assert_eq!(ac, 0.0);
        }
    }

    #[test]
    fn three_one_butterfly() {
        let (dc, ac) = raht_butterfly(3, 1, 2.0, 2.0);
        assert!((dc - (SQRT3 + 1.0)).abs() < 1e-15);
        assert!((ac - (SQRT3 - 1.0)).abs() < 1e-15);
        let (g1, g2) = raht_inverse_butterfly(3, 1, dc, ac);
        assert!((g1 - 2.0).abs() < 1e-15 && (g2 - 2.0).abs() < 1e-15);
    }

    fn plan_for(voxels: &[[u32; 3]], depth: u8, order: [Axis; 3]) -> RahtPlan {
        let cloud = VoxelizedCloud::new(depth, voxels.to_vec(), vec![[0.0; 3]; voxels.len()], [0.0; 3], 1.0).unwrap();
        RahtPlan::new(&Octree::build(&cloud).unwrap(), order)
    }

    #[test]
    fn full_cube_pairs_every_substep() {
        let voxels: Vec<[u32; 3]> = (0..8).map(|k| [k >> 2 & 1, k >> 1 & 1, k & 1]).collect();
        let plan = plan_for(&voxels, 1, DEFAULT_AXIS_ORDER);
        let pairs: Vec<usize> = plan.levels[0].substeps.iter().map(|s| s.pairs).collect();
        assert_eq!(pairs, vec![4, 2, 1]);
        assert_eq!(plan.stage_sizes(), vec![7]);
    }

    #[test]
    fn unpaired_nodes_pass_through() {
        // differ in x only: no pairing until the x sub-step
        let plan = plan_for(&[[0, 0, 0], [1, 0, 0]], 1, DEFAULT_AXIS_ORDER);
        let pairs: Vec<usize> = plan.levels[0].substeps.iter().map(|s| s.pairs).collect();
        assert_eq!(pairs, vec![0, 0, 1]);
        let c = plan.forward(&[1.0, 5.0]).unwrap();
        let (dc, ac) = raht_butterfly(1, 1, 1.0, 5.0);
        assert_eq!(c.root_dc, dc);
        assert_eq!(c.stages, vec![vec![ac]]);
    }

    #[test]
    fn alternate_axis_order_round_trips() {
        let voxels = [[0, 0, 0], [1, 0, 0], [0, 1, 1], [3, 2, 1], [3, 3, 3], [2, 0, 3]];
        let signal = [10.0, -4.0, 2.5, 7.0, 0.0, 100.0];
        for order in [[Axis::X, Axis::Y, Axis::Z], [Axis::Y, Axis::Z, Axis::X], DEFAULT_AXIS_ORDER] {
            let plan = plan_for(&voxels, 2, order);
            let back = plan.inverse(&plan.forward(&signal).unwrap()).unwrap();
            for (a, b) in back.iter().zip(signal) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
