//! Occupancy octree over a voxelized cloud, Morton ordering and lossless
//! geometry serialization.
//!
//! Child index bit layout is `(x_bit << 2) | (y_bit << 1) | z_bit`. Morton
//! codes interleave the bits of each level most-significant level first, so
//! a node's code at level `l` is its leaf codes shifted right by
//! `3 * (depth - l)`, and the children of a node form a contiguous run of the
//! next level.

use std::ops::Range;

use crate::cloud::VoxelizedCloud;
use crate::error::{Error, Result};

pub fn morton_encode(index: [u32; 3], depth: u8) -> Result<u64> {
    let limit = 1u64 << depth;
    if let Some(&bad) = index.iter().find(|&&v| u64::from(v) >= limit) {
        return Err(Error::IndexOutOfRange { index: bad, depth });
    }
    let mut code = 0u64;
    for bit in (0..depth).rev() {
        let child = ((index[0] >> bit) & 1) << 2 | ((index[1] >> bit) & 1) << 1 | ((index[2] >> bit) & 1);
        code = code << 3 | u64::from(child);
    }
    Ok(code)
}

pub fn morton_decode(code: u64, depth: u8) -> [u32; 3] {
    let mut index = [0u32; 3];
    for bit in 0..depth {
        let child = (code >> (3 * bit)) & 7;
        index[0] |= (((child >> 2) & 1) as u32) << bit;
        index[1] |= (((child >> 1) & 1) as u32) << bit;
        index[2] |= ((child & 1) as u32) << bit;
    }
    index
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OctreeNode {
    /// Morton code of the node at its own level.
    pub code: u64,
    /// Number of occupied leaves in the subtree.
    pub count: u32,
    /// Bit `k` set iff child `k` is occupied. Zero for leaves.
    pub occupancy: u8,
    /// Index of the first child in the next level's node list.
    pub first_child: u32,
}

impl OctreeNode {
    pub fn child_count(&self) -> usize {
        self.occupancy.count_ones() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Octree {
    depth: u8,
    levels: Vec<Vec<OctreeNode>>,
}

impl Octree {
    pub fn build(cloud: &VoxelizedCloud) -> Result<Self> {
        let depth = cloud.depth();
        let codes = cloud.voxels().iter().map(|&v| morton_encode(v, depth)).collect::<Result<Vec<_>>>()?;
        Self::from_leaf_codes(depth, &codes)
    }

    /// Builds the tree from strictly ascending leaf Morton codes.
    pub fn from_leaf_codes(depth: u8, codes: &[u64]) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if let Some(w) = codes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Geometry(format!("leaf codes not strictly ascending at {:#x}", w[1])));
        }
        let mut levels = vec![Vec::new(); depth as usize + 1];
        levels[depth as usize] =
            codes.iter().map(|&code| OctreeNode { code, count: 1, occupancy: 0, first_child: 0 }).collect();
        for l in (0..depth as usize).rev() {
            let mut parents: Vec<OctreeNode> = Vec::new();
            for (i, child) in levels[l + 1].iter().enumerate() {
                let code = child.code >> 3;
                let bit = 1u8 << (child.code & 7);
                match parents.last_mut() {
                    Some(p) if p.code == code => {
                        p.count += child.count;
                        p.occupancy |= bit;
                    }
                    _ => parents.push(OctreeNode { code, count: child.count, occupancy: bit, first_child: i as u32 }),
                }
            }
            levels[l] = parents;
        }
        Ok(Self { depth, levels })
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    /// Nodes of level `l` (0 = root), ascending Morton.
    pub fn level(&self, l: usize) -> &[OctreeNode] {
        &self.levels[l]
    }

    pub fn levels(&self) -> &[Vec<OctreeNode>] {
        &self.levels
    }

    pub fn root(&self) -> &OctreeNode {
        &self.levels[0][0]
    }

    pub fn leaf_count(&self) -> usize {
        self.levels[self.depth as usize].len()
    }

    /// Voxel position of a node at level `l`.
    pub fn position(&self, l: usize, node: &OctreeNode) -> [u32; 3] {
        morton_decode(node.code, l as u8)
    }

    /// Indices into level `l + gap` of every descendant of node `index` at
    /// level `l`.
    pub fn descendants(&self, l: usize, index: usize, gap: usize) -> Range<usize> {
        let mut range = index..index + 1;
        for level in l..l + gap {
            let nodes = &self.levels[level];
            let first = &nodes[range.start];
            let last = &nodes[range.end - 1];
            range = first.first_child as usize..last.first_child as usize + last.child_count();
        }
        range
    }

    pub fn internal_node_count(&self) -> usize {
        self.levels[..self.depth as usize].iter().map(Vec::len).sum()
    }

    /// One occupancy byte per internal node, breadth first, ascending Morton
    /// within a level.
    pub fn serialize_geometry(&self) -> Vec<u8> {
        self.levels[..self.depth as usize].iter().flat_map(|level| level.iter().map(|n| n.occupancy)).collect()
    }

    pub fn deserialize_geometry(bytes: &[u8], depth: u8, leaf_count: usize) -> Result<Self> {
        let mut codes = vec![0u64];
        let mut pos = 0usize;
        for l in 0..depth {
            let end = pos + codes.len();
            let Some(occupancy) = bytes.get(pos..end) else {
                return Err(Error::Geometry(format!(
                    "truncated occupancy stream at level {l}: need {} bytes, have {}",
                    end,
                    bytes.len()
                )));
            };
            let mut next = Vec::with_capacity(codes.len() * 2);
            for (&code, &byte) in codes.iter().zip(occupancy) {
                if byte == 0 {
                    return Err(Error::Geometry(format!("zero occupancy byte at level {l}")));
                }
                next.extend((0..8u64).filter(|k| byte >> k & 1 == 1).map(|k| code << 3 | k));
            }
            if next.len() > leaf_count {
                return Err(Error::Geometry(format!(
                    "level {} has {} nodes, more than {leaf_count} leaves",
                    l + 1,
                    next.len()
                )));
            }
            codes = next;
            pos = end;
        }
        if pos != bytes.len() {
            return Err(Error::Geometry(format!("{} trailing occupancy bytes", bytes.len() - pos)));
        }
        if codes.len() != leaf_count {
            return Err(Error::Geometry(format!(
                "leaf count {} does not match header count {leaf_count}",
                codes.len()
            )));
        }
        Self::from_leaf_codes(depth, &codes)
    }
}
