//! Point cloud containers, PLY I/O, color conversion and voxelization.

pub mod color;
pub mod ply;
mod voxel;

pub use color::{rgb_to_ycbcr, ycbcr_to_rgb, ycbcr_to_rgb_f64};
pub use ply::{read_ply, write_ply, PlyFormat};
pub use voxel::voxelize;

use crate::error::{Error, Result};
use crate::octree::morton_encode;

/// Maximum supported octree depth (3 * 20 bits fit a 64-bit Morton code).
pub const MAX_DEPTH: u8 = 20;

/// Unvoxelized input: arbitrary positions with 8-bit RGB.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawPointCloud {
    pub points: Vec<[f64; 3]>,
    pub colors: Vec<[u8; 3]>,
}

impl RawPointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Deduplicated voxels on a `2^depth` grid with YCbCr attributes, sorted by
/// Morton code.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelizedCloud {
    depth: u8,
    voxels: Vec<[u32; 3]>,
    attributes: Vec<[f64; 3]>,
    origin: [f64; 3],
    edge: f64,
}

impl VoxelizedCloud {
    /// Builds a cloud from voxel/attribute pairs in any order. Fails on
    /// duplicate or out-of-range voxels.
    pub fn new(
        depth: u8,
        voxels: Vec<[u32; 3]>,
        attributes: Vec<[f64; 3]>,
        origin: [f64; 3],
        edge: f64,
    ) -> Result<Self> {
        if !(1..=MAX_DEPTH).contains(&depth) {
            return Err(Error::InvalidParams(format!("depth {depth} outside 1..={MAX_DEPTH}")));
        }
        if voxels.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if voxels.len() != attributes.len() {
            return Err(Error::DimensionMismatch { expected: voxels.len(), actual: attributes.len() });
        }
        let mut keyed = voxels
            .into_iter()
            .zip(attributes)
            .map(|(v, a)| Ok((morton_encode(v, depth)?, v, a)))
            .collect::<Result<Vec<_>>>()?;
        keyed.sort_unstable_by_key(|&(code, _, _)| code);
        if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicatePosition(w[0].1));
        }
        let (voxels, attributes) = keyed.into_iter().map(|(_, v, a)| (v, a)).unzip();
        Ok(Self { depth, voxels, attributes, origin, edge })
    }

    pub(crate) fn from_sorted_parts(
        depth: u8,
        voxels: Vec<[u32; 3]>,
        attributes: Vec<[f64; 3]>,
        origin: [f64; 3],
        edge: f64,
    ) -> Self {
        debug_assert_eq!(voxels.len(), attributes.len());
        Self { depth, voxels, attributes, origin, edge }
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.voxels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.voxels.is_empty()
    }

    pub fn voxels(&self) -> &[[u32; 3]] {
        &self.voxels
    }

    pub fn attributes(&self) -> &[[f64; 3]] {
        &self.attributes
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn edge(&self) -> f64 {
        self.edge
    }

    /// One attribute channel (0 = Y, 1 = Cb, 2 = Cr) as a signal vector.
    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.attributes.iter().map(|a| a[c]).collect()
    }

    /// Replaces the attributes, keeping geometry.
    pub fn with_attributes(&self, attributes: Vec<[f64; 3]>) -> Result<Self> {
        if attributes.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual: attributes.len() });
        }
        Ok(Self { attributes, ..self.clone() })
    }

    /// Voxel centers mapped back through the bounding cube, colors converted
    /// to clamped 8-bit RGB.
    pub fn to_raw(&self) -> RawPointCloud {
        let cell = self.edge / (1u64 << self.depth) as f64;
        let points =
            self.voxels.iter().map(|v| std::array::from_fn(|i| self.origin[i] + (v[i] as f64 + 0.5) * cell)).collect();
        let colors = self.attributes.iter().map(|&a| ycbcr_to_rgb(a)).collect();
        RawPointCloud { points, colors }
    }
}
