use std::collections::BTreeMap;

use crate::cloud::{rgb_to_ycbcr, RawPointCloud, VoxelizedCloud, MAX_DEPTH};
use crate::error::{Error, Result};
use crate::octree::morton_encode;

/// Snaps a raw cloud onto a `2^depth` grid inside its bounding cube.
///
/// The cube starts at the component-wise minimum and its edge is the largest
/// axis extent, widened by one ulp so the maximum lands inside the last cell.
/// Points sharing a voxel are merged by the mean of their YCbCr values.
pub fn voxelize(cloud: &RawPointCloud, depth: u8) -> Result<VoxelizedCloud> {
    if !(1..=MAX_DEPTH).contains(&depth) {
        return Err(Error::InvalidParams(format!("depth {depth} outside 1..={MAX_DEPTH}")));
    }
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if cloud.points.len() != cloud.colors.len() {
        return Err(Error::DimensionMismatch { expected: cloud.points.len(), actual: cloud.colors.len() });
    }
    if cloud.points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParams("non-finite point coordinate".into()));
    }

    let mut origin = [f64::INFINITY; 3];
    let mut max = [f64::NEG_INFINITY; 3];
    for p in &cloud.points {
        for i in 0..3 {
            origin[i] = origin[i].min(p[i]);
            max[i] = max[i].max(p[i]);
        }
    }
    let extent = (0..3).map(|i| max[i] - origin[i]).fold(0.0, f64::max);
    let edge = if extent > 0.0 { extent * (1.0 + f64::EPSILON) } else { 1.0 };

    let cells = (1u64 << depth) as f64;
    let top = (1u32 << depth) - 1;
    let mut sums: BTreeMap<u64, ([u32; 3], [f64; 3], u32)> = BTreeMap::new();
    for (p, &rgb) in cloud.points.iter().zip(&cloud.colors) {
        let idx: [u32; 3] = std::array::from_fn(|i| {
            let t = ((p[i] - origin[i]) / edge * cells).floor();
            t.clamp(0.0, top as f64) as u32
        });
        let ycc = rgb_to_ycbcr(rgb);
        let entry = sums.entry(morton_encode(idx, depth)?).or_insert((idx, [0.0; 3], 0));
        for (sum, v) in entry.1.iter_mut().zip(ycc) {
            *sum += v;
        }
        entry.2 += 1;
    }

    let (voxels, attributes) = sums.into_values().map(|(idx, sum, n)| (idx, sum.map(|s| s / n as f64))).unzip();
    Ok(VoxelizedCloud::from_sorted_parts(depth, voxels, attributes, origin, edge))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let raw = RawPointCloud { points: vec![[3.0, -1.0, 7.5]], colors: vec![[9, 9, 9]] };
        let v = voxelize(&raw, 1).unwrap();
        assert_eq!(v.voxels(), &[[0, 0, 0]]);
        assert_eq!(v.edge(), 1.0);
        assert_eq!(v.origin(), [3.0, -1.0, 7.5]);
    }

    #[test]
    fn extremes_land_in_opposite_corners() {
        let raw = RawPointCloud { points: vec![[1.0, 1.0, 1.0], [0.0, 0.0, 0.0]], colors: vec![[0; 3]; 2] };
        let v = voxelize(&raw, 1).unwrap();
        assert_eq!(v.voxels(), &[[0, 0, 0], [1, 1, 1]]);
    }

    #[test]
    fn coincident_points_are_averaged() {
        // Y of gray level g is g (up to rounding of the matrix rows)
        let raw = RawPointCloud { points: vec![[0.0; 3], [0.0; 3]], colors: vec![[10; 3], [20; 3]] };
        let v = voxelize(&raw, 3).unwrap();
        assert_eq!(v.len(), 1);
        assert!((v.attributes()[0][0] - 15.0).abs() < 1e-9);
        assert!((v.attributes()[0][1] - 128.0).abs() < 1e-9);
    }

    #[test]
    fn output_is_morton_sorted() {
        let raw = RawPointCloud {
            points: vec![[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]],
            colors: vec![[0; 3]; 4],
        };
        let v = voxelize(&raw, 1).unwrap();
        // child index = x<<2 | y<<1 | z
        assert_eq!(v.voxels(), &[[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0]]);
    }

    #[test]
    fn rejects_empty_and_bad_depth() {
        assert!(matches!(voxelize(&RawPointCloud::default(), 4), Err(Error::EmptyCloud)));
        let raw = RawPointCloud { points: vec![[0.0; 3]], colors: vec![[0; 3]] };
        assert!(voxelize(&raw, 0).is_err());
        assert!(voxelize(&raw, 21).is_err());
    }
}
