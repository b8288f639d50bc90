//! Deterministic synthetic test clouds: a Fibonacci-lattice sphere with
//! smoothly varying color.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cloud::{voxelize, RawPointCloud, VoxelizedCloud};
use crate::error::{Error, Result};

fn rotation(seed: u64) -> [[f64; 3]; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [a, b, c]: [f64; 3] = std::array::from_fn(|_| rng.random::<f64>() * TAU);
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    let (sc, cc) = c.sin_cos();
    // Rz(a) * Ry(b) * Rx(c)
    [
        [ca * cb, ca * sb * sc - sa * cc, ca * sb * cc + sa * sc],
        [sa * cb, sa * sb * sc + ca * cc, sa * sb * cc - ca * sc],
        [-sb, cb * sc, cb * cc],
    ]
}

fn channel(v: f64) -> u8 {
    (128.0 + 127.0 * (3.0 * v).sin()).round().clamp(0.0, 255.0) as u8
}

/// `n` points on the unit sphere, rotated by a seed-derived rotation, colored
/// by `128 + 127 sin(3 * coordinate)` per channel.
pub fn synth_raw(seed: u64, n: usize) -> Result<RawPointCloud> {
    if n == 0 {
        return Err(Error::EmptyCloud);
    }
    let r = rotation(seed);
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut cloud = RawPointCloud { points: Vec::with_capacity(n), colors: Vec::with_capacity(n) };
    for i in 0..n {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
        let radius = (1.0 - z * z).sqrt();
        let (s, c) = (i as f64 * golden).sin_cos();
        let p = [radius * c, radius * s, z];
        let q: [f64; 3] = std::array::from_fn(|k| r[k][0] * p[0] + r[k][1] * p[1] + r[k][2] * p[2]);
        cloud.points.push(q);
        cloud.colors.push(q.map(channel));
    }
    Ok(cloud)
}

pub fn synth_cloud(seed: u64, n: usize, depth: u8) -> Result<VoxelizedCloud> {
    voxelize(&synth_raw(seed, n)?, depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        assert_eq!(synth_cloud(0, 1, 4).unwrap().len(), 1);
    }

    #[test]
    fn deterministic() {
        assert_eq!(synth_cloud(7, 500, 5).unwrap(), synth_cloud(7, 500, 5).unwrap());
        assert_ne!(synth_raw(7, 50).unwrap(), synth_raw(8, 50).unwrap());
    }

    #[test]
    fn points_on_unit_sphere() {
        let raw = synth_raw(3, 200).unwrap();
        for p in &raw.points {
            let r2: f64 = p.iter().map(|v| v * v).sum();
            assert!((r2 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_is_orthonormal() {
        let r = rotation(42);
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn empty_rejected() {
        assert!(synth_cloud(0, 0, 4).is_err());
    }
}
