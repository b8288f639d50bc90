//! BT.601 full-range (JPEG) RGB <-> YCbCr conversion.
//!
//! Chroma stays floating point and unclamped; clamping only happens when
//! going back to 8-bit RGB.

use std::sync::LazyLock;

const FORWARD: [[f64; 3]; 3] = [[0.299, 0.587, 0.114], [-0.168736, -0.331264, 0.5], [0.5, -0.418688, -0.081312]];

const OFFSET: [f64; 3] = [0.0, 128.0, 128.0];

static INVERSE: LazyLock<[[f64; 3]; 3]> = LazyLock::new(|| invert3(&FORWARD));

fn invert3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let c00 = cof(1, 2, 1, 2);
    let c01 = -cof(1, 2, 0, 2);
    let c02 = cof(1, 2, 0, 1);
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    // adjugate = transpose of the cofactor matrix
    [
        [c00 / det, -cof(0, 2, 1, 2) / det, cof(0, 1, 1, 2) / det],
        [c01 / det, cof(0, 2, 0, 2) / det, -cof(0, 1, 0, 2) / det],
        [c02 / det, -cof(0, 2, 0, 1) / det, cof(0, 1, 0, 1) / det],
    ]
}

pub fn rgb_to_ycbcr(rgb: [u8; 3]) -> [f64; 3] {
    let v = rgb.map(f64::from);
    std::array::from_fn(|i| OFFSET[i] + FORWARD[i][0] * v[0] + FORWARD[i][1] * v[1] + FORWARD[i][2] * v[2])
}

/// Exact inverse of [`rgb_to_ycbcr`] without rounding or clamping.
pub fn ycbcr_to_rgb_f64(ycc: [f64; 3]) -> [f64; 3] {
    let m = &*INVERSE;
    let c = [ycc[0] - OFFSET[0], ycc[1] - OFFSET[1], ycc[2] - OFFSET[2]];
    std::array::from_fn(|i| m[i][0] * c[0] + m[i][1] * c[1] + m[i][2] * c[2])
}

pub fn ycbcr_to_rgb(ycc: [f64; 3]) -> [u8; 3] {
    // f64::round is half away from zero
    ycbcr_to_rgb_f64(ycc).map(|v| v.round().clamp(0.0, 255.0) as u8)
}
