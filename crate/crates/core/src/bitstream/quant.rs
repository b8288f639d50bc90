/// Uniform scalar quantizer, rounding half away from zero.
pub fn quantize(h: f64, q: f64) -> i64 {
    (h / q).round() as i64
}

pub fn dequantize(index: i64, q: f64) -> f64 {
    index as f64 * q
}

/// Maps signed integers to unsigned: 0, -1, 1, -2, ... -> 0, 1, 2, 3, ...
pub fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

pub fn unzigzag(u: u64) -> i64 {
    ((u >> 1) as i64) ^ -((u & 1) as i64)
}
