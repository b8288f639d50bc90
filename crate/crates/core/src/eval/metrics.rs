use crate::error::{Error, Result};

/// Reported instead of infinity when the signals are identical.
pub const PSNR_SENTINEL: f64 = 999.0;

pub const PEAK: f64 = 255.0;

pub fn mse(orig: &[f64], recon: &[f64]) -> Result<f64> {
    if orig.len() != recon.len() {
        return Err(Error::DimensionMismatch { expected: orig.len(), actual: recon.len() });
    }
    if orig.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let sum: f64 = orig.iter().zip(recon).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum / orig.len() as f64)
}

pub fn psnr_with_peak(orig: &[f64], recon: &[f64], peak: f64) -> Result<f64> {
    let mse = mse(orig, recon)?;
    if mse == 0.0 {
        return Ok(PSNR_SENTINEL);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}

pub fn psnr(orig: &[f64], recon: &[f64]) -> Result<f64> {
    psnr_with_peak(orig, recon, PEAK)
}

/// Attribute bits per point.
pub fn bpp(payload_bits: u64, points: usize) -> f64 {
    payload_bits as f64 / points as f64
}
