//! Rate-distortion measurement.

pub mod metrics;
pub mod synth;

pub use metrics::{bpp, mse, psnr, psnr_with_peak, PSNR_SENTINEL};
pub use synth::{synth_cloud, synth_raw};

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::bitstream::{compress, decompress};
use crate::cloud::VoxelizedCloud;
use crate::codec::{CodecParams, Execution, Transform};
use crate::error::{Error, Result};

/// Quantization steps of the standard sweep.
pub const DEFAULT_Q_LIST: [f64; 5] = [15.0, 20.0, 25.0, 30.0, 35.0];

pub const REPORT_HEADER: &str = "input,transform,L,s,alpha,Q,bpp,psnr_y,psnr_cb,psnr_cr,enc_ms,dec_ms";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RdPoint {
    pub input: String,
    pub transform: Transform,
    #[serde(rename = "L")]
    pub depth: u8,
    #[serde(rename = "s")]
    pub step: u8,
    pub alpha: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub bpp: f64,
    pub psnr_y: f64,
    pub psnr_cb: f64,
    pub psnr_cr: f64,
    pub enc_ms: f64,
    pub dec_ms: f64,
}

/// One encode, decode and measurement through the full file format.
pub fn evaluate(input: &str, cloud: &VoxelizedCloud, params: &CodecParams, exec: Execution) -> Result<RdPoint> {
    let start = Instant::now();
    let file = compress(cloud, params, exec)?;
    let enc_ms = start.elapsed().as_secs_f64() * 1e3;

    let start = Instant::now();
    let decoded = decompress(&file.bytes, exec)?;
    let dec_ms = start.elapsed().as_secs_f64() * 1e3;

    if decoded.cloud.voxels() != cloud.voxels() {
        return Err(Error::Geometry("decoded geometry differs from input".into()));
    }
    let channel_psnr = |c| psnr(&cloud.channel(c), &decoded.cloud.channel(c));
    Ok(RdPoint {
        input: input.to_string(),
        transform: params.transform,
        depth: params.depth,
        step: params.step,
        alpha: params.alpha,
        q: params.q[0],
        bpp: file.bpp(),
        psnr_y: channel_psnr(0)?,
        psnr_cb: channel_psnr(1)?,
        psnr_cr: channel_psnr(2)?,
        enc_ms,
        dec_ms,
    })
}

/// Evaluates every configuration at every quantization step. Rows are
/// ordered by transform, then step, then Q.
pub fn rd_sweep(
    input: &str,
    cloud: &VoxelizedCloud,
    configs: &[CodecParams],
    q_list: &[f64],
    exec: Execution,
) -> Result<Vec<RdPoint>> {
    let mut rows = Vec::with_capacity(configs.len() * q_list.len());
    for config in configs {
        for &q in q_list {
            rows.push(evaluate(input, cloud, &config.with_q(q), exec)?);
        }
    }
    rows.sort_by(|a, b| (a.transform, a.step).cmp(&(b.transform, b.step)).then(a.q.total_cmp(&b.q)));
    Ok(rows)
}

/// Writes rows as CSV with [`REPORT_HEADER`] and LF line endings.
pub fn write_report<W: Write>(rows: &[RdPoint], out: W) -> Result<()> {
    let mut writer =
        csv::WriterBuilder::new().has_headers(false).terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let header: Vec<&str> = REPORT_HEADER.split(',').collect();
    writer.write_record(&header).map_err(csv_error)?;
    for row in rows {
        writer.serialize(row).map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn report_string(rows: &[RdPoint]) -> Result<String> {
    let mut buf = Vec::new();
    write_report(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidParams(format!("report serialization failed: {other:?}")),
    }
}
