//! Quantization, entropy coding and the compressed file format.
//!
//! Each channel payload is a sequence of Rice-coded zigzagged indices, stage
//! by stage from the root. The Rice context restarts at every stage
//! boundary; the root DC is coded first, inside stage 0's context.

pub mod container;
pub mod quant;
pub mod rice;

pub use container::{assemble, parse, Header, Parsed, HEADER_LEN, MAGIC, VERSION};
pub use quant::{dequantize, quantize, unzigzag, zigzag};
pub use rice::{rice_decode, rice_encode, BitString, RiceContext, RiceDecoder, RiceEncoder};

use crate::cloud::VoxelizedCloud;
use crate::codec::{ChannelCoefficients, CodecParams, CoefficientSet, Execution, TransformPlan};
use crate::error::{Error, Result};
use crate::octree::{morton_decode, Octree};

/// Quantize-dequantize every coefficient, as the decoder will see them.
pub fn quantize_coefficients(coeffs: &ChannelCoefficients, q: f64) -> ChannelCoefficients {
    coeffs.map(|h| dequantize(quantize(h, q), q))
}

pub fn encode_channel(coeffs: &ChannelCoefficients, q: f64) -> Result<BitString> {
    let mut enc = RiceEncoder::new();
    for (i, stage) in coeffs.stages.iter().enumerate() {
        enc.reset_context();
        if i == 0 {
            enc.encode(zigzag(quantize(coeffs.root_dc, q)))?;
        }
        for &h in stage {
            enc.encode(zigzag(quantize(h, q)))?;
        }
    }
    Ok(enc.finish())
}

/// Decodes and dequantizes one channel; the payload must be consumed exactly.
pub fn decode_channel(bits: &BitString, stage_sizes: &[usize], q: f64) -> Result<ChannelCoefficients> {
    let mut dec = RiceDecoder::new(bits);
    let next = |dec: &mut RiceDecoder| -> Result<f64> { Ok(dequantize(unzigzag(dec.decode()?), q)) };
    let mut root_dc = 0.0;
    let mut stages = Vec::with_capacity(stage_sizes.len());
    for (i, &n) in stage_sizes.iter().enumerate() {
        dec.reset_context();
        if i == 0 {
            root_dc = next(&mut dec)?;
        }
        stages.push((0..n).map(|_| next(&mut dec)).collect::<Result<Vec<_>>>()?);
    }
    if dec.remaining_bits() != 0 {
        return Err(Error::Bitstream(format!("{} unread payload bits", dec.remaining_bits())));
    }
    Ok(ChannelCoefficients { root_dc, stages })
}

#[derive(Debug, Clone)]
pub struct Compressed {
    pub header: Header,
    pub bytes: Vec<u8>,
}

impl Compressed {
    /// Attribute bits per point.
    pub fn bpp(&self) -> f64 {
        self.header.attribute_bits() as f64 / self.header.point_count as f64
    }
}

/// Encodes a voxelized cloud into a complete compressed file.
pub fn compress(cloud: &VoxelizedCloud, params: &CodecParams, exec: Execution) -> Result<Compressed> {
    params.validate()?;
    if cloud.depth() != params.depth {
        return Err(Error::InvalidParams(format!(
            "cloud depth {} does not match parameter depth {}",
            cloud.depth(),
            params.depth
        )));
    }
    let tree = Octree::build(cloud)?;
    let plan = TransformPlan::new(&tree, params, exec)?;
    let coeffs = plan.forward_cloud(cloud, exec)?;
    let payloads: Vec<BitString> =
        (0..3).map(|c| encode_channel(&coeffs.channels[c], params.q[c])).collect::<Result<_>>()?;
    let payloads: [BitString; 3] = payloads.try_into().unwrap_or_else(|_| unreachable!());
    let geometry = tree.serialize_geometry();
    let header = Header {
        transform: params.transform,
        depth: params.depth,
        step: params.step,
        alpha: params.alpha,
        q: params.q,
        point_count: cloud.len() as u64,
        geometry_bytes: geometry.len() as u64,
        payload_bits: payloads.each_ref().map(|p| p.bit_len),
        origin: cloud.origin(),
        edge: cloud.edge(),
    };
    let bytes = assemble(&header, &geometry, &payloads)?;
    Ok(Compressed { header, bytes })
}

#[derive(Debug, Clone)]
pub struct Decompressed {
    pub header: Header,
    pub cloud: VoxelizedCloud,
    /// Dequantized coefficients as read from the payloads.
    pub coefficients: CoefficientSet,
}

impl Header {
    pub fn params(&self) -> CodecParams {
        CodecParams { transform: self.transform, depth: self.depth, step: self.step, alpha: self.alpha, q: self.q }
    }
}

pub fn decompress(bytes: &[u8], exec: Execution) -> Result<Decompressed> {
    let Parsed { header, geometry, payloads } = parse(bytes)?;
    let params = header.params();
    params.validate().map_err(|e| Error::Bitstream(format!("header parameters: {e}")))?;
    let point_count =
        usize::try_from(header.point_count).map_err(|_| Error::Bitstream("point count overflows".into()))?;
    let tree = Octree::deserialize_geometry(geometry, header.depth, point_count)?;
    let plan = TransformPlan::new(&tree, &params, exec)?;
    let sizes = plan.stage_sizes();
    let channels: Vec<ChannelCoefficients> =
        (0..3).map(|c| decode_channel(&payloads[c], &sizes, header.q[c])).collect::<Result<_>>()?;
    let coefficients = CoefficientSet { channels: channels.try_into().unwrap_or_else(|_| unreachable!()) };
    let attributes = plan.inverse_cloud(&coefficients, exec)?;
    let depth = header.depth;
    let voxels = tree.level(depth as usize).iter().map(|n| morton_decode(n.code, depth)).collect();
    let cloud = VoxelizedCloud::from_sorted_parts(depth, voxels, attributes, header.origin, header.edge);
    Ok(Decompressed { header, cloud, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_round_trip_at_index_level() {
        let c =
            ChannelCoefficients { root_dc: 1234.5, stages: vec![vec![3.0, -7.9], vec![], vec![0.2, 44.0, -1000.0]] };
        let bits = encode_channel(&c, 2.0).unwrap();
        let back = decode_channel(&bits, &[2, 0, 3], 2.0).unwrap();
        assert_eq!(back, quantize_coefficients(&c, 2.0));
    }

    #[test]
    fn stage_sizes_must_match_payload() {
        let c = ChannelCoefficients { root_dc: 1.0, stages: vec![vec![3.0], vec![5.0]] };
        let bits = encode_channel(&c, 1.0).unwrap();
        assert!(decode_channel(&bits, &[1], 1.0).is_err());
        assert!(decode_channel(&bits, &[1, 1, 1], 1.0).is_err());
    }

    #[test]
    fn single_point_file() {
        let cloud = VoxelizedCloud::new(3, vec![[5, 2, 7]], vec![[100.0, 90.0, 140.0]], [0.0; 3], 2.0).unwrap();
        for params in [CodecParams::ssgt(3, 1), CodecParams::raht(3)] {
            let params = params.with_q(0.5);
            let file = compress(&cloud, &params, Execution::Sequential).unwrap();
            assert_eq!(file.header.geometry_bytes, 3);
            let out = decompress(&file.bytes, Execution::Sequential).unwrap();
            assert_eq!(out.cloud.voxels(), cloud.voxels());
            assert_eq!(out.cloud.attributes(), cloud.attributes());
        }
    }

    #[test]
    fn depth_mismatch_rejected() {
        let cloud = VoxelizedCloud::new(3, vec![[0, 0, 0]], vec![[0.0; 3]], [0.0; 3], 1.0).unwrap();
        assert!(matches!(compress(&cloud, &CodecParams::raht(4), Execution::Sequential), Err(Error::InvalidParams(_))));
    }
}
