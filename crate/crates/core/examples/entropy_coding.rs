// Quantization, zigzag mapping and adaptive Rice coding of one channel.

use ssgt::bitstream::{decode_channel, encode_channel, quantize, rice_decode, rice_encode, zigzag};
use ssgt::codec::ChannelCoefficients;

pub fn run_example() -> ssgt::Result<()> {
    let values = [0, 3, 1, 0, 0, 7, 2, 40, 0, 1];
    let bits = rice_encode(&values)?;
    println!("{values:?} -> {} bits {:02x?}", bits.bit_len, bits.bytes);
    assert_eq!(rice_decode(&bits, values.len())?, values);

    let coeffs = ChannelCoefficients {
        root_dc: 9213.4,
        stages: vec![vec![-310.2, 48.9], vec![12.5, -3.1, 0.4, 22.0], vec![1.2, -0.7, 0.1, 4.9, -2.2]],
    };
    let q = 10.0;
    let indices: Vec<i64> = coeffs.stages.iter().flatten().map(|&h| quantize(h, q)).collect();
    println!("AC indices {indices:?}, zigzagged {:?}", indices.iter().map(|&v| zigzag(v)).collect::<Vec<_>>());

    let payload = encode_channel(&coeffs, q)?;
    let sizes: Vec<usize> = coeffs.stages.iter().map(Vec::len).collect();
    let decoded = decode_channel(&payload, &sizes, q)?;
    println!("payload {} bits; decoded root DC {}", payload.bit_len, decoded.root_dc);
    Ok(())
}

fn main() -> ssgt::Result<()> {
    run_example()
}
