// Compress a cloud to a file with each transform and decode it again.

use ssgt::bitstream::{compress, decompress};
use ssgt::codec::{CodecParams, Execution};
use ssgt::eval::{psnr, synth_cloud};

pub fn run_example() -> ssgt::Result<()> {
    let cloud = synth_cloud(42, 3000, 6)?;
    let dir = tempfile::tempdir()?;

    for params in [CodecParams::raht(6), CodecParams::ssgt(6, 1), CodecParams::ssgt(6, 2)] {
        let params = params.with_q(20.0);
        let file = compress(&cloud, &params, Execution::Parallel)?;
        let path = dir.path().join(format!("{}{}.ssgt", params.transform, params.step));
        std::fs::write(&path, &file.bytes)?;

        let decoded = decompress(&std::fs::read(&path)?, Execution::Parallel)?;
        assert_eq!(decoded.cloud.voxels(), cloud.voxels());
        println!(
            "{} s={}: {} bytes ({} geometry), {:.3} bpp, Y-PSNR {:.2} dB",
            params.transform,
            params.step,
            file.bytes.len(),
            file.header.geometry_bytes,
            file.bpp(),
            psnr(&cloud.channel(0), &decoded.cloud.channel(0))?
        );
    }
    Ok(())
}

fn main() -> ssgt::Result<()> {
    run_example()
}
