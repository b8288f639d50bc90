// Write a PLY file, read it back and voxelize it.

use ssgt::cloud::{read_ply, voxelize, write_ply, PlyFormat};
use ssgt::eval::synth_raw;

pub fn run_example() -> ssgt::Result<()> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("sphere.ply");

    let raw = synth_raw(7, 2000)?;
    std::fs::write(&path, write_ply(&raw, PlyFormat::Ascii))?;
    let back = read_ply(&std::fs::read(&path)?)?;
    assert_eq!(back.len(), raw.len());

    for depth in [4, 6, 8] {
        let cloud = voxelize(&back, depth)?;
        println!(
            "depth {depth}: {} points -> {} voxels, cube origin {:?} edge {:.4}",
            back.len(),
            cloud.len(),
            cloud.origin(),
            cloud.edge()
        );
    }

    // voxel centers and YCbCr -> RGB on the way out
    let cloud = voxelize(&back, 6)?;
    let out = dir.path().join("voxels.ply");
    std::fs::write(&out, write_ply(&cloud.to_raw(), PlyFormat::BinaryLittleEndian))?;
    println!("first voxel {:?} YCbCr {:?}", cloud.voxels()[0], cloud.attributes()[0]);
    Ok(())
}

fn main() -> ssgt::Result<()> {
    run_example()
}
