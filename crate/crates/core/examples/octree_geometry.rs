// Octree levels and the occupancy-byte geometry section.

use ssgt::cloud::VoxelizedCloud;
use ssgt::octree::{morton_encode, Octree};

pub fn run_example() -> ssgt::Result<()> {
    let voxels = vec![[0, 0, 0], [0, 0, 1], [3, 2, 1], [3, 3, 3], [1, 2, 3]];
    let attrs = vec![[128.0; 3]; voxels.len()];
    let cloud = VoxelizedCloud::new(2, voxels, attrs, [0.0; 3], 1.0)?;
    let tree = Octree::build(&cloud)?;

    for (l, level) in tree.levels().iter().enumerate() {
        let nodes: Vec<String> =
            level.iter().map(|n| format!("code={} a={} occ={:08b}", n.code, n.count, n.occupancy)).collect();
        println!("level {l}: {}", nodes.join(" | "));
    }

    let bytes = tree.serialize_geometry();
    println!("geometry: {} bytes {:02x?}", bytes.len(), bytes);
    let back = Octree::deserialize_geometry(&bytes, 2, cloud.len())?;
    assert_eq!(back, tree);

    // child index is (x << 2) | (y << 1) | z
    println!("morton([3, 2, 1]) = {:#08b}", morton_encode([3, 2, 1], 2)?);
    Ok(())
}

fn main() -> ssgt::Result<()> {
    run_example()
}
