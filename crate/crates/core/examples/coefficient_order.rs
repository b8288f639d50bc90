// Stage layout of the transform and the canonical coefficient order.

use ssgt::codec::{canonical_order, inverse_order, CodecParams, Execution, TransformPlan};
use ssgt::eval::synth_cloud;
use ssgt::octree::Octree;

pub fn run_example() -> ssgt::Result<()> {
    let cloud = synth_cloud(5, 400, 4)?;
    let tree = Octree::build(&cloud)?;

    for params in [CodecParams::raht(4), CodecParams::ssgt(4, 1), CodecParams::ssgt(4, 2)] {
        let plan = TransformPlan::new(&tree, &params, Execution::Sequential)?;
        let coeffs = plan.forward(&cloud.channel(0))?;
        let list = canonical_order(&coeffs);
        assert_eq!(inverse_order(&list, &plan.stage_sizes())?, coeffs);
        println!(
            "{} s={}: {} voxels, AC per stage {:?}, root DC {:.2}",
            params.transform,
            params.step,
            cloud.len(),
            plan.stage_sizes(),
            list[0]
        );
    }
    Ok(())
}

fn main() -> ssgt::Result<()> {
    run_example()
}
