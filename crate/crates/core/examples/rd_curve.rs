// Rate-distortion sweep over the standard quantization steps, as CSV.

use ssgt::codec::{CodecParams, Execution};
use ssgt::eval::{rd_sweep, report_string, synth_cloud, DEFAULT_Q_LIST};

pub fn run_example() -> ssgt::Result<()> {
    let cloud = synth_cloud(42, 2000, 6)?;
    let configs = [CodecParams::raht(6), CodecParams::ssgt(6, 2)];
    let rows = rd_sweep("synth:seed=42,n=2000", &cloud, &configs, &DEFAULT_Q_LIST, Execution::Parallel)?;
    print!("{}", report_string(&rows)?);
    Ok(())
}

fn main() -> ssgt::Result<()> {
    run_example()
}
