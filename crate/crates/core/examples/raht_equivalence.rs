// A two-vertex graph with unit distance weight reproduces the RAHT butterfly.

use ssgt::codec::raht_butterfly;
use ssgt::graph::{StageBasis, SubspaceGraph};

pub fn run_example() -> ssgt::Result<()> {
    for (a1, a2) in [(3, 1), (1, 1), (2, 7), (100, 3)] {
        let basis = StageBasis::for_graph(&SubspaceGraph::unit_pair(a1, a2))?;
        let (g1, g2) = (150.0, 90.0);
        let (dc, ac) = basis.forward(&[g1, g2])?;
        let (rdc, rac) = raht_butterfly(a1, a2, g1, g2);
        println!(
            "a=({a1},{a2}) lambda1 {:.6} (expected {:.6}) SSGT ({dc:.6}, {:.6}) RAHT ({rdc:.6}, {rac:.6})",
            basis.lambda[1],
            f64::from(a1 + a2) / f64::from(a1 + a2 - 1),
            ac[0]
        );
    }
    Ok(())
}

fn main() -> ssgt::Result<()> {
    run_example()
}
