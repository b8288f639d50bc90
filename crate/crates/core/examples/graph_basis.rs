// Graph Fourier basis of one 4x4x4 subspace.

use ssgt::graph::{build_graph, degrees, normalized_laplacian, StageBasis};

pub fn run_example() -> ssgt::Result<()> {
    // (local offset, number of points below the vertex)
    let children = [([0, 0, 0], 5), ([1, 0, 1], 1), ([3, 2, 0], 2), ([2, 2, 2], 7)];
    let g = build_graph(&children, 0.1)?;
    let l = normalized_laplacian(&g)?;
    let basis = StageBasis::for_graph(&g)?;

    println!("degrees {:?}", degrees(&g));
    for i in 0..g.len() {
        let row: Vec<String> = l.row(i).iter().map(|v| format!("{v:+.4}")).collect();
        println!("L_sym[{i}] {}", row.join(" "));
    }
    println!("eigenvalues {:?}", basis.lambda);
    println!("DC kernel {:?}", basis.phi.column(0));

    let signal = [120.0, 80.0, 95.0, 140.0];
    let (dc, ac) = basis.forward(&signal)?;
    println!("signal {signal:?} -> DC {dc:.4}, AC {ac:.4?}");
    let back = basis.inverse(dc, &ac)?;
    println!("reconstructed {back:.6?}");
    Ok(())
}

fn main() -> ssgt::Result<()> {
    run_example()
}
