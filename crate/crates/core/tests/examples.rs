#[allow(dead_code)]
mod point_cloud_io {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/point_cloud_io.rs"));
}

#[allow(dead_code)]
mod octree_geometry {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/octree_geometry.rs"));
}

#[allow(dead_code)]
mod graph_basis {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/graph_basis.rs"));
}

#[allow(dead_code)]
mod raht_equivalence {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/raht_equivalence.rs"));
}

#[allow(dead_code)]
mod entropy_coding {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/entropy_coding.rs"));
}

#[allow(dead_code)]
mod encode_decode {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/encode_decode.rs"));
}

#[allow(dead_code)]
mod rd_curve {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/rd_curve.rs"));
}

#[allow(dead_code)]
mod coefficient_order {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coefficient_order.rs"));
}

#[test]
fn point_cloud_io_runs() {
    point_cloud_io::run_example().unwrap();
}

#[test]
fn octree_geometry_runs() {
    octree_geometry::run_example().unwrap();
}

#[test]
fn graph_basis_runs() {
    graph_basis::run_example().unwrap();
}

#[test]
fn raht_equivalence_runs() {
    raht_equivalence::run_example().unwrap();
}

#[test]
fn entropy_coding_runs() {
    entropy_coding::run_example().unwrap();
}

#[test]
fn encode_decode_runs() {
    encode_decode::run_example().unwrap();
}

#[test]
fn rd_curve_runs() {
    rd_curve::run_example().unwrap();
}

#[test]
fn coefficient_order_runs() {
    coefficient_order::run_example().unwrap();
}
