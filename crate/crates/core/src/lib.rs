pub mod bitstream;
pub mod cli;
pub mod cloud;
pub mod codec;
pub mod error;
pub mod eval;
pub mod graph;
pub mod octree;

pub use error::{Error, Result};
