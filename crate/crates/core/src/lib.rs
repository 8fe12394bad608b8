pub mod error;
pub mod generators;
pub mod graph;
pub mod greedy;
pub mod oracles;
pub mod packing;
pub mod polytime;
pub mod preserver;
pub mod replay;

pub use error::{Error, Result};
