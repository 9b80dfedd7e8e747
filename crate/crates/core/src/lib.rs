pub mod cli;
pub mod config;
pub mod cylindric;
pub mod error;
pub mod genfunc;
pub mod oracle;
pub mod rank;
pub mod render;
pub mod series;

pub use config::{counting_sort, Configuration, GraphShape, Vertex};
pub use error::{Result, SandpileError};
