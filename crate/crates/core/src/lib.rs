//! List recoloring of planar and degenerate graphs.

pub mod color;
pub mod graph;
pub mod plane;
pub mod kernel;
pub mod scene;
pub mod format;
pub mod generate;
pub mod pipeline;
pub mod oracle;
