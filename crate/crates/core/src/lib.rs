//! Design of minimal borehole-resistivity acquisition systems.
pub mod channels;
pub mod dataset;
pub mod designer;
pub mod em;
pub mod error;
pub mod neural;
pub mod textio;
pub use error::{Error, Result};
pub mod workbench;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
