//! File formats, SVG rendering, the notes directory and the command-line
//! front end built on `infranotes-core`.

pub mod cli;
pub mod error;
pub mod ingest;
pub mod notesdir;
mod records;
pub mod render;
pub mod store;

pub use error::{Error, Result};
pub use infranotes_core as core;
