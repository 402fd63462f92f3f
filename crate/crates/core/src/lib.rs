//! Trajectory processing for board-writing capture: segmentation, stroke
//! classification, character grouping, note assembly, recognition support
//! and a synthetic trajectory generator.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod assemble;
pub mod classify;
pub mod error;
pub mod eval;
pub mod geom;
pub mod group;
pub mod index;
pub mod model;
pub mod noteevents;
pub mod pipeline;
pub mod recognize;
pub mod segment;
pub mod synthgen;
pub mod truth;

pub use error::{Error, Result};
