//! Compile municipality-level lake ecology data into fabrication-ready
//! tableware: parametric vessel encodings, watertight meshes, cutting
//! outlines and a deterministic manifest.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geodata;
pub mod config;
pub mod encoder;
pub mod mesher;
pub mod report;
pub mod fixture;
pub mod pipeline;
