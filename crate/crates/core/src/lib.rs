//! Exact art gallery solving: visibility, arrangements and set cover.

pub mod geometry;
pub mod arrangement;
pub mod setcover;
pub mod instances;
pub mod pointgen;
pub mod solver;
