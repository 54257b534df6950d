//! Lift-and-project relaxations of the chipped and cropped hypercubes.

pub mod analysis;
pub mod combinatorics;
pub mod error;
pub mod moments;
pub mod operators;
pub mod polytopes;
pub mod symmat;

pub use error::{Error, Result};
