//! Defining systems, their bound quivers and combinatorial data, and exact
//! verification of the associated string modules.

pub mod algebra;
pub mod census;
pub mod cli;
pub mod check;
pub mod comb;
pub mod correspondence;
pub mod error;
pub mod navigation;
pub mod pmap;
pub mod quiver;
pub mod system;

pub use error::{Error, Result};
pub use quiver::{Arrow, BoundQuiver, Path, Vertex};
pub use system::DefiningSystem;
