//! Exact computations for shifts of finite type: dimension groups, s/u-bijective pairs,
//! the homology of their double complexes, and instance checks of the functoriality results.

pub mod error;
pub mod fixtures;
pub mod graph_core;
pub mod io;
pub mod complex;
pub mod dimension;
pub mod sft;
pub mod verify;

pub use error::{Error, Result};
pub use graph_core::{Graph, GraphHom, IntMatrix};
pub use sft::{BlockCode, Point, Sft};
