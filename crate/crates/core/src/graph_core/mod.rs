//! Directed multigraphs, homomorphisms, higher block presentations and exact integer matrices.

pub mod blocks;
pub mod graph;
pub mod hom;
pub mod matrix;
pub mod snf;

pub use blocks::{higher_block, join_edge_names, scc_analysis, scc_ids, unique_names, BlockEnd, HigherBlock, PathKey, SccReport};
pub use graph::{trim_essential, EdgeSpec, Graph};
pub use hom::GraphHom;
pub use matrix::{bigint_to_json, json_to_bigint, IntMatrix};
pub use snf::{coordinates_in_basis, smith_normal_form, Snf};
