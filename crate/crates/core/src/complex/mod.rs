//! Bijective pairs, the grid of fibred shifts over them, the reduced double complex and its homology.

pub mod chain;
pub mod double;
pub mod homology;
pub mod pair;
pub mod reduce;
pub mod sigma;

pub use pair::{NormalPair, PresentationGrid, PresentedCell, SUPair, SftPair};
pub use reduce::{reduce_map, Reduction};
pub use sigma::{build_sigma, sigma_cell, sigma_space, Caps, SigmaCell, SigmaComplex};
pub use double::{boundary, double_complex, DoubleComplex, ReducedCell};
pub use homology::{homology, homology_over, map_on_homology, pair_homology, HomologyDegree, HomologyResult};
pub use chain::{cell_maps, compose_maps, induced_on_homology, maps_equal, product_verdict, Bijectivity, ChainMap, HomologyMap, ProductVerdict, TripleData};
