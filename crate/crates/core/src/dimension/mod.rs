//! Dimension groups as direct limits of integer lattices, and induced maps of block codes.

pub mod group;
pub mod induced;
pub mod rational;

pub use group::{dimension_group, hom_compose, hom_equal, LimitElement, LimitGroup, LimitHom, RationalizedHom, Side};
pub use induced::{bijective_form, induced_map, induced_map_unchecked, is_in_bijective, is_out_bijective, Kind};
pub use rational::{rational_matrix, rational_to_string, QMatrix};
