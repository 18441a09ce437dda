//! Edge shifts, sliding block codes and the decision procedures on them.

pub mod code;
pub mod degree;
pub mod fibre;
pub mod pairs;
pub mod point;
pub mod shift;

pub use code::{code_equal, compose, BlockCode, OneBlock, Recoding};
pub use degree::{constant_fibre_size, degree, fibre_count, sampled_fibres, short_cycles, singleton_fibre, FibreSize};
pub use fibre::{fibre_product, n_fold_fibre, Component, Constraint, TupleSpace};
pub use pairs::{
    is_conjugacy, is_injective, is_left_covering, is_right_covering, is_s_bijective, is_s_resolving, is_surjective,
    is_u_bijective, is_u_resolving, surjectivity_witness, PairGraph,
};
pub use point::{apply_code, bracket, eventually_periodic_points, periodic_points, Point};
pub use shift::Sft;
