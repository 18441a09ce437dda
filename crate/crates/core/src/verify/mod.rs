//! Instance checks of the functoriality results on concrete diagrams, and random instance generation.

pub mod cube;
pub mod generate;
pub mod naturality;
pub mod report;
pub mod square;

pub use cube::{build_pullback_cube, build_sigma_cube, cube_homology_identity, cube_report, CubeSeeds, PullbackCube, Verdict};
pub use naturality::{automorphism_suite, construct_compatible_pairs, verify_theta_naturality};
pub use report::{describe_hom, hom_json, Report, Settings};
pub use square::{check_square, dimension_composites, square_report, verify_pullback_identity, verify_pullback_identity_seeded, Composites, Level, SquareCheck, SquareDiagram};
