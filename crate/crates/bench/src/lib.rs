//! Shared inputs for the benchmarks.

use std::path::PathBuf;

/// Path of a shipped example.
pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}
