//! The two-vertex example graph G, the 2-shift H and the 2-to-1 map between them.

use crate::graph_core::Graph;
use crate::sft::{BlockCode, Sft};

pub fn graph_h() -> Graph {
    Graph::build(&["v"], &[("a", "v", "v"), ("b", "v", "v")]).expect("valid graph")
}

pub fn graph_g() -> Graph {
    Graph::build(
        &["v1", "v2"],
        &[("a1", "v1", "v1"), ("a2", "v2", "v2"), ("b1", "v1", "v2"), ("b2", "v2", "v1")],
    )
    .expect("valid graph")
}

pub fn sigma_h() -> Sft {
    Sft::new("H", &graph_h())
}

pub fn sigma_g() -> Sft {
    Sft::new("G", &graph_g())
}

/// `v1, v2 ↦ v`, `a1, a2 ↦ a`, `b1, b2 ↦ b`.
pub fn pi() -> BlockCode {
    BlockCode::from_fn(&sigma_g(), &sigma_h(), 1, 0, |p| Ok(p[0] / 2)).expect("valid code")
}
