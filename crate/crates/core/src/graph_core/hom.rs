use std::collections::HashSet;
use std::sync::Arc;

use super::graph::Graph;
use crate::error::{input, Result};

/// A graph homomorphism: vertex and edge maps commuting with i and t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphHom {
    source: Arc<Graph>,
    target: Arc<Graph>,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
}

impl GraphHom {
    pub fn new(source: Arc<Graph>, target: Arc<Graph>, vertex_map: Vec<usize>, edge_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.n_vertices() || edge_map.len() != source.n_edges() {
            return input("homomorphism maps must cover every source vertex and edge");
        }
        if vertex_map.iter().any(|&v| v >= target.n_vertices()) || edge_map.iter().any(|&e| e >= target.n_edges()) {
            return input("homomorphism maps into a missing target vertex or edge");
        }
        for e in 0..source.n_edges() {
            let f = edge_map[e];
            if target.i(f) != vertex_map[source.i(e)] || target.t(f) != vertex_map[source.t(e)] {
                return input(format!(
                    "edge {:?} maps to {:?} but endpoints do not commute",
                    source.edge_name(e),
                    target.edge_name(f)
                ));
            }
        }
        Ok(GraphHom { source, target, vertex_map, edge_map })
    }

    pub fn identity(g: Arc<Graph>) -> Self {
        let vertex_map = (0..g.n_vertices()).collect();
        let edge_map = (0..g.n_edges()).collect();
        GraphHom { source: g.clone(), target: g, vertex_map, edge_map }
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &GraphHom) -> Result<GraphHom> {
        if *self.target != *outer.source {
            return input("composition: target of the inner map differs from source of the outer map");
        }
        Ok(GraphHom {
            source: self.source.clone(),
            target: outer.target.clone(),
            vertex_map: self.vertex_map.iter().map(|&v| outer.vertex_map[v]).collect(),
            edge_map: self.edge_map.iter().map(|&e| outer.edge_map[e]).collect(),
        })
    }

    /// For each source vertex v, every edge into vertex_map(v) is hit by an edge into v.
    pub fn is_left_covering(&self) -> bool {
        self.covers(|g, v| g.in_edges(v))
    }

    /// For each source vertex v, every edge out of vertex_map(v) is hit by an edge out of v.
    pub fn is_right_covering(&self) -> bool {
        self.covers(|g, v| g.out_edges(v))
    }

    fn covers<'a>(&'a self, star: impl Fn(&'a Graph, usize) -> &'a [usize]) -> bool {
        (0..self.source.n_vertices()).all(|v| {
            let hit: HashSet<usize> = star(&self.source, v).iter().map(|&e| self.edge_map[e]).collect();
            star(&self.target, self.vertex_map[v]).iter().all(|f| hit.contains(f))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi() -> GraphHom {
        let g = Graph::build(
            &["v1", "v2"],
            &[("a1", "v1", "v1"), ("a2", "v2", "v2"), ("b1", "v1", "v2"), ("b2", "v2", "v1")],
        )
        .unwrap();
        let h = Graph::build(&["v"], &[("a", "v", "v"), ("b", "v", "v")]).unwrap();
        GraphHom::new(Arc::new(g), Arc::new(h), vec![0, 0], vec![0, 0, 1, 1]).unwrap()
    }

    #[test]
    fn covering_examples() {
        let p = pi();
        assert!(p.is_left_covering() && p.is_right_covering());
        let id = GraphHom::identity(p.source().clone());
        assert!(id.is_left_covering() && id.is_right_covering());
        let two_cycle = Graph::build(&["x", "y"], &[("p", "x", "y"), ("q", "y", "x")]).unwrap();
        let loop1 = Graph::build(&["v"], &[("l", "v", "v")]).unwrap();
        let c = GraphHom::new(Arc::new(two_cycle), Arc::new(loop1), vec![0, 0], vec![0, 0]).unwrap();
        assert!(c.is_left_covering() && c.is_right_covering());
    }

    #[test]
    fn composition_with_identity() {
        let p = pi();
        let left = GraphHom::identity(p.source().clone()).then(&p).unwrap();
        let right = p.then(&GraphHom::identity(p.target().clone())).unwrap();
        assert_eq!(left, p);
        assert_eq!(right, p);
    }

    #[test]
    fn rejects_non_commuting_maps() {
        let g = Graph::build(&["x", "y"], &[("p", "x", "y")]).unwrap();
        let h = Graph::build(&["u", "w"], &[("q", "u", "w")]).unwrap();
        assert!(GraphHom::new(Arc::new(g), Arc::new(h), vec![1, 0], vec![0]).is_err());
    }
}
