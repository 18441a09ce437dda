use std::sync::Arc;

use crate::graph_core::{scc_analysis, trim_essential, Graph, SccReport};

/// An edge shift, always held on its essential presentation.
#[derive(Clone, Debug)]
pub struct Sft {
    name: String,
    graph: Arc<Graph>,
}

impl PartialEq for Sft {
    /// Shifts compare by presentation; names are labels only.
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph
    }
}

impl Sft {
    /// Trims the graph to its essential part.
    pub fn new(name: impl Into<String>, graph: &Graph) -> Self {
        Sft { name: name.into(), graph: Arc::new(trim_essential(graph)) }
    }

    /// Wraps a graph already known to be essential.
    pub fn from_essential(name: impl Into<String>, graph: Arc<Graph>) -> Self {
        debug_assert!(graph.is_essential());
        Sft { name: name.into(), graph }
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Sft { name: name.into(), graph: Arc::new(Graph::empty()) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn with_name(&self, name: impl Into<String>) -> Sft {
        Sft { name: name.into(), graph: self.graph.clone() }
    }

    pub fn reversed(&self) -> Sft {
        Sft { name: format!("{}~", self.name), graph: Arc::new(self.graph.reversed()) }
    }

    pub fn scc(&self) -> SccReport {
        scc_analysis(&self.graph)
    }

    pub fn is_nonwandering(&self) -> bool {
        self.scc().is_nonwandering
    }

    pub fn is_irreducible(&self) -> bool {
        self.scc().is_strongly_connected
    }
}
