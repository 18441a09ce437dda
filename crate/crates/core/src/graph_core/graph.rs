use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use crate::error::{input, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub name: String,
    pub i: String,
    pub t: String,
}

/// A finite directed multigraph. Vertices and edges keep declaration order.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    edge_names: Vec<String>,
    initial: Vec<usize>,
    terminal: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edge_names == other.edge_names
            && self.initial == other.initial
            && self.terminal == other.terminal
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds from index data; names must be unique within their kind.
    pub fn from_parts(vertices: Vec<String>, edges: Vec<(String, usize, usize)>) -> Result<Self> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (k, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), k).is_some() {
                return input(format!("duplicate vertex {v:?}"));
            }
        }
        let n = vertices.len();
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut edge_names = Vec::with_capacity(edges.len());
        let mut initial = Vec::with_capacity(edges.len());
        let mut terminal = Vec::with_capacity(edges.len());
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (k, (name, i, t)) in edges.into_iter().enumerate() {
            if i >= n || t >= n {
                return input(format!("edge {name:?} references a missing vertex"));
            }
            if edge_index.insert(name.clone(), k).is_some() {
                return input(format!("duplicate edge {name:?}"));
            }
            out_edges[i].push(k);
            in_edges[t].push(k);
            edge_names.push(name);
            initial.push(i);
            terminal.push(t);
        }
        Ok(Graph { vertices, edge_names, initial, terminal, out_edges, in_edges, vertex_index, edge_index })
    }

    /// Builds from named endpoints.
    pub fn new(vertices: Vec<String>, edges: Vec<EdgeSpec>) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
        let mut parts = Vec::with_capacity(edges.len());
        for e in &edges {
            let Some(&i) = index.get(e.i.as_str()) else {
                return input(format!("edge {:?}: unknown initial vertex {:?}", e.name, e.i));
            };
            let Some(&t) = index.get(e.t.as_str()) else {
                return input(format!("edge {:?}: unknown terminal vertex {:?}", e.name, e.t));
            };
            parts.push((e.name.clone(), i, t));
        }
        Self::from_parts(vertices, parts)
    }

    /// Convenience constructor for tests and examples: `(name, i, t)` by vertex name.
    pub fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        Self::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(n, i, t)| EdgeSpec { name: n.to_string(), i: i.to_string(), t: t.to_string() })
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), Vec::new()).expect("empty graph is valid")
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn i(&self, e: usize) -> usize {
        self.initial[e]
    }

    pub fn t(&self, e: usize) -> usize {
        self.terminal[e]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn find_vertex(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn find_edge(&self, name: &str) -> Option<usize> {
        self.edge_index.get(name).copied()
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        (0..self.n_edges())
            .map(|e| EdgeSpec {
                name: self.edge_names[e].clone(),
                i: self.vertices[self.initial[e]].clone(),
                t: self.vertices[self.terminal[e]].clone(),
            })
            .collect()
    }

    /// Entry (w, v) counts the edges from v to w.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.n_vertices();
        let mut a = IntMatrix::zeros(n, n);
        let one = BigInt::from(1);
        for e in 0..self.n_edges() {
            a.add_to(self.terminal[e], self.initial[e], &one);
        }
        a
    }

    /// Same vertices and edges with every edge reversed.
    pub fn reversed(&self) -> Graph {
        let edges = (0..self.n_edges())
            .map(|e| (self.edge_names[e].clone(), self.terminal[e], self.initial[e]))
            .collect();
        Graph::from_parts(self.vertices.clone(), edges).expect("reversal preserves validity")
    }

    /// Induced subgraph on the kept vertices and edges (order preserved).
    pub fn restrict(&self, keep_vertex: &[bool], keep_edge: &[bool]) -> Graph {
        let mut new_index = vec![usize::MAX; self.n_vertices()];
        let mut vertices = Vec::new();
        for v in 0..self.n_vertices() {
            if keep_vertex[v] {
                new_index[v] = vertices.len();
                vertices.push(self.vertices[v].clone());
            }
        }
        let edges = (0..self.n_edges())
            .filter(|&e| keep_edge[e] && keep_vertex[self.initial[e]] && keep_vertex[self.terminal[e]])
            .map(|e| (self.edge_names[e].clone(), new_index[self.initial[e]], new_index[self.terminal[e]]))
            .collect();
        Graph::from_parts(vertices, edges).expect("restriction preserves validity")
    }

    /// Vertex and edge masks of the essential part.
    pub fn essential_masks(&self) -> (Vec<bool>, Vec<bool>) {
        let n = self.n_vertices();
        let mut alive_v = vec![true; n];
        let mut alive_e = vec![true; self.n_edges()];
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_edges[v].len()).collect();
        let mut outdeg: Vec<usize> = (0..n).map(|v| self.out_edges[v].len()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0 || outdeg[v] == 0).collect();
        while let Some(v) = stack.pop() {
            if !alive_v[v] {
                continue;
            }
            alive_v[v] = false;
            for &e in &self.out_edges[v] {
                if alive_e[e] {
                    alive_e[e] = false;
                    let w = self.terminal[e];
                    indeg[w] -= 1;
                    if indeg[w] == 0 && alive_v[w] {
                        stack.push(w);
                    }
                }
            }
            for &e in &self.in_edges[v] {
                if alive_e[e] {
                    alive_e[e] = false;
                    let u = self.initial[e];
                    outdeg[u] -= 1;
                    if outdeg[u] == 0 && alive_v[u] {
                        stack.push(u);
                    }
                }
            }
        }
        (alive_v, alive_e)
    }

    pub fn is_essential(&self) -> bool {
        (0..self.n_vertices()).all(|v| !self.in_edges[v].is_empty() && !self.out_edges[v].is_empty())
    }

    /// All edge paths of the given length (in lexicographic order of edge indices).
    /// Length 0 is not representable as an edge word and yields nothing.
    pub fn paths(&self, len: usize) -> Vec<Vec<usize>> {
        if len == 0 {
            return Vec::new();
        }
        let mut out: Vec<Vec<usize>> = (0..self.n_edges()).map(|e| vec![e]).collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for p in &out {
                let last = *p.last().expect("nonempty path");
                for &f in &self.out_edges[self.terminal[last]] {
                    let mut q = p.clone();
                    q.push(f);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    pub fn is_path(&self, word: &[usize]) -> bool {
        word.iter().all(|&e| e < self.n_edges()) && word.windows(2).all(|w| self.terminal[w[0]] == self.initial[w[1]])
    }

    pub fn is_cycle(&self, word: &[usize]) -> bool {
        !word.is_empty() && self.is_path(word) && self.terminal[*word.last().unwrap()] == self.initial[word[0]]
    }
}

/// The maximal subgraph where every vertex has an incoming and an outgoing edge.
pub fn trim_essential(g: &Graph) -> Graph {
    let (v, e) = g.essential_masks();
    if v.iter().all(|&x| x) && e.iter().all(|&x| x) {
        return g.clone();
    }
    g.restrict(&v, &e)
}
