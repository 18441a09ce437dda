use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_integer::Integer;

use super::graph::Graph;
use super::hom::GraphHom;
use crate::error::{input, Result};

/// A path of `edges` starting at `start`; with no edges it denotes the vertex itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathKey {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl PathKey {
    pub fn vertex(v: usize) -> Self {
        PathKey { start: v, edges: Vec::new() }
    }

    pub fn end(&self, g: &Graph) -> usize {
        self.edges.last().map_or(self.start, |&e| g.t(e))
    }

    pub fn name(&self, g: &Graph) -> String {
        if self.edges.is_empty() {
            g.vertex_name(self.start).to_string()
        } else {
            join_edge_names(g, &self.edges)
        }
    }
}

pub fn join_edge_names(g: &Graph, word: &[usize]) -> String {
    word.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join(".")
}

/// Makes a list of generated names unique by suffixing repeats.
pub fn unique_names(names: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    names
        .into_iter()
        .map(|n| {
            if seen.insert(n.clone()) {
                return n;
            }
            let mut k = 2;
            loop {
                let cand = format!("{n}#{k}");
                if seen.insert(cand.clone()) {
                    return cand;
                }
                k += 1;
            }
        })
        .collect()
}

/// The higher block presentation G(K): vertices are paths of length K−1,
/// edges are paths of length K.
#[derive(Clone, Debug)]
pub struct HigherBlock {
    pub graph: Arc<Graph>,
    pub block_len: usize,
    pub vertex_paths: Vec<PathKey>,
    pub edge_paths: Vec<Vec<usize>>,
    vertex_lookup: HashMap<PathKey, usize>,
    edge_lookup: HashMap<Vec<usize>, usize>,
}

impl HigherBlock {
    pub fn new(g: &Graph, k: usize) -> Result<Self> {
        if k == 0 {
            return input("higher block length must be positive");
        }
        let vertex_paths: Vec<PathKey> = if k == 1 {
            (0..g.n_vertices()).map(PathKey::vertex).collect()
        } else {
            g.paths(k - 1).into_iter().map(|p| PathKey { start: g.i(p[0]), edges: p }).collect()
        };
        let edge_paths = g.paths(k);
        let vertex_lookup: HashMap<PathKey, usize> =
            vertex_paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let edge_lookup: HashMap<Vec<usize>, usize> =
            edge_paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let graph = if k == 1 {
            g.clone()
        } else {
            let vnames = unique_names(vertex_paths.iter().map(|p| p.name(g)).collect());
            let enames = unique_names(edge_paths.iter().map(|p| join_edge_names(g, p)).collect());
            let edges = edge_paths
                .iter()
                .zip(enames)
                .map(|(p, name)| {
                    let from = PathKey { start: g.i(p[0]), edges: p[..k - 1].to_vec() };
                    let to = PathKey { start: g.i(p[1]), edges: p[1..].to_vec() };
                    (name, vertex_lookup[&from], vertex_lookup[&to])
                })
                .collect();
            Graph::from_parts(vnames, edges)?
        };
        Ok(HigherBlock { graph: Arc::new(graph), block_len: k, vertex_paths, edge_paths, vertex_lookup, edge_lookup })
    }

    pub fn vertex_of(&self, key: &PathKey) -> Option<usize> {
        self.vertex_lookup.get(key).copied()
    }

    pub fn edge_of(&self, path: &[usize]) -> Option<usize> {
        self.edge_lookup.get(path).copied()
    }
}

/// Which end of a block the canonical map to G(K−1) keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockEnd {
    Initial,
    Terminal,
}

/// G(K) together with the canonical map onto G(K−1). For K = 1 the map is the identity of G.
pub fn higher_block(g: &Graph, k: usize, end: BlockEnd) -> Result<(HigherBlock, GraphHom)> {
    let hb = HigherBlock::new(g, k)?;
    if k == 1 {
        let arc = hb.graph.clone();
        return Ok((hb, GraphHom::identity(arc)));
    }
    let lower = HigherBlock::new(g, k - 1)?;
    let cut = |p: &[usize]| -> Vec<usize> {
        match end {
            BlockEnd::Initial => p[..p.len() - 1].to_vec(),
            BlockEnd::Terminal => p[1..].to_vec(),
        }
    };
    let edge_map = hb.edge_paths.iter().map(|p| lower.edge_of(&cut(p)).expect("subpath exists")).collect();
    let vertex_map = hb
        .vertex_paths
        .iter()
        .map(|q| {
            let key = if k == 2 {
                let e = q.edges[0];
                PathKey::vertex(match end {
                    BlockEnd::Initial => g.i(e),
                    BlockEnd::Terminal => g.t(e),
                })
            } else {
                let sub = cut(&q.edges);
                PathKey { start: g.i(sub[0]), edges: sub }
            };
            lower.vertex_of(&key).expect("subpath exists")
        })
        .collect();
    let hom = GraphHom::new(hb.graph.clone(), lower.graph.clone(), vertex_map, edge_map)?;
    Ok((hb, hom))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccReport {
    pub components: Vec<Vec<usize>>,
    pub is_strongly_connected: bool,
    pub is_nonwandering: bool,
    pub is_mixing: bool,
    pub period: Option<u64>,
}

/// Component index per vertex (Tarjan, iterative).
pub fn scc_ids(g: &Graph) -> Vec<usize> {
    let n = g.n_vertices();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            let outs = g.out_edges(v);
            if top.1 < outs.len() {
                let w = g.t(outs[top.1]);
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

pub fn scc_analysis(g: &Graph) -> SccReport {
    let ids = scc_ids(g);
    let count = ids.iter().copied().max().map_or(0, |m| m + 1);
    let mut components = vec![Vec::new(); count];
    for (v, &c) in ids.iter().enumerate() {
        components[c].push(v);
    }
    components.sort();
    let is_nonwandering = (0..g.n_edges()).all(|e| ids[g.i(e)] == ids[g.t(e)]);
    let is_strongly_connected = count == 1 && g.n_edges() > 0;
    let period = if is_strongly_connected { Some(period_of(g)) } else { None };
    SccReport {
        components,
        is_strongly_connected,
        is_nonwandering,
        is_mixing: period == Some(1),
        period,
    }
}

/// Period of a strongly connected graph: gcd of all cycle lengths.
fn period_of(g: &Graph) -> u64 {
    let n = g.n_vertices();
    let mut level = vec![i64::MIN; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &e in g.out_edges(v) {
            let w = g.t(e);
            if level[w] == i64::MIN {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut gcd = 0u64;
    for e in 0..g.n_edges() {
        let d = (level[g.i(e)] + 1 - level[g.t(e)]).unsigned_abs();
        gcd = gcd.gcd(&d);
    }
    gcd
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::graph::trim_essential;

    fn h() -> Graph {
        Graph::build(&["v"], &[("a", "v", "v"), ("b", "v", "v")]).unwrap()
    }

    fn g() -> Graph {
        Graph::build(
            &["v1", "v2"],
            &[("a1", "v1", "v1"), ("a2", "v2", "v2"), ("b1", "v1", "v2"), ("b2", "v2", "v1")],
        )
        .unwrap()
    }

    #[test]
    fn higher_block_examples() {
        let (hb, hom) = higher_block(&h(), 2, BlockEnd::Initial).unwrap();
        assert_eq!(hb.graph.n_vertices(), 2);
        assert_eq!(hb.graph.n_edges(), 4);
        assert_eq!(hb.graph.vertex_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(hom.target().n_edges(), 2);
        let (g2, _) = higher_block(&g(), 2, BlockEnd::Terminal).unwrap();
        assert_eq!((g2.graph.n_vertices(), g2.graph.n_edges()), (4, 8));
        let (g1, id) = higher_block(&g(), 1, BlockEnd::Initial).unwrap();
        assert_eq!(*g1.graph, g());
        assert_eq!(id.edge_map(), &[0, 1, 2, 3]);
        assert!(higher_block(&g(), 0, BlockEnd::Initial).is_err());
        let (g3, hom3) = higher_block(&g(), 3, BlockEnd::Terminal).unwrap();
        assert_eq!(g3.graph.n_edges(), 16);
        assert_eq!(hom3.target().n_edges(), 8);
        assert!(trim_essential(&g3.graph) == *g3.graph);
    }

    #[test]
    fn scc_examples() {
        let r = scc_analysis(&h());
        assert!(r.is_strongly_connected && r.is_nonwandering && r.is_mixing);
        let r = scc_analysis(&g());
        assert!(r.is_strongly_connected && r.is_mixing);
        let two_cycles = Graph::build(
            &["a", "b", "c", "d"],
            &[("x", "a", "b"), ("y", "b", "a"), ("z", "c", "d"), ("w", "d", "c")],
        )
        .unwrap();
        let r = scc_analysis(&two_cycles);
        assert!(r.is_nonwandering && !r.is_strongly_connected && !r.is_mixing);
        assert_eq!(r.components.len(), 2);
        let cycle = Graph::build(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]).unwrap();
        let r = scc_analysis(&cycle);
        assert_eq!(r.period, Some(2));
        assert!(!r.is_mixing);
        let wandering = Graph::build(&["a", "b"], &[("x", "a", "a"), ("y", "a", "b"), ("z", "b", "b")]).unwrap();
        assert!(!scc_analysis(&wandering).is_nonwandering);
    }
}
