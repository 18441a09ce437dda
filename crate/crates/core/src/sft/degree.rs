use std::collections::VecDeque;

use super::code::BlockCode;
use super::pairs::{is_s_bijective, is_surjective, is_u_bijective};
use super::point::periodic_points;
use crate::error::{Error, Result};
use crate::graph_core::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibreSize {
    Finite(usize),
    Infinite,
}

/// Number of source points over the periodic point `cycle^∞` (with `cycle[0]` at index 0).
pub fn fibre_count(c: &BlockCode, cycle: &[usize]) -> FibreSize {
    let ob = c.one_block();
    let bg = &ob.block.graph;
    let n = cycle.len();
    let nv = bg.n_vertices();
    let id = |q: usize, j: usize| q * n + j;
    let mut edges = Vec::new();
    for e in 0..bg.n_edges() {
        for (j, &f) in cycle.iter().enumerate() {
            if ob.edge_map[e] == f {
                edges.push((format!("{e}:{j}"), id(bg.i(e), j), id(bg.t(e), (j + 1) % n)));
            }
        }
    }
    let names = (0..nv * n).map(|k| k.to_string()).collect();
    let phased = Graph::from_parts(names, edges).expect("phase graph is well formed");
    let (keep_v, keep_e) = phased.essential_masks();
    let trimmed = phased.restrict(&keep_v, &keep_e);
    if (0..trimmed.n_vertices()).any(|v| trimmed.out_edges(v).len() > 1) {
        return FibreSize::Infinite;
    }
    let phase0 = (0..nv).filter(|&q| keep_v[id(q, 0)]).count();
    FibreSize::Finite(phase0)
}

/// A shortest cycle through each vertex, deduplicated by orbit, shortest first.
pub fn short_cycles(g: &Graph) -> Vec<Vec<usize>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n_vertices() {
        let Some(cyc) = shortest_cycle_through(g, v) else { continue };
        if !found.iter().any(|c| same_orbit(c, &cyc)) {
            found.push(cyc);
        }
    }
    found.sort_by_key(|c| c.len());
    found
}

fn shortest_cycle_through(g: &Graph, v: usize) -> Option<Vec<usize>> {
    let mut pred: Vec<Option<usize>> = vec![None; g.n_vertices()];
    let mut queue = VecDeque::new();
    for &e in g.out_edges(v) {
        if g.t(e) == v {
            return Some(vec![e]);
        }
        if pred[g.t(e)].is_none() {
            pred[g.t(e)] = Some(e);
            queue.push_back(g.t(e));
        }
    }
    while let Some(u) = queue.pop_front() {
        for &e in g.out_edges(u) {
            let w = g.t(e);
            if w == v {
                let mut path = vec![e];
                let mut cur = u;
                while cur != v {
                    let pe = pred[cur].expect("bfs predecessor");
                    path.push(pe);
                    cur = g.i(pe);
                }
                path.reverse();
                return Some(path);
            }
            if pred[w].is_none() && w != v {
                pred[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    None
}

fn same_orbit(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|r| (0..a.len()).all(|k| a[(k + r) % a.len()] == b[k]))
}

/// Fibre sizes over up to two distinct periodic orbits of the target.
pub fn sampled_fibres(c: &BlockCode) -> Vec<(Vec<usize>, FibreSize)> {
    let cycles = short_cycles(c.target().graph());
    cycles.into_iter().take(2).map(|cyc| {
        let k = fibre_count(c, &cyc);
        (cyc, k)
    }).collect()
}

/// Constant fibre cardinality of a factor map that is both s- and u-bijective between irreducible shifts.
pub fn degree(c: &BlockCode) -> Result<usize> {
    if !c.source().is_irreducible() {
        return Err(Error::Hypothesis(format!("source {} is not irreducible", c.source().name())));
    }
    if !c.target().is_irreducible() {
        return Err(Error::Hypothesis(format!("target {} is not irreducible", c.target().name())));
    }
    if !is_surjective(c) {
        return Err(Error::Hypothesis("map is not onto".into()));
    }
    if !is_s_bijective(c)? {
        return Err(Error::Hypothesis("map is not s-bijective".into()));
    }
    if !is_u_bijective(c)? {
        return Err(Error::Hypothesis("map is not u-bijective".into()));
    }
    constant_fibre_size(c)
}

/// Fibre size over two sampled orbits, without checking hypotheses.
pub fn constant_fibre_size(c: &BlockCode) -> Result<usize> {
    let samples = sampled_fibres(c);
    let mut value = None;
    for (_, k) in &samples {
        match (k, value) {
            (FibreSize::Infinite, _) => return Err(Error::Hypothesis("not constant-to-one: infinite fibre".into())),
            (FibreSize::Finite(k), None) => value = Some(*k),
            (FibreSize::Finite(k), Some(v)) if *k != v => {
                return Err(Error::Hypothesis(format!("not constant-to-one: fibres of size {v} and {k}")))
            }
            _ => {}
        }
    }
    value.ok_or_else(|| Error::Hypothesis("target has no periodic orbit".into()))
}

/// A periodic target point with exactly one preimage, searched up to `period_cap`.
pub fn singleton_fibre(c: &BlockCode, period_cap: usize) -> Option<Vec<usize>> {
    (1..=period_cap).find_map(|n| {
        periodic_points(c.target(), n)
            .into_iter()
            .map(|p| p.right_cycle)
            .find(|cyc| fibre_count(c, cyc) == FibreSize::Finite(1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&fixtures::pi()).unwrap(), 2);
        assert_eq!(degree(&BlockCode::identity(&fixtures::sigma_h())).unwrap(), 1);
        assert_eq!(degree(&BlockCode::shift_power(&fixtures::sigma_g(), 3)).unwrap(), 1);
    }

    #[test]
    fn singleton_search() {
        assert!(singleton_fibre(&fixtures::pi(), 6).is_none());
        assert!(singleton_fibre(&BlockCode::identity(&fixtures::sigma_g()), 6).is_some());
    }

    #[test]
    fn cycles_are_distinct_orbits() {
        let g = fixtures::sigma_g();
        let cycles = short_cycles(g.graph());
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.len() == 1));
    }
}
