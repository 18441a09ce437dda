use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::code::BlockCode;
use crate::error::{Error, Result};
use crate::graph_core::Graph;

/// Pairs of source points with equal image, as a graph over the 1-block form:
/// vertices are pairs of higher-block vertices, edges pairs of edges with equal image.
#[derive(Clone, Debug)]
pub struct PairGraph {
    pub graph: Graph,
    pub vertex_pairs: Vec<(usize, usize)>,
    pub edge_pairs: Vec<(usize, usize)>,
    pub diagonal: Vec<bool>,
}

impl PairGraph {
    pub fn build(c: &BlockCode) -> PairGraph {
        let ob = c.one_block();
        let bg = &ob.block.graph;
        let mut by_image: HashMap<usize, Vec<usize>> = HashMap::new();
        for e in 0..bg.n_edges() {
            by_image.entry(ob.edge_map[e]).or_default().push(e);
        }
        let mut vertex_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut vertex_pairs = Vec::new();
        let mut raw_edges = Vec::new();
        let mut edge_pairs = Vec::new();
        let mut images: Vec<usize> = by_image.keys().copied().collect();
        images.sort_unstable();
        for img in images {
            let group = &by_image[&img];
            for &e in group {
                for &f in group {
                    let mut vid = |p: (usize, usize)| {
                        *vertex_ids.entry(p).or_insert_with(|| {
                            vertex_pairs.push(p);
                            vertex_pairs.len() - 1
                        })
                    };
                    let from = vid((bg.i(e), bg.i(f)));
                    let to = vid((bg.t(e), bg.t(f)));
                    raw_edges.push((format!("e{}", raw_edges.len()), from, to));
                    edge_pairs.push((e, f));
                }
            }
        }
        let names = (0..vertex_pairs.len()).map(|k| format!("p{k}")).collect();
        let full = Graph::from_parts(names, raw_edges).expect("pair graph is well formed");
        let (keep_v, keep_e) = full.essential_masks();
        let graph = full.restrict(&keep_v, &keep_e);
        let vertex_pairs = vertex_pairs.into_iter().zip(&keep_v).filter(|(_, &k)| k).map(|(p, _)| p).collect();
        let edge_pairs: Vec<(usize, usize)> =
            edge_pairs.into_iter().zip(&keep_e).filter(|(_, &k)| k).map(|(p, _)| p).collect();
        let diagonal = edge_pairs.iter().map(|&(e, f)| e == f).collect();
        PairGraph { graph, vertex_pairs, edge_pairs, diagonal }
    }

    fn reach_from(&self, starts: impl IntoIterator<Item = usize>, forward: bool) -> Vec<bool> {
        let g = &self.graph;
        let mut seen = vec![false; g.n_vertices()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let next: Vec<usize> = if forward {
                g.out_edges(v).iter().map(|&e| g.t(e)).collect()
            } else {
                g.in_edges(v).iter().map(|&e| g.i(e)).collect()
            };
            for w in next {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    fn diagonal_vertices(&self) -> Vec<usize> {
        (0..self.vertex_pairs.len()).filter(|&v| self.vertex_pairs[v].0 == self.vertex_pairs[v].1).collect()
    }

    pub fn has_off_diagonal_edge(&self) -> bool {
        self.diagonal.iter().any(|&d| !d)
    }

    /// An off-diagonal edge that leads into the diagonal: two distinct points with a common future.
    pub fn stable_witness(&self) -> Option<usize> {
        let reaches_diag = self.reach_from(self.diagonal_vertices(), false);
        (0..self.edge_pairs.len()).find(|&k| !self.diagonal[k] && reaches_diag[self.graph.t(k)])
    }

    /// An off-diagonal edge reached from the diagonal: two distinct points with a common past.
    pub fn unstable_witness(&self) -> Option<usize> {
        let from_diag = self.reach_from(self.diagonal_vertices(), true);
        (0..self.edge_pairs.len()).find(|&k| !self.diagonal[k] && from_diag[self.graph.i(k)])
    }
}

pub fn is_injective(c: &BlockCode) -> bool {
    !c.pair_graph().has_off_diagonal_edge()
}

pub fn is_s_resolving(c: &BlockCode) -> bool {
    c.pair_graph().stable_witness().is_none()
}

pub fn is_u_resolving(c: &BlockCode) -> bool {
    c.pair_graph().unstable_witness().is_none()
}

/// Every target word is the image of a source word, decided by subset construction
/// over the 1-block form. Returns a target word with no preimage when surjectivity fails.
pub fn surjectivity_witness(c: &BlockCode) -> Option<Vec<usize>> {
    let ob = c.one_block();
    let bg = &ob.block.graph;
    let tg = c.target().graph();
    // Fibres over target vertices.
    let mut start_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); tg.n_vertices()];
    for q in 0..bg.n_vertices() {
        start_sets[ob.vertex_map[q]].insert(q);
    }
    let mut seen: HashSet<(usize, BTreeSet<usize>)> = HashSet::new();
    let mut queue: VecDeque<(usize, BTreeSet<usize>, Vec<usize>)> = VecDeque::new();
    for h in 0..tg.n_vertices() {
        let s = start_sets[h].clone();
        if s.is_empty() {
            let word = tg.out_edges(h).first().map(|&f| vec![f]).unwrap_or_default();
            return Some(word);
        }
        if seen.insert((h, s.clone())) {
            queue.push_back((h, s, Vec::new()));
        }
    }
    while let Some((h, set, word)) = queue.pop_front() {
        for &f in tg.out_edges(h) {
            let next: BTreeSet<usize> = set
                .iter()
                .flat_map(|&q| bg.out_edges(q).iter().copied())
                .filter(|&e| ob.edge_map[e] == f)
                .map(|e| bg.t(e))
                .collect();
            let mut w = word.clone();
            w.push(f);
            if next.is_empty() {
                return Some(w);
            }
            let h2 = tg.t(f);
            if seen.insert((h2, next.clone())) {
                queue.push_back((h2, next, w));
            }
        }
    }
    None
}

pub fn is_surjective(c: &BlockCode) -> bool {
    surjectivity_witness(c).is_none()
}

pub fn is_conjugacy(c: &BlockCode) -> bool {
    is_injective(c) && is_surjective(c)
}

fn require_nonwandering(c: &BlockCode) -> Result<()> {
    if !c.source().is_nonwandering() {
        return Err(Error::CriterionInapplicable(format!(
            "source {} is wandering; the resolving criterion needs a non-wandering source",
            c.source().name()
        )));
    }
    Ok(())
}

/// s-resolving and onto, for a non-wandering source. Vacuously true on the empty shift.
pub fn is_s_bijective(c: &BlockCode) -> Result<bool> {
    require_nonwandering(c)?;
    Ok(is_s_resolving(c) && is_surjective(c))
}

pub fn is_u_bijective(c: &BlockCode) -> Result<bool> {
    require_nonwandering(c)?;
    Ok(is_u_resolving(c) && is_surjective(c))
}

/// Left covering of the 1-block form.
pub fn is_left_covering(c: &BlockCode) -> bool {
    c.one_block().hom(c.target()).is_left_covering()
}

pub fn is_right_covering(c: &BlockCode) -> bool {
    c.one_block().hom(c.target()).is_right_covering()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph_core::Graph;
    use crate::sft::Sft;

    #[test]
    fn pi_verdicts() {
        let pi = fixtures::pi();
        assert!(is_surjective(&pi));
        assert!(!is_injective(&pi));
        assert!(!is_conjugacy(&pi));
        assert!(is_s_resolving(&pi) && is_u_resolving(&pi));
        assert!(is_s_bijective(&pi).unwrap() && is_u_bijective(&pi).unwrap());
        assert!(is_left_covering(&pi) && is_right_covering(&pi));
    }

    #[test]
    fn identity_is_conjugacy() {
        let id = BlockCode::identity(&fixtures::sigma_g());
        assert!(is_conjugacy(&id));
        assert!(is_s_bijective(&id).unwrap() && is_u_bijective(&id).unwrap());
    }

    #[test]
    fn one_loop_inclusion() {
        let h = fixtures::sigma_h();
        let a = Sft::new("A", &Graph::build(&["v"], &[("a", "v", "v")]).unwrap());
        let inc = BlockCode::from_fn(&a, &h, 1, 0, |_| Ok(0)).unwrap();
        assert!(is_injective(&inc));
        assert!(!is_surjective(&inc));
        let w = surjectivity_witness(&inc).unwrap();
        assert_eq!(h.graph().edge_name(*w.last().unwrap()), "b");
    }

    #[test]
    fn disjoint_copies_collapse() {
        let two = Sft::new(
            "HH",
            &Graph::build(&["v", "w"], &[("a", "v", "v"), ("b", "v", "v"), ("c", "w", "w"), ("d", "w", "w")]).unwrap(),
        );
        let h = fixtures::sigma_h();
        let c = BlockCode::from_fn(&two, &h, 1, 0, |p| Ok(p[0] % 2)).unwrap();
        assert!(is_s_resolving(&c) && is_u_resolving(&c));
        assert!(!is_injective(&c));
    }

    #[test]
    fn merging_edges_are_not_s_resolving() {
        // x and y share a terminal vertex and continue identically: a common future.
        let src = Sft::new(
            "W",
            &Graph::build(&["p", "q", "r"], &[("x", "p", "r"), ("y", "q", "r"), ("z", "r", "r"), ("u", "r", "p"), ("s", "r", "q")]).unwrap(),
        );
        let tgt = Sft::new("T", &Graph::build(&["v", "w"], &[("m", "v", "w"), ("z", "w", "w"), ("n", "w", "v")]).unwrap());
        let c = BlockCode::from_fn(&src, &tgt, 1, 0, |p| {
            Ok(match src.graph().edge_name(p[0]) {
                "x" | "y" => 0,
                "z" => 1,
                _ => 2,
            })
        })
        .unwrap();
        assert!(!is_s_resolving(&c));
    }

    #[test]
    fn covering_calibration_one_sided() {
        // In-bijective lift of the 2-shift: left covering, s-bijective, neither on the right.
        let h = fixtures::sigma_h();
        let g = Sft::new(
            "L",
            &Graph::build(&["v1", "v2"], &[("a1", "v1", "v1"), ("a2", "v1", "v2"), ("b1", "v2", "v1"), ("b2", "v1", "v2")])
                .unwrap(),
        );
        let c = BlockCode::from_fn(&g, &h, 1, 0, |p| Ok(usize::from(p[0] >= 2))).unwrap();
        assert!(is_left_covering(&c));
        assert!(!is_right_covering(&c));
        assert!(is_s_bijective(&c).unwrap());
        assert!(!is_u_bijective(&c).unwrap());
        let r = c.reversed();
        assert!(is_right_covering(&r) && !is_left_covering(&r));
        assert!(is_u_bijective(&r).unwrap() && !is_s_bijective(&r).unwrap());
    }

    #[test]
    fn wandering_source_is_inapplicable() {
        let src = Sft::new("Wd", &Graph::build(&["a", "b"], &[("x", "a", "a"), ("y", "a", "b"), ("z", "b", "b")]).unwrap());
        let tgt = Sft::new("One", &Graph::build(&["v"], &[("l", "v", "v")]).unwrap());
        let c = BlockCode::from_fn(&src, &tgt, 1, 0, |_| Ok(0)).unwrap();
        assert!(matches!(is_s_bijective(&c), Err(Error::CriterionInapplicable(_))));
    }
}
