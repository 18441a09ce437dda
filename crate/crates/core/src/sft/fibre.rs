use std::collections::HashMap;

use super::code::BlockCode;
use super::shift::Sft;
use crate::error::{input, Error, Result};
use crate::graph_core::{join_edge_names, unique_names, Graph, PathKey};

/// One coordinate of a tuple space: at index n it records the base path over `[n+lo, n+hi]`.
#[derive(Clone, Debug)]
pub struct Component {
    pub base: Sft,
    pub lo: i64,
    pub hi: i64,
}

impl Component {
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }
}

/// Requires `left_code(x_left) = right_code(x_right)` on the two coordinates.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub left: usize,
    pub left_code: BlockCode,
    pub right: usize,
    pub right_code: BlockCode,
}

/// Points of a product of shifts cut out by equalities of codes, presented as an edge shift
/// whose edges are tuples of component paths.
#[derive(Clone, Debug)]
pub struct TupleSpace {
    pub sft: Sft,
    pub components: Vec<Component>,
    pub edge_tuples: Vec<Vec<Vec<usize>>>,
    pub vertex_tuples: Vec<Vec<PathKey>>,
    edge_lookup: HashMap<Vec<Vec<usize>>, usize>,
    vertex_lookup: HashMap<Vec<PathKey>, usize>,
}

/// Window of base edges a code reads at output index 0.
fn code_span(c: &BlockCode) -> (i64, i64) {
    (-c.memory(), -c.memory() + c.window() as i64 - 1)
}

impl TupleSpace {
    /// Component windows are the union of `[0,0]` and the spans read by the constraints.
    pub fn build(name: &str, bases: &[Sft], constraints: &[Constraint]) -> Result<TupleSpace> {
        let mut comps: Vec<Component> = bases.iter().map(|b| Component { base: b.clone(), lo: 0, hi: 0 }).collect();
        for c in constraints {
            if c.left >= comps.len() || c.right >= comps.len() || c.left == c.right {
                return input("constraint references a missing or repeated coordinate");
            }
            if *c.left_code.source() != comps[c.left].base || *c.right_code.source() != comps[c.right].base {
                return input("constraint code does not start at its coordinate's shift");
            }
            if c.left_code.target() != c.right_code.target() {
                return input("constraint codes have different targets");
            }
            for (k, code) in [(c.left, &c.left_code), (c.right, &c.right_code)] {
                let (a, b) = code_span(code);
                comps[k].lo = comps[k].lo.min(a);
                comps[k].hi = comps[k].hi.max(b);
            }
        }
        Self::build_with_windows(name, comps, constraints)
    }

    pub fn build_with_windows(name: &str, comps: Vec<Component>, constraints: &[Constraint]) -> Result<TupleSpace> {
        let k = comps.len();
        let candidates: Vec<Vec<Vec<usize>>> = comps.iter().map(|c| c.base.graph().paths(c.len())).collect();
        let value = |comp: usize, code: &BlockCode, path: &[usize]| -> usize {
            let (a, _) = code_span(code);
            let start = (a - comps[comp].lo) as usize;
            code.eval(&path[start..start + code.window()])
        };
        // For each coordinate, constraints that become checkable once it is assigned,
        // oriented so that `right` is that coordinate.
        let mut checks: Vec<Vec<Constraint>> = vec![Vec::new(); k];
        for c in constraints {
            let oriented = if c.left < c.right {
                c.clone()
            } else {
                Constraint { left: c.right, left_code: c.right_code.clone(), right: c.left, right_code: c.left_code.clone() }
            };
            if oriented.right_code.window() as i64 > comps[oriented.right].len() as i64 {
                return input("constraint window exceeds coordinate window");
            }
            checks[oriented.right].push(oriented);
        }
        // Index candidates of each coordinate by the value of its first check.
        let indexed: Vec<Option<HashMap<usize, Vec<usize>>>> = (0..k)
            .map(|j| {
                checks[j].first().map(|c| {
                    let mut m: HashMap<usize, Vec<usize>> = HashMap::new();
                    for (idx, p) in candidates[j].iter().enumerate() {
                        m.entry(value(j, &c.right_code, p)).or_default().push(idx);
                    }
                    m
                })
            })
            .collect();
        let mut tuples: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut current: Vec<usize> = Vec::with_capacity(k);
        fn recurse(
            j: usize,
            k: usize,
            current: &mut Vec<usize>,
            tuples: &mut Vec<Vec<Vec<usize>>>,
            candidates: &[Vec<Vec<usize>>],
            checks: &[Vec<Constraint>],
            indexed: &[Option<HashMap<usize, Vec<usize>>>],
            value: &dyn Fn(usize, &BlockCode, &[usize]) -> usize,
        ) {
            if j == k {
                tuples.push(current.iter().enumerate().map(|(c, &idx)| candidates[c][idx].clone()).collect());
                return;
            }
            let all: Vec<usize>;
            let pool: &[usize] = match (&indexed[j], checks[j].first()) {
                (Some(map), Some(c)) => {
                    let want = value(c.left, &c.left_code, &candidates[c.left][current[c.left]]);
                    match map.get(&want) {
                        Some(v) => v,
                        None => return,
                    }
                }
                _ => {
                    all = (0..candidates[j].len()).collect();
                    &all
                }
            };
            'cand: for &idx in pool {
                for c in checks[j].iter().skip(1) {
                    let want = value(c.left, &c.left_code, &candidates[c.left][current[c.left]]);
                    if value(j, &c.right_code, &candidates[j][idx]) != want {
                        continue 'cand;
                    }
                }
                current.push(idx);
                recurse(j + 1, k, current, tuples, candidates, checks, indexed, value);
                current.pop();
            }
        }
        if k > 0 {
            recurse(0, k, &mut current, &mut tuples, &candidates, &checks, &indexed, &value);
        }
        Self::from_edge_tuples(name, comps, tuples)
    }

    /// Assembles the presentation from candidate edge tuples and trims it.
    pub fn from_edge_tuples(name: &str, comps: Vec<Component>, tuples: Vec<Vec<Vec<usize>>>) -> Result<TupleSpace> {
        let init_key = |t: &Vec<Vec<usize>>| -> Vec<PathKey> {
            t.iter()
                .zip(&comps)
                .map(|(p, c)| PathKey { start: c.base.graph().i(p[0]), edges: p[..p.len() - 1].to_vec() })
                .collect()
        };
        let term_key = |t: &Vec<Vec<usize>>| -> Vec<PathKey> {
            t.iter()
                .zip(&comps)
                .map(|(p, c)| PathKey { start: c.base.graph().t(p[0]), edges: p[1..].to_vec() })
                .collect()
        };
        let mut keys: Vec<Vec<PathKey>> = tuples.iter().flat_map(|t| [init_key(t), term_key(t)]).collect();
        keys.sort();
        keys.dedup();
        let key_index: HashMap<Vec<PathKey>, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let vnames = unique_names(
            keys.iter()
                .map(|key| {
                    let parts: Vec<String> = key.iter().zip(&comps).map(|(pk, c)| pk.name(c.base.graph())).collect();
                    format!("({})", parts.join(","))
                })
                .collect(),
        );
        let enames = unique_names(
            tuples
                .iter()
                .map(|t| {
                    let parts: Vec<String> = t.iter().zip(&comps).map(|(p, c)| join_edge_names(c.base.graph(), p)).collect();
                    format!("({})", parts.join(","))
                })
                .collect(),
        );
        let edges = tuples
            .iter()
            .zip(enames)
            .map(|(t, n)| (n, key_index[&init_key(t)], key_index[&term_key(t)]))
            .collect();
        let full = Graph::from_parts(vnames, edges)?;
        let (keep_v, keep_e) = full.essential_masks();
        let graph = full.restrict(&keep_v, &keep_e);
        let vertex_tuples: Vec<Vec<PathKey>> = keys.into_iter().zip(&keep_v).filter(|(_, &k)| k).map(|(x, _)| x).collect();
        let edge_tuples: Vec<Vec<Vec<usize>>> = tuples.into_iter().zip(&keep_e).filter(|(_, &k)| k).map(|(x, _)| x).collect();
        let edge_lookup = edge_tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let vertex_lookup = vertex_tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let sft = Sft::from_essential(name, std::sync::Arc::new(graph));
        Ok(TupleSpace { sft, components: comps, edge_tuples, vertex_tuples, edge_lookup, vertex_lookup })
    }

    pub fn edge_of(&self, tuple: &[Vec<usize>]) -> Option<usize> {
        self.edge_lookup.get(tuple).copied()
    }

    pub fn vertex_of(&self, tuple: &[PathKey]) -> Option<usize> {
        self.vertex_lookup.get(tuple).copied()
    }

    /// Coordinate projection onto factor `j`, counted from 0.
    pub fn projection(&self, j: usize) -> BlockCode {
        let comp = &self.components[j];
        BlockCode::from_fn(&self.sft, &comp.base, 1, comp.lo, |p| Ok(self.edge_tuples[p[0]][j][0]))
            .expect("projection is a valid code")
    }

    /// 1-block map keeping the listed coordinates (in order) into `target`,
    /// whose coordinates must have the same bases and windows.
    pub fn select(&self, keep: &[usize], target: &TupleSpace) -> Result<BlockCode> {
        if keep.len() != target.components.len() {
            return input("coordinate selection has the wrong length");
        }
        for (&k, tc) in keep.iter().zip(&target.components) {
            let c = &self.components[k];
            if c.base != tc.base || c.lo != tc.lo || c.hi != tc.hi {
                return input("coordinate selection changes a coordinate's shift or window");
            }
        }
        BlockCode::from_fn(&self.sft, &target.sft, 1, 0, |p| {
            let t: Vec<Vec<usize>> = keep.iter().map(|&k| self.edge_tuples[p[0]][k].clone()).collect();
            target
                .edge_of(&t)
                .ok_or_else(|| Error::Invariant("coordinate selection leaves the target tuple space".into()))
        })
    }

    /// Code from `source` into this space whose coordinate `j` is `codes[j]`.
    pub fn product_code(&self, source: &Sft, codes: &[BlockCode]) -> Result<BlockCode> {
        if codes.len() != self.components.len() {
            return input("product code needs one code per coordinate");
        }
        for (c, comp) in codes.iter().zip(&self.components) {
            if c.source() != source || *c.target() != comp.base {
                return input(format!(
                    "product code coordinate {} -> {} does not match {}",
                    c.source().name(),
                    c.target().name(),
                    comp.base.name()
                ));
            }
        }
        // Coordinate j at index 0 needs c_j on [lo_j, hi_j], i.e. source on [lo_j − m_j, hi_j − m_j + w_j − 1].
        let lo = codes.iter().zip(&self.components).map(|(c, k)| k.lo - c.memory()).min().unwrap_or(0);
        let hi = codes
            .iter()
            .zip(&self.components)
            .map(|(c, k)| k.hi - c.memory() + c.window() as i64 - 1)
            .max()
            .unwrap_or(0);
        let (lo, hi) = (lo.min(0), hi.max(0));
        let window = (hi - lo + 1) as usize;
        BlockCode::from_fn(source, &self.sft, window, -lo, |p| {
            let tuple: Vec<Vec<usize>> = codes
                .iter()
                .zip(&self.components)
                .map(|(c, k)| {
                    (k.lo..=k.hi)
                        .map(|idx| {
                            let start = (idx - c.memory() - lo) as usize;
                            c.eval(&p[start..start + c.window()])
                        })
                        .collect()
                })
                .collect();
            self.edge_of(&tuple).ok_or_else(|| {
                Error::Hypothesis(format!("image of {} leaves {}: the coordinate maps do not agree", source.name(), self.sft.name()))
            })
        })
        .map(|c| c.tightened(true))
    }
}

/// `fib(c1, c2) = {(y1, y2) : c1(y1) = c2(y2)}` with both projections.
pub fn fibre_product(c1: &BlockCode, c2: &BlockCode) -> Result<(TupleSpace, BlockCode, BlockCode)> {
    let name = format!("fib({},{})", c1.source().name(), c2.source().name());
    let space = TupleSpace::build(
        &name,
        &[c1.source().clone(), c2.source().clone()],
        &[Constraint { left: 0, left_code: c1.clone(), right: 1, right_code: c2.clone() }],
    )?;
    let p1 = space.projection(0);
    let p2 = space.projection(1);
    Ok((space, p1, p2))
}

/// `Y_N(c)`: (N+1)-tuples with a common image, with the deletion maps `δ_0 … δ_N` into `Y_{N−1}`.
pub fn n_fold_fibre(c: &BlockCode, n: usize) -> Result<(TupleSpace, Vec<BlockCode>)> {
    let build = |k: usize| -> Result<TupleSpace> {
        let bases = vec![c.source().clone(); k + 1];
        let constraints: Vec<Constraint> = (1..=k)
            .map(|j| Constraint { left: 0, left_code: c.clone(), right: j, right_code: c.clone() })
            .collect();
        let span = code_span(c);
        let comps = bases
            .into_iter()
            .map(|b| Component { base: b, lo: span.0.min(0), hi: span.1.max(0) })
            .collect();
        TupleSpace::build_with_windows(&format!("{}_{}", c.source().name(), k), comps, &constraints)
    };
    let top = build(n)?;
    if n == 0 {
        return Ok((top, Vec::new()));
    }
    let below = build(n - 1)?;
    let deltas = (0..=n)
        .map(|del| {
            let keep: Vec<usize> = (0..=n).filter(|&j| j != del).collect();
            top.select(&keep, &below)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((top, deltas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::sft::code::code_equal;
    use crate::sft::pairs::{is_conjugacy, is_s_bijective, is_u_bijective};

    #[test]
    fn self_fibre_of_pi() {
        let pi = fixtures::pi();
        let (space, p1, p2) = fibre_product(&pi, &pi).unwrap();
        assert_eq!(space.sft.graph().n_vertices(), 4);
        assert_eq!(space.sft.graph().n_edges(), 8);
        assert!(is_s_bijective(&p1).unwrap() && is_s_bijective(&p2).unwrap());
        assert!(is_u_bijective(&p2).unwrap());
    }

    #[test]
    fn identity_fibres_are_diagonal() {
        let h = fixtures::sigma_h();
        let id = BlockCode::identity(&h);
        let (space, p1, _) = fibre_product(&id, &id).unwrap();
        assert_eq!(space.sft.graph().n_edges(), 2);
        assert!(is_conjugacy(&p1));
        let pi = fixtures::pi();
        let (space, p1, _) = fibre_product(&pi, &id).unwrap();
        assert_eq!(space.sft.graph().n_edges(), 4);
        assert!(is_conjugacy(&p1));
    }

    #[test]
    fn n_fold_deletions() {
        let pi = fixtures::pi();
        let (y1, deltas) = n_fold_fibre(&pi, 1).unwrap();
        assert_eq!((y1.sft.graph().n_vertices(), y1.sft.graph().n_edges()), (4, 8));
        for d in &deltas {
            assert!(is_s_bijective(d).unwrap() && is_u_bijective(d).unwrap());
        }
        let h = fixtures::sigma_h();
        let id = BlockCode::identity(&h);
        let (y2, deltas) = n_fold_fibre(&id, 2).unwrap();
        assert_eq!(y2.sft.graph().n_edges(), 2);
        assert!(deltas.iter().all(is_conjugacy));
    }

    #[test]
    fn product_code_into_fibre() {
        let pi = fixtures::pi();
        let (space, p1, p2) = fibre_product(&pi, &pi).unwrap();
        let g = pi.source();
        let id = BlockCode::identity(g);
        let diag = space.product_code(g, &[id.clone(), id.clone()]).unwrap();
        assert!(code_equal(&diag.then(&p1).unwrap(), &id));
        assert!(code_equal(&diag.then(&p2).unwrap(), &id));
        let h = fixtures::sigma_h();
        let bad = fibre_product(&BlockCode::identity(&h), &BlockCode::identity(&h)).unwrap().0;
        assert!(bad.product_code(g, &[pi.clone(), BlockCode::from_fn(g, &h, 1, 0, |p| Ok(1 - p[0] / 2)).unwrap()]).is_err());
    }
}
