use std::collections::BTreeMap;

use super::pair::{NormalPair, PresentationGrid, SUPair};
use super::reduce::Reduction;
use crate::error::{Error, Result};
use crate::graph_core::PathKey;
use crate::sft::{code_equal, is_s_bijective, is_u_bijective, BlockCode, Constraint, Sft, TupleSpace};

/// `Σ_{L,M}` with the vertex permutations realizing adjacent coordinate swaps.
#[derive(Clone, Debug)]
pub struct SigmaCell {
    pub sft: Sft,
    pub y_swaps: Vec<Vec<usize>>,
    pub z_swaps: Vec<Vec<usize>>,
    pub space: Option<TupleSpace>,
}

/// Cells with `L < l_bound` and `M < m_bound`; all others reduce to zero.
#[derive(Clone, Debug)]
pub struct SigmaComplex {
    pub cells: BTreeMap<(usize, usize), SigmaCell>,
    pub delta_l: BTreeMap<(usize, usize, usize), BlockCode>,
    pub delta_m: BTreeMap<(usize, usize, usize), BlockCode>,
    pub l_bound: usize,
    pub m_bound: usize,
    pub normal: Option<NormalPair>,
}

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub recoding: usize,
    pub l: usize,
    pub m: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { recoding: 8, l: 4, m: 4 }
    }
}

/// Tuples `(y_0 … y_L, z_0 … z_M)` with a common image in X, on the normalized presentations.
pub fn sigma_space(np: &NormalPair, l: usize, m: usize) -> Result<TupleSpace> {
    let mut bases = vec![np.y.block.clone(); l + 1];
    bases.extend(std::iter::repeat_n(np.z.block.clone(), m + 1));
    let mut constraints: Vec<Constraint> = (1..=l)
        .map(|j| Constraint { left: 0, left_code: np.y.code.clone(), right: j, right_code: np.y.code.clone() })
        .collect();
    constraints.extend(
        (0..=m).map(|k| Constraint { left: 0, left_code: np.y.code.clone(), right: l + 1 + k, right_code: np.z.code.clone() }),
    );
    TupleSpace::build(&format!("Sigma_{l},{m}"), &bases, &constraints)
}

fn swap_permutation(space: &TupleSpace, a: usize) -> Result<Vec<usize>> {
    space
        .vertex_tuples
        .iter()
        .map(|key| {
            let mut k: Vec<PathKey> = key.clone();
            k.swap(a, a + 1);
            space.vertex_of(&k).ok_or_else(|| Error::Invariant("coordinate swap leaves the tuple space".into()))
        })
        .collect()
}

/// The cell `Σ_{L,M}` of a normalized pair with its swap permutations.
pub fn sigma_cell(np: &NormalPair, l: usize, m: usize) -> Result<SigmaCell> {
    let space = sigma_space(np, l, m)?;
    let y_swaps = (0..l).map(|a| swap_permutation(&space, a)).collect::<Result<_>>()?;
    let z_swaps = (0..m).map(|a| swap_permutation(&space, l + 1 + a)).collect::<Result<_>>()?;
    Ok(SigmaCell { sft: space.sft.clone(), y_swaps, z_swaps, space: Some(space) })
}

/// Vertex permutation of a 1-block graph automorphism.
fn automorphism_permutation(c: &BlockCode, what: &str) -> Result<Vec<usize>> {
    let g = c.source().graph();
    if c.target() != c.source() || c.window() != 1 || c.memory() != 0 {
        return Err(Error::Input(format!("{what} must be a 1-block code from the cell to itself")));
    }
    let edge_map: Vec<usize> = (0..g.n_edges()).map(|e| c.eval(&[e])).collect();
    let mut hit = vec![false; g.n_edges()];
    for &f in &edge_map {
        hit[f] = true;
    }
    if !hit.iter().all(|&h| h) {
        return Err(Error::Input(format!("{what} is not a bijection on edges")));
    }
    let mut perm = vec![usize::MAX; g.n_vertices()];
    for e in 0..g.n_edges() {
        for (v, w) in [(g.i(e), g.i(edge_map[e])), (g.t(e), g.t(edge_map[e]))] {
            if perm[v] != usize::MAX && perm[v] != w {
                return Err(Error::Input(format!("{what} does not induce a vertex map")));
            }
            perm[v] = w;
        }
    }
    Ok(perm)
}

fn is_zero_cell(cell: &SigmaCell, l: usize, m: usize) -> Result<bool> {
    Ok(Reduction::new(cell, l, m)?.rank() == 0)
}

/// First index in `0..=cap+1` whose cell reduces to zero.
fn find_bound(cap: usize, what: &str, mut cell_at: impl FnMut(usize) -> Result<bool>) -> Result<usize> {
    for k in 0..=cap + 1 {
        if cell_at(k)? {
            return Ok(k);
        }
    }
    Err(Error::CapExceeded(format!("reduced groups still nonzero at {what} = {}; raise the {what} cap", cap + 1)))
}

pub fn build_sigma(p: &SUPair, caps: Caps) -> Result<SigmaComplex> {
    match p {
        SUPair::Sft(sp) => {
            let np = sp.normalized(caps.recoding)?;
            let l_bound = find_bound(caps.l, "L", |l| is_zero_cell(&sigma_cell(&np, l, 0)?, l, 0))?;
            let m_bound = find_bound(caps.m, "M", |m| is_zero_cell(&sigma_cell(&np, 0, m)?, 0, m))?;
            let mut cells = BTreeMap::new();
            for l in 0..l_bound {
                for m in 0..m_bound {
                    cells.insert((l, m), sigma_cell(&np, l, m)?);
                }
            }
            let mut delta_l = BTreeMap::new();
            let mut delta_m = BTreeMap::new();
            for (&(l, m), cell) in &cells {
                let space = cell.space.as_ref().expect("sft cells keep their tuple space");
                let all: Vec<usize> = (0..l + m + 2).collect();
                if l > 0 {
                    let below = cells[&(l - 1, m)].space.as_ref().expect("tuple space");
                    for k in 0..=l {
                        let keep: Vec<usize> = all.iter().copied().filter(|&j| j != k).collect();
                        delta_l.insert((l, m, k), space.select(&keep, below)?);
                    }
                }
                if m > 0 {
                    let below = cells[&(l, m - 1)].space.as_ref().expect("tuple space");
                    for k in 0..=m {
                        let keep: Vec<usize> = all.iter().copied().filter(|&j| j != l + 1 + k).collect();
                        delta_m.insert((l, m, k), space.select(&keep, below)?);
                    }
                }
            }
            let sc = SigmaComplex { cells, delta_l, delta_m, l_bound, m_bound, normal: Some(np) };
            sc.check_invariants()?;
            Ok(sc)
        }
        SUPair::Presentation(grid) => from_grid(grid),
    }
}

fn from_grid(grid: &PresentationGrid) -> Result<SigmaComplex> {
    let l_bound = grid.cells.keys().map(|&(l, _)| l + 1).max().unwrap_or(0);
    let m_bound = grid.cells.keys().map(|&(_, m)| m + 1).max().unwrap_or(0);
    let mut cells = BTreeMap::new();
    for l in 0..l_bound {
        for m in 0..m_bound {
            let cell = match grid.cells.get(&(l, m)) {
                Some(c) => {
                    if c.y_swaps.len() != l || c.z_swaps.len() != m {
                        return Err(Error::Input(format!("cell ({l},{m}) needs {l} y-swaps and {m} z-swaps")));
                    }
                    let y_swaps = c
                        .y_swaps
                        .iter()
                        .enumerate()
                        .map(|(a, s)| automorphism_permutation(s, &format!("y-swap {a} of cell ({l},{m})")))
                        .collect::<Result<_>>()?;
                    let z_swaps = c
                        .z_swaps
                        .iter()
                        .enumerate()
                        .map(|(a, s)| automorphism_permutation(s, &format!("z-swap {a} of cell ({l},{m})")))
                        .collect::<Result<_>>()?;
                    SigmaCell { sft: c.sft.clone(), y_swaps, z_swaps, space: None }
                }
                None => SigmaCell { sft: Sft::empty(format!("Sigma_{l},{m}")), y_swaps: vec![Vec::new(); l], z_swaps: vec![Vec::new(); m], space: None },
            };
            cells.insert((l, m), cell);
        }
    }
    let empty_code = |src: &Sft, tgt: &Sft| BlockCode::from_fn(src, tgt, 1, 0, |_| unreachable!("empty source"));
    let mut delta_l = BTreeMap::new();
    let mut delta_m = BTreeMap::new();
    for (&(l, m), cell) in &cells {
        for (count, below, given, out, is_l) in [
            (l, (l.wrapping_sub(1), m), &grid.delta_l, &mut delta_l, true),
            (m, (l, m.wrapping_sub(1)), &grid.delta_m, &mut delta_m, false),
        ] {
            if count == 0 {
                continue;
            }
            let target = &cells[&below].sft;
            for k in 0..=count {
                let code = match given.get(&(l, m, k)) {
                    Some(c) => c.clone(),
                    None if cell.sft.is_empty() => empty_code(&cell.sft, target)?,
                    None => {
                        return Err(Error::Input(format!(
                            "missing delta_{} map ({l},{m},{k})",
                            if is_l { "l" } else { "m" }
                        )))
                    }
                };
                if code.source() != &cell.sft || code.target() != target {
                    return Err(Error::Input(format!("delta map ({l},{m},{k}) has the wrong source or target")));
                }
                out.insert((l, m, k), code);
            }
        }
    }
    let sc = SigmaComplex { cells, delta_l, delta_m, l_bound, m_bound, normal: None };
    sc.check_invariants()?;
    Ok(sc)
}

impl SigmaComplex {
    /// Bijectivity of every deletion map and commutation of horizontal with vertical deletions.
    pub fn check_invariants(&self) -> Result<()> {
        for (&(l, m, k), d) in &self.delta_l {
            if !d.source().is_empty() && !is_s_bijective(d)? {
                return Err(Error::Hypothesis(format!("delta_l ({l},{m},{k}) is not s-bijective")));
            }
        }
        for (&(l, m, k), d) in &self.delta_m {
            if !d.source().is_empty() && !is_u_bijective(d)? {
                return Err(Error::Hypothesis(format!("delta_m ({l},{m},{k}) is not u-bijective")));
            }
        }
        for (&(l, m, a), dl) in &self.delta_l {
            if m == 0 {
                continue;
            }
            for b in 0..=m {
                let lower_first = self.delta_m[&(l, m, b)].then(&self.delta_l[&(l, m - 1, a)])?;
                let left_first = dl.then(&self.delta_m[&(l - 1, m, b)])?;
                if !code_equal(&lower_first, &left_first) {
                    return Err(Error::Hypothesis(format!(
                        "deletions do not commute at ({l},{m}) for y-index {a} and z-index {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn cell(&self, l: usize, m: usize) -> Option<&SigmaCell> {
        self.cells.get(&(l, m))
    }
}
