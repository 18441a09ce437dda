use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::pair::SUPair;
use super::reduce::{reduce_map, Reduction};
use super::sigma::{build_sigma, Caps, SigmaComplex};
use crate::dimension::{dimension_group, hom_compose, hom_equal, induced_map_unchecked, Kind, LimitGroup, LimitHom, Side};
use crate::error::{Error, Result};
use crate::graph_core::IntMatrix;

/// A reduced group `C_{L,M}` and the data needed to map into and out of it.
#[derive(Clone, Debug)]
pub struct ReducedCell {
    pub reduction: Reduction,
    /// Connecting map of the unreduced dimension group.
    pub connecting: IntMatrix,
    pub group: LimitGroup,
}

/// The Q,A-reduced double complex; boundary pieces share one level shift.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub side: Side,
    pub cells: BTreeMap<(usize, usize), ReducedCell>,
    /// `(L, M) → (L−1, M)`.
    pub horizontal: BTreeMap<(usize, usize), IntMatrix>,
    /// `(L, M) → (L, M+1)`.
    pub vertical: BTreeMap<(usize, usize), IntMatrix>,
    pub level_shift: i64,
    pub l_bound: usize,
    pub m_bound: usize,
}

fn sign(k: usize) -> BigInt {
    BigInt::from(if k.is_multiple_of(2) { 1 } else { -1 })
}

/// Builds the pair's complex for `side`, computing the u side through time reversal.
pub fn double_complex(p: &SUPair, side: Side, caps: Caps) -> Result<(SigmaComplex, DoubleComplex)> {
    let sc = build_sigma(&p.for_side(side), caps)?;
    let dc = boundary(&sc, side, caps.recoding)?;
    Ok((sc, dc))
}

/// Assembles `d = Σ (−1)^l δ_l^s + Σ (−1)^(L+m) δ_m^{s*}` on the reduced groups of `sc`,
/// which must be built from the pair for `side` (see [`SUPair::for_side`]).
pub fn boundary(sc: &SigmaComplex, side: Side, recoding_cap: usize) -> Result<DoubleComplex> {
    let mut cells = BTreeMap::new();
    for (&(l, m), cell) in &sc.cells {
        let reduction = Reduction::new(cell, l, m)?;
        let connecting = dimension_group(&cell.sft, Side::S).connecting;
        let bar = reduce_map(&reduction, &reduction, &connecting, "connecting map")?;
        let group = LimitGroup::new(bar, format!("C_{l},{m}"))?;
        cells.insert((l, m), ReducedCell { reduction, connecting, group });
    }
    let mut pieces_l = BTreeMap::new();
    for (&key, d) in &sc.delta_l {
        pieces_l.insert(key, induced_map_unchecked(d, Kind::S, recoding_cap)?);
    }
    let mut pieces_m = BTreeMap::new();
    for (&key, d) in &sc.delta_m {
        pieces_m.insert(key, induced_map_unchecked(d, Kind::SStar, recoding_cap)?);
    }
    let level_shift = pieces_l.values().chain(pieces_m.values()).map(|h| h.level_shift).max().unwrap_or(0);
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
    for (&(l, m), rc) in &cells {
        if l > 0 {
            let tgt = &cells[&(l - 1, m)];
            let mut sum = IntMatrix::zeros(tgt.reduction.n_vertices, rc.reduction.n_vertices);
            for k in 0..=l {
                sum = &sum + &pieces_l[&(l, m, k)].at_shift(level_shift).scale(&sign(k));
            }
            let red = reduce_map(&rc.reduction, &tgt.reduction, &sum, &format!("horizontal boundary at ({l},{m})"))?;
            LimitHom::new(rc.group.clone(), tgt.group.clone(), red.clone(), level_shift)?;
            horizontal.insert((l, m), red);
        }
        if let Some(tgt) = cells.get(&(l, m + 1)) {
            let mut sum = IntMatrix::zeros(tgt.reduction.n_vertices, rc.reduction.n_vertices);
            for k in 0..=m + 1 {
                sum = &sum + &pieces_m[&(l, m + 1, k)].at_shift(level_shift).scale(&sign(l + k));
            }
            let red = reduce_map(&rc.reduction, &tgt.reduction, &sum, &format!("vertical boundary at ({l},{m})"))?;
            LimitHom::new(rc.group.clone(), tgt.group.clone(), red.clone(), level_shift)?;
            vertical.insert((l, m), red);
        }
    }
    let dc = DoubleComplex { side, cells, horizontal, vertical, level_shift, l_bound: sc.l_bound, m_bound: sc.m_bound };
    dc.check_d_squared()?;
    Ok(dc)
}

impl DoubleComplex {
    /// Total degrees `L − M` that can carry a nonzero group.
    pub fn degrees(&self) -> Vec<i64> {
        if self.cells.is_empty() {
            return vec![0];
        }
        (-(self.m_bound as i64 - 1)..=self.l_bound as i64 - 1).collect()
    }

    /// Cells of total degree `n`, by increasing L.
    pub fn cells_in_degree(&self, n: i64) -> Vec<(usize, usize)> {
        self.cells.keys().copied().filter(|&(l, m)| l as i64 - m as i64 == n).collect()
    }

    fn offsets(&self, n: i64) -> (Vec<((usize, usize), usize)>, usize) {
        let mut out = Vec::new();
        let mut at = 0;
        for key in self.cells_in_degree(n) {
            out.push((key, at));
            at += self.cells[&key].group.rank;
        }
        (out, at)
    }

    pub fn chain_rank(&self, n: i64) -> usize {
        self.offsets(n).1
    }

    /// Block diagonal connecting map on `C_n`.
    pub fn chain_group(&self, n: i64) -> LimitGroup {
        let blocks: Vec<IntMatrix> =
            self.cells_in_degree(n).iter().map(|k| self.cells[k].group.connecting.clone()).collect();
        LimitGroup { rank: self.chain_rank(n), connecting: IntMatrix::block_diag(&blocks), label: format!("C_{n}") }
    }

    /// `d_n : C_n → C_{n−1}`.
    pub fn total_boundary(&self, n: i64) -> IntMatrix {
        let (src, cols) = self.offsets(n);
        let (tgt, rows) = self.offsets(n - 1);
        let at: BTreeMap<(usize, usize), usize> = tgt.into_iter().collect();
        let mut d = IntMatrix::zeros(rows, cols);
        for ((l, m), c0) in src {
            if let Some(h) = self.horizontal.get(&(l, m)) {
                d.set_block(at[&(l - 1, m)], c0, h);
            }
            if let Some(v) = self.vertical.get(&(l, m)) {
                d.set_block(at[&(l, m + 1)], c0, v);
            }
        }
        d
    }

    pub fn total_boundary_hom(&self, n: i64) -> Result<LimitHom> {
        LimitHom::new(self.chain_group(n), self.chain_group(n - 1), self.total_boundary(n), self.level_shift)
    }

    /// `d ∘ d = 0` in every degree, as maps of limit groups.
    pub fn check_d_squared(&self) -> Result<()> {
        for n in self.degrees() {
            let d_n = self.total_boundary_hom(n)?;
            let d_prev = self.total_boundary_hom(n - 1)?;
            let dd = hom_compose(&d_prev, &d_n)?;
            if !hom_equal(&dd, &LimitHom::zero(&dd.source, &dd.target))? {
                return Err(Error::Invariant(format!(
                    "d∘d is nonzero from degree {n}; cells {:?}",
                    self.cells_in_degree(n)
                )));
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.cells.values().all(|c| c.group.rank == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::pair::SftPair;
    use crate::fixtures;
    use crate::sft::BlockCode;

    #[test]
    fn trivial_pair_complex() {
        let p = SUPair::Sft(SftPair::trivial(&fixtures::sigma_h()));
        let (_, dc) = double_complex(&p, Side::S, Caps::default()).unwrap();
        assert_eq!(dc.cells.len(), 1);
        assert_eq!(dc.cells[&(0, 0)].group.connecting, IntMatrix::from_rows(&[vec![2]]));
        assert!(dc.horizontal.is_empty() && dc.vertical.is_empty());
    }

    #[test]
    fn two_to_one_pair_boundary() {
        let h = fixtures::sigma_h();
        let p = SUPair::Sft(
            SftPair::new(h.clone(), fixtures::sigma_g(), h.clone(), fixtures::pi(), BlockCode::identity(&h)).unwrap(),
        );
        let (_, dc) = double_complex(&p, Side::S, Caps::default()).unwrap();
        let d = &dc.horizontal[&(1, 0)];
        assert_eq!((d.rows(), d.cols()), (2, 1));
        // δ_0 − δ_1 on the single off-diagonal orbit: difference of the two vertices of Σ_G.
        let col = d.col(0);
        assert_eq!(&col[0] + &col[1], BigInt::from(0));
        assert_ne!(col[0], BigInt::from(0));
        let (_, du) = double_complex(&p, Side::U, Caps::default()).unwrap();
        assert_eq!(du.l_bound, 1);
        assert_eq!(du.m_bound, 2);
    }
}
