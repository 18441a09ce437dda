use std::collections::BTreeMap;

use super::double::{double_complex, DoubleComplex};
use super::homology::{homology_over, map_on_homology, HomologyResult};
use super::pair::{NormalPair, SUPair, SftPair};
use super::reduce::reduce_map;
use super::sigma::{Caps, SigmaComplex};
use crate::dimension::{hom_compose, hom_equal, induced_map_unchecked, Kind, LimitHom, Side};
use crate::error::{Error, Result};
use crate::graph_core::IntMatrix;
use crate::sft::{code_equal, fibre_product, is_injective, is_s_bijective, is_surjective, is_u_bijective, BlockCode};

/// Factor maps `η = (η_X, η_Y, η_Z)` from `pair` to `pair_prime` with both squares commuting.
#[derive(Clone, Debug)]
pub struct TripleData {
    pub pair: SftPair,
    pub pair_prime: SftPair,
    pub eta_x: BlockCode,
    pub eta_y: BlockCode,
    pub eta_z: BlockCode,
}

/// Which family of hypotheses a construction needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bijectivity {
    S,
    U,
}

impl Bijectivity {
    /// `s` and `u_star` come from s-bijective triples, `u` and `s_star` from u-bijective ones.
    pub fn of(kind: Kind) -> Self {
        if kind.needs_s_bijective() {
            Bijectivity::S
        } else {
            Bijectivity::U
        }
    }
}

impl TripleData {
    pub fn new(pair: SftPair, pair_prime: SftPair, eta_x: BlockCode, eta_y: BlockCode, eta_z: BlockCode) -> Result<Self> {
        let t = TripleData { pair, pair_prime, eta_x, eta_y, eta_z };
        t.check_squares()?;
        Ok(t)
    }

    /// `π'_s ∘ η_Y = η_X ∘ π_s` and `π'_u ∘ η_Z = η_X ∘ π_u`.
    pub fn check_squares(&self) -> Result<()> {
        let (p, q) = (&self.pair, &self.pair_prime);
        let ends = [
            ("eta_X", &self.eta_x, &p.x, &q.x),
            ("eta_Y", &self.eta_y, &p.y, &q.y),
            ("eta_Z", &self.eta_z, &p.z, &q.z),
        ];
        for (name, c, s, t) in ends {
            if c.source() != s || c.target() != t {
                return Err(Error::Input(format!("{name} does not map {} to {}", s.name(), t.name())));
            }
        }
        if !code_equal(&self.eta_y.then(&q.pi_s)?, &p.pi_s.then(&self.eta_x)?) {
            return Err(Error::Hypothesis("the Y square does not commute: pi'_s∘eta_Y ≠ eta_X∘pi_s".into()));
        }
        if !code_equal(&self.eta_z.then(&q.pi_u)?, &p.pi_u.then(&self.eta_x)?) {
            return Err(Error::Hypothesis("the Z square does not commute: pi'_u∘eta_Z ≠ eta_X∘pi_u".into()));
        }
        Ok(())
    }

    pub fn reversed(&self) -> TripleData {
        TripleData {
            pair: self.pair.reversed(),
            pair_prime: self.pair_prime.reversed(),
            eta_x: self.eta_x.reversed(),
            eta_y: self.eta_z.reversed(),
            eta_z: self.eta_y.reversed(),
        }
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &TripleData) -> Result<TripleData> {
        let (a, b) = (&self.pair_prime, &outer.pair);
        if a.x != b.x || a.y != b.y || a.z != b.z {
            return Err(Error::Input("triples are not composable: intermediate pairs differ".into()));
        }
        TripleData::new(
            self.pair.clone(),
            outer.pair_prime.clone(),
            self.eta_x.then(&outer.eta_x)?,
            self.eta_y.then(&outer.eta_y)?,
            self.eta_z.then(&outer.eta_z)?,
        )
    }

    pub fn identity(p: &SftPair) -> TripleData {
        TripleData {
            pair: p.clone(),
            pair_prime: p.clone(),
            eta_x: BlockCode::identity(&p.x),
            eta_y: BlockCode::identity(&p.y),
            eta_z: BlockCode::identity(&p.z),
        }
    }

    /// Checks every hypothesis for the given bijectivity; the first failure is returned by name.
    pub fn check_hypotheses(&self, case: Bijectivity) -> Result<()> {
        self.check_squares()?;
        let (label, test): (&str, fn(&BlockCode) -> Result<bool>) = match case {
            Bijectivity::S => ("s", is_s_bijective),
            Bijectivity::U => ("u", is_u_bijective),
        };
        for (name, c) in [("eta_X", &self.eta_x), ("eta_Y", &self.eta_y), ("eta_Z", &self.eta_z)] {
            if !test(c)? {
                return Err(Error::Hypothesis(format!("{name} is not {label}-bijective")));
            }
        }
        let v = product_verdict(self, case)?;
        if !v.injective {
            return Err(Error::Hypothesis(format!("{} is not one-to-one", v.name)));
        }
        if !v.surjective {
            return Err(Error::Hypothesis(format!("{} is not onto", v.name)));
        }
        Ok(())
    }
}

/// Verdict on the product map `π_u × η_Z` (s case) or `π_s × η_Y` (u case) into its fibre product.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ProductVerdict {
    pub name: String,
    pub injective: bool,
    pub surjective: bool,
}

impl ProductVerdict {
    pub fn is_conjugacy(&self) -> bool {
        self.injective && self.surjective
    }
}

pub fn product_verdict(t: &TripleData, case: Bijectivity) -> Result<ProductVerdict> {
    let (p, q) = (&t.pair, &t.pair_prime);
    let (name, src, base, eta, target_pi) = match case {
        Bijectivity::S => ("pi_u x eta_Z", &p.z, &p.pi_u, &t.eta_z, &q.pi_u),
        Bijectivity::U => ("pi_s x eta_Y", &p.y, &p.pi_s, &t.eta_y, &q.pi_s),
    };
    let (space, _, _) = fibre_product(&t.eta_x, target_pi)?;
    let map = space.product_code(src, &[base.clone(), eta.clone()])?;
    Ok(ProductVerdict { name: name.into(), injective: is_injective(&map), surjective: is_surjective(&map) })
}

/// `η` on the normalized presentations: decode, apply, encode.
fn normalized_eta(np: &NormalPair, np2: &NormalPair, t: &TripleData) -> Result<(BlockCode, BlockCode)> {
    let y = np.y.decode.then(&t.eta_y)?.then(&np2.y.encode)?;
    let z = np.z.decode.then(&t.eta_z)?.then(&np2.z.encode)?;
    Ok((y, z))
}

/// `η_{L,M}` on `Σ_{L,M}`: `η_Y` on every y-coordinate and `η_Z` on every z-coordinate.
fn eta_cell(sc: &SigmaComplex, sc2: &SigmaComplex, eta_y: &BlockCode, eta_z: &BlockCode, l: usize, m: usize) -> Result<BlockCode> {
    let space = sc.cells[&(l, m)].space.as_ref().expect("sft cells keep their tuple space");
    let space2 = sc2.cells[&(l, m)].space.as_ref().expect("sft cells keep their tuple space");
    let codes = (0..l + m + 2)
        .map(|j| space.projection(j).then(if j <= l { eta_y } else { eta_z }))
        .collect::<Result<Vec<_>>>()?;
    space2.product_code(&space.sft, &codes)
}

/// `η_{L,M} : Σ_{L,M}(pair) → Σ_{L,M}(pair')` on every cell present on both sides.
/// Both grids must be built in sft mode from the triple's pairs.
pub fn cell_maps(t: &TripleData, sc: &SigmaComplex, sc2: &SigmaComplex) -> Result<BTreeMap<(usize, usize), BlockCode>> {
    let (Some(np), Some(np2)) = (sc.normal.as_ref(), sc2.normal.as_ref()) else {
        return Err(Error::Input("cell maps need grids built from block codes".into()));
    };
    let (eta_y, eta_z) = normalized_eta(np, np2, t)?;
    let mut etas = BTreeMap::new();
    for &key in sc.cells.keys() {
        if sc2.cells.contains_key(&key) {
            etas.insert(key, eta_cell(sc, sc2, &eta_y, &eta_z, key.0, key.1)?);
        }
    }
    Ok(etas)
}

/// A chain map between total complexes, degree by degree, with a common level shift.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub kind: Kind,
    pub per_degree: BTreeMap<i64, IntMatrix>,
    pub level_shift: i64,
}

/// Induced maps on homology for a triple, with the homology of both ends over a common degree range.
#[derive(Clone, Debug)]
pub struct HomologyMap {
    pub kind: Kind,
    pub source: HomologyResult,
    pub target: HomologyResult,
    pub maps: BTreeMap<i64, LimitHom>,
}

impl HomologyMap {
    /// `self` followed by `outer`, degree by degree.
    pub fn then(&self, outer: &HomologyMap) -> Result<BTreeMap<i64, LimitHom>> {
        compose_maps(&self.maps, &outer.maps)
    }
}

pub fn compose_maps(inner: &BTreeMap<i64, LimitHom>, outer: &BTreeMap<i64, LimitHom>) -> Result<BTreeMap<i64, LimitHom>> {
    let mut out = BTreeMap::new();
    for (n, f) in inner {
        let g = outer.get(n).ok_or_else(|| Error::Input(format!("no map in degree {n} to compose with")))?;
        out.insert(*n, hom_compose(g, f)?);
    }
    Ok(out)
}

/// Degree-wise equality of two families of maps.
pub fn maps_equal(a: &BTreeMap<i64, LimitHom>, b: &BTreeMap<i64, LimitHom>) -> Result<bool> {
    let degrees: std::collections::BTreeSet<i64> = a.keys().chain(b.keys()).copied().collect();
    for n in degrees {
        match (a.get(&n), b.get(&n)) {
            (Some(f), Some(g)) => {
                if !hom_equal(f, g)? {
                    return Ok(false);
                }
            }
            (Some(f), None) | (None, Some(f)) => {
                if !hom_equal(f, &LimitHom::zero(&f.source, &f.target))? {
                    return Ok(false);
                }
            }
            (None, None) => {}
        }
    }
    Ok(true)
}

/// Checks the hypotheses for `kind`, builds the chain map and returns its effect on homology.
pub fn induced_on_homology(t: &TripleData, kind: Kind, caps: Caps, level_window: u32) -> Result<HomologyMap> {
    t.check_hypotheses(Bijectivity::of(kind))?;
    let (work, s_kind) = match kind {
        Kind::S | Kind::SStar => (t.clone(), kind),
        Kind::U => (t.reversed(), Kind::S),
        Kind::UStar => (t.reversed(), Kind::SStar),
    };
    let side = kind.side();
    let (sc, dc) = double_complex(&SUPair::Sft(work.pair.clone()), Side::S, caps)?;
    let (sc2, dc2) = double_complex(&SUPair::Sft(work.pair_prime.clone()), Side::S, caps)?;
    let chain = chain_map(&work, s_kind, &sc, &dc, &sc2, &dc2, caps.recoding)?;
    let (src_dc, tgt_dc) = if s_kind == Kind::S { (&dc, &dc2) } else { (&dc2, &dc) };
    let mut degrees: Vec<i64> = src_dc.degrees().into_iter().chain(tgt_dc.degrees()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut source = homology_over(src_dc, &degrees, level_window)?;
    let mut target = homology_over(tgt_dc, &degrees, level_window)?;
    source.side = side;
    target.side = side;
    let mut maps = BTreeMap::new();
    for &n in &degrees {
        let f = chain.per_degree.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(tgt_dc.chain_rank(n), src_dc.chain_rank(n)));
        let hs = source.degree(n).expect("degree computed");
        let ht = target.degree(n).expect("degree computed");
        maps.insert(n, map_on_homology(hs, ht, &f, chain.level_shift)?);
    }
    Ok(HomologyMap { kind, source, target, maps })
}

/// Chain map on the s side for kind `S` (from `sc` to `sc2`) or `SStar` (from `sc2` to `sc`).
#[allow(clippy::too_many_arguments)]
fn chain_map(
    t: &TripleData,
    kind: Kind,
    sc: &SigmaComplex,
    dc: &DoubleComplex,
    sc2: &SigmaComplex,
    dc2: &DoubleComplex,
    recoding_cap: usize,
) -> Result<ChainMap> {
    let etas = cell_maps(t, sc, sc2)?;
    let mut pieces = BTreeMap::new();
    for (&(l, m), eta) in &etas {
        let ok = if kind == Kind::S { is_s_bijective(eta)? } else { is_u_bijective(eta)? };
        if !ok {
            return Err(Error::Hypothesis(format!(
                "eta at ({l},{m}) is not {}-bijective",
                if kind == Kind::S { "s" } else { "u" }
            )));
        }
        check_cell_product(sc, sc2, &etas, kind, l, m)?;
        pieces.insert((l, m), induced_map_unchecked(eta, kind, recoding_cap)?);
    }
    let level_shift = pieces.values().map(|h| h.level_shift).max().unwrap_or(0);
    let (src_dc, tgt_dc) = if kind == Kind::S { (dc, dc2) } else { (dc2, dc) };
    let mut reduced = BTreeMap::new();
    for (&key, h) in &pieces {
        let (Some(a), Some(b)) = (src_dc.cells.get(&key), tgt_dc.cells.get(&key)) else { continue };
        let m = reduce_map(&a.reduction, &b.reduction, &h.at_shift(level_shift), &format!("chain map at {key:?}"))?;
        reduced.insert(key, m);
    }
    let mut degrees: Vec<i64> = src_dc.degrees().into_iter().chain(tgt_dc.degrees()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut per_degree = BTreeMap::new();
    for &n in &degrees {
        let mut f = IntMatrix::zeros(tgt_dc.chain_rank(n), src_dc.chain_rank(n));
        let tgt_cells = tgt_dc.cells_in_degree(n);
        let mut col = 0;
        for key in src_dc.cells_in_degree(n) {
            if let Some(block) = reduced.get(&key) {
                let row: usize = tgt_cells.iter().take_while(|k| **k != key).map(|k| tgt_dc.cells[k].group.rank).sum();
                f.set_block(row, col, block);
            }
            col += src_dc.cells[&key].group.rank;
        }
        per_degree.insert(n, f);
    }
    for &n in &degrees {
        let f_n = LimitHom::new(src_dc.chain_group(n), tgt_dc.chain_group(n), per_degree[&n].clone(), level_shift)?;
        let f_prev = LimitHom::new(
            src_dc.chain_group(n - 1),
            tgt_dc.chain_group(n - 1),
            per_degree.get(&(n - 1)).cloned().unwrap_or_else(|| IntMatrix::zeros(tgt_dc.chain_rank(n - 1), src_dc.chain_rank(n - 1))),
            level_shift,
        )?;
        let left = hom_compose(&tgt_dc.total_boundary_hom(n)?, &f_n)?;
        let right = hom_compose(&f_prev, &src_dc.total_boundary_hom(n)?)?;
        if !hom_equal(&left, &right)? {
            return Err(Error::Invariant(format!("chain map does not commute with the boundary in degree {n}")));
        }
    }
    Ok(ChainMap { kind, per_degree, level_shift })
}

/// `η_{L,M} × δ_{,m}` (s case) or `η_{L,M} × δ_{l,}` (u case) is a conjugacy onto its fibre product.
fn check_cell_product(
    sc: &SigmaComplex,
    sc2: &SigmaComplex,
    etas: &BTreeMap<(usize, usize), BlockCode>,
    kind: Kind,
    l: usize,
    m: usize,
) -> Result<()> {
    let (count, below, deltas, deltas2, label) = if kind == Kind::S {
        (m, (l, m.wrapping_sub(1)), &sc.delta_m, &sc2.delta_m, "delta_m")
    } else {
        (l, (l.wrapping_sub(1), m), &sc.delta_l, &sc2.delta_l, "delta_l")
    };
    if count == 0 {
        return Ok(());
    }
    let Some(eta_below) = etas.get(&below) else { return Ok(()) };
    let eta = &etas[&(l, m)];
    for k in 0..=count {
        let d = &deltas[&(l, m, k)];
        let d2 = &deltas2[&(l, m, k)];
        let (space, _, _) = fibre_product(d2, eta_below)?;
        let map = space.product_code(d.source(), &[eta.clone(), d.clone()])?;
        if !is_injective(&map) {
            return Err(Error::Hypothesis(format!("eta x {label} at ({l},{m}), index {k}, is not one-to-one")));
        }
        if !is_surjective(&map) {
            return Err(Error::Hypothesis(format!("eta x {label} at ({l},{m}), index {k}, is not onto")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn shift_triple(p: &SftPair, k: i64) -> TripleData {
        TripleData::new(
            p.clone(),
            p.clone(),
            BlockCode::shift_power(&p.x, k),
            BlockCode::shift_power(&p.y, k),
            BlockCode::shift_power(&p.z, k),
        )
        .unwrap()
    }

    #[test]
    fn identity_triple_is_identity() {
        let h = fixtures::sigma_h();
        let p = SftPair::new(h.clone(), fixtures::sigma_g(), h.clone(), fixtures::pi(), BlockCode::identity(&h)).unwrap();
        for kind in [Kind::S, Kind::U, Kind::SStar, Kind::UStar] {
            let hm = induced_on_homology(&TripleData::identity(&p), kind, Caps::default(), 2).unwrap();
            for (n, f) in &hm.maps {
                assert!(hom_equal(f, &LimitHom::identity(&f.source)).unwrap(), "{kind:?} degree {n}");
            }
        }
    }

    #[test]
    fn shift_acts_through_the_connecting_map() {
        let p = SftPair::trivial(&fixtures::sigma_h());
        let forward = induced_on_homology(&shift_triple(&p, 1), Kind::S, Caps::default(), 2).unwrap();
        let backward = induced_on_homology(&shift_triple(&p, -1), Kind::S, Caps::default(), 2).unwrap();
        let f = &forward.maps[&0];
        let connecting = LimitHom { matrix: f.source.connecting.clone(), level_shift: 0, ..f.clone() };
        let up_one_level = LimitHom { matrix: IntMatrix::identity(1), level_shift: 1, ..f.clone() };
        assert!(hom_equal(&backward.maps[&0], &connecting).unwrap());
        assert!(hom_equal(f, &up_one_level).unwrap());
        assert!(!hom_equal(f, &connecting).unwrap());
        let three = induced_on_homology(&shift_triple(&p, 3), Kind::S, Caps::default(), 2).unwrap();
        let cubed = compose_maps(&compose_maps(&forward.maps, &forward.maps).unwrap(), &forward.maps).unwrap();
        assert!(maps_equal(&cubed, &three.maps).unwrap());
    }

    #[test]
    fn mismatched_triple_is_refused() {
        let h = fixtures::sigma_h();
        let g = fixtures::sigma_g();
        let pi = fixtures::pi();
        let p = SftPair::new(h.clone(), h.clone(), g.clone(), BlockCode::identity(&h), pi.clone()).unwrap();
        let q = SftPair::trivial(&h);
        let t = TripleData::new(p, q, BlockCode::identity(&h), BlockCode::identity(&h), pi).unwrap();
        let err = induced_on_homology(&t, Kind::S, Caps::default(), 2).unwrap_err();
        assert_eq!(err, Error::Hypothesis("pi_u x eta_Z is not one-to-one".into()));
    }
}
