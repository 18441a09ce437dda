use std::collections::BTreeMap;

use crate::dimension::{bijective_form, Side};
use crate::error::{Error, Result};
use crate::sft::{is_s_bijective, is_u_bijective, BlockCode, Recoding, Sft};

/// `π_s : Y → X` s-bijective and `π_u : Z → X` u-bijective.
#[derive(Clone, Debug)]
pub struct SftPair {
    pub x: Sft,
    pub y: Sft,
    pub z: Sft,
    pub pi_s: BlockCode,
    pub pi_u: BlockCode,
}

/// One user-supplied grid cell: the shift and the coordinate swaps generating the symmetric group actions.
/// `y_swaps[i]` exchanges y-coordinates i and i+1; likewise `z_swaps`.
#[derive(Clone, Debug)]
pub struct PresentedCell {
    pub sft: Sft,
    pub y_swaps: Vec<BlockCode>,
    pub z_swaps: Vec<BlockCode>,
}

/// An explicitly presented family of shifts with their deletion maps, keyed by `(L, M)` and `(L, M, index)`.
/// `delta_l[(L, M, l)]` maps cell (L, M) to (L−1, M); `delta_m[(L, M, m)]` maps (L, M) to (L, M−1).
#[derive(Clone, Debug, Default)]
pub struct PresentationGrid {
    pub cells: BTreeMap<(usize, usize), PresentedCell>,
    pub delta_l: BTreeMap<(usize, usize, usize), BlockCode>,
    pub delta_m: BTreeMap<(usize, usize, usize), BlockCode>,
}

#[derive(Clone, Debug)]
pub enum SUPair {
    Sft(SftPair),
    Presentation(PresentationGrid),
}

impl SftPair {
    /// Checks that both maps land in `x` and have the required bijectivity.
    pub fn new(x: Sft, y: Sft, z: Sft, pi_s: BlockCode, pi_u: BlockCode) -> Result<Self> {
        let p = SftPair { x, y, z, pi_s, pi_u };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if *self.pi_s.source() != self.y || *self.pi_s.target() != self.x {
            return Err(Error::Input("pi_s must map Y to X".into()));
        }
        if *self.pi_u.source() != self.z || *self.pi_u.target() != self.x {
            return Err(Error::Input("pi_u must map Z to X".into()));
        }
        if !is_s_bijective(&self.pi_s)? {
            return Err(Error::Hypothesis(format!("pi_s: {} -> {} is not s-bijective", self.y.name(), self.x.name())));
        }
        if !is_u_bijective(&self.pi_u)? {
            return Err(Error::Hypothesis(format!("pi_u: {} -> {} is not u-bijective", self.z.name(), self.x.name())));
        }
        Ok(())
    }

    /// `(X, id, X, id)`.
    pub fn trivial(x: &Sft) -> Self {
        let id = BlockCode::identity(x);
        SftPair { x: x.clone(), y: x.clone(), z: x.clone(), pi_s: id.clone(), pi_u: id }
    }

    /// Time reversal exchanges the roles of the two sides.
    pub fn reversed(&self) -> Self {
        SftPair {
            x: self.x.reversed(),
            y: self.z.reversed(),
            z: self.y.reversed(),
            pi_s: self.pi_u.reversed(),
            pi_u: self.pi_s.reversed(),
        }
    }

    /// Recodes `pi_s` to an in-bijective and `pi_u` to an out-bijective 1-block code.
    pub fn normalized(&self, recoding_cap: usize) -> Result<NormalPair> {
        let ys = bijective_form(&self.pi_s, true, recoding_cap)?.recoded();
        let zs = bijective_form(&self.pi_u, false, recoding_cap)?.recoded();
        Ok(NormalPair { x: self.x.clone(), y: ys, z: zs })
    }
}

/// A pair whose maps are 1-block codes that are in-bijective (`y`) and out-bijective (`z`).
#[derive(Clone, Debug)]
pub struct NormalPair {
    pub x: Sft,
    pub y: Recoding,
    pub z: Recoding,
}

impl PresentationGrid {
    pub fn reversed(&self) -> Self {
        let cells = self
            .cells
            .iter()
            .map(|(&(l, m), c)| {
                let sft = c.sft.reversed();
                let rev = |codes: &[BlockCode]| -> Vec<BlockCode> { codes.iter().map(BlockCode::reversed).collect() };
                ((m, l), PresentedCell { sft, y_swaps: rev(&c.z_swaps), z_swaps: rev(&c.y_swaps) })
            })
            .collect();
        let flip = |d: &BTreeMap<(usize, usize, usize), BlockCode>| -> BTreeMap<(usize, usize, usize), BlockCode> {
            d.iter().map(|(&(l, m, k), c)| ((m, l, k), c.reversed())).collect()
        };
        PresentationGrid { cells, delta_l: flip(&self.delta_m), delta_m: flip(&self.delta_l) }
    }
}

impl SUPair {
    pub fn reversed(&self) -> Self {
        match self {
            SUPair::Sft(p) => SUPair::Sft(p.reversed()),
            SUPair::Presentation(g) => SUPair::Presentation(g.reversed()),
        }
    }

    /// The pair whose s-side computation gives the requested side of this one.
    pub fn for_side(&self, side: Side) -> Self {
        match side {
            Side::S => self.clone(),
            Side::U => self.reversed(),
        }
    }

    pub fn as_sft(&self) -> Option<&SftPair> {
        match self {
            SUPair::Sft(p) => Some(p),
            SUPair::Presentation(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::sft::code_equal;

    #[test]
    fn pair_validation() {
        let h = fixtures::sigma_h();
        let g = fixtures::sigma_g();
        let pi = fixtures::pi();
        assert!(SftPair::new(h.clone(), g.clone(), h.clone(), pi.clone(), BlockCode::identity(&h)).is_ok());
        assert!(SftPair::new(h.clone(), h.clone(), g.clone(), BlockCode::identity(&h), pi.clone()).is_ok());
        assert!(SftPair::new(h.clone(), g, h.clone(), BlockCode::identity(&h), pi).is_err());
        SftPair::trivial(&h).validate().unwrap();
    }

    #[test]
    fn reversal_swaps_sides() {
        let h = fixtures::sigma_h();
        let p = SftPair::new(h.clone(), fixtures::sigma_g(), h.clone(), fixtures::pi(), BlockCode::identity(&h)).unwrap();
        let r = p.reversed();
        r.validate().unwrap();
        assert_eq!(r.z.graph().n_vertices(), 2);
        let rr = r.reversed();
        assert!(code_equal(&rr.pi_s, &p.pi_s));
    }

    #[test]
    fn normal_form_round_trip() {
        let p = SftPair::trivial(&fixtures::sigma_g());
        let n = p.normalized(8).unwrap();
        assert_eq!(n.y.block, p.y);
        assert!(code_equal(&n.y.encode.then(&n.y.code).unwrap(), &p.pi_s));
    }
}
