use std::collections::BTreeMap;

use serde::Serialize;

use super::report::{Report, Settings};
use super::square::{check_square, Composites, SquareCheck, SquareDiagram};
use crate::complex::{build_sigma, cell_maps, induced_on_homology, Bijectivity, SUPair, SftPair, TripleData};
use crate::dimension::{hom_compose, Kind, LimitHom, Side};
use crate::error::{Error, Result};
use crate::sft::{fibre_product, is_s_bijective, is_u_bijective, BlockCode, Constraint, Sft, TupleSpace};

/// The pair chosen for the bottom corner: `y0 : Y0 → Σ0` s-bijective, `z0 : Z0 → Σ0` u-bijective.
#[derive(Clone, Debug)]
pub struct CubeSeeds {
    pub y0: BlockCode,
    pub z0: BlockCode,
}

impl CubeSeeds {
    pub fn identity(sigma0: &Sft) -> Self {
        CubeSeeds { y0: BlockCode::identity(sigma0), z0: BlockCode::identity(sigma0) }
    }
}

/// Pairs over the four corners of a square with the four triples between them.
#[derive(Clone, Debug)]
pub struct PullbackCube {
    pub rho: SftPair,
    pub rho0: SftPair,
    pub rho1: SftPair,
    pub rho2: SftPair,
    /// `ρ → ρ1`, s-bijective.
    pub eta1: TripleData,
    /// `ρ → ρ2`, u-bijective.
    pub eta2: TripleData,
    /// `ρ1 → ρ0`, u-bijective.
    pub pi1: TripleData,
    /// `ρ2 → ρ0`, s-bijective.
    pub pi2: TripleData,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub holds: bool,
}

fn verdict(out: &mut Vec<Verdict>, claim: impl Into<String>, holds: bool) {
    out.push(Verdict { claim: claim.into(), holds });
}

/// One side of the cube: the pullbacks of the seed along `π1` and `π2`, and the
/// three-coordinate space `(w2, x, w1)` over the top corner.
struct SideSpaces {
    leg1: BlockCode,
    down1: BlockCode,
    leg2: BlockCode,
    down2: BlockCode,
    leg: BlockCode,
    up1: BlockCode,
    up2: BlockCode,
}

fn side_spaces(d: &SquareDiagram, seed: &BlockCode, label: &str) -> Result<SideSpaces> {
    let (s1, down1, leg1) = fibre_product(seed, &d.pi1)?;
    let (s2, down2, leg2) = fibre_product(seed, &d.pi2)?;
    let (s1, s2) = (s1.sft.with_name(format!("{label}1")), s2.sft.with_name(format!("{label}2")));
    let rebase = |c: &BlockCode, s: &Sft| c.rebased(s, c.target());
    let (down1, leg1) = (rebase(&down1, &s1)?, rebase(&leg1, &s1)?);
    let (down2, leg2) = (rebase(&down2, &s2)?, rebase(&leg2, &s2)?);
    let top = TupleSpace::build(
        label,
        &[s2.clone(), d.sigma.clone(), s1.clone()],
        &[
            Constraint { left: 0, left_code: leg2.clone(), right: 1, right_code: d.eta2.clone() },
            Constraint { left: 2, left_code: leg1.clone(), right: 1, right_code: d.eta1.clone() },
            Constraint { left: 0, left_code: down2.clone(), right: 2, right_code: down1.clone() },
        ],
    )?;
    Ok(SideSpaces {
        up2: top.projection(0),
        leg: top.projection(1),
        up1: top.projection(2),
        leg1,
        down1,
        leg2,
        down2,
    })
}

/// Builds pairs over all four corners from seeds at the bottom corner, checking the
/// bijectivity claims of each construction along the way.
pub fn build_pullback_cube(d: &SquareDiagram, seeds: &CubeSeeds) -> Result<PullbackCube> {
    if seeds.y0.target() != &d.sigma0 || seeds.z0.target() != &d.sigma0 {
        return Err(Error::Input("cube seeds must map onto Sigma0".into()));
    }
    if !is_s_bijective(&seeds.y0)? {
        return Err(Error::Hypothesis("seed Y0 -> Sigma0 is not s-bijective".into()));
    }
    if !is_u_bijective(&seeds.z0)? {
        return Err(Error::Hypothesis("seed Z0 -> Sigma0 is not u-bijective".into()));
    }
    let y = side_spaces(d, &seeds.y0, "Y")?;
    let z = side_spaces(d, &seeds.z0, "Z")?;
    let mut verdicts = Vec::new();
    let s = |c: &BlockCode| is_s_bijective(c);
    let u = |c: &BlockCode| is_u_bijective(c);
    let claims: [(&str, &BlockCode, bool); 14] = [
        ("Y1 -> Sigma1 is s-bijective", &y.leg1, true),
        ("Y1 -> Y0 is u-bijective", &y.down1, false),
        ("Y2 -> Sigma2 is s-bijective", &y.leg2, true),
        ("Y2 -> Y0 is s-bijective", &y.down2, true),
        ("Y -> Sigma is s-bijective", &y.leg, true),
        ("Y -> Y1 is s-bijective", &y.up1, true),
        ("Y -> Y2 is u-bijective", &y.up2, false),
        ("Z1 -> Sigma1 is u-bijective", &z.leg1, false),
        ("Z1 -> Z0 is u-bijective", &z.down1, false),
        ("Z2 -> Sigma2 is u-bijective", &z.leg2, false),
        ("Z2 -> Z0 is s-bijective", &z.down2, true),
        ("Z -> Sigma is u-bijective", &z.leg, false),
        ("Z -> Z1 is s-bijective", &z.up1, true),
        ("Z -> Z2 is u-bijective", &z.up2, false),
    ];
    for (claim, c, s_side) in claims {
        let ok = if s_side { s(c)? } else { u(c)? };
        verdict(&mut verdicts, claim, ok);
    }
    if let Some(bad) = verdicts.iter().find(|v| !v.holds) {
        return Err(Error::Hypothesis(format!("cube construction: {} fails", bad.claim)));
    }
    let pair = |x: &Sft, py: &BlockCode, pz: &BlockCode| {
        SftPair::new(x.clone(), py.source().clone(), pz.source().clone(), py.clone(), pz.clone())
    };
    let rho0 = pair(&d.sigma0, &seeds.y0, &seeds.z0)?;
    let rho1 = pair(&d.sigma1, &y.leg1, &z.leg1)?;
    let rho2 = pair(&d.sigma2, &y.leg2, &z.leg2)?;
    let rho = pair(&d.sigma, &y.leg, &z.leg)?;
    let eta1 = TripleData::new(rho.clone(), rho1.clone(), d.eta1.clone(), y.up1.clone(), z.up1.clone())?;
    let eta2 = TripleData::new(rho.clone(), rho2.clone(), d.eta2.clone(), y.up2.clone(), z.up2.clone())?;
    let pi1 = TripleData::new(rho1.clone(), rho0.clone(), d.pi1.clone(), y.down1.clone(), z.down1.clone())?;
    let pi2 = TripleData::new(rho2.clone(), rho0.clone(), d.pi2.clone(), y.down2.clone(), z.down2.clone())?;
    for (name, t, case) in [
        ("eta1", &eta1, Bijectivity::S),
        ("eta2", &eta2, Bijectivity::U),
        ("pi1", &pi1, Bijectivity::U),
        ("pi2", &pi2, Bijectivity::S),
    ] {
        let label = if case == Bijectivity::S { "s" } else { "u" };
        let outcome = t.check_hypotheses(case);
        verdict(&mut verdicts, format!("triple {name} satisfies the {label}-bijective hypotheses"), outcome.is_ok());
        if let Err(Error::Hypothesis(msg)) = outcome {
            return Err(Error::Hypothesis(format!("triple {name}: {msg}")));
        }
        outcome?;
    }
    Ok(PullbackCube { rho, rho0, rho1, rho2, eta1, eta2, pi1, pi2, verdicts })
}

/// Composes degree by degree where both maps are present; a degree missing from either
/// factor has a zero group in the middle, so the composite is zero and is left out.
fn compose_present(inner: &BTreeMap<i64, LimitHom>, outer: &BTreeMap<i64, LimitHom>) -> Result<BTreeMap<i64, LimitHom>> {
    let mut out = BTreeMap::new();
    for (n, f) in inner {
        if let Some(g) = outer.get(n) {
            out.insert(*n, hom_compose(g, f)?);
        }
    }
    Ok(out)
}

/// `η1^s∘η2^{s*}` and `π1^{s*}∘π2^s` on `H^s_N(ρ2) → H^s_N(ρ1)` for every degree either side reaches.
pub fn cube_homology_identity(cube: &PullbackCube, settings: &Settings) -> Result<BTreeMap<i64, Composites>> {
    let ind = |t: &TripleData, k: Kind| induced_on_homology(t, k, settings.caps, settings.level_window);
    let e2 = ind(&cube.eta2, Kind::SStar)?;
    let e1 = ind(&cube.eta1, Kind::S)?;
    let p2 = ind(&cube.pi2, Kind::S)?;
    let p1 = ind(&cube.pi1, Kind::SStar)?;
    let left = compose_present(&e2.maps, &e1.maps)?;
    let right = compose_present(&p2.maps, &p1.maps)?;
    let mut degrees: Vec<i64> = left.keys().chain(right.keys()).copied().collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = BTreeMap::new();
    for n in degrees {
        let (l, r) = match (left.get(&n), right.get(&n)) {
            (Some(l), Some(r)) => (l.clone(), r.clone()),
            (Some(l), None) => (l.clone(), LimitHom::zero(&l.source, &l.target)),
            (None, Some(r)) => (LimitHom::zero(&r.source, &r.target), r.clone()),
            (None, None) => continue,
        };
        out.insert(n, Composites { side: Side::S, left: l, right: r });
    }
    Ok(out)
}

/// The square of grids `Σ_{L,M}` over the cube, one [`SquareDiagram`] per cell present at all four corners.
pub fn build_sigma_cube(cube: &PullbackCube, settings: &Settings) -> Result<BTreeMap<(usize, usize), SquareCheck>> {
    let grid = |p: &SftPair| build_sigma(&SUPair::Sft(p.clone()), settings.caps);
    let (g, g0, g1, g2) = (grid(&cube.rho)?, grid(&cube.rho0)?, grid(&cube.rho1)?, grid(&cube.rho2)?);
    let e1 = cell_maps(&cube.eta1, &g, &g1)?;
    let e2 = cell_maps(&cube.eta2, &g, &g2)?;
    let p1 = cell_maps(&cube.pi1, &g1, &g0)?;
    let p2 = cell_maps(&cube.pi2, &g2, &g0)?;
    let mut out = BTreeMap::new();
    for (key, a) in &e1 {
        let (Some(b), Some(c), Some(dd)) = (e2.get(key), p1.get(key), p2.get(key)) else { continue };
        let square = SquareDiagram::new(a.clone(), b.clone(), c.clone(), dd.clone())
            .map_err(|e| Error::Invariant(format!("cell {key:?} square: {e}")))?;
        out.insert(*key, check_square(&square, settings.period_cap)?);
    }
    Ok(out)
}

pub fn cube_report(d: &SquareDiagram, seeds: &CubeSeeds, settings: &Settings) -> Result<Report> {
    let mut r = Report::new();
    let cube = match build_pullback_cube(d, seeds) {
        Ok(c) => c,
        Err(Error::Hypothesis(msg)) => {
            r.hypothesis("cube_constructible", false);
            r.conclude("failure", msg);
            r.passed = false;
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    r.hypothesis("cube_constructible", true);
    for v in &cube.verdicts {
        r.hypothesis(&v.claim, v.holds);
    }
    let cells = build_sigma_cube(&cube, settings)?;
    let mut all = true;
    for ((l, m), check) in &cells {
        let ok = check.hypotheses_hold();
        all &= ok;
        r.conclude(&format!("cell ({l},{m}) square is a conjugacy square"), ok);
        if !ok {
            r.witness(serde_json::json!({ "cell": [l, m], "check": check }));
        }
    }
    if cells.is_empty() {
        r.witness("no grid cell is present at all four corners; the cell check is vacuous");
    }
    r.conclude("all_cells_pass", all);
    r.passed = all;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::hom_equal;
    use crate::fixtures;

    #[test]
    fn identity_square_collapses() {
        let h = fixtures::sigma_h();
        let id = BlockCode::identity(&h);
        let d = SquareDiagram::new(id.clone(), id.clone(), id.clone(), id).unwrap();
        let cube = build_pullback_cube(&d, &CubeSeeds::identity(&h)).unwrap();
        assert!(cube.verdicts.iter().all(|v| v.holds));
        assert_eq!(cube.rho.y.graph().n_vertices(), 1);
        let per_degree = cube_homology_identity(&cube, &Settings::default()).unwrap();
        assert!(per_degree.values().all(|c| c.equal().unwrap()));
        assert!(build_sigma_cube(&cube, &Settings::default()).unwrap().values().all(SquareCheck::hypotheses_hold));
    }

    #[test]
    fn completed_square_cube() {
        let h = fixtures::sigma_h();
        let d = SquareDiagram::fibre_completed(BlockCode::identity(&h), fixtures::pi()).unwrap();
        let cube = build_pullback_cube(&d, &CubeSeeds::identity(&h)).unwrap();
        assert!(cube.verdicts.iter().all(|v| v.holds));
        let per_degree = cube_homology_identity(&cube, &Settings::default()).unwrap();
        let h0 = &per_degree[&0];
        assert!(hom_equal(&h0.left, &h0.right).unwrap());
        let cells = build_sigma_cube(&cube, &Settings::default()).unwrap();
        assert!(cells[&(0, 0)].product_conjugacy);
    }
}
