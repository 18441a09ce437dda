use std::collections::BTreeMap;

use serde::Serialize;

use super::cube::{build_pullback_cube, cube_homology_identity, CubeSeeds};
use super::report::{hom_json, Report, Settings};
use crate::dimension::{hom_compose, hom_equal, induced_map_unchecked, Kind, LimitHom, Side};
use crate::error::{Error, Result};
use crate::sft::{
    code_equal, constant_fibre_size, fibre_product, is_injective, is_s_bijective, is_surjective, is_u_bijective,
    singleton_fibre, BlockCode, Sft, TupleSpace,
};

/// `π1∘η1 = π2∘η2` from `Σ` through `Σ1` and `Σ2` down to `Σ0`.
#[derive(Clone, Debug)]
pub struct SquareDiagram {
    pub sigma: Sft,
    pub sigma1: Sft,
    pub sigma2: Sft,
    pub sigma0: Sft,
    pub eta1: BlockCode,
    pub eta2: BlockCode,
    pub pi1: BlockCode,
    pub pi2: BlockCode,
}

impl SquareDiagram {
    pub fn new(eta1: BlockCode, eta2: BlockCode, pi1: BlockCode, pi2: BlockCode) -> Result<Self> {
        let d = SquareDiagram {
            sigma: eta1.source().clone(),
            sigma1: eta1.target().clone(),
            sigma2: eta2.target().clone(),
            sigma0: pi1.target().clone(),
            eta1,
            eta2,
            pi1,
            pi2,
        };
        let ends = [
            ("eta2", &d.eta2, &d.sigma, &d.sigma2),
            ("pi1", &d.pi1, &d.sigma1, &d.sigma0),
            ("pi2", &d.pi2, &d.sigma2, &d.sigma0),
        ];
        for (name, c, s, t) in ends {
            if c.source() != s || c.target() != t {
                return Err(Error::Input(format!("{name} does not map {} to {}", s.name(), t.name())));
            }
        }
        if !d.commutes() {
            return Err(Error::Input("square does not commute: pi1∘eta1 ≠ pi2∘eta2".into()));
        }
        Ok(d)
    }

    /// `Σ := fib(π2, π1)` with its two projections.
    pub fn fibre_completed(pi1: BlockCode, pi2: BlockCode) -> Result<Self> {
        let (_, to2, to1) = fibre_product(&pi2, &pi1)?;
        SquareDiagram::new(to1, to2, pi1, pi2)
    }

    pub fn commutes(&self) -> bool {
        match (self.eta1.then(&self.pi1), self.eta2.then(&self.pi2)) {
            (Ok(a), Ok(b)) => code_equal(&a, &b),
            _ => false,
        }
    }

    /// `η2 × η1 : Σ → fib(π2, π1)`.
    pub fn product_map(&self) -> Result<(TupleSpace, BlockCode)> {
        let (space, _, _) = fibre_product(&self.pi2, &self.pi1)?;
        let map = space.product_code(&self.sigma, &[self.eta2.clone(), self.eta1.clone()])?;
        Ok((space, map))
    }
}

fn bijective(c: &BlockCode, s_side: bool) -> Result<bool> {
    if s_side {
        is_s_bijective(c)
    } else {
        is_u_bijective(c)
    }
}

/// Verdicts on the hypotheses of the pullback identity for one square.
#[derive(Clone, Debug, Serialize)]
pub struct SquareCheck {
    pub commutes: bool,
    pub eta1_s_bijective: bool,
    pub pi2_s_bijective: bool,
    pub eta2_u_bijective: bool,
    pub pi1_u_bijective: bool,
    pub product_onto: bool,
    pub product_injective: bool,
    /// Fibre size of the product map, sampled over two periodic orbits, when it is onto.
    pub product_degree: Option<usize>,
    pub degree_note: Option<String>,
    pub product_conjugacy: bool,
    /// A periodic cycle of the fibre product with a single preimage, if one was found.
    pub singleton_fibre: Option<Vec<String>>,
    pub singleton_criterion: &'static str,
}

impl SquareCheck {
    pub fn hypotheses_hold(&self) -> bool {
        self.commutes
            && self.eta1_s_bijective
            && self.pi2_s_bijective
            && self.eta2_u_bijective
            && self.pi1_u_bijective
            && self.product_conjugacy
    }
}

pub fn check_square(d: &SquareDiagram, period_cap: usize) -> Result<SquareCheck> {
    let (space, map) = d.product_map()?;
    let product_onto = is_surjective(&map);
    let product_injective = is_injective(&map);
    let (product_degree, degree_note) = if product_onto {
        match constant_fibre_size(&map) {
            Ok(k) => (Some(k), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some("product map is not onto".into()))
    };
    let singleton = singleton_fibre(&map, period_cap);
    let product_conjugacy = product_onto && product_injective;
    let singleton_criterion = match (&singleton, product_onto) {
        (Some(_), true) if product_conjugacy => "singleton fibre found: conjugacy",
        (Some(_), true) => "singleton fibre found but the map is not injective: inconsistent",
        (Some(_), false) => "singleton fibre found but the map is not onto",
        (None, _) => "inconclusive: no singleton fibre up to the period cap",
    };
    Ok(SquareCheck {
        commutes: d.commutes(),
        eta1_s_bijective: bijective(&d.eta1, true)?,
        pi2_s_bijective: bijective(&d.pi2, true)?,
        eta2_u_bijective: bijective(&d.eta2, false)?,
        pi1_u_bijective: bijective(&d.pi1, false)?,
        product_onto,
        product_injective,
        product_degree,
        degree_note,
        product_conjugacy,
        singleton_fibre: singleton.map(|cyc| cyc.iter().map(|&e| space.sft.graph().edge_name(e).to_string()).collect()),
        singleton_criterion,
    })
}

pub fn square_report(d: &SquareDiagram, period_cap: usize) -> Result<Report> {
    let check = check_square(d, period_cap)?;
    let mut r = Report::new();
    r.hypothesis("commutes", check.commutes);
    r.hypothesis("eta1_s_bijective", check.eta1_s_bijective);
    r.hypothesis("pi2_s_bijective", check.pi2_s_bijective);
    r.hypothesis("eta2_u_bijective", check.eta2_u_bijective);
    r.hypothesis("pi1_u_bijective", check.pi1_u_bijective);
    r.conclude("product_onto", check.product_onto);
    r.conclude("product_injective", check.product_injective);
    r.conclude("product_degree", check.product_degree);
    r.conclude("product_conjugacy", check.product_conjugacy);
    r.conclude("singleton_criterion", check.singleton_criterion);
    if let Some(note) = &check.degree_note {
        r.witness(serde_json::json!({ "degree_note": note }));
    }
    if let Some(cyc) = &check.singleton_fibre {
        r.witness(serde_json::json!({ "singleton_fibre_cycle": join_names(cyc) }));
    }
    r.passed = check.hypotheses_hold();
    Ok(r)
}

fn join_names(names: &[String]) -> String {
    names.join(",")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Dimension,
    Homology,
}

/// Both sides of the identity on one side of the dimension groups.
#[derive(Clone, Debug)]
pub struct Composites {
    pub side: Side,
    pub left: LimitHom,
    pub right: LimitHom,
}

impl Composites {
    pub fn equal(&self) -> Result<bool> {
        hom_equal(&self.left, &self.right)
    }
}

/// s side: `η1^s∘η2^{s*}` and `π1^{s*}∘π2^s` from `D^s(Σ2)` to `D^s(Σ1)`.
/// u side: `η2^u∘η1^{u*}` and `π2^{u*}∘π1^u` from `D^u(Σ1)` to `D^u(Σ2)`.
pub fn dimension_composites(d: &SquareDiagram, side: Side, recoding_cap: usize) -> Result<Composites> {
    let ind = |c: &BlockCode, k: Kind| induced_map_unchecked(c, k, recoding_cap);
    let (left, right) = match side {
        Side::S => (
            hom_compose(&ind(&d.eta1, Kind::S)?, &ind(&d.eta2, Kind::SStar)?)?,
            hom_compose(&ind(&d.pi1, Kind::SStar)?, &ind(&d.pi2, Kind::S)?)?,
        ),
        Side::U => (
            hom_compose(&ind(&d.eta2, Kind::U)?, &ind(&d.eta1, Kind::UStar)?)?,
            hom_compose(&ind(&d.pi2, Kind::UStar)?, &ind(&d.pi1, Kind::U)?)?,
        ),
    };
    Ok(Composites { side, left, right })
}

/// Checks the pullback identity. Runs on squares that violate the hypotheses too; the report
/// then records the hypothesis failures alongside the computed composites.
pub fn verify_pullback_identity(d: &SquareDiagram, level: Level, settings: &Settings) -> Result<Report> {
    verify_pullback_identity_seeded(d, level, &CubeSeeds::identity(&d.sigma0), settings)
}

/// As [`verify_pullback_identity`], with the homology-level cube built from `seeds`.
pub fn verify_pullback_identity_seeded(d: &SquareDiagram, level: Level, seeds: &CubeSeeds, settings: &Settings) -> Result<Report> {
    let mut r = square_report(d, settings.period_cap)?;
    let hypotheses_hold = r.passed;
    r.conclusion.clear();
    r.witnesses.clear();
    r.hypothesis("product_conjugacy", check_square(d, settings.period_cap)?.product_conjugacy);
    r.conclude("level", level);
    let mut holds = true;
    match level {
        Level::Dimension => {
            for side in [Side::S, Side::U] {
                let key = format!("identity_{}", side.as_str());
                match dimension_composites(d, side, settings.caps.recoding) {
                    Ok(c) => {
                        let eq = c.equal()?;
                        holds &= eq;
                        r.conclude(&key, eq);
                        r.witness(serde_json::json!({
                            "side": side.as_str(),
                            "left": hom_json(&c.left)?,
                            "right": hom_json(&c.right)?,
                        }));
                    }
                    Err(e @ (Error::Hypothesis(_) | Error::CriterionInapplicable(_))) => {
                        holds = false;
                        r.conclude(&key, format!("not computable: {e}"));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Level::Homology => {
            let outcome = build_pullback_cube(d, seeds)
                .and_then(|cube| cube_homology_identity(&cube, settings));
            match outcome {
                Ok(per_degree) => {
                    let mut table = BTreeMap::new();
                    for (n, c) in &per_degree {
                        let eq = c.equal()?;
                        holds &= eq;
                        table.insert(n.to_string(), eq);
                        r.witness(serde_json::json!({
                            "degree": n,
                            "left": hom_json(&c.left)?,
                            "right": hom_json(&c.right)?,
                        }));
                    }
                    r.conclude("identity_per_degree", table);
                }
                Err(e @ (Error::Hypothesis(_) | Error::CriterionInapplicable(_))) => {
                    holds = false;
                    r.conclude("identity_per_degree", format!("not computable: {e}"));
                }
                Err(e) => return Err(e),
            }
        }
    }
    r.conclude("holds", holds);
    r.passed = hypotheses_hold && holds;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn square1() -> SquareDiagram {
        let h = fixtures::sigma_h();
        SquareDiagram::new(fixtures::pi(), fixtures::pi(), BlockCode::identity(&h), BlockCode::identity(&h)).unwrap()
    }

    fn square2() -> SquareDiagram {
        let g = fixtures::sigma_g();
        SquareDiagram::new(BlockCode::identity(&g), BlockCode::identity(&g), fixtures::pi(), fixtures::pi()).unwrap()
    }

    #[test]
    fn first_counterexample_square() {
        let c = check_square(&square1(), 6).unwrap();
        assert!(c.eta1_s_bijective && c.pi2_s_bijective && c.eta2_u_bijective && c.pi1_u_bijective);
        assert!(c.product_onto && !c.product_injective && !c.product_conjugacy);
        assert_eq!(c.product_degree, Some(2));
        let comp = dimension_composites(&square1(), Side::S, 8).unwrap();
        assert_eq!(crate::verify::describe_hom(&comp.left).unwrap(), "×2");
        assert_eq!(crate::verify::describe_hom(&comp.right).unwrap(), "id");
        assert!(!comp.equal().unwrap());
    }

    #[test]
    fn second_counterexample_square() {
        let c = check_square(&square2(), 6).unwrap();
        assert!(!c.product_onto && !c.product_conjugacy);
        let comp = dimension_composites(&square2(), Side::S, 8).unwrap();
        assert_eq!(crate::verify::describe_hom(&comp.left).unwrap(), "id");
        assert_eq!(crate::verify::describe_hom(&comp.right).unwrap(), "×2");
        let r = verify_pullback_identity(&square2(), Level::Dimension, &Settings::default()).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn completed_square_satisfies_identity() {
        let h = fixtures::sigma_h();
        let d = SquareDiagram::fibre_completed(BlockCode::identity(&h), fixtures::pi()).unwrap();
        let c = check_square(&d, 6).unwrap();
        assert!(c.hypotheses_hold());
        assert!(c.singleton_fibre.is_some());
        let r = verify_pullback_identity(&d, Level::Dimension, &Settings::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let g = fixtures::sigma_g();
        let h = fixtures::sigma_h();
        let shifted = BlockCode::shift_power(&g, 1).then(&fixtures::pi()).unwrap();
        let swap = BlockCode::from_fn(&h, &h, 1, 0, |p| Ok(1 - p[0])).unwrap();
        let twisted = fixtures::pi().then(&swap).unwrap();
        assert!(SquareDiagram::new(shifted, twisted, BlockCode::identity(&h), BlockCode::identity(&h)).is_err());
    }
}
