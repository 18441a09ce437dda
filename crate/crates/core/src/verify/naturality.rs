use std::collections::BTreeMap;

use super::report::{Report, Settings};
use crate::complex::{compose_maps, induced_on_homology, maps_equal, product_verdict, Bijectivity, HomologyMap, SftPair, TripleData};
use crate::dimension::{rational_matrix, rational_to_string, Kind, QMatrix};
use crate::error::{Error, Result};
use crate::sft::{code_equal, fibre_product, is_conjugacy, is_s_bijective, is_u_bijective, BlockCode};

/// A triple over `eta_x` whose extra conjugacy hypothesis holds by construction.
///
/// Direction `S`: `Y' = Y = X` with `η_Y = id`, and `Z = fib(seed, η_X)` with `η_Z` its projection to `Z'`.
/// Direction `U` is the mirror image. `seed` is the pair leg over `X'` on the fibred side,
/// `Z' → X'` (u-bijective) for `S` and `Y' → X'` (s-bijective) for `U`; the identity by default.
pub fn construct_compatible_pairs(eta_x: &BlockCode, direction: Bijectivity, seed: Option<&BlockCode>) -> Result<TripleData> {
    let x = eta_x.source().clone();
    let xp = eta_x.target().clone();
    let seed = seed.cloned().unwrap_or_else(|| BlockCode::identity(&xp));
    if seed.target() != &xp {
        return Err(Error::Input(format!("seed must map onto {}", xp.name())));
    }
    let id_x = BlockCode::identity(&x);
    match direction {
        Bijectivity::S => {
            if !is_s_bijective(eta_x)? {
                return Err(Error::Hypothesis("eta_X is not s-bijective".into()));
            }
            let (space, to_seed, to_x) = fibre_product(&seed, eta_x)?;
            let pair_prime = SftPair::new(xp, x.clone(), seed.source().clone(), eta_x.clone(), seed)?;
            let pair = SftPair::new(x.clone(), x.clone(), space.sft.clone(), id_x.clone(), to_x)?;
            TripleData::new(pair, pair_prime, eta_x.clone(), id_x, to_seed)
        }
        Bijectivity::U => {
            if !is_u_bijective(eta_x)? {
                return Err(Error::Hypothesis("eta_X is not u-bijective".into()));
            }
            let (space, to_seed, to_x) = fibre_product(&seed, eta_x)?;
            let pair_prime = SftPair::new(xp, seed.source().clone(), x.clone(), seed, eta_x.clone())?;
            let pair = SftPair::new(x.clone(), space.sft.clone(), x.clone(), to_x, id_x.clone())?;
            TripleData::new(pair, pair_prime, eta_x.clone(), to_seed, id_x)
        }
    }
}

/// Rational matrices of a family of homology maps, with zero matrices where a degree is absent.
struct RationalFamily {
    maps: BTreeMap<i64, QMatrix>,
    source: BTreeMap<i64, usize>,
    target: BTreeMap<i64, usize>,
}

impl RationalFamily {
    fn of(hm: &HomologyMap, degrees: &[i64]) -> Result<Self> {
        let mut maps = BTreeMap::new();
        let mut source = BTreeMap::new();
        let mut target = BTreeMap::new();
        for &n in degrees {
            let (s, t) = (hm.source.dim_q(n), hm.target.dim_q(n));
            let m = match hm.maps.get(&n) {
                Some(f) => rational_matrix(f)?,
                None => QMatrix::zeros(t, s),
            };
            maps.insert(n, m);
            source.insert(n, s);
            target.insert(n, t);
        }
        Ok(RationalFamily { maps, source, target })
    }

    fn inverse(&self, what: &str) -> Result<BTreeMap<i64, QMatrix>> {
        self.maps
            .iter()
            .map(|(&n, m)| {
                m.inverse()
                    .map(|inv| (n, inv))
                    .ok_or_else(|| Error::Invariant(format!("{what} is not invertible on rational homology in degree {n}")))
            })
            .collect()
    }
}

fn degree_union(maps: &[&HomologyMap]) -> Vec<i64> {
    let mut out: Vec<i64> = maps
        .iter()
        .flat_map(|hm| hm.source.degrees.iter().chain(&hm.target.degrees).map(|d| d.degree))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The comparison isomorphism `H^s(p) → H^s(q)` between homologies of two pairs over the same space,
/// through `Z ×_X Z̃` on the u side and then `Y ×_X Ỹ` on the s side. Rational, per degree.
fn theta(p: &SftPair, q: &SftPair, degrees: &[i64], settings: &Settings) -> Result<BTreeMap<i64, QMatrix>> {
    if p.x != q.x {
        return Err(Error::Input("comparison needs two pairs over the same space".into()));
    }
    let ind = |t: &TripleData, k: Kind| induced_on_homology(t, k, settings.caps, settings.level_window);
    let id_x = BlockCode::identity(&p.x);
    let id_y = BlockCode::identity(&p.y);
    let (zz, to_z, to_zt) = fibre_product(&p.pi_u, &q.pi_u)?;
    let fibred_z = SftPair::new(p.x.clone(), p.y.clone(), zz.sft.clone(), p.pi_s.clone(), to_z.then(&p.pi_u)?)?;
    let middle = SftPair::new(p.x.clone(), p.y.clone(), q.z.clone(), p.pi_s.clone(), q.pi_u.clone())?;
    let a1 = TripleData::new(fibred_z.clone(), p.clone(), id_x.clone(), id_y.clone(), to_z)?;
    let a2 = TripleData::new(fibred_z, middle.clone(), id_x.clone(), id_y, to_zt)?;
    let (yy, to_y, to_yt) = fibre_product(&p.pi_s, &q.pi_s)?;
    let fibred_y = SftPair::new(p.x.clone(), yy.sft.clone(), q.z.clone(), to_y.then(&p.pi_s)?, q.pi_u.clone())?;
    let id_z = BlockCode::identity(&q.z);
    let b1 = TripleData::new(fibred_y.clone(), middle, id_x.clone(), to_y, id_z.clone())?;
    let b2 = TripleData::new(fibred_y, q.clone(), id_x, to_yt, id_z)?;
    let a1 = RationalFamily::of(&ind(&a1, Kind::SStar)?, degrees)?;
    let a2 = RationalFamily::of(&ind(&a2, Kind::SStar)?, degrees)?.inverse("the u-side comparison map")?;
    let b1 = RationalFamily::of(&ind(&b1, Kind::S)?, degrees)?.inverse("the s-side comparison map")?;
    let b2 = RationalFamily::of(&ind(&b2, Kind::S)?, degrees)?;
    Ok(degrees.iter().map(|n| (*n, b2.maps[n].mul(&b1[n]).mul(&a2[n]).mul(&a1.maps[n]))).collect())
}

fn qmatrix_json(m: &QMatrix) -> serde_json::Value {
    serde_json::to_value(m).expect("matrix serializes")
}

/// Checks `Θ'∘η^s = η̃^s∘Θ` on rational homology for two triples over the same `η_X`.
/// `kind` is `S` or `U`; the u case runs on the time reversal.
pub fn verify_theta_naturality(t1: &TripleData, t2: &TripleData, kind: Kind, settings: &Settings) -> Result<Report> {
    if !matches!(kind, Kind::S | Kind::U) {
        return Err(Error::Input("naturality is checked for the covariant kinds s and u".into()));
    }
    if !code_equal(&t1.eta_x, &t2.eta_x) {
        return Err(Error::Input("the two triples must share eta_X".into()));
    }
    let mut r = Report::new();
    let case = Bijectivity::of(kind);
    let checks = [("triple_1", t1.check_hypotheses(case)), ("triple_2", t2.check_hypotheses(case))];
    let mut constructible = true;
    for (name, outcome) in &checks {
        match outcome {
            Ok(()) => r.hypothesis(name, "ok"),
            Err(Error::Hypothesis(msg)) => {
                constructible = false;
                r.hypothesis(name, msg.as_str());
            }
            Err(e) => return Err(e.clone()),
        }
    }
    r.conclude("theta_constructible", constructible);
    if !constructible {
        r.conclude("holds", false);
        r.passed = false;
        return Ok(r);
    }
    let (t1, t2) = if kind == Kind::U { (t1.reversed(), t2.reversed()) } else { (t1.clone(), t2.clone()) };
    let eta = induced_on_homology(&t1, Kind::S, settings.caps, settings.level_window)?;
    let eta_t = induced_on_homology(&t2, Kind::S, settings.caps, settings.level_window)?;
    let degrees = degree_union(&[&eta, &eta_t]);
    let eta_q = RationalFamily::of(&eta, &degrees)?;
    let eta_tq = RationalFamily::of(&eta_t, &degrees)?;
    let theta_src = theta(&t1.pair, &t2.pair, &degrees, settings)?;
    let theta_tgt = theta(&t1.pair_prime, &t2.pair_prime, &degrees, settings)?;
    let mut holds = true;
    let mut table = BTreeMap::new();
    for n in &degrees {
        let left = theta_tgt[n].mul(&eta_q.maps[n]);
        let right = eta_tq.maps[n].mul(&theta_src[n]);
        let eq = left == right;
        holds &= eq;
        table.insert(n.to_string(), eq);
        r.witness(serde_json::json!({
            "degree": n,
            "dimQ_source": eta_q.source[n],
            "dimQ_target": eta_tq.target[n],
            "theta_prime_after_eta": qmatrix_json(&left),
            "eta_tilde_after_theta": qmatrix_json(&right),
        }));
    }
    r.conclude("naturality_per_degree", table);
    r.conclude("holds", holds);
    r.passed = holds;
    Ok(r)
}

/// Conjugacy checks for an automorphism triple, `(α^n)^s = (α^s)^n` for `n ≤ n_max`,
/// and a diagnostic table of homology traces beside the periodic point counts of `X`.
pub fn automorphism_suite(pair: &SftPair, alpha: &TripleData, n_max: u32, settings: &Settings) -> Result<Report> {
    let same = |a: &SftPair| a.x == pair.x && a.y == pair.y && a.z == pair.z;
    if !same(&alpha.pair) || !same(&alpha.pair_prime) {
        return Err(Error::Input("automorphism triple must map the pair to itself".into()));
    }
    for (name, c) in [("alpha_X", &alpha.eta_x), ("alpha_Y", &alpha.eta_y), ("alpha_Z", &alpha.eta_z)] {
        if !is_conjugacy(c) {
            return Err(Error::Input(format!("{name} is not a conjugacy")));
        }
    }
    let mut r = Report::new();
    let mut passed = true;
    for case in [Bijectivity::S, Bijectivity::U] {
        let v = product_verdict(alpha, case)?;
        r.hypothesis(&format!("{} is a conjugacy", v.name), v.is_conjugacy());
        passed &= v.is_conjugacy();
    }
    if !passed {
        r.passed = false;
        return Ok(r);
    }
    let ind = |t: &TripleData| induced_on_homology(t, Kind::S, settings.caps, settings.level_window);
    let alpha_s = ind(alpha)?;
    let mut power_code = alpha.clone();
    let mut power_map = alpha_s.maps.clone();
    let mut powers = BTreeMap::new();
    for n in 1..=n_max {
        if n > 1 {
            power_code = power_code.then(alpha)?;
            power_map = compose_maps(&power_map, &alpha_s.maps)?;
        }
        let eq = maps_equal(&ind(&power_code)?.maps, &power_map)?;
        passed &= eq;
        powers.insert(n.to_string(), eq);
    }
    r.conclude("power_of_induced_equals_induced_of_power", powers);
    let degrees: Vec<i64> = alpha_s.source.degrees.iter().map(|d| d.degree).collect();
    let family = RationalFamily::of(&alpha_s, &degrees)?;
    let a = pair.x.graph().adjacency_matrix();
    for n in 1..=n_max {
        let traces: BTreeMap<String, String> = family
            .maps
            .iter()
            .map(|(deg, m)| (deg.to_string(), rational_to_string(&m.pow(n).trace())))
            .collect();
        r.witness(serde_json::json!({
            "n": n,
            "periodic_points": a.pow(n).trace().to_string(),
            "homology_traces": traces,
        }));
    }
    r.conclude("holds", passed);
    r.passed = passed;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn compatible_pairs_over_pi() {
        for dir in [Bijectivity::S, Bijectivity::U] {
            let t = construct_compatible_pairs(&fixtures::pi(), dir, None).unwrap();
            t.check_hypotheses(dir).unwrap();
        }
        let id = BlockCode::identity(&fixtures::sigma_h());
        let t = construct_compatible_pairs(&id, Bijectivity::S, None).unwrap();
        assert!(is_conjugacy(&t.eta_z) && is_conjugacy(&t.eta_y));
    }

    #[test]
    fn naturality_with_different_seeds() {
        let pi = fixtures::pi();
        let t1 = construct_compatible_pairs(&pi, Bijectivity::S, None).unwrap();
        let t2 = construct_compatible_pairs(&pi, Bijectivity::S, Some(&pi)).unwrap();
        let r = verify_theta_naturality(&t1, &t2, Kind::S, &Settings::default()).unwrap();
        assert!(r.passed, "{r:?}");
        let same = verify_theta_naturality(&t1, &t1, Kind::S, &Settings::default()).unwrap();
        assert!(same.passed);
    }

    #[test]
    fn mismatched_triple_blocks_theta() {
        let h = fixtures::sigma_h();
        let g = fixtures::sigma_g();
        let pi = fixtures::pi();
        let p = SftPair::new(h.clone(), h.clone(), g, BlockCode::identity(&h), pi.clone()).unwrap();
        let bad = TripleData::new(p, SftPair::trivial(&h), BlockCode::identity(&h), BlockCode::identity(&h), pi).unwrap();
        let good = TripleData::identity(&SftPair::trivial(&h));
        let r = verify_theta_naturality(&bad, &good, Kind::S, &Settings::default()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.conclusion["theta_constructible"], serde_json::json!(false));
        assert_eq!(r.hypotheses["triple_1"], serde_json::json!("pi_u x eta_Z is not one-to-one"));
    }

    #[test]
    fn shift_automorphism_suite() {
        let h = fixtures::sigma_h();
        let p = SftPair::trivial(&h);
        let s = BlockCode::shift_power(&h, 1);
        let alpha = TripleData::new(p.clone(), p.clone(), s.clone(), s.clone(), s).unwrap();
        let r = automorphism_suite(&p, &alpha, 3, &Settings::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.witnesses[0]["periodic_points"], serde_json::json!("2"));
        assert_eq!(r.witnesses[0]["homology_traces"]["0"], serde_json::json!("1/2"));
    }
}
