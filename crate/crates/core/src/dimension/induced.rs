use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::group::{dimension_group, LimitHom, Side};
use crate::error::{Error, Result};
use crate::graph_core::IntMatrix;
use crate::sft::{is_s_bijective, is_u_bijective, BlockCode};

/// The four constructions: covariant `s`, `u` and contravariant `s_star`, `u_star`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    S,
    U,
    SStar,
    UStar,
}

impl Kind {
    pub fn side(self) -> Side {
        match self {
            Kind::S | Kind::SStar => Side::S,
            Kind::U | Kind::UStar => Side::U,
        }
    }

    /// `s` and `u_star` need s-bijectivity; `u` and `s_star` need u-bijectivity.
    pub fn needs_s_bijective(self) -> bool {
        matches!(self, Kind::S | Kind::UStar)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::S => "s",
            Kind::U => "u",
            Kind::SStar => "s_star",
            Kind::UStar => "u_star",
        }
    }
}

/// Each higher-block vertex q over θ(q) receives exactly one edge over each edge into θ(q).
pub fn is_in_bijective(c: &BlockCode) -> bool {
    star_bijective(c, true)
}

pub fn is_out_bijective(c: &BlockCode) -> bool {
    star_bijective(c, false)
}

fn star_bijective(c: &BlockCode, incoming: bool) -> bool {
    let ob = c.one_block();
    let bg = &ob.block.graph;
    let tg = c.target().graph();
    (0..bg.n_vertices()).all(|q| {
        let (src, tgt) = if incoming {
            (bg.in_edges(q), tg.in_edges(ob.vertex_map[q]))
        } else {
            (bg.out_edges(q), tg.out_edges(ob.vertex_map[q]))
        };
        if src.len() != tgt.len() {
            return false;
        }
        let mut images: Vec<usize> = src.iter().map(|&e| ob.edge_map[e]).collect();
        images.sort_unstable();
        let mut expected = tgt.to_vec();
        expected.sort_unstable();
        images == expected
    })
}

/// Searches widened-then-tightened windows for a form that is in-bijective (`incoming`)
/// or out-bijective on its higher block presentation.
pub fn bijective_form(c: &BlockCode, incoming: bool, recoding_cap: usize) -> Result<BlockCode> {
    for r in 0..=recoding_cap {
        let wide = c.extended(r);
        for front_first in [true, false] {
            let cand = wide.tightened(front_first);
            if star_bijective(&cand, incoming) {
                return Ok(cand);
            }
        }
    }
    Err(Error::CapExceeded(format!(
        "no {}-bijective recoding of {} -> {} within recoding cap {recoding_cap}; raise recoding cap",
        if incoming { "in" } else { "out" },
        c.source().name(),
        c.target().name()
    )))
}

/// Induced map on dimension groups, after checking the bijectivity precondition.
pub fn induced_map(c: &BlockCode, kind: Kind, recoding_cap: usize) -> Result<LimitHom> {
    let ok = if kind.needs_s_bijective() { is_s_bijective(c)? } else { is_u_bijective(c)? };
    if !ok {
        return Err(Error::Hypothesis(format!(
            "induced map of kind {} needs a {}-bijective code; {} -> {} is not",
            kind.as_str(),
            if kind.needs_s_bijective() { "s" } else { "u" },
            c.source().name(),
            c.target().name()
        )));
    }
    induced_map_unchecked(c, kind, recoding_cap)
}

/// Induced map without the bijectivity precondition check; the intertwining identity is still verified.
pub fn induced_map_unchecked(c: &BlockCode, kind: Kind, recoding_cap: usize) -> Result<LimitHom> {
    let incoming = kind.needs_s_bijective();
    let form = bijective_form(c, incoming, recoding_cap)?;
    let (matrix, shift) = vertex_count_matrix(&form, incoming);
    let src = dimension_group(c.source(), kind.side());
    let tgt = dimension_group(c.target(), kind.side());
    match kind {
        Kind::S | Kind::U => LimitHom::new(src, tgt, matrix, shift),
        Kind::SStar | Kind::UStar => LimitHom::new(tgt, src, matrix.transpose(), shift),
    }
}

/// `M[x][v]` counts higher-block vertices q with θ(q) = x that end (in-bijective case)
/// or start at source vertex v, together with the level shift of the construction.
fn vertex_count_matrix(form: &BlockCode, incoming: bool) -> (IntMatrix, i64) {
    let ob = form.one_block();
    let sg = form.source().graph();
    let nt = form.target().graph().n_vertices();
    let mut m = IntMatrix::zeros(nt, sg.n_vertices());
    let one = BigInt::from(1);
    for (q, key) in ob.block.vertex_paths.iter().enumerate() {
        let v = if incoming { key.end(sg) } else { key.start };
        m.add_to(ob.vertex_map[q], v, &one);
    }
    let w = form.window() as i64;
    let shift = if incoming { (w - 1) - form.memory() } else { form.memory() };
    (m, shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::group::{hom_compose, hom_equal};
    use crate::fixtures;

    #[test]
    fn pi_induced_maps() {
        let pi = fixtures::pi();
        let s = induced_map(&pi, Kind::S, 8).unwrap();
        assert_eq!(s.matrix, IntMatrix::from_rows(&[vec![1, 1]]));
        assert_eq!(s.level_shift, 0);
        let ss = induced_map(&pi, Kind::SStar, 8).unwrap();
        assert_eq!(ss.matrix, IntMatrix::from_rows(&[vec![1], vec![1]]));
        let twice = hom_compose(&s, &ss).unwrap();
        assert!(hom_equal(&twice, &LimitHom::scalar(&s.target, 2)).unwrap());
        assert!(!hom_equal(&twice, &LimitHom::identity(&s.target)).unwrap());
        let other = hom_compose(&ss, &s).unwrap();
        assert!(hom_equal(&other, &LimitHom::scalar(&s.source, 2)).unwrap());
    }

    #[test]
    fn identity_and_shift() {
        let g = fixtures::sigma_g();
        for kind in [Kind::S, Kind::U, Kind::SStar, Kind::UStar] {
            let id = induced_map(&BlockCode::identity(&g), kind, 8).unwrap();
            assert_eq!(id.matrix, IntMatrix::identity(2));
            assert_eq!(id.level_shift, 0);
        }
        let sigma = BlockCode::shift_power(&g, 1);
        let s = induced_map(&sigma, Kind::S, 8).unwrap();
        let ss = induced_map(&sigma, Kind::SStar, 8).unwrap();
        let round = hom_compose(&s, &ss).unwrap();
        assert!(hom_equal(&round, &LimitHom::identity(&s.source)).unwrap());
    }

    #[test]
    fn one_sided_block_map_needs_recoding() {
        // (x_n, x_{n+1}) ↦ x_{n+1} from H(2) written as a 1-block code on the 2-block presentation.
        let h = fixtures::sigma_h();
        let (hb, _) = crate::graph_core::higher_block(h.graph(), 2, crate::graph_core::BlockEnd::Initial).unwrap();
        let h2 = crate::sft::Sft::new("H2", &hb.graph);
        let second = BlockCode::from_fn(&h2, &h, 1, 0, |p| Ok(hb.edge_paths[p[0]][1])).unwrap();
        let s = induced_map(&second, Kind::S, 8).unwrap();
        let u = induced_map(&second, Kind::U, 8).unwrap();
        assert_eq!(s.source.rank, 2);
        assert_eq!(u.source.rank, 2);
        assert!(induced_map(&second, Kind::S, 0).is_err() || is_in_bijective(&second));
    }
}
