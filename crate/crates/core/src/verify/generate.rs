use rand::seq::SliceRandom;
use rand::Rng;

use super::cube::CubeSeeds;
use super::square::SquareDiagram;
use crate::error::Result;
use crate::graph_core::{Graph, GraphHom};
use crate::sft::{BlockCode, Sft};

/// An irreducible graph: a directed cycle through every vertex plus random extra edges.
pub fn random_irreducible_graph<R: Rng>(rng: &mut R, n_vertices: usize, n_edges: usize) -> Graph {
    assert!(n_vertices >= 1 && n_edges >= n_vertices, "need at least one edge per vertex");
    let mut edges: Vec<(String, usize, usize)> =
        (0..n_vertices).map(|v| (format!("e{v}"), v, (v + 1) % n_vertices)).collect();
    for k in n_vertices..n_edges {
        edges.push((format!("e{k}"), rng.gen_range(0..n_vertices), rng.gen_range(0..n_vertices)));
    }
    let names = (0..n_vertices).map(|v| format!("v{v}")).collect();
    Graph::from_parts(names, edges).expect("generated graph is well formed")
}

/// Which local bijection the generated cover has.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// In-edges at each lifted vertex biject onto the in-edges below: s-bijective.
    In,
    /// Out-edges biject: u-bijective.
    Out,
    /// Constant fibre size with a permutation per edge: both.
    Both,
}

/// A 1-block cover of `base` built by duplicating each vertex into a fibre of size up to `max_fibre`.
/// Returns `None` when the lifted graph is not irreducible.
pub fn random_cover<R: Rng>(rng: &mut R, base: &Sft, kind: CoverKind, max_fibre: usize, name: &str) -> Option<BlockCode> {
    let g = base.graph();
    let mut fibre: Vec<usize> = match kind {
        CoverKind::Both => vec![rng.gen_range(1..=max_fibre); g.n_vertices()],
        _ => (0..g.n_vertices()).map(|_| rng.gen_range(1..=max_fibre)).collect(),
    };
    if fibre.iter().all(|&k| k == 1) {
        match kind {
            CoverKind::Both => fibre.fill(max_fibre),
            _ => fibre[rng.gen_range(0..g.n_vertices())] = max_fibre,
        }
    }
    let mut offsets = vec![0; g.n_vertices()];
    for v in 1..g.n_vertices() {
        offsets[v] = offsets[v - 1] + fibre[v - 1];
    }
    let lift = |v: usize, k: usize| offsets[v] + k;
    let mut edges = Vec::new();
    let mut edge_map = Vec::new();
    for e in 0..g.n_edges() {
        let (u, v) = (g.i(e), g.t(e));
        let pairs: Vec<(usize, usize)> = match kind {
            CoverKind::In => (0..fibre[v]).map(|k| (rng.gen_range(0..fibre[u]), k)).collect(),
            CoverKind::Out => (0..fibre[u]).map(|k| (k, rng.gen_range(0..fibre[v]))).collect(),
            CoverKind::Both => {
                let mut perm: Vec<usize> = (0..fibre[v]).collect();
                perm.shuffle(rng);
                perm.into_iter().enumerate().collect()
            }
        };
        for (a, b) in pairs {
            edges.push((format!("{}.{}{}", g.edge_name(e), a, b), lift(u, a), lift(v, b)));
            edge_map.push(e);
        }
    }
    let mut vertex_map = Vec::new();
    let mut names = Vec::new();
    for v in 0..g.n_vertices() {
        for k in 0..fibre[v] {
            names.push(format!("{}.{k}", g.vertex_name(v)));
            vertex_map.push(v);
        }
    }
    let graph = Graph::from_parts(names, edges).expect("cover graph is well formed");
    let source = Sft::new(name, &graph);
    if !graph.is_essential() || !source.is_irreducible() {
        return None;
    }
    let hom = GraphHom::new(source.graph().clone(), g.clone(), vertex_map, edge_map).ok()?;
    BlockCode::from_hom(&source, base, &hom).ok()
}

/// Retries until an irreducible cover comes out, falling back to a copy of the base.
pub fn cover<R: Rng>(rng: &mut R, base: &Sft, kind: CoverKind, max_fibre: usize, name: &str) -> BlockCode {
    for _ in 0..200 {
        if let Some(c) = random_cover(rng, base, kind, max_fibre, name) {
            return c;
        }
    }
    random_cover(rng, base, kind, 1, name).expect("fibres of size one copy an irreducible base")
}

/// A random irreducible shift on up to `max_vertices` vertices and `max_edges` edges.
pub fn random_sft<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize, name: &str) -> Sft {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(n.max(2).min(max_edges)..=max_edges);
    Sft::new(name, &random_irreducible_graph(rng, n, m.max(n)))
}

/// A square with `π1` u-bijective and `π2` s-bijective covers of a random base, completed by the
/// fibre product, redrawn until every corner has at most `max_vertices` vertices.
pub fn random_completed_square<R: Rng>(rng: &mut R, max_base_vertices: usize, max_base_edges: usize, max_vertices: usize) -> Result<SquareDiagram> {
    loop {
        let base = random_sft(rng, max_base_vertices, max_base_edges, "S0");
        let pi1 = cover(rng, &base, CoverKind::Out, 2, "S1");
        let pi2 = cover(rng, &base, CoverKind::In, 2, "S2");
        let d = SquareDiagram::fibre_completed(pi1, pi2)?;
        if [&d.sigma, &d.sigma1, &d.sigma2, &d.sigma0].iter().all(|s| s.graph().n_vertices() <= max_vertices) {
            return Ok(d);
        }
    }
}

/// Seeds for the bottom corner of a cube: permutation covers of `sigma0`, so both are s- and
/// u-bijective. One-sided covers make the fibre products of the cube wandering.
pub fn random_seeds<R: Rng>(rng: &mut R, sigma0: &Sft) -> CubeSeeds {
    CubeSeeds { y0: cover(rng, sigma0, CoverKind::Both, 2, "Y0"), z0: cover(rng, sigma0, CoverKind::Both, 2, "Z0") }
}

/// Composable `c1 : A → B`, `c2 : B → C`, both s- and u-bijective, optionally followed by a shift power.
pub fn random_composable_pair<R: Rng>(rng: &mut R) -> Result<(BlockCode, BlockCode)> {
    let c = random_sft(rng, 2, 4, "C");
    let c2 = cover(rng, &c, CoverKind::Both, 2, "B");
    let b = c2.source().clone();
    let mut c1 = cover(rng, &b, CoverKind::Both, 2, "A");
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(-1..=1);
        c1 = BlockCode::shift_power(c1.source(), k).then(&c1)?;
    }
    let c2 = if rng.gen_bool(0.5) { c2.then(&BlockCode::shift_power(&c, rng.gen_range(-1..=1)))? } else { c2 };
    Ok((c1, c2))
}

/// A random block code between small graphs: a table with window `window` and the given memory.
/// Returns `None` when the random table is not a legal code.
pub fn random_code<R: Rng>(rng: &mut R, source: &Sft, target: &Sft, window: usize, memory: i64) -> Option<BlockCode> {
    let tg = target.graph().clone();
    let words = source.graph().paths(window);
    let mut table = std::collections::HashMap::new();
    for w in &words {
        table.insert(w.clone(), rng.gen_range(0..tg.n_edges()));
    }
    BlockCode::from_fn(source, target, window, memory, |p| Ok(table[p])).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{is_s_bijective, is_u_bijective};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn covers_have_their_bijectivity() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let base = random_sft(&mut rng, 3, 5, "S0");
            assert!(is_s_bijective(&cover(&mut rng, &base, CoverKind::In, 2, "A")).unwrap());
            assert!(is_u_bijective(&cover(&mut rng, &base, CoverKind::Out, 2, "A")).unwrap());
            let both = cover(&mut rng, &base, CoverKind::Both, 2, "A");
            assert!(is_s_bijective(&both).unwrap() && is_u_bijective(&both).unwrap());
        }
    }

    #[test]
    fn completed_squares_commute() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..5 {
            let d = random_completed_square(&mut rng, 3, 5, 6).unwrap();
            assert!(d.commutes());
        }
    }
}
