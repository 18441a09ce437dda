use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::pairs::PairGraph;
use super::shift::Sft;
use crate::error::{input, Error, Result};
use crate::graph_core::{GraphHom, HigherBlock};

/// A sliding block code `y_n = Φ(x_{n−m} … x_{n−m+w−1})` between edge shifts,
/// with window `w ≥ 1` and memory `m` (anticipation is `w − 1 − m`; either may be negative).
#[derive(Clone)]
pub struct BlockCode {
    inner: Arc<CodeData>,
}

struct CodeData {
    source: Sft,
    target: Sft,
    window: usize,
    memory: i64,
    table: HashMap<Vec<usize>, usize>,
    one_block: OnceLock<OneBlock>,
    pair_graph: OnceLock<PairGraph>,
}

/// The code as an edge-wise homomorphism out of the source's higher block presentation.
#[derive(Clone, Debug)]
pub struct OneBlock {
    pub block: HigherBlock,
    pub edge_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

impl OneBlock {
    pub fn hom(&self, target: &Sft) -> GraphHom {
        GraphHom::new(self.block.graph.clone(), target.graph().clone(), self.vertex_map.clone(), self.edge_map.clone())
            .expect("validated code yields a homomorphism")
    }
}

impl fmt::Debug for BlockCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockCode")
            .field("source", &self.source().name())
            .field("target", &self.target().name())
            .field("window", &self.window())
            .field("memory", &self.memory())
            .finish()
    }
}

impl BlockCode {
    /// Builds a code from its block function, evaluated on every legal source word of length `window`.
    pub fn from_fn(
        source: &Sft,
        target: &Sft,
        window: usize,
        memory: i64,
        mut f: impl FnMut(&[usize]) -> Result<usize>,
    ) -> Result<Self> {
        if window == 0 {
            return input("block code window must be positive");
        }
        let mut table = HashMap::new();
        for p in source.graph().paths(window) {
            let y = f(&p)?;
            if y >= target.graph().n_edges() {
                return input("block code maps to a missing target edge");
            }
            table.insert(p, y);
        }
        Self::from_table(source, target, window, memory, table)
    }

    /// Validates that consecutive outputs are consecutive target edges.
    pub fn from_table(
        source: &Sft,
        target: &Sft,
        window: usize,
        memory: i64,
        table: HashMap<Vec<usize>, usize>,
    ) -> Result<Self> {
        let sg = source.graph();
        let tg = target.graph();
        for p in sg.paths(window) {
            if !table.contains_key(&p) {
                return input(format!(
                    "block code has no value on source word {}",
                    crate::graph_core::join_edge_names(sg, &p)
                ));
            }
        }
        for p in sg.paths(window + 1) {
            let a = table[&p[..window]];
            let b = table[&p[1..]];
            if tg.t(a) != tg.i(b) {
                return input(format!(
                    "block code output is not a path: word {} gives {} then {}",
                    crate::graph_core::join_edge_names(sg, &p),
                    tg.edge_name(a),
                    tg.edge_name(b)
                ));
            }
        }
        if !source.is_empty() && target.is_empty() {
            return input("nonempty shift cannot map into the empty shift");
        }
        Ok(BlockCode {
            inner: Arc::new(CodeData {
                source: source.clone(),
                target: target.clone(),
                window,
                memory,
                table,
                one_block: OnceLock::new(),
                pair_graph: OnceLock::new(),
            }),
        })
    }

    /// A 1-block code from a homomorphism between (possibly untrimmed) presentations,
    /// matched to the shifts by edge name.
    pub fn from_hom(source: &Sft, target: &Sft, hom: &GraphHom) -> Result<Self> {
        let hs = hom.source();
        let ht = hom.target();
        Self::from_fn(source, target, 1, 0, |p| {
            let name = source.graph().edge_name(p[0]);
            let Some(e) = hs.find_edge(name) else {
                return input(format!("homomorphism does not define edge {name:?}"));
            };
            let image = ht.edge_name(hom.edge_map()[e]);
            target
                .graph()
                .find_edge(image)
                .ok_or_else(|| Error::Input(format!("image edge {image:?} is not in the target shift")))
        })
    }

    pub fn identity(s: &Sft) -> Self {
        Self::from_fn(s, s, 1, 0, |p| Ok(p[0])).expect("identity is a valid code")
    }

    /// `σ^k`: `y_n = x_{n+k}`.
    pub fn shift_power(s: &Sft, k: i64) -> Self {
        Self::from_fn(s, s, 1, -k, |p| Ok(p[0])).expect("shift is a valid code")
    }

    pub fn source(&self) -> &Sft {
        &self.inner.source
    }

    pub fn target(&self) -> &Sft {
        &self.inner.target
    }

    pub fn window(&self) -> usize {
        self.inner.window
    }

    pub fn memory(&self) -> i64 {
        self.inner.memory
    }

    pub fn anticipation(&self) -> i64 {
        self.inner.window as i64 - 1 - self.inner.memory
    }

    /// Which higher block presentation the 1-block form lives on (window − 1).
    pub fn recoding_level(&self) -> usize {
        self.inner.window - 1
    }

    /// Block function on a legal source word of length `window`.
    pub fn eval(&self, word: &[usize]) -> usize {
        self.inner.table[word]
    }

    pub fn try_eval(&self, word: &[usize]) -> Option<usize> {
        self.inner.table.get(word).copied()
    }

    /// Legal source words of length `window`, in deterministic order.
    pub fn words(&self) -> Vec<Vec<usize>> {
        self.source().graph().paths(self.window())
    }

    pub fn one_block(&self) -> &OneBlock {
        self.inner.one_block.get_or_init(|| {
            let sg = self.source().graph();
            let tg = self.target().graph();
            let block = HigherBlock::new(sg, self.window()).expect("positive window");
            let edge_map: Vec<usize> = block.edge_paths.iter().map(|p| self.eval(p)).collect();
            let vertex_map = (0..block.graph.n_vertices())
                .map(|q| {
                    let e = block.graph.in_edges(q)[0];
                    tg.t(edge_map[e])
                })
                .collect();
            OneBlock { block, edge_map, vertex_map }
        })
    }

    pub fn pair_graph(&self) -> &PairGraph {
        self.inner.pair_graph.get_or_init(|| PairGraph::build(self))
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &BlockCode) -> Result<BlockCode> {
        compose(outer, self)
    }

    /// Same map with the window widened by `r` on both sides.
    pub fn extended(&self, r: usize) -> BlockCode {
        if r == 0 {
            return self.clone();
        }
        let w = self.window();
        BlockCode::from_fn(self.source(), self.target(), w + 2 * r, self.memory() + r as i64, |p| {
            Ok(self.eval(&p[r..r + w]))
        })
        .expect("extension of a valid code is valid")
    }

    /// Drops the first window coordinate if the block function ignores it.
    pub fn drop_front(&self) -> Option<BlockCode> {
        let w = self.window();
        if w == 1 {
            return None;
        }
        let mut reduced: HashMap<Vec<usize>, usize> = HashMap::new();
        for (p, &y) in &self.inner.table {
            match reduced.insert(p[1..].to_vec(), y) {
                Some(prev) if prev != y => return None,
                _ => {}
            }
        }
        BlockCode::from_table(self.source(), self.target(), w - 1, self.memory() - 1, reduced).ok()
    }

    /// Drops the last window coordinate if the block function ignores it.
    pub fn drop_back(&self) -> Option<BlockCode> {
        let w = self.window();
        if w == 1 {
            return None;
        }
        let mut reduced: HashMap<Vec<usize>, usize> = HashMap::new();
        for (p, &y) in &self.inner.table {
            match reduced.insert(p[..w - 1].to_vec(), y) {
                Some(prev) if prev != y => return None,
                _ => {}
            }
        }
        BlockCode::from_table(self.source(), self.target(), w - 1, self.memory(), reduced).ok()
    }

    /// Greedy trimming of ignored coordinates, front first or back first.
    pub fn tightened(&self, front_first: bool) -> BlockCode {
        let mut c = self.clone();
        let mut phase = 0;
        while phase < 2 {
            let front = (phase == 0) == front_first;
            let next = if front { c.drop_front() } else { c.drop_back() };
            match next {
                Some(n) => c = n,
                None => phase += 1,
            }
        }
        c
    }

    /// The time-reversed code between the reversed shifts.
    pub fn reversed(&self) -> BlockCode {
        let src = self.source().reversed();
        let tgt = self.target().reversed();
        let w = self.window();
        let table = self
            .inner
            .table
            .iter()
            .map(|(p, &y)| (p.iter().rev().copied().collect::<Vec<_>>(), y))
            .collect();
        BlockCode::from_table(&src, &tgt, w, w as i64 - 1 - self.memory(), table).expect("reversal preserves validity")
    }

    /// Same map with source and target relabelled to structurally equal shifts.
    pub fn rebased(&self, source: &Sft, target: &Sft) -> Result<BlockCode> {
        if source != self.source() || target != self.target() {
            return input("rebase requires structurally equal shifts");
        }
        BlockCode::from_table(source, target, self.window(), self.memory(), self.inner.table.clone())
    }
}

/// A code rewritten as a 1-block code out of the source's higher block shift,
/// together with the conjugacies between the source and that shift.
#[derive(Clone, Debug)]
pub struct Recoding {
    pub block: Sft,
    pub code: BlockCode,
    pub encode: BlockCode,
    pub decode: BlockCode,
}

impl BlockCode {
    pub fn recoded(&self) -> Recoding {
        let ob = self.one_block();
        let w = self.window();
        let m = self.memory();
        let name = if w == 1 { self.source().name().to_string() } else { format!("{}[{w}]", self.source().name()) };
        let block = Sft::from_essential(name, ob.block.graph.clone());
        let code = BlockCode::from_fn(&block, self.target(), 1, 0, |p| Ok(ob.edge_map[p[0]])).expect("1-block form is valid");
        let encode = BlockCode::from_fn(self.source(), &block, w, m, |p| {
            ob.block.edge_of(p).ok_or_else(|| Error::Invariant("source word missing from its block presentation".into()))
        })
        .expect("block encoding is valid");
        // The block at index n + k starts at source index n + k − m; read source index n from it.
        let k = if (0..w as i64).contains(&m) { 0 } else { m };
        let idx = (m - k) as usize;
        let decode = BlockCode::from_fn(&block, self.source(), 1, -k, |p| Ok(ob.block.edge_paths[p[0]][idx]))
            .expect("block decoding is valid");
        Recoding { block, code, encode, decode }
    }
}

/// `c2 ∘ c1`.
pub fn compose(c2: &BlockCode, c1: &BlockCode) -> Result<BlockCode> {
    if c1.target() != c2.source() {
        return input(format!(
            "cannot compose: {} does not map into {}",
            c1.source().name(),
            c2.source().name()
        ));
    }
    let (w1, w2) = (c1.window(), c2.window());
    BlockCode::from_fn(c1.source(), c2.target(), w1 + w2 - 1, c1.memory() + c2.memory(), |p| {
        let mid: Vec<usize> = (0..w2).map(|j| c1.eval(&p[j..j + w1])).collect();
        Ok(c2.eval(&mid))
    })
}

/// Equality of the induced point maps, decided on a common window.
pub fn code_equal(a: &BlockCode, b: &BlockCode) -> bool {
    if a.source() != b.source() || a.target() != b.target() {
        return false;
    }
    let (la, lb) = (-a.memory(), -b.memory());
    let lo = la.min(lb);
    let hi = (la + a.window() as i64 - 1).max(lb + b.window() as i64 - 1);
    let len = (hi - lo + 1) as usize;
    a.source().graph().paths(len).iter().all(|p| {
        let sa = (la - lo) as usize;
        let sb = (lb - lo) as usize;
        a.eval(&p[sa..sa + a.window()]) == b.eval(&p[sb..sb + b.window()])
    })
}
