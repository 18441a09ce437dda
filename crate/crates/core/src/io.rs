//! JSON documents for graphs, codes, pairs, squares and triples.
//!
//! A reference to another document is either a file path, resolved against the directory of
//! the referring file, or the object itself inline. Syntax and type errors carry the line and
//! column reported by the parser; semantic errors carry the file and a JSON pointer.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::marker::PhantomData;
use std::path::{Path, PathBuf};

use serde::de::{self, DeserializeOwned, MapAccess, Visitor};
use serde::{Deserialize, Deserializer};
use serde_json::{json, Value};

use crate::complex::{PresentationGrid, PresentedCell, SUPair, SftPair, TripleData};
use crate::error::{Error, Result};
use crate::graph_core::{EdgeSpec, Graph, GraphHom};
use crate::sft::{BlockCode, Sft};
use crate::verify::SquareDiagram;

/// A file path or an inline document.
#[derive(Clone, Debug)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Ref<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RefVisitor<T>(PhantomData<T>);

        impl<'de, T: Deserialize<'de>> Visitor<'de> for RefVisitor<T> {
            type Value = Ref<T>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a file path or an inline object")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Ref<T>, E> {
                Ok(Ref::Path(v.to_string()))
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> std::result::Result<Ref<T>, A::Error> {
                T::deserialize(de::value::MapAccessDeserializer::new(map)).map(Ref::Inline)
            }
        }

        d.deserialize_any(RefVisitor(PhantomData))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHom {
    #[serde(default)]
    pub source: Option<Ref<RawGraph>>,
    #[serde(default)]
    pub target: Option<Ref<RawGraph>>,
    #[serde(default)]
    pub vertex_map: Option<BTreeMap<String, String>>,
    pub edge_map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCode {
    #[serde(default)]
    pub source: Option<Ref<RawGraph>>,
    #[serde(default)]
    pub target: Option<Ref<RawGraph>>,
    pub hom: Ref<RawHom>,
    #[serde(default)]
    pub memory: i64,
    #[serde(default)]
    pub anticipation: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCell {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub graph: Ref<RawGraph>,
    #[serde(default)]
    pub y_swaps: Vec<Ref<RawCode>>,
    #[serde(default)]
    pub z_swaps: Vec<Ref<RawCode>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDelta {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub index: usize,
    pub code: Ref<RawCode>,
}

/// Either mode of a pair document; exactly one set of keys may be present.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPair {
    #[serde(rename = "X", default)]
    pub x: Option<Ref<RawGraph>>,
    #[serde(rename = "Y", default)]
    pub y: Option<Ref<RawGraph>>,
    #[serde(rename = "Z", default)]
    pub z: Option<Ref<RawGraph>>,
    #[serde(default)]
    pub pi_s: Option<Ref<RawCode>>,
    #[serde(default)]
    pub pi_u: Option<Ref<RawCode>>,
    #[serde(default)]
    pub grid: Option<Vec<RawCell>>,
    #[serde(default)]
    pub delta_l: Vec<RawDelta>,
    #[serde(default)]
    pub delta_m: Vec<RawDelta>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSquare {
    #[serde(rename = "Sigma")]
    pub sigma: Ref<RawGraph>,
    #[serde(rename = "Sigma1")]
    pub sigma1: Ref<RawGraph>,
    #[serde(rename = "Sigma2")]
    pub sigma2: Ref<RawGraph>,
    #[serde(rename = "Sigma0")]
    pub sigma0: Ref<RawGraph>,
    pub eta1: Ref<RawCode>,
    pub eta2: Ref<RawCode>,
    pub pi1: Ref<RawCode>,
    pub pi2: Ref<RawCode>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTriple {
    pub pair: Ref<RawPair>,
    pub pair_prime: Ref<RawPair>,
    #[serde(rename = "eta_X")]
    pub eta_x: Ref<RawCode>,
    #[serde(rename = "eta_Y")]
    pub eta_y: Ref<RawCode>,
    #[serde(rename = "eta_Z")]
    pub eta_z: Ref<RawCode>,
}

/// Where a document came from: the file, and the JSON pointer of the value inside it.
#[derive(Clone, Debug)]
struct Origin {
    file: PathBuf,
    pointer: String,
}

impl Origin {
    fn at(&self, key: impl fmt::Display) -> Origin {
        Origin { file: self.file.clone(), pointer: format!("{}/{key}", self.pointer) }
    }

    fn error(&self, msg: impl fmt::Display) -> Error {
        let pointer = if self.pointer.is_empty() { "/" } else { &self.pointer };
        Error::Input(format!("{}: at {pointer}: {msg}", self.file.display()))
    }

    fn wrap<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Input(m) => self.error(m),
            other => other,
        })
    }

    fn dir(&self) -> PathBuf {
        self.file.parent().map(Path::to_path_buf).unwrap_or_default()
    }
}

/// A graph with the shift on its essential part; `raw` keeps the declared presentation.
#[derive(Clone, Debug)]
struct LoadedGraph {
    raw: Graph,
    sft: Sft,
}

/// Resolves references, caching each file so repeated references give the same shift.
#[derive(Default)]
pub struct Loader {
    graphs: HashMap<PathBuf, LoadedGraph>,
}

fn parse_text<T: DeserializeOwned>(text: &str, file: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("{}: {e}", file.display())))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: cannot read: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "shift".into())
}

impl Loader {
    pub fn new() -> Self {
        Loader::default()
    }

    fn open<T: DeserializeOwned>(&self, base: &Path, path: &str) -> Result<(T, Origin)> {
        let file = base.join(path);
        let text = read(&file)?;
        let doc = parse_text(&text, &file)?;
        Ok((doc, Origin { file, pointer: String::new() }))
    }

    pub fn graph_file(&mut self, path: &Path) -> Result<Sft> {
        let origin = Origin { file: path.to_path_buf(), pointer: String::new() };
        self.graph_path(&origin, &path.to_string_lossy(), true).map(|g| g.sft)
    }

    pub fn code_file(&mut self, path: &Path) -> Result<BlockCode> {
        let text = read(path)?;
        let raw: RawCode = parse_text(&text, path)?;
        self.code(&raw, &Origin { file: path.to_path_buf(), pointer: String::new() }, None, None)
    }

    pub fn pair_file(&mut self, path: &Path) -> Result<SUPair> {
        let text = read(path)?;
        let raw: RawPair = parse_text(&text, path)?;
        self.pair(&raw, &Origin { file: path.to_path_buf(), pointer: String::new() })
    }

    pub fn square_file(&mut self, path: &Path) -> Result<SquareDiagram> {
        let text = read(path)?;
        let raw: RawSquare = parse_text(&text, path)?;
        self.square(&raw, &Origin { file: path.to_path_buf(), pointer: String::new() })
    }

    pub fn triple_file(&mut self, path: &Path) -> Result<TripleData> {
        let text = read(path)?;
        let raw: RawTriple = parse_text(&text, path)?;
        self.triple(&raw, &Origin { file: path.to_path_buf(), pointer: String::new() })
    }

    /// `top` paths come from the command line and are not joined to a base directory.
    fn graph_path(&mut self, from: &Origin, path: &str, top: bool) -> Result<LoadedGraph> {
        let file = if top { PathBuf::from(path) } else { from.dir().join(path) };
        if let Some(g) = self.graphs.get(&file) {
            return Ok(g.clone());
        }
        let text = read(&file).map_err(|e| if top { e } else { from.error(strip(e)) })?;
        let raw: RawGraph = parse_text(&text, &file)?;
        let origin = Origin { file: file.clone(), pointer: String::new() };
        let g = build_graph(&raw, &origin, &stem(&file))?;
        self.graphs.insert(file, g.clone());
        Ok(g)
    }

    fn graph(&mut self, r: &Ref<RawGraph>, origin: &Origin, name: &str) -> Result<LoadedGraph> {
        match r {
            Ref::Path(p) => self.graph_path(origin, p, false),
            Ref::Inline(raw) => build_graph(raw, origin, name),
        }
    }

    /// Source and target default to `source` and `target` when the document leaves them out,
    /// and must agree with them when both are given.
    fn code(&mut self, raw: &RawCode, origin: &Origin, source: Option<&Sft>, target: Option<&Sft>) -> Result<BlockCode> {
        let src = self.code_end(raw.source.as_ref(), origin, "source", source)?;
        let tgt = self.code_end(raw.target.as_ref(), origin, "target", target)?;
        let hom_origin = origin.at("hom");
        let (hom, hom_origin) = match &raw.hom {
            Ref::Inline(h) => (h.clone(), hom_origin),
            Ref::Path(p) => {
                let (h, o) = self.open::<RawHom>(&origin.dir(), p).map_err(|e| hom_origin.error(strip(e)))?;
                (h, o)
            }
        };
        let width = raw.memory + raw.anticipation + 1;
        if width < 1 {
            return Err(origin.error(format!(
                "memory {} and anticipation {} leave an empty window",
                raw.memory, raw.anticipation
            )));
        }
        let window = width as usize;
        if window == 1 {
            for (key, end, declared) in [("source", &src, &hom.source), ("target", &tgt, &hom.target)] {
                if let Some(r) = declared {
                    let g = self.graph(r, &hom_origin.at(key), key)?;
                    if g.raw != end.raw {
                        return Err(hom_origin.at(key).error(format!("homomorphism {key} differs from the code's {key}")));
                    }
                }
            }
        } else if hom.source.is_some() || hom.target.is_some() || hom.vertex_map.is_some() {
            return Err(hom_origin.error("a code with window > 1 takes only an edge_map on edge words"));
        }
        let table = word_table(&hom, &src, &tgt, window, &hom_origin)?;
        if window == 1 {
            if let Some(vm) = &hom.vertex_map {
                check_vertex_map(vm, &hom.edge_map, &src.raw, &tgt.raw, &hom_origin)?;
            }
        }
        origin.wrap(BlockCode::from_table(&src.sft, &tgt.sft, window, raw.memory, table))
    }

    fn code_end(&mut self, r: Option<&Ref<RawGraph>>, origin: &Origin, key: &str, given: Option<&Sft>) -> Result<LoadedGraph> {
        match (r, given) {
            (Some(r), given) => {
                let g = self.graph(r, &origin.at(key), key)?;
                if let Some(s) = given {
                    if g.sft != *s {
                        return Err(origin.at(key).error(format!("{key} does not match the shift it must act on")));
                    }
                }
                Ok(g)
            }
            (None, Some(s)) => Ok(LoadedGraph { raw: (**s.graph()).clone(), sft: s.clone() }),
            (None, None) => Err(origin.error(format!("missing field `{key}`"))),
        }
    }

    fn code_ref(&mut self, r: &Ref<RawCode>, origin: &Origin, source: Option<&Sft>, target: Option<&Sft>) -> Result<BlockCode> {
        match r {
            Ref::Inline(raw) => self.code(raw, origin, source, target),
            Ref::Path(p) => {
                let (raw, o) = self.open::<RawCode>(&origin.dir(), p).map_err(|e| origin.error(strip(e)))?;
                self.code(&raw, &o, source, target)
            }
        }
    }

    fn pair(&mut self, raw: &RawPair, origin: &Origin) -> Result<SUPair> {
        let sft_keys = [raw.x.is_some(), raw.y.is_some(), raw.z.is_some(), raw.pi_s.is_some(), raw.pi_u.is_some()];
        match (&raw.grid, sft_keys.iter().any(|&b| b)) {
            (Some(_), true) => Err(origin.error("a pair is either X/Y/Z/pi_s/pi_u or grid/delta_l/delta_m, not both")),
            (Some(grid), false) => self.presentation(grid, &raw.delta_l, &raw.delta_m, origin).map(SUPair::Presentation),
            (None, _) => {
                if !raw.delta_l.is_empty() || !raw.delta_m.is_empty() {
                    return Err(origin.error("delta_l and delta_m need a grid"));
                }
                self.sft_pair(raw, origin).map(SUPair::Sft)
            }
        }
    }

    fn sft_pair(&mut self, raw: &RawPair, origin: &Origin) -> Result<SftPair> {
        let need = |v: &Option<Ref<RawGraph>>, key: &str| v.clone().ok_or_else(|| origin.error(format!("missing field `{key}`")));
        let x = self.graph(&need(&raw.x, "X")?, &origin.at("X"), "X")?.sft;
        let y = self.graph(&need(&raw.y, "Y")?, &origin.at("Y"), "Y")?.sft;
        let z = self.graph(&need(&raw.z, "Z")?, &origin.at("Z"), "Z")?.sft;
        let pi_s = raw.pi_s.as_ref().ok_or_else(|| origin.error("missing field `pi_s`"))?;
        let pi_u = raw.pi_u.as_ref().ok_or_else(|| origin.error("missing field `pi_u`"))?;
        let pi_s = self.code_ref(pi_s, &origin.at("pi_s"), Some(&y), Some(&x))?;
        let pi_u = self.code_ref(pi_u, &origin.at("pi_u"), Some(&z), Some(&x))?;
        origin.wrap(SftPair::new(x, y, z, pi_s, pi_u))
    }

    fn presentation(&mut self, grid: &[RawCell], delta_l: &[RawDelta], delta_m: &[RawDelta], origin: &Origin) -> Result<PresentationGrid> {
        let mut out = PresentationGrid::default();
        for (k, cell) in grid.iter().enumerate() {
            let o = origin.at("grid").at(k);
            let sft = self.graph(&cell.graph, &o.at("graph"), &format!("Sigma_{},{}", cell.l, cell.m))?.sft;
            let mut swaps = |list: &[Ref<RawCode>], key: &str| -> Result<Vec<BlockCode>> {
                list.iter()
                    .enumerate()
                    .map(|(j, c)| self.code_ref(c, &o.at(key).at(j), Some(&sft), Some(&sft)))
                    .collect()
            };
            let y_swaps = swaps(&cell.y_swaps, "y_swaps")?;
            let z_swaps = swaps(&cell.z_swaps, "z_swaps")?;
            if out.cells.insert((cell.l, cell.m), PresentedCell { sft: sft.clone(), y_swaps, z_swaps }).is_some() {
                return Err(o.error(format!("cell ({},{}) appears twice", cell.l, cell.m)));
            }
        }
        for (key, list, is_l) in [("delta_l", delta_l, true), ("delta_m", delta_m, false)] {
            for (k, d) in list.iter().enumerate() {
                let o = origin.at(key).at(k);
                let below = if is_l { d.l.checked_sub(1).map(|l| (l, d.m)) } else { d.m.checked_sub(1).map(|m| (d.l, m)) };
                let Some(below) = below else {
                    return Err(o.error(format!("{key} map out of cell ({},{}) has nowhere to go", d.l, d.m)));
                };
                let count = if is_l { d.l } else { d.m };
                if d.index > count {
                    return Err(o.at("index").error(format!("index {} exceeds {count}", d.index)));
                }
                let src = out.cells.get(&(d.l, d.m)).map(|c| c.sft.clone());
                let tgt = out.cells.get(&below).map(|c| c.sft.clone());
                let (Some(src), Some(tgt)) = (src, tgt) else {
                    return Err(o.error(format!("cells ({},{}) and {:?} must both be in the grid", d.l, d.m, below)));
                };
                let code = self.code_ref(&d.code, &o.at("code"), Some(&src), Some(&tgt))?;
                let map = if is_l { &mut out.delta_l } else { &mut out.delta_m };
                if map.insert((d.l, d.m, d.index), code).is_some() {
                    return Err(o.error(format!("{key} ({},{},{}) appears twice", d.l, d.m, d.index)));
                }
            }
        }
        Ok(out)
    }

    fn pair_ref(&mut self, r: &Ref<RawPair>, origin: &Origin) -> Result<SftPair> {
        let pair = match r {
            Ref::Inline(raw) => self.pair(raw, origin)?,
            Ref::Path(p) => {
                let (raw, o) = self.open::<RawPair>(&origin.dir(), p).map_err(|e| origin.error(strip(e)))?;
                self.pair(&raw, &o)?
            }
        };
        match pair {
            SUPair::Sft(p) => Ok(p),
            SUPair::Presentation(_) => Err(origin.error("this pair must be given by shifts and codes, not a grid")),
        }
    }

    fn square(&mut self, raw: &RawSquare, origin: &Origin) -> Result<SquareDiagram> {
        let sigma = self.graph(&raw.sigma, &origin.at("Sigma"), "Sigma")?.sft;
        let sigma1 = self.graph(&raw.sigma1, &origin.at("Sigma1"), "Sigma1")?.sft;
        let sigma2 = self.graph(&raw.sigma2, &origin.at("Sigma2"), "Sigma2")?.sft;
        let sigma0 = self.graph(&raw.sigma0, &origin.at("Sigma0"), "Sigma0")?.sft;
        let eta1 = self.code_ref(&raw.eta1, &origin.at("eta1"), Some(&sigma), Some(&sigma1))?;
        let eta2 = self.code_ref(&raw.eta2, &origin.at("eta2"), Some(&sigma), Some(&sigma2))?;
        let pi1 = self.code_ref(&raw.pi1, &origin.at("pi1"), Some(&sigma1), Some(&sigma0))?;
        let pi2 = self.code_ref(&raw.pi2, &origin.at("pi2"), Some(&sigma2), Some(&sigma0))?;
        origin.wrap(SquareDiagram::new(eta1, eta2, pi1, pi2))
    }

    fn triple(&mut self, raw: &RawTriple, origin: &Origin) -> Result<TripleData> {
        let p = self.pair_ref(&raw.pair, &origin.at("pair"))?;
        let q = self.pair_ref(&raw.pair_prime, &origin.at("pair_prime"))?;
        let eta_x = self.code_ref(&raw.eta_x, &origin.at("eta_X"), Some(&p.x), Some(&q.x))?;
        let eta_y = self.code_ref(&raw.eta_y, &origin.at("eta_Y"), Some(&p.y), Some(&q.y))?;
        let eta_z = self.code_ref(&raw.eta_z, &origin.at("eta_Z"), Some(&p.z), Some(&q.z))?;
        origin.wrap(TripleData::new(p, q, eta_x, eta_y, eta_z))
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Input(m) => m,
        other => other.to_string(),
    }
}

fn build_graph(raw: &RawGraph, origin: &Origin, name: &str) -> Result<LoadedGraph> {
    for (k, e) in raw.edges.iter().enumerate() {
        for (key, v) in [("i", &e.i), ("t", &e.t)] {
            if !raw.vertices.contains(v) {
                return Err(origin.at("edges").at(k).at(key).error(format!("unknown vertex {v:?}")));
            }
        }
    }
    let g = origin.wrap(Graph::new(raw.vertices.clone(), raw.edges.clone()))?;
    Ok(LoadedGraph { sft: Sft::new(name, &g), raw: g })
}

/// The block table, keyed by edge words of the trimmed source.
fn word_table(hom: &RawHom, src: &LoadedGraph, tgt: &LoadedGraph, window: usize, origin: &Origin) -> Result<HashMap<Vec<usize>, usize>> {
    let sg = src.sft.graph();
    let tg = tgt.sft.graph();
    let mut table = HashMap::new();
    for (key, image) in &hom.edge_map {
        let o = origin.at("edge_map").at(key);
        let names: Vec<&str> = key.split(',').map(str::trim).collect();
        if names.len() != window {
            return Err(o.error(format!("key has {} edges but the window is {window}", names.len())));
        }
        if let Some(bad) = names.iter().find(|n| src.raw.find_edge(n).is_none()) {
            return Err(o.error(format!("unknown source edge {bad:?}")));
        }
        let word: Option<Vec<usize>> = names.iter().map(|n| sg.find_edge(n)).collect();
        let Some(word) = word.filter(|w| sg.is_path(w)) else {
            continue;
        };
        let Some(y) = tg.find_edge(image) else {
            return Err(o.error(if tgt.raw.find_edge(image).is_some() {
                format!("edge {image:?} lies on no bi-infinite path of the target")
            } else {
                format!("unknown target edge {image:?}")
            }));
        };
        table.insert(word, y);
    }
    if let Some(missing) = sg.paths(window).into_iter().find(|p| !table.contains_key(p)) {
        let word: Vec<&str> = missing.iter().map(|&e| sg.edge_name(e)).collect();
        return Err(origin.at("edge_map").error(format!("no image for source word {:?}", word.join(","))));
    }
    Ok(table)
}

fn check_vertex_map(vm: &BTreeMap<String, String>, em: &BTreeMap<String, String>, s: &Graph, t: &Graph, origin: &Origin) -> Result<()> {
    let mut vertex_map = vec![None; s.n_vertices()];
    for (a, b) in vm {
        let o = origin.at("vertex_map").at(a);
        let v = s.find_vertex(a).ok_or_else(|| o.error(format!("unknown source vertex {a:?}")))?;
        vertex_map[v] = Some(t.find_vertex(b).ok_or_else(|| o.error(format!("unknown target vertex {b:?}")))?);
    }
    let Some(vertex_map): Option<Vec<usize>> = vertex_map.into_iter().collect() else {
        return Err(origin.at("vertex_map").error("every source vertex needs an image"));
    };
    let mut edge_map = vec![0; s.n_edges()];
    for e in 0..s.n_edges() {
        let name = s.edge_name(e);
        let image = em.get(name).ok_or_else(|| origin.at("edge_map").error(format!("no image for edge {name:?}")))?;
        edge_map[e] = t.find_edge(image).ok_or_else(|| origin.at("edge_map").at(name).error(format!("unknown target edge {image:?}")))?;
    }
    let g = |x: &Graph| std::sync::Arc::new(x.clone());
    origin.wrap(GraphHom::new(g(s), g(t), vertex_map, edge_map).map(|_| ()))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Sft> {
    Loader::new().graph_file(path.as_ref())
}

/// The declared graph next to its shift, which keeps only the essential part.
pub fn load_graph_with_presentation(path: impl AsRef<Path>) -> Result<(Graph, Sft)> {
    let path = path.as_ref();
    let origin = Origin { file: path.to_path_buf(), pointer: String::new() };
    Loader::new().graph_path(&origin, &path.to_string_lossy(), true).map(|g| (g.raw, g.sft))
}

pub fn load_code(path: impl AsRef<Path>) -> Result<BlockCode> {
    Loader::new().code_file(path.as_ref())
}

pub fn load_pair(path: impl AsRef<Path>) -> Result<SUPair> {
    Loader::new().pair_file(path.as_ref())
}

pub fn load_square(path: impl AsRef<Path>) -> Result<SquareDiagram> {
    Loader::new().square_file(path.as_ref())
}

pub fn load_triple(path: impl AsRef<Path>) -> Result<TripleData> {
    Loader::new().triple_file(path.as_ref())
}

pub fn graph_json(g: &Graph) -> Value {
    json!({ "vertices": g.vertex_names(), "edges": g.edge_specs() })
}

/// A code as an inline document; window > 1 writes comma-joined edge words as keys.
pub fn code_json(c: &BlockCode) -> Value {
    let sg = c.source().graph();
    let tg = c.target().graph();
    let mut edge_map = serde_json::Map::new();
    for w in c.words() {
        let key: Vec<&str> = w.iter().map(|&e| sg.edge_name(e)).collect();
        edge_map.insert(key.join(","), Value::from(tg.edge_name(c.eval(&w))));
    }
    json!({
        "source": graph_json(sg),
        "target": graph_json(tg),
        "hom": { "edge_map": edge_map },
        "memory": c.memory(),
        "anticipation": c.anticipation(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::sft::code_equal;

    fn write(dir: &Path, name: &str, v: &Value) {
        std::fs::write(dir.join(name), serde_json::to_string_pretty(v).unwrap()).unwrap();
    }

    fn scratch_dir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("sftkit-io-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn code_round_trips_through_json() {
        let d = scratch_dir("round");
        let pi = fixtures::pi().extended(1);
        write(&d, "c.json", &code_json(&pi));
        let back = load_code(d.join("c.json")).unwrap();
        assert_eq!(back.window(), pi.window());
        assert!(code_equal(&back, &pi));
    }

    #[test]
    fn path_references_resolve_next_to_the_referring_file() {
        let d = scratch_dir("refs");
        write(&d, "H.json", &graph_json(&fixtures::graph_h()));
        write(&d, "G.json", &graph_json(&fixtures::graph_g()));
        let code = json!({"source": "G.json", "target": "H.json",
            "hom": {"vertex_map": {"v1": "v", "v2": "v"}, "edge_map": {"a1": "a", "a2": "a", "b1": "b", "b2": "b"}}});
        write(&d, "pi.json", &code);
        let c = load_code(d.join("pi.json")).unwrap();
        assert!(code_equal(&c, &fixtures::pi()));
        assert_eq!(c.source().name(), "G");
    }

    #[test]
    fn syntax_errors_report_line_and_column() {
        let d = scratch_dir("syntax");
        std::fs::write(d.join("bad.json"), "{\"vertices\": [\"v\"],\n \"edges\": [,]}").unwrap();
        let msg = load_graph(d.join("bad.json")).unwrap_err().to_string();
        assert!(msg.contains("line 2 column"), "{msg}");
    }

    #[test]
    fn semantic_errors_report_a_pointer() {
        let d = scratch_dir("pointer");
        let bad = json!({"vertices": ["v"], "edges": [{"name": "a", "i": "v", "t": "w"}]});
        write(&d, "bad.json", &bad);
        let e = load_graph(d.join("bad.json")).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("at /edges/0/t: unknown vertex \"w\""), "{e}");
    }

    #[test]
    fn vertex_map_errors_point_at_the_entry() {
        let d = scratch_dir("vmap");
        let code = json!({"source": graph_json(&fixtures::graph_g()), "target": graph_json(&fixtures::graph_h()),
            "hom": {"vertex_map": {"v1": "v", "v2": "x"}, "edge_map": {"a1": "a", "a2": "a", "b1": "b", "b2": "b"}}});
        write(&d, "c.json", &code);
        let msg = load_code(d.join("c.json")).unwrap_err().to_string();
        assert!(msg.contains("/hom/vertex_map/v2"), "{msg}");
    }

    #[test]
    fn missing_word_is_named() {
        let d = scratch_dir("missing");
        let code = json!({"source": graph_json(&fixtures::graph_h()), "target": graph_json(&fixtures::graph_h()),
            "hom": {"edge_map": {"a": "a"}}});
        write(&d, "c.json", &code);
        let msg = load_code(d.join("c.json")).unwrap_err().to_string();
        assert!(msg.contains("no image for source word \"b\""), "{msg}");
    }
}
