use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use sftkit::complex::{double_complex, homology_over};
use sftkit::dimension::{dimension_group, induced_map, Kind, Side};
use sftkit::graph_core::join_edge_names;
use sftkit::io::{code_json, graph_json, load_code, load_graph, load_graph_with_presentation, load_pair, load_square, load_triple};
use sftkit::sft::{
    constant_fibre_size, degree, fibre_product, is_conjugacy, is_injective, is_left_covering, is_right_covering, is_s_bijective,
    is_s_resolving, is_surjective, is_u_bijective, is_u_resolving, sampled_fibres, singleton_fibre, FibreSize,
};
use sftkit::verify::{cube_report, verify_pullback_identity, verify_theta_naturality, CubeSeeds, Level, Report};
use sftkit::{BlockCode, Error, Result};

use crate::config::Config;
use crate::{Command, KindArg, LevelArg, SideArg};

pub const SCHEMA_VERSION: u32 = 1;

pub struct Outcome {
    pub document: Value,
    pub passed: bool,
}

fn document(body: Value, passed: bool) -> Outcome {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    match body {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    Outcome { document: Value::Object(map), passed }
}

fn report(r: Report) -> Outcome {
    let passed = r.passed;
    document(serde_json::to_value(&r).expect("reports serialize"), passed)
}

pub fn error_document(e: &Error) -> Value {
    let kind = match e {
        Error::Input(_) => "input",
        Error::Hypothesis(_) => "hypothesis",
        Error::CriterionInapplicable(_) => "criterion_inapplicable",
        Error::CapExceeded(_) => "cap_exceeded",
        Error::Invariant(_) => "invariant",
    };
    json!({ "schema_version": SCHEMA_VERSION, "error": { "kind": kind, "message": e.to_string() } })
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::S => Side::S,
        SideArg::U => Side::U,
    }
}

fn kind(k: KindArg) -> Kind {
    match k {
        KindArg::S => Kind::S,
        KindArg::U => Kind::U,
        KindArg::SStar => Kind::SStar,
        KindArg::UStar => Kind::UStar,
    }
}

/// A decision that may be inapplicable: the verdict, or the reason as a string.
fn verdict(r: Result<bool>) -> Result<Value> {
    match r {
        Ok(b) => Ok(json!(b)),
        Err(e @ Error::CriterionInapplicable(_)) => Ok(json!(e.to_string())),
        Err(e) => Err(e),
    }
}

pub fn run(cmd: &Command, config: &Config) -> Result<Outcome> {
    let settings = config.settings();
    match cmd {
        Command::Analyze { graph } => analyze(graph),
        Command::Dimgroup { sft, side: s } => {
            let g = dimension_group(&load_graph(sft)?, side(*s));
            Ok(document(serde_json::to_value(g).expect("groups serialize"), true))
        }
        Command::Induced { code, kind: k } => {
            let c = load_code(code)?;
            let f = induced_map(&c, kind(*k), settings.caps.recoding)?;
            Ok(document(
                json!({
                    "kind": kind(*k).as_str(),
                    "matrix": f.matrix,
                    "level_shift": f.level_shift,
                    "source": f.source,
                    "target": f.target,
                }),
                true,
            ))
        }
        Command::Fibre { left, right } => {
            let (a, b) = (load_code(left)?, load_code(right)?);
            if a.target() != b.target() {
                return Err(Error::Input(format!(
                    "{} and {} must have the same target",
                    left.display(),
                    right.display()
                )));
            }
            let (space, p1, p2) = fibre_product(&a, &b)?;
            Ok(document(
                json!({
                    "fibre_product": graph_json(space.sft.graph()),
                    "irreducible": space.sft.is_irreducible(),
                    "nonwandering": space.sft.is_nonwandering(),
                    "left": code_json(&p1),
                    "right": code_json(&p2),
                }),
                true,
            ))
        }
        Command::Homology { pair, side: s } => {
            let p = load_pair(pair)?;
            let (_, dc) = double_complex(&p, side(*s), settings.caps)?;
            dc.check_d_squared()?;
            let mut degrees: BTreeSet<i64> = (-(settings.caps.m as i64)..=settings.caps.l as i64).collect();
            degrees.extend(dc.degrees());
            let h = homology_over(&dc, &degrees.into_iter().collect::<Vec<_>>(), settings.level_window)?;
            Ok(document(json!({ "side": side(*s), "degrees": h.degrees }), true))
        }
        Command::VerifySquare { square, level } => {
            let d = load_square(square)?;
            let level = match level {
                LevelArg::Dimension => Level::Dimension,
                LevelArg::Homology => Level::Homology,
            };
            verify_pullback_identity(&d, level, &settings).map(report)
        }
        Command::Degree { code } => degree_report(&load_code(code)?, settings.period_cap),
        Command::Cube { square } => {
            let d = load_square(square)?;
            cube_report(&d, &CubeSeeds::identity(&d.sigma0), &settings).map(report)
        }
        Command::Naturality { first, second, kind: k } => {
            let (t1, t2) = (load_triple(first)?, load_triple(second)?);
            verify_theta_naturality(&t1, &t2, kind(*k), &settings).map(report)
        }
    }
}

fn analyze(path: &std::path::Path) -> Result<Outcome> {
    let (raw, sft) = load_graph_with_presentation(path)?;
    let g = sft.graph();
    let scc = sft.scc();
    let components: Vec<Vec<&str>> =
        scc.components.iter().map(|c| c.iter().map(|&v| g.vertex_name(v)).collect()).collect();
    Ok(document(
        json!({
            "shift": sft.name(),
            "vertices": raw.n_vertices(),
            "edges": raw.n_edges(),
            "essential": raw.is_essential(),
            "essential_vertices": g.n_vertices(),
            "essential_edges": g.n_edges(),
            "adjacency": g.adjacency_matrix(),
            "components": components,
            "nonwandering": scc.is_nonwandering,
            "irreducible": scc.is_strongly_connected,
            "mixing": scc.is_mixing,
            "period": scc.period,
        }),
        true,
    ))
}

fn degree_report(c: &BlockCode, period_cap: usize) -> Result<Outcome> {
    let tg = c.target().graph();
    let fibres: Vec<Value> = sampled_fibres(c)
        .into_iter()
        .map(|(cycle, size)| {
            let size = match size {
                FibreSize::Finite(k) => json!(k),
                FibreSize::Infinite => json!("infinite"),
            };
            json!({ "orbit": join_edge_names(tg, &cycle), "size": size })
        })
        .collect();
    let (deg, passed) = match degree(c) {
        Ok(d) => (json!(d), true),
        Err(e @ (Error::Hypothesis(_) | Error::CriterionInapplicable(_))) => (json!(e.to_string()), false),
        Err(e) => return Err(e),
    };
    let fibre_size = match constant_fibre_size(c) {
        Ok(k) => json!(k),
        Err(e) => json!(e.to_string()),
    };
    Ok(document(
        json!({
            "source": c.source().name(),
            "target": c.target().name(),
            "window": c.window(),
            "memory": c.memory(),
            "anticipation": c.anticipation(),
            "surjective": is_surjective(c),
            "injective": is_injective(c),
            "conjugacy": is_conjugacy(c),
            "s_resolving": is_s_resolving(c),
            "u_resolving": is_u_resolving(c),
            "s_bijective": verdict(is_s_bijective(c))?,
            "u_bijective": verdict(is_u_bijective(c))?,
            "left_covering": is_left_covering(c),
            "right_covering": is_right_covering(c),
            "degree": deg,
            "constant_fibre_size": fibre_size,
            "sampled_fibres": fibres,
            "singleton_fibre": singleton_fibre(c, period_cap).map(|w| join_edge_names(tg, &w)),
        }),
        passed,
    ))
}
