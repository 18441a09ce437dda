use serde::Serialize;
use serde_json::{Map, Value};

use crate::complex::Caps;
use crate::dimension::{hom_equal, LimitHom};
use crate::error::Result;

/// Tunable limits shared by the verification procedures.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub caps: Caps,
    pub period_cap: usize,
    pub level_window: u32,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { caps: Caps::default(), period_cap: 6, level_window: 2 }
    }
}

/// A report with hypotheses kept apart from the conclusion. `passed` drives the exit status.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub hypotheses: Map<String, Value>,
    pub conclusion: Map<String, Value>,
    pub witnesses: Vec<Value>,
    #[serde(skip)]
    pub passed: bool,
}

impl Report {
    pub fn new() -> Self {
        Report { hypotheses: Map::new(), conclusion: Map::new(), witnesses: Vec::new(), passed: true }
    }

    pub fn hypothesis(&mut self, name: &str, value: impl Serialize) {
        self.hypotheses.insert(name.into(), to_value(value));
    }

    pub fn conclude(&mut self, name: &str, value: impl Serialize) {
        self.conclusion.insert(name.into(), to_value(value));
    }

    pub fn witness(&mut self, value: impl Serialize) {
        self.witnesses.push(to_value(value));
    }
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}

pub(crate) fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// `"id"`, `"×k"` for a small scalar endomorphism, otherwise `"matrix"`.
pub fn describe_hom(f: &LimitHom) -> Result<String> {
    if f.source == f.target {
        if hom_equal(f, &LimitHom::identity(&f.source))? {
            return Ok("id".into());
        }
        if hom_equal(f, &LimitHom::zero(&f.source, &f.target))? {
            return Ok("0".into());
        }
        for k in [2, -1, 3, -2, 4, -3, -4] {
            if hom_equal(f, &LimitHom::scalar(&f.source, k))? {
                return Ok(format!("×{k}"));
            }
        }
    }
    Ok("matrix".into())
}

/// A hom as JSON: description, matrix and level shift.
pub fn hom_json(f: &LimitHom) -> Result<Value> {
    Ok(serde_json::json!({
        "describe": describe_hom(f)?,
        "matrix": f.matrix,
        "level_shift": f.level_shift,
        "source": f.source.label,
        "target": f.target.label,
    }))
}
