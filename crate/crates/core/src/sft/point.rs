use num_integer::Integer;

use super::code::BlockCode;
use super::shift::Sft;
use crate::error::{input, Result};
use crate::graph_core::Graph;

/// An eventually periodic bi-infinite path `…LLL · core · RRR…`, with `core[0]` at index `offset`
/// and the left cycle ending at index `offset − 1`.
#[derive(Clone, Debug)]
pub struct Point {
    pub left_cycle: Vec<usize>,
    pub core: Vec<usize>,
    pub right_cycle: Vec<usize>,
    pub offset: i64,
}

impl Point {
    pub fn new(g: &Graph, left_cycle: Vec<usize>, core: Vec<usize>, right_cycle: Vec<usize>, offset: i64) -> Result<Self> {
        let p = Point { left_cycle, core, right_cycle, offset };
        p.validate(g)?;
        Ok(p)
    }

    /// The periodic point `word^∞` with `word[0]` at index 0.
    pub fn periodic(word: Vec<usize>) -> Self {
        Point { left_cycle: word.clone(), core: Vec::new(), right_cycle: word, offset: 0 }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if !g.is_cycle(&self.left_cycle) || !g.is_cycle(&self.right_cycle) {
            return input("point cycles must be nonempty cycles of the presentation");
        }
        let mut word = vec![*self.left_cycle.last().unwrap()];
        word.extend(&self.core);
        word.push(self.right_cycle[0]);
        if !g.is_path(&word) {
            return input("point is not a legal bi-infinite path");
        }
        Ok(())
    }

    pub fn end(&self) -> i64 {
        self.offset + self.core.len() as i64
    }

    pub fn at(&self, n: i64) -> usize {
        if n < self.offset {
            let l = self.left_cycle.len() as i64;
            self.left_cycle[(n - self.offset).mod_floor(&l) as usize]
        } else if n < self.end() {
            self.core[(n - self.offset) as usize]
        } else {
            let r = self.right_cycle.len() as i64;
            self.right_cycle[(n - self.end()).mod_floor(&r) as usize]
        }
    }

    pub fn window(&self, from: i64, to: i64) -> Vec<usize> {
        (from..to).map(|n| self.at(n)).collect()
    }

    /// `z_n = left_source_n` for `n < cut`, `right_source_n` for `n ≥ cut`. Legality is not checked.
    pub fn splice(left_source: &Point, right_source: &Point, cut: i64) -> Point {
        let a = left_source.offset.min(cut);
        let b = right_source.end().max(cut);
        let l = left_source.left_cycle.len() as i64;
        let r = right_source.right_cycle.len() as i64;
        let pick = |n: i64| if n < cut { left_source.at(n) } else { right_source.at(n) };
        Point {
            left_cycle: (a - l..a).map(|n| left_source.at(n)).collect(),
            core: (a..b).map(pick).collect(),
            right_cycle: (b..b + r).map(|n| right_source.at(n)).collect(),
            offset: a,
        }
    }

    /// `σ`: `(σx)_n = x_{n+1}`.
    pub fn shifted(&self, k: i64) -> Point {
        Point { offset: self.offset - k, ..self.clone() }
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        let l = (self.left_cycle.len() as i64).lcm(&(other.left_cycle.len() as i64));
        let r = (self.right_cycle.len() as i64).lcm(&(other.right_cycle.len() as i64));
        let from = self.offset.min(other.offset) - l;
        let to = self.end().max(other.end()) + r;
        (from..to).all(|n| self.at(n) == other.at(n))
    }
}

impl Eq for Point {}

/// Right ray of `x` glued to the left ray of `y` at index 0. Requires `i(x_0) = i(y_0)`.
pub fn bracket(g: &Graph, x: &Point, y: &Point) -> Result<Point> {
    if g.i(x.at(0)) != g.i(y.at(0)) {
        return input("bracket undefined: x_0 and y_0 start at different vertices");
    }
    Ok(Point::splice(y, x, 0))
}

/// Image of a point under a block code.
pub fn apply_code(c: &BlockCode, x: &Point) -> Point {
    let w = c.window() as i64;
    let m = c.memory();
    let y_at = |n: i64| -> usize {
        let word = x.window(n - m, n - m + w);
        c.eval(&word)
    };
    let b = x.end() + m;
    let a = (x.offset + m - w + 1).min(b);
    let l = x.left_cycle.len() as i64;
    let r = x.right_cycle.len() as i64;
    Point {
        left_cycle: (a - l..a).map(y_at).collect(),
        core: (a..b).map(y_at).collect(),
        right_cycle: (b..b + r).map(y_at).collect(),
        offset: a,
    }
}

/// All points of period dividing `n`, one per closed path of length `n`.
pub fn periodic_points(s: &Sft, n: usize) -> Vec<Point> {
    let g = s.graph();
    g.paths(n)
        .into_iter()
        .filter(|p| g.t(*p.last().unwrap()) == g.i(p[0]))
        .map(Point::periodic)
        .collect()
}

/// Eventually periodic points with cycles of length ≤ `max_cycle` and core length ≤ `max_core`,
/// the core placed at index 0.
pub fn eventually_periodic_points(s: &Sft, max_cycle: usize, max_core: usize) -> Vec<Point> {
    let g = s.graph();
    let mut cycles = Vec::new();
    for len in 1..=max_cycle {
        for p in periodic_points(s, len) {
            cycles.push(p.right_cycle);
        }
    }
    let mut cores: Vec<Vec<usize>> = vec![Vec::new()];
    for len in 1..=max_core {
        cores.extend(g.paths(len));
    }
    let mut out = Vec::new();
    for lc in &cycles {
        let last = *lc.last().unwrap();
        for core in &cores {
            let start_ok = core.first().is_none_or(|&e| g.t(last) == g.i(e));
            if !start_ok {
                continue;
            }
            let end_vertex = core.last().map_or(g.t(last), |&e| g.t(e));
            for rc in &cycles {
                if g.i(rc[0]) == end_vertex {
                    out.push(Point { left_cycle: lc.clone(), core: core.clone(), right_cycle: rc.clone(), offset: 0 });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn periodic_point_counts() {
        let h = fixtures::sigma_h();
        let pts = periodic_points(&h, 1);
        assert_eq!(pts.len(), 2);
        let g = fixtures::sigma_g();
        let pts = periodic_points(&g, 1);
        let names: Vec<&str> = pts.iter().map(|p| g.graph().edge_name(p.at(0))).collect();
        assert_eq!(names, vec!["a1", "a2"]);
        for n in 1..=4 {
            let trace = g.graph().adjacency_matrix().pow(n as u32).trace();
            assert_eq!(num_bigint::BigInt::from(periodic_points(&g, n).len()), trace);
        }
    }

    #[test]
    fn bracket_axioms_on_small_points() {
        let g = fixtures::sigma_g();
        let gr = g.graph();
        let pts = eventually_periodic_points(&g, 2, 1);
        for x in &pts {
            assert_eq!(bracket(gr, x, x).unwrap(), *x);
        }
        for x in pts.iter().take(12) {
            for y in pts.iter().take(12) {
                let Ok(xy) = bracket(gr, x, y) else { continue };
                xy.validate(gr).unwrap();
                for z in pts.iter().take(12) {
                    if let (Ok(yz), Ok(xz)) = (bracket(gr, y, z), bracket(gr, x, z)) {
                        assert_eq!(bracket(gr, x, &yz).unwrap(), xz);
                        assert_eq!(bracket(gr, &xy, z).unwrap(), xz);
                    }
                }
            }
        }
    }

    #[test]
    fn code_image_of_periodic_point() {
        let pi = fixtures::pi();
        let x = Point::periodic(vec![2, 3]);
        let y = apply_code(&pi, &x);
        assert_eq!(y, Point::periodic(vec![1]));
        let shift = BlockCode::shift_power(pi.source(), 1);
        let z = Point::new(pi.source().graph(), vec![0], vec![2], vec![1], 0).unwrap();
        assert_eq!(apply_code(&shift, &z), z.shifted(1));
    }
}
