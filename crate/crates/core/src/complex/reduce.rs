use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::sigma::SigmaCell;
use crate::error::{Error, Result};
use crate::graph_core::IntMatrix;

/// The Q,A reduction of `Z^V` for one cell: quotient by signed y-orbit relations and by
/// y-degenerate vertices, then the image of the z-antisymmetrizer.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub cell: (usize, usize),
    pub n_vertices: usize,
    /// Vertex to (class, sign); `None` for killed vertices.
    pub class_of: Vec<Option<(usize, i8)>>,
    pub class_rep: Vec<usize>,
    /// Basis of the antisymmetrizer image, sparse over classes.
    pub basis: Vec<Vec<(usize, BigInt)>>,
    /// Class and divisor giving each basis coordinate.
    readout: Vec<(usize, BigInt)>,
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&v| outer[v]).collect()
}

/// All transpositions of `0..=n`, built from the adjacent ones by conjugation.
fn all_transpositions(adjacent: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..adjacent.len() {
        let mut t = adjacent[i].clone();
        out.push(t.clone());
        for s in adjacent.iter().skip(i + 1) {
            t = compose(s, &compose(&t, s));
            out.push(t.clone());
        }
    }
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

impl Reduction {
    pub fn new(cell: &SigmaCell, l: usize, m: usize) -> Result<Reduction> {
        let n = cell.sft.graph().n_vertices();
        let transpositions = all_transpositions(&cell.y_swaps);
        let mut class_of: Vec<Option<(usize, i8)>> = vec![None; n];
        let mut class_rep = Vec::new();
        let mut visited = vec![false; n];
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut sign: Vec<(usize, i8)> = vec![(start, 1)];
            let mut seen_sign = std::collections::HashMap::from([(start, 1i8)]);
            let mut queue = VecDeque::from([start]);
            let mut conflict = false;
            visited[start] = true;
            while let Some(v) = queue.pop_front() {
                let sv = seen_sign[&v];
                for s in &cell.y_swaps {
                    let w = s[v];
                    match seen_sign.get(&w) {
                        Some(&sw) => conflict |= sw != -sv,
                        None => {
                            seen_sign.insert(w, -sv);
                            sign.push((w, -sv));
                            visited[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            let degenerate = sign.iter().any(|&(v, _)| transpositions.iter().any(|t| t[v] == v));
            if degenerate {
                continue;
            }
            if conflict {
                return Err(Error::Hypothesis(format!(
                    "the y-action at ({l},{m}) produces 2-torsion without a fixed vertex; unsupported"
                )));
            }
            let class = class_rep.len();
            class_rep.push(start);
            for (v, s) in sign {
                class_of[v] = Some((class, s));
            }
        }
        // Signed action of adjacent z-swaps on classes.
        let mut z_action: Vec<Vec<(usize, i8)>> = Vec::new();
        for s in &cell.z_swaps {
            let act = class_rep
                .iter()
                .map(|&r| {
                    class_of[s[r]].ok_or_else(|| {
                        Error::Invariant(format!("z-swap at ({l},{m}) does not preserve y-degenerate vertices"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            z_action.push(act);
        }
        let n_classes = class_rep.len();
        let mut done = vec![false; n_classes];
        let mut basis = Vec::new();
        let mut readout = Vec::new();
        let group_order = factorial(m + 1);
        for start in 0..n_classes {
            if done[start] {
                continue;
            }
            let mut coeff = std::collections::HashMap::from([(start, 1i8)]);
            let mut order = vec![start];
            let mut queue = VecDeque::from([start]);
            let mut conflict = false;
            done[start] = true;
            while let Some(g) = queue.pop_front() {
                let a = coeff[&g];
                for act in &z_action {
                    let (g2, sigma) = act[g];
                    let want = -sigma * a;
                    match coeff.get(&g2) {
                        Some(&have) => conflict |= have != want,
                        None => {
                            coeff.insert(g2, want);
                            order.push(g2);
                            done[g2] = true;
                            queue.push_back(g2);
                        }
                    }
                }
            }
            if conflict {
                continue;
            }
            let stab = &group_order / BigInt::from(order.len());
            let mut vec: Vec<(usize, BigInt)> = order.iter().map(|&g| (g, &stab * BigInt::from(coeff[&g]))).collect();
            vec.sort_by_key(|(g, _)| *g);
            basis.push(vec);
            readout.push((start, stab));
        }
        Ok(Reduction { cell: (l, m), n_vertices: n, class_of, class_rep, basis, readout })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_rep.len()
    }

    /// Q: `Z^V → Z^classes`.
    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n_classes()];
        for (v, xv) in x.iter().enumerate() {
            if let Some((c, s)) = self.class_of[v] {
                if s > 0 {
                    out[c] += xv;
                } else {
                    out[c] -= xv;
                }
            }
        }
        out
    }

    /// A basis element as a vector in `Z^V`, supported on class representatives.
    pub fn lift(&self, o: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n_vertices];
        for (c, a) in &self.basis[o] {
            out[self.class_rep[*c]] = a.clone();
        }
        out
    }

    /// Coordinates of a class vector in the basis, if it lies in the antisymmetrizer image.
    pub fn coordinates(&self, q: &[BigInt]) -> Option<Vec<BigInt>> {
        let coords: Vec<BigInt> = self
            .readout
            .iter()
            .map(|(c, d)| {
                let (quo, rem) = q[*c].div_rem(d);
                rem.is_zero().then_some(quo)
            })
            .collect::<Option<_>>()?;
        let mut back = vec![BigInt::zero(); q.len()];
        for (o, a) in coords.iter().enumerate() {
            for (c, b) in &self.basis[o] {
                back[*c] += a * b;
            }
        }
        (back == q).then_some(coords)
    }
}

/// Matrix of the map induced on reduced groups by `map : Z^V → Z^V'`, after checking
/// that the map respects the y-relations and lands in the antisymmetrizer image.
pub fn reduce_map(src: &Reduction, tgt: &Reduction, map: &IntMatrix, what: &str) -> Result<IntMatrix> {
    if map.rows() != tgt.n_vertices || map.cols() != src.n_vertices {
        return Err(Error::Invariant(format!("{what}: matrix shape does not match the cells")));
    }
    let images: Vec<Vec<BigInt>> = (0..src.n_vertices).map(|v| tgt.project(&map.col(v))).collect();
    for v in 0..src.n_vertices {
        let ok = match src.class_of[v] {
            None => images[v].iter().all(Zero::is_zero),
            Some((c, s)) => {
                let rep = &images[src.class_rep[c]];
                images[v].iter().zip(rep).all(|(a, b)| if s > 0 { a == b } else { *a == -b })
            }
        };
        if !ok {
            return Err(Error::Invariant(format!(
                "{what} does not descend to the reduced groups ({:?} -> {:?})",
                src.cell, tgt.cell
            )));
        }
    }
    let mut out = IntMatrix::zeros(tgt.rank(), src.rank());
    for o in 0..src.rank() {
        let mut q = vec![BigInt::zero(); tgt.n_classes()];
        for (c, a) in &src.basis[o] {
            for (k, b) in images[src.class_rep[*c]].iter().enumerate() {
                q[k] += a * b;
            }
        }
        let coords = tgt.coordinates(&q).ok_or_else(|| {
            Error::Invariant(format!(
                "{what} leaves the antisymmetric part ({:?} -> {:?})",
                src.cell, tgt.cell
            ))
        })?;
        for (k, a) in coords.into_iter().enumerate() {
            out.set(k, o, a);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::pair::SftPair;
    use crate::complex::sigma::sigma_cell;
    use crate::fixtures;
    use crate::sft::BlockCode;

    fn cell_of(p: &SftPair, l: usize, m: usize) -> SigmaCell {
        sigma_cell(&p.normalized(8).unwrap(), l, m).unwrap()
    }

    #[test]
    fn trivial_pair_degenerates() {
        let p = SftPair::trivial(&fixtures::sigma_h());
        assert_eq!(Reduction::new(&cell_of(&p, 0, 0), 0, 0).unwrap().rank(), 1);
        assert_eq!(Reduction::new(&cell_of(&p, 1, 0), 1, 0).unwrap().rank(), 0);
        assert_eq!(Reduction::new(&cell_of(&p, 0, 1), 0, 1).unwrap().rank(), 0);
    }

    #[test]
    fn off_diagonal_orbit_survives() {
        let h = fixtures::sigma_h();
        let p = SftPair::new(h.clone(), fixtures::sigma_g(), h.clone(), fixtures::pi(), BlockCode::identity(&h)).unwrap();
        let r = Reduction::new(&cell_of(&p, 1, 0), 1, 0).unwrap();
        assert_eq!(r.rank(), 1);
        assert_eq!(Reduction::new(&cell_of(&p, 2, 0), 2, 0).unwrap().rank(), 0);
        let q = SftPair::new(h.clone(), h.clone(), fixtures::sigma_g(), BlockCode::identity(&h), fixtures::pi()).unwrap();
        let r = Reduction::new(&cell_of(&q, 0, 1), 0, 1).unwrap();
        assert_eq!(r.rank(), 1);
        assert_eq!(r.basis[0].len(), 2);
    }
}
