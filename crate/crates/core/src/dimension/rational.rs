use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::group::{LimitGroup, LimitHom};
use crate::error::{Error, Result};
use crate::graph_core::IntMatrix;

/// Dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let mut q = QMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                q.set(i, j, BigRational::from_integer(m.get(i, j).clone()));
            }
        }
        q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in rational product");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> QMatrix {
        (0..e).fold(QMatrix::identity(self.rows), |acc, _| acc.mul(self))
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &p);
                inv.set(col, j, inv.get(col, j) / &p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &f * a.get(col, j));
                    inv.set(r, j, inv.get(r, j) - &f * inv.get(col, j));
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form and its pivot columns.
    fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else { continue };
            a.swap_rows(row, p);
            let lead = a.get(row, col).clone();
            for j in 0..a.cols {
                a.set(row, j, a.get(row, j) / &lead);
            }
            for r in 0..a.rows {
                if r != row && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    for j in 0..a.cols {
                        a.set(r, j, a.get(r, j) - &f * a.get(row, j));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect();
        rows.serialize(s)
    }
}

/// The rationalized limit `G ⊗ Q`, identified with the eventual image `R` of the connecting map.
/// Coordinates on `R` are read at the pivots of its reduced echelon basis, so they depend only on `R`.
#[derive(Clone, Debug)]
struct StableSpace {
    /// Basis of `R` as columns.
    basis: QMatrix,
    pivots: Vec<usize>,
    /// Connecting map restricted to `R`, in coordinates.
    connecting: QMatrix,
    /// Eventual power restricted to `R`.
    eventual: QMatrix,
    eventual_full: QMatrix,
}

impl StableSpace {
    fn of(g: &LimitGroup) -> StableSpace {
        let e = g.eventual_power();
        let (r, pivots) = QMatrix::from_int(&e.transpose()).rref();
        let dim = pivots.len();
        let mut basis = QMatrix::zeros(g.rank, dim);
        for k in 0..dim {
            for i in 0..g.rank {
                basis.set(i, k, r.get(k, i).clone());
            }
        }
        let e_full = QMatrix::from_int(&e);
        let mut s = StableSpace {
            basis,
            pivots,
            connecting: QMatrix::zeros(0, 0),
            eventual: QMatrix::zeros(0, 0),
            eventual_full: e_full.clone(),
        };
        s.connecting = s.coords(&QMatrix::from_int(&g.connecting).mul(&s.basis));
        s.eventual = s.coords(&e_full.mul(&s.basis));
        s
    }

    fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of columns lying in `R`.
    fn coords(&self, x: &QMatrix) -> QMatrix {
        let mut out = QMatrix::zeros(self.dim(), x.cols());
        for (k, &p) in self.pivots.iter().enumerate() {
            for j in 0..x.cols() {
                out.set(k, j, x.get(p, j).clone());
            }
        }
        out
    }
}

/// A hom of limit groups as a matrix between the rationalized limits.
pub fn rational_matrix(f: &LimitHom) -> Result<QMatrix> {
    let src = StableSpace::of(&f.source);
    let tgt = StableSpace::of(&f.target);
    // w ↦ B'^{-shift} · (E'|R')^{-1} · E' · M · w
    let image = tgt.coords(&tgt.eventual_full.mul(&QMatrix::from_int(&f.matrix)).mul(&src.basis));
    let unproject = tgt
        .eventual
        .inverse()
        .ok_or_else(|| Error::Invariant(format!("eventual power of {} is singular on its image", f.target.label)))?;
    let b = &tgt.connecting;
    let shift_part = if f.level_shift >= 0 {
        b.inverse()
            .ok_or_else(|| Error::Invariant(format!("connecting map of {} is singular on its image", f.target.label)))?
            .pow(f.level_shift as u32)
    } else {
        b.pow((-f.level_shift) as u32)
    };
    Ok(shift_part.mul(&unproject).mul(&image))
}

/// `tr(q)` as an exact fraction string, or the integer when integral.
pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom() == &BigInt::one() {
        q.numer().to_string()
    } else {
        q.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::{dimension_group, Side};
    use crate::fixtures;

    #[test]
    fn rational_form_of_scalars_and_shifts() {
        let dg = dimension_group(&fixtures::sigma_g(), Side::S);
        assert_eq!(StableSpace::of(&dg).dim(), 1);
        let two = LimitHom::scalar(&dg, 2);
        assert_eq!(rational_matrix(&two).unwrap(), QMatrix::from_int(&IntMatrix::from_rows(&[vec![2]])));
        let up = LimitHom { level_shift: 1, ..LimitHom::identity(&dg) };
        let half = rational_matrix(&up).unwrap();
        assert_eq!(half.get(0, 0), &BigRational::new(1.into(), 2.into()));
        assert_eq!(half.mul(&rational_matrix(&two).unwrap()), QMatrix::identity(1));
    }

    #[test]
    fn inverse_round_trip() {
        let m = QMatrix::from_int(&IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]));
        assert_eq!(m.mul(&m.inverse().unwrap()), QMatrix::identity(2));
        assert!(QMatrix::from_int(&IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]])).inverse().is_none());
    }
}
