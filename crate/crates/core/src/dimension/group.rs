use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::graph_core::IntMatrix;
use crate::sft::Sft;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    S,
    U,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::S => "s",
            Side::U => "u",
        }
    }
}

/// The direct limit of `Z^rank` under `connecting`; `(v, k) ≡ (B v, k + 1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitGroup {
    pub rank: usize,
    pub connecting: IntMatrix,
    pub label: String,
}

impl PartialEq for LimitGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.connecting == other.connecting
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitElement {
    pub vector: Vec<BigInt>,
    pub level: i64,
}

impl LimitElement {
    pub fn new(vector: Vec<i64>, level: i64) -> Self {
        LimitElement { vector: vector.into_iter().map(BigInt::from).collect(), level }
    }
}

impl LimitGroup {
    pub fn new(connecting: IntMatrix, label: impl Into<String>) -> Result<Self> {
        if !connecting.is_square() {
            return input("connecting map must be square");
        }
        Ok(LimitGroup { rank: connecting.rows(), connecting, label: label.into() })
    }

    pub fn zero(label: impl Into<String>) -> Self {
        LimitGroup { rank: 0, connecting: IntMatrix::zeros(0, 0), label: label.into() }
    }

    /// `B^k` for the first `k` at which the kernels of powers of `B` stop growing.
    pub fn eventual_power(&self) -> IntMatrix {
        let mut power = IntMatrix::identity(self.rank);
        let mut rank = self.rank;
        loop {
            let next = &self.connecting * &power;
            let r = next.rank();
            if r == rank {
                return power;
            }
            power = next;
            rank = r;
        }
    }

    /// `v` lies in the eventual kernel of `B`.
    pub fn is_null(&self, v: &[BigInt]) -> bool {
        self.eventual_power().mul_vec(v).iter().all(Zero::is_zero)
    }

    pub fn elem_equal(&self, x: &LimitElement, y: &LimitElement) -> Result<bool> {
        if x.vector.len() != self.rank || y.vector.len() != self.rank {
            return input("element length does not match group rank");
        }
        let level = x.level.max(y.level);
        let xv = self.connecting.pow((level - x.level) as u32).mul_vec(&x.vector);
        let yv = self.connecting.pow((level - y.level) as u32).mul_vec(&y.vector);
        let diff: Vec<BigInt> = xv.iter().zip(&yv).map(|(a, b)| a - b).collect();
        Ok(self.is_null(&diff))
    }

    /// Dimension of the limit tensored with the rationals.
    pub fn rational_dimension(&self) -> usize {
        self.eventual_power().rank()
    }
}

/// `D^s` uses the transpose of the adjacency matrix, `D^u` the adjacency matrix itself.
pub fn dimension_group(s: &Sft, side: Side) -> LimitGroup {
    let a = s.graph().adjacency_matrix();
    let b = match side {
        Side::S => a.transpose(),
        Side::U => a,
    };
    LimitGroup { rank: b.rows(), connecting: b, label: format!("D^{}({})", side.as_str(), s.name()) }
}

/// `(v, k) ↦ (M v, k + level_shift)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitHom {
    pub source: LimitGroup,
    pub target: LimitGroup,
    pub matrix: IntMatrix,
    pub level_shift: i64,
}

impl LimitHom {
    /// Checks shape and the intertwining identity `B_target · M = M · B_source`.
    pub fn new(source: LimitGroup, target: LimitGroup, matrix: IntMatrix, level_shift: i64) -> Result<Self> {
        if matrix.rows() != target.rank || matrix.cols() != source.rank {
            return input(format!(
                "hom matrix is {}x{} but groups have ranks {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.rank,
                target.rank
            ));
        }
        if &target.connecting * &matrix != &matrix * &source.connecting {
            return Err(Error::Invariant(format!("matrix does not intertwine {} and {}", source.label, target.label)));
        }
        Ok(LimitHom { source, target, matrix, level_shift })
    }

    pub fn identity(g: &LimitGroup) -> Self {
        LimitHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.rank), level_shift: 0 }
    }

    pub fn scalar(g: &LimitGroup, k: i64) -> Self {
        LimitHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::scalar(g.rank, k), level_shift: 0 }
    }

    pub fn zero(source: &LimitGroup, target: &LimitGroup) -> Self {
        LimitHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.rank, source.rank),
            level_shift: 0,
        }
    }

    pub fn apply(&self, x: &LimitElement) -> LimitElement {
        LimitElement { vector: self.matrix.mul_vec(&x.vector), level: x.level + self.level_shift }
    }

    /// The same hom expressed with a larger level shift.
    pub fn at_shift(&self, shift: i64) -> IntMatrix {
        assert!(shift >= self.level_shift, "can only raise the level shift");
        &self.target.connecting.pow((shift - self.level_shift) as u32) * &self.matrix
    }

    /// Rank of the induced map on the limits tensored with the rationals.
    pub fn stabilized_rank(&self) -> usize {
        (&self.target.eventual_power() * &self.matrix).rank()
    }

    pub fn rationalized(&self) -> RationalizedHom {
        RationalizedHom { matrix: self.matrix.clone(), level_shift: self.level_shift, stabilized_rank: self.stabilized_rank() }
    }
}

/// A hom read on the rationalized limits: the matrix acts between eventual images.
#[derive(Clone, Debug, Serialize)]
pub struct RationalizedHom {
    pub matrix: IntMatrix,
    pub level_shift: i64,
    pub stabilized_rank: usize,
}

/// `f ∘ g`.
pub fn hom_compose(f: &LimitHom, g: &LimitHom) -> Result<LimitHom> {
    if g.target != f.source {
        return input(format!("cannot compose: {} is not {}", g.target.label, f.source.label));
    }
    LimitHom::new(g.source.clone(), f.target.clone(), &f.matrix * &g.matrix, f.level_shift + g.level_shift)
}

/// Equality as maps of limit groups.
pub fn hom_equal(f: &LimitHom, g: &LimitHom) -> Result<bool> {
    if f.source != g.source || f.target != g.target {
        return input("hom_equal: homs have different source or target");
    }
    let shift = f.level_shift.max(g.level_shift);
    let diff = &f.at_shift(shift) - &g.at_shift(shift);
    let stable = &f.target.eventual_power() * &diff;
    Ok(stable.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn dimension_group_examples() {
        let dh = dimension_group(&fixtures::sigma_h(), Side::S);
        assert_eq!(dh.rank, 1);
        assert_eq!(dh.connecting, IntMatrix::from_rows(&[vec![2]]));
        let dg = dimension_group(&fixtures::sigma_g(), Side::S);
        assert_eq!(dg.connecting, IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]));
        assert_eq!(dimension_group(&Sft::empty("E"), Side::U).rank, 0);
    }

    #[test]
    fn element_equality_examples() {
        let dg = dimension_group(&fixtures::sigma_g(), Side::S);
        assert!(dg.elem_equal(&LimitElement::new(vec![1, -1], 0), &LimitElement::new(vec![0, 0], 0)).unwrap());
        let v = LimitElement::new(vec![3, 1], 2);
        let bv = LimitElement { vector: dg.connecting.mul_vec(&v.vector), level: 3 };
        assert!(dg.elem_equal(&v, &bv).unwrap());
        let dh = dimension_group(&fixtures::sigma_h(), Side::S);
        assert!(!dh.elem_equal(&LimitElement::new(vec![1], 0), &LimitElement::new(vec![1], 1)).unwrap());
        assert!(dh.elem_equal(&LimitElement::new(vec![1], 0), &LimitElement::new(vec![2], 1)).unwrap());
    }

    #[test]
    fn intertwining_is_enforced() {
        let dh = dimension_group(&fixtures::sigma_h(), Side::S);
        let dg = dimension_group(&fixtures::sigma_g(), Side::S);
        assert!(LimitHom::new(dg.clone(), dh.clone(), IntMatrix::from_rows(&[vec![1, 1]]), 0).is_ok());
        assert!(LimitHom::new(dg, dh, IntMatrix::from_rows(&[vec![1, 0]]), 0).is_err());
    }

    #[test]
    fn hom_equality_respects_realignment() {
        let dg = dimension_group(&fixtures::sigma_g(), Side::S);
        let m = LimitHom::new(dg.clone(), dg.clone(), IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]), 0).unwrap();
        assert!(hom_equal(&m, &LimitHom::scalar(&dg, 2)).unwrap());
        assert!(!hom_equal(&m, &LimitHom::identity(&dg)).unwrap());
        let realigned = LimitHom { matrix: &dg.connecting * &m.matrix, level_shift: 1, ..m.clone() };
        assert!(hom_equal(&m, &realigned).unwrap());
        assert_eq!(m.stabilized_rank(), 1);
    }
}
