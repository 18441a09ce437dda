use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::double::{double_complex, DoubleComplex};
use super::pair::SUPair;
use super::sigma::Caps;
use crate::dimension::{LimitGroup, LimitHom, Side};
use crate::error::{Error, Result};
use crate::graph_core::{bigint_to_json, coordinates_in_basis, smith_normal_form, IntMatrix};

/// Homology in one total degree: the finite-stage group `ker d_N / im d_{N+1}` with its
/// induced connecting map, and the invariants of the direct limit.
#[derive(Clone, Debug)]
pub struct HomologyDegree {
    pub degree: i64,
    pub dim_q: usize,
    /// Torsion of the limit, read from the image of the connecting map at `level_window`.
    pub torsion: Vec<BigInt>,
    pub torsion_stable: bool,
    /// Divisors > 1 of the finite-stage group.
    pub finite_torsion: Vec<BigInt>,
    /// Connecting map on the free part of the finite stage.
    pub free: LimitGroup,
    pub chain_rank: usize,
    basis: DegreeBasis,
}

/// Coordinates used to read maps on the finite stage: kernel of `d_N` in the `V` columns
/// of its Smith form, then the Smith coordinates `U2` of the boundaries inside it.
#[derive(Clone, Debug)]
struct DegreeBasis {
    v_inv: IntMatrix,
    kernel: IntMatrix,
    rank: usize,
    u2: IntMatrix,
    u2_inv: IntMatrix,
    rank2: usize,
}

impl Serialize for HomologyDegree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let big = |v: &[BigInt]| v.iter().map(bigint_to_json).collect::<Vec<_>>();
        let mut st = s.serialize_struct("HomologyDegree", 5)?;
        st.serialize_field("N", &self.degree)?;
        st.serialize_field("dimQ", &self.dim_q)?;
        st.serialize_field("torsion", &big(&self.torsion))?;
        st.serialize_field("torsion_stable", &self.torsion_stable)?;
        st.serialize_field(
            "presentation",
            &serde_json::json!({
                "chain_rank": self.chain_rank,
                "free_rank": self.free.rank,
                "connecting": self.free.connecting,
                "finite_torsion": big(&self.finite_torsion),
            }),
        )?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyResult {
    pub side: Side,
    pub degrees: Vec<HomologyDegree>,
}

impl HomologyResult {
    pub fn degree(&self, n: i64) -> Option<&HomologyDegree> {
        self.degrees.iter().find(|d| d.degree == n)
    }

    /// Rational dimension in degree `n`, zero outside the computed range.
    pub fn dim_q(&self, n: i64) -> usize {
        self.degree(n).map_or(0, |d| d.dim_q)
    }
}

fn rows_are_zero(m: &IntMatrix, to: usize) -> bool {
    (0..to).all(|i| m.row(i).iter().all(Zero::is_zero))
}

/// Divisors > 1 of `(span(gens) + span(rels)) / span(rels)`.
fn subquotient_divisors(gens: &IntMatrix, rels: &IntMatrix) -> Vec<BigInt> {
    let mut all = IntMatrix::zeros(gens.rows(), gens.cols() + rels.cols());
    all.set_block(0, 0, gens);
    all.set_block(0, gens.cols(), rels);
    let snf = smith_normal_form(&all);
    if snf.rank == 0 {
        return Vec::new();
    }
    let mut basis = snf.u_inv.col_range(0, snf.rank);
    for (j, d) in snf.divisors().iter().enumerate() {
        for i in 0..basis.rows() {
            let x = basis.get(i, j) * d;
            basis.set(i, j, x);
        }
    }
    let coords = coordinates_in_basis(&basis, rels).expect("relations lie in the lattice they generate with gens");
    let snf2 = smith_normal_form(&coords);
    let one = BigInt::one();
    snf2.divisors().into_iter().filter(|d| *d > one).collect()
}

fn degree_homology(dc: &DoubleComplex, n: i64, level_window: u32) -> Result<HomologyDegree> {
    let d_n = dc.total_boundary(n);
    let d_up = dc.total_boundary(n + 1);
    let b = dc.chain_group(n).connecting;
    let chain_rank = b.rows();
    let snf = smith_normal_form(&d_n);
    let rank = snf.rank;
    let kernel = snf.v.col_range(rank, chain_rank);
    let x_full = &snf.v_inv * &d_up;
    if !rows_are_zero(&x_full, rank) {
        return Err(Error::Invariant(format!("image of d_{} is not inside the kernel of d_{n}", n + 1)));
    }
    let x = x_full.row_range(rank, chain_rank);
    let snf2 = smith_normal_form(&x);
    let k = chain_rank - rank;
    let y_full = &(&snf.v_inv * &b) * &kernel;
    if !rows_are_zero(&y_full, rank) {
        return Err(Error::Invariant(format!("connecting map does not preserve the cycles in degree {n}")));
    }
    let y = &(&snf2.u * &y_full.row_range(rank, chain_rank)) * &snf2.u_inv;
    let rank2 = snf2.rank;
    let one = BigInt::one();
    let finite_torsion: Vec<BigInt> = snf2.divisors().into_iter().filter(|d| *d > one).collect();
    let free_block = y.submatrix(&(rank2..k).collect::<Vec<_>>(), &(rank2..k).collect::<Vec<_>>());
    let free = LimitGroup::new(free_block, format!("H_{n}"))?;
    let torsion_idx: Vec<usize> = (0..rank2).filter(|&i| *snf2.d.get(i, i) > one).collect();
    let mut rels = IntMatrix::zeros(k, rank2);
    for i in 0..rank2 {
        rels.set(i, i, snf2.d.get(i, i).clone());
    }
    let limit_torsion = |j: u32| -> Vec<BigInt> {
        if torsion_idx.is_empty() {
            return Vec::new();
        }
        let yj = y.pow(j);
        let gens = yj.submatrix(&(0..k).collect::<Vec<_>>(), &torsion_idx);
        subquotient_divisors(&gens, &rels)
    };
    let torsion = limit_torsion(level_window);
    let torsion_stable = torsion == limit_torsion(level_window + 1);
    Ok(HomologyDegree {
        degree: n,
        dim_q: free.rational_dimension(),
        torsion,
        torsion_stable,
        finite_torsion,
        free,
        chain_rank,
        basis: DegreeBasis { v_inv: snf.v_inv, kernel, rank, u2: snf2.u, u2_inv: snf2.u_inv, rank2 },
    })
}

pub fn homology(dc: &DoubleComplex, level_window: u32) -> Result<HomologyResult> {
    homology_over(dc, &dc.degrees(), level_window)
}

/// Homology in the listed degrees; degrees without cells give zero groups.
pub fn homology_over(dc: &DoubleComplex, degrees: &[i64], level_window: u32) -> Result<HomologyResult> {
    let degrees = degrees.iter().map(|&n| degree_homology(dc, n, level_window)).collect::<Result<_>>()?;
    Ok(HomologyResult { side: dc.side, degrees })
}

/// Homology of a pair on the requested side.
pub fn pair_homology(p: &SUPair, side: Side, caps: Caps, level_window: u32) -> Result<(DoubleComplex, HomologyResult)> {
    let (_, dc) = double_complex(p, side, caps)?;
    let h = homology(&dc, level_window)?;
    Ok((dc, h))
}

/// The map on free parts of finite-stage homology induced by a chain map `f : C_n → C'_n`.
pub fn map_on_homology(src: &HomologyDegree, tgt: &HomologyDegree, f: &IntMatrix, level_shift: i64) -> Result<LimitHom> {
    if f.rows() != tgt.chain_rank || f.cols() != src.chain_rank {
        return Err(Error::Invariant(format!("chain map in degree {} has the wrong shape", src.degree)));
    }
    let (sb, tb) = (&src.basis, &tgt.basis);
    let full = &(&tb.v_inv * f) * &sb.kernel;
    if !rows_are_zero(&full, tb.rank) {
        return Err(Error::Invariant(format!("chain map does not send cycles to cycles in degree {}", src.degree)));
    }
    let w = &(&tb.u2 * &full.row_range(tb.rank, tgt.chain_rank)) * &sb.u2_inv;
    let k_src = src.chain_rank - sb.rank;
    let k_tgt = tgt.chain_rank - tb.rank;
    let block = w.submatrix(&(tb.rank2..k_tgt).collect::<Vec<_>>(), &(sb.rank2..k_src).collect::<Vec<_>>());
    LimitHom::new(src.free.clone(), tgt.free.clone(), block, level_shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::pair::SftPair;
    use crate::dimension::dimension_group;
    use crate::fixtures;
    use crate::sft::BlockCode;

    #[test]
    fn trivial_pair_over_h() {
        let h = fixtures::sigma_h();
        let (_, res) = pair_homology(&SUPair::Sft(SftPair::trivial(&h)), Side::S, Caps::default(), 2).unwrap();
        let h0 = res.degree(0).unwrap();
        assert_eq!(h0.dim_q, 1);
        assert_eq!(h0.free, dimension_group(&h, Side::S));
        assert!(h0.torsion.is_empty() && h0.torsion_stable);
        assert_eq!(res.degrees.len(), 1);
    }

    #[test]
    fn trivial_pair_over_g() {
        let g = fixtures::sigma_g();
        let (_, res) = pair_homology(&SUPair::Sft(SftPair::trivial(&g)), Side::S, Caps::default(), 2).unwrap();
        assert_eq!(res.dim_q(0), 1);
        assert_eq!(res.degree(0).unwrap().free.connecting, IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]));
    }

    #[test]
    fn pair_independence_over_h() {
        let h = fixtures::sigma_h();
        let p = SftPair::new(h.clone(), fixtures::sigma_g(), h.clone(), fixtures::pi(), BlockCode::identity(&h)).unwrap();
        for side in [Side::S, Side::U] {
            let (_, res) = pair_homology(&SUPair::Sft(p.clone()), side, Caps::default(), 2).unwrap();
            for n in -2..=2 {
                assert_eq!(res.dim_q(n), usize::from(n == 0), "side {side:?} degree {n}");
            }
        }
    }

    #[test]
    fn torsion_subquotient() {
        // Z/4 generated by e, image of 2e is Z/2.
        let rels = IntMatrix::from_rows(&[vec![4]]);
        assert_eq!(subquotient_divisors(&IntMatrix::from_rows(&[vec![2]]), &rels), vec![BigInt::from(2)]);
        assert_eq!(subquotient_divisors(&IntMatrix::from_rows(&[vec![4]]), &rels), Vec::<BigInt>::new());
    }
}
