use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u * m * v == d`, with `d` diagonal and `d[0] | d[1] | ...`, all nonnegative.
/// The inverses of the unimodular factors are tracked alongside.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Snf {
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Columns of `v` spanning the integer kernel of the input.
    pub fn kernel_basis(&self) -> IntMatrix {
        self.v.col_range(self.rank, self.v.cols())
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    u_inv: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_rows(x, y);
        self.u_inv.swap_cols(x, y);
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.v.swap_cols(x, y);
        self.v_inv.swap_rows(x, y);
    }

    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_row_multiple(target, source, k);
        self.u.add_row_multiple(target, source, k);
        self.u_inv.add_col_multiple(source, target, &-k);
    }

    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_col_multiple(target, source, k);
        self.v.add_col_multiple(target, source, k);
        self.v_inv.add_row_multiple(source, target, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Smith normal form by repeated minimal-|pivot| Euclidean elimination.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        u_inv: IntMatrix::identity(rows),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&r.a, t) else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        let pivot = r.a.get(t, t).clone();
        let mut clean = true;
        for i in t + 1..rows {
            let q = r.a.get(i, t) / &pivot;
            if !q.is_zero() {
                r.add_row(i, t, &-q);
            }
            if !r.a.get(i, t).is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = r.a.get(t, j) / &pivot;
            if !q.is_zero() {
                r.add_col(j, t, &-q);
            }
            if !r.a.get(t, j).is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Row and column are clear; enforce divisibility of the remaining block.
        let offender = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !r.a.get(i, j).is_multiple_of(&pivot));
        if let Some((i, _)) = offender {
            r.add_row(t, i, &BigInt::one());
            continue;
        }
        if pivot.is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    let rank = (0..rows.min(cols)).take_while(|&i| !r.a.get(i, i).is_zero()).count();
    Snf { d: r.a, u: r.u, v: r.v, u_inv: r.u_inv, v_inv: r.v_inv, rank }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let one = ax.is_one();
                best = Some((i, j, ax));
                if one {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Solves `basis * x = target` for integer `x`, where the columns of `basis`
/// are a Z-basis of a saturated sublattice containing the columns of `target`.
/// Returns `None` when some column of `target` is outside the span.
pub fn coordinates_in_basis(basis: &IntMatrix, target: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(basis.rows(), target.rows(), "coordinate solve shape mismatch");
    let snf = smith_normal_form(basis);
    // basis = u_inv * d * v_inv, so d * (v_inv x) = u * target.
    let rhs = &snf.u * target;
    let k = basis.cols();
    let mut y = IntMatrix::zeros(k, target.cols());
    for j in 0..target.cols() {
        for i in 0..rhs.rows() {
            let val = rhs.get(i, j);
            if i < snf.rank {
                let (q, rem) = val.div_rem(snf.d.get(i, i));
                if !rem.is_zero() {
                    return None;
                }
                y.set(i, j, q);
            } else if !val.is_zero() {
                return None;
            }
        }
    }
    if snf.rank < k {
        // Free columns would make the solution non-unique; bases have full column rank.
        return None;
    }
    Some(&snf.v * &y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Snf {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(m.rows()));
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(m.cols()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let divs = s.divisors();
        for w in divs.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert_eq!(s.rank, m.rank());
        s
    }

    #[test]
    fn one_by_one() {
        let s = check(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![2]]));
    }

    #[test]
    fn all_ones_two_by_two() {
        let s = check(&IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![1, 0], vec![0, 0]]));
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn divisibility_fixup() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.divisors(), vec![BigInt::from(1), BigInt::from(6)]);
        check(&IntMatrix::from_rows(&[vec![4, 6, 0], vec![6, 9, 3], vec![0, 0, 0]]));
        check(&IntMatrix::zeros(2, 3));
        check(&IntMatrix::zeros(0, 4));
    }

    #[test]
    fn kernel_and_coordinates() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        let s = smith_normal_form(&m);
        let k = s.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!((&m * &k).is_zero());
        let target = k.scale(&BigInt::from(-3));
        let x = coordinates_in_basis(&k, &target).unwrap();
        assert_eq!(x, IntMatrix::from_rows(&[vec![-3]]));
        assert!(coordinates_in_basis(&k, &IntMatrix::from_rows(&[vec![1], vec![0]])).is_none());
    }
}
