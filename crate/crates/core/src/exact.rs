//! Exact integer and rational linear algebra for intersection matrices.
//!
//! Determinants and leading principal minors use fraction-free Bareiss
//! elimination over arbitrary-precision integers; linear systems are
//! solved over exact rationals. No floating point anywhere.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(int(n), int(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

/// Leading principal minors det(M[..k][..k]) for k = 1..=n, computed by
/// fraction-free elimination. Computation stops after the first zero
/// minor (later minors are not returned), which is all the definiteness
/// test needs.
pub fn leading_principal_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() || k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &pivot * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = pivot;
    }
    minors
}

/// Determinant via the minors above; `None` when elimination hits a zero
/// pivot before the last step (the caller needs definiteness first).
pub fn determinant_if_regular(m: &[Vec<BigInt>]) -> Option<BigInt> {
    let n = m.len();
    if n == 0 {
        return Some(BigInt::one());
    }
    let minors = leading_principal_minors(m);
    if minors.len() == n && !minors[n - 1].is_zero() {
        Some(minors[n - 1].clone())
    } else {
        None
    }
}

/// All leading principal minors alternate in sign starting negative:
/// sign(det M_k) = (-1)^k with no zeros.
pub fn minors_alternate_negative(m: &[Vec<BigInt>]) -> bool {
    let n = m.len();
    let minors = leading_principal_minors(m);
    if minors.len() < n {
        return false;
    }
    for (k, d) in minors.iter().enumerate() {
        let want_negative = k % 2 == 0;
        if d.is_zero() {
            return false;
        }
        if want_negative != d.is_negative() {
            return false;
        }
    }
    true
}

/// Solve A x = b over the rationals. `None` when A is singular.
pub fn solve_rational(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for (row, rhs) in a.iter().zip(b.iter()) {
        debug_assert_eq!(row.len(), n);
        let mut r = row.clone();
        r.push(rhs.clone());
        m.push(r);
    }
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot_row);
        let inv = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in col..=n {
                let v = &m[r][j] - &f * &m[col][j];
                m[r][j] = v;
            }
        }
    }
    Some(m.into_iter().map(|row| row[row.len() - 1].clone()).collect())
}

/// |det| of the intersection lattice of a chain of rational curves with
/// the given self-intersections (edges all simple), via the tridiagonal
/// recurrence D_k = |s_k| D_{k-1} - D_{k-2}.
pub fn chain_determinant(self_ints: &[i64]) -> BigInt {
    let mut d_prev = BigInt::zero(); // D_{-1}
    let mut d = BigInt::one(); // D_0
    for &s in self_ints {
        let next = int(s.abs()) * &d - &d_prev;
        d_prev = d;
        d = next;
    }
    d
}

/// Floor of a rational as a BigInt.
pub fn floor_rat(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    /// Cofactor expansion, the slow independent reference.
    fn det_naive(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return a[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if a[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &a[0][j] * det_naive(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let cases = [
            m(&[&[-2]]),
            m(&[&[-2, 1], &[1, -2]]),
            m(&[&[-2, 1, 0], &[1, -3, 2], &[0, 2, -4]]),
            m(&[&[-5, 2, 1, 0], &[2, -4, 0, 1], &[1, 0, -3, 1], &[0, 1, 1, -2]]),
        ];
        for a in &cases {
            let got = determinant_if_regular(a).unwrap();
            assert_eq!(got, det_naive(a));
        }
    }

    #[test]
    fn singular_matrix_reports_no_determinant() {
        let a = m(&[&[-2, 2], &[2, -2]]);
        assert_eq!(determinant_if_regular(&a), None);
        assert!(!minors_alternate_negative(&a));
    }

    #[test]
    fn definiteness_sign_pattern() {
        let neg_def = m(&[&[-2, 1, 0], &[1, -2, 1], &[0, 1, -2]]);
        assert!(minors_alternate_negative(&neg_def));
        let indefinite = m(&[&[-2, 3], &[3, -2]]);
        assert!(!minors_alternate_negative(&indefinite));
        let pos = m(&[&[2]]);
        assert!(!minors_alternate_negative(&pos));
    }

    #[test]
    fn rational_solve_round_trips() {
        let a = alloc::vec![
            alloc::vec![rat_int(-2), rat_int(1)],
            alloc::vec![rat_int(1), rat_int(-3)],
        ];
        let b = alloc::vec![rat_int(0), rat_int(1)];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x[0], rat(-1, 5));
        assert_eq!(x[1], rat(-2, 5));
        let singular = alloc::vec![
            alloc::vec![rat_int(1), rat_int(2)],
            alloc::vec![rat_int(2), rat_int(4)],
        ];
        assert!(solve_rational(&singular, &b).is_none());
    }

    #[test]
    fn chain_determinants_count_lattice_index() {
        // A chain of n curves of self-intersection -2 has |det| = n + 1.
        for n in 1..=12 {
            let s = alloc::vec![-2i64; n];
            assert_eq!(chain_determinant(&s), int(n as i64 + 1));
        }
        assert_eq!(chain_determinant(&[-3]), int(3));
        assert_eq!(chain_determinant(&[-2, -2]), int(3));
        assert_eq!(chain_determinant(&[-2, -3]), int(5));
        // Cross-check against the full matrix determinant.
        let s = [-3i64, -2, -4, -2];
        let n = s.len();
        let mut g = alloc::vec![alloc::vec![int(0); n]; n];
        for i in 0..n {
            g[i][i] = int(s[i]);
            if i + 1 < n {
                g[i][i + 1] = int(1);
                g[i + 1][i] = int(1);
            }
        }
        let full = determinant_if_regular(&g).unwrap();
        assert_eq!(chain_determinant(&s), full.abs());
    }

    #[test]
    fn floors_are_exact() {
        assert_eq!(floor_rat(&rat(7, 2)), int(3));
        assert_eq!(floor_rat(&rat(-7, 2)), int(-4));
        assert_eq!(floor_rat(&rat_int(5)), int(5));
    }
}
