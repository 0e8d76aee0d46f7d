//! Fraction-free Gaussian elimination over the integers.
//!
//! Every intermediate entry stays an integer: after step `k` each entry is a
//! `(k+1)×(k+1)` minor of the input, and the division by the previous pivot is
//! exact. Rationals only appear in the final back-substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Solves `a · z = b` for square `a`. Returns `None` when `a` is singular.
pub fn solve_integer(mut a: Vec<Vec<BigInt>>, mut b: Vec<BigInt>) -> Option<Vec<BigRational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), n);

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&i| !a[i][k].is_zero())?;
        if pivot_row != k {
            a.swap(k, pivot_row);
            b.swap(k, pivot_row);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            let v = &a[k][k] * &b[i] - &a[i][k] * &b[k];
            b[i] = v / &prev;
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }

    let mut z = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(b[i].clone());
        for j in i + 1..n {
            acc -= BigRational::from_integer(a[i][j].clone()) * &z[j];
        }
        z[i] = acc / BigRational::from_integer(a[i][i].clone());
    }
    Some(z)
}

/// Solves a rational system by clearing denominators row by row, which leaves
/// the solution set unchanged, then delegating to [`solve_integer`].
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut int_rows = Vec::with_capacity(a.len());
    let mut int_rhs = Vec::with_capacity(b.len());
    for (row, rhs) in a.iter().zip(b) {
        let scale = row
            .iter()
            .chain(std::iter::once(rhs))
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        int_rows.push(
            row.iter()
                .map(|q| q.numer() * (&scale / q.denom()))
                .collect::<Vec<_>>(),
        );
        int_rhs.push(rhs.numer() * (&scale / rhs.denom()));
    }
    solve_integer(int_rows, int_rhs)
}
