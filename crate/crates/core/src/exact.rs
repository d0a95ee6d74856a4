//! Exact rational linear algebra for the combinatorial predicates.

use num::{BigInt, BigRational, One, Zero};

use crate::snf::IntMatrix;

pub type Rational = BigRational;

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Inverse of a square integer matrix over the rationals, `None` if singular.
pub fn inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&v| rat(v)).collect();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (pivot_row, row) = if r < col {
                    let (lo, hi) = a.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (x, p) in row.iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `m * v` for a rational matrix and integer vector.
pub fn mat_vec(m: &[Vec<Rational>], v: &[i64]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, &b)| a * rat(b)).sum())
        .collect()
}

pub fn dot_int(a: &[i64], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(&x, y)| rat(x) * y).sum()
}

/// Rank of an integer matrix with `ncols` columns (fraction-free elimination).
pub fn integer_rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            let g = a[rank][col].clone();
            for c in 0..ncols {
                a[r][c] = &a[r][c] * &g - &a[rank][c] * &f;
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant of a small integer matrix.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    IntMatrix::from_i64(m).determinant()
}
