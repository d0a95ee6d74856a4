//! Smith normal form over the integers.

use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    ncols: usize,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        IntMatrix { rows, ncols }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.nrows(), "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| r.iter().zip(&other.rows).map(|(a, b)| a * &b[j]).sum())
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(rows)
    }

    /// Determinant (Bareiss); the matrix must be square.
    pub fn determinant(&self) -> BigInt {
        let n = self.nrows();
        assert_eq!(n, self.ncols, "determinant of a non-square matrix");
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.nrows().min(self.ncols))
            .map(|i| self.rows[i][i].clone())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            r.swap(a, b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        let src_row = self.rows[src].clone();
        for (d, s) in self.rows[dst].iter_mut().zip(&src_row) {
            *d += k * s;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in &mut self.rows {
            let s = r[src].clone();
            r[dst] += k * s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in &mut self.rows[i] {
            *v = -&*v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()))
            .finish()
    }
}

/// `U * E * V = S` with `U`, `V` unimodular and `S` diagonal with
/// `s_1 | s_2 | ...`, nonnegative, zeros last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.s.diagonal()
    }
}

/// Elimination with the smallest nonzero entry as pivot, alternating row and
/// column reduction, then fixing divisibility by folding offending rows into
/// the pivot row.
pub fn smith_normal_form(e: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (e.nrows(), e.ncols());
    let mut s = e.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        while let Some((pi, pj)) = smallest_nonzero(&s, t) {
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = s.get(i, t) / &pivot;
                if !q.is_zero() {
                    s.add_row(i, t, &-&q);
                    u.add_row(i, t, &-&q);
                }
                clean &= s.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = s.get(t, j) / &pivot;
                if !q.is_zero() {
                    s.add_col(j, t, &-&q);
                    v.add_col(j, t, &-&q);
                }
                clean &= s.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offending = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !(s.get(i, j) % &pivot).is_zero())
            });
            match offending {
                Some(i) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, s, v }
}

fn smallest_nonzero(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..s.nrows() {
        for j in t..s.ncols() {
            let a = s.get(i, j).abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(ij, _)| ij)
}
