//! Systems shared by unit tests.

use crate::poly::SparseSystem;

/// `<-1 - c*y + x^3, -9 + 50*x*y - y^2>`.
pub(crate) fn trinomial_pair(c: f64) -> SparseSystem {
    SparseSystem::from_terms(vec![
        vec![(vec![0, 0], -1.0), (vec![0, 1], -c), (vec![3, 0], 1.0)],
        vec![(vec![0, 0], -9.0), (vec![1, 1], 50.0), (vec![0, 2], -1.0)],
    ])
    .unwrap()
}

pub(crate) fn running_example() -> SparseSystem {
    trinomial_pair(24000.0)
}

/// `<x - 1, y - 1>`.
pub(crate) fn linear_pair() -> SparseSystem {
    SparseSystem::from_terms(vec![
        vec![(vec![1, 0], 1.0), (vec![0, 0], -1.0)],
        vec![(vec![0, 1], 1.0), (vec![0, 0], -1.0)],
    ])
    .unwrap()
}
