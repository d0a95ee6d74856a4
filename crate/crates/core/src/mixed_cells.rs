//! Cayley configurations, exact mixed-cell enumeration, mixed volume and the
//! facet functionals generating the dual mixed cell cone.
//!
//! Cells are taken on the *upper* side of the lifted supports: a cell pair
//! attains the strict maximum of `<a, alpha> + w(a)` within its support. The
//! lower-facet picture is recovered by negating the lifting.

use std::ops::Range;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Result, RphError};
use crate::exact::{self, rat, Rational};
use crate::poly::{Lifting, SparseSystem};

/// Default multiplier applied to a real lifting before rounding.
pub const DEFAULT_SCALE: f64 = 1e6;

/// Largest magnitude exactly representable as an integer in an `f64`.
const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

const MIXED_VOLUME_ATTEMPTS: usize = 16;

/// The point set `A_1 * ... * A_n`: the point for `a` in support `i` is `(a, e_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyConfiguration {
    points: Vec<Vec<i64>>,
    block_offsets: Vec<Range<usize>>,
}

impl CayleyConfiguration {
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn block_offsets(&self) -> &[Range<usize>] {
        &self.block_offsets
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Flat index of point `point` of support `poly`.
    pub fn flat_index(&self, poly: usize, point: usize) -> usize {
        self.block_offsets[poly].start + point
    }
}

pub fn cayley(system: &SparseSystem) -> CayleyConfiguration {
    let m = system.polynomials().len();
    let mut points = Vec::with_capacity(system.total_terms());
    let mut block_offsets = Vec::with_capacity(m);
    for (i, p) in system.polynomials().iter().enumerate() {
        let start = points.len();
        for a in p.support() {
            let mut pt: Vec<i64> = a.iter().map(|&e| e as i64).collect();
            pt.extend((0..m).map(|k| i64::from(k == i)));
            points.push(pt);
        }
        block_offsets.push(start..points.len());
    }
    CayleyConfiguration {
        points,
        block_offsets,
    }
}

/// Integer heights used for the combinatorial predicates.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerLifting {
    values: Vec<Vec<i64>>,
    scale: f64,
}

impl IntegerLifting {
    /// Wraps integer heights directly (scale 1).
    pub fn from_values(values: Vec<Vec<i64>>) -> Self {
        IntegerLifting { values, scale: 1.0 }
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn get(&self, poly: usize, point: usize) -> i64 {
        self.values[poly][point]
    }

    pub fn flat(&self) -> Vec<i64> {
        self.values.iter().flatten().copied().collect()
    }

    /// Every height multiplied by `k`.
    pub fn scaled(&self, k: i64) -> Self {
        IntegerLifting {
            values: self
                .values
                .iter()
                .map(|r| r.iter().map(|v| v * k).collect())
                .collect(),
            scale: self.scale * k as f64,
        }
    }
}

/// `round(scale * w)` entrywise, half away from zero.
pub fn integerize(w: &Lifting, scale: f64) -> Result<IntegerLifting> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(RphError::Invalid(format!("lifting scale must be positive, got {scale}")));
    }
    let values = w
        .values()
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| {
                    let s = (scale * v).round();
                    if !s.is_finite() || s.abs() > EXACT_INT_LIMIT {
                        Err(RphError::Overflow { value: scale * v })
                    } else {
                        Ok(s as i64)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegerLifting { values, scale })
}

/// One pair of support points per polynomial spanning a fully mixed cell.
///
/// `pairs[i] = (p, q)` is oriented so that `a_p` is lexicographically greater
/// than `a_q`; the binomial `c_p x^{a_p} + c_q x^{a_q}` uses this orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedCell {
    pub pairs: Vec<(usize, usize)>,
    pub normal: Vec<Rational>,
    pub volume: u64,
}

impl MixedCell {
    /// Rows `a_p - a_q`.
    pub fn edge_matrix(&self, system: &SparseSystem) -> Vec<Vec<i64>> {
        edge_matrix(system, &self.pairs)
    }

    /// Pair indices sorted within each pair, for order-insensitive comparison.
    pub fn unordered_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|&(p, q)| (p.min(q), p.max(q))).collect()
    }
}

fn edge_matrix(system: &SparseSystem, pairs: &[(usize, usize)]) -> Vec<Vec<i64>> {
    system
        .polynomials()
        .iter()
        .zip(pairs)
        .map(|(poly, &(p, q))| {
            let s = poly.support();
            s[p].iter().zip(&s[q]).map(|(&u, &v)| u as i64 - v as i64).collect()
        })
        .collect()
}

fn to_i64(a: &[u32]) -> Vec<i64> {
    a.iter().map(|&e| e as i64).collect()
}

/// Index pairs `(lo, hi)` with `lo < hi`, in lexicographic order.
fn index_pairs(len: usize) -> Vec<(usize, usize)> {
    (0..len)
        .flat_map(|p| (p + 1..len).map(move |q| (p, q)))
        .collect()
}

fn candidates(system: &SparseSystem) -> Vec<Vec<(usize, usize)>> {
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for poly in system.polynomials() {
        let pairs = index_pairs(poly.len());
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pairs.iter().map(move |&pq| {
                    let mut v = prefix.clone();
                    v.push(pq);
                    v
                })
            })
            .collect();
    }
    out
}

fn orient(system: &SparseSystem, pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    system
        .polynomials()
        .iter()
        .zip(pairs)
        .map(|(poly, &(p, q))| {
            if poly.support()[p] > poly.support()[q] {
                (p, q)
            } else {
                (q, p)
            }
        })
        .collect()
}

fn test_candidate(
    system: &SparseSystem,
    w: &IntegerLifting,
    pairs: &[(usize, usize)],
) -> Result<Option<MixedCell>> {
    let pairs = orient(system, pairs);
    let m = edge_matrix(system, &pairs);
    let Some(inv) = exact::inverse(&m) else {
        return Ok(None);
    };
    let rhs: Vec<i64> = pairs
        .iter()
        .enumerate()
        .map(|(i, &(p, q))| w.get(i, q) - w.get(i, p))
        .collect();
    let alpha = exact::mat_vec(&inv, &rhs);

    let mut tie = None;
    for (i, (poly, &(p, q))) in system.polynomials().iter().zip(&pairs).enumerate() {
        let s = poly.support();
        let top = exact::dot_int(&to_i64(&s[p]), &alpha) + rat(w.get(i, p));
        for (k, a) in s.iter().enumerate() {
            if k == p || k == q {
                continue;
            }
            let val = exact::dot_int(&to_i64(a), &alpha) + rat(w.get(i, k));
            if val > top {
                return Ok(None);
            }
            if val == top && tie.is_none() {
                tie = Some((i, k));
            }
        }
    }
    if let Some((polynomial, point)) = tie {
        return Err(RphError::DegenerateLifting {
            polynomial,
            point,
            pairs,
        });
    }
    let volume = exact::determinant(&m)
        .abs()
        .to_u64()
        .expect("cell volume fits in u64");
    Ok(Some(MixedCell {
        pairs,
        normal: alpha,
        volume,
    }))
}

/// All mixed cells of the subdivision induced by `w`, ordered lexicographically
/// by their (unoriented) index pairs.
pub fn enumerate_mixed_cells(system: &SparseSystem, w: &IntegerLifting) -> Result<Vec<MixedCell>> {
    if w.values().len() != system.n_vars()
        || w.values()
            .iter()
            .zip(system.polynomials())
            .any(|(v, p)| v.len() != p.len())
    {
        return Err(RphError::Invalid("lifting shape does not match the system".into()));
    }
    let found: Vec<Result<Option<MixedCell>>> = candidates(system)
        .par_iter()
        .map(|pairs| test_candidate(system, w, pairs))
        .collect();
    let mut cells = Vec::new();
    for r in found {
        if let Some(c) = r? {
            cells.push(c);
        }
    }
    Ok(cells)
}

/// Mixed cells of the coefficient lifting `ln|c|`, together with both liftings.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub lifting: Lifting,
    pub integer_lifting: IntegerLifting,
    pub cells: Vec<MixedCell>,
}

/// Cells induced by `round(scale * ln|c|)`.
pub fn log_subdivision(system: &SparseSystem, scale: f64) -> Result<Subdivision> {
    let lifting = system.log_lifting();
    let integer_lifting = integerize(&lifting, scale)?;
    let cells = enumerate_mixed_cells(system, &integer_lifting)?;
    Ok(Subdivision {
        lifting,
        integer_lifting,
        cells,
    })
}

/// Mixed volume via a random generic lifting (seed 0).
pub fn mixed_volume(system: &SparseSystem) -> Result<u64> {
    mixed_volume_seeded(system, 0)
}

/// Mixed volume via random integer liftings in `[0, 2^31)` drawn from `seed`,
/// redrawing when a lifting turns out not to be generic.
pub fn mixed_volume_seeded(system: &SparseSystem, seed: u64) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MIXED_VOLUME_ATTEMPTS {
        let w = IntegerLifting::from_values(
            system
                .polynomials()
                .iter()
                .map(|p| (0..p.len()).map(|_| rng.random_range(0..1i64 << 31)).collect())
                .collect(),
        );
        match enumerate_mixed_cells(system, &w) {
            Ok(cells) => return Ok(cells.iter().map(|c| c.volume).sum()),
            Err(RphError::DegenerateLifting { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(RphError::GenericityFailure {
        attempts: MIXED_VOLUME_ATTEMPTS,
    })
}

/// Where a dual cone generator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorOrigin {
    pub cell: usize,
    pub polynomial: usize,
    pub point: usize,
}

/// A primitive integer functional on lifting space (flat Cayley order) that is
/// positive exactly where one facet inequality of a mixed cell holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualConeGenerator {
    pub zeta: Vec<i64>,
    pub origin: GeneratorOrigin,
}

impl DualConeGenerator {
    pub fn l1_norm(&self) -> i64 {
        self.zeta.iter().map(|v| v.abs()).sum()
    }

    pub fn pair_with(&self, w: &[f64]) -> f64 {
        self.zeta.iter().zip(w).map(|(&z, &v)| z as f64 * v).sum()
    }

    pub fn pair_with_int(&self, w: &[i64]) -> BigInt {
        self.zeta
            .iter()
            .zip(w)
            .map(|(&z, &v)| BigInt::from(z) * BigInt::from(v))
            .sum()
    }
}

/// Facet functionals of every mixed cell, deduplicated, in discovery order.
///
/// For a cell with pairs `(p_i, q_i)` the normal solves
/// `<a_p - a_q, alpha(u)> = u_q - u_p`, so `alpha(u) = M^{-1} D u` is linear in
/// the lifting `u`. The inequality for an excluded point `a` of support `i` is
/// `<a_p - a, alpha(u)> + u_p - u_a > 0`.
pub fn dual_cone_generators(
    system: &SparseSystem,
    cells: &[MixedCell],
    w: &IntegerLifting,
) -> Result<Vec<DualConeGenerator>> {
    let config = cayley(system);
    let total = config.len();
    let w_flat = w.flat();
    let mut out: Vec<DualConeGenerator> = Vec::new();

    for (ci, cell) in cells.iter().enumerate() {
        let m = cell.edge_matrix(system);
        let inv = exact::inverse(&m).ok_or(RphError::SingularExponent)?;
        // alpha_map[r][c]: coefficient of u_c in alpha_r(u).
        let mut alpha_map = vec![vec![Rational::zero(); total]; m.len()];
        for (i, &(p, q)) in cell.pairs.iter().enumerate() {
            let (fp, fq) = (config.flat_index(i, p), config.flat_index(i, q));
            for (r, row) in alpha_map.iter_mut().enumerate() {
                row[fq] += &inv[r][i];
                row[fp] -= &inv[r][i];
            }
        }
        for (i, (poly, &(p, q))) in system.polynomials().iter().zip(&cell.pairs).enumerate() {
            let s = poly.support();
            for k in (0..s.len()).filter(|&k| k != p && k != q) {
                let diff: Vec<i64> = s[p]
                    .iter()
                    .zip(&s[k])
                    .map(|(&u, &v)| u as i64 - v as i64)
                    .collect();
                let mut g: Vec<Rational> = (0..total)
                    .map(|c| {
                        diff.iter()
                            .enumerate()
                            .map(|(r, &d)| rat(d) * &alpha_map[r][c])
                            .sum()
                    })
                    .collect();
                g[config.flat_index(i, p)] += Rational::one();
                g[config.flat_index(i, k)] -= Rational::one();

                let zeta = primitive(&g)?;
                let mut gen = DualConeGenerator {
                    zeta,
                    origin: GeneratorOrigin {
                        cell: ci,
                        polynomial: i,
                        point: k,
                    },
                };
                if gen.pair_with_int(&w_flat).is_negative() {
                    gen.zeta.iter_mut().for_each(|v| *v = -*v);
                }
                if !out.iter().any(|o| o.zeta == gen.zeta) {
                    out.push(gen);
                }
            }
        }
    }
    Ok(out)
}

/// Clears denominators and divides by the content.
fn primitive(g: &[Rational]) -> Result<Vec<i64>> {
    let lcm = g
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = g.iter().map(|v| (v * &lcm).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter()
        .map(|v| {
            let r = if content.is_zero() { v.clone() } else { v / &content };
            r.to_i64().ok_or(RphError::Overflow {
                value: r.to_f64().unwrap_or(f64::INFINITY),
            })
        })
        .collect()
}

/// JSON dump of cells and generators: index pairs, exact normals as fraction
/// strings, volumes and generator entries.
pub fn cells_to_json(cells: &[MixedCell], generators: &[DualConeGenerator]) -> Value {
    json!({
        "cells": cells.iter().map(|c| json!({
            "pairs": c.pairs.iter().map(|&(p, q)| [p, q]).collect::<Vec<_>>(),
            "normal": c.normal.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "volume": c.volume,
        })).collect::<Vec<_>>(),
        "generators": generators.iter().map(|g| json!({
            "zeta": g.zeta,
            "cell": g.origin.cell,
            "polynomial": g.origin.polynomial,
            "point": g.origin.point,
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{linear_pair, running_example};
    use crate::poly::SparseSystem;

    fn running_integer_lifting() -> IntegerLifting {
        integerize(&running_example().log_lifting(), DEFAULT_SCALE).unwrap()
    }

    #[test]
    fn cayley_running_example() {
        let c = cayley(&running_example());
        assert_eq!(
            c.points(),
            &[
                vec![0, 0, 1, 0],
                vec![0, 1, 1, 0],
                vec![3, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 1, 0, 1],
                vec![0, 2, 0, 1],
            ]
        );
        assert_eq!(c.len(), 6);
        assert_eq!(c.block_offsets(), &[0..3, 3..6]);
    }

    #[test]
    fn cayley_single_polynomial() {
        let f = SparseSystem::from_terms(vec![vec![(vec![1], 1.0), (vec![0], -1.0)]]).unwrap();
        assert_eq!(cayley(&f).points(), &[vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn integerize_running_example() {
        let w = running_integer_lifting();
        // round(1e6 * ln c) cross-checked against 30-digit logarithms.
        assert_eq!(w.values(), &[vec![0, 10_085_809, 0], vec![2_197_225, 3_912_023, 0]]);
    }

    #[test]
    fn integerize_trivial_cases() {
        let zeros = Lifting::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(integerize(&zeros, 1e6).unwrap().flat(), vec![0; 4]);
        let ints = Lifting::new(vec![vec![3.0, -7.0], vec![11.0, 0.0]]);
        assert_eq!(integerize(&ints, 1.0).unwrap().flat(), vec![3, -7, 11, 0]);
        let half = Lifting::new(vec![vec![0.5, -0.5]]);
        assert_eq!(integerize(&half, 1.0).unwrap().flat(), vec![1, -1]);
        assert!(matches!(
            integerize(&Lifting::new(vec![vec![1e300]]), 1e6),
            Err(RphError::Overflow { .. })
        ));
        assert!(integerize(&zeros, 0.0).is_err());
    }

    #[test]
    fn running_example_cells() {
        let f = running_example();
        let cells = enumerate_mixed_cells(&f, &running_integer_lifting()).unwrap();
        let summary: Vec<_> = cells.iter().map(|c| (c.unordered_pairs(), c.volume)).collect();
        assert_eq!(
            summary,
            vec![(vec![(1, 2), (0, 1)], 4), (vec![(1, 2), (1, 2)], 2)]
        );
        // a_p is the lexicographically larger exponent.
        assert_eq!(cells[1].pairs, vec![(2, 1), (1, 2)]);
    }

    #[test]
    fn cell_normals_satisfy_strict_inequalities() {
        let f = running_example();
        let w = running_integer_lifting();
        for cell in enumerate_mixed_cells(&f, &w).unwrap() {
            for (i, (poly, &(p, q))) in f.polynomials().iter().zip(&cell.pairs).enumerate() {
                let lifted = |k: usize| {
                    exact::dot_int(&to_i64(&poly.support()[k]), &cell.normal) + rat(w.get(i, k))
                };
                assert_eq!(lifted(p), lifted(q));
                for k in (0..poly.len()).filter(|&k| k != p && k != q) {
                    assert!(lifted(k) < lifted(p));
                }
            }
        }
    }

    #[test]
    fn linear_system_single_cell() {
        let w = IntegerLifting::from_values(vec![vec![0, 0], vec![0, 0]]);
        let cells = enumerate_mixed_cells(&linear_pair(), &w).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].volume, 1);
    }

    #[test]
    fn zero_lifting_on_running_example_is_degenerate() {
        let w = IntegerLifting::from_values(vec![vec![0, 0, 0], vec![0, 0, 0]]);
        assert!(matches!(
            enumerate_mixed_cells(&running_example(), &w),
            Err(RphError::DegenerateLifting { .. })
        ));
    }

    #[test]
    fn mixed_volumes() {
        assert_eq!(mixed_volume(&running_example()).unwrap(), 6);
        assert_eq!(mixed_volume(&linear_pair()).unwrap(), 1);
        let lines = SparseSystem::from_terms(vec![
            vec![(vec![0, 0], 2.0), (vec![1, 0], -3.0), (vec![0, 1], 5.0)],
            vec![(vec![0, 0], 7.0), (vec![1, 0], 1.5), (vec![0, 1], -4.0)],
        ])
        .unwrap();
        assert_eq!(mixed_volume(&lines).unwrap(), 1);
    }

    #[test]
    fn mixed_volume_independent_of_seed() {
        let f = running_example();
        for seed in 0..10 {
            assert_eq!(mixed_volume_seeded(&f, seed).unwrap(), 6);
        }
    }

    #[test]
    fn cells_invariant_under_integer_scaling() {
        let f = running_example();
        let w = running_integer_lifting();
        let base = enumerate_mixed_cells(&f, &w).unwrap();
        for k in [2, 10] {
            let scaled = enumerate_mixed_cells(&f, &w.scaled(k)).unwrap();
            let pairs = |cs: &[MixedCell]| cs.iter().map(|c| (c.pairs.clone(), c.volume)).collect::<Vec<_>>();
            assert_eq!(pairs(&base), pairs(&scaled));
        }
    }

    #[test]
    fn generators_of_linear_system_are_empty() {
        let f = linear_pair();
        let w = IntegerLifting::from_values(vec![vec![0, 0], vec![0, 0]]);
        let cells = enumerate_mixed_cells(&f, &w).unwrap();
        assert!(dual_cone_generators(&f, &cells, &w).unwrap().is_empty());
    }

    #[test]
    fn running_example_generators() {
        let f = running_example();
        let w = running_integer_lifting();
        let cells = enumerate_mixed_cells(&f, &w).unwrap();
        let gens = dual_cone_generators(&f, &cells, &w).unwrap();
        // Four raw facet functionals; the two coming from support 2 coincide.
        let zetas: Vec<_> = gens.iter().map(|g| g.zeta.clone()).collect();
        assert_eq!(
            zetas,
            vec![
                vec![-4, 3, 1, 3, -3, 0],
                vec![0, 1, -1, -1, 3, -2],
                vec![-2, 3, -1, 0, 3, -3],
            ]
        );
        let wf = w.flat();
        for g in &gens {
            assert!(g.pair_with_int(&wf) > BigInt::zero());
            let content = g.zeta.iter().fold(0i64, |acc, &v| acc.gcd(&v));
            assert_eq!(content, 1);
        }
    }

    /// Each generator must be proportional to the facet slack computed
    /// directly (floating point) from perturbed liftings.
    #[test]
    fn generators_match_direct_facet_slack() {
        let f = running_example();
        let w = running_integer_lifting();
        let cells = enumerate_mixed_cells(&f, &w).unwrap();
        let gens = dual_cone_generators(&f, &cells, &w).unwrap();
        let config = cayley(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in &gens {
            let cell = &cells[g.origin.cell];
            let (i, k) = (g.origin.polynomial, g.origin.point);
            let mut ratio = None;
            for _ in 0..5 {
                let u: Vec<f64> = w.flat().iter().map(|&v| v as f64 + rng.random_range(-1e5..1e5)).collect();
                let m = cell.edge_matrix(&f);
                let d: Vec<f64> = cell
                    .pairs
                    .iter()
                    .enumerate()
                    .map(|(r, &(p, q))| u[config.flat_index(r, q)] - u[config.flat_index(r, p)])
                    .collect();
                // 2x2 Cramer solve
                let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) as f64;
                let alpha = [
                    (d[0] * m[1][1] as f64 - m[0][1] as f64 * d[1]) / det,
                    (m[0][0] as f64 * d[1] - d[0] * m[1][0] as f64) / det,
                ];
                let s = f.polynomials()[i].support();
                let p = cell.pairs[i].0;
                let lift = |idx: usize| {
                    s[idx][0] as f64 * alpha[0] + s[idx][1] as f64 * alpha[1] + u[config.flat_index(i, idx)]
                };
                let slack = lift(p) - lift(k);
                let r = g.pair_with(&u) / slack;
                assert!(r > 0.0);
                if let Some(r0) = ratio {
                    let r0: f64 = r0;
                    assert!(((r - r0) / r0).abs() < 1e-9);
                }
                ratio = Some(r);
            }
        }
    }

    #[test]
    fn cells_dump_json() {
        let f = running_example();
        let w = running_integer_lifting();
        let cells = enumerate_mixed_cells(&f, &w).unwrap();
        let gens = dual_cone_generators(&f, &cells, &w).unwrap();
        let v = cells_to_json(&cells, &gens);
        assert_eq!(v["cells"].as_array().unwrap().len(), 2);
        assert_eq!(v["cells"][0]["volume"], 4);
        assert!(v["cells"][0]["normal"][0].as_str().is_some());
        assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    }
}
