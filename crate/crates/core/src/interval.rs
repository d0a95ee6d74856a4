//! Interval arithmetic with epsilon inflation.
//!
//! Every operation computes the endpoints in round-to-nearest and then widens
//! each endpoint outward by a few ulps, so results always enclose the exact
//! real result without touching the FPU rounding mode.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::poly::SparseSystem;

/// ulps added to each endpoint of an elementary operation.
const INFLATE_ULPS: u32 = 2;

fn down(mut v: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        v = v.next_down();
    }
    v
}

fn up(mut v: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        v = v.next_up();
    }
    v
}

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// `[lo, hi]` taken as exact endpoints.
    pub fn new(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Self::ENTIRE;
        }
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self::new(v, v)
    }

    /// `[c - r, c + r]`, widened outward.
    pub fn centered(c: f64, r: f64) -> Self {
        Self::inflated(c - r, c + r, INFLATE_ULPS)
    }

    fn inflated(lo: f64, hi: f64, ulps: u32) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Self::ENTIRE;
        }
        Interval {
            lo: down(lo, ulps),
            hi: up(hi, ulps),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the open interior of `other`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `self^e` for a nonnegative integer exponent.
    pub fn powi(self, e: u32) -> Self {
        if e == 0 {
            return Self::point(1.0);
        }
        if e == 1 {
            return self;
        }
        let p = |v: f64| v.powi(e as i32);
        // powi rounds once per multiplication.
        let ulps = INFLATE_ULPS * e;
        if e % 2 == 1 || self.lo >= 0.0 {
            Self::inflated(p(self.lo), p(self.hi), ulps)
        } else if self.hi <= 0.0 {
            Self::inflated(p(self.hi), p(self.lo), ulps)
        } else {
            Interval {
                lo: 0.0,
                hi: up(p(self.mag()), ulps),
            }
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::inflated(self.lo + o.lo, self.hi + o.hi, INFLATE_ULPS)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::inflated(self.lo - o.hi, self.hi - o.lo, INFLATE_ULPS)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let prods = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        if prods.iter().any(|v| v.is_nan()) {
            // 0 * inf
            return Interval::ENTIRE;
        }
        let lo = prods.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = prods.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::inflated(lo, hi, INFLATE_ULPS)
    }
}

impl Mul<Interval> for f64 {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        Interval::point(self) * o
    }
}

/// A box `X_1 x ... x X_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox {
    components: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(components: Vec<Interval>) -> Self {
        IntervalBox { components }
    }

    pub fn point(x: &[f64]) -> Self {
        Self::new(x.iter().map(|&v| Interval::point(v)).collect())
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.components.iter().zip(x).all(|(c, &v)| c.contains(v))
    }

    pub fn subset_of(&self, other: &IntervalBox) -> bool {
        self.components
            .iter()
            .zip(&other.components)
            .all(|(a, b)| a.subset_of(b))
    }

    pub fn interior_of(&self, other: &IntervalBox) -> bool {
        self.components
            .iter()
            .zip(&other.components)
            .all(|(a, b)| a.interior_of(b))
    }

    /// Boxes are disjoint when some coordinate interval pair is disjoint.
    pub fn disjoint(&self, other: &IntervalBox) -> bool {
        self.components
            .iter()
            .zip(&other.components)
            .any(|(a, b)| !a.intersects(b))
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.components.iter().map(Interval::mid).collect()
    }
}

fn interval_monomial(a: &[u32], x: &IntervalBox) -> Interval {
    a.iter()
        .zip(x.components())
        .filter(|(&e, _)| e > 0)
        .fold(Interval::point(1.0), |acc, (&e, xi)| acc * xi.powi(e))
}

/// Enclosure of `F` over `x`, term by term.
pub fn interval_eval(system: &SparseSystem, x: &IntervalBox) -> IntervalBox {
    IntervalBox::new(
        system
            .polynomials()
            .iter()
            .map(|p| {
                p.terms().fold(Interval::point(0.0), |acc, (a, c)| {
                    acc + c * interval_monomial(a, x)
                })
            })
            .collect(),
    )
}

/// Enclosure of the Jacobian of `F` over `x` by termwise differentiation.
pub fn interval_jacobian(system: &SparseSystem, x: &IntervalBox) -> Vec<Vec<Interval>> {
    let n = system.n_vars();
    system
        .polynomials()
        .iter()
        .map(|p| {
            (0..n)
                .map(|j| {
                    p.terms()
                        .filter(|(a, _)| a[j] > 0)
                        .fold(Interval::point(0.0), |acc, (a, c)| {
                            let mut lowered = a.clone();
                            lowered[j] -= 1;
                            acc + (c * a[j] as f64) * interval_monomial(&lowered, x)
                        })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::running_example;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_minus_one_range() {
        let f = SparseSystem::from_terms(vec![vec![(vec![2], 1.0), (vec![0], -1.0)]]).unwrap();
        let r = interval_eval(&f, &IntervalBox::new(vec![Interval::new(-2.0, 2.0)]));
        let r = r.components()[0];
        assert!(r.lo() <= -1.0 && r.hi() >= 3.0);
        assert!(r.lo() > -1.0 - 1e-12 && r.hi() < 3.0 + 1e-12);
    }

    #[test]
    fn point_box_at_solution_contains_zero() {
        let f = running_example();
        // Root refined to 30 digits.
        let x = [8.111114476617955, 0.02219298606763958];
        let r = interval_eval(&f, &IntervalBox::point(&x));
        for (c, s) in r.components().iter().zip(f.term_scales(&x)) {
            assert!(c.width() < 1e-8 * s);
            assert!(c.lo() <= 1e-12 * s && c.hi() >= -1e-12 * s);
        }
    }

    #[test]
    fn inclusion_isotonic() {
        let f = running_example();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let inner: Vec<Interval> = (0..2)
                .map(|_| {
                    let c = rng.random_range(-5.0..5.0);
                    Interval::centered(c, rng.random_range(0.0..1.0))
                })
                .collect();
            let outer: Vec<Interval> = inner
                .iter()
                .map(|i| Interval::new(i.lo() - rng.random_range(0.0..1.0), i.hi() + rng.random_range(0.0..1.0)))
                .collect();
            let a = interval_eval(&f, &IntervalBox::new(inner));
            let b = interval_eval(&f, &IntervalBox::new(outer));
            assert!(a.subset_of(&b));
        }
    }

    #[test]
    fn enclosure_of_point_evaluation() {
        let f = running_example();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let x: [f64; 2] = [rng.random_range(-100.0..100.0), rng.random_range(-100.0..100.0)];
            let b = IntervalBox::new(x.iter().map(|&v| Interval::new(v.next_down(), v.next_up())).collect());
            assert!(interval_eval(&f, &b).contains(&f.evaluate(&x)));
        }
    }

    #[test]
    fn powers_and_products() {
        let x = Interval::new(-3.0, 2.0);
        let sq = x.powi(2);
        assert_eq!(sq.lo(), 0.0);
        assert!(sq.hi() >= 9.0);
        let cube = x.powi(3);
        assert!(cube.lo() <= -27.0 && cube.hi() >= 8.0);
        let p = Interval::new(-1.0, 2.0) * Interval::new(3.0, 4.0);
        assert!(p.lo() <= -4.0 && p.hi() >= 8.0);
        let neg = Interval::new(-2.0, -1.0).powi(2);
        assert!(neg.lo() <= 1.0 && neg.hi() >= 4.0 && neg.lo() > 0.0);
    }

    #[test]
    fn disjointness_is_symmetric_and_reflexive_safe() {
        let a = IntervalBox::new(vec![Interval::new(0.0, 1.0), Interval::new(0.0, 1.0)]);
        let b = IntervalBox::new(vec![Interval::new(2.0, 3.0), Interval::new(0.5, 0.7)]);
        assert!(a.disjoint(&b) && b.disjoint(&a));
        assert!(!a.disjoint(&a));
    }
}
