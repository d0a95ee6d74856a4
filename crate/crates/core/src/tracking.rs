//! Real polyhedral homotopy construction and path tracking.
//!
//! For a mixed cell with normal `alpha` (computed on the real lifting `w`) the
//! homotopy is `H(x, t)_i = sum_a c_a t^{m_{i,a}} x^a` with
//! `m_{i,a} = v_i - (<a, alpha> + w(a)) >= 0`, zero exactly on the cell pair.
//! At `t = 0` only the binomial start system survives; at `t = 1` it is `F`.

use serde_json::{json, Value};
use rayon::prelude::*;

use crate::binomial::{binomials_from_cells, solve_binomial_real};
use crate::certify::{certify_point, certify_solution_set, SetCertificate};
use crate::error::{Result, RphError};
use crate::linalg::{self, max_norm};
use crate::mixed_cells::{dual_cone_generators, log_subdivision, MixedCell, DEFAULT_SCALE};
use crate::patchwork::evaluate_margins;
use crate::poly::{monomial, Lifting, SparseSystem};

/// Exponents more negative than this mean the cell and lifting disagree.
const EXPONENT_TOLERANCE: f64 = 1e-9;

/// Endpoints closer than this (relative) are reported once.
pub const DEDUP_TOLERANCE: f64 = 1e-8;

/// Start points must solve their binomial system to this relative accuracy.
pub const START_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerOptions {
    pub t_start: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub max_steps: usize,
    pub step_expand: f64,
    pub step_shrink: f64,
    /// Paths whose max-norm exceeds this are declared diverged.
    pub divergence_bound: f64,
}

impl Default for TrackerOptions {
    fn default() -> Self {
        TrackerOptions {
            t_start: 1e-6,
            initial_step: 1e-4,
            min_step: 1e-14,
            newton_tol: 1e-10,
            max_newton_iters: 8,
            max_steps: 100_000,
            step_expand: 2.0,
            step_shrink: 0.5,
            divergence_bound: 1e12,
        }
    }
}

impl TrackerOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(RphError::Invalid(msg.to_string()));
        if !(self.t_start > 0.0 && self.t_start < 1.0) {
            return bad("t_start must lie in (0, 1)");
        }
        if !(self.min_step > 0.0 && self.min_step < self.initial_step) {
            return bad("need 0 < min_step < initial_step");
        }
        if !(self.newton_tol > 0.0) {
            return bad("newton_tol must be positive");
        }
        if self.max_newton_iters == 0 || self.max_steps == 0 {
            return bad("iteration limits must be positive");
        }
        if !(self.step_expand > 1.0 && self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return bad("need step_expand > 1 and 0 < step_shrink < 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealPolyhedralHomotopy {
    target: SparseSystem,
    exponents: Vec<Vec<f64>>,
    source_cell: usize,
}

impl RealPolyhedralHomotopy {
    /// Builds a homotopy from explicit exponents (one per support point).
    pub fn from_exponents(target: SparseSystem, exponents: Vec<Vec<f64>>, source_cell: usize) -> Result<Self> {
        let congruent = exponents.len() == target.n_vars()
            && exponents
                .iter()
                .zip(target.polynomials())
                .all(|(e, p)| e.len() == p.len());
        if !congruent {
            return Err(RphError::Invalid("exponents do not match the system's supports".into()));
        }
        if let Some(&v) = exponents.iter().flatten().find(|v| !(**v >= 0.0)) {
            return Err(RphError::ConventionViolation { value: v });
        }
        Ok(RealPolyhedralHomotopy {
            target,
            exponents,
            source_cell,
        })
    }

    pub fn target(&self) -> &SparseSystem {
        &self.target
    }

    pub fn exponents(&self) -> &[Vec<f64>] {
        &self.exponents
    }

    pub fn source_cell(&self) -> usize {
        self.source_cell
    }

    pub fn n_vars(&self) -> usize {
        self.target.n_vars()
    }

    /// True when no term carries a positive power of `t`.
    pub fn is_constant(&self) -> bool {
        self.exponents.iter().flatten().all(|&m| m == 0.0)
    }

    fn weighted_terms(&self, i: usize, t: f64) -> impl Iterator<Item = (&Vec<u32>, f64, f64)> + '_ {
        let p = &self.target.polynomials()[i];
        p.terms()
            .zip(&self.exponents[i])
            .map(move |((a, c), &m)| (a, c * t_power(t, m), m))
    }

    pub fn evaluate(&self, x: &[f64], t: f64) -> Vec<f64> {
        (0..self.n_vars())
            .map(|i| self.weighted_terms(i, t).map(|(a, c, _)| c * monomial(a, x)).sum())
            .collect()
    }

    pub fn jacobian_x(&self, x: &[f64], t: f64) -> Vec<Vec<f64>> {
        let n = self.n_vars();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.weighted_terms(i, t)
                            .filter(|(a, _, _)| a[j] > 0)
                            .map(|(a, c, _)| {
                                let mut lowered = a.clone();
                                lowered[j] -= 1;
                                c * a[j] as f64 * monomial(&lowered, x)
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// `dH/dt`; requires `t > 0` whenever some exponent lies in `(0, 1)`.
    pub fn derivative_t(&self, x: &[f64], t: f64) -> Vec<f64> {
        (0..self.n_vars())
            .map(|i| {
                let p = &self.target.polynomials()[i];
                p.terms()
                    .zip(&self.exponents[i])
                    .filter(|(_, &m)| m != 0.0)
                    .map(|((a, c), &m)| c * m * t.powf(m - 1.0) * monomial(a, x))
                    .sum()
            })
            .collect()
    }

    /// `max_i |H_i| / max(1, largest term of H_i)`.
    pub fn relative_residual(&self, x: &[f64], t: f64) -> f64 {
        (0..self.n_vars())
            .map(|i| {
                let (sum, scale) = self
                    .weighted_terms(i, t)
                    .map(|(a, c, _)| c * monomial(a, x))
                    .fold((0.0, 0.0f64), |(s, m), v| (s + v, m.max(v.abs())));
                sum.abs() / scale.max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

fn t_power(t: f64, m: f64) -> f64 {
    if m == 0.0 {
        1.0
    } else {
        t.powf(m)
    }
}

/// Exponents `m_{i,a} = v_i - (<a, alpha> + w(a))` for `cell`, with `alpha`
/// solved on the real lifting `w`.
pub fn build_homotopy(
    system: &SparseSystem,
    cell: &MixedCell,
    w: &Lifting,
    cell_index: usize,
) -> Result<RealPolyhedralHomotopy> {
    if !w.matches(system) {
        return Err(RphError::Invalid("lifting shape does not match the system".into()));
    }
    let edges: Vec<Vec<f64>> = cell
        .edge_matrix(system)
        .iter()
        .map(|r| r.iter().map(|&v| v as f64).collect())
        .collect();
    let rhs: Vec<f64> = cell
        .pairs
        .iter()
        .enumerate()
        .map(|(i, &(p, q))| w.get(i, q) - w.get(i, p))
        .collect();
    let alpha = linalg::solve(&edges, &rhs).ok_or(RphError::SingularExponent)?;

    let mut exponents = Vec::with_capacity(system.n_vars());
    for (i, (poly, &(p, q))) in system.polynomials().iter().zip(&cell.pairs).enumerate() {
        let lifted = |k: usize| -> f64 {
            poly.support()[k]
                .iter()
                .zip(&alpha)
                .map(|(&e, a)| e as f64 * a)
                .sum::<f64>()
                + w.get(i, k)
        };
        let top = lifted(p);
        let mut row = Vec::with_capacity(poly.len());
        for k in 0..poly.len() {
            if k == p || k == q {
                row.push(0.0);
                continue;
            }
            let m = top - lifted(k);
            if m < -EXPONENT_TOLERANCE {
                return Err(RphError::ConventionViolation { value: m });
            }
            row.push(m.max(0.0));
        }
        exponents.push(row);
    }
    RealPolyhedralHomotopy::from_exponents(system.clone(), exponents, cell_index)
}

/// `dx/dt = -(dH/dx)^{-1} dH/dt`.
pub fn davidenko_velocity(h: &RealPolyhedralHomotopy, x: &[f64], t: f64) -> Result<Vec<f64>> {
    let ht = h.derivative_t(x, t);
    let v = linalg::solve(&h.jacobian_x(x, t), &ht).ok_or(RphError::SingularJacobian)?;
    Ok(v.into_iter().map(|c| -c).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Correction {
    pub x: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    pub singular: bool,
}

/// Newton's method on `H(., t)` until the relative residual drops below
/// `newton_tol` or `max_newton_iters` updates have been made.
pub fn newton_correct(
    h: &RealPolyhedralHomotopy,
    x: &[f64],
    t: f64,
    opts: &TrackerOptions,
) -> Correction {
    let mut x = x.to_vec();
    let mut iterations = 0;
    loop {
        let residual = h.relative_residual(&x, t);
        let done = |x, converged, singular| Correction {
            x,
            converged,
            iterations,
            residual,
            singular,
        };
        if !residual.is_finite() {
            return done(x, false, false);
        }
        if residual < opts.newton_tol {
            return done(x, true, false);
        }
        if iterations == opts.max_newton_iters {
            return done(x, false, false);
        }
        let r = h.evaluate(&x, t);
        let Some(dx) = linalg::solve(&h.jacobian_x(&x, t), &r) else {
            return done(x, false, true);
        };
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi -= d;
        }
        iterations += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathStatus {
    Success,
    Diverged,
    StepLimit,
    NewtonFailure,
}

impl PathStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PathStatus::Success => "success",
            PathStatus::Diverged => "diverged",
            PathStatus::StepLimit => "step-limit",
            PathStatus::NewtonFailure => "newton-failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub status: PathStatus,
    /// Meaningful only on success; otherwise the last accepted point.
    pub endpoint: Vec<f64>,
    pub final_residual: f64,
    /// Accepted steps.
    pub steps_taken: usize,
    pub newton_iters_total: usize,
    /// Parameter value reached.
    pub t_reached: f64,
}

/// Largest componentwise change relative to `max(|x_i|, 1e-300)`.
fn relative_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v).abs() / u.abs().max(v.abs()).max(1e-300))
        .fold(0.0, f64::max)
}

/// A predicted point whose Newton correction moves more than this
/// (componentwise relative) is treated as a failed step.
const MAX_CORRECTION: f64 = 0.1;

/// Consecutive accepted steps before the step size grows.
const EXPAND_AFTER: usize = 3;

/// Extra Newton iterations run at `t = 1`.
const POLISH_ITERS: usize = 3;

fn rk4_step(h: &RealPolyhedralHomotopy, x: &[f64], t: f64, dt: f64) -> Result<Vec<f64>> {
    let axpy = |a: f64, v: &[f64]| -> Vec<f64> { x.iter().zip(v).map(|(xi, vi)| xi + a * vi).collect() };
    let k1 = davidenko_velocity(h, x, t)?;
    let k2 = davidenko_velocity(h, &axpy(0.5 * dt, &k1), t + 0.5 * dt)?;
    let k3 = davidenko_velocity(h, &axpy(0.5 * dt, &k2), t + 0.5 * dt)?;
    let k4 = davidenko_velocity(h, &axpy(dt, &k3), t + dt)?;
    Ok(x.iter()
        .enumerate()
        .map(|(i, xi)| xi + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Tracks one real start point `x0` of `H(., 0)` to `t = 1`.
///
/// The path is seeded at `t_start` by Newton-correcting `x0`, then advanced
/// with an RK4 predictor on the Davidenko field and a Newton corrector. The
/// step halves on rejection and doubles after three consecutive acceptances;
/// the last step lands exactly on `t = 1`.
pub fn track_path(h: &RealPolyhedralHomotopy, x0: &[f64], opts: &TrackerOptions) -> PathResult {
    let mut newton_total = 0;
    let finish = |status, x: Vec<f64>, residual, steps, newton, t| PathResult {
        status,
        endpoint: x,
        final_residual: residual,
        steps_taken: steps,
        newton_iters_total: newton,
        t_reached: t,
    };

    if h.is_constant() {
        let c = newton_correct(h, x0, 1.0, opts);
        let status = if c.converged { PathStatus::Success } else { PathStatus::NewtonFailure };
        return finish(status, c.x, c.residual, 1, c.iterations, 1.0);
    }

    let seed = newton_correct(h, x0, opts.t_start, opts);
    newton_total += seed.iterations;
    if !seed.converged {
        return finish(PathStatus::NewtonFailure, seed.x, seed.residual, 0, newton_total, opts.t_start);
    }
    let mut x = seed.x;
    let mut t = opts.t_start;
    let mut residual = seed.residual;
    let mut dt = opts.initial_step;
    let mut accepted = 0;
    let mut streak = 0;
    let mut attempts = 0;
    let mut singular_streak = 0;

    while t < 1.0 {
        if attempts >= opts.max_steps {
            return finish(PathStatus::StepLimit, x, residual, accepted, newton_total, t);
        }
        attempts += 1;
        let step = dt.min(1.0 - t);
        let t_next = if 1.0 - (t + step) <= f64::EPSILON { 1.0 } else { t + step };
        let step = t_next - t;

        let outcome = rk4_step(h, &x, t, step).map(|pred| {
            let c = newton_correct(h, &pred, t_next, opts);
            let jump = relative_change(&pred, &c.x);
            (c, jump)
        });
        let ok = match outcome {
            Ok((c, jump)) => {
                newton_total += c.iterations;
                singular_streak = if c.singular { singular_streak + 1 } else { 0 };
                if c.converged && jump < MAX_CORRECTION {
                    x = c.x;
                    residual = c.residual;
                    true
                } else {
                    false
                }
            }
            Err(_) => {
                singular_streak += 1;
                false
            }
        };

        if ok {
            t = t_next;
            accepted += 1;
            streak += 1;
            if streak >= EXPAND_AFTER {
                dt *= opts.step_expand;
                streak = 0;
            }
            if max_norm(&x) > opts.divergence_bound {
                return finish(PathStatus::Diverged, x, residual, accepted, newton_total, t);
            }
        } else {
            streak = 0;
            dt = step * opts.step_shrink;
            if singular_streak >= 3 {
                return finish(PathStatus::Diverged, x, residual, accepted, newton_total, t);
            }
            if dt < opts.min_step {
                return finish(PathStatus::NewtonFailure, x, residual, accepted, newton_total, t);
            }
        }
    }

    // Polish at t = 1, keeping iterates that do not increase the residual.
    for _ in 0..POLISH_ITERS {
        let r = h.evaluate(&x, 1.0);
        let Some(dx) = linalg::solve(&h.jacobian_x(&x, 1.0), &r) else {
            break;
        };
        let cand: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a - d).collect();
        let cand_res = h.relative_residual(&cand, 1.0);
        newton_total += 1;
        if cand_res <= residual {
            let settled = cand == x;
            x = cand;
            residual = cand_res;
            if settled {
                break;
            }
        } else {
            break;
        }
    }
    let status = if residual < opts.newton_tol {
        PathStatus::Success
    } else {
        PathStatus::NewtonFailure
    };
    finish(status, x, residual, accepted, newton_total, 1.0)
}

/// One tracked path with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedPath {
    pub cell: usize,
    pub start_index: usize,
    pub start: Vec<f64>,
    pub result: PathResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackCertification {
    /// Every start point solves its binomial system and passes Krawczyk on it.
    pub start_points_verified: bool,
    pub endpoints: SetCertificate,
    pub flag: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Distinct successful endpoints, ordered by cell then start point.
    pub solutions: Vec<Vec<f64>>,
    pub paths: Vec<TrackedPath>,
    pub start_count: usize,
    /// Whether the patchwork certificate holds for the input.
    pub certified_input: bool,
    pub certification: Option<TrackCertification>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    /// `Some(1)` / `Some(0)` when certification was requested.
    pub fn certificate_flag(&self) -> Option<u8> {
        self.certification.as_ref().map(|c| u8::from(c.flag))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "solutions": self.solutions,
            "start_count": self.start_count,
            "certified_input": self.certified_input,
            "certificate": self.certificate_flag(),
            "paths": self.paths.iter().map(|p| json!({
                "cell": p.cell,
                "start_index": p.start_index,
                "start": p.start,
                "status": p.result.status.as_str(),
                "endpoint": p.result.endpoint,
                "residual": p.result.final_residual,
                "steps": p.result.steps_taken,
                "newton_iterations": p.result.newton_iters_total,
            })).collect::<Vec<_>>(),
            "certification": self.certification.as_ref().map(|c| json!({
                "flag": u8::from(c.flag),
                "start_points_verified": c.start_points_verified,
                "endpoints": c.endpoints.to_json(),
            })),
            "warnings": self.warnings,
        })
    }
}

pub fn rph_track(system: &SparseSystem, opts: &TrackerOptions, certify: bool) -> Result<SolveReport> {
    rph_track_scaled(system, opts, certify, DEFAULT_SCALE)
}

/// Generates the start systems, tracks every real start point and optionally
/// certifies start points and endpoints.
pub fn rph_track_scaled(
    system: &SparseSystem,
    opts: &TrackerOptions,
    certify: bool,
    scale: f64,
) -> Result<SolveReport> {
    opts.validate()?;
    let sub = log_subdivision(system, scale)?;
    let generators = dual_cone_generators(system, &sub.cells, &sub.integer_lifting)?;
    let (certified_input, _) = evaluate_margins(&generators, &sub.lifting.flat(), system.total_terms());
    let mut warnings = system.validation_warnings();
    if !certified_input {
        warnings.push("system is not certified patchworked; tracking is heuristic".to_string());
    }

    let binomials = binomials_from_cells(system, &sub.cells);
    let mut homotopies = Vec::with_capacity(sub.cells.len());
    let mut jobs = Vec::new();
    for (k, (cell, b)) in sub.cells.iter().zip(&binomials).enumerate() {
        homotopies.push(build_homotopy(system, cell, &sub.lifting, k)?);
        for (idx, start) in solve_binomial_real(b)?.into_iter().enumerate() {
            jobs.push((k, idx, start));
        }
    }

    let paths: Vec<TrackedPath> = jobs
        .par_iter()
        .map(|(k, idx, start)| TrackedPath {
            cell: *k,
            start_index: *idx,
            start: start.clone(),
            result: track_path(&homotopies[*k], start, opts),
        })
        .collect();

    let mut solutions: Vec<Vec<f64>> = Vec::new();
    for p in paths.iter().filter(|p| p.result.status == PathStatus::Success) {
        let x = &p.result.endpoint;
        if solutions.iter().any(|s| relative_distance(s, x) < DEDUP_TOLERANCE) {
            warnings.push(format!(
                "path from cell {} start {} reached an endpoint already found",
                p.cell, p.start_index
            ));
        } else {
            solutions.push(x.clone());
        }
    }
    for p in paths.iter().filter(|p| p.result.status != PathStatus::Success) {
        warnings.push(format!(
            "path from cell {} start {} failed: {}",
            p.cell,
            p.start_index,
            p.result.status.as_str()
        ));
    }

    let certification = certify.then(|| {
        let start_points_verified = paths.iter().all(|p| {
            let b = &binomials[p.cell];
            b.relative_residual(&p.start) < START_TOLERANCE
                && certify_point(&b.as_system(), &p.start).certified
        });
        let endpoints = certify_solution_set(system, &solutions, paths.len());
        let flag = start_points_verified && endpoints.flag;
        TrackCertification {
            start_points_verified,
            endpoints,
            flag,
        }
    });

    Ok(SolveReport {
        solutions,
        start_count: paths.len(),
        paths,
        certified_input,
        certification,
        warnings,
    })
}

/// `||a - b||_inf / max(||a||_inf, ||b||_inf)`.
pub fn relative_distance(a: &[f64], b: &[f64]) -> f64 {
    let d = a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
    d / max_norm(a).max(max_norm(b)).max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::generate_binomials;
    use crate::fixtures::{linear_pair, running_example, trinomial_pair};
    use crate::mixed_cells::log_subdivision;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn homotopies(f: &SparseSystem) -> Vec<RealPolyhedralHomotopy> {
        let sub = log_subdivision(f, DEFAULT_SCALE).unwrap();
        sub.cells
            .iter()
            .enumerate()
            .map(|(k, c)| build_homotopy(f, c, &sub.lifting, k).unwrap())
            .collect()
    }

    const REFERENCE_ROOTS: [[f64; 2]; 4] = [
        [-1095.4451129504978, -54772.25548320812],
        [1095.4451137838312, 54772.255524874796],
        [8.111114476617955, 0.02219298606763958],
        [-8.103507635567631, -0.022213821121964985],
    ];

    #[test]
    fn exponent_structure() {
        let f = running_example();
        for h in homotopies(&f) {
            for row in h.exponents() {
                let zeros = row.iter().filter(|&&m| m == 0.0).count();
                assert_eq!(zeros, 2);
                assert!(row.iter().all(|&m| m >= 0.0));
            }
        }
        // Cell with pairs {y, x^3} and {-9, 50xy}: only -1 and -y^2 are lifted.
        let h = &homotopies(&f)[0];
        assert_eq!(h.exponents()[0][1..], [0.0, 0.0]);
        assert!(h.exponents()[0][0] > 0.0);
        assert_eq!(h.exponents()[1][..2], [0.0, 0.0]);
        assert!(h.exponents()[1][2] > 0.0);
    }

    #[test]
    fn homotopy_extremes() {
        let f = running_example();
        let bs = generate_binomials(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (h, b) in homotopies(&f).iter().zip(&bs) {
            let bsys = b.as_system();
            for _ in 0..10 {
                let x = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
                assert_eq!(h.evaluate(&x, 1.0), f.evaluate(&x));
                assert_eq!(h.evaluate(&x, 0.0), bsys.evaluate(&x));
            }
        }
    }

    #[test]
    fn constant_and_linear_velocity() {
        let f = linear_pair();
        let sub = log_subdivision(&f, DEFAULT_SCALE).unwrap();
        let h = build_homotopy(&f, &sub.cells[0], &sub.lifting, 0).unwrap();
        assert!(h.is_constant());
        assert_eq!(davidenko_velocity(&h, &[1.0, 1.0], 0.5).unwrap(), vec![0.0, 0.0]);

        // x - t as c_1 x + c_2 t^1
        let g = SparseSystem::from_terms(vec![vec![(vec![1], 1.0), (vec![0], -1.0)]]).unwrap();
        let h = RealPolyhedralHomotopy::from_exponents(g, vec![vec![0.0, 1.0]], 0).unwrap();
        for t in [0.1, 0.5, 0.9] {
            assert_eq!(davidenko_velocity(&h, &[t], t).unwrap(), vec![1.0]);
        }
    }

    #[test]
    fn newton_cases() {
        let f = running_example();
        let h = RealPolyhedralHomotopy::from_exponents(f.clone(), vec![vec![0.0; 3]; 2], 0).unwrap();
        let opts = TrackerOptions::default();

        let exact = newton_correct(&h, &REFERENCE_ROOTS[2], 1.0, &opts);
        assert!(exact.converged);
        assert_eq!(exact.iterations, 0);
        assert_eq!(exact.x, REFERENCE_ROOTS[2].to_vec());

        for root in REFERENCE_ROOTS {
            let start: Vec<f64> = root.iter().map(|v| v * (1.0 + 1e-4)).collect();
            let c = newton_correct(&h, &start, 1.0, &opts);
            assert!(c.converged);
            assert!(c.iterations <= 4, "{} iterations", c.iterations);
            assert!(relative_distance(&c.x, &root) < 1e-9);
        }

        let origin = newton_correct(&h, &[0.0, 0.0], 1.0, &opts);
        assert!(!origin.converged);
    }

    #[test]
    fn constant_homotopy_tracks_in_one_step() {
        let f = linear_pair();
        let sub = log_subdivision(&f, DEFAULT_SCALE).unwrap();
        let h = build_homotopy(&f, &sub.cells[0], &sub.lifting, 0).unwrap();
        let r = track_path(&h, &[1.0, 1.0], &TrackerOptions::default());
        assert_eq!(r.status, PathStatus::Success);
        assert_eq!(r.endpoint, vec![1.0, 1.0]);
        assert_eq!(r.steps_taken, 1);
    }

    #[test]
    fn running_example_paths() {
        let report = rph_track(&running_example(), &TrackerOptions::default(), false).unwrap();
        assert!(report.certified_input);
        assert_eq!(report.start_count, 4);
        assert_eq!(report.solutions.len(), 4);
        for root in REFERENCE_ROOTS {
            assert!(
                report.solutions.iter().any(|s| s.iter().zip(root).all(|(a, b)| ((a - b) / b).abs() < 1e-6)),
                "missing {root:?}"
            );
        }
    }

    #[test]
    fn velocity_matches_finite_differences() {
        let f = running_example();
        let opts = TrackerOptions::default();
        let bs = generate_binomials(&f).unwrap();
        for (h, b) in homotopies(&f).iter().zip(&bs) {
            for start in solve_binomial_real(b).unwrap() {
                for t in [0.05, 0.3, 0.7] {
                    let mut o = opts.clone();
                    o.t_start = opts.t_start;
                    let seeded = newton_correct(h, &start, opts.t_start, &o).x;
                    // Track to t with a sub-run of the homotopy.
                    let x_t = track_to(h, &seeded, t, &o);
                    let hstep = 1e-4;
                    let tight = TrackerOptions { newton_tol: 1e-13, max_newton_iters: 20, ..o.clone() };
                    let fwd = newton_correct(h, &x_t, t + hstep, &tight);
                    let bwd = newton_correct(h, &x_t, t - hstep, &tight);
                    assert!(fwd.converged && bwd.converged);
                    let v = davidenko_velocity(h, &x_t, t).unwrap();
                    for j in 0..2 {
                        let fd = (fwd.x[j] - bwd.x[j]) / (2.0 * hstep);
                        let tol = 1e-4 * v[j].abs() + 1e-9 * x_t[j].abs();
                        assert!((fd - v[j]).abs() <= tol, "fd {fd} vs {}", v[j]);
                    }
                }
            }
        }
    }

    /// Crude fixed-step continuation used only to land on a path at `t`.
    fn track_to(h: &RealPolyhedralHomotopy, x: &[f64], t: f64, o: &TrackerOptions) -> Vec<f64> {
        let mut x = x.to_vec();
        let n = 2000;
        for k in 1..=n {
            let s = o.t_start + (t - o.t_start) * k as f64 / n as f64;
            let c = newton_correct(h, &x, s, o);
            assert!(c.converged);
            x = c.x;
        }
        x
    }

    #[test]
    fn non_patchworked_heuristic() {
        let report = rph_track(&trinomial_pair(240.0), &TrackerOptions::default(), false).unwrap();
        assert!(!report.certified_input);
        assert_eq!(report.solutions.len(), 4);
        assert!(report.warnings.iter().any(|w| w.contains("heuristic")));
    }

    #[test]
    fn deterministic() {
        let a = rph_track(&running_example(), &TrackerOptions::default(), false).unwrap();
        let b = rph_track(&running_example(), &TrackerOptions::default(), false).unwrap();
        assert_eq!(a.solutions, b.solutions);
    }

    #[test]
    fn invalid_options() {
        let o = TrackerOptions {
            t_start: 0.0,
            ..TrackerOptions::default()
        };
        assert!(rph_track(&running_example(), &o, false).is_err());
        let o = TrackerOptions {
            min_step: 1.0,
            ..TrackerOptions::default()
        };
        assert!(o.validate().is_err());
    }
}
