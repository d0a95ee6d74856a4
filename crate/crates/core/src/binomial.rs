//! Binomial start systems and their real torus solutions.

use std::cmp::Ordering;

use num::{BigInt, Integer, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Result, RphError};
use crate::exact;
use crate::mixed_cells::{log_subdivision, MixedCell, DEFAULT_SCALE};
use crate::poly::{format_terms, Exponent, SparsePolynomial, SparseSystem};
use crate::snf::{smith_normal_form, IntMatrix, SmithDecomposition};

/// `x^{E_i} = rhs_i`, i.e. `c_p x^{a_p} + c_q x^{a_q} = 0` for each equation.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialSystem {
    exponent_matrix: Vec<Vec<i64>>,
    rhs: Vec<f64>,
    /// The two surviving terms of each equation, in source order.
    display_terms: Vec<[(f64, Exponent); 2]>,
    source_cell: usize,
    variables: Vec<String>,
}

impl BinomialSystem {
    /// Builds the start system of `cell`.
    pub fn from_cell(system: &SparseSystem, cell: &MixedCell, source_cell: usize) -> Self {
        let mut exponent_matrix = Vec::with_capacity(cell.pairs.len());
        let mut rhs = Vec::with_capacity(cell.pairs.len());
        let mut display_terms = Vec::with_capacity(cell.pairs.len());
        for (poly, &(p, q)) in system.polynomials().iter().zip(&cell.pairs) {
            let (s, c) = (poly.support(), poly.coefficients());
            exponent_matrix.push(
                s[p].iter()
                    .zip(&s[q])
                    .map(|(&u, &v)| u as i64 - v as i64)
                    .collect(),
            );
            rhs.push(-c[q] / c[p]);
            let (first, second) = if p < q { (p, q) } else { (q, p) };
            display_terms.push([(c[first], s[first].clone()), (c[second], s[second].clone())]);
        }
        BinomialSystem {
            exponent_matrix,
            rhs,
            display_terms,
            source_cell,
            variables: system.variables().to_vec(),
        }
    }

    /// Builds `x^E = rhs` directly, with display terms `x^{E_i} - rhs_i` when
    /// `E` has nonnegative rows (otherwise the negative part is moved across).
    pub fn from_parts(exponent_matrix: Vec<Vec<i64>>, rhs: Vec<f64>) -> Result<Self> {
        let n = exponent_matrix.len();
        if rhs.len() != n || exponent_matrix.iter().any(|r| r.len() != n) {
            return Err(RphError::Invalid("binomial system must be square".into()));
        }
        if rhs.iter().any(|r| *r == 0.0 || !r.is_finite()) {
            return Err(RphError::Invalid("binomial right-hand sides must be finite and nonzero".into()));
        }
        let display_terms = exponent_matrix
            .iter()
            .zip(&rhs)
            .map(|(row, &b)| {
                let pos: Exponent = row.iter().map(|&e| e.max(0) as u32).collect();
                let neg: Exponent = row.iter().map(|&e| (-e).max(0) as u32).collect();
                [(1.0, pos), (-b, neg)]
            })
            .collect();
        Ok(BinomialSystem {
            exponent_matrix,
            rhs,
            display_terms,
            source_cell: 0,
            variables: crate::poly::default_variable_names(n),
        })
    }

    pub fn n_vars(&self) -> usize {
        self.rhs.len()
    }

    pub fn exponent_matrix(&self) -> &[Vec<i64>] {
        &self.exponent_matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn source_cell(&self) -> usize {
        self.source_cell
    }

    pub fn display_terms(&self) -> &[[(f64, Exponent); 2]] {
        &self.display_terms
    }

    pub fn determinant(&self) -> BigInt {
        exact::determinant(&self.exponent_matrix)
    }

    pub fn smith(&self) -> SmithDecomposition {
        smith_normal_form(&IntMatrix::from_i64(&self.exponent_matrix))
    }

    /// Each equation in monomial notation, e.g. `-24000*y + x^3`.
    pub fn equations(&self) -> Vec<String> {
        self.display_terms
            .iter()
            .map(|terms| {
                format_terms(terms.iter().map(|(c, a)| (a.as_slice(), *c)), &self.variables)
            })
            .collect()
    }

    /// The two-term polynomials as a system of their own.
    pub fn as_system(&self) -> SparseSystem {
        let polys = self
            .display_terms
            .iter()
            .map(|t| SparsePolynomial::new(t.iter().map(|(c, a)| (a.clone(), *c))))
            .collect();
        SparseSystem::new(self.variables.clone(), polys).expect("binomials are valid systems")
    }

    /// `max_i |x^{E_i} - rhs_i| / |rhs_i|`.
    pub fn relative_residual(&self, x: &[f64]) -> f64 {
        self.exponent_matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, &b)| {
                let v: f64 = row.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product();
                ((v - b) / b).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "equations": self.equations(),
            "exponent_matrix": self.exponent_matrix,
            "rhs": self.rhs,
            "source_cell": self.source_cell,
        })
    }
}

/// One binomial start system per mixed cell of the `ln|c|` lifting, in cell order.
pub fn generate_binomials(system: &SparseSystem) -> Result<Vec<BinomialSystem>> {
    generate_binomials_scaled(system, DEFAULT_SCALE)
}

pub fn generate_binomials_scaled(system: &SparseSystem, scale: f64) -> Result<Vec<BinomialSystem>> {
    let sub = log_subdivision(system, scale)?;
    Ok(binomials_from_cells(system, &sub.cells))
}

pub fn binomials_from_cells(system: &SparseSystem, cells: &[MixedCell]) -> Vec<BinomialSystem> {
    cells
        .iter()
        .enumerate()
        .map(|(k, c)| BinomialSystem::from_cell(system, c, k))
        .collect()
}

/// A nonzero real stored as sign and natural log of its magnitude.
#[derive(Debug, Clone, Copy)]
struct LogReal {
    negative: bool,
    ln_abs: f64,
}

impl LogReal {
    fn new(v: f64) -> Self {
        LogReal {
            negative: v < 0.0,
            ln_abs: v.abs().ln(),
        }
    }

    fn value(self) -> f64 {
        let m = self.ln_abs.exp();
        if self.negative {
            -m
        } else {
            m
        }
    }
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// The diagonal system `z^S = b'` after the unimodular change of coordinates
/// `x = z^V`, with `b'_l = prod_i rhs_i^{U_li}`.
struct Diagonalized {
    smith: SmithDecomposition,
    diagonal: Vec<BigInt>,
    reduced_rhs: Vec<LogReal>,
}

fn diagonalize(b: &BinomialSystem) -> Result<Diagonalized> {
    if b.determinant().is_zero() {
        return Err(RphError::SingularExponent);
    }
    let smith = b.smith();
    let diagonal = smith.diagonal();
    let logs: Vec<LogReal> = b.rhs.iter().map(|&v| LogReal::new(v)).collect();
    let reduced_rhs = smith
        .u
        .rows()
        .iter()
        .map(|row| {
            let mut ln_abs = 0.0;
            let mut odd_negatives = BigInt::zero();
            for (uij, r) in row.iter().zip(&logs) {
                ln_abs += big_to_f64(uij) * r.ln_abs;
                if r.negative {
                    odd_negatives += uij;
                }
            }
            LogReal {
                negative: odd_negatives.is_odd(),
                ln_abs,
            }
        })
        .collect();
    Ok(Diagonalized {
        smith,
        diagonal,
        reduced_rhs,
    })
}

/// Real roots of `z^s = b` in log form.
fn diagonal_roots(s: &BigInt, b: LogReal) -> Vec<LogReal> {
    let ln_abs = b.ln_abs / big_to_f64(s);
    if s.is_odd() {
        vec![LogReal {
            negative: b.negative,
            ln_abs,
        }]
    } else if b.negative {
        Vec::new()
    } else {
        vec![
            LogReal {
                negative: true,
                ln_abs,
            },
            LogReal {
                negative: false,
                ln_abs,
            },
        ]
    }
}

/// All solutions of `x^E = rhs` in `(R \ {0})^n`, ordered by sign pattern
/// (negative before positive, left to right) and then by value.
pub fn solve_binomial_real(b: &BinomialSystem) -> Result<Vec<Vec<f64>>> {
    let d = diagonalize(b)?;
    let choices: Vec<Vec<LogReal>> = d
        .diagonal
        .iter()
        .zip(&d.reduced_rhs)
        .map(|(s, &r)| diagonal_roots(s, r))
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }

    let n = b.n_vars();
    let mut combos: Vec<Vec<LogReal>> = vec![Vec::with_capacity(n)];
    for options in &choices {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&z| {
                    let mut v = prefix.clone();
                    v.push(z);
                    v
                })
            })
            .collect();
    }

    let v = d.smith.v.rows();
    let mut sols: Vec<Vec<f64>> = combos
        .iter()
        .map(|z| {
            (0..n)
                .map(|j| {
                    let mut ln_abs = 0.0;
                    let mut odd = BigInt::zero();
                    for (vjk, zk) in v[j].iter().zip(z) {
                        ln_abs += big_to_f64(vjk) * zk.ln_abs;
                        if zk.negative {
                            odd += vjk;
                        }
                    }
                    LogReal {
                        negative: odd.is_odd(),
                        ln_abs,
                    }
                    .value()
                })
                .collect()
        })
        .collect();
    sols.sort_by(compare_solutions);
    Ok(sols)
}

fn compare_solutions(a: &Vec<f64>, b: &Vec<f64>) -> Ordering {
    let signs = |x: &Vec<f64>| x.iter().map(|v| v.is_sign_positive()).collect::<Vec<_>>();
    signs(a)
        .cmp(&signs(b))
        .then_with(|| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal))
}

/// Number of real torus solutions: the product over the Smith diagonal of
/// 1 (odd `s`), 2 (even `s`, `b' > 0`) or 0 (even `s`, `b' < 0`).
pub fn count_binomial_real(b: &BinomialSystem) -> Result<u64> {
    let d = diagonalize(b)?;
    Ok(d.diagonal
        .iter()
        .zip(&d.reduced_rhs)
        .map(|(s, r)| diagonal_roots(s, *r).len() as u64)
        .product())
}
