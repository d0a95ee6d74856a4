//! Sparse real polynomial systems: parsing, evaluation, differentiation and
//! the log-absolute-value coefficient lifting.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RphError};
use crate::exact;

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

/// A real polynomial given by its support and nonzero coefficients, in source order.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePolynomial {
    support: Vec<Exponent>,
    coefficients: Vec<f64>,
}

impl SparsePolynomial {
    /// Builds a polynomial, merging repeated exponents (first occurrence keeps
    /// its position) and dropping terms whose coefficient becomes zero.
    pub fn new(terms: impl IntoIterator<Item = (Exponent, f64)>) -> Self {
        let mut support: Vec<Exponent> = Vec::new();
        let mut coefficients: Vec<f64> = Vec::new();
        let mut index: HashMap<Exponent, usize> = HashMap::new();
        for (exp, c) in terms {
            match index.get(&exp) {
                Some(&k) => coefficients[k] += c,
                None => {
                    index.insert(exp.clone(), support.len());
                    support.push(exp);
                    coefficients.push(c);
                }
            }
        }
        let (support, coefficients) = support
            .into_iter()
            .zip(coefficients)
            .filter(|(_, c)| *c != 0.0)
            .unzip();
        SparsePolynomial {
            support,
            coefficients,
        }
    }

    pub fn support(&self) -> &[Exponent] {
        &self.support
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, f64)> + '_ {
        self.support.iter().zip(self.coefficients.iter().copied())
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.terms().map(|(a, c)| c * monomial(a, x)).sum()
    }

    /// Largest term magnitude `|c_a x^a|` at `x`; the natural scale for residuals.
    pub fn term_scale(&self, x: &[f64]) -> f64 {
        self.terms()
            .map(|(a, c)| (c * monomial(a, x)).abs())
            .fold(0.0, f64::max)
    }

    /// Partial derivative with respect to variable `j` at `x`.
    pub fn derivative(&self, j: usize, x: &[f64]) -> f64 {
        self.terms()
            .filter(|(a, _)| a[j] > 0)
            .map(|(a, c)| c * a[j] as f64 * monomial_lowered(a, j, x))
            .sum()
    }
}

/// `x^a` with `0^0 = 1`.
pub fn monomial(a: &[u32], x: &[f64]) -> f64 {
    a.iter()
        .zip(x)
        .map(|(&e, &xi)| if e == 0 { 1.0 } else { xi.powi(e as i32) })
        .product()
}

/// `x^(a - e_j)`, assuming `a[j] > 0`.
fn monomial_lowered(a: &[u32], j: usize, x: &[f64]) -> f64 {
    a.iter()
        .zip(x)
        .enumerate()
        .map(|(k, (&e, &xi))| {
            let e = if k == j { e - 1 } else { e };
            if e == 0 {
                1.0
            } else {
                xi.powi(e as i32)
            }
        })
        .product()
}

/// A square system of sparse polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    variables: Vec<String>,
    polynomials: Vec<SparsePolynomial>,
}

impl SparseSystem {
    /// Validates squareness, exponent lengths and the two-term minimum.
    pub fn new(variables: Vec<String>, polynomials: Vec<SparsePolynomial>) -> Result<Self> {
        let n = variables.len();
        if n == 0 {
            return Err(RphError::Invalid("system has no variables".into()));
        }
        if polynomials.len() != n {
            return Err(RphError::Dimension {
                variables: n,
                polynomials: polynomials.len(),
            });
        }
        for (i, p) in polynomials.iter().enumerate() {
            if let Some(a) = p.support.iter().find(|a| a.len() != n) {
                return Err(RphError::Invalid(format!(
                    "polynomial {i}: exponent vector {a:?} has length {} (expected {n})",
                    a.len()
                )));
            }
            if let Some(c) = p.coefficients.iter().find(|c| !c.is_finite()) {
                return Err(RphError::Invalid(format!(
                    "polynomial {i}: non-finite coefficient {c}"
                )));
            }
            if p.len() < 2 {
                return Err(RphError::Degenerate {
                    index: i,
                    terms: p.len(),
                });
            }
        }
        Ok(SparseSystem {
            variables,
            polynomials,
        })
    }

    /// Convenience constructor with default variable names `x1, x2, ...`
    /// (or `x, y, z, w` for up to four variables).
    pub fn from_terms(polys: Vec<Vec<(Exponent, f64)>>) -> Result<Self> {
        let n = polys.len();
        let variables = default_variable_names(n);
        Self::new(
            variables,
            polys.into_iter().map(SparsePolynomial::new).collect(),
        )
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn polynomials(&self) -> &[SparsePolynomial] {
        &self.polynomials
    }

    /// Total number of support points, i.e. the Cayley configuration size.
    pub fn total_terms(&self) -> usize {
        self.polynomials.iter().map(SparsePolynomial::len).sum()
    }

    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.polynomials.iter().map(|p| p.evaluate(x)).collect()
    }

    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.n_vars();
        self.polynomials
            .iter()
            .map(|p| (0..n).map(|j| p.derivative(j, x)).collect())
            .collect()
    }

    /// Per-polynomial largest term magnitude at `x`.
    pub fn term_scales(&self, x: &[f64]) -> Vec<f64> {
        self.polynomials.iter().map(|p| p.term_scale(x)).collect()
    }

    /// `max_i |f_i(x)| / max(1, largest term magnitude of f_i at x)`.
    pub fn relative_residual(&self, x: &[f64]) -> f64 {
        self.polynomials
            .iter()
            .map(|p| p.evaluate(x).abs() / p.term_scale(x).max(1.0))
            .fold(0.0, f64::max)
    }

    /// `ln|c_a|` for every support point.
    pub fn log_lifting(&self) -> Lifting {
        Lifting::new(
            self.polynomials
                .iter()
                .map(|p| p.coefficients.iter().map(|c| c.abs().ln()).collect())
                .collect(),
        )
    }

    /// Returns a copy with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let polynomials = self
            .polynomials
            .iter()
            .map(|p| SparsePolynomial {
                support: p.support.clone(),
                coefficients: p.coefficients.iter().map(|c| c * factor).collect(),
            })
            .collect();
        SparseSystem {
            variables: self.variables.clone(),
            polynomials,
        }
    }

    /// Human-readable warnings that do not prevent solving: supports that are
    /// not full-dimensional.
    pub fn validation_warnings(&self) -> Vec<String> {
        let n = self.n_vars();
        self.polynomials
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let base = &p.support[0];
                let rows: Vec<Vec<i64>> = p.support[1..]
                    .iter()
                    .map(|a| a.iter().zip(base).map(|(&u, &v)| u as i64 - v as i64).collect())
                    .collect();
                let rank = exact::integer_rank(&rows, n);
                (rank < n).then(|| {
                    format!("support of polynomial {i} has dimension {rank} < {n}")
                })
            })
            .collect()
    }

    /// Formats polynomial `i` in monomial notation, e.g. `-24000*y + x^3`.
    pub fn format_polynomial(&self, i: usize) -> String {
        let p = &self.polynomials[i];
        format_terms(p.terms().map(|(a, c)| (a.as_slice(), c)), &self.variables)
    }

    /// Serializes to the JSON system format.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SystemFile::from(self)).expect("system serializes")
    }
}

pub(crate) fn default_variable_names(n: usize) -> Vec<String> {
    const SHORT: [&str; 4] = ["x", "y", "z", "w"];
    if n <= SHORT.len() {
        SHORT[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// Formats a sum of terms. Coefficients of magnitude one are omitted on
/// non-constant monomials; integral coefficients print without a fraction.
pub fn format_terms<'a>(
    terms: impl IntoIterator<Item = (&'a [u32], f64)>,
    variables: &[String],
) -> String {
    let mut out = String::new();
    for (k, (a, c)) in terms.into_iter().enumerate() {
        let negative = c < 0.0;
        let mag = c.abs();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let factors: Vec<String> = a
            .iter()
            .zip(variables)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if factors.is_empty() {
            out.push_str(&format_number(mag));
        } else {
            if mag != 1.0 {
                let _ = write!(out, "{}*", format_number(mag));
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Real heights assigned to support points, shape-congruent with a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lifting {
    values: Vec<Vec<f64>>,
}

impl Lifting {
    pub fn new(values: Vec<Vec<f64>>) -> Self {
        Lifting { values }
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn get(&self, poly: usize, point: usize) -> f64 {
        self.values[poly][point]
    }

    /// Values in flat Cayley order.
    pub fn flat(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    pub fn matches(&self, system: &SparseSystem) -> bool {
        self.values.len() == system.n_vars()
            && self
                .values
                .iter()
                .zip(system.polynomials())
                .all(|(v, p)| v.len() == p.len())
    }
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    exponents: Vec<u32>,
    coefficient: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    variables: Vec<String>,
    polynomials: Vec<Vec<TermFile>>,
}

impl From<&SparseSystem> for SystemFile {
    fn from(s: &SparseSystem) -> Self {
        SystemFile {
            variables: s.variables.clone(),
            polynomials: s
                .polynomials
                .iter()
                .map(|p| {
                    p.terms()
                        .map(|(a, c)| TermFile {
                            exponents: a.clone(),
                            coefficient: c,
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Parses the JSON system format:
/// `{"variables": ["x","y"], "polynomials": [[{"exponents":[0,0],"coefficient":-1.0}, ...], ...]}`.
pub fn parse_system(text: &str) -> Result<SparseSystem> {
    let file: SystemFile =
        serde_json::from_str(text).map_err(|e| RphError::Parse(e.to_string()))?;
    let mut seen = std::collections::HashSet::new();
    for v in &file.variables {
        if !seen.insert(v) {
            return Err(RphError::Parse(format!("duplicate variable name {v:?}")));
        }
    }
    let polynomials = file
        .polynomials
        .into_iter()
        .map(|terms| SparsePolynomial::new(terms.into_iter().map(|t| (t.exponents, t.coefficient))))
        .collect();
    SparseSystem::new(file.variables, polynomials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::running_example;

    const RUNNING_JSON: &str = r#"{"variables":["x","y"],"polynomials":[
        [{"exponents":[0,0],"coefficient":-1},{"exponents":[0,1],"coefficient":-24000},{"exponents":[3,0],"coefficient":1}],
        [{"exponents":[0,0],"coefficient":-9},{"exponents":[1,1],"coefficient":50},{"exponents":[0,2],"coefficient":-1}]]}"#;

    #[test]
    fn parses_running_example() {
        let f = parse_system(RUNNING_JSON).unwrap();
        assert_eq!(f, running_example());
        assert_eq!(f.polynomials()[0].support(), &[vec![0, 0], vec![0, 1], vec![3, 0]]);
        assert_eq!(f.polynomials()[1].coefficients(), &[-9.0, 50.0, -1.0]);
    }

    #[test]
    fn parses_linear_system() {
        let f = parse_system(
            r#"{"variables":["x","y"],"polynomials":[
              [{"exponents":[1,0],"coefficient":1},{"exponents":[0,0],"coefficient":-1}],
              [{"exponents":[0,1],"coefficient":1},{"exponents":[0,0],"coefficient":-1}]]}"#,
        )
        .unwrap();
        assert_eq!(f.polynomials()[0].support(), &[vec![1, 0], vec![0, 0]]);
        assert_eq!(f.polynomials()[1].support(), &[vec![0, 1], vec![0, 0]]);
    }

    #[test]
    fn rejects_non_square() {
        let err = parse_system(
            r#"{"variables":["x","y"],"polynomials":[
              [{"exponents":[1,0],"coefficient":1},{"exponents":[0,0],"coefficient":-1}],
              [{"exponents":[0,1],"coefficient":1},{"exponents":[0,0],"coefficient":-1}],
              [{"exponents":[1,1],"coefficient":1},{"exponents":[0,0],"coefficient":-1}]]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            RphError::Dimension {
                variables: 2,
                polynomials: 3
            }
        );
    }

    #[test]
    fn merges_duplicates_and_rejects_collapse() {
        let f = parse_system(
            r#"{"variables":["x"],"polynomials":[
              [{"exponents":[1],"coefficient":2},{"exponents":[0],"coefficient":-1},{"exponents":[1],"coefficient":3}]]}"#,
        )
        .unwrap();
        assert_eq!(f.polynomials()[0].coefficients(), &[5.0, -1.0]);

        let err = parse_system(
            r#"{"variables":["x"],"polynomials":[
              [{"exponents":[1],"coefficient":2},{"exponents":[0],"coefficient":-1},{"exponents":[1],"coefficient":-2}]]}"#,
        )
        .unwrap_err();
        assert_eq!(err, RphError::Degenerate { index: 0, terms: 1 });
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(parse_system("{"), Err(RphError::Parse(_))));
        assert!(matches!(
            parse_system(r#"{"variables":["x"],"polynomials":[[{"exponents":[-1],"coefficient":1}]]}"#),
            Err(RphError::Parse(_))
        ));
        assert!(matches!(
            parse_system(r#"{"variables":["x"],"polynomials":[[{"exponents":[1,0],"coefficient":1},{"exponents":[0],"coefficient":1}]]}"#),
            Err(RphError::Invalid(_))
        ));
    }

    #[test]
    fn evaluates() {
        let f = running_example();
        assert_eq!(f.evaluate(&[0.0, 0.0]), vec![-1.0, -9.0]);
        let x = [8.111114476617955, 0.02219298606763958];
        let scales = f.term_scales(&x);
        for (v, s) in f.evaluate(&x).iter().zip(scales) {
            assert!(v.abs() < 1e-6 * s);
        }
        let lin = SparseSystem::from_terms(vec![
            vec![(vec![1, 0], 1.0), (vec![0, 0], -1.0)],
            vec![(vec![0, 1], 1.0), (vec![0, 0], -1.0)],
        ])
        .unwrap();
        assert_eq!(lin.evaluate(&[1.0, 1.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn jacobian_by_hand() {
        let f = running_example();
        assert_eq!(f.jacobian(&[1.0, 1.0]), vec![vec![3.0, -24000.0], vec![50.0, 48.0]]);
        let lin = SparseSystem::from_terms(vec![
            vec![(vec![1, 0], 1.0), (vec![0, 0], -1.0)],
            vec![(vec![0, 1], 1.0), (vec![0, 0], -1.0)],
        ])
        .unwrap();
        assert_eq!(lin.jacobian(&[3.0, -7.0]), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn log_lifting_values() {
        let w = running_example().log_lifting();
        let expect = [[0.0, 10.0858, 0.0], [2.1972, 3.9120, 0.0]];
        for (row, e) in w.values().iter().zip(expect) {
            for (v, e) in row.iter().zip(e) {
                assert!((v - e).abs() < 1e-4);
            }
        }
        let ones = SparseSystem::from_terms(vec![
            vec![(vec![1, 0], 1.0), (vec![0, 0], -1.0)],
            vec![(vec![0, 1], -1.0), (vec![0, 0], 1.0)],
        ])
        .unwrap();
        assert!(ones.log_lifting().flat().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn log_lifting_shift_under_scaling() {
        let f = running_example();
        let w = f.log_lifting().flat();
        let we = f.scaled(std::f64::consts::E).log_lifting().flat();
        for (a, b) in w.iter().zip(&we) {
            assert!((b - a - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn formats_terms() {
        let f = running_example();
        assert_eq!(f.format_polynomial(0), "-1 - 24000*y + x^3");
        assert_eq!(f.format_polynomial(1), "-9 + 50*x*y - y^2");
    }

    #[test]
    fn full_dimension_warning() {
        assert!(running_example().validation_warnings().is_empty());
        let f = SparseSystem::from_terms(vec![
            vec![(vec![1, 0], 1.0), (vec![0, 0], -1.0)],
            vec![(vec![0, 1], 1.0), (vec![0, 0], -1.0)],
        ])
        .unwrap();
        assert_eq!(f.validation_warnings().len(), 2);
    }

    #[test]
    fn json_roundtrip() {
        let f = running_example();
        assert_eq!(parse_system(&f.to_json()).unwrap(), f);
    }
}
