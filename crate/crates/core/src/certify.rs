//! A posteriori certification of approximate real roots with the Krawczyk
//! operator `K(X) = y - Y F(y) + (I - Y J(X)) (X - y)`.
//!
//! If `K(X)` lies in the interior of `X`, then `X` contains exactly one root.

use serde_json::{json, Value};

use crate::interval::{interval_eval, interval_jacobian, Interval, IntervalBox};
use crate::linalg;
use crate::poly::SparseSystem;

/// Relative radii tried in order; the first that certifies wins.
pub const RADIUS_LADDER: [f64; 3] = [1e-8, 1e-6, 1e-4];

/// Smallest half-width of a box component.
pub const ABSOLUTE_RADIUS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateOutcome {
    pub certified: bool,
    /// The tested box; a verified enclosure of a unique root when certified.
    pub interval_box: IntervalBox,
    /// Largest `width(K_i) / width(X_i)`.
    pub shrink_factor: f64,
    /// Relative radius that produced this outcome.
    pub radius: f64,
    pub reason: Option<String>,
}

/// Runs the Krawczyk test on `x +- max(radius * |x_i|, 1e-12)`.
pub fn krawczyk_test(system: &SparseSystem, x: &[f64], radius: f64) -> CertificateOutcome {
    let n = system.n_vars();
    let fail = |b: IntervalBox, reason: &str| CertificateOutcome {
        certified: false,
        interval_box: b,
        shrink_factor: f64::INFINITY,
        radius,
        reason: Some(reason.to_string()),
    };
    let xbox = IntervalBox::new(
        x.iter()
            .map(|&v| Interval::centered(v, (radius * v.abs()).max(ABSOLUTE_RADIUS_FLOOR)))
            .collect(),
    );
    if x.len() != n || !(radius > 0.0) || x.iter().any(|v| !v.is_finite()) {
        return fail(xbox, "invalid point or radius");
    }
    let Some(y_inv) = linalg::inverse(&system.jacobian(x)) else {
        return fail(xbox, "singular midpoint Jacobian");
    };

    let fy = interval_eval(system, &IntervalBox::point(x));
    let jx = interval_jacobian(system, &xbox);
    let offsets: Vec<Interval> = xbox
        .components()
        .iter()
        .zip(x)
        .map(|(c, &v)| *c - Interval::point(v))
        .collect();

    let mut k = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = Interval::point(x[i]);
        for j in 0..n {
            acc = acc - y_inv[i][j] * fy.components()[j];
        }
        for j in 0..n {
            // (I - Y J(X))_{ij}
            let mut m = Interval::point(f64::from(u8::from(i == j)));
            for l in 0..n {
                m = m - y_inv[i][l] * jx[l][j];
            }
            acc = acc + m * offsets[j];
        }
        k.push(acc);
    }
    let kbox = IntervalBox::new(k);
    let shrink_factor = kbox
        .components()
        .iter()
        .zip(xbox.components())
        .map(|(a, b)| a.width() / b.width())
        .fold(0.0, f64::max);
    let certified = kbox.interior_of(&xbox);
    CertificateOutcome {
        certified,
        interval_box: xbox,
        shrink_factor,
        radius,
        reason: (!certified).then(|| "K(X) not contained in the interior of X".to_string()),
    }
}

/// Tries each radius of [`RADIUS_LADDER`]; returns the first success or the last failure.
pub fn certify_point(system: &SparseSystem, x: &[f64]) -> CertificateOutcome {
    let mut last = None;
    for r in RADIUS_LADDER {
        let out = krawczyk_test(system, x, r);
        if out.certified {
            return out;
        }
        last = Some(out);
    }
    last.expect("ladder is nonempty")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetCertificate {
    pub points: Vec<Vec<f64>>,
    pub outcomes: Vec<CertificateOutcome>,
    pub pairwise_disjoint: bool,
    pub expected_count: usize,
    /// All points certified, boxes pairwise disjoint, count as expected.
    pub flag: bool,
}

impl SetCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "flag": u8::from(self.flag),
            "expected_count": self.expected_count,
            "pairwise_disjoint": self.pairwise_disjoint,
            "points": self.points.iter().zip(&self.outcomes).map(|(p, o)| outcome_json(p, o)).collect::<Vec<_>>(),
        })
    }
}

/// Per-point JSON report; box endpoints are hex floats for bit-exactness.
pub fn outcome_json(point: &[f64], o: &CertificateOutcome) -> Value {
    json!({
        "point": point,
        "certified": o.certified,
        "box": o.interval_box.components().iter().map(|c| [hex_float(c.lo()), hex_float(c.hi())]).collect::<Vec<_>>(),
        "shrink_factor": if o.shrink_factor.is_finite() { json!(o.shrink_factor) } else { Value::Null },
        "radius": o.radius,
        "reason": o.reason,
    })
}

pub fn certify_solution_set(
    system: &SparseSystem,
    points: &[Vec<f64>],
    expected_count: usize,
) -> SetCertificate {
    let outcomes: Vec<CertificateOutcome> = points.iter().map(|p| certify_point(system, p)).collect();
    let pairwise_disjoint = outcomes.iter().enumerate().all(|(i, a)| {
        outcomes[i + 1..]
            .iter()
            .all(|b| a.interval_box.disjoint(&b.interval_box))
    });
    let flag = outcomes.iter().all(|o| o.certified)
        && pairwise_disjoint
        && points.len() == expected_count;
    SetCertificate {
        points: points.to_vec(),
        outcomes,
        pairwise_disjoint,
        expected_count,
        flag,
    }
}

/// C99-style hexadecimal float, e.g. `0x1.8p+1` for 3.0.
pub fn hex_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sign = if v.is_sign_negative() { "-" } else { "" };
    if v == 0.0 {
        return format!("{sign}0x0p+0");
    }
    let bits = v.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    let (lead, exp) = if exp_bits == 0 { (0, -1022) } else { (1, exp_bits - 1023) };
    let mut frac = format!("{mant:013x}");
    while frac.ends_with('0') {
        frac.pop();
    }
    if frac.is_empty() {
        format!("{sign}0x{lead}p{exp:+}")
    } else {
        format!("{sign}0x{lead}.{frac}p{exp:+}")
    }
}
