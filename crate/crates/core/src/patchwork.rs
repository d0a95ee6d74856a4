//! Patchwork certificate: every generator `zeta` of the dual mixed cell cone
//! must satisfy `<ln|C|, zeta> > ||zeta||_1 ln|A|`, where `|A|` is the number
//! of Cayley points. When it holds, tracking the real roots of the binomial
//! start systems reaches every real torus solution.

use serde_json::{json, Value};

use crate::binomial::{binomials_from_cells, count_binomial_real};
use crate::error::Result;
use crate::mixed_cells::{dual_cone_generators, log_subdivision, DualConeGenerator, DEFAULT_SCALE};
use crate::poly::SparseSystem;

/// Slack below `SLACK_TOLERANCE * ||zeta||_1` counts as a failure.
pub const SLACK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    /// `<ln|C|, zeta>`
    pub pairing: f64,
    /// `||zeta||_1 ln|A|`
    pub bound: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchworkCertificate {
    pub certified: bool,
    pub margins: Vec<Margin>,
    pub generators: Vec<DualConeGenerator>,
    pub real_root_count: Option<u64>,
}

impl PatchworkCertificate {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "certified": self.certified,
            "margins": self.margins.iter().zip(&self.generators).map(|(m, g)| json!({
                "zeta": g.zeta,
                "pairing": m.pairing,
                "bound": m.bound,
                "slack": m.slack,
            })).collect::<Vec<_>>(),
        });
        if let Some(k) = self.real_root_count {
            v["real_root_count"] = json!(k);
        }
        v
    }
}

/// Evaluates the inequality for each generator against the real lifting
/// `w_flat` (flat Cayley order).
pub fn evaluate_margins(
    generators: &[DualConeGenerator],
    w_flat: &[f64],
    cayley_size: usize,
) -> (bool, Vec<Margin>) {
    let log_size = (cayley_size as f64).ln();
    let margins: Vec<Margin> = generators
        .iter()
        .map(|g| {
            let pairing = g.pair_with(w_flat);
            let bound = g.l1_norm() as f64 * log_size;
            Margin {
                pairing,
                bound,
                slack: pairing - bound,
            }
        })
        .collect();
    let certified = margins
        .iter()
        .zip(generators)
        .all(|(m, g)| m.slack > SLACK_TOLERANCE * g.l1_norm() as f64);
    (certified, margins)
}

pub fn certify_patchwork(system: &SparseSystem, count_real: bool) -> Result<PatchworkCertificate> {
    certify_patchwork_scaled(system, count_real, DEFAULT_SCALE)
}

pub fn certify_patchwork_scaled(
    system: &SparseSystem,
    count_real: bool,
    scale: f64,
) -> Result<PatchworkCertificate> {
    let sub = log_subdivision(system, scale)?;
    let generators = dual_cone_generators(system, &sub.cells, &sub.integer_lifting)?;
    let (certified, margins) =
        evaluate_margins(&generators, &sub.lifting.flat(), system.total_terms());
    let real_root_count = if count_real && certified {
        let mut total = 0;
        for b in binomials_from_cells(system, &sub.cells) {
            total += count_binomial_real(&b)?;
        }
        Some(total)
    } else {
        None
    };
    Ok(PatchworkCertificate {
        certified,
        margins,
        generators,
        real_root_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{linear_pair, running_example, trinomial_pair};

    #[test]
    fn running_example_is_patchworked() {
        let c = certify_patchwork(&running_example(), false).unwrap();
        assert!(c.certified);
        assert_eq!(c.real_root_count, None);
        let c = certify_patchwork(&running_example(), true).unwrap();
        assert_eq!((c.certified, c.real_root_count), (true, Some(4)));
    }

    #[test]
    fn smaller_coefficient_is_not_patchworked() {
        let c = certify_patchwork(&trinomial_pair(240.0), true).unwrap();
        assert!(!c.certified);
        assert_eq!(c.real_root_count, None);
    }

    #[test]
    fn coefficient_amplification_brackets() {
        assert!(certify_patchwork(&trinomial_pair(1e5), false).unwrap().certified);
        assert!(!certify_patchwork(&trinomial_pair(1e2), false).unwrap().certified);
    }

    #[test]
    fn empty_generator_set_certifies() {
        let c = certify_patchwork(&linear_pair(), true).unwrap();
        assert!(c.certified);
        assert!(c.margins.is_empty());
        assert_eq!(c.real_root_count, Some(1));
    }

    #[test]
    fn outcome_invariant_under_generator_scaling() {
        for c in [24000.0, 240.0] {
            let f = trinomial_pair(c);
            let cert = certify_patchwork(&f, false).unwrap();
            let w = f.log_lifting().flat();
            for idx in 0..cert.generators.len() {
                let mut gens = cert.generators.clone();
                gens[idx].zeta.iter_mut().for_each(|v| *v *= 7);
                let (ok, _) = evaluate_margins(&gens, &w, f.total_terms());
                assert_eq!(ok, cert.certified);
            }
        }
    }

    #[test]
    fn margins_json() {
        let v = certify_patchwork(&running_example(), true).unwrap().to_json();
        assert_eq!(v["certified"], true);
        assert_eq!(v["real_root_count"], 4);
        assert_eq!(v["margins"].as_array().unwrap().len(), 3);
        let v = certify_patchwork(&trinomial_pair(240.0), true).unwrap().to_json();
        assert!(v.get("real_root_count").is_none());
    }
}
