use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ProjectionPoly;
use crate::error::{Error, Result};
use crate::fastpoly::PackedPoly;
use crate::field::{ddf, Scalar, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleVerdict {
    /// Every clean trial factored into equal degrees (probabilistic).
    Pass,
    /// Some clean trial factored into unequal degrees.
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub values: Vec<String>,
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecializationReport {
    pub trials: usize,
    pub clean: usize,
    pub skipped: usize,
    pub field: String,
    /// Sorted factor degrees of each clean trial, in trial order.
    pub patterns: Vec<Vec<usize>>,
    pub verdict: OracleVerdict,
    pub witness: Option<Witness>,
}

fn factor_degrees(g: &UniPoly) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, part) in ddf(g)? {
        out.extend(std::iter::repeat_n(i, part.degree().unwrap() / i));
    }
    out.sort_unstable();
    Ok(out)
}

/// Factor-degree patterns of `f` at random points of `GF(q^ext_degree)^n`.
///
/// Trials where the leading coefficient vanishes or the specialization has a
/// repeated root are skipped. Stops at the first unequal-degree pattern.
pub fn specialization_oracle(
    f: &ProjectionPoly,
    trials: usize,
    ext_degree: u32,
    seed: u64,
) -> Result<SpecializationReport> {
    let field = f.field();
    if field.characteristic() == 0 {
        return Err(Error::CharacteristicZero(field.name()));
    }
    let g = if ext_degree > 1 {
        f.map_field(&field.finite_extension(ext_degree)?)
    } else {
        f.clone()
    };
    let target = g.field().clone();
    let order = target.order().unwrap();
    let d = g.degree();
    let attempts = 4 * trials + 16;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Vec<Scalar>> = (0..attempts)
        .map(|_| {
            (0..g.base_vars())
                .map(|_| target.element(rng.gen_range(0..order)))
                .collect()
        })
        .collect();
    let packed: Vec<PackedPoly> = g.coeffs().iter().map(PackedPoly::new).collect();
    let outcomes: Vec<Option<Vec<usize>>> = samples
        .par_iter()
        .map(|vals| {
            let u = UniPoly::new(
                packed.iter().map(|c| c.eval_scalars(vals)).collect(),
                &target,
            );
            if u.degree() != Some(d) {
                return Ok(None);
            }
            let du = u.derivative();
            if du.is_zero() || u.gcd(&du).degree() != Some(0) {
                return Ok(None);
            }
            factor_degrees(&u).map(Some)
        })
        .collect::<Result<_>>()?;

    let mut report = SpecializationReport {
        trials,
        clean: 0,
        skipped: 0,
        field: target.name(),
        patterns: Vec::new(),
        verdict: OracleVerdict::Inconclusive,
        witness: None,
    };
    for (vals, out) in samples.iter().zip(outcomes) {
        if report.clean == trials {
            break;
        }
        let Some(degs) = out else {
            report.skipped += 1;
            continue;
        };
        report.clean += 1;
        let unequal = degs.iter().any(|&k| k != degs[0]);
        report.patterns.push(degs.clone());
        if unequal {
            report.verdict = OracleVerdict::Fail;
            report.witness = Some(Witness {
                values: vals.iter().map(|v| v.to_string()).collect(),
                degrees: degs,
            });
            return Ok(report);
        }
    }
    if report.clean == trials && trials > 0 {
        report.verdict = OracleVerdict::Pass;
    }
    Ok(report)
}
