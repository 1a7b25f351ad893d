//! Full Fock-basis output distribution and numeric sensitivities for
//! arbitrary phase masks. Both go through the permanent kernels rather
//! than the closed forms, so they double as oracles for them.

use serde::Serialize;

use crate::error::{QuftiError, Result};
use crate::matrix::{compose_qufti, InterferometerSpec};
use crate::permanent::{permanent_ryser, permanent_with_repeats};

use super::{format_float, require_interference, Sensitivity};

/// Largest mode count for full enumeration and mask sensitivities.
pub const DISTRIBUTION_MAX_MODES: usize = 7;

/// Central finite-difference step used by every numeric derivative.
pub const FINITE_DIFFERENCE_STEP: f64 = 1e-6;

/// A finite-difference slope below this counts as a stationary point.
const SLOPE_FLOOR: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FockOutcome {
    /// Photon count per output mode.
    pub occupation: Vec<usize>,
    pub probability: f64,
}

impl FockOutcome {
    /// Occupation vector as dash-joined integers, e.g. `2-0-1`.
    pub fn label(&self) -> String {
        self.occupation
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Probabilities of every way `n` photons can leave `n` modes, listed in
/// descending lexicographic order of the occupation vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    pub n: usize,
    pub phi: f64,
    pub entries: Vec<FockOutcome>,
}

impl OutcomeDistribution {
    pub const CSV_HEADER: &'static str = "occupation,probability";

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }

    pub fn probability_of(&self, occupation: &[usize]) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.occupation == occupation)
            .map(|e| e.probability)
    }

    /// Probability of one photon in every mode.
    pub fn coincidence(&self) -> f64 {
        self.probability_of(&vec![1; self.n]).unwrap_or(0.0)
    }

    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        self.entries
            .iter()
            .map(|e| format!("{},{}", e.label(), format_float(e.probability)))
    }
}

/// Occupation vectors of `total` photons over `modes` modes, descending
/// lexicographic order.
pub(crate) fn occupations(modes: usize, total: usize) -> Vec<Vec<usize>> {
    fn fill(prefix: &mut Vec<usize>, modes: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == modes {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for s in (0..=left).rev() {
            prefix.push(s);
            fill(prefix, modes, left - s, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if modes > 0 {
        fill(&mut Vec::with_capacity(modes), modes, total, &mut out);
    }
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn check_size(n: usize) -> Result<()> {
    if n > DISTRIBUTION_MAX_MODES {
        return Err(QuftiError::SizeLimit {
            what: "full output distribution",
            size: n,
            limit: DISTRIBUTION_MAX_MODES,
        });
    }
    Ok(())
}

/// Output distribution for one photon per input mode:
/// `Pr(S) = |Per(U[·, S])|² / Π s_k!`, where `U[·, S]` repeats output
/// column `k` `s_k` times.
pub fn fock_output_distribution(spec: &InterferometerSpec) -> Result<OutcomeDistribution> {
    spec.validate()?;
    check_size(spec.n)?;
    let u = compose_qufti(spec)?;
    let entries = occupations(spec.n, spec.n)
        .into_iter()
        .map(|occupation| {
            let amp = permanent_with_repeats(&u, &occupation)?;
            let norm: f64 = occupation.iter().map(|&s| factorial(s)).product();
            Ok(FockOutcome {
                probability: amp.norm_sqr() / norm,
                occupation,
            })
        })
        .collect::<Result<_>>()?;
    Ok(OutcomeDistribution {
        n: spec.n,
        phi: spec.phi,
        entries,
    })
}

/// Error-propagation sensitivity at `phi_probe` for the mask, control
/// phase and mode count of `spec` (its own `phi` is ignored). `P` comes from
/// Ryser permanents and `∂P/∂φ` from a central difference.
pub fn sensitivity_for_mask(spec: &InterferometerSpec, phi_probe: f64) -> Result<Sensitivity> {
    require_interference(spec.n)?;
    check_size(spec.n)?;
    let probe = spec.clone().with_phi(phi_probe);
    probe.validate()?;
    let prob = |phi: f64| -> Result<f64> {
        let u = compose_qufti(&spec.clone().with_phi(phi))?;
        Ok(permanent_ryser(&u)?.norm_sqr())
    };
    let h = FINITE_DIFFERENCE_STEP;
    let p = prob(phi_probe)?;
    let slope = (prob(phi_probe + h)? - prob(phi_probe - h)?) / (2.0 * h);
    if slope.abs() < SLOPE_FLOOR {
        return Ok(Sensitivity::Divergent);
    }
    let variance = (p * (1.0 - p)).max(0.0);
    Ok(Sensitivity::from_ratio(variance.sqrt(), slope.abs()))
}
