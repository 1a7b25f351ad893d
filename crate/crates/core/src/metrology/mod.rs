//! Phase sensitivity and the baselines it is compared against.
//!
//! Sensitivity follows from error propagation on the coincidence
//! observable, `Δφ = √(P − P²) / |∂P/∂φ|`. Baselines use ordinal resource
//! counting: an `n`-mode gradient interrogates the phase `n(n−1)/2` times,
//! plus one photon, so `N = 1 + n(n−1)/2`, `Δφ_SNL = 1/√N`, `Δφ_HL = 1/N`.

mod dephasing;
mod distribution;

use std::f64::consts::PI;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::analytics::{coincidence_probability, damped_derivative, damped_probability_parts};
use crate::error::{QuftiError, Result};

pub use dephasing::{
    dephased_derivative, dephased_probability, dephased_sensitivity, noon_dephased_sensitivity,
    DephasingParams,
};
pub use distribution::{
    fock_output_distribution, sensitivity_for_mask, FockOutcome, OutcomeDistribution,
    DISTRIBUTION_MAX_MODES, FINITE_DIFFERENCE_STEP,
};

/// Distance from a maximum of `P` below which the small-angle limit is used.
pub const PHI_EPS: f64 = 1e-8;

/// `|sin(nφ)|` below which an interior stationary point is declared.
pub const STATIONARY_SIN_TOL: f64 = 1e-12;

/// A phase sensitivity, or a flag that the error-propagation formula
/// diverges because `∂P/∂φ` vanishes while `P < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sensitivity {
    Finite(f64),
    Divergent,
}

impl Sensitivity {
    /// The value, with divergence mapped to `+∞`.
    pub fn value(self) -> f64 {
        match self {
            Sensitivity::Finite(v) => v,
            Sensitivity::Divergent => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Sensitivity::Finite(v) => Some(v),
            Sensitivity::Divergent => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, Sensitivity::Divergent)
    }

    pub(crate) fn from_ratio(numer: f64, denom: f64) -> Self {
        let v = numer / denom;
        if denom == 0.0 || !v.is_finite() {
            Sensitivity::Divergent
        } else {
            Sensitivity::Finite(v)
        }
    }
}

impl fmt::Display for Sensitivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sensitivity::Finite(v) => write!(f, "{}", format_float(*v)),
            Sensitivity::Divergent => f.write_str("inf"),
        }
    }
}

/// JSON: a number, or `null` when divergent.
impl Serialize for Sensitivity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Sensitivity::Finite(v) => s.serialize_f64(*v),
            Sensitivity::Divergent => s.serialize_none(),
        }
    }
}

/// Fixed 17-significant-digit scientific notation used for every CSV float.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn require_interference(n: usize) -> Result<()> {
    if n < 2 {
        return Err(QuftiError::Domain(format!(
            "need at least 2 modes for interference, got {n}"
        )));
    }
    Ok(())
}

/// Offset of `φ` from the nearest maximum of `P`, which sit at multiples of
/// `2π/n`.
fn offset_from_peak(n: usize, phi: f64) -> f64 {
    let period = 2.0 * PI / n as f64;
    phi - (phi / period).round() * period
}

/// Error-propagation sensitivity of the coincidence measurement.
///
/// Within [`PHI_EPS`] of a maximum of `P` (where the formula is `0/0`) the
/// small-angle limit is returned. Other stationary points are reported as
/// [`Sensitivity::Divergent`].
pub fn phase_sensitivity_numeric(n: usize, phi: f64) -> Result<Sensitivity> {
    require_interference(n)?;
    if !phi.is_finite() {
        return Err(QuftiError::Domain(format!(
            "phase must be finite, got {phi}"
        )));
    }
    if offset_from_peak(n, phi).abs() < PHI_EPS {
        return phase_sensitivity_small_angle(n).map(Sensitivity::Finite);
    }
    if (n as f64 * phi).sin().abs() < STATIONARY_SIN_TOL {
        return Ok(Sensitivity::Divergent);
    }
    let (p, q) = damped_probability_parts(n, phi, 1.0, 0.0);
    let dp = damped_derivative(n, phi, 1.0, p);
    Ok(Sensitivity::from_ratio((p * q).sqrt(), dp))
}

/// `√(3 / (2n(n+1)(n−1)))`, equivalently `1 / (2√C(n+1, 3))`.
pub fn phase_sensitivity_small_angle(n: usize) -> Result<f64> {
    require_interference(n)?;
    let nf = n as f64;
    Ok((3.0 / (2.0 * nf * (nf + 1.0) * (nf - 1.0))).sqrt())
}

/// Photon-equivalent resources `N = 1 + n(n−1)/2`.
pub fn orc_photon_count(n: usize) -> u64 {
    let n = n as u64;
    1 + n * n.saturating_sub(1) / 2
}

/// `1/√N`.
pub fn shotnoise_limit(n: usize) -> f64 {
    1.0 / (orc_photon_count(n) as f64).sqrt()
}

/// `1/N`.
pub fn heisenberg_limit(n: usize) -> f64 {
    1.0 / orc_photon_count(n) as f64
}

/// Success probability `(η_s·η_d)ⁿ` with lossy sources and detectors.
pub fn protocol_efficiency(eta_source: f64, eta_detector: f64, n: usize) -> Result<f64> {
    for (name, eta) in [("source", eta_source), ("detector", eta_detector)] {
        if !(0.0..=1.0).contains(&eta) {
            return Err(QuftiError::Domain(format!(
                "{name} efficiency {eta} outside [0, 1]"
            )));
        }
    }
    Ok((eta_source * eta_detector).powi(n as i32))
}

/// One row of a sensitivity sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SensitivityPoint {
    pub n: usize,
    pub phi: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "dP")]
    pub dp: f64,
    pub delta_phi: Sensitivity,
    pub snl: f64,
    pub hl: f64,
}

impl SensitivityPoint {
    pub const CSV_HEADER: &'static str = "n,phi,P,dP,delta_phi,snl,hl";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            format_float(self.phi),
            format_float(self.p),
            format_float(self.dp),
            self.delta_phi,
            format_float(self.snl),
            format_float(self.hl)
        )
    }
}

/// Sensitivity and baselines for the linear-gradient QuFTI at `(n, φ)`.
/// `φ = 0` yields the small-angle sensitivity.
pub fn sensitivity_point(n: usize, phi: f64) -> Result<SensitivityPoint> {
    let delta_phi = phase_sensitivity_numeric(n, phi)?;
    Ok(SensitivityPoint {
        n,
        phi,
        p: coincidence_probability(n, phi),
        dp: crate::analytics::probability_derivative(n, phi),
        delta_phi,
        snl: shotnoise_limit(n),
        hl: heisenberg_limit(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn small_angle_values() {
        assert!((phase_sensitivity_small_angle(2).unwrap() - 0.5).abs() < 1e-15);
        assert!((phase_sensitivity_small_angle(3).unwrap() - 0.25).abs() < 1e-15);
        assert!((phase_sensitivity_small_angle(10).unwrap() - 0.03892494720807615).abs() < 1e-15);
        assert!(phase_sensitivity_small_angle(1).is_err());
    }

    #[test]
    fn small_angle_binomial_form() {
        for n in 2..=30usize {
            let c3 = ((n + 1) * n * (n - 1) / 6) as f64;
            let alt = 1.0 / (2.0 * c3.sqrt());
            assert!(rel(phase_sensitivity_small_angle(n).unwrap(), alt) < 1e-14);
        }
    }

    #[test]
    fn numeric_sensitivity_near_origin() {
        let s = |n| phase_sensitivity_numeric(n, 1e-4).unwrap().value();
        assert!(rel(s(2), 0.5) < 1e-6);
        assert!(rel(s(3), 0.25) < 1e-6);
        assert!(rel(s(4), (3.0f64 / 120.0).sqrt()) < 1e-5);
    }

    #[test]
    fn numeric_sensitivity_uses_limit_at_peaks() {
        for n in 2..=8 {
            let limit = phase_sensitivity_small_angle(n).unwrap();
            assert_eq!(
                phase_sensitivity_numeric(n, 0.0).unwrap(),
                Sensitivity::Finite(limit)
            );
            let next_peak = 2.0 * PI / n as f64;
            assert_eq!(
                phase_sensitivity_numeric(n, next_peak).unwrap(),
                Sensitivity::Finite(limit)
            );
        }
    }

    #[test]
    fn numeric_sensitivity_flags_minimum() {
        // P is minimal where cos(nφ) = -1
        for n in 2..=8 {
            let s = phase_sensitivity_numeric(n, PI / n as f64).unwrap();
            assert!(s.is_divergent(), "n = {n}: {s:?}");
        }
        assert!(phase_sensitivity_numeric(1, 0.1).is_err());
        assert!(phase_sensitivity_numeric(3, f64::NAN).is_err());
    }

    #[test]
    fn resource_counting() {
        assert_eq!(orc_photon_count(1), 1);
        assert_eq!(orc_photon_count(2), 2);
        assert_eq!(orc_photon_count(10), 46);
        assert!((shotnoise_limit(2) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(shotnoise_limit(3), 0.5);
        assert!((shotnoise_limit(10) - 0.14744195615489714).abs() < 1e-15);
        assert_eq!(heisenberg_limit(2), 0.5);
        assert_eq!(heisenberg_limit(3), 0.25);
        assert!((heisenberg_limit(10) - 0.021739130434782608).abs() < 1e-17);
    }

    #[test]
    fn efficiency() {
        let eta = protocol_efficiency(0.42, 0.98, 10).unwrap();
        assert!((eta - 0.00013955765421474694).abs() < 1e-18);
        assert_eq!(protocol_efficiency(1.0, 1.0, 17).unwrap(), 1.0);
        assert_eq!(protocol_efficiency(0.0, 0.9, 3).unwrap(), 0.0);
        assert!(protocol_efficiency(1.2, 0.9, 3).is_err());
        assert!(protocol_efficiency(0.5, -0.1, 3).is_err());
        assert!(protocol_efficiency(f64::NAN, 0.5, 3).is_err());
    }

    #[test]
    fn csv_row_layout() {
        let point = sensitivity_point(2, 0.0).unwrap();
        assert_eq!(
            point.to_csv_row(),
            "2,0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0,\
             5.0000000000000000e-1,7.0710678118654746e-1,5.0000000000000000e-1"
        );
        let divergent = SensitivityPoint {
            delta_phi: Sensitivity::Divergent,
            ..point
        };
        assert!(divergent.to_csv_row().contains(",inf,"));
    }
}
