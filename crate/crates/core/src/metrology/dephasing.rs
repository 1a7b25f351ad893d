//! Gaussian per-mode dephasing.
//!
//! A zero-mean random phase of variance `⟨Δχ²⟩` damps the interference
//! term `cos(nφ)` by `e^{−n²⟨Δχ²⟩/2}`. For the QuFTI the factor folds into
//! every `a_n(j)`, so the analytic derivative keeps its form.
//!
//! The NOON comparator applies the same damping to the two-mode signal of
//! an `N`-photon NOON interferometer, whose observable has expectation
//! `(1 + cos(Nφ)·e^{−N²⟨Δχ²⟩/2}) / 2`. It is a reconstruction for
//! qualitative comparison, not a published curve.

use crate::analytics::{damped_derivative, damped_probability_parts};
use crate::error::{QuftiError, Result};

use super::{phase_sensitivity_numeric, require_interference, Sensitivity, STATIONARY_SIN_TOL};

/// Variance of the per-mode phase noise, in radians².
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DephasingParams {
    chi_sq: f64,
}

impl DephasingParams {
    pub fn new(chi_sq: f64) -> Result<Self> {
        if chi_sq.is_nan() || chi_sq < 0.0 || chi_sq.is_infinite() {
            return Err(QuftiError::Domain(format!(
                "dephasing variance must be finite and non-negative, got {chi_sq}"
            )));
        }
        Ok(Self { chi_sq })
    }

    /// From the standard deviation `χ` of the phase noise.
    pub fn from_std_dev(chi: f64) -> Result<Self> {
        if chi.is_nan() || chi < 0.0 {
            return Err(QuftiError::Domain(format!(
                "dephasing width must be non-negative, got {chi}"
            )));
        }
        Self::new(chi * chi)
    }

    pub fn none() -> Self {
        Self { chi_sq: 0.0 }
    }

    pub fn chi_sq(&self) -> f64 {
        self.chi_sq
    }

    /// `(e^{−m²χ²/2}, 1 − e^{−m²χ²/2})` for an interference order `m`.
    fn damping(&self, order: usize) -> (f64, f64) {
        let x = -0.5 * (order * order) as f64 * self.chi_sq;
        (x.exp(), -x.exp_m1())
    }
}

/// Coincidence probability with `a_n(j) → a_n(j)·e^{−n²χ²/2}`.
///
/// # Panics
///
/// If `n == 0`.
pub fn dephased_probability(n: usize, phi: f64, params: &DephasingParams) -> f64 {
    assert!(n >= 1, "mode count must be at least 1");
    let (d, one_minus_d) = params.damping(n);
    damped_probability_parts(n, phi, d, one_minus_d).0
}

/// `|∂P/∂φ|` of [`dephased_probability`].
pub fn dephased_derivative(n: usize, phi: f64, params: &DephasingParams) -> f64 {
    let (d, one_minus_d) = params.damping(n);
    let (p, _) = damped_probability_parts(n, phi, d, one_minus_d);
    damped_derivative(n, phi, d, p)
}

/// QuFTI sensitivity under dephasing. With zero variance this is exactly
/// [`phase_sensitivity_numeric`]; otherwise `P < 1` everywhere and the
/// sensitivity diverges at every stationary point, including `φ = 0`.
pub fn dephased_sensitivity(n: usize, phi: f64, params: &DephasingParams) -> Result<Sensitivity> {
    require_interference(n)?;
    if params.chi_sq == 0.0 {
        return phase_sensitivity_numeric(n, phi);
    }
    if (n as f64 * phi).sin().abs() < STATIONARY_SIN_TOL {
        return Ok(Sensitivity::Divergent);
    }
    let (d, one_minus_d) = params.damping(n);
    let (p, q) = damped_probability_parts(n, phi, d, one_minus_d);
    let dp = damped_derivative(n, phi, d, p);
    Ok(Sensitivity::from_ratio((p * q).sqrt(), dp))
}

/// Sensitivity of an `N`-photon NOON interferometer with the same damping.
pub fn noon_dephased_sensitivity(
    photons: usize,
    phi: f64,
    params: &DephasingParams,
) -> Result<Sensitivity> {
    if photons < 2 {
        return Err(QuftiError::Domain(format!(
            "NOON state needs at least 2 photons, got {photons}"
        )));
    }
    let nf = photons as f64;
    if params.chi_sq == 0.0 {
        // √(1 − cos²)/2 over N|sin|/2 is 1/N wherever defined
        return Ok(Sensitivity::Finite(1.0 / nf));
    }
    let sin = (nf * phi).sin();
    if sin.abs() < STATIONARY_SIN_TOL {
        return Ok(Sensitivity::Divergent);
    }
    let (v, _) = params.damping(photons);
    // 1 − V²cos² = (1 − V²) + V²sin²
    let one_minus_v2 = -(-(nf * nf) * params.chi_sq).exp_m1();
    let variance = (one_minus_v2 + v * v * sin * sin) / 4.0;
    let slope = v * nf * sin.abs() / 2.0;
    Ok(Sensitivity::from_ratio(variance.sqrt(), slope))
}
