//! Closed-form results for the linear-gradient QuFTI and the harness that
//! checks the product-form permanent against the Ryser kernel.
//!
//! With `a_n(j) = 2j(n−j)` and `b_n(j) = n² − 2jn + 2j²`:
//!
//! ```text
//! Per(U) = n^{-(n-1)} Π_{j=1}^{n-1} (j·e^{inφ} + n − j)
//! P      = n^{-(2n-2)} Π_{j=1}^{n-1} (a_n(j)·cos(nφ) + b_n(j))
//! |dP/dφ| = n·P·|sin(nφ)|·Σ_j |a_n(j) / (a_n(j)·cos(nφ) + b_n(j))|
//! ```
//!
//! The product form of the permanent is an empirical pattern, not a
//! theorem; [`conjecture_verify`] measures it, it never assumes it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QuftiError, Result};
use crate::matrix::{compose_qufti, InterferometerSpec};
use crate::permanent::{permanent_ryser, RYSER_MAX_DIM};

/// Coefficients of the `j`-th factor of the coincidence probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientPair {
    pub j: usize,
    pub a: f64,
    pub b: f64,
}

impl CoefficientPair {
    pub fn new(n: usize, j: usize) -> Self {
        let (nf, jf) = (n as f64, j as f64);
        Self {
            j,
            a: 2.0 * jf * (nf - jf),
            b: nf * nf - 2.0 * jf * nf + 2.0 * jf * jf,
        }
    }
}

/// The pairs for `j = 1..n`.
pub fn coefficient_pairs(n: usize) -> impl Iterator<Item = CoefficientPair> {
    (1..n).map(move |j| CoefficientPair::new(n, j))
}

/// Product-form permanent of the `n`-mode linear-gradient QuFTI.
///
/// # Panics
///
/// If `n == 0`.
pub fn permanent_closed_form(n: usize, phi: f64) -> Complex64 {
    assert!(n >= 1, "mode count must be at least 1");
    let nf = n as f64;
    let z = Complex64::cis(nf * phi);
    (1..n)
        .map(|j| (z * j as f64 + (n - j) as f64) / nf)
        .fold(Complex64::new(1.0, 0.0), |acc, f| acc * f)
}

/// `P` and `1 − P` for the coincidence probability with the `a_n(j)` terms
/// scaled by `damping ∈ [0, 1]`, given `1 − damping` separately so that tiny
/// dephasing keeps full precision.
///
/// Each normalised factor is `1 − a·(1 − d·cos nφ)/n²`, and
/// `1 − d·cos x = (1 − d) + 2d·sin²(x/2)`, so the complement is formed
/// without cancellation near `φ = 0`.
pub(crate) fn damped_probability_parts(
    n: usize,
    phi: f64,
    damping: f64,
    one_minus_damping: f64,
) -> (f64, f64) {
    let n2 = (n * n) as f64;
    let half = (n as f64 * phi / 2.0).sin();
    let deficit = one_minus_damping + 2.0 * damping * half * half;
    let ln_p: f64 = coefficient_pairs(n)
        .map(|cp| (-cp.a * deficit / n2).ln_1p())
        .sum();
    (ln_p.exp(), -ln_p.exp_m1())
}

/// `|dP/dφ|` with damped `a_n(j)`, given `P`.
pub(crate) fn damped_derivative(n: usize, phi: f64, damping: f64, p: f64) -> f64 {
    let x = n as f64 * phi;
    let (sin, cos) = x.sin_cos();
    let sum: f64 = coefficient_pairs(n)
        .map(|cp| {
            let a = cp.a * damping;
            (a / (a * cos + cp.b)).abs()
        })
        .sum();
    n as f64 * p * sin.abs() * sum
}

/// Probability of exactly one photon in every output mode.
///
/// # Panics
///
/// If `n == 0`.
pub fn coincidence_probability(n: usize, phi: f64) -> f64 {
    assert!(n >= 1, "mode count must be at least 1");
    damped_probability_parts(n, phi, 1.0, 0.0).0
}

/// `|∂P/∂φ|` from the analytic log-derivative.
///
/// # Panics
///
/// If `n == 0`.
pub fn probability_derivative(n: usize, phi: f64) -> f64 {
    assert!(n >= 1, "mode count must be at least 1");
    damped_derivative(n, phi, 1.0, coincidence_probability(n, phi))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WorstCase {
    pub n: usize,
    pub phi: f64,
}

/// Outcome of a brute-force comparison between Ryser permanents and the
/// product form. Serialises as
/// `{"n_range":[lo,hi],"samples":..,"max_abs_error":..,"worst_case":{"n":..,"phi":..}}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub n_range: [usize; 2],
    pub samples: usize,
    pub max_abs_error: f64,
    pub worst_case: WorstCase,
}

impl ConjectureReport {
    /// The uniform grid `φ_k = 2πk/samples`, `k = 0..samples`.
    pub fn phi_grid(&self) -> Vec<f64> {
        phi_grid(self.samples)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs_error < tol
    }
}

fn phi_grid(samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|k| 2.0 * PI * k as f64 / samples as f64)
        .collect()
}

/// Compare `permanent_ryser(compose_qufti(n, φ))` with
/// [`permanent_closed_form`] for `n = 2..=n_max` and `samples` phases on
/// `[0, 2π)`.
pub fn conjecture_verify(n_max: usize, samples: usize) -> Result<ConjectureReport> {
    conjecture_verify_with(n_max, samples, permanent_closed_form)
}

/// [`conjecture_verify`] against an arbitrary candidate formula.
pub fn conjecture_verify_with<F>(
    n_max: usize,
    samples: usize,
    closed_form: F,
) -> Result<ConjectureReport>
where
    F: Fn(usize, f64) -> Complex64 + Sync,
{
    if !(2..=RYSER_MAX_DIM).contains(&n_max) {
        return Err(QuftiError::SizeLimit {
            what: "conjecture verification n_max (range 2..=30)",
            size: n_max,
            limit: RYSER_MAX_DIM,
        });
    }
    if samples == 0 {
        return Err(QuftiError::Domain(
            "at least one phase sample is required".into(),
        ));
    }
    let grid = phi_grid(samples);
    let cells: Vec<(usize, f64)> = (2..=n_max)
        .flat_map(|n| grid.iter().map(move |&phi| (n, phi)))
        .collect();

    let errors: Vec<f64> = cells
        .par_iter()
        .map(|&(n, phi)| {
            let u = compose_qufti(&InterferometerSpec::gradient(n, phi))?;
            let numeric = permanent_ryser(&u)?;
            Ok((numeric - closed_form(n, phi)).norm())
        })
        .collect::<Result<_>>()?;

    // first strict maximum in (n, φ) order; NaN counts as the worst case
    let mut worst = 0;
    for (i, &e) in errors.iter().enumerate() {
        if e > errors[worst] || (e.is_nan() && !errors[worst].is_nan()) {
            worst = i;
        }
    }
    let (n, phi) = cells[worst];
    Ok(ConjectureReport {
        n_range: [2, n_max],
        samples,
        max_abs_error: errors[worst],
        worst_case: WorstCase { n, phi },
    })
}
