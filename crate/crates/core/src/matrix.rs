//! Dense complex matrices and the QuFTI unitaries.
//!
//! Mode and matrix indices in the public construction functions are
//! 1-based (`j, k = 1..=n`), matching the usual statement of the Fourier
//! matrix `V[j,k] = exp(-2πi·j·k/n)/√n`. A 0-based DFT differs from it by a
//! diagonal phase, which would break the entrywise agreement with
//! [`qufti_entry_closed_form`]. Storage and `Index` are 0-based.

use std::f64::consts::PI;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{QuftiError, Result};

/// Max-norm tolerance for treating a matrix as unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Below this modulus the closed-form entry denominator is treated as zero.
pub const SINGULAR_DENOMINATOR_TOL: f64 = 1e-14;

/// Square, row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(QuftiError::InvalidDimension(0));
        }
        Ok(Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds a matrix from `f(row, col)` with 0-based indices.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        if dim == 0 {
            return Err(QuftiError::InvalidDimension(0));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(QuftiError::InvalidDimension(0));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(QuftiError::Shape {
                expected: dim,
                actual: bad.len(),
            });
        }
        Ok(Self {
            dim,
            data: rows.concat(),
        })
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(entries.len())?;
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Column-major copy of the entries, handy for column-oriented kernels.
    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim)
            .map(|c| (0..self.dim).map(|r| self[(r, c)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(self[(c, r)].conj());
            }
        }
        Self { dim: n, data }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(self[(c, r)]);
            }
        }
        Self { dim: n, data }
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(QuftiError::Shape {
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n)?;
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * n..(r + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖M·M† − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self
            .matmul(&self.adjoint())
            .expect("adjoint has the same dimension");
        let id = Self::identity(self.dim).expect("dim >= 1");
        prod.max_abs_diff(&id)
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() < UNITARITY_TOL
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.dim;
        for c in 0..n {
            self.data.swap(a * n + c, b * n + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        let n = self.dim;
        for r in 0..n {
            self.data.swap(r * n + a, r * n + b);
        }
    }

    /// Matrix whose columns are column `k` repeated `multiplicities[k]` times,
    /// in column order. The multiplicities must sum to `dim`.
    pub fn repeat_columns(&self, multiplicities: &[usize]) -> Result<Self> {
        check_multiplicities(self.dim, multiplicities)?;
        let cols: Vec<usize> = multiplicities
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
            .collect();
        Self::from_fn(self.dim, |r, c| self[(r, cols[c])])
    }
}

pub(crate) fn check_multiplicities(dim: usize, multiplicities: &[usize]) -> Result<()> {
    if multiplicities.len() != dim {
        return Err(QuftiError::Shape {
            expected: dim,
            actual: multiplicities.len(),
        });
    }
    let total: usize = multiplicities.iter().sum();
    if total != dim {
        return Err(QuftiError::Shape {
            expected: dim,
            actual: total,
        });
    }
    Ok(())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix dimensions must agree")
    }
}

/// Pattern of unknown-phase multipliers across the modes.
#[derive(Clone, Debug, PartialEq)]
pub enum PhaseMask {
    /// Mode `j` acquires `(j-1)·φ`.
    LinearGradient,
    /// Only mode `k` (1-based) acquires `φ`.
    SingleMode(usize),
    /// Mode `j` acquires `weights[j-1]·φ`. The linear gradient is the
    /// special case `weights = [0, 1, …, n-1]`.
    Custom(Vec<f64>),
}

/// Parameters of one interferometer instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InterferometerSpec {
    pub n: usize,
    /// Unknown phase, radians.
    pub phi: f64,
    /// Control phase of the reference gradient, radians.
    pub theta: f64,
    pub mask: PhaseMask,
}

impl InterferometerSpec {
    /// Linear-gradient interferometer with `θ = 0`.
    pub fn gradient(n: usize, phi: f64) -> Self {
        Self {
            n,
            phi,
            theta: 0.0,
            mask: PhaseMask::LinearGradient,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_mask(mut self, mask: PhaseMask) -> Self {
        self.mask = mask;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(QuftiError::InvalidDimension(0));
        }
        if !self.phi.is_finite() || !self.theta.is_finite() {
            return Err(QuftiError::Domain(format!(
                "phases must be finite (phi = {}, theta = {})",
                self.phi, self.theta
            )));
        }
        match &self.mask {
            PhaseMask::LinearGradient => {}
            PhaseMask::SingleMode(k) => {
                if *k == 0 || *k > self.n {
                    return Err(QuftiError::Domain(format!(
                        "single-mode index {k} outside 1..={}",
                        self.n
                    )));
                }
            }
            PhaseMask::Custom(weights) => {
                if weights.len() != self.n {
                    return Err(QuftiError::Shape {
                        expected: self.n,
                        actual: weights.len(),
                    });
                }
                if weights.iter().any(|w| !w.is_finite()) {
                    return Err(QuftiError::Domain(
                        "custom mask weights must be finite".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Total phase on each mode (0-based vector over modes `1..=n`).
    pub fn mode_phases(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.n;
        let phases = (0..n)
            .map(|i| {
                let unknown = match &self.mask {
                    PhaseMask::LinearGradient => i as f64 * self.phi,
                    PhaseMask::SingleMode(k) => {
                        if i + 1 == *k {
                            self.phi
                        } else {
                            0.0
                        }
                    }
                    PhaseMask::Custom(w) => w[i] * self.phi,
                };
                unknown + i as f64 * self.theta
            })
            .collect();
        Ok(phases)
    }
}

/// `n`-mode quantum Fourier transform, `V[j,k] = exp(-2πi·j·k/n)/√n` with
/// 1-based `j, k`.
pub fn qft_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(QuftiError::InvalidDimension(0));
    }
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, |r, c| {
        // reduce j·k mod n before scaling so large products keep full precision
        let jk = ((r + 1) * (c + 1)) % n;
        Complex64::from_polar(scale, -2.0 * PI * jk as f64 / n as f64)
    })
}

/// Diagonal `Φ·Θ` for the given spec.
pub fn phase_diagonal(spec: &InterferometerSpec) -> Result<ComplexMatrix> {
    let phases = spec.mode_phases()?;
    let entries: Vec<Complex64> = phases.iter().map(|&p| Complex64::cis(p)).collect();
    ComplexMatrix::diagonal(&entries)
}

/// `U = V · Φ · Θ · V†`.
pub fn compose_qufti(spec: &InterferometerSpec) -> Result<ComplexMatrix> {
    let phases = spec.mode_phases()?;
    let v = qft_matrix(spec.n)?;
    let d: Vec<Complex64> = phases.iter().map(|&p| Complex64::cis(p)).collect();
    // V·D scales the columns of V; D is never materialised
    let n = spec.n;
    let vd = ComplexMatrix::from_fn(n, |r, c| v[(r, c)] * d[c])?;
    vd.matmul(&v.adjoint())
}

/// Closed-form entry of the linear-gradient QuFTI with `θ = 0`:
/// `(1 − e^{inφ}) / (n·(e^{2πi(j−k)/n} − e^{iφ}))`, 1-based `j, k`.
///
/// Fails with [`QuftiError::SingularEntry`] when the denominator vanishes
/// (e.g. `φ = 0`, or `e^{iφ}` hitting a root of unity); fall back to
/// [`compose_qufti`] in that case.
pub fn qufti_entry_closed_form(n: usize, j: usize, k: usize, phi: f64) -> Result<Complex64> {
    if n == 0 {
        return Err(QuftiError::InvalidDimension(0));
    }
    if j == 0 || j > n || k == 0 || k > n {
        return Err(QuftiError::Domain(format!(
            "entry index ({j}, {k}) outside 1..={n}"
        )));
    }
    let diff = (j as i64 - k as i64).rem_euclid(n as i64) as f64;
    let root = Complex64::cis(2.0 * PI * diff / n as f64);
    let denom = root - Complex64::cis(phi);
    if denom.norm() < SINGULAR_DENOMINATOR_TOL {
        return Err(QuftiError::SingularEntry { n, j, k, phi });
    }
    let numer = Complex64::new(1.0, 0.0) - Complex64::cis(n as f64 * phi);
    Ok(numer / (denom * n as f64))
}

/// Linear-gradient QuFTI (`θ = 0`) assembled from the closed-form entries,
/// falling back to the explicit product when any entry is singular.
pub fn qufti_matrix_closed_form(n: usize, phi: f64) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(n)?;
    for j in 1..=n {
        for k in 1..=n {
            match qufti_entry_closed_form(n, j, k, phi) {
                Ok(z) => m[(j - 1, k - 1)] = z,
                Err(QuftiError::SingularEntry { .. }) => {
                    return compose_qufti(&InterferometerSpec::gradient(n, phi));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(m)
}
