//! Exact permanents of complex matrices.
//!
//! Three kernels share one contract:
//!
//! - [`permanent_naive`]: sum over all `n!` permutations in lexicographic
//!   order. Only used as an oracle.
//! - [`permanent_ryser`]: Ryser's inclusion–exclusion formula, walking the
//!   column subsets in Gray-code order so each step updates the row sums
//!   with a single column. `O(2ⁿ·n)`.
//! - [`permanent_with_repeats`]: Ryser over a multiset of columns, giving the
//!   amplitude of a Fock outcome with bunched photons.
//!
//! The Ryser walk is split into a fixed number of contiguous Gray-code
//! chunks that depend only on the dimension. Chunks may run on the rayon
//! pool but are reduced in order, so the result is the same bit pattern no
//! matter how many threads are available.

use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QuftiError, Result};
use crate::matrix::{check_multiplicities, ComplexMatrix};

/// Largest dimension accepted by [`permanent_naive`].
pub const NAIVE_MAX_DIM: usize = 10;

/// Largest dimension accepted by the Ryser kernels.
pub const RYSER_MAX_DIM: usize = 30;

/// Dimensions at or above this are split into [`PARALLEL_CHUNKS`] chunks.
pub const PARALLEL_MIN_DIM: usize = 16;

/// Fixed chunk count for the split Gray-code walk.
pub const PARALLEL_CHUNKS: u64 = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Permanent by explicit expansion over all permutations.
pub fn permanent_naive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.dim();
    if n > NAIVE_MAX_DIM {
        return Err(QuftiError::SizeLimit {
            what: "naive permanent",
            size: n,
            limit: NAIVE_MAX_DIM,
        });
    }
    // itertools yields permutations of a sorted range in lexicographic order
    let total = (0..n)
        .permutations(n)
        .map(|sigma| {
            sigma
                .iter()
                .enumerate()
                .fold(ONE, |acc, (row, &col)| acc * m[(row, col)])
        })
        .fold(ZERO, |acc, term| acc + term);
    Ok(total)
}

/// Permanent by Ryser's formula with Gray-code subset ordering.
pub fn permanent_ryser(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.dim();
    if n > RYSER_MAX_DIM {
        return Err(QuftiError::SizeLimit {
            what: "Ryser permanent",
            size: n,
            limit: RYSER_MAX_DIM,
        });
    }
    let cols = m.columns();
    let steps: u64 = 1 << n;

    let sum = if n < PARALLEL_MIN_DIM {
        ryser_chunk(&cols, 1, steps)
    } else {
        let width = steps / PARALLEL_CHUNKS;
        let partials: Vec<Complex64> = (0..PARALLEL_CHUNKS)
            .into_par_iter()
            .map(|c| {
                let lo = (c * width).max(1);
                let hi = if c + 1 == PARALLEL_CHUNKS {
                    steps
                } else {
                    (c + 1) * width
                };
                ryser_chunk(&cols, lo, hi)
            })
            .collect();
        partials.into_iter().fold(ZERO, |acc, p| acc + p)
    };

    // Per(A) = (-1)^n Σ_S (-1)^{|S|} Π_i Σ_{j∈S} a_ij
    Ok(if n.is_multiple_of(2) { sum } else { -sum })
}

#[inline]
fn gray(g: u64) -> u64 {
    g ^ (g >> 1)
}

/// Signed Ryser terms for Gray-code steps `lo..hi` (`lo ≥ 1`). The row sums
/// are seeded directly from the subset `gray(lo - 1)`.
fn ryser_chunk(cols: &[Vec<Complex64>], lo: u64, hi: u64) -> Complex64 {
    let n = cols.len();
    let start = gray(lo - 1);
    let mut row_sums = vec![ZERO; n];
    for (j, col) in cols.iter().enumerate() {
        if start >> j & 1 == 1 {
            for (s, &a) in row_sums.iter_mut().zip(col) {
                *s += a;
            }
        }
    }
    let mut subset = start;
    let mut acc = ZERO;
    for g in lo..hi {
        let j = g.trailing_zeros() as usize;
        let bit = 1u64 << j;
        subset ^= bit;
        let col = &cols[j];
        if subset & bit != 0 {
            for (s, &a) in row_sums.iter_mut().zip(col) {
                *s += a;
            }
        } else {
            for (s, &a) in row_sums.iter_mut().zip(col) {
                *s -= a;
            }
        }
        let prod = row_sums.iter().fold(ONE, |p, &s| p * s);
        if subset.count_ones().is_multiple_of(2) {
            acc += prod;
        } else {
            acc -= prod;
        }
    }
    acc
}

/// Permanent of the matrix built by repeating column `k` of `m`
/// `col_multiplicities[k]` times. The multiplicities must sum to `m.dim()`.
///
/// Subsets of the expanded matrix are grouped by how many copies `t_k` of
/// each original column they contain, which turns the `2ⁿ` Ryser terms into
/// `Π (s_k + 1)` weighted terms:
///
/// `Per = Σ_t (−1)^{n−|t|} Π_k C(s_k, t_k) Π_i Σ_k t_k·a_ik`.
pub fn permanent_with_repeats(
    m: &ComplexMatrix,
    col_multiplicities: &[usize],
) -> Result<Complex64> {
    let n = m.dim();
    check_multiplicities(n, col_multiplicities)?;
    if n > RYSER_MAX_DIM {
        return Err(QuftiError::SizeLimit {
            what: "Ryser permanent",
            size: n,
            limit: RYSER_MAX_DIM,
        });
    }
    if col_multiplicities.iter().all(|&s| s == 1) {
        return permanent_ryser(m);
    }
    Ok(multiset_ryser(m, col_multiplicities))
}

pub(crate) fn multiset_ryser(m: &ComplexMatrix, col_multiplicities: &[usize]) -> Complex64 {
    let n = m.dim();
    let all_cols = m.columns();
    let (cols, mults): (Vec<&Vec<Complex64>>, Vec<usize>) = all_cols
        .iter()
        .zip(col_multiplicities)
        .filter(|(_, &s)| s > 0)
        .map(|(c, &s)| (c, s))
        .unzip();
    let binoms: Vec<Vec<f64>> = mults.iter().map(|&s| binomial_row(s)).collect();

    // mixed-radix odometer over t ∈ Π [0, s_k]
    let mut t = vec![0usize; mults.len()];
    let mut row_sums = vec![ZERO; n];
    let mut acc = ZERO;
    loop {
        let mut k = 0;
        while k < mults.len() && t[k] == mults[k] {
            let s = mults[k] as f64;
            for (r, &a) in row_sums.iter_mut().zip(cols[k]) {
                *r -= a * s;
            }
            t[k] = 0;
            k += 1;
        }
        if k == mults.len() {
            break;
        }
        t[k] += 1;
        for (r, &a) in row_sums.iter_mut().zip(cols[k]) {
            *r += a;
        }

        let weight: f64 = t.iter().zip(&binoms).map(|(&tk, row)| row[tk]).product();
        let chosen: usize = t.iter().sum();
        let prod = row_sums.iter().fold(ONE, |p, &s| p * s) * weight;
        if (n - chosen).is_multiple_of(2) {
            acc += prod;
        } else {
            acc -= prod;
        }
    }
    acc
}

fn binomial_row(s: usize) -> Vec<f64> {
    let mut row = vec![1.0; s + 1];
    for k in 1..=s {
        row[k] = row[k - 1] * (s + 1 - k) as f64 / k as f64;
    }
    row
}
