//! Shared inputs for the criterion benches.

use num_complex::Complex64;
use qufti_core::ComplexMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Seeded matrix with entries drawn uniformly from the unit disk.
pub fn random_unit_disk_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = StdRng::seed_from_u64(seed);
    ComplexMatrix::from_fn(n, |_, _| {
        let r: f64 = rng.gen::<f64>().sqrt();
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, theta)
    })
    .expect("n >= 1")
}
