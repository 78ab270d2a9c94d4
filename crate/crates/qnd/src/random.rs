//! Seeded random states and unitaries for exploration and testing: Haar
//! sampling via complex Ginibre + QR, plus constructors for interactions that
//! satisfy the strong condition by block structure.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{ComplexMatrix, StateVector};
use crate::measure::InteractionUnitary;

/// Standard normal via Box-Muller.
fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

/// Haar-uniform random pure state.
pub fn random_unit_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    loop {
        let amplitudes: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
        if let Ok(state) = StateVector::new(amplitudes) {
            return state;
        }
    }
}

/// Haar-uniform random state supported on the index set `support`.
pub fn random_state_on_support<R: Rng + ?Sized>(
    dim: usize,
    support: &[usize],
    rng: &mut R,
) -> StateVector {
    assert!(!support.is_empty() && support.iter().all(|&i| i < dim));
    loop {
        let mut amplitudes = vec![Complex64::ZERO; dim];
        for &i in support {
            amplitudes[i] = complex_normal(rng);
        }
        if let Ok(state) = StateVector::new(amplitudes) {
            return state;
        }
    }
}

/// Haar-distributed random unitary: Gaussian matrix, then Gram-Schmidt with
/// the phase convention that makes the factorization unique.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    // Columns of a complex Ginibre matrix.
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| complex_normal(rng)).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: Complex64 = (0..dim).map(|r| cols[k][r].conj() * cols[j][r]).sum();
            let earlier = cols[k].clone();
            for (x, y) in cols[j].iter_mut().zip(&earlier) {
                *x -= proj * y;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // Gaussian columns are linearly independent with probability 1; the
        // retry in the callers covers the measure-zero case.
        let scale = 1.0 / norm;
        // Fix the phase so the diagonal of R is real positive.
        let pivot = cols[j][j];
        let phase = if pivot.norm() > 1e-300 {
            (pivot / pivot.norm()).conj()
        } else {
            Complex64::ONE
        };
        for z in cols[j].iter_mut() {
            *z *= scale * phase;
        }
    }
    ComplexMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}

/// Random interaction satisfying the strong condition exactly: one
/// independent Haar unitary acting on the probe for each system level, so
/// u_{ij}^{kℓ} = 0 whenever i ≠ k by construction.
pub fn strong_block_unitary<R: Rng + ?Sized>(
    d_system: usize,
    d_probe: usize,
    rng: &mut R,
) -> InteractionUnitary {
    let joint = d_system * d_probe;
    let mut m = ComplexMatrix::zeros(joint, joint);
    for k in 0..d_system {
        let block = haar_unitary(d_probe, rng);
        for j in 0..d_probe {
            for l in 0..d_probe {
                m.set(k * d_probe + j, k * d_probe + l, block.get(j, l));
            }
        }
    }
    InteractionUnitary::new(m, d_system, d_probe).expect("block unitary is unitary")
}

/// Random Hermitian generator that is block-diagonal over the system index,
/// so it commutes exactly with Q ⊗ I for any diagonal Q.
pub fn block_hermitian<R: Rng + ?Sized>(
    d_system: usize,
    d_probe: usize,
    rng: &mut R,
) -> ComplexMatrix {
    let joint = d_system * d_probe;
    let mut m = ComplexMatrix::zeros(joint, joint);
    for k in 0..d_system {
        for j in 0..d_probe {
            let row = k * d_probe + j;
            m.set(row, row, Complex64::new(standard_normal(rng), 0.0));
            for l in (j + 1)..d_probe {
                let col = k * d_probe + l;
                let z = complex_normal(rng) * 0.5;
                m.set(row, col, z);
                m.set(col, row, z.conj());
            }
        }
    }
    m
}
