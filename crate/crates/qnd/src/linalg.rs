//! Dense complex linear algebra on small Hilbert spaces.
//!
//! Everything here is plain row-major storage over `Complex64`; the spaces
//! involved are desk-scale (at most [`MAX_FACTOR_DIM`] per tensor factor), so
//! no sparsity or blocking is attempted.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension per tensor factor.
pub const MAX_FACTOR_DIM: usize = 64;

/// Default absolute tolerance for deviation scalars (unitarity, hermiticity,
/// condition violations).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build a matrix from row-major entries. Rejects non-finite entries and
    /// length mismatches.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "matrix entries",
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Diagonal matrix with real entries.
    pub fn diagonal_real(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose M†.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product self ⊗ other, row-major with `self` as the leading
    /// (system) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |r, c| {
            let (i, k) = (r / other.rows, r % other.rows);
            let (j, l) = (c / other.cols, c % other.cols);
            self.get(i, j) * other.get(k, l)
        })
    }

    /// Largest entry magnitude.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Index of the entry with the largest magnitude.
    pub fn argmax_abs_entry(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_val = -1.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j).norm();
                if v > best_val {
                    best_val = v;
                    best = (i, j);
                }
            }
        }
        best
    }
}

/// Normalized pure state in some chosen eigenbasis.
///
/// Construction normalizes the amplitude vector, so the Euclidean norm is 1
/// to machine precision for every value of this type.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Normalize-on-build. Rejects empty, non-finite, or (near-)zero input.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "state amplitudes",
                expected: 1,
                found: 0,
            });
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: "state amplitudes",
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Err(Error::ZeroNorm);
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / norm).collect();
        Ok(Self { amplitudes })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Basis state |k⟩ in a `dim`-dimensional space.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[k] = Complex64::ONE;
        Self { amplitudes }
    }

    /// Uniform superposition over all basis states.
    pub fn uniform(dim: usize) -> Self {
        assert!(dim > 0);
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            amplitudes: vec![a; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Tensor product |self⟩ ⊗ |other⟩ in system-major order.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes }
    }

    /// |self⟩⟨self| as a dense matrix.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        })
    }
}

/// Index into the joint space S ⊗ P.
///
/// The canonical ordering is system-major everywhere: basis vector
/// |q_i⟩|r_j⟩ sits at flat position `i * d_probe + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointIndex {
    pub system: usize,
    pub probe: usize,
}

impl JointIndex {
    pub fn flat(&self, d_probe: usize) -> usize {
        self.system * d_probe + self.probe
    }

    pub fn from_flat(flat: usize, d_probe: usize) -> Self {
        Self {
            system: flat / d_probe,
            probe: flat % d_probe,
        }
    }
}

fn require_square(m: &ComplexMatrix, context: &'static str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            context,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

/// Unitarity test: returns `(deviation <= tol, deviation)` where deviation is
/// the max-entry magnitude of M†M − I.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Result<(bool, f64)> {
    require_square(m, "is_unitary")?;
    let deviation = m
        .adjoint()
        .matmul(m)
        .sub(&ComplexMatrix::identity(m.rows()))
        .max_abs_entry();
    Ok((deviation <= tol, deviation))
}

/// Hermiticity test: returns `(deviation <= tol, deviation)` where deviation
/// is the max-entry magnitude of M − M†.
pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> Result<(bool, f64)> {
    require_square(m, "is_hermitian")?;
    let deviation = m.sub(&m.adjoint()).max_abs_entry();
    Ok((deviation <= tol, deviation))
}

/// The commutator AB − BA.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_square(a, "commutator")?;
    require_square(b, "commutator")?;
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            context: "commutator",
            expected: a.rows(),
            found: b.rows(),
        });
    }
    Ok(a.matmul(b).sub(&b.matmul(a)))
}

/// Max-entry magnitude of AB − BA.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(commutator(a, b)?.max_abs_entry())
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns `(eigenvalues, V)` with the columns of V the
/// corresponding orthonormal eigenvectors, so H = V diag(λ) V†.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    require_square(h, "hermitian_eigen")?;
    let (ok, deviation) = is_hermitian(h, DEFAULT_TOL)?;
    if !ok {
        return Err(Error::NotHermitian { deviation });
    }

    let n = h.rows();
    let mut a = h.clone();
    // Symmetrize exactly so roundoff in the input cannot drift the sweep.
    for p in 0..n {
        let app = a.get(p, p);
        a.set(p, p, Complex64::new(app.re, 0.0));
        for q in (p + 1)..n {
            let avg = (a.get(p, q) + a.get(q, p).conj()) * 0.5;
            a.set(p, q, avg);
            a.set(q, p, avg.conj());
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs_entry().max(1.0);
    let stop = 1e-15 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let m = apq.norm();
                if m <= stop {
                    continue;
                }
                // Phase factor that makes the (p,q) block real symmetric,
                // followed by a classical Givens rotation that zeroes it.
                let u = apq / m;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * m);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Column update A <- A J with J = I except
                // J[p][p] = c*u, J[p][q] = s*u, J[q][p] = -s, J[q][q] = c.
                for r in 0..n {
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    a.set(r, p, arp * (c * u) - arq * s);
                    a.set(r, q, arp * (s * u) + arq * c);
                }
                // Row update A <- J† A.
                for col in 0..n {
                    let apc = a.get(p, col);
                    let aqc = a.get(q, col);
                    a.set(p, col, apc * (c * u.conj()) - aqc * s);
                    a.set(q, col, apc * (s * u.conj()) + aqc * c);
                }
                for r in 0..n {
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, vrp * (c * u) - vrq * s);
                    v.set(r, q, vrp * (s * u) + vrq * c);
                }
            }
        }
    }

    let eigenvalues = (0..n).map(|i| a.get(i, i).re).collect();
    Ok((eigenvalues, v))
}

/// U = exp(−i H t) for Hermitian H via eigendecomposition, with ħ = 1.
///
/// The result is unitary to roundoff by construction: the phases e^{−iλt}
/// all have unit magnitude and V is orthonormal.
pub fn hermitian_expm(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let (eigenvalues, v) = hermitian_eigen(h)?;
    let n = h.rows();
    let phases: Vec<Complex64> = eigenvalues
        .iter()
        .map(|&lambda| Complex64::new(0.0, -lambda * t).exp())
        .collect();
    // V diag(phases) V†
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut sum = Complex64::ZERO;
            for (k, phase) in phases.iter().enumerate() {
                sum += v.get(i, k) * phase * v.get(j, k).conj();
            }
            out.set(i, j, sum);
        }
    }
    Ok(out)
}

/// Partial trace over the probe factor: maps an operator on S ⊗ P to one on S.
pub fn partial_trace_probe(
    rho: &ComplexMatrix,
    d_system: usize,
    d_probe: usize,
) -> Result<ComplexMatrix> {
    require_square(rho, "partial_trace_probe")?;
    if rho.rows() != d_system * d_probe {
        return Err(Error::DimensionMismatch {
            context: "partial_trace_probe",
            expected: d_system * d_probe,
            found: rho.rows(),
        });
    }
    Ok(ComplexMatrix::from_fn(d_system, d_system, |i, k| {
        (0..d_probe)
            .map(|j| rho.get(i * d_probe + j, k * d_probe + j))
            .sum()
    }))
}

/// Partial trace over the system factor: maps an operator on S ⊗ P to one on P.
pub fn partial_trace_system(
    rho: &ComplexMatrix,
    d_system: usize,
    d_probe: usize,
) -> Result<ComplexMatrix> {
    require_square(rho, "partial_trace_system")?;
    if rho.rows() != d_system * d_probe {
        return Err(Error::DimensionMismatch {
            context: "partial_trace_system",
            expected: d_system * d_probe,
            found: rho.rows(),
        });
    }
    Ok(ComplexMatrix::from_fn(d_probe, d_probe, |j, l| {
        (0..d_system)
            .map(|i| rho.get(i * d_probe + j, i * d_probe + l))
            .sum()
    }))
}

/// Pauli matrices, used throughout the tests and fixtures.
pub mod pauli {
    use super::ComplexMatrix;
    use num_complex::Complex64;

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::ZERO,
                Complex64::ONE,
                Complex64::ONE,
                Complex64::ZERO,
            ],
        )
        .unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::ZERO,
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::ZERO,
            ],
        )
        .unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::diagonal_real(&[1.0, -1.0])
    }
}
