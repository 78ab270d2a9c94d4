//! The measurement process end to end: product pre-state, joint evolution,
//! Born-rule outcome distribution, collapse on the observed read-out value,
//! and the post-measurement ensemble.
//!
//! The measured system S carries an observable Q with eigenvalues `q_i`; the
//! probe P carries the read-out observable R with eigenvalues `r_j`. Both are
//! represented in their own eigenbases, so operators diagonal in Q or R are
//! diagonal matrices here. The joint space uses system-major flat indexing
//! (see [`crate::linalg::JointIndex`]).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::linalg::{is_unitary, ComplexMatrix, StateVector, DEFAULT_TOL, MAX_FACTOR_DIM};

/// Branch probabilities below this threshold are treated as impossible
/// outcomes: the collapse map divides by √P(r_j).
pub const BRANCH_THRESHOLD: f64 = 1e-14;

/// An observable given by its eigenvalue list; the eigenbasis is the
/// computational basis of the space it lives on.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    values: Vec<f64>,
}

impl Observable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "observable eigenvalues",
                expected: 1,
                found: 0,
            });
        }
        if values.len() > MAX_FACTOR_DIM {
            return Err(Error::DimensionTooLarge {
                dim: values.len(),
                max: MAX_FACTOR_DIM,
            });
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                context: "observable eigenvalues",
            });
        }
        Ok(Self { values })
    }

    /// Eigenvalues 0, 1, …, d−1 (a counting observable).
    pub fn counting(dim: usize) -> Result<Self> {
        Self::new((0..dim).map(|i| i as f64).collect())
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Repeated eigenvalues are allowed but worth flagging: branch indexing
    /// is per basis vector, not per eigenvalue sector.
    pub fn has_degenerate_values(&self, tol: f64) -> bool {
        let mut sorted = self.values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted.windows(2).any(|w| (w[1] - w[0]).abs() <= tol)
    }

    /// The observable as a diagonal matrix in its own eigenbasis.
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::diagonal_real(&self.values)
    }
}

/// The joint-space unitary u_{ij}^{kℓ}: basis state |q_k⟩|r_ℓ⟩ evolves into
/// Σ_{ij} u_{ij}^{kℓ} |q_i⟩|r_j⟩. Stored as a matrix on S ⊗ P with row index
/// (i, j) and column index (k, ℓ), both system-major.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionUnitary {
    matrix: ComplexMatrix,
    d_system: usize,
    d_probe: usize,
}

impl InteractionUnitary {
    pub fn new(matrix: ComplexMatrix, d_system: usize, d_probe: usize) -> Result<Self> {
        if d_system > MAX_FACTOR_DIM || d_probe > MAX_FACTOR_DIM {
            return Err(Error::DimensionTooLarge {
                dim: d_system.max(d_probe),
                max: MAX_FACTOR_DIM,
            });
        }
        let joint = d_system * d_probe;
        if matrix.rows() != joint || matrix.cols() != joint {
            return Err(Error::DimensionMismatch {
                context: "interaction unitary",
                expected: joint,
                found: matrix.rows(),
            });
        }
        let (ok, deviation) = is_unitary(&matrix, DEFAULT_TOL)?;
        if !ok {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            matrix,
            d_system,
            d_probe,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_system(&self) -> usize {
        self.d_system
    }

    pub fn d_probe(&self) -> usize {
        self.d_probe
    }

    /// Tensor coefficient u_{ij}^{kℓ}.
    #[inline]
    pub fn coeff(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.matrix
            .get(i * self.d_probe + j, k * self.d_probe + l)
    }
}

/// A complete measurement scheme: observables, interaction, and the
/// pre-measurement product state |ψ_S⟩|ψ_P⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementModel {
    system: Observable,
    probe: Observable,
    interaction: InteractionUnitary,
    system_state: StateVector,
    probe_state: StateVector,
}

impl MeasurementModel {
    pub fn new(
        system: Observable,
        probe: Observable,
        interaction: InteractionUnitary,
        system_state: StateVector,
        probe_state: StateVector,
    ) -> Result<Self> {
        if interaction.d_system() != system.dim() {
            return Err(Error::DimensionMismatch {
                context: "system observable vs interaction",
                expected: interaction.d_system(),
                found: system.dim(),
            });
        }
        if interaction.d_probe() != probe.dim() {
            return Err(Error::DimensionMismatch {
                context: "probe observable vs interaction",
                expected: interaction.d_probe(),
                found: probe.dim(),
            });
        }
        if system_state.dim() != system.dim() {
            return Err(Error::DimensionMismatch {
                context: "system state",
                expected: system.dim(),
                found: system_state.dim(),
            });
        }
        if probe_state.dim() != probe.dim() {
            return Err(Error::DimensionMismatch {
                context: "probe state",
                expected: probe.dim(),
                found: probe_state.dim(),
            });
        }
        Ok(Self {
            system,
            probe,
            interaction,
            system_state,
            probe_state,
        })
    }

    pub fn system(&self) -> &Observable {
        &self.system
    }

    pub fn probe(&self) -> &Observable {
        &self.probe
    }

    pub fn interaction(&self) -> &InteractionUnitary {
        &self.interaction
    }

    pub fn system_state(&self) -> &StateVector {
        &self.system_state
    }

    pub fn probe_state(&self) -> &StateVector {
        &self.probe_state
    }

    /// Same interaction and observables, different pre-measurement states.
    pub fn with_states(&self, system_state: StateVector, probe_state: StateVector) -> Result<Self> {
        Self::new(
            self.system.clone(),
            self.probe.clone(),
            self.interaction.clone(),
            system_state,
            probe_state,
        )
    }
}

/// The post-interaction joint amplitudes c_{ij} = Σ_{kℓ} a_k b_ℓ u_{ij}^{kℓ},
/// stored as a d_S × d_P matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAmplitudes {
    c: ComplexMatrix,
}

impl JointAmplitudes {
    /// Wrap an amplitude matrix; total squared norm must be 1 within 1e-10.
    pub fn new(c: ComplexMatrix) -> Result<Self> {
        let total: f64 = c.entries().iter().map(|z| z.norm_sqr()).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!(
                "joint amplitudes have total squared norm {total}, expected 1"
            )));
        }
        Ok(Self { c })
    }

    pub fn d_system(&self) -> usize {
        self.c.rows()
    }

    pub fn d_probe(&self) -> usize {
        self.c.cols()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.c.get(i, j)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.c
    }

    /// The joint state Σ c_{ij} |q_i⟩|r_j⟩ as a flat vector.
    pub fn joint_vector(&self) -> Vec<Complex64> {
        self.c.entries().to_vec()
    }
}

/// One collapsed branch of the post-measurement ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub outcome: usize,
    pub probability: f64,
    pub state: StateVector,
}

/// The mixed post-measurement ensemble over observed read-out values.
#[derive(Debug, Clone, PartialEq)]
pub struct PostEnsemble {
    branches: Vec<Branch>,
    density: ComplexMatrix,
}

impl PostEnsemble {
    /// Branches with probability above [`BRANCH_THRESHOLD`], in outcome order.
    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// The density operator ρ'' = Σ_j P(r_j) |Ψ''_j⟩⟨Ψ''_j| on the joint space.
    pub fn density(&self) -> &ComplexMatrix {
        &self.density
    }
}

/// Born-rule probabilities P(r_j) over probe outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Evolve the product pre-state: c_{ij} = Σ_{kℓ} a_k b_ℓ u_{ij}^{kℓ}.
pub fn joint_amplitudes(model: &MeasurementModel) -> JointAmplitudes {
    JointAmplitudes {
        c: joint_amplitude_matrix(
            model.interaction(),
            model.system_state(),
            model.probe_state(),
        ),
    }
}

/// The same evolution for explicitly supplied states. Shared by the
/// checkers and the search objectives, which sweep over many states.
pub(crate) fn joint_amplitude_matrix(
    u: &InteractionUnitary,
    a: &StateVector,
    b: &StateVector,
) -> ComplexMatrix {
    let pre = a.tensor(b);
    let post = u.matrix().matvec(pre.amplitudes());
    let d_probe = u.d_probe();
    ComplexMatrix::from_fn(u.d_system(), d_probe, |i, j| post[i * d_probe + j])
}

/// Born rule: P(r_j) = Σ_i |c_{ij}|². Tiny negative roundoff is clamped to 0.
pub fn outcome_distribution(c: &JointAmplitudes) -> OutcomeDistribution {
    let probs = (0..c.d_probe())
        .map(|j| {
            let p: f64 = (0..c.d_system()).map(|i| c.get(i, j).norm_sqr()).sum();
            debug_assert!(p >= -1e-12);
            p.max(0.0)
        })
        .collect();
    OutcomeDistribution { probs }
}

/// Wavepacket reduction: project the joint state onto the observed read-out
/// value r_j and renormalize. Returns the collapsed joint state |Ψ''_j⟩ and
/// the branch probability P(r_j).
pub fn collapse(c: &JointAmplitudes, outcome: usize) -> Result<(StateVector, f64)> {
    if outcome >= c.d_probe() {
        return Err(Error::DimensionMismatch {
            context: "collapse outcome index",
            expected: c.d_probe(),
            found: outcome,
        });
    }
    let p: f64 = (0..c.d_system())
        .map(|i| c.get(i, outcome).norm_sqr())
        .sum();
    if p <= BRANCH_THRESHOLD {
        return Err(Error::ImpossibleOutcome {
            outcome,
            probability: p,
        });
    }
    let scale = 1.0 / p.sqrt();
    let d_probe = c.d_probe();
    let mut amplitudes = vec![Complex64::ZERO; c.d_system() * d_probe];
    for i in 0..c.d_system() {
        amplitudes[i * d_probe + outcome] = c.get(i, outcome) * scale;
    }
    Ok((StateVector::new(amplitudes)?, p))
}

/// The full post-measurement ensemble: every branch with non-negligible
/// probability, plus the mixed density operator ρ''.
pub fn post_ensemble(c: &JointAmplitudes) -> PostEnsemble {
    let dist = outcome_distribution(c);
    let mut branches = Vec::new();
    let joint_dim = c.d_system() * c.d_probe();
    let mut density = ComplexMatrix::zeros(joint_dim, joint_dim);
    for (j, &p) in dist.probs().iter().enumerate() {
        if p <= BRANCH_THRESHOLD {
            continue;
        }
        let (state, probability) = collapse(c, j).expect("branch above threshold");
        let weighted = state
            .projector()
            .scale(Complex64::new(probability, 0.0));
        density = density.add(&weighted);
        branches.push(Branch {
            outcome: j,
            probability,
            state,
        });
    }
    PostEnsemble { branches, density }
}

/// Pre-measurement distribution of Q: |a_i|².
pub fn q_marginal_pre(a: &StateVector) -> Vec<f64> {
    a.amplitudes().iter().map(|z| z.norm_sqr()).collect()
}

/// Post-measurement distribution of Q: Σ_j |c_{ij}|².
pub fn q_marginal_post(c: &JointAmplitudes) -> Vec<f64> {
    (0..c.d_system())
        .map(|i| (0..c.d_probe()).map(|j| c.get(i, j).norm_sqr()).sum())
        .collect()
}

/// Q distribution read off the system reduction of a joint density operator.
///
/// This is an independent route to [`q_marginal_post`]: it goes through the
/// collapsed ensemble and a partial trace rather than through row sums of
/// |c|², and the two must agree to roundoff.
pub fn q_marginal_from_density(
    rho: &ComplexMatrix,
    d_system: usize,
    d_probe: usize,
) -> Result<Vec<f64>> {
    let reduced = crate::linalg::partial_trace_probe(rho, d_system, d_probe)?;
    Ok((0..d_system).map(|i| reduced.get(i, i).re).collect())
}

/// Draw `n` outcomes from the Born distribution with a seeded deterministic
/// generator; returns the histogram of counts per probe outcome.
pub fn sample_outcomes(c: &JointAmplitudes, n: usize, seed: u64) -> Vec<u64> {
    let dist = outcome_distribution(c);
    let mut cdf = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for &p in dist.probs() {
        acc += p;
        cdf.push(acc);
    }
    let mut histogram = vec![0u64; dist.len()];
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..n {
        let x: f64 = rng.random();
        let j = cdf
            .iter()
            .position(|&threshold| x < threshold)
            .unwrap_or(dist.len() - 1);
        histogram[j] += 1;
    }
    histogram
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!(
            (a - b).abs() <= tol,
            "{what}: {a} != {b} (diff {})",
            (a - b).abs()
        );
    }

    fn cnot_model(a: &[f64], b: &[f64]) -> MeasurementModel {
        models::cnot_readout(2)
            .unwrap()
            .with_states(
                StateVector::from_real(a).unwrap(),
                StateVector::from_real(b).unwrap(),
            )
            .unwrap()
    }

    fn swap_model_states(a: &[f64], b: &[f64]) -> MeasurementModel {
        models::swap_model(2)
            .unwrap()
            .with_states(
                StateVector::from_real(a).unwrap(),
                StateVector::from_real(b).unwrap(),
            )
            .unwrap()
    }

    #[test]
    fn identity_interaction_keeps_product_form() {
        let u = InteractionUnitary::new(ComplexMatrix::identity(6), 2, 3).unwrap();
        let a = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let b = StateVector::from_real(&[0.0, 0.6, 0.8]).unwrap();
        let model = MeasurementModel::new(
            Observable::counting(2).unwrap(),
            Observable::counting(3).unwrap(),
            u,
            a.clone(),
            b.clone(),
        )
        .unwrap();
        let c = joint_amplitudes(&model);
        for i in 0..2 {
            for j in 0..3 {
                let expected = a.amplitudes()[i] * b.amplitudes()[j];
                assert!((c.get(i, j) - expected).norm() < 1e-15);
            }
        }
        // Probe untouched: P(r_j) = |b_j|².
        let dist = outcome_distribution(&c);
        for (j, &p) in dist.probs().iter().enumerate() {
            assert_close(p, b.amplitudes()[j].norm_sqr(), 1e-14, "identity P(r_j)");
        }
    }

    #[test]
    fn cnot_joint_amplitudes() {
        let model = cnot_model(&[0.6, 0.8], &[1.0, 0.0]);
        let c = joint_amplitudes(&model);
        assert_close(c.get(0, 0).re, 0.6, 1e-15, "c00");
        assert_close(c.get(1, 1).re, 0.8, 1e-15, "c11");
        assert!(c.get(0, 1).norm() < 1e-15);
        assert!(c.get(1, 0).norm() < 1e-15);
    }

    #[test]
    fn swap_joint_amplitudes() {
        let model = swap_model_states(&[0.6, 0.8], &[1.0, 0.0]);
        let c = joint_amplitudes(&model);
        // SWAP exchanges the factors: the system ends in the old probe state.
        assert_close(c.get(0, 0).re, 0.6, 1e-15, "c00");
        assert_close(c.get(0, 1).re, 0.8, 1e-15, "c01");
        assert!(c.get(1, 0).norm() < 1e-15);
        assert!(c.get(1, 1).norm() < 1e-15);
    }

    #[test]
    fn cnot_outcome_distribution() {
        let model = cnot_model(&[0.6, 0.8], &[1.0, 0.0]);
        let c = joint_amplitudes(&model);
        let dist = outcome_distribution(&c);
        assert_close(dist.probs()[0], 0.36, 1e-12, "P(r_0)");
        assert_close(dist.probs()[1], 0.64, 1e-12, "P(r_1)");
        assert_close(dist.probs().iter().sum::<f64>(), 1.0, 1e-12, "sum");
    }

    #[test]
    fn uniform_amplitudes_give_uniform_outcomes() {
        let c = JointAmplitudes::new(ComplexMatrix::from_fn(2, 2, |_, _| {
            Complex64::new(0.5, 0.0)
        }))
        .unwrap();
        let dist = outcome_distribution(&c);
        assert_close(dist.probs()[0], 0.5, 1e-14, "uniform");
        assert_close(dist.probs()[1], 0.5, 1e-14, "uniform");
    }

    #[test]
    fn cnot_collapse_branches() {
        let model = cnot_model(&[0.6, 0.8], &[1.0, 0.0]);
        let c = joint_amplitudes(&model);

        let (state, p) = collapse(&c, 0).unwrap();
        assert_close(p, 0.36, 1e-12, "branch 0 probability");
        // |q_0⟩|r_0⟩ lives at flat index 0.
        assert_close(state.amplitudes()[0].norm(), 1.0, 1e-12, "branch 0 state");

        let (state, p) = collapse(&c, 1).unwrap();
        assert_close(p, 0.64, 1e-12, "branch 1 probability");
        assert_close(state.amplitudes()[3].norm(), 1.0, 1e-12, "branch 1 state");
    }

    #[test]
    fn identity_collapse_leaves_system_untouched() {
        let u = InteractionUnitary::new(ComplexMatrix::identity(4), 2, 2).unwrap();
        let a = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let b = StateVector::from_real(&[0.28, 0.96]).unwrap();
        let model = MeasurementModel::new(
            Observable::counting(2).unwrap(),
            Observable::counting(2).unwrap(),
            u,
            a.clone(),
            b,
        )
        .unwrap();
        let c = joint_amplitudes(&model);
        let (state, _) = collapse(&c, 1).unwrap();
        // Collapsed joint state is |ψ_S⟩|r_1⟩.
        for i in 0..2 {
            let got = state.amplitudes()[i * 2 + 1];
            assert!((got - a.amplitudes()[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn impossible_outcome_is_an_error() {
        // Identity interaction with b = e_0: outcome 1 never fires.
        let u = InteractionUnitary::new(ComplexMatrix::identity(4), 2, 2).unwrap();
        let a = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let b = StateVector::basis(2, 0);
        let model = MeasurementModel::new(
            Observable::counting(2).unwrap(),
            Observable::counting(2).unwrap(),
            u,
            a,
            b,
        )
        .unwrap();
        let c = joint_amplitudes(&model);
        assert!(matches!(
            collapse(&c, 1),
            Err(Error::ImpossibleOutcome { .. })
        ));
        assert!(matches!(
            collapse(&c, 5),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn post_ensemble_cnot() {
        let model = cnot_model(&[0.6, 0.8], &[1.0, 0.0]);
        let c = joint_amplitudes(&model);
        let ensemble = post_ensemble(&c);
        assert_eq!(ensemble.branches().len(), 2);
        assert_close(ensemble.branches()[0].probability, 0.36, 1e-12, "P0");
        assert_close(ensemble.branches()[1].probability, 0.64, 1e-12, "P1");
        assert_close(ensemble.density().trace().re, 1.0, 1e-10, "trace ρ''");

        // ρ'' is Hermitian and PSD.
        let (herm, _) = crate::linalg::is_hermitian(ensemble.density(), 1e-10).unwrap();
        assert!(herm);
        let (eigs, _) = crate::linalg::hermitian_eigen(ensemble.density()).unwrap();
        assert!(eigs.iter().all(|&l| l >= -1e-10), "ρ'' eigenvalues {eigs:?}");
    }

    #[test]
    fn marginals_cnot_and_swap() {
        let a = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let pre = q_marginal_pre(&a);
        assert_close(pre[0], 0.36, 1e-15, "pre 0");
        assert_close(pre[1], 0.64, 1e-15, "pre 1");

        let model = cnot_model(&[0.6, 0.8], &[1.0, 0.0]);
        let c = joint_amplitudes(&model);
        let post = q_marginal_post(&c);
        assert_close(post[0], 0.36, 1e-12, "cnot post 0");
        assert_close(post[1], 0.64, 1e-12, "cnot post 1");

        let model = swap_model_states(&[0.6, 0.8], &[1.0, 0.0]);
        let c = joint_amplitudes(&model);
        let post = q_marginal_post(&c);
        assert_close(post[0], 1.0, 1e-12, "swap post 0");
        assert_close(post[1], 0.0, 1e-12, "swap post 1");
    }

    #[test]
    fn marginal_from_density_matches_row_sums() {
        let model = cnot_model(&[0.6, 0.8], &[0.9486832980505138, 0.31622776601683794]);
        let c = joint_amplitudes(&model);
        let ensemble = post_ensemble(&c);
        let via_density = q_marginal_from_density(ensemble.density(), 2, 2).unwrap();
        let via_rows = q_marginal_post(&c);
        for (x, y) in via_density.iter().zip(&via_rows) {
            assert_close(*x, *y, 1e-12, "marginal cross-check");
        }
    }

    #[test]
    fn sampling_is_deterministic_and_consistent() {
        let model = cnot_model(&[0.6, 0.8], &[1.0, 0.0]);
        let c = joint_amplitudes(&model);
        let n = 100_000;
        let h1 = sample_outcomes(&c, n, 42);
        let h2 = sample_outcomes(&c, n, 42);
        assert_eq!(h1, h2, "identical seed, identical histogram");

        let freq = h1[0] as f64 / n as f64;
        let sigma = (0.36 * 0.64 / n as f64).sqrt();
        assert!(
            (freq - 0.36).abs() <= 3.0 * sigma,
            "frequency {freq} outside 3σ of 0.36"
        );
    }

    #[test]
    fn deterministic_outcome_sampling() {
        let c = JointAmplitudes::new(ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == 0 && j == 1 {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        }))
        .unwrap();
        let h = sample_outcomes(&c, 1000, 7);
        assert_eq!(h, vec![0, 1000]);
    }

    #[test]
    fn degenerate_eigenvalues_are_flagged() {
        let obs = Observable::new(vec![0.0, 1.0, 1.0]).unwrap();
        assert!(obs.has_degenerate_values(1e-12));
        let obs = Observable::counting(4).unwrap();
        assert!(!obs.has_degenerate_values(1e-12));
    }
}
