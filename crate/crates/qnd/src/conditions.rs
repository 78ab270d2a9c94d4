//! Certification of the non-demolition condition hierarchy.
//!
//! Three conditions of increasing strength guarantee that the distribution of
//! Q is invariant under the measurement:
//!
//! * **weak** — Σ_j |c_{ij}|² = |a_i|² for the given measured and probe
//!   states; holds possibly only on a limited set of measured states (the
//!   response range of the apparatus).
//! * **moderate** — a condition on the interaction tensor contracted with the
//!   probe state alone; independent of the measured state.
//! * **strong** — u_{ij}^{kℓ} = 0 whenever i ≠ k: the evolution never moves
//!   amplitude between Q eigenspaces; independent of both states.
//!
//! Strong implies moderate implies weak. Two commutator conservation laws and
//! the state-wise commutator condition are checked alongside.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{commutator, ComplexMatrix, StateVector};
use crate::measure::{
    joint_amplitude_matrix, q_marginal_post, q_marginal_pre, InteractionUnitary, JointAmplitudes,
    MeasurementModel,
};

/// Which condition a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Weak,
    Moderate,
    Strong,
    Vaidman,
    ConserveSystem,
    ConserveInteraction,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Condition::Weak => "weak",
            Condition::Moderate => "moderate",
            Condition::Strong => "strong",
            Condition::Vaidman => "vaidman",
            Condition::ConserveSystem => "conserve_system",
            Condition::ConserveInteraction => "conserve_interaction",
        };
        f.write_str(name)
    }
}

/// Result of one condition check: the max-norm residual, the tolerance it was
/// judged against, and the index tuple at which the residual peaks.
///
/// Witness layout per condition: weak `[i]`; moderate `[k, k', i]`; strong
/// `[i, j, k, ℓ]`; conservation laws `[row, col]` of the commutator; vaidman
/// `[i, j]` of the largest residual component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub violation: f64,
    pub tolerance: f64,
    pub verdict: bool,
    pub witness: Vec<usize>,
}

impl ConditionReport {
    fn new(condition: Condition, violation: f64, tolerance: f64, witness: Vec<usize>) -> Self {
        Self {
            condition,
            violation,
            tolerance,
            verdict: violation <= tolerance,
            witness,
        }
    }
}

/// Weak-condition residual for explicit states, without report plumbing.
/// This is the objective the state searches sweep.
pub fn weak_violation_value(u: &InteractionUnitary, a: &StateVector, b: &StateVector) -> f64 {
    let c = joint_amplitude_matrix(u, a, b);
    let pre = q_marginal_pre(a);
    (0..u.d_system())
        .map(|i| {
            let post: f64 = (0..u.d_probe()).map(|j| c.get(i, j).norm_sqr()).sum();
            (post - pre[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// Weak condition (distribution of Q invariant for these particular states):
/// violation = max_i |Σ_j |c_{ij}|² − |a_i|²|.
pub fn weak_violation(model: &MeasurementModel, tol: f64) -> ConditionReport {
    let c = crate::measure::joint_amplitudes(model);
    weak_violation_from_amplitudes(&c, model.system_state(), tol)
}

/// Weak condition evaluated on precomputed joint amplitudes.
pub fn weak_violation_from_amplitudes(
    c: &JointAmplitudes,
    a: &StateVector,
    tol: f64,
) -> ConditionReport {
    let pre = q_marginal_pre(a);
    let post = q_marginal_post(c);
    let mut worst = 0.0;
    let mut witness = 0;
    for (i, (p, q)) in post.iter().zip(&pre).enumerate() {
        let r = (p - q).abs();
        if r > worst {
            worst = r;
            witness = i;
        }
    }
    ConditionReport::new(Condition::Weak, worst, tol, vec![witness])
}

/// Moderate-condition residual without report plumbing.
pub fn moderate_violation_value(u: &InteractionUnitary, b: &StateVector) -> f64 {
    moderate_scan(u, b).0
}

fn moderate_scan(u: &InteractionUnitary, b: &StateVector) -> (f64, Vec<usize>) {
    let d_s = u.d_system();
    let d_p = u.d_probe();
    // w^k = U (e_k ⊗ b), reshaped to (i, j).
    let w: Vec<ComplexMatrix> = (0..d_s)
        .map(|k| joint_amplitude_matrix(u, &StateVector::basis(d_s, k), b))
        .collect();
    let mut worst = 0.0;
    let mut witness = vec![0, 0, 0];
    for k in 0..d_s {
        for k2 in 0..d_s {
            for i in 0..d_s {
                let mut lhs = num_complex::Complex64::ZERO;
                for j in 0..d_p {
                    lhs += w[k].get(i, j).conj() * w[k2].get(i, j);
                }
                let rhs = if k == i && k2 == i { 1.0 } else { 0.0 };
                let r = (lhs - rhs).norm();
                if r > worst {
                    worst = r;
                    witness = vec![k, k2, i];
                }
            }
        }
    }
    (worst, witness)
}

/// Moderate condition (measured-state independent, probe-state dependent):
/// violation = max over (k, k', i) of
/// |Σ_j (Σ_ℓ u_{ij}^{kℓ} b_ℓ)* (Σ_{ℓ'} u_{ij}^{k'ℓ'} b_{ℓ'}) − δ_{ki} δ_{k'i}|.
pub fn moderate_violation(
    u: &InteractionUnitary,
    b: &StateVector,
    tol: f64,
) -> Result<ConditionReport> {
    if b.dim() != u.d_probe() {
        return Err(Error::DimensionMismatch {
            context: "moderate condition probe state",
            expected: u.d_probe(),
            found: b.dim(),
        });
    }
    let (violation, witness) = moderate_scan(u, b);
    Ok(ConditionReport::new(
        Condition::Moderate,
        violation,
        tol,
        witness,
    ))
}

/// Strong condition (state independent): violation = max |u_{ij}^{kℓ}| over
/// entries with i ≠ k.
pub fn strong_violation(u: &InteractionUnitary, tol: f64) -> ConditionReport {
    let d_s = u.d_system();
    let d_p = u.d_probe();
    let mut worst = 0.0;
    let mut witness = vec![0, 0, 0, 0];
    for i in 0..d_s {
        for j in 0..d_p {
            for k in 0..d_s {
                if i == k {
                    continue;
                }
                for l in 0..d_p {
                    let r = u.coeff(i, j, k, l).norm();
                    if r > worst {
                        worst = r;
                        witness = vec![i, j, k, l];
                    }
                }
            }
        }
    }
    ConditionReport::new(Condition::Strong, worst, tol, witness)
}

/// Conservation law on the isolated system: violation = max-entry |[Q, H_S]|.
pub fn conserve_system(
    q: &ComplexMatrix,
    h_system: &ComplexMatrix,
    tol: f64,
) -> Result<ConditionReport> {
    let comm = commutator(q, h_system)?;
    let (row, col) = comm.argmax_abs_entry();
    Ok(ConditionReport::new(
        Condition::ConserveSystem,
        comm.max_abs_entry(),
        tol,
        vec![row, col],
    ))
}

/// Conservation law during the interaction: violation = max-entry
/// |[Q ⊗ I, H_I]| with Q promoted to the joint space.
pub fn conserve_interaction(
    q: &ComplexMatrix,
    h_interaction: &ComplexMatrix,
    tol: f64,
) -> Result<ConditionReport> {
    if !q.is_square() {
        return Err(Error::NotSquare {
            context: "conserve_interaction Q",
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    if !h_interaction.is_square() || !h_interaction.rows().is_multiple_of(q.rows()) {
        return Err(Error::DimensionMismatch {
            context: "conserve_interaction H_I",
            expected: q.rows(),
            found: h_interaction.rows(),
        });
    }
    let d_probe = h_interaction.rows() / q.rows();
    let promoted = q.kron(&ComplexMatrix::identity(d_probe));
    let comm = commutator(&promoted, h_interaction)?;
    let (row, col) = comm.argmax_abs_entry();
    Ok(ConditionReport::new(
        Condition::ConserveInteraction,
        comm.max_abs_entry(),
        tol,
        vec![row, col],
    ))
}

/// State-wise commutator condition: violation = ‖[Q ⊗ I, H_I] (a ⊗ b)‖₂.
///
/// The commutator acts on the joint space, so the condition is evaluated on
/// the explicit joint product state a ⊗ b; it depends on both states, and is
/// neither implied by nor implies the weak condition.
pub fn vaidman_violation(
    q: &ComplexMatrix,
    h_interaction: &ComplexMatrix,
    a: &StateVector,
    b: &StateVector,
    tol: f64,
) -> Result<ConditionReport> {
    if a.dim() != q.rows() {
        return Err(Error::DimensionMismatch {
            context: "vaidman system state",
            expected: q.rows(),
            found: a.dim(),
        });
    }
    if h_interaction.rows() != a.dim() * b.dim() {
        return Err(Error::DimensionMismatch {
            context: "vaidman H_I",
            expected: a.dim() * b.dim(),
            found: h_interaction.rows(),
        });
    }
    let d_probe = b.dim();
    let promoted = q.kron(&ComplexMatrix::identity(d_probe));
    let comm = commutator(&promoted, h_interaction)?;
    let residual = comm.matvec(a.tensor(b).amplitudes());
    let violation = residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut witness_flat = 0;
    let mut best = -1.0;
    for (idx, z) in residual.iter().enumerate() {
        if z.norm() > best {
            best = z.norm();
            witness_flat = idx;
        }
    }
    Ok(ConditionReport::new(
        Condition::Vaidman,
        violation,
        tol,
        vec![witness_flat / d_probe, witness_flat % d_probe],
    ))
}

/// Strong, moderate, and weak reports for one model, with the implication
/// chain checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicationReport {
    pub strong: ConditionReport,
    pub moderate: ConditionReport,
    pub weak: ConditionReport,
    /// True when every condition that passes is matched by all weaker ones
    /// passing at the same tolerance.
    pub chain_consistent: bool,
}

impl ImplicationReport {
    pub fn reports(&self) -> [&ConditionReport; 3] {
        [&self.strong, &self.moderate, &self.weak]
    }
}

/// Evaluate strong, moderate (with the model's probe state), and weak (with
/// the model's states) in order and verify the implication chain.
///
/// A passing stronger condition forces the weaker one mathematically, so a
/// weaker violation more than an order of magnitude above the tolerance while
/// the stronger condition passes indicates a bug, and is reported as an
/// error rather than a verdict.
pub fn implication_report(model: &MeasurementModel, tol: f64) -> Result<ImplicationReport> {
    let strong = strong_violation(model.interaction(), tol);
    let moderate = moderate_violation(model.interaction(), model.probe_state(), tol)?;
    let weak = weak_violation(model, tol);

    let slack = 10.0 * tol;
    if strong.verdict && moderate.violation > slack {
        return Err(Error::ImplicationBroken {
            stronger: "strong",
            weaker: "moderate",
            violation: moderate.violation,
            tolerance: tol,
        });
    }
    if moderate.verdict && weak.violation > slack {
        return Err(Error::ImplicationBroken {
            stronger: "moderate",
            weaker: "weak",
            violation: weak.violation,
            tolerance: tol,
        });
    }
    let chain_consistent =
        (!strong.verdict || moderate.verdict) && (!moderate.verdict || weak.verdict);
    Ok(ImplicationReport {
        strong,
        moderate,
        weak,
        chain_consistent,
    })
}

/// Classification of a measurement scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasurementClass {
    /// The Q distribution is not invariant: not even a first-kind measurement.
    #[serde(rename = "not-FK")]
    NotFirstKind,
    /// First kind, but Q is not conserved by the free system evolution, so a
    /// later repetition can disagree.
    #[serde(rename = "FK-only")]
    FirstKindOnly,
    /// First kind and Q is a constant of motion: non-demolition.
    #[serde(rename = "QND")]
    Qnd,
}

impl std::fmt::Display for MeasurementClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            MeasurementClass::NotFirstKind => "not-FK",
            MeasurementClass::FirstKindOnly => "FK-only",
            MeasurementClass::Qnd => "QND",
        };
        f.write_str(name)
    }
}

/// Label a scheme from its weak-condition report and the system conservation
/// law [Q, H_S] = 0.
pub fn classify_measurement(
    weak: &ConditionReport,
    q: &ComplexMatrix,
    h_system: &ComplexMatrix,
    tol: f64,
) -> Result<MeasurementClass> {
    if !weak.verdict {
        return Ok(MeasurementClass::NotFirstKind);
    }
    let conserved = conserve_system(q, h_system, tol)?;
    Ok(if conserved.verdict {
        MeasurementClass::Qnd
    } else {
        MeasurementClass::FirstKindOnly
    })
}
