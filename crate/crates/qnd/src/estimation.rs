//! Estimating Q from the observed read-out value: estimator tables, bias,
//! squared error against an error budget, and the information obtained by
//! the measurement.
//!
//! Expectation values are taken in the post-measurement ensemble, i.e. over
//! the joint distribution p_{ij} = |c_{ij}|² of the Q index and the observed
//! R index. Information is the classical mutual information of that joint
//! distribution, reported in nats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{outcome_distribution, JointAmplitudes, BRANCH_THRESHOLD};

/// Joint probabilities below this threshold contribute nothing to the
/// information sum.
const INFO_THRESHOLD: f64 = 1e-15;

/// A read-out map q_est = f(r): one estimated Q value per probe outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimator {
    table: Vec<f64>,
}

impl Estimator {
    pub fn new(table: Vec<f64>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "estimator table",
                expected: 1,
                found: 0,
            });
        }
        if !table.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                context: "estimator table",
            });
        }
        Ok(Self { table })
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

fn joint_probs(c: &JointAmplitudes) -> Vec<Vec<f64>> {
    (0..c.d_system())
        .map(|i| (0..c.d_probe()).map(|j| c.get(i, j).norm_sqr()).collect())
        .collect()
}

/// The conditional-mean estimator f(r_j) = Σ_i |c_{ij}|² q_i / P(r_j).
///
/// Unbiased by construction and minimizes the squared error among all
/// estimator tables. Outcomes with negligible probability get f = 0 by
/// convention; they never enter the error sums.
pub fn conditional_mean_estimator(c: &JointAmplitudes, q_values: &[f64]) -> Estimator {
    assert_eq!(q_values.len(), c.d_system(), "q_values length");
    let dist = outcome_distribution(c);
    let table = (0..c.d_probe())
        .map(|j| {
            let p = dist.probs()[j];
            if p <= BRANCH_THRESHOLD {
                return 0.0;
            }
            let weighted: f64 = (0..c.d_system())
                .map(|i| c.get(i, j).norm_sqr() * q_values[i])
                .sum();
            weighted / p
        })
        .collect();
    Estimator { table }
}

/// Unbiasedness residual Σ_{ij} |c_{ij}|² (q_i − f(r_j)); zero for a good
/// estimator.
pub fn bias(c: &JointAmplitudes, q_values: &[f64], f: &Estimator) -> f64 {
    assert_eq!(q_values.len(), c.d_system(), "q_values length");
    assert_eq!(f.len(), c.d_probe(), "estimator table length");
    let p = joint_probs(c);
    let mut sum = 0.0;
    for (i, row) in p.iter().enumerate() {
        for (j, &pij) in row.iter().enumerate() {
            sum += pij * (q_values[i] - f.table[j]);
        }
    }
    sum
}

/// Mean squared estimation error δQ_err² = Σ_{ij} |c_{ij}|² (q_i − f(r_j))².
pub fn squared_error(c: &JointAmplitudes, q_values: &[f64], f: &Estimator) -> f64 {
    assert_eq!(q_values.len(), c.d_system(), "q_values length");
    assert_eq!(f.len(), c.d_probe(), "estimator table length");
    let p = joint_probs(c);
    let mut sum = 0.0;
    for (i, row) in p.iter().enumerate() {
        for (j, &pij) in row.iter().enumerate() {
            let d = q_values[i] - f.table[j];
            sum += pij * d * d;
        }
    }
    sum
}

/// Mutual information (nats) between the Q index and the observed R index
/// under the joint distribution p_{ij} = |c_{ij}|².
pub fn mutual_information(c: &JointAmplitudes) -> f64 {
    let p = joint_probs(c);
    let rows: Vec<f64> = p.iter().map(|row| row.iter().sum()).collect();
    let cols: Vec<f64> = (0..c.d_probe())
        .map(|j| p.iter().map(|row| row[j]).sum())
        .collect();
    let mut info = 0.0;
    for (i, row) in p.iter().enumerate() {
        for (j, &pij) in row.iter().enumerate() {
            if pij <= INFO_THRESHOLD {
                continue;
            }
            info += pij * (pij / (rows[i] * cols[j])).ln();
        }
    }
    info.max(0.0)
}

/// Shannon entropy (nats) of a probability vector; used for information
/// bounds in tests and reports.
pub fn entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > INFO_THRESHOLD)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Order-of-magnitude information of a saturating counter with response
/// range n ≤ n_max and resolution δn_err: I ≈ ln(n_max / δn_err) nats.
///
/// For n_max = 10⁶ and δn_err = 10² this gives ln(10⁴) ≈ 9.2103 nats
/// (≈ 13.29 bits); no standard logarithm base lands this pair on 12.
pub fn counter_information_heuristic(n_max: u64, delta_n_err: u64) -> Result<f64> {
    if delta_n_err < 1 || n_max < delta_n_err {
        return Err(Error::Domain(format!(
            "counter heuristic requires n_max >= delta_n_err >= 1, got n_max = {n_max}, \
             delta_n_err = {delta_n_err}"
        )));
    }
    Ok((n_max as f64 / delta_n_err as f64).ln())
}

/// Convert nats to bits for display.
pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

/// Estimator audit against the error and information budgets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    /// The estimator table that was audited.
    pub estimator: Vec<f64>,
    /// Unbiasedness residual.
    pub bias: f64,
    /// δQ_err².
    pub squared_error: f64,
    /// Maximum allowable error ε; the budget is δQ_err² ≤ ε².
    pub epsilon: f64,
    /// Mutual information obtained, in nats.
    pub info_nats: f64,
    /// Minimum allowable information.
    pub i_min: f64,
    pub error_within_budget: bool,
    pub info_sufficient: bool,
}

impl EstimationReport {
    pub fn passes(&self) -> bool {
        self.error_within_budget && self.info_sufficient
    }
}

/// Assemble bias, squared error, information, and the two budget verdicts.
pub fn evaluate_estimation_report(
    c: &JointAmplitudes,
    q_values: &[f64],
    f: &Estimator,
    epsilon: f64,
    i_min: f64,
) -> EstimationReport {
    let bias = bias(c, q_values, f);
    let squared_error = squared_error(c, q_values, f);
    let info_nats = mutual_information(c);
    debug_assert!(squared_error + 1e-12 >= bias * bias, "variance decomposition");
    EstimationReport {
        estimator: f.table.clone(),
        bias,
        squared_error,
        epsilon,
        info_nats,
        i_min,
        error_within_budget: squared_error <= epsilon * epsilon,
        info_sufficient: info_nats >= i_min,
    }
}
