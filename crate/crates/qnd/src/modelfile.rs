//! On-disk model description: a JSON document naming the observables, the
//! pre-measurement states, the interaction (explicit matrix, Hamiltonian
//! generator, or builtin by name), the estimator, and the acceptance budgets.
//!
//! Complex numbers serialize as two-element `[re, im]` arrays; matrices are
//! row-major; the joint index is system-major. States are auto-normalized at
//! load when within 1e-6 of unit norm and rejected otherwise, so decimal
//! truncation is tolerated but genuinely wrong inputs are not.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimation::Estimator;
use crate::linalg::{ComplexMatrix, StateVector};
use crate::measure::{InteractionUnitary, MeasurementModel, Observable};
use crate::models;

/// Tolerated distance from unit norm before normalize-at-load rejects a state.
pub const STATE_NORM_SLACK: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("{path}: {message}")]
    Field { path: String, message: String },

    #[error("malformed model file: {0}")]
    Syntax(#[from] serde_json::Error),

    #[error("cannot read model file: {0}")]
    Io(#[from] std::io::Error),
}

fn field_err<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T, ModelFileError> {
    Err(ModelFileError::Field {
        path: path.into(),
        message: message.into(),
    })
}

/// A complex entry on disk: `[re, im]`.
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSpec {
    pub dim: usize,
    pub q_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    /// Row-major Hermitian generator on the joint space, `[re, im]` entries.
    pub matrix: Vec<ComplexPair>,
    /// Evolution time; the interaction is exp(−i H t) with ħ = 1.
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuiltinSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    Matrix,
    Hamiltonian,
    Builtin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionSpec {
    pub kind: InteractionKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrix: Option<Vec<ComplexPair>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hamiltonian: Option<HamiltonianSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub builtin: Option<BuiltinSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    ConditionalMean,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Vec<f64>>,
}

impl Default for EstimatorSpec {
    fn default() -> Self {
        Self {
            kind: EstimatorKind::ConditionalMean,
            table: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    /// Maximum allowable estimation error ε (the budget is δQ_err² ≤ ε²).
    pub epsilon: f64,
    /// Minimum allowable information in nats.
    pub i_min: f64,
}

/// The raw on-disk document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub system: Option<ObservableSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub probe: Option<ObservableSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub system_state: Option<Vec<ComplexPair>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub probe_state: Option<Vec<ComplexPair>>,
    pub interaction: InteractionSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimator: Option<EstimatorSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budgets: Option<Budgets>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    /// Optional free-evolution Hamiltonian of the system, row-major on the
    /// system space; used for the conservation check and classification.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub system_hamiltonian: Option<Vec<ComplexPair>>,
}

/// A fully validated model plus everything the commands need.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub model: MeasurementModel,
    pub estimator: EstimatorSpec,
    pub budgets: Option<Budgets>,
    pub tolerance: f64,
    pub system_hamiltonian: Option<ComplexMatrix>,
    /// The generator and time when the interaction came from a Hamiltonian,
    /// for the commutator-based checks.
    pub interaction_hamiltonian: Option<(ComplexMatrix, f64)>,
}

impl LoadedModel {
    /// Resolve the estimator spec against the model's joint amplitudes.
    pub fn build_estimator(
        &self,
        c: &crate::measure::JointAmplitudes,
    ) -> Result<Estimator, ModelFileError> {
        match self.estimator.kind {
            EstimatorKind::ConditionalMean => Ok(crate::estimation::conditional_mean_estimator(
                c,
                self.model.system().values(),
            )),
            EstimatorKind::Table => {
                let table = self.estimator.table.clone().ok_or(ModelFileError::Field {
                    path: "estimator.table".into(),
                    message: "estimator kind 'table' requires a table".into(),
                })?;
                if table.len() != self.model.probe().dim() {
                    return field_err(
                        "estimator.table",
                        format!(
                            "table length {} does not match probe dimension {}",
                            table.len(),
                            self.model.probe().dim()
                        ),
                    );
                }
                Estimator::new(table).map_err(|e| ModelFileError::Field {
                    path: "estimator.table".into(),
                    message: e.to_string(),
                })
            }
        }
    }
}

impl ModelFile {
    pub fn from_json_str(text: &str) -> Result<Self, ModelFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ModelFileError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files serialize")
    }

    /// Validate everything and build the measurement model.
    pub fn build(&self) -> Result<LoadedModel, ModelFileError> {
        self.check_single_interaction_kind()?;
        let tolerance = self.tolerance.unwrap_or(crate::linalg::DEFAULT_TOL);
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return field_err("tolerance", "must be a non-negative finite number");
        }

        let mut interaction_hamiltonian = None;
        let model = match self.interaction.kind {
            InteractionKind::Builtin => {
                let spec = self.interaction.builtin.as_ref().expect("checked above");
                let params = convert_params(&spec.params)?;
                let base = models::build_builtin(&spec.name, &params).map_err(|e| {
                    ModelFileError::Field {
                        path: "interaction.builtin".into(),
                        message: e.to_string(),
                    }
                })?;
                self.apply_overrides(base)?
            }
            InteractionKind::Matrix => {
                let entries = self.interaction.matrix.as_ref().expect("checked above");
                let (system, probe) = self.require_observables()?;
                let joint = system.dim() * probe.dim();
                let matrix = parse_matrix(entries, joint, "interaction.matrix")?;
                let u = InteractionUnitary::new(matrix, system.dim(), probe.dim()).map_err(
                    |e| ModelFileError::Field {
                        path: "interaction.matrix".into(),
                        message: e.to_string(),
                    },
                )?;
                self.assemble(system, probe, u)?
            }
            InteractionKind::Hamiltonian => {
                let spec = self.interaction.hamiltonian.as_ref().expect("checked above");
                let (system, probe) = self.require_observables()?;
                let joint = system.dim() * probe.dim();
                let h = parse_matrix(&spec.matrix, joint, "interaction.hamiltonian.matrix")?;
                let u_matrix = crate::linalg::hermitian_expm(&h, spec.time).map_err(|e| {
                    ModelFileError::Field {
                        path: "interaction.hamiltonian.matrix".into(),
                        message: e.to_string(),
                    }
                })?;
                interaction_hamiltonian = Some((h, spec.time));
                let u = InteractionUnitary::new(u_matrix, system.dim(), probe.dim()).map_err(
                    |e| ModelFileError::Field {
                        path: "interaction.hamiltonian".into(),
                        message: e.to_string(),
                    },
                )?;
                self.assemble(system, probe, u)?
            }
        };

        let system_hamiltonian = match &self.system_hamiltonian {
            Some(entries) => Some(parse_matrix(
                entries,
                model.system().dim(),
                "system_hamiltonian",
            )?),
            None => None,
        };

        if let Some(spec) = &self.estimator {
            if spec.kind == EstimatorKind::Table {
                match &spec.table {
                    None => {
                        return field_err(
                            "estimator.table",
                            "estimator kind 'table' requires a table",
                        )
                    }
                    Some(t) if t.len() != model.probe().dim() => {
                        return field_err(
                            "estimator.table",
                            format!(
                                "table length {} does not match probe dimension {}",
                                t.len(),
                                model.probe().dim()
                            ),
                        )
                    }
                    Some(_) => {}
                }
            }
        }

        Ok(LoadedModel {
            model,
            estimator: self.estimator.clone().unwrap_or_default(),
            budgets: self.budgets,
            tolerance,
            system_hamiltonian,
            interaction_hamiltonian,
        })
    }

    fn check_single_interaction_kind(&self) -> Result<(), ModelFileError> {
        let spec = &self.interaction;
        let populated = [
            ("matrix", spec.matrix.is_some()),
            ("hamiltonian", spec.hamiltonian.is_some()),
            ("builtin", spec.builtin.is_some()),
        ];
        let expected = match spec.kind {
            InteractionKind::Matrix => "matrix",
            InteractionKind::Hamiltonian => "hamiltonian",
            InteractionKind::Builtin => "builtin",
        };
        for (name, present) in populated {
            if name == expected && !present {
                return field_err(
                    format!("interaction.{name}"),
                    format!("interaction kind '{expected}' requires the '{name}' field"),
                );
            }
            if name != expected && present {
                return field_err(
                    format!("interaction.{name}"),
                    format!("interaction kind is '{expected}', so '{name}' must be absent"),
                );
            }
        }
        Ok(())
    }

    fn require_observables(&self) -> Result<(Observable, Observable), ModelFileError> {
        let system = self
            .system
            .as_ref()
            .map(|s| parse_observable(s, "system"))
            .transpose()?
            .ok_or(ModelFileError::Field {
                path: "system".into(),
                message: "required for explicit interactions".into(),
            })?;
        let probe = self
            .probe
            .as_ref()
            .map(|s| parse_observable(s, "probe"))
            .transpose()?
            .ok_or(ModelFileError::Field {
                path: "probe".into(),
                message: "required for explicit interactions".into(),
            })?;
        Ok((system, probe))
    }

    fn assemble(
        &self,
        system: Observable,
        probe: Observable,
        u: InteractionUnitary,
    ) -> Result<MeasurementModel, ModelFileError> {
        let a = match &self.system_state {
            Some(pairs) => parse_state(pairs, system.dim(), "system_state")?,
            None => {
                return field_err("system_state", "required for explicit interactions");
            }
        };
        let b = match &self.probe_state {
            Some(pairs) => parse_state(pairs, probe.dim(), "probe_state")?,
            None => {
                return field_err("probe_state", "required for explicit interactions");
            }
        };
        MeasurementModel::new(system, probe, u, a, b).map_err(|e| ModelFileError::Field {
            path: "interaction".into(),
            message: e.to_string(),
        })
    }

    /// For builtin interactions the file may override the default observables
    /// and states; anything omitted keeps the builder's defaults.
    fn apply_overrides(
        &self,
        base: MeasurementModel,
    ) -> Result<MeasurementModel, ModelFileError> {
        let system = match &self.system {
            Some(spec) => {
                let obs = parse_observable(spec, "system")?;
                if obs.dim() != base.system().dim() {
                    return field_err(
                        "system.dim",
                        format!(
                            "builtin model has system dimension {}, file says {}",
                            base.system().dim(),
                            obs.dim()
                        ),
                    );
                }
                obs
            }
            None => base.system().clone(),
        };
        let probe = match &self.probe {
            Some(spec) => {
                let obs = parse_observable(spec, "probe")?;
                if obs.dim() != base.probe().dim() {
                    return field_err(
                        "probe.dim",
                        format!(
                            "builtin model has probe dimension {}, file says {}",
                            base.probe().dim(),
                            obs.dim()
                        ),
                    );
                }
                obs
            }
            None => base.probe().clone(),
        };
        let a = match &self.system_state {
            Some(pairs) => parse_state(pairs, system.dim(), "system_state")?,
            None => base.system_state().clone(),
        };
        let b = match &self.probe_state {
            Some(pairs) => parse_state(pairs, probe.dim(), "probe_state")?,
            None => base.probe_state().clone(),
        };
        MeasurementModel::new(system, probe, base.interaction().clone(), a, b).map_err(|e| {
            ModelFileError::Field {
                path: "interaction.builtin".into(),
                message: e.to_string(),
            }
        })
    }
}

fn parse_observable(spec: &ObservableSpec, path: &str) -> Result<Observable, ModelFileError> {
    if spec.q_values.len() != spec.dim {
        return field_err(
            format!("{path}.q_values"),
            format!(
                "expected {} eigenvalues, found {}",
                spec.dim,
                spec.q_values.len()
            ),
        );
    }
    Observable::new(spec.q_values.clone()).map_err(|e| ModelFileError::Field {
        path: path.into(),
        message: e.to_string(),
    })
}

fn parse_state(
    pairs: &[ComplexPair],
    dim: usize,
    path: &str,
) -> Result<StateVector, ModelFileError> {
    if pairs.len() != dim {
        return field_err(
            path,
            format!("expected {dim} amplitudes, found {}", pairs.len()),
        );
    }
    let amplitudes: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > STATE_NORM_SLACK {
        return field_err(
            path,
            format!("state norm {norm} is not within {STATE_NORM_SLACK} of 1"),
        );
    }
    StateVector::new(amplitudes).map_err(|e| ModelFileError::Field {
        path: path.into(),
        message: e.to_string(),
    })
}

fn parse_matrix(
    entries: &[ComplexPair],
    dim: usize,
    path: &str,
) -> Result<ComplexMatrix, ModelFileError> {
    if entries.len() != dim * dim {
        return field_err(
            path,
            format!(
                "expected {} row-major entries for a {dim}x{dim} matrix, found {}",
                dim * dim,
                entries.len()
            ),
        );
    }
    let data: Vec<Complex64> = entries.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    ComplexMatrix::new(dim, dim, data).map_err(|e| ModelFileError::Field {
        path: path.into(),
        message: e.to_string(),
    })
}

fn convert_params(
    params: &BTreeMap<String, serde_json::Value>,
) -> Result<BTreeMap<String, f64>, ModelFileError> {
    let mut out = BTreeMap::new();
    for (key, value) in params {
        let v = match value {
            serde_json::Value::Number(n) => n.as_f64(),
            serde_json::Value::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
            _ => None,
        };
        match v {
            Some(v) => {
                out.insert(key.clone(), v);
            }
            None => {
                return field_err(
                    format!("interaction.builtin.params.{key}"),
                    "parameters must be numbers or booleans",
                )
            }
        }
    }
    Ok(out)
}

/// Serialize a state for reports: amplitudes as `[re, im]` pairs.
pub fn state_to_pairs(state: &StateVector) -> Vec<ComplexPair> {
    state.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}
