//! Numerical exploration of the state dependence of the weak and moderate
//! conditions: find measured states that break a scheme (response-range
//! mapping) or probe states that fix it (apparatus design).
//!
//! States are parameterized by their 2d real coordinates and normalized; the
//! objectives are phase invariant, so the global-phase redundancy is
//! harmless. Each restart runs a derivative-free compass search from a
//! random point on the unit sphere, with its own generator stream derived
//! from (seed, restart index), so results are deterministic regardless of
//! restart execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::conditions::{moderate_violation_value, weak_violation_value};
use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::measure::InteractionUnitary;
use crate::random::random_unit_state;

const MAX_ITERATIONS: usize = 500;
const IMPROVEMENT_TOL: f64 = 1e-10;
const MIN_STEP: f64 = 1e-8;

/// Outcome of a multi-restart state search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// The best state found (maximizer or minimizer of the violation).
    pub best_state: StateVector,
    /// The violation at `best_state`, recomputed by the checker.
    pub best_value: f64,
    pub restarts_used: usize,
    pub seed: u64,
    /// Best value reached by each restart, in restart order.
    pub trace: Vec<f64>,
}

/// Which violation the probe design search minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeTarget {
    /// Minimize the moderate-condition violation (measured-state free).
    Moderate,
    /// Minimize the weak-condition violation for a fixed measured state.
    WeakWithFixedSystem,
}

/// Maximize the weak-condition violation over measured system states for a
/// fixed interaction and probe state. Deterministic for a given seed; ties
/// across restarts go to the lowest restart index.
pub fn max_weak_violation(
    u: &InteractionUnitary,
    b: &StateVector,
    restarts: usize,
    seed: u64,
) -> Result<SearchResult> {
    if restarts < 1 {
        return Err(Error::Domain("search requires at least one restart".into()));
    }
    if b.dim() != u.d_probe() {
        return Err(Error::DimensionMismatch {
            context: "search probe state",
            expected: u.d_probe(),
            found: b.dim(),
        });
    }
    let objective = |a: &StateVector| weak_violation_value(u, a, b);
    Ok(run_restarts(u.d_system(), restarts, seed, true, objective))
}

/// Minimize the chosen violation over probe states for a fixed interaction:
/// the probe can be prepared at will, so this searches the design space of
/// the apparatus.
pub fn probe_design_search(
    u: &InteractionUnitary,
    restarts: usize,
    seed: u64,
    target: ProbeTarget,
    system_state: Option<&StateVector>,
) -> Result<SearchResult> {
    if restarts < 1 {
        return Err(Error::Domain("search requires at least one restart".into()));
    }
    match target {
        ProbeTarget::Moderate => {
            let objective = |b: &StateVector| moderate_violation_value(u, b);
            Ok(run_restarts(u.d_probe(), restarts, seed, false, objective))
        }
        ProbeTarget::WeakWithFixedSystem => {
            let a = system_state.ok_or(Error::MissingMeasuredState)?;
            if a.dim() != u.d_system() {
                return Err(Error::DimensionMismatch {
                    context: "search system state",
                    expected: u.d_system(),
                    found: a.dim(),
                });
            }
            let objective = |b: &StateVector| weak_violation_value(u, a, b);
            Ok(run_restarts(u.d_probe(), restarts, seed, false, objective))
        }
    }
}

fn run_restarts(
    dim: usize,
    restarts: usize,
    seed: u64,
    maximize: bool,
    objective: impl Fn(&StateVector) -> f64,
) -> SearchResult {
    let mut best: Option<(StateVector, f64)> = None;
    let mut trace = Vec::with_capacity(restarts);
    for restart in 0..restarts {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        let start = random_unit_state(dim, &mut rng);
        let (state, value) = compass_search(start, maximize, &objective);
        trace.push(value);
        let better = match &best {
            None => true,
            // Strict improvement only: ties keep the earlier restart.
            Some((_, incumbent)) => {
                if maximize {
                    value > *incumbent
                } else {
                    value < *incumbent
                }
            }
        };
        if better {
            best = Some((state, value));
        }
    }
    let (best_state, _) = best.expect("at least one restart");
    // Report the checker's value at the final state, not the search's copy.
    let best_value = objective(&best_state);
    SearchResult {
        best_state,
        best_value,
        restarts_used: restarts,
        seed,
        trace,
    }
}

/// Coordinate (compass) search on the 2d real coordinates with projection
/// back to the unit sphere and a shrinking step.
fn compass_search(
    start: StateVector,
    maximize: bool,
    objective: impl Fn(&StateVector) -> f64,
) -> (StateVector, f64) {
    let sign = if maximize { 1.0 } else { -1.0 };
    let score = |s: &StateVector| sign * objective(s);

    let dim = start.dim();
    let mut coords: Vec<f64> = start
        .amplitudes()
        .iter()
        .flat_map(|z| [z.re, z.im])
        .collect();
    let rebuild = |coords: &[f64]| -> Option<StateVector> {
        let amplitudes = coords
            .chunks_exact(2)
            .map(|c| num_complex::Complex64::new(c[0], c[1]))
            .collect();
        StateVector::new(amplitudes).ok()
    };

    let mut current = start;
    let mut current_score = score(&current);
    let mut step = 0.5;
    for _ in 0..MAX_ITERATIONS {
        let mut improved = false;
        for coord in 0..2 * dim {
            for direction in [1.0, -1.0] {
                let mut candidate_coords = coords.clone();
                candidate_coords[coord] += direction * step;
                let Some(candidate) = rebuild(&candidate_coords) else {
                    continue;
                };
                let candidate_score = score(&candidate);
                if candidate_score > current_score + IMPROVEMENT_TOL {
                    // Store the normalized coordinates so steps stay on scale.
                    coords = candidate
                        .amplitudes()
                        .iter()
                        .flat_map(|z| [z.re, z.im])
                        .collect();
                    current = candidate;
                    current_score = candidate_score;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < MIN_STEP {
                break;
            }
        }
    }
    (current, sign * current_score)
}
