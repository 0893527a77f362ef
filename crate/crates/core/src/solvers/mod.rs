//! The non-private optimal algorithm, the two ε-LDP algorithms and an
//! exhaustive oracle for tiny instances.
//!
//! Every argmin breaks ties by the lowest location index, so all solvers are
//! deterministic given the instance and the RNG stream.

mod graph;
mod margin;
mod optimal;
mod oracle;
mod reconnection;

use std::collections::BTreeMap;

pub use graph::{build_conflict_graph, greedy_mis, ConflictGraph, IndependentSetResult};
pub use margin::solve_ldp_margin;
pub use optimal::{marked_set, optimal_assignment, optimal_assignment_with, solve_optimal};
pub use oracle::{brute_force_oracle, ORACLE_MAX_N};
pub use reconnection::{reconnect, solve_ldp_reconnection};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FacilityTrace, Instance, Solution};
use crate::privacy::{margin_unchecked, NoisyCounts, PrivacyParams};

/// Parameters of the reconnection algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveParams {
    pub privacy: PrivacyParams,
    /// Reconnection radius, in the metric's units.
    pub delta: f64,
}

impl SolveParams {
    pub fn new(privacy: PrivacyParams, delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::param(format!(
                "delta must be finite and >= 0, got {delta}"
            )));
        }
        Ok(SolveParams { privacy, delta })
    }
}

/// Which algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Optimal,
    Margin,
    Reconnection,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Optimal,
        Algorithm::Margin,
        Algorithm::Reconnection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Optimal => "optimal",
            Algorithm::Margin => "margin",
            Algorithm::Reconnection => "reconnection",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::param(format!("unknown algorithm '{s}'")))
    }
}

/// Sizes every facility in `open` from the noisy loads of its connected
/// set: `k_v = max(0, N_v + margin(|L_v|))`.
fn noisy_capacities(
    inst: &Instance,
    assignment: Vec<usize>,
    open: &[usize],
    noisy: NoisyCounts,
    params: &PrivacyParams,
) -> Solution {
    let n = inst.len();
    let mut connected: BTreeMap<usize, (usize, f64)> =
        open.iter().map(|&v| (v, (0, 0.0))).collect();
    for (u, &v) in assignment.iter().enumerate() {
        let entry = connected
            .get_mut(&v)
            .expect("assignment targets an open facility");
        entry.0 += 1;
        entry.1 += noisy.values[u];
    }
    let mut capacities = BTreeMap::new();
    let mut trace = Vec::with_capacity(connected.len());
    for (v, (size, load)) in connected {
        let margin = margin_unchecked(size, params, n);
        let raw = load + margin;
        capacities.insert(v, raw.max(0.0));
        trace.push(FacilityTrace {
            facility: v,
            connected: size,
            noisy_load: load,
            margin,
            clamped: raw < 0.0,
        });
    }
    Solution {
        assignment,
        capacities,
        trace: Some(trace),
        noisy_counts: Some(noisy),
    }
}
