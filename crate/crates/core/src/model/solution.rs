use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::privacy::NoisyCounts;

/// Per-facility record of how a private solver sized a capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacilityTrace {
    pub facility: usize,
    /// |L_v|, the number of locations connected to the facility.
    pub connected: usize,
    /// Noisy connected load N_v (sum of perturbed counts).
    pub noisy_load: f64,
    pub margin: f64,
    /// Whether `noisy_load + margin` was negative and the capacity clamped to 0.
    pub clamped: bool,
}

/// Connection function plus capacities for the open facilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// `assignment[v]` is the facility location `v` connects to.
    pub assignment: Vec<usize>,
    /// Open facilities and their capacities.
    pub capacities: BTreeMap<usize, f64>,
    /// Per-facility sizing records; present for the private solvers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<FacilityTrace>>,
    /// The perturbed counts the server received; present for the private
    /// solvers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noisy_counts: Option<NoisyCounts>,
}

impl Solution {
    pub fn open_facilities(&self) -> impl Iterator<Item = usize> + '_ {
        self.capacities.keys().copied()
    }

    /// Number of facilities whose capacity was clamped at zero.
    pub fn clamp_events(&self) -> usize {
        self.trace
            .as_ref()
            .map_or(0, |t| t.iter().filter(|f| f.clamped).count())
    }

    pub fn n_open(&self) -> usize {
        self.capacities.len()
    }

    /// Connected sets L_v for every open facility, in facility order.
    pub fn connected_sets(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut sets: BTreeMap<usize, Vec<usize>> =
            self.capacities.keys().map(|&v| (v, Vec::new())).collect();
        for (u, &v) in self.assignment.iter().enumerate() {
            sets.entry(v).or_default().push(u);
        }
        sets
    }

    /// Checks the structural invariants: every location maps to an open
    /// facility, and capacities are non-negative. Returns a description of
    /// the first violation.
    pub fn validate(&self) -> Result<(), String> {
        for (u, v) in self.assignment.iter().enumerate() {
            if !self.capacities.contains_key(v) {
                return Err(format!("location {u} assigned to closed facility {v}"));
            }
        }
        for (v, k) in &self.capacities {
            if !(*k >= 0.0) {
                return Err(format!("facility {v} has capacity {k}"));
            }
        }
        Ok(())
    }

    /// Serializes to the solution export document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialization is infallible")
    }
}
