use std::collections::BTreeMap;

use crate::exec::Exec;
use crate::model::{Instance, Solution};

/// Connects every location to `argmin_u f_u + d(u, v)`, ties to the lowest
/// index. The choice uses public data only.
pub fn optimal_assignment(inst: &Instance) -> Vec<usize> {
    optimal_assignment_with(inst, Exec::default())
}

pub fn optimal_assignment_with(inst: &Instance, exec: Exec) -> Vec<usize> {
    let f = inst.facility_costs();
    let metric = inst.metric();
    let mut h = exec.map_range(inst.len(), |v| argmin_cost(f, metric.row(v), 0..f.len()));
    settle_chains(&mut h);
    h
}

/// Lowest-index minimizer of `f_u + d_u` over `candidates`.
#[inline]
pub(crate) fn argmin_cost(
    f: &[f64],
    dist_row: &[f64],
    candidates: impl IntoIterator<Item = usize>,
) -> usize {
    let mut best = usize::MAX;
    let mut best_cost = f64::INFINITY;
    for u in candidates {
        let c = f[u] + dist_row[u];
        if c < best_cost || best == usize::MAX {
            best = u;
            best_cost = c;
        }
    }
    best
}

/// Ensures `h(h(v)) = h(v)`.
///
/// In exact arithmetic the minimizer of any location is its own minimizer,
/// so this is a no-op; rounding in distances can break that by an ulp, in
/// which case the location follows its facility's choice.
fn settle_chains(h: &mut [usize]) {
    for v in 0..h.len() {
        let mut target = h[v];
        let mut hops = 0;
        while h[target] != target && hops < h.len() {
            target = h[target];
            hops += 1;
        }
        h[v] = target;
    }
}

/// Locations that serve themselves, `{v : h(v) = v}`, ascending.
pub fn marked_set(assignment: &[usize]) -> Vec<usize> {
    assignment
        .iter()
        .enumerate()
        .filter(|&(v, &h)| v == h)
        .map(|(v, _)| v)
        .collect()
}

/// Optimal solution: the optimal assignment with every marked location
/// opened at exactly its connected demand.
pub fn solve_optimal(inst: &Instance) -> Solution {
    let assignment = optimal_assignment(inst);
    let mut load: BTreeMap<usize, u64> = marked_set(&assignment)
        .into_iter()
        .map(|v| (v, 0))
        .collect();
    for (u, &v) in assignment.iter().enumerate() {
        *load
            .get_mut(&v)
            .expect("assignment targets a marked location") += inst.clients()[u];
    }
    Solution {
        assignment,
        capacities: load.into_iter().map(|(v, k)| (v, k as f64)).collect(),
        trace: None,
        noisy_counts: None,
    }
}
