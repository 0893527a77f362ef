use rand::Rng;

use crate::model::{Instance, Solution};
use crate::privacy::{perturb_counts, PrivacyParams};
use crate::solvers::noisy_capacities;
use crate::solvers::optimal::{marked_set, optimal_assignment};

/// The straightforward ε-LDP algorithm.
///
/// Locations perturb their counts with Laplace(1/ε) noise; the server keeps
/// the optimal (noise-independent) assignment and opens every marked
/// location with capacity `max(0, N'_v + (2/ε)·√|L'_v|·ln(2n/α))`.
pub fn solve_ldp_margin<R: Rng + ?Sized>(
    inst: &Instance,
    params: &PrivacyParams,
    rng: &mut R,
) -> Solution {
    let noisy = perturb_counts(inst.clients(), params, rng);
    let assignment = optimal_assignment(inst);
    let open = marked_set(&assignment);
    noisy_capacities(inst, assignment, &open, noisy, params)
}
