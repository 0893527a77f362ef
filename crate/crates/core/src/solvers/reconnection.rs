use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{Instance, Solution};
use crate::privacy::perturb_counts;
use crate::solvers::graph::{build_conflict_graph, greedy_mis};
use crate::solvers::optimal::{argmin_cost, marked_set, optimal_assignment};
use crate::solvers::{noisy_capacities, SolveParams};

/// Reconnects every location to a facility in `independent`.
///
/// A location inside some `B(v, δ)` with `v` in the set goes to `v`; balls
/// are tested in the order of `independent` (the greedy pick order) and the
/// first hit wins. Uncovered locations go to `argmin_{v} f_v + d(u, v)`
/// over the set, ties to the lowest index.
pub fn reconnect(inst: &Instance, independent: &[usize], delta: f64) -> Result<Vec<usize>> {
    if independent.is_empty() {
        return Err(Error::param(
            "reconnection needs at least one open facility",
        ));
    }
    if !(delta >= 0.0) {
        return Err(Error::param(format!("delta must be >= 0, got {delta}")));
    }
    if let Some(&bad) = independent.iter().find(|&&v| v >= inst.len()) {
        return Err(Error::param(format!("facility {bad} out of range")));
    }
    let mut by_index = independent.to_vec();
    by_index.sort_unstable();
    let f = inst.facility_costs();
    let metric = inst.metric();
    Ok(Exec::default().map_range(inst.len(), |u| {
        let row = metric.row(u);
        independent
            .iter()
            .copied()
            .find(|&v| row[v] <= delta)
            .unwrap_or_else(|| argmin_cost(f, row, by_index.iter().copied()))
    }))
}

/// The ε-LDP algorithm with reconnection.
///
/// Perturbs counts exactly as [`solve_ldp_margin`](super::solve_ldp_margin)
/// (one draw per location, in location order), takes the marked set of the
/// optimal assignment, keeps a greedy maximal independent set of its `2δ`
/// conflict graph, reconnects around it and sizes the kept facilities with
/// the same noisy-load-plus-margin rule.
pub fn solve_ldp_reconnection<R: Rng + ?Sized>(
    inst: &Instance,
    params: &SolveParams,
    rng: &mut R,
) -> Result<Solution> {
    let noisy = perturb_counts(inst.clients(), &params.privacy, rng);
    let marked = marked_set(&optimal_assignment(inst));
    let graph = build_conflict_graph(inst, &marked, params.delta)?;
    let mis = greedy_mis(&graph, inst.facility_costs())?;
    debug_assert!(mis.is_independent(&graph));
    let assignment = reconnect(inst, &mis.chosen, params.delta)?;
    let mut open = mis.chosen;
    open.sort_unstable();
    Ok(noisy_capacities(
        inst,
        assignment,
        &open,
        noisy,
        &params.privacy,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::privacy::PrivacyParams;
    use crate::solvers::fixtures::line;
    use crate::solvers::solve_ldp_margin;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singleton_set_takes_everyone() {
        let inst = line(&[0.0, 0.1, 0.9], &[0.5, 0.5, 0.5], &[1, 1, 1]);
        assert_eq!(reconnect(&inst, &[0], 0.2).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn ball_rule_beats_argmin() {
        // u = 1 sits inside B(0, 0.3) but f_2 + d(1,2) = 0.4 < f_0 + d(1,0) = 1.25
        let inst = line(&[0.0, 0.25, 0.65], &[1.0, 5.0, 0.0], &[1, 1, 1]);
        assert_eq!(reconnect(&inst, &[0, 2], 0.3).unwrap(), vec![0, 0, 2]);
        // with a smaller ball u = 1 is uncovered and takes the argmin
        assert_eq!(reconnect(&inst, &[0, 2], 0.2).unwrap(), vec![0, 2, 2]);
    }

    #[test]
    fn zero_radius_covers_only_centres() {
        let inst = line(&[0.0, 0.4, 0.5, 1.0], &[0.2, 0.9, 0.1, 0.3], &[1; 4]);
        let h = reconnect(&inst, &[2, 0], 0.0).unwrap();
        assert_eq!(h[0], 0);
        assert_eq!(h[2], 2);
        // 1: min(0.2 + 0.4, 0.1 + 0.1) -> 2;  3: min(0.2 + 1, 0.1 + 0.5) -> 2
        assert_eq!(h, vec![0, 2, 2, 2]);
    }

    #[test]
    fn earlier_pick_wins_on_shared_boundary() {
        let inst = line(&[0.0, 0.5, 1.0], &[0.3, 9.0, 0.1], &[1; 3]);
        assert_eq!(reconnect(&inst, &[2, 0], 0.5).unwrap(), vec![0, 2, 2]);
        assert_eq!(reconnect(&inst, &[0, 2], 0.5).unwrap(), vec![0, 0, 2]);
    }

    #[test]
    fn reconnect_errors() {
        let inst = line(&[0.0], &[1.0], &[1]);
        assert!(reconnect(&inst, &[], 0.1).is_err());
        assert!(reconnect(&inst, &[0], -0.1).is_err());
        assert!(reconnect(&inst, &[4], 0.1).is_err());
    }

    #[test]
    fn zero_delta_matches_margin_algorithm() {
        let inst = line(
            &[0.0, 0.05, 0.3, 0.32, 0.8, 1.1, 1.15],
            &[0.2, 0.25, 0.6, 0.1, 0.4, 0.3, 0.05],
            &[1, 2, 3, 0, 4, 2, 1],
        );
        let p = PrivacyParams::new(0.5, 0.1).unwrap();
        let sp = SolveParams::new(p, 0.0).unwrap();
        for seed in 0..10 {
            let a = solve_ldp_margin(&inst, &p, &mut ChaCha8Rng::seed_from_u64(seed));
            let b =
                solve_ldp_reconnection(&inst, &sp, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn wide_delta_opens_cheapest_marked() {
        let inst = line(
            &[0.0, 0.05, 0.3, 0.32, 0.8, 1.1, 1.15],
            &[0.2, 0.25, 0.6, 0.1, 0.4, 0.3, 0.05],
            &[1, 2, 3, 0, 4, 2, 1],
        );
        let sp = SolveParams::new(PrivacyParams::new(0.5, 0.1).unwrap(), 0.6).unwrap();
        let sol = solve_ldp_reconnection(&inst, &sp, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(sol.capacities.keys().copied().collect::<Vec<_>>(), vec![6]);
        assert!(sol.assignment.iter().all(|&v| v == 6));
    }
}
