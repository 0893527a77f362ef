//! Cost accounting, capacity feasibility and the theoretical cost bounds of
//! the two private algorithms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CostBreakdown, Instance, Solution};
use crate::privacy::PrivacyParams;

fn check_shape(inst: &Instance, sol: &Solution) -> Result<()> {
    if sol.assignment.len() != inst.len() {
        return Err(Error::param(format!(
            "assignment covers {} locations, instance has {}",
            sol.assignment.len(),
            inst.len()
        )));
    }
    sol.validate().map_err(Error::InvalidParameter)
}

/// `Σ_s k_s f_s + Σ_v b_v d(v, h(v))`, always with the true client counts.
pub fn total_cost(inst: &Instance, sol: &Solution) -> Result<CostBreakdown> {
    check_shape(inst, sol)?;
    let f = inst.facility_costs();
    let facility_cost = sol.capacities.iter().map(|(&s, &k)| k * f[s]).sum();
    let m = inst.metric();
    let connection_cost = inst
        .clients()
        .iter()
        .zip(&sol.assignment)
        .enumerate()
        .map(|(v, (&b, &s))| b as f64 * m.distance(v, s))
        .sum();
    Ok(CostBreakdown::new(facility_cost, connection_cost))
}

/// Facilities whose true connected demand exceeds their capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub failed_facilities: Vec<usize>,
    pub any_failure: bool,
    /// Largest `load - capacity` over all open facilities, or 0 when none
    /// is overloaded.
    pub worst_overload: f64,
}

/// True connected load per open facility.
pub fn connected_loads(inst: &Instance, sol: &Solution) -> Result<BTreeMap<usize, u64>> {
    check_shape(inst, sol)?;
    let mut load: BTreeMap<usize, u64> = sol.capacities.keys().map(|&v| (v, 0)).collect();
    for (&b, s) in inst.clients().iter().zip(&sol.assignment) {
        *load.get_mut(s).expect("validated") += b;
    }
    Ok(load)
}

pub fn check_capacities(inst: &Instance, sol: &Solution) -> Result<FeasibilityReport> {
    let load = connected_loads(inst, sol)?;
    let mut failed_facilities = Vec::new();
    let mut worst_overload = 0.0f64;
    for (v, l) in load {
        let over = l as f64 - sol.capacities[&v];
        if over > 0.0 {
            failed_facilities.push(v);
            worst_overload = worst_overload.max(over);
        }
    }
    Ok(FeasibilityReport {
        any_failure: !failed_facilities.is_empty(),
        failed_facilities,
        worst_overload,
    })
}

/// Cost relative to the instance optimum.
pub fn normalized_cost(cost: f64, opt: f64) -> Result<f64> {
    if !(opt > 0.0) {
        return Err(Error::param(format!(
            "optimum must be > 0 to normalize, got {opt}"
        )));
    }
    Ok(cost / opt)
}

/// Expected-cost bound of the margin algorithm on success:
/// `(1 + (2/ε)·ln(2n/α))·OPT`.
pub fn bound_margin(n: usize, params: &PrivacyParams, opt: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    check_opt(opt)?;
    Ok(margin_factor(n, params) * opt)
}

fn margin_factor(n: usize, params: &PrivacyParams) -> f64 {
    1.0 + params.margin_coefficient(n)
}

fn check_opt(opt: f64) -> Result<()> {
    if !(opt >= 0.0) || !opt.is_finite() {
        return Err(Error::param(format!(
            "optimum must be finite and >= 0, got {opt}"
        )));
    }
    Ok(())
}

/// Expected-cost bound of the reconnection algorithm on success, split into
/// its multiplicative and additive parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconnectionBound {
    /// `1 + (2/ε)·ln(2n/α) / (γ·ln n)`.
    pub factor: f64,
    /// `factor · OPT`.
    pub multiplicative: f64,
    /// `δ·n·(4·b_avg + (2/ε)·ln(2n/α) / (γ·ln n))`.
    pub additive: f64,
}

impl ReconnectionBound {
    pub fn total(&self) -> f64 {
        self.multiplicative + self.additive
    }
}

pub fn bound_reconnection(
    n: usize,
    params: &PrivacyParams,
    gamma: f64,
    delta: f64,
    b_avg: f64,
    opt: f64,
) -> Result<ReconnectionBound> {
    if n < 2 {
        return Err(Error::param("the reconnection bound needs n >= 2"));
    }
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::param(format!(
            "gamma must be finite and >= 1, got {gamma}"
        )));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::param(format!(
            "delta must be finite and >= 0, got {delta}"
        )));
    }
    if !(b_avg >= 0.0) || !b_avg.is_finite() {
        return Err(Error::param(format!(
            "b_avg must be finite and >= 0, got {b_avg}"
        )));
    }
    check_opt(opt)?;
    let spread = params.margin_coefficient(n) / (gamma * (n as f64).ln());
    let factor = 1.0 + spread;
    Ok(ReconnectionBound {
        factor,
        multiplicative: factor * opt,
        additive: delta * n as f64 * (4.0 * b_avg + spread),
    })
}

/// The bound factors for one parameter setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub mult_margin_bound: f64,
    pub mult_reconn_bound: f64,
    /// Additive term of the reconnection bound (independent of OPT).
    pub additive_reconn_bound: f64,
    pub b_avg: f64,
}

impl BoundReport {
    pub fn compute(
        n: usize,
        params: &PrivacyParams,
        gamma: f64,
        delta: f64,
        b_avg: f64,
    ) -> Result<Self> {
        let reconn = bound_reconnection(n, params, gamma, delta, b_avg, 1.0)?;
        Ok(BoundReport {
            mult_margin_bound: margin_factor(n, params),
            mult_reconn_bound: reconn.factor,
            additive_reconn_bound: reconn.additive,
            b_avg,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MetricSpace;
    use crate::solvers::{solve_ldp_margin, solve_optimal};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn inst(xs: &[f64], f: &[f64], b: &[u64]) -> Instance {
        let m = MetricSpace::from_points(xs.iter().map(|&x| [x, 0.0]).collect()).unwrap();
        Instance::new(m, f.to_vec(), b.to_vec()).unwrap()
    }

    fn sol(assignment: Vec<usize>, caps: &[(usize, f64)]) -> Solution {
        Solution {
            assignment,
            capacities: caps.iter().copied().collect(),
            trace: None,
            noisy_counts: None,
        }
    }

    fn p(eps: f64, alpha: f64) -> PrivacyParams {
        PrivacyParams::new(eps, alpha).unwrap()
    }

    #[test]
    fn hand_evaluated_cost() {
        let i = inst(&[0.0, 0.5], &[1.5, 9.0], &[1, 1]);
        let c = total_cost(&i, &sol(vec![0, 0], &[(0, 2.0)])).unwrap();
        assert_eq!(c.facility_cost, 3.0);
        assert_eq!(c.connection_cost, 0.5);
        assert_eq!(c.total, 3.5);
    }

    #[test]
    fn zero_clients_zero_connection() {
        let i = inst(&[0.0, 0.5, 0.9], &[1.0, 1.0, 1.0], &[0, 0, 0]);
        let c = total_cost(&i, &sol(vec![0, 0, 0], &[(0, 1.0)])).unwrap();
        assert_eq!(c.connection_cost, 0.0);
        assert_eq!(c.total, 1.0);
    }

    #[test]
    fn self_served_singleton() {
        let i = inst(&[0.0], &[0.7], &[4]);
        let c = total_cost(&i, &sol(vec![0], &[(0, 4.0)])).unwrap();
        assert_eq!(c.connection_cost, 0.0);
        assert_eq!(c.total, 4.0 * 0.7);
    }

    #[test]
    fn closed_facility_rejected() {
        let i = inst(&[0.0, 0.5], &[1.0, 1.0], &[1, 1]);
        assert!(total_cost(&i, &sol(vec![0, 1], &[(0, 2.0)])).is_err());
        assert!(check_capacities(&i, &sol(vec![0], &[(0, 2.0)])).is_err());
    }

    #[test]
    fn overload_detected() {
        let i = inst(&[0.0, 0.5], &[1.0, 1.0], &[2, 1]);
        let r = check_capacities(&i, &sol(vec![0, 0], &[(0, 2.0)])).unwrap();
        assert!(r.any_failure);
        assert_eq!(r.failed_facilities, vec![0]);
        assert_eq!(r.worst_overload, 1.0);
        let ok = check_capacities(&i, &sol(vec![0, 0], &[(0, 3.0)])).unwrap();
        assert!(!ok.any_failure);
        assert_eq!(ok.worst_overload, 0.0);
    }

    #[test]
    fn optimal_never_fails_and_normalizes_to_one() {
        let i = inst(&[0.0, 0.2, 0.5, 0.9], &[0.3, 0.1, 0.5, 0.2], &[3, 0, 2, 5]);
        let s = solve_optimal(&i);
        assert!(!check_capacities(&i, &s).unwrap().any_failure);
        let c = total_cost(&i, &s).unwrap();
        assert_eq!(normalized_cost(c.total, c.total).unwrap(), 1.0);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalized_cost(3.5, 3.5).unwrap(), 1.0);
        assert_eq!(normalized_cost(7.0, 3.5).unwrap(), 2.0);
        assert!(normalized_cost(1.0, 0.0).is_err());
        assert!(normalized_cost(1.0, -1.0).is_err());
    }

    #[test]
    fn margin_bound_reference() {
        let b = bound_margin(1000, &p(0.1, 0.1), 1.0).unwrap();
        assert!((b - 199.069_751_050_722_56).abs() < 1e-9, "{b}");
        assert_eq!(bound_margin(1000, &p(0.1, 0.1), 0.0).unwrap(), 0.0);
        let near_one = bound_margin(1000, &p(1e12, 0.1), 1.0).unwrap();
        assert!((near_one - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reconnection_bound_reference() {
        let r = bound_reconnection(1000, &p(0.1, 0.1), 2.0, 0.2, 2.5, 1.0).unwrap();
        assert!(
            (r.factor - 15.336_766_652_213_27).abs() < 1e-9,
            "{}",
            r.factor
        );
        let spread = r.factor - 1.0;
        assert!((r.additive - 0.2 * 1000.0 * (4.0 * 2.5 + spread)).abs() < 1e-9);
        let r0 = bound_reconnection(1000, &p(0.1, 0.1), 2.0, 0.0, 2.5, 3.0).unwrap();
        assert_eq!(r0.additive, 0.0);
        assert_eq!(r0.total(), r0.multiplicative);
        assert!(bound_reconnection(1, &p(0.1, 0.1), 2.0, 0.2, 2.5, 1.0).is_err());
        assert!(bound_reconnection(100, &p(0.1, 0.1), 0.5, 0.2, 2.5, 1.0).is_err());
    }

    #[test]
    fn report_collects_factors() {
        let r = BoundReport::compute(1000, &p(0.1, 0.1), 2.0, 0.2, 2.5).unwrap();
        assert!((r.mult_margin_bound - 199.069_751_050_722_56).abs() < 1e-9);
        assert!((r.mult_reconn_bound - 15.336_766_652_213_27).abs() < 1e-9);
        assert!(r.mult_reconn_bound >= 1.0 && r.mult_margin_bound >= 1.0);
    }

    #[test]
    fn cost_is_additive_over_facilities() {
        let i = inst(
            &[0.0, 0.2, 0.5, 0.9, 1.3],
            &[0.3, 0.1, 0.5, 0.2, 0.05],
            &[3, 0, 2, 5, 1],
        );
        let s = solve_ldp_margin(&i, &p(1.0, 0.1), &mut ChaCha8Rng::seed_from_u64(4));
        let c = total_cost(&i, &s).unwrap();
        let mut sum = 0.0;
        for (v, members) in s.connected_sets() {
            sum += s.capacities[&v] * i.facility_costs()[v];
            sum += members
                .iter()
                .map(|&u| i.clients()[u] as f64 * i.metric().distance(u, v))
                .sum::<f64>();
        }
        assert!((sum - c.total).abs() <= 1e-12 * c.total.max(1.0));
    }

    proptest! {
        #[test]
        fn bounds_monotone(
            n in 2usize..100_000,
            eps in 0.01..10.0f64,
            alpha in 0.01..0.99f64,
            gamma in 1.0..5.0f64,
            bump in 1.01..3.0f64,
        ) {
            let base = p(eps, alpha);
            let more_eps = p(eps * bump, alpha);
            prop_assert!(bound_margin(n, &more_eps, 1.0).unwrap() < bound_margin(n, &base, 1.0).unwrap());
            prop_assert!(bound_margin(n + 1, &base, 1.0).unwrap() > bound_margin(n, &base, 1.0).unwrap());
            let r = |n, q: &PrivacyParams| bound_reconnection(n, q, gamma, 0.1, 2.0, 1.0).unwrap().total();
            prop_assert!(r(n, &more_eps) < r(n, &base));
            // the additive term grows with n even where the factor shrinks
            prop_assert!(r(n + 1, &base) > r(n, &base));
            let rb = bound_reconnection(n, &base, gamma, 0.1, 2.0, 1.0).unwrap();
            if gamma * (n as f64).ln() > 1.0 {
                prop_assert!(rb.factor < bound_margin(n, &base, 1.0).unwrap());
            }
        }
    }
}
