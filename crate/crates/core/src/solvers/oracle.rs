use crate::error::{Error, Result};
use crate::model::{CostBreakdown, Instance};

/// Largest instance the exhaustive oracle accepts.
pub const ORACLE_MAX_N: usize = 8;

/// Exact optimum by enumerating every connection function `h: V -> V`,
/// with each opened facility sized at exactly its connected demand.
///
/// Makes no use of the per-location argmin argument, so it independently
/// certifies [`solve_optimal`](super::solve_optimal).
pub fn brute_force_oracle(inst: &Instance) -> Result<CostBreakdown> {
    let n = inst.len();
    if n > ORACLE_MAX_N {
        return Err(Error::param(format!(
            "oracle enumerates n^n assignments and accepts n <= {ORACLE_MAX_N}, got {n}"
        )));
    }
    let f = inst.facility_costs();
    let b = inst.clients();
    let m = inst.metric();
    // Per (v, u): clients of v times unit cost at u and distance to u.
    let fac: Vec<Vec<f64>> = (0..n)
        .map(|v| (0..n).map(|u| b[v] as f64 * f[u]).collect())
        .collect();
    let conn: Vec<Vec<f64>> = (0..n)
        .map(|v| (0..n).map(|u| b[v] as f64 * m.distance(v, u)).collect())
        .collect();

    let mut h = vec![0usize; n];
    let mut best: Option<CostBreakdown> = None;
    loop {
        let facility_cost: f64 = (0..n).map(|v| fac[v][h[v]]).sum();
        let connection_cost: f64 = (0..n).map(|v| conn[v][h[v]]).sum();
        let total = facility_cost + connection_cost;
        if best.is_none_or(|b| total < b.total) {
            best = Some(CostBreakdown::new(facility_cost, connection_cost));
        }
        // odometer increment over base-n digits
        let mut i = 0;
        while i < n {
            h[i] += 1;
            if h[i] < n {
                break;
            }
            h[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(best.expect("at least one assignment exists"))
}
