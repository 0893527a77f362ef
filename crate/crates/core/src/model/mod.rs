//! Domain types: metrics, instances, solutions and the instance file format.

mod document;
mod instance;
mod metric;
mod solution;

pub use document::{load_instance, save_instance, FORMAT_VERSION};
pub use instance::Instance;
pub use metric::{MetricSource, MetricSpace, Point, TriangleViolation};
pub use solution::{FacilityTrace, Solution};

/// Facility-cost / connection-cost split of a solution.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CostBreakdown {
    /// Sum over open facilities of capacity times unit cost.
    pub facility_cost: f64,
    /// Sum over locations of clients times distance to their facility.
    pub connection_cost: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn new(facility_cost: f64, connection_cost: f64) -> Self {
        CostBreakdown {
            facility_cost,
            connection_cost,
            total: facility_cost + connection_cost,
        }
    }
}
