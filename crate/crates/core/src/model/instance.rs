use crate::error::{Error, Result};
use crate::model::metric::MetricSpace;

/// An FL-Linear instance: metric, per-unit-capacity facility costs and
/// client counts, one entry per location.
///
/// Immutable once built; share it freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    metric: MetricSpace,
    facility_costs: Vec<f64>,
    clients: Vec<u64>,
}

impl Instance {
    pub fn new(metric: MetricSpace, facility_costs: Vec<f64>, clients: Vec<u64>) -> Result<Self> {
        let n = metric.len();
        if facility_costs.len() != n {
            return Err(Error::schema(
                "facility_costs",
                format!("expected {n} entries, found {}", facility_costs.len()),
            ));
        }
        if clients.len() != n {
            return Err(Error::schema(
                "clients",
                format!("expected {n} entries, found {}", clients.len()),
            ));
        }
        if let Some(i) = facility_costs
            .iter()
            .position(|f| !f.is_finite() || *f < 0.0)
        {
            return Err(Error::schema(
                format!("facility_costs[{i}]"),
                format!("must be finite and non-negative, got {}", facility_costs[i]),
            ));
        }
        Ok(Instance {
            metric,
            facility_costs,
            clients,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.metric.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }

    #[inline]
    pub fn metric(&self) -> &MetricSpace {
        &self.metric
    }

    #[inline]
    pub fn facility_costs(&self) -> &[f64] {
        &self.facility_costs
    }

    #[inline]
    pub fn clients(&self) -> &[u64] {
        &self.clients
    }

    pub fn total_clients(&self) -> u64 {
        self.clients.iter().sum()
    }

    /// Mean number of clients per location.
    pub fn b_avg(&self) -> f64 {
        self.total_clients() as f64 / self.len() as f64
    }

    /// Same locations and costs, different client counts.
    pub fn with_clients(&self, clients: Vec<u64>) -> Result<Self> {
        Instance::new(self.metric.clone(), self.facility_costs.clone(), clients)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metric2() -> MetricSpace {
        MetricSpace::from_points(vec![[0.0, 0.0], [1.0, 0.0]]).unwrap()
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(Instance::new(metric2(), vec![1.0], vec![1, 1]).is_err());
        assert!(Instance::new(metric2(), vec![1.0, 1.0], vec![1]).is_err());
    }

    #[test]
    fn negative_cost_rejected() {
        let err = Instance::new(metric2(), vec![1.0, -0.5], vec![1, 1]).unwrap_err();
        assert!(err.to_string().starts_with("facility_costs[1]"), "{err}");
    }

    #[test]
    fn zero_clients_allowed() {
        let inst = Instance::new(metric2(), vec![1.0, 2.0], vec![0, 4]).unwrap();
        assert_eq!(inst.total_clients(), 4);
        assert_eq!(inst.b_avg(), 2.0);
    }
}
