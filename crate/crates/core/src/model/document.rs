//! The instance file format.
//!
//! ```json
//! { "version": 1,
//!   "metric": {"kind": "euclidean-2d", "points": [[0.0, 0.0], [3.0, 4.0]]},
//!   "facility_costs": [0.1, 0.2],
//!   "clients": [3, 1] }
//! ```
//!
//! The metric may instead be `{"kind": "matrix", "distances": [[...], ...]}`.
//! Reals are written in shortest round-trip form, so a save/load cycle
//! reproduces every finite double bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::instance::Instance;
use crate::model::metric::{MetricSource, MetricSpace, Point};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDocument {
    version: u32,
    metric: MetricDocument,
    facility_costs: Vec<f64>,
    clients: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum MetricDocument {
    #[serde(rename = "euclidean-2d")]
    Euclidean2d { points: Vec<Point> },
    #[serde(rename = "matrix")]
    Matrix { distances: Vec<Vec<f64>> },
}

/// Parses an instance document, validating every field.
pub fn load_instance(bytes: &[u8]) -> Result<Instance> {
    let doc: InstanceDocument = serde_json::from_slice(bytes)?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::schema(
            "version",
            format!(
                "unsupported version {}, expected {FORMAT_VERSION}",
                doc.version
            ),
        ));
    }
    let metric = match doc.metric {
        MetricDocument::Euclidean2d { points } => {
            if points.is_empty() {
                return Err(Error::schema(
                    "metric.points",
                    "at least one point is required",
                ));
            }
            MetricSpace::from_points(points).map_err(|e| prefix("metric.", e))?
        }
        MetricDocument::Matrix { distances } => {
            MetricSpace::from_matrix(distances).map_err(|e| prefix("metric.", e))?
        }
    };
    let clients = doc
        .clients
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            u64::try_from(b).map_err(|_| {
                Error::schema(
                    format!("clients[{i}]"),
                    format!("must be non-negative, got {b}"),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Instance::new(metric, doc.facility_costs, clients)
}

/// Serializes an instance; planar instances keep their coordinates.
pub fn save_instance(inst: &Instance) -> Vec<u8> {
    let metric = match inst.metric().source() {
        MetricSource::Euclidean2d(points) => MetricDocument::Euclidean2d {
            points: points.clone(),
        },
        MetricSource::Explicit => {
            let m = inst.metric();
            MetricDocument::Matrix {
                distances: (0..m.len()).map(|u| m.row(u).to_vec()).collect(),
            }
        }
    };
    let doc = InstanceDocument {
        version: FORMAT_VERSION,
        metric,
        facility_costs: inst.facility_costs().to_vec(),
        clients: inst.clients().iter().map(|&b| b as i64).collect(),
    };
    let mut out = serde_json::to_vec(&doc).expect("instance serialization is infallible");
    out.push(b'\n');
    out
}

fn prefix(p: &str, e: Error) -> Error {
    match e {
        Error::Schema { field, message } => Error::Schema {
            field: format!("{p}{field}"),
            message,
        },
        other => other,
    }
}
