//! Point/client tables of real locations.
//!
//! The layout is a CSV file with header `id,x,y,clients`, one row per
//! location. Coordinates are in any planar unit; they are rescaled into the
//! unit square when converted to an instance.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{sample_facility_costs, CostRange};
use crate::model::{Instance, MetricSpace, Point};

/// Number of locations in the stand-in table.
pub const STANDIN_LOCATIONS: usize = 431;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealWorldRow {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub clients: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RealWorldTable {
    pub rows: Vec<RealWorldRow>,
}

impl RealWorldTable {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(bytes);
        let headers = reader.headers()?.clone();
        for required in ["id", "x", "y", "clients"] {
            if !headers.iter().any(|h| h == required) {
                return Err(Error::schema(
                    "header",
                    format!("missing column '{required}'"),
                ));
            }
        }
        let mut rows = Vec::new();
        for (i, record) in reader.deserialize::<RealWorldRow>().enumerate() {
            let row = record.map_err(|e| Error::schema(format!("row {}", i + 1), e.to_string()))?;
            if !row.x.is_finite() || !row.y.is_finite() {
                return Err(Error::schema(
                    format!("row {}", i + 1),
                    "coordinates must be finite",
                ));
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::schema("rows", "table has no locations"));
        }
        Ok(RealWorldTable { rows })
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("writing to memory");
        }
        w.into_inner().expect("writing to memory")
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Positions mapped into [0, 1]²: uniform scaling by the longer side of
    /// the bounding box, centred along the shorter side. A degenerate box
    /// (all points equal) maps everything to (0.5, 0.5).
    pub fn normalized_points(&self) -> Vec<Point> {
        let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
        for r in &self.rows {
            min_x = min_x.min(r.x);
            max_x = max_x.max(r.x);
            min_y = min_y.min(r.y);
            max_y = max_y.max(r.y);
        }
        let (w, h) = (max_x - min_x, max_y - min_y);
        let side = w.max(h);
        if side == 0.0 {
            return vec![[0.5, 0.5]; self.rows.len()];
        }
        let (off_x, off_y) = ((1.0 - w / side) / 2.0, (1.0 - h / side) / 2.0);
        self.rows
            .iter()
            .map(|r| {
                [
                    ((r.x - min_x) / side + off_x).clamp(0.0, 1.0),
                    ((r.y - min_y) / side + off_y).clamp(0.0, 1.0),
                ]
            })
            .collect()
    }

    /// Builds an instance with facility costs drawn uniformly from `costs`
    /// using `rng`; client counts are taken verbatim.
    pub fn to_instance<R: Rng + ?Sized>(&self, costs: CostRange, rng: &mut R) -> Result<Instance> {
        let metric = MetricSpace::from_points(self.normalized_points())?;
        let f = sample_facility_costs(self.rows.len(), costs, rng)?;
        Instance::new(metric, f, self.rows.iter().map(|r| r.clients).collect())
    }
}

/// Parses a table and turns it into an instance with costs seeded by `seed`.
pub fn load_realworld(bytes: &[u8], costs: CostRange, seed: u64) -> Result<Instance> {
    RealWorldTable::parse(bytes)?.to_instance(costs, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Synthetic city-like table with [`STANDIN_LOCATIONS`] rows: households
/// scattered around a dozen neighbourhood centres over roughly 12 km × 9 km
/// (metres), each with 1 to 8 residents.
pub fn standin_table(seed: u64) -> RealWorldTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centres: Vec<(f64, f64, f64)> = (0..12)
        .map(|_| {
            (
                rng.random_range(1_500.0..10_500.0),
                rng.random_range(1_000.0..8_000.0),
                rng.random_range(250.0..900.0),
            )
        })
        .collect();
    let residents = Normal::<f64>::new(2.5, 1.5).expect("valid normal");
    let rows = (0..STANDIN_LOCATIONS)
        .map(|i| {
            let (cx, cy, spread) = centres[rng.random_range(0..centres.len())];
            let r = spread * rng.random::<f64>().sqrt();
            let theta = rng.random_range(0.0..TAU);
            RealWorldRow {
                id: format!("L{i:03}"),
                x: (cx + r * theta.cos()).round(),
                y: (cy + r * theta.sin()).round(),
                clients: residents.sample(&mut rng).round().clamp(1.0, 8.0) as u64,
            }
        })
        .collect();
    RealWorldTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn costs() -> CostRange {
        CostRange::new(0.1, 0.3).unwrap()
    }

    #[test]
    fn bounding_box_map() {
        let t = RealWorldTable::parse(b"id,x,y,clients\na,0,0,1\nb,10,10,2\n").unwrap();
        assert_eq!(t.normalized_points(), vec![[0.0, 0.0], [1.0, 1.0]]);
    }

    #[test]
    fn aspect_preserved_and_centred() {
        let t = RealWorldTable::parse(b"id,x,y,clients\na,0,0,1\nb,10,0,2\nc,10,5,1\n").unwrap();
        assert_eq!(
            t.normalized_points(),
            vec![[0.0, 0.25], [1.0, 0.25], [1.0, 0.75]]
        );
    }

    #[test]
    fn degenerate_box() {
        let t = RealWorldTable::parse(b"id,x,y,clients\na,3,3,1\nb,3,3,2\n").unwrap();
        assert_eq!(t.normalized_points(), vec![[0.5, 0.5]; 2]);
    }

    #[test]
    fn costs_and_clients() {
        let inst = load_realworld(b"id,x,y,clients\na,0,0,4\nb,1,2,0\n", costs(), 1).unwrap();
        assert_eq!(inst.clients(), &[4, 0]);
        assert!(inst
            .facility_costs()
            .iter()
            .all(|f| (0.1..=0.3).contains(f)));
        let again = load_realworld(b"id,x,y,clients\na,0,0,4\nb,1,2,0\n", costs(), 1).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn malformed_tables() {
        assert!(load_realworld(b"id,x,y,clients\n", costs(), 0).is_err());
        let err = load_realworld(b"id,x,y,clients\na,0,zero,1\n", costs(), 0).unwrap_err();
        assert!(err.to_string().starts_with("row 1"), "{err}");
        assert!(load_realworld(b"id,x,y,clients\na,0,0,-1\n", costs(), 0).is_err());
        assert!(load_realworld(b"id,x,y\na,0,0\n", costs(), 0).is_err());
        assert!(load_realworld(b"id,x,y,clients\na,0,0\n", costs(), 0).is_err());
    }

    #[test]
    fn standin_round_trips() {
        let t = standin_table(431);
        assert_eq!(t.len(), STANDIN_LOCATIONS);
        assert_eq!(RealWorldTable::parse(&t.to_csv()).unwrap(), t);
    }
}
