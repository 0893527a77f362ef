use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Location in the plane.
pub type Point = [f64; 2];

/// How a metric was constructed; determines its document form.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSource {
    Euclidean2d(Vec<Point>),
    Explicit,
}

/// A finite metric space over locations `0..n` with a dense distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<f64>,
    source: MetricSource,
}

/// A triple violating `d(u,w) <= d(u,v) + d(v,w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleViolation {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub excess: f64,
}

impl MetricSpace {
    /// Euclidean metric over planar points.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        Self::from_points_with(points, Exec::default())
    }

    pub fn from_points_with(points: Vec<Point>, exec: Exec) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::param("a metric needs at least one point"));
        }
        if let Some(i) = points
            .iter()
            .position(|p| !p[0].is_finite() || !p[1].is_finite())
        {
            return Err(Error::schema(
                format!("points[{i}]"),
                "coordinates must be finite",
            ));
        }
        let n = points.len();
        let rows = exec.map_range(n, |i| {
            let [xi, yi] = points[i];
            points
                .iter()
                .map(|&[xj, yj]| (xi - xj).hypot(yi - yj))
                .collect::<Vec<_>>()
        });
        Ok(MetricSpace {
            n,
            dist: rows.concat(),
            source: MetricSource::Euclidean2d(points),
        })
    }

    /// Metric given by an explicit distance matrix.
    ///
    /// Rejects non-square, non-finite, negative, asymmetric and
    /// non-zero-diagonal matrices, and matrices breaking the triangle
    /// inequality beyond rounding.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::schema(
                "distances",
                "matrix must have at least one row",
            ));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::schema(
                    format!("distances[{i}]"),
                    format!("expected {n} entries, found {}", row.len()),
                ));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::schema(
                        format!("distances[{i}][{j}]"),
                        format!("distance must be finite and non-negative, got {d}"),
                    ));
                }
            }
            if row[i] != 0.0 {
                return Err(Error::schema(
                    format!("distances[{i}][{i}]"),
                    format!("diagonal must be 0, got {}", row[i]),
                ));
            }
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::schema(
                        format!("distances[{i}][{j}]"),
                        format!(
                            "matrix is not symmetric: d({i},{j}) = {} but d({j},{i}) = {}",
                            rows[i][j], rows[j][i]
                        ),
                    ));
                }
            }
        }
        let metric = MetricSpace {
            n,
            dist: rows.concat(),
            source: MetricSource::Explicit,
        };
        if let Some(t) = metric.triangle_violation(1e-9) {
            return Err(Error::schema(
                format!("distances[{}][{}]", t.u, t.w),
                format!("triangle inequality violated via {} by {:e}", t.v, t.excess),
            ));
        }
        Ok(metric)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: a metric space holds at least one location.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    /// Distances from `u` to every location.
    #[inline]
    pub fn row(&self, u: usize) -> &[f64] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn source(&self) -> &MetricSource {
        &self.source
    }

    pub fn points(&self) -> Option<&[Point]> {
        match &self.source {
            MetricSource::Euclidean2d(p) => Some(p),
            MetricSource::Explicit => None,
        }
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// The closed ball `{u : d(center, u) <= radius}`, in index order.
    pub fn ball(&self, center: usize, radius: f64) -> Result<Vec<usize>> {
        if center >= self.n {
            return Err(Error::param(format!(
                "center {center} out of range for {} locations",
                self.n
            )));
        }
        if !(radius >= 0.0) {
            return Err(Error::param(format!("radius must be >= 0, got {radius}")));
        }
        Ok(self.ball_unchecked(center, radius))
    }

    pub(crate) fn ball_unchecked(&self, center: usize, radius: f64) -> Vec<usize> {
        self.row(center)
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d <= radius)
            .map(|(u, _)| u)
            .collect()
    }

    /// |B(center, radius)| without materializing the ball.
    pub(crate) fn ball_size(&self, center: usize, radius: f64) -> usize {
        self.row(center).iter().filter(|&&d| d <= radius).count()
    }

    /// Exhaustive O(n^3) search for a triangle-inequality violation larger
    /// than `rel_tol` relative to the longest side involved.
    pub fn triangle_violation(&self, rel_tol: f64) -> Option<TriangleViolation> {
        let n = self.n;
        for u in 0..n {
            for v in 0..n {
                let duv = self.distance(u, v);
                let row_v = self.row(v);
                for (w, &dvw) in row_v.iter().enumerate() {
                    let duw = self.distance(u, w);
                    let excess = duw - (duv + dvw);
                    if excess > rel_tol * duw.max(duv).max(dvw).max(1.0) {
                        return Some(TriangleViolation { u, v, w, excess });
                    }
                }
            }
        }
        None
    }
}
