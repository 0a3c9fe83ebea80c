//! Metric entourages `{(x, y) : d(x, y) <= r}`.

use serde::{Deserialize, Serialize};

use super::relation::{Relation, RelationError};

/// Where distances come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricSource {
    /// Integer lattice points with the Euclidean distance.
    Points(Vec<Vec<i64>>),
    /// Explicit symmetric table with zero diagonal.
    Table(Vec<Vec<f64>>),
}

impl MetricSource {
    /// `n` points `0, 1, .., n-1` on the line.
    pub fn line(n: usize) -> Self {
        MetricSource::Points((0..n as i64).map(|i| vec![i]).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            MetricSource::Points(p) => p.len(),
            MetricSource::Table(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<(), RelationError> {
        match self {
            MetricSource::Points(points) => {
                if let Some(first) = points.first() {
                    if points.iter().any(|p| p.len() != first.len()) {
                        return Err(RelationError::BadDistanceTable(
                            "points have mixed dimensions".into(),
                        ));
                    }
                }
                Ok(())
            }
            MetricSource::Table(table) => {
                let n = table.len();
                for (i, row) in table.iter().enumerate() {
                    if row.len() != n {
                        return Err(RelationError::BadDistanceTable(format!(
                            "row {i} has length {}, expected {n}",
                            row.len()
                        )));
                    }
                    for (j, &d) in row.iter().enumerate() {
                        if !(d >= 0.0) {
                            return Err(RelationError::BadDistanceTable(format!(
                                "negative or NaN distance at ({i}, {j})"
                            )));
                        }
                        if d != table[j][i] {
                            return Err(RelationError::BadDistanceTable(format!(
                                "asymmetric at ({i}, {j})"
                            )));
                        }
                    }
                    if row[i] != 0.0 {
                        return Err(RelationError::BadDistanceTable(format!(
                            "nonzero diagonal at {i}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Whether `d(i, j) <= r`. Points compare squared integer distances so
    /// ties at the radius are decided exactly.
    fn within(&self, i: usize, j: usize, r: f64) -> bool {
        match self {
            MetricSource::Points(points) => {
                let d2: i64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (d2 as f64) <= r * r
            }
            MetricSource::Table(table) => table[i][j] <= r,
        }
    }
}

/// All pairs at distance `<= r` (closed ball condition).
pub fn metric_entourage(source: &MetricSource, r: f64) -> Result<Relation, RelationError> {
    source.validate()?;
    if !(r >= 0.0) {
        return Err(RelationError::BadDistanceTable(format!(
            "radius must be nonnegative, got {r}"
        )));
    }
    let n = source.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if source.within(i, j, r) {
                pairs.push((i, j));
            }
        }
    }
    Relation::from_pairs(n, pairs)
}

/// The radius-`r` band `{(i, j) : |i - j| <= r}` on `{0, .., n-1}`.
pub fn band(n: usize, r: usize) -> Relation {
    let pairs = (0..n).flat_map(|i| {
        let lo = i.saturating_sub(r);
        let hi = (i + r).min(n.saturating_sub(1));
        (lo..=hi).map(move |j| (i, j))
    });
    Relation::from_pairs(n, pairs).expect("band indices are in range")
}
