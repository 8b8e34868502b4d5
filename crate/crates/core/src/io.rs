//! CSV emission and curve import.
//!
//! Numbers are written with 17 significant digits so that re-reading a file
//! reproduces every sample bit for bit.

use thiserror::Error;

use crate::geom::Vec2;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Invalid { row: usize, message: String },
}

pub fn format_number(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Writes a header row and numeric rows.
pub fn write_table(headers: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).expect("writing to memory");
    for row in rows {
        w.write_record(row.iter().map(|&v| format_number(v)))
            .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii output")
}

/// A curve sampled on a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub t: Vec<f64>,
    pub points: Vec<Vec2>,
}

impl SampledCurve {
    pub fn new(t: Vec<f64>, points: Vec<Vec2>) -> Self {
        debug_assert_eq!(t.len(), points.len());
        SampledCurve { t, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest pointwise distance to another curve on the same grid.
    pub fn max_distance(&self, other: &[Vec2]) -> f64 {
        self.points
            .iter()
            .zip(other)
            .map(|(a, b)| a.distance(*b))
            .fold(0.0, f64::max)
    }

    /// `t,x,y` table.
    pub fn to_csv(&self) -> String {
        write_table(
            &["t", "x", "y"],
            self.t.iter().zip(&self.points).map(|(&t, p)| vec![t, p.x, p.y]),
        )
    }

    /// Reads a `t,x,y` table as written by [`SampledCurve::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self, CsvError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = rdr.headers()?.clone();
        let col = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| CsvError::Invalid {
                row: 0,
                message: format!("missing column '{}'", name),
            })
        };
        let (ct, cx, cy) = (col("t")?, col("x")?, col("y")?);
        let mut t = Vec::new();
        let mut points = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let num = |c: usize| -> Result<f64, CsvError> {
                rec.get(c)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| CsvError::Invalid { row: i + 1, message: format!("bad number in column {}", c) })
            };
            t.push(num(ct)?);
            points.push(Vec2::new(num(cx)?, num(cy)?));
        }
        Ok(SampledCurve { t, points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn curve_csv_round_trip_is_exact(pts in prop::collection::vec((-1e6f64..1e6, -1e-6f64..1e-6), 1..40)) {
            let t: Vec<f64> = (0..pts.len()).map(|i| i as f64 / 7.0).collect();
            let curve = SampledCurve::new(t, pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect());
            let back = SampledCurve::from_csv(&curve.to_csv()).unwrap();
            prop_assert_eq!(back, curve);
        }
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
    }
}
