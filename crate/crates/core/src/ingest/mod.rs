//! From raw data to itineraries and complexes.

mod bramah;
mod charts;
mod embed;
mod ode;
mod partition;

pub use bramah::{build_bramah, BramahConfig, BramahOutput};
pub use charts::{assign_cells, assign_cells_with, scaling_test, CellAssignment, LocalChart, ScalingReport};
pub use embed::delay_embed;
pub use ode::{simulate, SimulationConfig, System};
pub use partition::{lorenz_partition, rossler_partition};

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampled states with strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() != points.len() {
            return Err(Error::InvalidParameter(format!(
                "{} times for {} points",
                times.len(),
                points.len()
            )));
        }
        for (i, w) in times.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotonicTime(i + 1));
            }
        }
        let dim = points.first().map_or(0, Vec::len);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidParameter(format!("point {i} has dimension {}, expected {dim}", p.len())));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteState(times[i]));
            }
        }
        Ok(Trajectory { times, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[k]).collect()
    }

    /// CSV with header `time,x1,…,xn`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["time".to_string()];
        header.extend((1..=self.dim()).map(|i| format!("x{i}")));
        wtr.write_record(&header)?;
        for (t, p) in self.times.iter().zip(&self.points) {
            let mut rec = vec![t.to_string()];
            rec.extend(p.iter().map(ToString::to_string));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn from_csv_reader(r: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let header = rdr.headers()?.clone();
        if header.get(0) != Some("time") || header.len() < 2 {
            return Err(Error::schema("csv header", "expected time,x1,...,xn"));
        }
        let mut times = Vec::new();
        let mut points = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::schema(format!("csv line {}", line + 2), format!("{s:?}: {e}")))
            };
            times.push(parse(&rec[0])?);
            points.push(rec.iter().skip(1).map(parse).collect::<Result<Vec<f64>>>()?);
        }
        Self::new(times, points)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}
