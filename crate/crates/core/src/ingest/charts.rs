use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::Trajectory;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::tmv::Itinerary;

/// A cloud of points summarized by its barycenter and principal spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalChart {
    pub label: String,
    pub center: Vec<f64>,
    /// Descending singular values of the centered cloud.
    pub singular_values: Vec<f64>,
    pub members: usize,
}

impl LocalChart {
    pub fn fit(label: impl Into<String>, points: &[&[f64]]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InsufficientPoints { have: 0, need: 1 });
        };
        let center = barycenter(points, first.len());
        Ok(LocalChart {
            label: label.into(),
            singular_values: centered_singular_values(points, &center),
            center,
            members: points.len(),
        })
    }

    /// Number of singular values above `rel_tol` times the largest.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values.iter().filter(|&&s| top > 0.0 && s >= rel_tol * top).count()
    }
}

fn barycenter(points: &[&[f64]], dim: usize) -> Vec<f64> {
    let mut c = vec![0.0; dim];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p.iter()) {
            *ci += pi;
        }
    }
    let n = points.len().max(1) as f64;
    c.iter_mut().for_each(|v| *v /= n);
    c
}

fn centered_singular_values(points: &[&[f64]], center: &[f64]) -> Vec<f64> {
    let dim = center.len();
    let m = DMatrix::from_fn(points.len(), dim, |i, j| points[i][j] - center[j]);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Singular values of growing nearest-neighbour balls around `center` and the
/// log-log slope of each against the ball size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub counts: Vec<usize>,
    pub profiles: Vec<Vec<f64>>,
    pub slopes: Vec<f64>,
    /// Directions growing at least linearly with the ball size and not
    /// negligible at the median ball.
    pub dimension: usize,
}

pub const SCALING_SLOPE: f64 = 0.75;
pub const RELATIVE_SPREAD: f64 = 0.2;

pub fn scaling_test(points: &[&[f64]], center: &[f64], steps: usize) -> Result<ScalingReport> {
    const MIN_BALL: usize = 8;
    let n = points.len();
    if n < 2 * MIN_BALL || steps < 2 {
        return Err(Error::InsufficientPoints { have: n, need: 2 * MIN_BALL });
    }
    let mut sorted: Vec<&[f64]> = points.to_vec();
    sorted.sort_by(|a, b| dist2(a, center).total_cmp(&dist2(b, center)));
    let ratio = (n as f64 / MIN_BALL as f64).powf(1.0 / (steps - 1) as f64);
    let mut counts: Vec<usize> =
        (0..steps).map(|j| ((MIN_BALL as f64) * ratio.powi(j as i32)).round() as usize).map(|c| c.clamp(MIN_BALL, n)).collect();
    counts.dedup();
    let profiles: Vec<Vec<f64>> = counts
        .iter()
        .map(|&c| {
            let ball = &sorted[..c];
            centered_singular_values(ball, &barycenter(ball, center.len()))
        })
        .collect();
    let xs: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let slopes: Vec<f64> = (0..center.len())
        .map(|k| {
            let ys: Vec<f64> = profiles.iter().map(|p| p[k].max(f64::MIN_POSITIVE).ln()).collect();
            least_squares_slope(&xs, &ys)
        })
        .collect();
    let median = &profiles[profiles.len() / 2];
    let dimension = slopes
        .iter()
        .zip(median)
        .filter(|&(&s, &sv)| s >= SCALING_SLOPE && sv >= RELATIVE_SPREAD * median[0])
        .count();
    Ok(ScalingReport { counts, profiles, slopes, dimension })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 { 0.0 } else { sxy / sxx }
}

/// Per-sample chart label; `None` when no chart is close enough.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellAssignment {
    pub times: Vec<f64>,
    pub labels: Vec<Option<String>>,
}

impl CellAssignment {
    pub fn assigned(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Unassigned samples are dropped.
    pub fn to_itinerary(&self) -> Result<Itinerary> {
        Itinerary::new(self.times.iter().zip(&self.labels).filter_map(|(t, l)| l.as_ref().map(|l| (*t, l.clone()))))
    }
}

pub fn assign_cells(traj: &Trajectory, charts: &[LocalChart], max_dist: Option<f64>) -> Result<CellAssignment> {
    assign_cells_with(traj, charts, max_dist, Exec::default())
}

/// Nearest barycenter, ties to the first chart.
pub fn assign_cells_with(
    traj: &Trajectory,
    charts: &[LocalChart],
    max_dist: Option<f64>,
    exec: Exec,
) -> Result<CellAssignment> {
    if charts.is_empty() {
        return Err(Error::EmptyCharts);
    }
    if let Some(c) = charts.iter().find(|c| c.center.len() != traj.dim()) {
        return Err(Error::InvalidParameter(format!(
            "chart {} has dimension {}, trajectory has {}",
            c.label,
            c.center.len(),
            traj.dim()
        )));
    }
    let limit = max_dist.map(|d| d * d);
    let labels = par::map_slice(exec, &traj.points, |p| {
        let (best, d) = charts
            .iter()
            .map(|c| dist2(p, &c.center))
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, d)| if d < acc.1 { (i, d) } else { acc });
        match limit {
            Some(l) if d > l => None,
            _ => Some(charts[best].label.clone()),
        }
    });
    Ok(CellAssignment { times: traj.times.clone(), labels })
}
