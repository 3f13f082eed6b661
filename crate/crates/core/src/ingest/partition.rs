//! Flow partitions matching the bundled Rössler and Lorenz templexes.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{CellAssignment, Trajectory};
use crate::error::{Error, Result};

fn require_3d(traj: &Trajectory) -> Result<()> {
    if traj.dim() != 3 {
        return Err(Error::InvalidParameter(format!("expected a 3-dimensional trajectory, got {}", traj.dim())));
    }
    Ok(())
}

/// Loops run between successive crossings of the half-plane x = 0, y > 0
/// (the joining locus). A loop reaching above half the record's peak z takes
/// the folding branch (node 4), otherwise the inner branch (node 3). Samples
/// outside the first and last crossing stay unassigned.
pub fn rossler_partition(traj: &Trajectory) -> Result<CellAssignment> {
    require_3d(traj)?;
    let p = &traj.points;
    let crossings: Vec<usize> = (1..p.len()).filter(|&j| p[j - 1][0] > 0.0 && p[j][0] <= 0.0 && p[j][1] > 0.0).collect();
    let mut labels = vec![None; p.len()];
    if crossings.len() < 2 {
        return Ok(CellAssignment { times: traj.times.clone(), labels });
    }
    let (first, last) = (crossings[0], crossings[crossings.len() - 1]);
    let z_peak = p[first..last].iter().map(|q| q[2]).fold(f64::NEG_INFINITY, f64::max);
    for w in crossings.windows(2) {
        let outer = p[w[0]..w[1]].iter().any(|q| q[2] > 0.5 * z_peak);
        let mut stage = 0;
        for j in w[0]..w[1] {
            let theta = p[j][1].atan2(p[j][0]);
            let s = if (FRAC_PI_2..=PI).contains(&theta) {
                0
            } else if theta < -FRAC_PI_2 {
                1
            } else {
                2
            };
            stage = stage.max(s);
            labels[j] = Some(match stage {
                0 => "1",
                1 => "2",
                _ if outer => "4",
                _ => "3",
            }
            .to_string());
        }
    }
    Ok(CellAssignment { times: traj.times.clone(), labels })
}

/// Loops run between successive maxima of z; the wing is the sign of x at the
/// maximum. Each loop is cut into time thirds: nodes 1, 2 then 3 (stay) or 4
/// (switch) on the x < 0 wing, 5, 6 then 7 or 8 on the other.
pub fn lorenz_partition(traj: &Trajectory) -> Result<CellAssignment> {
    require_3d(traj)?;
    let p = &traj.points;
    let maxima: Vec<usize> = (1..p.len().saturating_sub(1)).filter(|&j| p[j - 1][2] < p[j][2] && p[j][2] >= p[j + 1][2]).collect();
    let mut labels = vec![None; p.len()];
    for w in maxima.windows(2) {
        let (a, b) = (w[0], w[1]);
        let left = p[a][0] < 0.0;
        let stays = (p[b][0] < 0.0) == left;
        let base = if left { 1 } else { 5 };
        let span = traj.times[b] - traj.times[a];
        for j in a..b {
            let frac = (traj.times[j] - traj.times[a]) / span;
            let offset = if frac < 1.0 / 3.0 {
                0
            } else if frac < 2.0 / 3.0 {
                1
            } else if stays {
                2
            } else {
                3
            };
            labels[j] = Some((base + offset).to_string());
        }
    }
    Ok(CellAssignment { times: traj.times.clone(), labels })
}
