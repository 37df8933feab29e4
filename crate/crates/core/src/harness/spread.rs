//! How far the homeward leg strays from the outbound line.

use std::io::Read;

use crate::geometry::GroundPoint;
use crate::sim::{TrajectoryRow, TRAJECTORY_HEADER};

use super::HarnessError;

fn phase(row: &TrajectoryRow) -> &str {
    row.fsm_state.split('(').next().unwrap_or("")
}

fn position(row: &TrajectoryRow) -> GroundPoint {
    GroundPoint::new(row.drone_x, row.drone_y)
}

/// Maximum perpendicular distance of the return leg (reversing, homing and
/// landing rows) from the line through the search start and the first
/// hover position over the found marker.
pub fn path_spread(rows: &[TrajectoryRow]) -> Result<f64, HarnessError> {
    let start = rows
        .iter()
        .find(|r| phase(r) == "Searching")
        .map(position)
        .ok_or_else(|| HarnessError::MalformedLog("no Searching phase".into()))?;
    let marker = rows
        .iter()
        .find(|r| phase(r) == "HoveringOnTarget")
        .map(position)
        .ok_or_else(|| HarnessError::MalformedLog("no HoveringOnTarget phase".into()))?;
    let mut leg = rows
        .iter()
        .filter(|r| matches!(phase(r), "Reversing" | "ServoingHome" | "Landing" | "Landed"))
        .map(position)
        .peekable();
    if leg.peek().is_none() {
        return Err(HarnessError::MalformedLog("no return leg".into()));
    }

    let (ux, uy) = (marker.x - start.x, marker.y - start.y);
    let len = ux.hypot(uy);
    let spread = leg
        .map(|p| {
            let (px, py) = (p.x - start.x, p.y - start.y);
            if len < 1e-12 {
                px.hypot(py)
            } else {
                (ux * py - uy * px).abs() / len
            }
        })
        .fold(0.0, f64::max);
    Ok(spread)
}

/// Parses a trajectory CSV, insisting on the full column set.
pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Vec<TrajectoryRow>, HarnessError> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| HarnessError::MalformedLog(e.to_string()))?
        .clone();
    for col in TRAJECTORY_HEADER {
        if !headers.iter().any(|h| h == col) {
            return Err(HarnessError::MalformedLog(format!("missing column `{col}`")));
        }
    }
    reader
        .deserialize()
        .collect::<Result<Vec<TrajectoryRow>, _>>()
        .map_err(|e| HarnessError::MalformedLog(e.to_string()))
}

pub fn path_spread_csv<R: Read>(input: R) -> Result<f64, HarnessError> {
    path_spread(&read_trajectory_csv(input)?)
}
