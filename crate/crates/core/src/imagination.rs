//! Imagined targets: pixel coordinates, usually outside the frame, that the
//! drone chases to move along a chosen path.
//!
//! An imagined target is always read in the drone's current image frame, so
//! its pixel error never shrinks and the commanded velocity stays constant
//! while the segment is active. Homing replays the recorded motion with every
//! target reflected through the image center.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::VelocityCommand;
use crate::geometry::{image_center, FrameSpec, PixelPoint};
use crate::perception::ColorClass;

/// Distance of the standard imagined markers from the image center.
pub const DEFAULT_OFFSET_PX: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImaginationError {
    #[error("motion log is empty")]
    EmptyLog,
    #[error("segment duration must be positive, got {0}")]
    InvalidDuration(f64),
    #[error("segment distance must be positive, got {0}")]
    InvalidDistance(f64),
    #[error("trajectory needs at least one segment")]
    NoSegments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Right,
    Backward,
    Left,
}

/// The imagined marker `offset_px` from center in `direction`.
pub fn cardinal_target(frame: &FrameSpec, direction: Direction, offset_px: f64) -> PixelPoint {
    let c = image_center(frame);
    match direction {
        Direction::Forward => PixelPoint::new(c.x, c.y - offset_px),
        Direction::Right => PixelPoint::new(c.x + offset_px, c.y),
        Direction::Backward => PixelPoint::new(c.x, c.y + offset_px),
        Direction::Left => PixelPoint::new(c.x - offset_px, c.y),
    }
}

/// `(320, 80)` on the default frame.
pub fn forward_target(frame: &FrameSpec) -> PixelPoint {
    cardinal_target(frame, Direction::Forward, DEFAULT_OFFSET_PX)
}

/// `(320, 280)` on the default frame.
pub fn backward_target(frame: &FrameSpec) -> PixelPoint {
    cardinal_target(frame, Direction::Backward, DEFAULT_OFFSET_PX)
}

/// When an imagined segment ends. Detection is checked before the others.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MarkerDetected(ColorClass),
    /// Seconds. Executed as a whole number of simulation ticks, `round(d / dt)`.
    Duration(f64),
    /// Planar meters traveled since the segment began.
    Distance(f64),
}

impl Termination {
    pub fn validate(&self) -> Result<(), ImaginationError> {
        match *self {
            Termination::Duration(d) if !(d > 0.0 && d.is_finite()) => Err(ImaginationError::InvalidDuration(d)),
            Termination::Distance(d) if !(d > 0.0 && d.is_finite()) => Err(ImaginationError::InvalidDistance(d)),
            _ => Ok(()),
        }
    }

    /// Tick budget for a `Duration` terminator.
    pub fn duration_ticks(&self, dt: f64) -> Option<u64> {
        match *self {
            Termination::Duration(d) => Some(((d / dt).round() as u64).max(1)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImaginedSegment {
    pub target: PixelPoint,
    pub terminate_on: Termination,
}

impl ImaginedSegment {
    pub fn for_duration(target: PixelPoint, seconds: f64) -> Self {
        Self {
            target,
            terminate_on: Termination::Duration(seconds),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ImaginedTrajectory {
    pub segments: Vec<ImaginedSegment>,
}

impl ImaginedTrajectory {
    pub fn new(segments: Vec<ImaginedSegment>) -> Result<Self, ImaginationError> {
        if segments.is_empty() {
            return Err(ImaginationError::NoSegments);
        }
        for s in &segments {
            s.terminate_on.validate()?;
        }
        Ok(Self { segments })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn targets(&self) -> Vec<PixelPoint> {
        self.segments.iter().map(|s| s.target).collect()
    }
}

/// Straight forward search toward the forward imagined marker.
pub fn forward_search(frame: &FrameSpec, duration: f64) -> Result<ImaginedTrajectory, ImaginationError> {
    ImaginedTrajectory::new(vec![ImaginedSegment::for_duration(forward_target(frame), duration)])
}

/// Forward, right, backward, left: one side per cardinal imagined marker.
pub fn square_trajectory(frame: &FrameSpec, side_duration: f64) -> Result<ImaginedTrajectory, ImaginationError> {
    let segments = [
        Direction::Forward,
        Direction::Right,
        Direction::Backward,
        Direction::Left,
    ]
    .into_iter()
    .map(|d| ImaginedSegment::for_duration(cardinal_target(frame, d, DEFAULT_OFFSET_PX), side_duration))
    .collect();
    ImaginedTrajectory::new(segments)
}

/// Segments aimed in uniformly random directions at a fixed pixel offset,
/// snapped to whole pixels; consecutive targets always differ.
pub fn random_trajectory(
    frame: &FrameSpec,
    segments: usize,
    segment_duration: f64,
    offset_px: f64,
    seed: u64,
) -> Result<ImaginedTrajectory, ImaginationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = image_center(frame);
    let mut segs: Vec<ImaginedSegment> = Vec::with_capacity(segments);
    while segs.len() < segments {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        // Whole pixels keep reflection about the center exact.
        let target = PixelPoint::new(
            (c.x + offset_px * theta.cos()).round(),
            (c.y + offset_px * theta.sin()).round(),
        );
        if segs.last().is_some_and(|s| s.target == target) {
            continue;
        }
        segs.push(ImaginedSegment::for_duration(target, segment_duration));
    }
    ImaginedTrajectory::new(segs)
}

/// One run of identical commands toward one target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionEntry {
    pub timestamp: f64,
    pub target: PixelPoint,
    pub command: VelocityCommand,
    pub ticks: u64,
    pub duration: f64,
}

/// Record of the planar motion commanded so far.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MotionLog {
    entries: Vec<MotionEntry>,
}

impl MotionLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[MotionEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Appends one tick of motion. Ticks that continue the previous entry
    /// (same target, same command, contiguous in time) extend it.
    pub fn record(&mut self, timestamp: f64, target: PixelPoint, command: VelocityCommand, dt: f64) {
        if command.is_zero() {
            return;
        }
        if let Some(last) = self.entries.last_mut() {
            let contiguous = (last.timestamp + last.duration - timestamp).abs() <= dt * 1e-6;
            if contiguous && last.target == target && last.command == command {
                last.ticks += 1;
                last.duration = last.ticks as f64 * dt;
                return;
            }
        }
        self.entries.push(MotionEntry {
            timestamp,
            target,
            command,
            ticks: 1,
            duration: dt,
        });
    }

    /// Sum of `command * duration` in the body frame, as `(forward, right)`.
    pub fn body_displacement(&self) -> (f64, f64) {
        self.entries.iter().fold((0.0, 0.0), |(f, r), e| {
            (
                f + e.command.vel_forward * e.duration,
                r + e.command.vel_right * e.duration,
            )
        })
    }
}

/// The homing trajectory for `log`: entries in reverse order, each target
/// reflected through the image center, same duration.
pub fn reverse(log: &MotionLog, frame: &FrameSpec) -> Result<ImaginedTrajectory, ImaginationError> {
    if log.is_empty() {
        return Err(ImaginationError::EmptyLog);
    }
    let c = image_center(frame);
    let segments = log
        .entries()
        .iter()
        .rev()
        .map(|e| ImaginedSegment::for_duration(e.target.reflect_about(c), e.duration))
        .collect();
    ImaginedTrajectory::new(segments)
}
