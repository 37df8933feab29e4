//! Discrete-time world: first-order drone kinematics with drift noise, a
//! scripted carrier robot, and the bottom-camera feed.
//!
//! Randomness comes from a `ChaCha8Rng` seeded with a 64-bit seed and stored
//! inside [`WorldState`], so a cloned world replays identically.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::{ControllerGains, VelocityCommand};
use crate::geometry::{self, FrameSpec, GeometryError, GroundPoint, PixelPoint, Pose};
use crate::perception::{self, ColorClass, Detection, Frame, Marker, DEFAULT_MIN_BLOB_SIZE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("discrete P-loop is unstable: dt * k * focal / altitude = {0} (must be < 1)")]
    Unstable(f64),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseModel {
    /// Per-axis standard deviation of the white velocity perturbation, m/s.
    pub drift_std: f64,
    /// Per-axis standard deviation of the position kick at liftoff, m.
    pub takeoff_jitter_std: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        drift_std: 0.0,
        takeoff_jitter_std: 0.0,
    };

    pub fn is_zero(&self) -> bool {
        self.drift_std == 0.0 && self.takeoff_jitter_std == 0.0
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            drift_std: 0.01,
            takeoff_jitter_std: 0.05,
        }
    }
}

/// Where marker detections come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerceptionMode {
    /// Render a labeled frame and threshold it.
    #[default]
    Rendered,
    /// Project marker centers directly. Skips pixel quantization.
    GroundTruth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub dt: f64,
    pub frame: FrameSpec,
    pub gains: ControllerGains,
    pub noise: NoiseModel,
    /// Cruise altitude above the marker plane, m.
    pub altitude: f64,
    pub perception: PerceptionMode,
    pub min_blob_size: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            frame: FrameSpec::default(),
            gains: ControllerGains::default(),
            noise: NoiseModel::default(),
            altitude: 1.0,
            perception: PerceptionMode::Rendered,
            min_blob_size: DEFAULT_MIN_BLOB_SIZE,
        }
    }
}

impl SimConfig {
    pub fn noiseless() -> Self {
        Self {
            noise: NoiseModel::NONE,
            ..Self::default()
        }
    }

    /// `dt * k * focal / altitude`: per-step fraction of pixel error removed
    /// while servoing on a static target.
    pub fn loop_gain(&self) -> f64 {
        self.dt * self.gains.k * self.frame.focal_length / self.altitude
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SimError::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.frame.is_valid() {
            return Err(SimError::InvalidConfig(
                "frame dimensions and focal length must be positive".into(),
            ));
        }
        if !self.gains.is_valid() {
            return Err(SimError::InvalidConfig("controller gains out of range".into()));
        }
        if !(self.noise.drift_std >= 0.0 && self.noise.takeoff_jitter_std >= 0.0)
            || !self.noise.drift_std.is_finite()
            || !self.noise.takeoff_jitter_std.is_finite()
        {
            return Err(SimError::InvalidConfig(
                "noise levels must be finite and non-negative".into(),
            ));
        }
        if !(self.altitude > 0.0 && self.altitude.is_finite()) {
            return Err(SimError::InvalidConfig(format!(
                "altitude must be positive, got {}",
                self.altitude
            )));
        }
        let g = self.loop_gain();
        if g.is_nan() || g >= 1.0 {
            return Err(SimError::Unstable(g));
        }
        Ok(())
    }
}

/// The ground robot that carries the drone and wears the landing marker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Carrier {
    pub pose: Pose,
    /// Waypoints still to visit, in order.
    pub path: Vec<GroundPoint>,
    /// m/s along the path.
    pub speed: f64,
    pub marker_radius: f64,
    pub marker_color: ColorClass,
}

impl Carrier {
    pub fn parked_at(position: GroundPoint) -> Self {
        Self {
            pose: Pose::new(position.x, position.y, 0.0, 0.0),
            path: Vec::new(),
            speed: 0.5,
            marker_radius: 0.15,
            marker_color: ColorClass::Blue,
        }
    }

    pub fn with_path(mut self, path: Vec<GroundPoint>, speed: f64) -> Self {
        self.path = path;
        self.speed = speed;
        self
    }

    pub fn landing_marker(&self) -> Marker {
        Marker::new(self.pose.ground(), self.marker_radius, self.marker_color)
    }

    pub fn is_idle(&self) -> bool {
        self.path.is_empty()
    }

    /// Moves toward the next waypoint, returns the planar displacement.
    fn advance(&mut self, dt: f64) -> (f64, f64) {
        let Some(next) = self.path.first().copied() else {
            return (0.0, 0.0);
        };
        let here = self.pose.ground();
        let remaining = here.distance_to(next);
        let reach = self.speed * dt;
        let (dx, dy) = if remaining <= reach {
            self.path.remove(0);
            (next.x - here.x, next.y - here.y)
        } else {
            let s = reach / remaining;
            ((next.x - here.x) * s, (next.y - here.y) * s)
        };
        self.pose.x += dx;
        self.pose.y += dy;
        (dx, dy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub drone: Pose,
    pub carrier: Carrier,
    pub markers: Vec<Marker>,
    /// Number of completed steps.
    pub steps: u64,
    /// Simulated seconds, always `steps * dt`.
    pub time: f64,
    rng: ChaCha8Rng,
}

impl WorldState {
    pub fn new(drone: Pose, carrier: Carrier, markers: Vec<Marker>, seed: u64) -> Self {
        Self {
            drone,
            carrier,
            markers,
            steps: 0,
            time: 0.0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Drone sitting on the carrier's deck, directly over its marker.
    pub fn on_carrier(carrier: Carrier, markers: Vec<Marker>, seed: u64) -> Self {
        let drone = Pose::new(carrier.pose.x, carrier.pose.y, 0.0, 0.0);
        Self::new(drone, carrier, markers, seed)
    }

    pub fn is_airborne(&self) -> bool {
        self.drone.z > 0.0
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Everything the bottom camera can see.
    pub fn visible_markers(&self) -> Vec<Marker> {
        let mut all = self.markers.clone();
        all.push(self.carrier.landing_marker());
        all
    }

    /// Displaces the drone by a Gaussian sample per axis. Used once at liftoff.
    pub fn apply_takeoff_jitter(&mut self, std: f64) {
        if std > 0.0 {
            let normal = Normal::new(0.0, std).expect("finite non-negative std");
            self.drone.x += normal.sample(&mut self.rng);
            self.drone.y += normal.sample(&mut self.rng);
        }
    }
}

/// Altitudes below this count as touchdown.
const TOUCHDOWN_EPS: f64 = 1e-9;

/// Planar step: integrates `cmd` for one `dt`.
pub fn step(world: &mut WorldState, cmd: &VelocityCommand, cfg: &SimConfig) {
    step_with_climb(world, cmd, 0.0, cfg);
}

/// One step with a vertical rate (m/s, positive up), used for takeoff and landing.
///
/// While grounded the drone rides the carrier. Airborne, the drone moves by the
/// body-to-world rotated command plus a drift sample, times `dt`.
pub fn step_with_climb(world: &mut WorldState, cmd: &VelocityCommand, climb_rate: f64, cfg: &SimConfig) {
    let (cdx, cdy) = world.carrier.advance(cfg.dt);

    let mut z = world.drone.z + climb_rate * cfg.dt;
    if climb_rate > 0.0 {
        z = z.min(cfg.altitude.max(world.drone.z));
    }
    if z <= TOUCHDOWN_EPS {
        z = 0.0;
    }

    if z > 0.0 {
        let (vx, vy) = world.drone.body_to_world(cmd.vel_forward, cmd.vel_right);
        let (nx, ny) = if cfg.noise.drift_std > 0.0 {
            let normal = Normal::new(0.0, cfg.noise.drift_std).expect("finite non-negative std");
            (normal.sample(&mut world.rng), normal.sample(&mut world.rng))
        } else {
            (0.0, 0.0)
        };
        world.drone.x += (vx + nx) * cfg.dt;
        world.drone.y += (vy + ny) * cfg.dt;
    } else {
        world.drone.x += cdx;
        world.drone.y += cdy;
    }
    world.drone.z = z;
    world.steps += 1;
    world.time = world.steps as f64 * cfg.dt;
}

/// Renders the bottom-camera frame, landing marker included.
pub fn capture(world: &WorldState, cfg: &SimConfig) -> Result<Frame, GeometryError> {
    perception::render(&world.drone, &world.visible_markers(), &cfg.frame)
}

/// A single camera sample that can be queried for several colors.
#[derive(Debug, Clone)]
pub enum Observation {
    Rendered {
        frame: Frame,
        min_blob_size: usize,
    },
    GroundTruth {
        centers: Vec<(ColorClass, PixelPoint, usize)>,
    },
}

impl Observation {
    pub fn detect(&self, color: ColorClass) -> Option<Detection> {
        match self {
            Observation::Rendered { frame, min_blob_size } => perception::detect(frame, color, *min_blob_size),
            Observation::GroundTruth { centers } => {
                let hits: Vec<_> = centers.iter().filter(|(c, _, _)| *c == color).collect();
                if hits.is_empty() {
                    return None;
                }
                let n = hits.len() as f64;
                let x = hits.iter().map(|h| h.1.x).sum::<f64>() / n;
                let y = hits.iter().map(|h| h.1.y).sum::<f64>() / n;
                Some(Detection {
                    color,
                    center: PixelPoint::new(x, y),
                    pixel_count: hits.iter().map(|h| h.2).sum(),
                })
            }
        }
    }

    pub fn frame(&self) -> Option<&Frame> {
        match self {
            Observation::Rendered { frame, .. } => Some(frame),
            Observation::GroundTruth { .. } => None,
        }
    }
}

pub fn observe(world: &WorldState, cfg: &SimConfig) -> Result<Observation, GeometryError> {
    match cfg.perception {
        PerceptionMode::Rendered => Ok(Observation::Rendered {
            frame: capture(world, cfg)?,
            min_blob_size: cfg.min_blob_size,
        }),
        PerceptionMode::GroundTruth => {
            let mut centers = Vec::new();
            for m in world.visible_markers() {
                let p = geometry::project(&world.drone, m.position, &cfg.frame)?;
                if geometry::in_frame(p, &cfg.frame) {
                    let r = cfg.frame.focal_length * m.radius / world.drone.z;
                    let area = (std::f64::consts::PI * r * r).round().max(1.0) as usize;
                    centers.push((m.color, p, area));
                }
            }
            Ok(Observation::GroundTruth { centers })
        }
    }
}

/// One row of the per-step trajectory export.
///
/// Column order is the CSV header:
/// `step,time_s,drone_x,drone_y,drone_z,vel_fwd,vel_right,fsm_state,detected_color,err_px`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub step: u64,
    pub time_s: f64,
    pub drone_x: f64,
    pub drone_y: f64,
    pub drone_z: f64,
    pub vel_fwd: f64,
    pub vel_right: f64,
    pub fsm_state: String,
    pub detected_color: Option<ColorClass>,
    pub err_px: Option<f64>,
}

pub const TRAJECTORY_HEADER: [&str; 10] = [
    "step",
    "time_s",
    "drone_x",
    "drone_y",
    "drone_z",
    "vel_fwd",
    "vel_right",
    "fsm_state",
    "detected_color",
    "err_px",
];

pub fn write_trajectory_csv<W: std::io::Write>(rows: &[TrajectoryRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(TRAJECTORY_HEADER)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
