//! Mission state machines: tracking a visible marker, forward search and
//! hover, search-return-land, and the carrier coordination sortie.
//!
//! Every mission is one FSM. A tick captures a frame, picks a target pixel
//! (a detected marker, the active imagined target, or the home marker), runs
//! the P-controller and fires at most a short chain of transitions. Legal
//! edges:
//!
//! ```text
//! OnCarrier        -> TakingOff
//! TakingOff        -> Searching(0) | Servoing(search)
//! Searching(i)     -> Searching(i+1) | Servoing(search) | Failed(TrajectoryExhausted)
//! Servoing(c)      -> HoveringOnTarget | Searching(i) | Failed(TargetLost)
//! HoveringOnTarget -> Reversing(0)
//! Reversing(i)     -> Reversing(i+1) | ServoingHome | Failed(HomeNotFound)
//! ServoingHome     -> Landing | Failed(HomeLost)
//! Landing          -> Landed
//! any live state   -> Failed(Timeout)
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::{compute_command, pixel_error, PixelError, VelocityCommand};
use crate::geometry::{image_center, GeometryError, GroundPoint, PixelPoint, Pose};
use crate::imagination::{self, ImaginationError, ImaginedSegment, ImaginedTrajectory, MotionLog, Termination};
use crate::perception::{ColorClass, Detection, Frame};
use crate::sim::{self, Observation, SimConfig, SimError, TrajectoryRow, WorldState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MissionError {
    #[error("mission already finished in state {0}")]
    AbsorbingState(FsmState),
    #[error("invalid mission spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Imagination(#[from] ImaginationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissionKind {
    /// Servo onto a marker already in view.
    TrackVisible,
    /// Fly the imagined trajectory until the marker shows up, then hover on it.
    ForwardSearchHover,
    /// Search and hover, retrace the path home, land on the home marker.
    SearchReturnLand,
    /// Ride the carrier to the search site, then search-return-land onto it.
    CarrierCoordination,
}

impl MissionKind {
    pub fn returns_home(self) -> bool {
        matches!(self, MissionKind::SearchReturnLand | MissionKind::CarrierCoordination)
    }

    pub fn searches(self) -> bool {
        !matches!(self, MissionKind::TrackVisible)
    }
}

impl fmt::Display for MissionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            MissionKind::TrackVisible => "track",
            MissionKind::ForwardSearchHover => "forward",
            MissionKind::SearchReturnLand => "return",
            MissionKind::CarrierCoordination => "coordination",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailureReason {
    Timeout,
    TrajectoryExhausted,
    TargetLost,
    HomeNotFound,
    HomeLost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FsmState {
    OnCarrier,
    TakingOff,
    Searching(usize),
    Servoing(ColorClass),
    HoveringOnTarget,
    Reversing(usize),
    ServoingHome,
    Landing,
    Landed,
    Failed(FailureReason),
}

impl FsmState {
    pub fn is_absorbing(self) -> bool {
        matches!(self, FsmState::Landed | FsmState::Failed(_))
    }
}

impl fmt::Display for FsmState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FsmState::OnCarrier => f.write_str("OnCarrier"),
            FsmState::TakingOff => f.write_str("TakingOff"),
            FsmState::Searching(i) => write!(f, "Searching({i})"),
            FsmState::Servoing(c) => write!(f, "Servoing({c})"),
            FsmState::HoveringOnTarget => f.write_str("HoveringOnTarget"),
            FsmState::Reversing(i) => write!(f, "Reversing({i})"),
            FsmState::ServoingHome => f.write_str("ServoingHome"),
            FsmState::Landing => f.write_str("Landing"),
            FsmState::Landed => f.write_str("Landed"),
            FsmState::Failed(r) => write!(f, "Failed({r:?})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub tick: u64,
    pub from: FsmState,
    pub to: FsmState,
}

/// Whether `from -> to` is one of the documented edges.
pub fn is_legal_transition(from: FsmState, to: FsmState) -> bool {
    use FsmState::*;
    if from.is_absorbing() {
        return false;
    }
    if to == Failed(FailureReason::Timeout) {
        return true;
    }
    match (from, to) {
        (OnCarrier, TakingOff) => true,
        (TakingOff, Searching(0)) | (TakingOff, Servoing(_)) => true,
        (Searching(i), Searching(j)) => j == i + 1,
        (Searching(_), Servoing(_)) => true,
        (Searching(_), Failed(FailureReason::TrajectoryExhausted)) => true,
        (Servoing(_), HoveringOnTarget) => true,
        (Servoing(_), Searching(_)) => true,
        (Servoing(_), Failed(FailureReason::TargetLost)) => true,
        (HoveringOnTarget, Reversing(0)) => true,
        (Reversing(i), Reversing(j)) => j == i + 1,
        (Reversing(_), ServoingHome) => true,
        (Reversing(_), Failed(FailureReason::HomeNotFound)) => true,
        (ServoingHome, Landing) => true,
        (ServoingHome, Failed(FailureReason::HomeLost)) => true,
        (Landing, Landed) => true,
        _ => false,
    }
}

/// Checks every edge and that consecutive transitions chain.
pub fn audit_transitions(transitions: &[Transition]) -> Result<(), Transition> {
    let mut prev: Option<FsmState> = None;
    for t in transitions {
        if !is_legal_transition(t.from, t.to) || prev.is_some_and(|p| p != t.from) {
            return Err(*t);
        }
        prev = Some(t.to);
    }
    Ok(())
}

/// Timing knobs for the behaviors around the core controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MissionParams {
    /// Seconds spent hovering on the found marker before heading home.
    pub hover_dwell: f64,
    /// Pixel radius that counts as centered on the home marker.
    pub land_threshold: f64,
    /// Consecutive centered ticks required before descending.
    pub land_dwell: u32,
    pub ascent_rate: f64,
    pub descent_rate: f64,
    /// Ticks without a detection tolerated while servoing.
    pub lost_patience: u32,
}

impl Default for MissionParams {
    fn default() -> Self {
        Self {
            hover_dwell: 1.0,
            land_threshold: 20.0,
            land_dwell: 5,
            ascent_rate: 0.5,
            descent_rate: 0.3,
            lost_patience: 10,
        }
    }
}

pub const DEFAULT_TIMEOUT_S: f64 = 120.0;
/// Long enough to cover several meters at the standard imagined-target speed.
pub const DEFAULT_SEARCH_DURATION_S: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionSpec {
    pub kind: MissionKind,
    pub search_color: ColorClass,
    pub home_color: Option<ColorClass>,
    pub trajectory: ImaginedTrajectory,
    pub timeout: f64,
    pub params: MissionParams,
}

impl MissionSpec {
    pub fn new(kind: MissionKind, search_color: ColorClass, trajectory: ImaginedTrajectory) -> Self {
        Self {
            kind,
            search_color,
            home_color: kind.returns_home().then_some(ColorClass::Blue),
            trajectory,
            timeout: DEFAULT_TIMEOUT_S,
            params: MissionParams::default(),
        }
    }

    pub fn track_visible(search_color: ColorClass) -> Self {
        Self::new(MissionKind::TrackVisible, search_color, ImaginedTrajectory::default())
    }

    /// A `kind` mission flying the standard forward search toward the
    /// `(320, 80)`-style imagined marker.
    pub fn forward(kind: MissionKind, cfg: &SimConfig) -> Self {
        let trajectory = if kind.searches() {
            imagination::forward_search(&cfg.frame, DEFAULT_SEARCH_DURATION_S).expect("positive duration")
        } else {
            ImaginedTrajectory::default()
        };
        Self::new(kind, ColorClass::Pink, trajectory)
    }

    pub fn validate(&self) -> Result<(), MissionError> {
        if !(self.timeout > 0.0 && self.timeout.is_finite()) {
            return Err(MissionError::InvalidSpec(format!(
                "timeout must be positive, got {}",
                self.timeout
            )));
        }
        if self.kind.returns_home() && self.home_color.is_none() {
            return Err(MissionError::InvalidSpec(format!(
                "{} mission needs a home color",
                self.kind
            )));
        }
        if self.kind.searches() && self.trajectory.is_empty() {
            return Err(MissionError::InvalidSpec(
                "search mission needs a non-empty trajectory".into(),
            ));
        }
        for s in &self.trajectory.segments {
            s.terminate_on.validate()?;
        }
        let p = &self.params;
        if !(p.hover_dwell >= 0.0 && p.land_threshold >= 0.0 && p.ascent_rate > 0.0 && p.descent_rate > 0.0) {
            return Err(MissionError::InvalidSpec("mission params out of range".into()));
        }
        Ok(())
    }

    /// The state in which this mission counts as accomplished.
    pub fn goal_state(&self) -> FsmState {
        if self.kind.returns_home() {
            FsmState::Landed
        } else {
            FsmState::HoveringOnTarget
        }
    }

    fn first_airborne_state(&self) -> FsmState {
        if self.kind.searches() {
            FsmState::Searching(0)
        } else {
            FsmState::Servoing(self.search_color)
        }
    }
}

/// What a tick decided.
#[derive(Debug, Clone)]
pub struct TickOutput {
    pub command: VelocityCommand,
    /// Vertical rate, m/s, positive up.
    pub climb_rate: f64,
    pub target: Option<PixelPoint>,
    /// The detection that produced the target, if the target was a real marker.
    pub detection: Option<Detection>,
    pub error: Option<PixelError>,
    pub observation: Option<Observation>,
}

impl TickOutput {
    fn idle() -> Self {
        Self {
            command: VelocityCommand::IDLE,
            climb_rate: 0.0,
            target: None,
            detection: None,
            error: None,
            observation: None,
        }
    }

    fn hold() -> Self {
        Self {
            command: VelocityCommand::HOVER,
            ..Self::idle()
        }
    }
}

/// Progress through one imagined segment.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct SegmentProgress {
    ticks: u64,
    start: GroundPoint,
}

impl SegmentProgress {
    fn at(pose: &Pose) -> Self {
        Self {
            ticks: 0,
            start: pose.ground(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionState {
    pub fsm: FsmState,
    /// Planar motion since takeoff, used to retrace the path home.
    pub log: MotionLog,
    /// Always `ticks * dt`.
    pub elapsed: f64,
    pub ticks: u64,
    pub transitions: Vec<Transition>,
    segment: SegmentProgress,
    resume_segment: usize,
    lost_ticks: u32,
    hover_ticks: u64,
    settled_ticks: u32,
    return_path: Option<ImaginedTrajectory>,
}

impl MissionState {
    /// Starts on the carrier when the drone is grounded, otherwise directly in
    /// the first airborne behavior.
    pub fn new(spec: &MissionSpec, world: &WorldState) -> Self {
        let fsm = if world.is_airborne() {
            spec.first_airborne_state()
        } else {
            FsmState::OnCarrier
        };
        Self {
            fsm,
            log: MotionLog::new(),
            elapsed: 0.0,
            ticks: 0,
            transitions: Vec::new(),
            segment: SegmentProgress::at(&world.drone),
            resume_segment: 0,
            lost_ticks: 0,
            hover_ticks: 0,
            settled_ticks: 0,
            return_path: None,
        }
    }

    fn go(&mut self, to: FsmState) {
        self.transitions.push(Transition {
            tick: self.ticks,
            from: self.fsm,
            to,
        });
        self.fsm = to;
    }

    /// One FSM evaluation. Does not advance the world; feed the returned
    /// command to [`sim::step_with_climb`].
    pub fn tick(
        &mut self,
        spec: &MissionSpec,
        world: &mut WorldState,
        cfg: &SimConfig,
    ) -> Result<TickOutput, MissionError> {
        if self.fsm.is_absorbing() {
            return Err(MissionError::AbsorbingState(self.fsm));
        }
        if self.elapsed >= spec.timeout {
            self.go(FsmState::Failed(FailureReason::Timeout));
            return Ok(TickOutput::hold());
        }
        let mut obs: Option<Observation> = None;
        let out = self.evaluate(spec, world, cfg, &mut obs)?;
        self.ticks += 1;
        self.elapsed = self.ticks as f64 * cfg.dt;
        Ok(TickOutput {
            observation: obs,
            ..out
        })
    }

    fn evaluate(
        &mut self,
        spec: &MissionSpec,
        world: &mut WorldState,
        cfg: &SimConfig,
        obs: &mut Option<Observation>,
    ) -> Result<TickOutput, MissionError> {
        let center = image_center(&cfg.frame);
        let land_gains = cfg.gains.with_hover_threshold(spec.params.land_threshold);
        let p = spec.params;

        // A tick walks a handful of transitions at most; the bound only guards bugs.
        for _ in 0..16 {
            match self.fsm {
                FsmState::OnCarrier => {
                    if !world.carrier.is_idle() {
                        return Ok(TickOutput::idle());
                    }
                    world.apply_takeoff_jitter(cfg.noise.takeoff_jitter_std);
                    self.go(FsmState::TakingOff);
                }
                FsmState::TakingOff => {
                    if world.drone.z >= cfg.altitude - 1e-9 {
                        self.segment = SegmentProgress::at(&world.drone);
                        self.go(spec.first_airborne_state());
                        continue;
                    }
                    return Ok(TickOutput {
                        climb_rate: p.ascent_rate,
                        ..TickOutput::idle()
                    });
                }
                FsmState::Searching(i) => {
                    let seen = observe(obs, world, cfg)?.detect(spec.search_color);
                    if seen.is_some() {
                        self.resume_segment = i;
                        self.lost_ticks = 0;
                        self.go(FsmState::Servoing(spec.search_color));
                        continue;
                    }
                    let seg = spec.trajectory.segments[i];
                    if self.segment_done(&seg, world, cfg, obs)? {
                        self.segment = SegmentProgress::at(&world.drone);
                        if i + 1 < spec.trajectory.len() {
                            self.go(FsmState::Searching(i + 1));
                            continue;
                        }
                        self.go(FsmState::Failed(FailureReason::TrajectoryExhausted));
                        return Ok(TickOutput::hold());
                    }
                    let out = self.chase_imagined(seg.target, center, cfg);
                    self.log.record(world.time, seg.target, out.command, cfg.dt);
                    return Ok(out);
                }
                FsmState::Servoing(color) => match observe(obs, world, cfg)?.detect(color) {
                    Some(d) => {
                        self.lost_ticks = 0;
                        let err = pixel_error(d.center, center);
                        let cmd = compute_command(err, &cfg.gains);
                        if cmd.hovering {
                            self.hover_ticks = 0;
                            self.go(FsmState::HoveringOnTarget);
                            continue;
                        }
                        self.log.record(world.time, d.center, cmd, cfg.dt);
                        return Ok(servo_output(cmd, d, err, 0.0));
                    }
                    None => {
                        self.lost_ticks += 1;
                        if self.lost_ticks > p.lost_patience {
                            if spec.kind.searches() {
                                self.go(FsmState::Searching(self.resume_segment));
                            } else {
                                self.go(FsmState::Failed(FailureReason::TargetLost));
                                return Ok(TickOutput::hold());
                            }
                            continue;
                        }
                        return Ok(TickOutput::hold());
                    }
                },
                FsmState::HoveringOnTarget => {
                    let dwell_ticks = (p.hover_dwell / cfg.dt).round() as u64;
                    if spec.kind.returns_home() && self.hover_ticks >= dwell_ticks {
                        self.return_path = match imagination::reverse(&self.log, &cfg.frame) {
                            Ok(t) => Some(t),
                            Err(ImaginationError::EmptyLog) => None,
                            Err(e) => return Err(e.into()),
                        };
                        self.segment = SegmentProgress::at(&world.drone);
                        self.go(FsmState::Reversing(0));
                        continue;
                    }
                    self.hover_ticks += 1;
                    return match observe(obs, world, cfg)?.detect(spec.search_color) {
                        Some(d) => {
                            let err = pixel_error(d.center, center);
                            let cmd = compute_command(err, &cfg.gains);
                            self.log.record(world.time, d.center, cmd, cfg.dt);
                            Ok(servo_output(cmd, d, err, 0.0))
                        }
                        None => Ok(TickOutput::hold()),
                    };
                }
                FsmState::Reversing(i) => {
                    let home = spec.home_color.expect("validated");
                    if observe(obs, world, cfg)?.detect(home).is_some() {
                        self.lost_ticks = 0;
                        self.settled_ticks = 0;
                        self.go(FsmState::ServoingHome);
                        continue;
                    }
                    let Some(seg) = self.return_path.as_ref().and_then(|t| t.segments.get(i)).copied() else {
                        self.go(FsmState::Failed(FailureReason::HomeNotFound));
                        return Ok(TickOutput::hold());
                    };
                    if self.segment_done(&seg, world, cfg, obs)? {
                        self.segment = SegmentProgress::at(&world.drone);
                        let remaining = self.return_path.as_ref().map_or(0, |t| t.len());
                        if i + 1 < remaining {
                            self.go(FsmState::Reversing(i + 1));
                            continue;
                        }
                        self.go(FsmState::Failed(FailureReason::HomeNotFound));
                        return Ok(TickOutput::hold());
                    }
                    return Ok(self.chase_imagined(seg.target, center, cfg));
                }
                FsmState::ServoingHome => {
                    let home = spec.home_color.expect("validated");
                    match observe(obs, world, cfg)?.detect(home) {
                        Some(d) => {
                            self.lost_ticks = 0;
                            let err = pixel_error(d.center, center);
                            if err.norm() <= p.land_threshold {
                                self.settled_ticks += 1;
                            } else {
                                self.settled_ticks = 0;
                            }
                            if self.settled_ticks >= p.land_dwell {
                                self.go(FsmState::Landing);
                                continue;
                            }
                            let cmd = compute_command(err, &land_gains);
                            return Ok(servo_output(cmd, d, err, 0.0));
                        }
                        None => {
                            self.lost_ticks += 1;
                            self.settled_ticks = 0;
                            if self.lost_ticks > p.lost_patience {
                                self.go(FsmState::Failed(FailureReason::HomeLost));
                            }
                            return Ok(TickOutput::hold());
                        }
                    }
                }
                FsmState::Landing => {
                    if !world.is_airborne() {
                        self.go(FsmState::Landed);
                        return Ok(TickOutput::idle());
                    }
                    let home = spec.home_color.expect("validated");
                    return match observe(obs, world, cfg)?.detect(home) {
                        Some(d) => {
                            let err = pixel_error(d.center, center);
                            let cmd = compute_command(err, &land_gains);
                            Ok(servo_output(cmd, d, err, -p.descent_rate))
                        }
                        None => Ok(TickOutput {
                            climb_rate: -p.descent_rate,
                            ..TickOutput::hold()
                        }),
                    };
                }
                FsmState::Landed | FsmState::Failed(_) => return Ok(TickOutput::hold()),
            }
        }
        unreachable!("transition chain did not settle in state {}", self.fsm)
    }

    fn chase_imagined(&mut self, target: PixelPoint, center: PixelPoint, cfg: &SimConfig) -> TickOutput {
        let err = pixel_error(target, center);
        let command = compute_command(err, &cfg.gains);
        self.segment.ticks += 1;
        TickOutput {
            command,
            target: Some(target),
            error: Some(err),
            ..TickOutput::idle()
        }
    }

    fn segment_done(
        &self,
        seg: &ImaginedSegment,
        world: &WorldState,
        cfg: &SimConfig,
        obs: &mut Option<Observation>,
    ) -> Result<bool, MissionError> {
        Ok(match seg.terminate_on {
            Termination::MarkerDetected(color) => observe(obs, world, cfg)?.detect(color).is_some(),
            Termination::Duration(_) => {
                self.segment.ticks >= seg.terminate_on.duration_ticks(cfg.dt).expect("duration")
            }
            Termination::Distance(d) => world.drone.ground().distance_to(self.segment.start) >= d,
        })
    }
}

fn observe<'a>(
    slot: &'a mut Option<Observation>,
    world: &WorldState,
    cfg: &SimConfig,
) -> Result<&'a Observation, GeometryError> {
    if slot.is_none() {
        *slot = Some(sim::observe(world, cfg)?);
    }
    Ok(slot.as_ref().expect("just filled"))
}

fn servo_output(command: VelocityCommand, d: Detection, err: PixelError, climb_rate: f64) -> TickOutput {
    TickOutput {
        command,
        climb_rate,
        target: Some(d.center),
        detection: Some(d),
        error: Some(err),
        observation: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    Failed(FailureReason),
}

impl Outcome {
    pub fn is_success(self) -> bool {
        self == Outcome::Success
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Success => f.write_str("success"),
            Outcome::Failed(r) => write!(f, "failed:{r:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionResult {
    pub outcome: Outcome,
    pub elapsed: f64,
    pub ticks: u64,
    pub final_pose: Pose,
    pub final_state: FsmState,
    pub rows: Vec<TrajectoryRow>,
    pub transitions: Vec<Transition>,
    pub log: MotionLog,
}

/// Runs `spec` to completion.
pub fn run(spec: &MissionSpec, world: WorldState, cfg: &SimConfig) -> Result<MissionResult, MissionError> {
    run_observed(spec, world, cfg, |_, _| {})
}

/// Like [`run`], calling `on_tick` with each row and the frame it was decided
/// on (when a frame was rendered that tick).
pub fn run_observed<F>(
    spec: &MissionSpec,
    mut world: WorldState,
    cfg: &SimConfig,
    mut on_tick: F,
) -> Result<MissionResult, MissionError>
where
    F: FnMut(&TrajectoryRow, Option<&Frame>),
{
    spec.validate()?;
    cfg.validate()?;
    let goal = spec.goal_state();
    let mut state = MissionState::new(spec, &world);
    let mut rows = Vec::new();

    while state.fsm != goal && !state.fsm.is_absorbing() {
        let step = world.steps;
        let time_s = world.time;
        let out = state.tick(spec, &mut world, cfg)?;
        let row = TrajectoryRow {
            step,
            time_s,
            drone_x: world.drone.x,
            drone_y: world.drone.y,
            drone_z: world.drone.z,
            vel_fwd: out.command.vel_forward,
            vel_right: out.command.vel_right,
            fsm_state: state.fsm.to_string(),
            detected_color: out.detection.map(|d| d.color),
            err_px: out.error.map(|e| e.norm()),
        };
        on_tick(&row, out.observation.as_ref().and_then(Observation::frame));
        rows.push(row);
        if state.fsm == goal || state.fsm.is_absorbing() {
            break;
        }
        sim::step_with_climb(&mut world, &out.command, out.climb_rate, cfg);
    }

    let outcome = match state.fsm {
        FsmState::Failed(r) => Outcome::Failed(r),
        _ => Outcome::Success,
    };
    Ok(MissionResult {
        outcome,
        elapsed: state.elapsed,
        ticks: state.ticks,
        final_pose: world.drone,
        final_state: state.fsm,
        rows,
        transitions: state.transitions,
        log: state.log,
    })
}

/// Flies `trajectory` open loop (no perception) and returns the motion log.
/// Segments ending on marker detection are not supported here and end at once.
pub fn fly_trajectory(
    world: &mut WorldState,
    trajectory: &ImaginedTrajectory,
    cfg: &SimConfig,
) -> Result<MotionLog, MissionError> {
    cfg.validate()?;
    let center = image_center(&cfg.frame);
    let mut log = MotionLog::new();
    for seg in &trajectory.segments {
        seg.terminate_on.validate()?;
        let start = world.drone.ground();
        let mut ticks = 0u64;
        loop {
            let done = match seg.terminate_on {
                Termination::Duration(_) => ticks >= seg.terminate_on.duration_ticks(cfg.dt).expect("duration"),
                Termination::Distance(d) => world.drone.ground().distance_to(start) >= d,
                Termination::MarkerDetected(_) => true,
            };
            if done {
                break;
            }
            let cmd = compute_command(pixel_error(seg.target, center), &cfg.gains);
            log.record(world.time, seg.target, cmd, cfg.dt);
            sim::step(world, &cmd, cfg);
            ticks += 1;
        }
    }
    Ok(log)
}
