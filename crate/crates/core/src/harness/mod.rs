//! N-trial experiment campaigns: seeded trials, timing statistics and the
//! CSV/text artifacts they leave behind.
//!
//! Trial `i` of a campaign runs with seed `base_seed + i` (wrapping). Trials
//! may run on a thread pool; results are always merged in trial order.

mod spread;
mod stats;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GroundPoint;
use crate::mission::{self, MissionError, MissionKind, MissionResult, MissionSpec, Outcome};
use crate::perception::{frame_dump_name, ColorClass, Marker};
use crate::sim::{self, Carrier, SimConfig, WorldState};

pub use spread::{path_spread, path_spread_csv, read_trajectory_csv};
pub use stats::{mean, sample_stats, SampleStats};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("malformed log: {0}")]
    MalformedLog(String),
    #[error("campaign needs at least one trial")]
    NoTrials,
    #[error(transparent)]
    Mission(#[from] MissionError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Static layout of the world a campaign starts from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Scenario {
    pub markers: Vec<Marker>,
    pub carrier_start: GroundPoint,
    /// Waypoints the carrier drives through before the drone lifts off.
    pub carrier_path: Vec<GroundPoint>,
    pub carrier_speed: f64,
    pub landing_marker_radius: f64,
    pub landing_marker_color: ColorClass,
    /// Start in the air at cruise altitude instead of on the carrier.
    pub start_airborne: bool,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            markers: vec![Marker::new(GroundPoint::new(2.0, 0.0), 0.1, ColorClass::Pink)],
            carrier_start: GroundPoint::new(0.0, 0.0),
            carrier_path: Vec::new(),
            carrier_speed: 0.5,
            landing_marker_radius: 0.15,
            landing_marker_color: ColorClass::Blue,
            start_airborne: false,
        }
    }
}

impl Scenario {
    /// The standard layout for each task: a pink marker 2 m ahead of the
    /// takeoff point, or close by for the tracking task; the coordination
    /// sortie adds a 4 m carrier drive to the takeoff point.
    pub fn for_kind(kind: MissionKind) -> Self {
        match kind {
            MissionKind::TrackVisible => Self {
                markers: vec![Marker::new(GroundPoint::new(0.3, 0.2), 0.1, ColorClass::Pink)],
                ..Self::default()
            },
            MissionKind::ForwardSearchHover | MissionKind::SearchReturnLand => Self::default(),
            MissionKind::CarrierCoordination => Self {
                carrier_start: GroundPoint::new(-4.0, 0.0),
                carrier_path: vec![GroundPoint::new(0.0, 0.0)],
                ..Self::default()
            },
        }
    }

    pub fn world(&self, seed: u64, cfg: &SimConfig) -> WorldState {
        let carrier = Carrier {
            marker_radius: self.landing_marker_radius,
            marker_color: self.landing_marker_color,
            ..Carrier::parked_at(self.carrier_start)
        }
        .with_path(self.carrier_path.clone(), self.carrier_speed);
        let mut world = WorldState::on_carrier(carrier, self.markers.clone(), seed);
        if self.start_airborne {
            world.drone.z = cfg.altitude;
        }
        world
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub spec: MissionSpec,
    pub scenario: Scenario,
    pub config: SimConfig,
    pub trials: usize,
    pub base_seed: u64,
}

impl Campaign {
    /// 20 trials of the standard task layout.
    pub fn standard(kind: MissionKind, config: SimConfig, base_seed: u64) -> Self {
        Self {
            spec: MissionSpec::forward(kind, &config),
            scenario: Scenario::for_kind(kind),
            config,
            trials: 20,
            base_seed,
        }
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }
}

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub outcome: String,
    pub elapsed_s: f64,
    pub ticks: u64,
    pub final_x: f64,
    pub final_y: f64,
}

impl TrialResult {
    pub fn succeeded(&self) -> bool {
        self.outcome == Outcome::Success.to_string()
    }
}

/// Timing statistics over the successful trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignStats {
    /// `None` when no trial succeeded.
    pub mean: Option<f64>,
    /// Sample standard deviation; `None` with fewer than two successes.
    pub std_dev: Option<f64>,
    pub success_count: usize,
    pub trials: Vec<TrialResult>,
}

impl CampaignStats {
    pub fn from_trials(trials: Vec<TrialResult>) -> Self {
        let times: Vec<f64> = trials.iter().filter(|t| t.succeeded()).map(|t| t.elapsed_s).collect();
        Self {
            mean: mean(&times).ok(),
            std_dev: sample_stats(&times).ok().map(|s| s.std_dev),
            success_count: times.len(),
            trials,
        }
    }

    pub fn summary(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
        format!(
            "mean_s: {}\nstd_dev_s: {}\nsuccess_count: {}/{}\n",
            fmt(self.mean),
            fmt(self.std_dev),
            self.success_count,
            self.trials.len()
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Write every rendered frame under `<dir>/trial_<i>/frame_<step>.ppm`.
    pub dump_frames_to: Option<PathBuf>,
}

pub fn run_campaign(c: &Campaign) -> Result<CampaignStats, HarnessError> {
    run_campaign_detailed(c, &RunOptions::default()).map(|(stats, _)| stats)
}

/// Runs every trial and keeps the full mission results alongside the stats.
pub fn run_campaign_detailed(
    c: &Campaign,
    opts: &RunOptions,
) -> Result<(CampaignStats, Vec<MissionResult>), HarnessError> {
    if c.trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    c.spec.validate()?;
    c.config.validate().map_err(MissionError::from)?;

    let missions = (0..c.trials)
        .into_par_iter()
        .map(|i| run_trial(c, i, opts))
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let trials = missions
        .iter()
        .enumerate()
        .map(|(i, m)| TrialResult {
            trial: i,
            seed: c.trial_seed(i),
            outcome: m.outcome.to_string(),
            elapsed_s: m.elapsed,
            ticks: m.ticks,
            final_x: m.final_pose.x,
            final_y: m.final_pose.y,
        })
        .collect();
    Ok((CampaignStats::from_trials(trials), missions))
}

fn run_trial(c: &Campaign, trial: usize, opts: &RunOptions) -> Result<MissionResult, HarnessError> {
    let world = c.scenario.world(c.trial_seed(trial), &c.config);
    match &opts.dump_frames_to {
        None => Ok(mission::run(&c.spec, world, &c.config)?),
        Some(root) => {
            let dir = root.join(format!("trial_{trial:03}"));
            fs::create_dir_all(&dir)?;
            let mut io_err: Option<io::Error> = None;
            let result = mission::run_observed(&c.spec, world, &c.config, |row, frame| {
                if let (Some(f), None) = (frame, &io_err) {
                    if let Err(e) = f.save_ppm(dir.join(frame_dump_name(row.step))) {
                        io_err = Some(e);
                    }
                }
            })?;
            match io_err {
                Some(e) => Err(e.into()),
                None => Ok(result),
            }
        }
    }
}

pub fn write_results_csv<W: Write>(trials: &[TrialResult], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for t in trials {
        w.serialize(t)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_csv<R: Read>(input: R) -> Result<Vec<TrialResult>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<Vec<TrialResult>, _>>()?)
}

/// Writes `results.csv`, `trajectory_<trial>.csv` for each trial and
/// `summary.txt` into `dir`.
pub fn write_campaign_outputs(
    dir: &Path,
    stats: &CampaignStats,
    missions: &[MissionResult],
) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    write_results_csv(&stats.trials, fs::File::create(dir.join("results.csv"))?)?;
    for (i, m) in missions.iter().enumerate() {
        let f = io::BufWriter::new(fs::File::create(dir.join(format!("trajectory_{i}.csv")))?);
        sim::write_trajectory_csv(&m.rows, f)?;
    }
    fs::write(dir.join("summary.txt"), stats.summary())?;
    Ok(())
}
