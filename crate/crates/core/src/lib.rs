//! # mtnav
//!
//! Moving-target navigation for a quadrotor that only knows its bottom
//! camera. The drone sits at the image center and is driven by a
//! proportional controller toward a target pixel: a detected marker when one
//! is in view, otherwise an *imagined* marker placed (often outside the frame)
//! along the desired direction of travel. Recording the commanded motion and
//! replaying it with reflected targets brings the drone back home, where it
//! lands on the marker of the ground robot that carried it.
//!
//! The crate is split by concern:
//!
//! - [`geometry`]: image and world frames, pinhole projection.
//! - [`perception`]: synthetic labeled frames and color-threshold detection.
//! - [`control`]: the pixel-error P-controller and hover condition.
//! - [`imagination`]: imagined targets, search trajectories, motion log reversal.
//! - [`sim`]: deterministic seeded kinematics with drift, carrier robot, camera.
//! - [`mission`]: the task state machines.
//! - [`harness`]: seeded N-trial campaigns, statistics, CSV output.
//! - [`config`]: TOML experiment files.
//!
//! ```
//! use mtnav::harness::{Campaign, run_campaign};
//! use mtnav::mission::MissionKind;
//! use mtnav::sim::SimConfig;
//!
//! let campaign = Campaign { trials: 2, ..Campaign::standard(MissionKind::ForwardSearchHover, SimConfig::noiseless(), 1) };
//! let stats = run_campaign(&campaign).unwrap();
//! assert_eq!(stats.success_count, 2);
//! ```
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod config;
pub mod control;
pub mod geometry;
pub mod harness;
pub mod imagination;
pub mod mission;
pub mod perception;
pub mod sim;
