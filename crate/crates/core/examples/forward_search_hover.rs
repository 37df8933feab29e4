//! Take off, fly toward the forward imagined marker, hover over the pink
//! marker 2 m ahead.

use mtnav::harness::Scenario;
use mtnav::mission::{self, MissionKind, MissionSpec};
use mtnav::sim::SimConfig;

fn main() {
    for (label, cfg) in [
        ("zero noise", SimConfig::noiseless()),
        ("default noise", SimConfig::default()),
    ] {
        let spec = MissionSpec::forward(MissionKind::ForwardSearchHover, &cfg);
        let res = mission::run(&spec, Scenario::default().world(7, &cfg), &cfg).unwrap();
        println!(
            "{label}: {} after {:.1} s ({} ticks)",
            res.outcome, res.elapsed, res.ticks
        );
        for t in &res.transitions {
            println!("    t={:>5.1}s  {} -> {}", t.tick as f64 * cfg.dt, t.from, t.to);
        }
        println!(
            "    final position ({:.3}, {:.3}), marker at (2, 0)",
            res.final_pose.x, res.final_pose.y
        );
    }
}
