//! The carrier drives the drone 4 m to the search site; the drone finds the
//! pink marker, comes back and lands on the carrier's blue marker.

use mtnav::harness::{run_campaign_detailed, Campaign, RunOptions};
use mtnav::mission::{audit_transitions, MissionKind};
use mtnav::sim::SimConfig;

fn main() {
    let campaign = Campaign::standard(MissionKind::CarrierCoordination, SimConfig::default(), 2024);
    let (stats, missions) = run_campaign_detailed(&campaign, &RunOptions::default()).unwrap();

    let first = &missions[0];
    println!("trial 0 phases:");
    let mut last = String::new();
    for t in &first.transitions {
        // Reversal steps through one state per logged segment; show the phase once.
        let phase = t.to.to_string().split('(').next().unwrap().to_string();
        if phase != last {
            println!("    t={:>5.1}s  {}", t.tick as f64 * campaign.config.dt, t.to);
            last = phase;
        }
    }
    let legal = missions.iter().all(|m| audit_transitions(&m.transitions).is_ok());
    print!("{}", stats.summary());
    println!("all transitions legal: {legal}");
}
