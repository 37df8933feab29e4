//! More drift, wider return path.

use mtnav::harness::{path_spread, run_campaign_detailed, sample_stats, Campaign, RunOptions};
use mtnav::mission::MissionKind;
use mtnav::sim::{NoiseModel, SimConfig};

fn main() {
    println!("drift_std  mean spread (m)  std (m)");
    for drift_std in [0.0, 0.005, 0.01, 0.02, 0.04] {
        let cfg = SimConfig {
            noise: NoiseModel {
                drift_std,
                takeoff_jitter_std: 0.0,
            },
            ..SimConfig::default()
        };
        let c = Campaign {
            trials: 50,
            ..Campaign::standard(MissionKind::SearchReturnLand, cfg, 0)
        };
        let (stats, missions) = run_campaign_detailed(&c, &RunOptions::default()).unwrap();
        let spreads: Vec<f64> = missions.iter().filter_map(|m| path_spread(&m.rows).ok()).collect();
        let s = sample_stats(&spreads).unwrap();
        println!(
            "{drift_std:>9}  {:>15.4}  {:>7.4}   ({}/{} landed)",
            s.mean,
            s.std_dev,
            stats.success_count,
            stats.trials.len()
        );
    }
}
