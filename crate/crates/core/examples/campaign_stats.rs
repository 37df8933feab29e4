//! Seeded 20-trial campaigns and their timing statistics, written to disk.

use mtnav::harness::{run_campaign_detailed, sample_stats, write_campaign_outputs, Campaign, RunOptions};
use mtnav::mission::MissionKind;
use mtnav::sim::SimConfig;

fn main() {
    // Fourteen trials at 1 and six at 0.
    let reported: Vec<f64> = [1.0; 14].into_iter().chain([0.0; 6]).collect();
    let s = sample_stats(&reported).unwrap();
    println!("14x1 + 6x0: mean {:.4}, sample std dev {:.4}", s.mean, s.std_dev);

    let out = std::env::temp_dir().join("mtnav_campaign");
    for kind in [
        MissionKind::TrackVisible,
        MissionKind::ForwardSearchHover,
        MissionKind::SearchReturnLand,
    ] {
        let c = Campaign::standard(kind, SimConfig::default(), 1);
        let (stats, missions) = run_campaign_detailed(&c, &RunOptions::default()).unwrap();
        let dir = out.join(kind.to_string());
        write_campaign_outputs(&dir, &stats, &missions).unwrap();
        println!(
            "{kind:>8}: {}/{} ok, mean {:.2} s, std {:.3} s -> {}",
            stats.success_count,
            stats.trials.len(),
            stats.mean.unwrap_or(f64::NAN),
            stats.std_dev.unwrap_or(f64::NAN),
            dir.display()
        );
    }
}
