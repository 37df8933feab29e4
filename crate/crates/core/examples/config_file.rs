//! Run a campaign described by a TOML file.
//!
//! cargo run --example config_file -- crates/core/configs/square_search.toml

use mtnav::config::ExperimentConfig;
use mtnav::harness::run_campaign;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/square_search.toml").to_string());
    let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let campaign = cfg.campaign(None).unwrap();
    println!(
        "{}: {} trials from seed {}, {} imagined segments",
        campaign.spec.kind,
        campaign.trials,
        campaign.base_seed,
        campaign.spec.trajectory.len()
    );
    print!("{}", run_campaign(&campaign).unwrap().summary());
}
