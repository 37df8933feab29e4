//! The full sortie: search, hover, retrace the path, land on the home marker.

use mtnav::harness::{path_spread, Scenario};
use mtnav::mission::{self, MissionKind, MissionSpec};
use mtnav::sim::SimConfig;

fn main() {
    let cfg = SimConfig::default();
    let spec = MissionSpec::forward(MissionKind::SearchReturnLand, &cfg);
    let res = mission::run(&spec, Scenario::default().world(1, &cfg), &cfg).unwrap();

    let mut last = "";
    for r in &res.rows {
        let phase = r.fsm_state.split('(').next().unwrap();
        if phase != last {
            println!(
                "t={:>5.1}s  {:<17} at ({:+.3}, {:+.3}, {:.2})",
                r.time_s, phase, r.drone_x, r.drone_y, r.drone_z
            );
            last = phase;
        }
    }
    println!(
        "{} in {:.1} s, {:.3} m from the takeoff point, return-leg spread {:.3} m",
        res.outcome,
        res.elapsed,
        res.final_pose.ground().distance_to(Default::default()),
        path_spread(&res.rows).unwrap()
    );
}
