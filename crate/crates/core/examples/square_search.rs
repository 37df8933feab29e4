//! Fly the four primary imagined markers open loop and come back to the start.

use mtnav::harness::Scenario;
use mtnav::imagination::square_trajectory;
use mtnav::mission::fly_trajectory;
use mtnav::sim::SimConfig;

fn main() {
    let cfg = SimConfig::noiseless();
    let traj = square_trajectory(&cfg.frame, 10.0).unwrap();
    let mut world = Scenario {
        markers: vec![],
        start_airborne: true,
        ..Scenario::default()
    }
    .world(0, &cfg);

    for seg in &traj.segments {
        let one = mtnav::imagination::ImaginedTrajectory::new(vec![*seg]).unwrap();
        fly_trajectory(&mut world, &one, &cfg).unwrap();
        println!(
            "target ({:>3}, {:>3}) -> drone at ({:+.3}, {:+.3})",
            seg.target.x, seg.target.y, world.drone.x, world.drone.y
        );
    }
    println!(
        "closing error {:.2e} m after {:.1} s",
        world.drone.ground().distance_to(Default::default()),
        world.time
    );
}
