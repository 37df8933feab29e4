//! Record an outbound path, reflect it about the image center, fly it back.

use mtnav::geometry::PixelPoint;
use mtnav::harness::Scenario;
use mtnav::imagination::{random_trajectory, reverse, ImaginedSegment, ImaginedTrajectory};
use mtnav::mission::fly_trajectory;
use mtnav::sim::SimConfig;

fn main() {
    let cfg = SimConfig::noiseless();
    let airborne = Scenario {
        markers: vec![],
        start_airborne: true,
        ..Scenario::default()
    };

    let l_path = ImaginedTrajectory::new(vec![
        ImaginedSegment::for_duration(PixelPoint::new(320.0, 80.0), 20.0),
        ImaginedSegment::for_duration(PixelPoint::new(420.0, 180.0), 10.0),
    ])
    .unwrap();
    let random = random_trajectory(&cfg.frame, 6, 4.0, 150.0, 3).unwrap();

    for (name, traj) in [("L-path", l_path), ("random", random)] {
        let mut world = airborne.world(0, &cfg);
        let log = fly_trajectory(&mut world, &traj, &cfg).unwrap();
        let away = world.drone.ground();
        let back = reverse(&log, &cfg.frame).unwrap();
        fly_trajectory(&mut world, &back, &cfg).unwrap();
        println!(
            "{name}: {} log entries, out to ({:+.3}, {:+.3})",
            log.len(),
            away.x,
            away.y
        );
        for (o, r) in traj.segments.iter().zip(back.segments.iter().rev()) {
            println!(
                "    ({:>3}, {:>3})  <->  ({:>3}, {:>3})",
                o.target.x, o.target.y, r.target.x, r.target.y
            );
        }
        println!(
            "    back home within {:.1e} m",
            world.drone.ground().distance_to(Default::default())
        );
    }
}
