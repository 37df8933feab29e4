//! Where ground points land in the bottom camera image.

use mtnav::geometry::{image_center, project, unproject, FrameSpec, GroundPoint, PixelPoint, Pose};

fn main() {
    let frame = FrameSpec::default();
    let (half_fwd, half_right) = frame.footprint_half_extent(1.0);
    println!(
        "640x360, f=320 px at 1 m sees {:.3} m ahead and {:.3} m to each side",
        half_fwd, half_right
    );
    println!("image center {:?}", image_center(&frame));

    for yaw in [0.0, std::f64::consts::FRAC_PI_2] {
        let drone = Pose::new(0.0, 0.0, 1.0, yaw);
        for p in [
            GroundPoint::new(0.0, 0.0),
            GroundPoint::new(0.1, 0.0),
            GroundPoint::new(0.0, 0.1),
            GroundPoint::new(2.0, 0.0),
        ] {
            let px = project(&drone, p, &frame).unwrap();
            let seen = if mtnav::geometry::in_frame(px, &frame) {
                ""
            } else {
                "  (out of frame)"
            };
            println!(
                "yaw {yaw:.2}  ({:.1}, {:.1}) m -> ({:.1}, {:.1}) px{seen}",
                p.x, p.y, px.x, px.y
            );
        }
    }

    let high = Pose::new(0.0, 0.0, 2.0, 0.0);
    let back = unproject(&high, PixelPoint::new(320.0, 80.0), &frame).unwrap();
    println!(
        "at 2 m the forward imagined marker (320, 80) sits over ground ({:.3}, {:.3})",
        back.x, back.y
    );
}
