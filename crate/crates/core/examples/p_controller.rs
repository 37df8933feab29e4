//! Pixel error in, body velocity out.

use mtnav::control::{compute_command, pixel_error, AxisConvention, ControllerGains};
use mtnav::geometry::PixelPoint;

fn main() {
    let center = PixelPoint::new(320.0, 180.0);
    let gains = ControllerGains::default();
    println!(
        "k = {}, hover within {} px, saturate at {} m/s",
        gains.k, gains.hover_threshold, gains.max_speed
    );

    let targets = [
        (320.0, 80.0),
        (400.0, 200.0),
        (350.0, 210.0),
        (320.0, 180.0),
        (5000.0, 180.0),
    ];
    for (x, y) in targets {
        let e = pixel_error(PixelPoint::new(x, y), center);
        let c = compute_command(e, &gains);
        println!(
            "target ({x:>6}, {y:>5})  err ({:>6}, {:>5}) |e| {:>7.2}  ->  fwd {:+.4}  right {:+.4}{}",
            e.error_x,
            e.error_y,
            e.norm(),
            c.vel_forward,
            c.vel_right,
            if c.hovering { "  hover" } else { "" }
        );
    }

    let literal = ControllerGains {
        axes: AxisConvention::ImageDownIsForward,
        ..gains
    };
    let c = compute_command(pixel_error(PixelPoint::new(320.0, 80.0), center), &literal);
    println!(
        "image-down-is-forward sends the forward marker backward: fwd {:+.4}",
        c.vel_forward
    );
}
