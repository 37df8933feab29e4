//! Render a synthetic labeled frame, find the colored blobs, save it as PPM.

use mtnav::geometry::{GroundPoint, Pose};
use mtnav::perception::{detect, render, ColorClass, Marker, DEFAULT_MIN_BLOB_SIZE};

fn main() -> std::io::Result<()> {
    let drone = Pose::new(0.0, 0.0, 1.0, 0.0);
    let markers = [
        Marker::new(GroundPoint::new(0.3, 0.2), 0.1, ColorClass::Pink),
        Marker::new(GroundPoint::new(0.0, 0.0), 0.15, ColorClass::Blue),
        // half off the right edge
        Marker::new(GroundPoint::new(-0.2, 1.0), 0.1, ColorClass::Green),
        // out of view
        Marker::new(GroundPoint::new(2.0, 0.0), 0.1, ColorClass::Red),
    ];
    let frame = render(&drone, &markers, &Default::default()).unwrap();

    for color in ColorClass::ALL {
        match detect(&frame, color, DEFAULT_MIN_BLOB_SIZE) {
            Some(d) => println!(
                "{color:>6}: center ({:.2}, {:.2}), {} px",
                d.center.x, d.center.y, d.pixel_count
            ),
            None => println!("{color:>6}: not in view"),
        }
    }

    let path = std::env::temp_dir().join("mtnav_blobs.ppm");
    frame.save_ppm(&path)?;
    println!("frame written to {}", path.display());
    Ok(())
}
