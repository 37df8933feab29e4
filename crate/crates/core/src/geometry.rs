//! Image and world frames for the nadir-pointing bottom camera.
//!
//! Image coordinates follow the raster convention: origin at the top-left,
//! `x` to the right and `y` downward. The drone's own position in the image is
//! the frame center. Body-forward maps to decreasing image `y` and body-right
//! to increasing image `x`.
//!
//! The world frame is planar with `z` up. At `yaw = 0` body-forward is world
//! `+x` and body-right is world `+y`; positive yaw turns the nose from `+x`
//! toward `+y`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeometryError {
    /// Projection is undefined with the camera on (or below) the ground plane.
    #[error("camera is not above the ground plane (altitude {altitude_mm} mm)")]
    NotAboveGround { altitude_mm: i64 },
}

/// A position in the image coordinate frame, in pixels.
///
/// Not restricted to the frame bounds: imagined targets routinely lie outside.
/// Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct PixelPoint {
    pub x: f64,
    pub y: f64,
}

impl PixelPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Point reflection through `center`.
    pub fn reflect_about(&self, center: PixelPoint) -> PixelPoint {
        PixelPoint::new(center.x - (self.x - center.x), center.y - (self.y - center.y))
    }

    pub fn distance_to(&self, other: PixelPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Intrinsics of the bottom camera.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FrameSpec {
    pub width: u32,
    pub height: u32,
    /// Focal length in pixels.
    pub focal_length: f64,
}

impl Default for FrameSpec {
    fn default() -> Self {
        Self {
            width: 640,
            height: 360,
            focal_length: 320.0,
        }
    }
}

impl FrameSpec {
    pub fn new(width: u32, height: u32, focal_length: f64) -> Self {
        Self {
            width,
            height,
            focal_length,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.width > 0 && self.height > 0 && self.focal_length.is_finite() && self.focal_length > 0.0
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Half-extent of the visible ground patch along image x and y, in meters.
    pub fn footprint_half_extent(&self, altitude: f64) -> (f64, f64) {
        (
            altitude * self.width as f64 / (2.0 * self.focal_length),
            altitude * self.height as f64 / (2.0 * self.focal_length),
        )
    }
}

/// A point on the ground plane, in meters. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct GroundPoint {
    pub x: f64,
    pub y: f64,
}

impl GroundPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, other: GroundPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<[f64; 2]> for GroundPoint {
    fn from(p: [f64; 2]) -> Self {
        Self::new(p[0], p[1])
    }
}

impl From<GroundPoint> for [f64; 2] {
    fn from(p: GroundPoint) -> Self {
        [p.x, p.y]
    }
}

impl From<[f64; 2]> for PixelPoint {
    fn from(p: [f64; 2]) -> Self {
        Self::new(p[0], p[1])
    }
}

impl From<PixelPoint> for [f64; 2] {
    fn from(p: PixelPoint) -> Self {
        [p.x, p.y]
    }
}

/// World-frame pose. `z` is the altitude above the marker plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub yaw: f64,
}

impl Pose {
    pub const fn new(x: f64, y: f64, z: f64, yaw: f64) -> Self {
        Self { x, y, z, yaw }
    }

    pub fn ground(&self) -> GroundPoint {
        GroundPoint::new(self.x, self.y)
    }

    pub fn is_valid(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.yaw.is_finite() && self.z >= 0.0
    }

    /// Rotates a body-frame planar vector `(forward, right)` into the world frame.
    pub fn body_to_world(&self, forward: f64, right: f64) -> (f64, f64) {
        let (s, c) = self.yaw.sin_cos();
        (c * forward - s * right, s * forward + c * right)
    }

    /// Expresses a world point relative to this pose as `(forward, right)`.
    pub fn world_to_body(&self, p: GroundPoint) -> (f64, f64) {
        let (s, c) = self.yaw.sin_cos();
        let dx = p.x - self.x;
        let dy = p.y - self.y;
        (c * dx + s * dy, -s * dx + c * dy)
    }
}

/// The drone's own position in the image: the frame center.
pub fn image_center(frame: &FrameSpec) -> PixelPoint {
    PixelPoint::new(frame.width as f64 / 2.0, frame.height as f64 / 2.0)
}

/// Pinhole projection of a ground point into the downward camera.
///
/// The result is returned even when it falls outside the frame.
pub fn project(drone: &Pose, point: GroundPoint, frame: &FrameSpec) -> Result<PixelPoint, GeometryError> {
    if drone.z.is_nan() || drone.z <= 0.0 {
        return Err(GeometryError::NotAboveGround {
            altitude_mm: (drone.z * 1000.0).round() as i64,
        });
    }
    let (forward, right) = drone.world_to_body(point);
    let scale = frame.focal_length / drone.z;
    let c = image_center(frame);
    Ok(PixelPoint::new(c.x + scale * right, c.y - scale * forward))
}

/// Inverse of [`project`] for a given altitude: image point back to the ground.
pub fn unproject(drone: &Pose, pixel: PixelPoint, frame: &FrameSpec) -> Result<GroundPoint, GeometryError> {
    if drone.z.is_nan() || drone.z <= 0.0 {
        return Err(GeometryError::NotAboveGround {
            altitude_mm: (drone.z * 1000.0).round() as i64,
        });
    }
    let c = image_center(frame);
    let scale = drone.z / frame.focal_length;
    let right = (pixel.x - c.x) * scale;
    let forward = -(pixel.y - c.y) * scale;
    let (dx, dy) = drone.body_to_world(forward, right);
    Ok(GroundPoint::new(drone.x + dx, drone.y + dy))
}

/// True iff `0 <= x < width` and `0 <= y < height`.
pub fn in_frame(p: PixelPoint, frame: &FrameSpec) -> bool {
    p.x >= 0.0 && p.x < frame.width as f64 && p.y >= 0.0 && p.y < frame.height as f64
}
