//! Proportional pixel-error controller.
//!
//! The drone sits at the image center. A target pixel (a detected marker or an
//! imagined one) produces an error, and the commanded planar velocity is the
//! error scaled by a single gain `k`. Inside the hover threshold the command is
//! exactly zero.

use serde::{Deserialize, Serialize};

use crate::geometry::PixelPoint;

/// How image axes map onto body velocity axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisConvention {
    /// `vel_forward = -k * error_y`: a target above center (smaller y) flies
    /// the drone forward.
    #[default]
    ImageUpIsForward,
    /// `vel_forward = k * error_y`. With a top-left image
    /// origin this flies away from targets above center.
    ImageDownIsForward,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PixelError {
    pub error_x: f64,
    pub error_y: f64,
}

impl PixelError {
    pub const fn new(error_x: f64, error_y: f64) -> Self {
        Self { error_x, error_y }
    }

    pub fn norm(&self) -> f64 {
        self.error_x.hypot(self.error_y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControllerGains {
    /// Meters per second per pixel of error.
    pub k: f64,
    /// Euclidean pixel radius inside which the drone hovers.
    pub hover_threshold: f64,
    /// Command saturation, meters per second.
    pub max_speed: f64,
    pub axes: AxisConvention,
}

impl Default for ControllerGains {
    fn default() -> Self {
        Self {
            k: 0.0005,
            hover_threshold: 50.0,
            max_speed: 1.0,
            axes: AxisConvention::ImageUpIsForward,
        }
    }
}

impl ControllerGains {
    pub fn is_valid(&self) -> bool {
        self.k.is_finite()
            && self.k > 0.0
            && self.hover_threshold.is_finite()
            && self.hover_threshold >= 0.0
            && self.max_speed.is_finite()
            && self.max_speed > 0.0
    }

    pub fn with_hover_threshold(self, hover_threshold: f64) -> Self {
        Self {
            hover_threshold,
            ..self
        }
    }
}

/// Planar body-frame velocity command.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VelocityCommand {
    pub vel_forward: f64,
    pub vel_right: f64,
    pub hovering: bool,
}

impl VelocityCommand {
    pub const HOVER: VelocityCommand = VelocityCommand {
        vel_forward: 0.0,
        vel_right: 0.0,
        hovering: true,
    };

    /// A zero command that is not a hover decision (e.g. sitting on the carrier).
    pub const IDLE: VelocityCommand = VelocityCommand {
        vel_forward: 0.0,
        vel_right: 0.0,
        hovering: false,
    };

    pub fn speed(&self) -> f64 {
        self.vel_forward.hypot(self.vel_right)
    }

    pub fn is_zero(&self) -> bool {
        self.vel_forward == 0.0 && self.vel_right == 0.0
    }
}

/// `target - current`, componentwise.
pub fn pixel_error(target: PixelPoint, current: PixelPoint) -> PixelError {
    PixelError::new(target.x - current.x, target.y - current.y)
}

pub fn compute_command(err: PixelError, gains: &ControllerGains) -> VelocityCommand {
    if err.norm() <= gains.hover_threshold {
        return VelocityCommand::HOVER;
    }
    let vel_forward = match gains.axes {
        // Subtracting from 0.0 keeps a zero error from giving -0.0.
        AxisConvention::ImageUpIsForward => 0.0 - gains.k * err.error_y,
        AxisConvention::ImageDownIsForward => gains.k * err.error_y,
    };
    let vel_right = gains.k * err.error_x;
    let speed = vel_forward.hypot(vel_right);
    let scale = if speed > gains.max_speed {
        gains.max_speed / speed
    } else {
        1.0
    };
    VelocityCommand {
        vel_forward: vel_forward * scale,
        vel_right: vel_right * scale,
        hovering: false,
    }
}
