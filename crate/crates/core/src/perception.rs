//! Synthetic bottom-camera frames and color-threshold marker detection.
//!
//! Pixels carry a color-class label rather than RGB. Markers are distinctly
//! colored against the floor, so thresholding reduces to exact
//! classification. Pixel `(col, row)` samples the image point `(col, row)`.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::{self, FrameSpec, GeometryError, GroundPoint, PixelPoint, Pose};

/// Blobs smaller than this are ignored by default.
pub const DEFAULT_MIN_BLOB_SIZE: usize = 10;

/// Closed registry of marker colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorClass {
    Pink,
    Blue,
    Red,
    Green,
    Yellow,
}

impl ColorClass {
    pub const ALL: [ColorClass; 5] = [
        ColorClass::Pink,
        ColorClass::Blue,
        ColorClass::Red,
        ColorClass::Green,
        ColorClass::Yellow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ColorClass::Pink => "pink",
            ColorClass::Blue => "blue",
            ColorClass::Red => "red",
            ColorClass::Green => "green",
            ColorClass::Yellow => "yellow",
        }
    }

    /// RGB used when frames are dumped to disk.
    pub fn rgb(self) -> [u8; 3] {
        match self {
            ColorClass::Pink => [255, 105, 180],
            ColorClass::Blue => [30, 60, 255],
            ColorClass::Red => [220, 20, 20],
            ColorClass::Green => [20, 180, 40],
            ColorClass::Yellow => [250, 220, 0],
        }
    }
}

/// Floor color in dumped frames.
pub const BACKGROUND_RGB: [u8; 3] = [64, 64, 64];

impl fmt::Display for ColorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown color class `{0}`")]
pub struct UnknownColor(pub String);

impl FromStr for ColorClass {
    type Err = UnknownColor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ColorClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownColor(s.to_string()))
    }
}

/// A flat colored disc lying on the ground plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub position: GroundPoint,
    /// Disc radius in meters.
    pub radius: f64,
    pub color: ColorClass,
}

impl Marker {
    pub fn new(position: GroundPoint, radius: f64, color: ColorClass) -> Self {
        Self {
            position,
            radius,
            color,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.radius.is_finite() && self.radius > 0.0 && self.position.x.is_finite() && self.position.y.is_finite()
    }
}

/// A labeled camera frame. Row-major, `None` is background.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    spec: FrameSpec,
    pixels: Vec<Option<ColorClass>>,
}

impl Frame {
    pub fn blank(spec: FrameSpec) -> Self {
        Self {
            spec,
            pixels: vec![None; spec.pixel_count()],
        }
    }

    pub fn spec(&self) -> &FrameSpec {
        &self.spec
    }

    pub fn get(&self, col: u32, row: u32) -> Option<ColorClass> {
        self.pixels[row as usize * self.spec.width as usize + col as usize]
    }

    pub fn set(&mut self, col: u32, row: u32, label: Option<ColorClass>) {
        let w = self.spec.width as usize;
        self.pixels[row as usize * w + col as usize] = label;
    }

    pub fn pixels(&self) -> &[Option<ColorClass>] {
        &self.pixels
    }

    pub fn is_blank(&self) -> bool {
        self.pixels.iter().all(Option::is_none)
    }

    /// Writes the frame as a binary PPM (P6) using [`ColorClass::rgb`] and
    /// [`BACKGROUND_RGB`].
    pub fn write_ppm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.spec.width, self.spec.height)?;
        let mut buf = Vec::with_capacity(self.pixels.len() * 3);
        for px in &self.pixels {
            buf.extend_from_slice(&px.map_or(BACKGROUND_RGB, ColorClass::rgb));
        }
        out.write_all(&buf)
    }

    pub fn save_ppm(&self, path: impl AsRef<Path>) -> io::Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_ppm(io::BufWriter::new(file))
    }
}

/// File name used for per-step frame dumps.
pub fn frame_dump_name(step: u64) -> String {
    format!("frame_{step:06}.ppm")
}

/// A thresholded blob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub color: ColorClass,
    pub center: PixelPoint,
    pub pixel_count: usize,
}

/// Renders what the bottom camera sees from `drone`.
///
/// Each pixel takes the color of the nearest marker (by distance to the
/// projected center) whose projected disc covers it.
pub fn render(drone: &Pose, markers: &[Marker], spec: &FrameSpec) -> Result<Frame, GeometryError> {
    if drone.z.is_nan() || drone.z <= 0.0 {
        return Err(GeometryError::NotAboveGround {
            altitude_mm: (drone.z * 1000.0).round() as i64,
        });
    }
    let mut frame = Frame::blank(*spec);
    let w = spec.width as usize;
    let (wf, hf) = (spec.width as f64, spec.height as f64);

    let discs = markers
        .iter()
        .map(|m| {
            let center = geometry::project(drone, m.position, spec)?;
            let radius = spec.focal_length * m.radius / drone.z;
            Ok((center, radius, m.color))
        })
        .collect::<Result<Vec<_>, GeometryError>>()?;

    let visible: Vec<_> = discs
        .into_iter()
        .filter(|(c, r, _)| c.x + r >= 0.0 && c.x - r < wf && c.y + r >= 0.0 && c.y - r < hf)
        .collect();

    // Squared distance to the owning disc center; only needed when discs can overlap.
    let mut owner_dist = if visible.len() > 1 {
        vec![f64::INFINITY; spec.pixel_count()]
    } else {
        Vec::new()
    };

    for &(center, radius, color) in &visible {
        let r2 = radius * radius;
        let col_lo = (center.x - radius).ceil().max(0.0) as usize;
        let col_hi = (center.x + radius).floor().min(wf - 1.0);
        let row_lo = (center.y - radius).ceil().max(0.0) as usize;
        let row_hi = (center.y + radius).floor().min(hf - 1.0);
        if col_hi < 0.0 || row_hi < 0.0 {
            continue;
        }
        let (col_hi, row_hi) = (col_hi as usize, row_hi as usize);
        for row in row_lo..=row_hi {
            let dy = row as f64 - center.y;
            for col in col_lo..=col_hi {
                let dx = col as f64 - center.x;
                let d2 = dx * dx + dy * dy;
                if d2 > r2 {
                    continue;
                }
                let idx = row * w + col;
                if owner_dist.is_empty() {
                    frame.pixels[idx] = Some(color);
                } else if d2 < owner_dist[idx] {
                    owner_dist[idx] = d2;
                    frame.pixels[idx] = Some(color);
                }
            }
        }
    }
    Ok(frame)
}

/// Centroid of every pixel labeled `color`, if there are at least
/// `min_blob_size` of them. `None` means the color is not in view.
pub fn detect(frame: &Frame, color: ColorClass, min_blob_size: usize) -> Option<Detection> {
    let w = frame.spec.width as usize;
    let mut count = 0u64;
    let mut sum_col = 0u64;
    let mut sum_row = 0u64;
    for (row, line) in frame.pixels.chunks_exact(w).enumerate() {
        let mut in_row = 0u64;
        for (col, px) in line.iter().enumerate() {
            if *px == Some(color) {
                in_row += 1;
                sum_col += col as u64;
            }
        }
        count += in_row;
        sum_row += in_row * row as u64;
    }
    if count == 0 || (count as usize) < min_blob_size.max(1) {
        return None;
    }
    Some(Detection {
        color,
        center: PixelPoint::new(sum_col as f64 / count as f64, sum_row as f64 / count as f64),
        pixel_count: count as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn overhead() -> Pose {
        Pose::new(0.0, 0.0, 1.0, 0.0)
    }

    // Pixel radius 20 at 1 m altitude with focal 320.
    const R20: f64 = 20.0 / 320.0;

    #[test]
    fn no_markers_renders_blank() {
        let f = render(&overhead(), &[], &FrameSpec::default()).unwrap();
        assert!(f.is_blank());
        assert_eq!(detect(&f, ColorClass::Pink, 1), None);
    }

    #[test]
    fn marker_below_renders_centered_disc() {
        let m = Marker::new(GroundPoint::new(0.0, 0.0), R20, ColorClass::Pink);
        let f = render(&overhead(), &[m], &FrameSpec::default()).unwrap();
        assert_eq!(f.get(320, 180), Some(ColorClass::Pink));
        assert_eq!(f.get(340, 180), Some(ColorClass::Pink));
        assert_eq!(f.get(341, 180), None);
        let d = detect(&f, ColorClass::Pink, DEFAULT_MIN_BLOB_SIZE).unwrap();
        assert_eq!(d.center, PixelPoint::new(320.0, 180.0));
    }

    #[test]
    fn marker_outside_footprint_renders_blank() {
        let m = Marker::new(GroundPoint::new(2.0, 0.0), 0.1, ColorClass::Pink);
        let f = render(&overhead(), &[m], &FrameSpec::default()).unwrap();
        assert!(f.is_blank());
    }

    #[test]
    fn disc_at_hundred_hundred() {
        // Pixel (100,100) is 220 px left and 80 px up: 0.6875 m left, 0.25 m ahead.
        let m = Marker::new(GroundPoint::new(0.25, -0.6875), R20, ColorClass::Red);
        let f = render(&overhead(), &[m], &FrameSpec::default()).unwrap();
        let d = detect(&f, ColorClass::Red, DEFAULT_MIN_BLOB_SIZE).unwrap();
        assert!(d.center.distance_to(PixelPoint::new(100.0, 100.0)) <= 0.5);
    }

    #[test]
    fn half_clipped_disc_matches_pixel_sum() {
        // Center on the left edge: only the right half is visible.
        let m = Marker::new(GroundPoint::new(0.0, -1.0), R20, ColorClass::Pink);
        let f = render(&overhead(), &[m], &FrameSpec::default()).unwrap();
        let d = detect(&f, ColorClass::Pink, 1).unwrap();

        let mut n = 0.0;
        let (mut sx, mut sy) = (0.0, 0.0);
        for row in 0..360u32 {
            for col in 0..640u32 {
                if f.get(col, row) == Some(ColorClass::Pink) {
                    n += 1.0;
                    sx += col as f64;
                    sy += row as f64;
                }
            }
        }
        assert_eq!(d.pixel_count as f64, n);
        assert_eq!(d.center, PixelPoint::new(sx / n, sy / n));
        assert!(d.center.x > 0.0 && d.center.x < 20.0);
    }

    #[test]
    fn small_blobs_are_rejected() {
        let mut f = Frame::blank(FrameSpec::default());
        f.set(5, 5, Some(ColorClass::Blue));
        assert!(detect(&f, ColorClass::Blue, DEFAULT_MIN_BLOB_SIZE).is_none());
        assert!(detect(&f, ColorClass::Blue, 1).is_some());
    }

    #[test]
    fn overlapping_discs_go_to_nearest_center() {
        let a = Marker::new(GroundPoint::new(0.0, -0.05), R20, ColorClass::Pink);
        let b = Marker::new(GroundPoint::new(0.0, 0.05), R20, ColorClass::Blue);
        let f = render(&overhead(), &[a, b], &FrameSpec::default()).unwrap();
        // Pixel 319 is 15 px from a's center and 17 px from b's.
        assert_eq!(f.get(319, 180), Some(ColorClass::Pink));
        assert_eq!(f.get(321, 180), Some(ColorClass::Blue));
    }

    #[test]
    fn grounded_render_fails() {
        assert!(render(&Pose::default(), &[], &FrameSpec::default()).is_err());
    }

    #[test]
    fn ppm_dump_has_header_and_payload() {
        let m = Marker::new(GroundPoint::new(0.0, 0.0), R20, ColorClass::Pink);
        let f = render(&overhead(), &[m], &FrameSpec::new(64, 36, 32.0)).unwrap();
        let mut buf = Vec::new();
        f.write_ppm(&mut buf).unwrap();
        let header = b"P6\n64 36\n255\n";
        assert_eq!(&buf[..header.len()], header);
        assert_eq!(buf.len(), header.len() + 64 * 36 * 3);
        assert_eq!(frame_dump_name(42), "frame_000042.ppm");
    }

    #[test]
    fn color_names_round_trip() {
        for c in ColorClass::ALL {
            assert_eq!(c.name().parse::<ColorClass>().unwrap(), c);
        }
        assert!("mauve".parse::<ColorClass>().is_err());
    }

    proptest! {
        #[test]
        fn other_colors_do_not_shift_detection(
            px in -0.8..0.8f64, py in -0.4..0.4f64,
            qx in -0.8..0.8f64, qy in -0.4..0.4f64,
        ) {
            let pink = Marker::new(GroundPoint::new(py, px), 0.08, ColorClass::Pink);
            let blue = Marker::new(GroundPoint::new(qy, qx), 0.08, ColorClass::Blue);
            prop_assume!(pink.position.distance_to(blue.position) > 0.16);
            let spec = FrameSpec::default();
            let alone = render(&overhead(), &[pink], &spec).unwrap();
            let both = render(&overhead(), &[pink, blue], &spec).unwrap();
            prop_assert_eq!(detect(&alone, ColorClass::Pink, 1), detect(&both, ColorClass::Pink, 1));
        }

        #[test]
        fn raising_min_blob_size_never_creates_detections(
            x in -1.2..1.2f64, y in -0.7..0.7f64, r in 0.005..0.2f64,
            lo in 1usize..500, extra in 0usize..500,
        ) {
            let m = Marker::new(GroundPoint::new(y, x), r, ColorClass::Green);
            let f = render(&overhead(), &[m], &FrameSpec::default()).unwrap();
            if detect(&f, ColorClass::Green, lo).is_none() {
                prop_assert!(detect(&f, ColorClass::Green, lo + extra).is_none());
            }
        }
    }
}
