//! Shared data model: samples, streams, and gravity-projection tilt math.
//!
//! Axis convention for a chest-worn sensor: X is lateral (horizontal),
//! Y runs along the torso from pelvis to head, Z points out of the chest.
//! All accelerations are specific force in G; a sensor at rest reads +1 G
//! along whichever axis points up, so an upright wearer sees y ~ +1 G.

use crate::error::{Error, Result};

/// Conversion constant: 1 G in m/s².
pub const MPS2_PER_G: f64 = 9.80665;

/// Hard plausibility bound on any acceleration component, in G.
/// Values beyond this are rejected at parse time.
pub const MAX_ABS_G: f64 = 16.0;

/// Which device produced a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    ChestSensor,
    Phone,
    Synthetic,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Source::ChestSensor => "chest_sensor",
            Source::Phone => "phone",
            Source::Synthetic => "synthetic",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "chest_sensor" => Ok(Source::ChestSensor),
            "phone" => Ok(Source::Phone),
            "synthetic" => Ok(Source::Synthetic),
            other => Err(format!("unknown source label `{other}`")),
        }
    }
}

/// One timestamped 3-axis specific-force reading, in G.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelSample {
    /// Milliseconds from the stream epoch.
    pub t_ms: i64,
    pub x_g: f64,
    pub y_g: f64,
    pub z_g: f64,
}

impl AccelSample {
    pub fn new(t_ms: i64, x_g: f64, y_g: f64, z_g: f64) -> Self {
        Self {
            t_ms,
            x_g,
            y_g,
            z_g,
        }
    }

    /// All components finite and within the plausibility bound.
    pub fn is_valid(&self) -> bool {
        [self.x_g, self.y_g, self.z_g]
            .iter()
            .all(|c| c.is_finite() && c.abs() <= MAX_ABS_G)
    }

    /// Euclidean norm of the three components, in G.
    pub fn magnitude(&self) -> f64 {
        (self.x_g * self.x_g + self.y_g * self.y_g + self.z_g * self.z_g).sqrt()
    }
}

/// Ordered sequence of samples with a declared nominal rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AccelStream {
    pub source: Source,
    /// Nominal sample rate, Hz.
    pub rate_hz: f64,
    pub samples: Vec<AccelSample>,
}

impl AccelStream {
    /// Builds a stream, rejecting a non-positive rate, non-finite
    /// components, and any non-increasing timestamp pair.
    pub fn new(source: Source, rate_hz: f64, samples: Vec<AccelSample>) -> Result<Self> {
        if rate_hz <= 0.0 || !rate_hz.is_finite() {
            return Err(Error::InvalidRate(rate_hz));
        }
        for (index, s) in samples.iter().enumerate() {
            if ![s.x_g, s.y_g, s.z_g].iter().all(|c| c.is_finite()) {
                return Err(Error::NonFiniteSample { index });
            }
            if index > 0 && s.t_ms <= samples[index - 1].t_ms {
                return Err(Error::NonMonotonicSample {
                    index,
                    t_ms: s.t_ms,
                });
            }
        }
        Ok(Self {
            source,
            rate_hz,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Timestamp span as (first, last), if non-empty.
    pub fn time_range_ms(&self) -> Option<(i64, i64)> {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => Some((a.t_ms, b.t_ms)),
            _ => None,
        }
    }
}

/// Angle of the torso longitudinal axis above the horizontal plane,
/// in degrees. +90 is upright, 0 is torso horizontal, negative means
/// the head is below horizontal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TiltAngle {
    pub alpha_deg: f64,
}

/// Static-gravity tilt from the Y-axis projection: at rest the torso
/// axis sees y = sin(alpha), so alpha = asin(y).
///
/// Input is clamped to [-1, 1] first: transient dynamic acceleration can
/// push |y| past 1 G, and the clamp maps it to the nearest physical angle.
pub fn tilt_from_y(y_g: f64) -> TiltAngle {
    let clamped = y_g.clamp(-1.0, 1.0);
    TiltAngle {
        alpha_deg: clamped.asin().to_degrees(),
    }
}
