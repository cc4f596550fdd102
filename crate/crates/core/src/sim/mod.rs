//! Physics-grounded synthesis of labeled chest and phone streams.
//!
//! Scenarios describe vehicle maneuvers on a pitch plane (fore-aft and
//! lateral acceleration plus road grade), the wearer's torso pitch
//! timeline including injected pick-up bends, and per-sensor
//! imperfections. Rendering projects gravity and vehicle acceleration
//! onto the sensor axes and then applies the sensor error model, so
//! every stream comes with exact ground truth.

mod file;
mod profile;
mod render;

pub use profile::{synth_torso_profile, synth_vehicle_profile};
pub use render::{render_scenario, render_sensor};

use crate::error::{Error, Result};

/// Internal timeline step: 5 ms nodes (200 Hz), dense enough to carry
/// sensor latency shifts and resampling to any supported output rate.
pub const BASE_STEP_MS: i64 = 5;

/// Torso pitch at or below this labels a ground-truth pick-up interval,
/// matching the detection geometry (sin(-20 deg) = -0.342 G).
pub const PICKUP_LABEL_ALPHA_DEG: f64 = -20.0;

/// Built-in scenario families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    HandCart,
    RegularBus,
    MountainClimb,
    Custom,
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ScenarioKind::HandCart => "hand_cart",
            ScenarioKind::RegularBus => "regular_bus",
            ScenarioKind::MountainClimb => "mountain_climb",
            ScenarioKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "hand_cart" | "handcart" | "cart" => Ok(ScenarioKind::HandCart),
            "regular_bus" | "bus" => Ok(ScenarioKind::RegularBus),
            "mountain_climb" | "mountain" | "climb" => Ok(ScenarioKind::MountainClimb),
            "custom" => Ok(ScenarioKind::Custom),
            other => Err(format!("unknown scenario kind `{other}`")),
        }
    }
}

/// One vehicle maneuver segment: constant target acceleration reached
/// and left through 0.5 s smoothstep ramps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maneuver {
    pub start_s: f64,
    pub duration_s: f64,
    pub fore_aft_g: f64,
    pub lateral_g: f64,
}

/// One injected forward bend: ease from the seated baseline down to
/// `target_alpha_deg` over `dip_s`, hold for `hold_s`, ease back up
/// over `dip_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pickup {
    pub start_s: f64,
    pub dip_s: f64,
    pub hold_s: f64,
    pub target_alpha_deg: f64,
}

impl Pickup {
    /// Total footprint on the timeline, seconds.
    pub fn span_s(&self) -> f64 {
        2.0 * self.dip_s + self.hold_s
    }
}

/// Declarative description of one synthetic drive.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub duration_s: f64,
    /// Road grade as rise/run x 100; pitch = atan(grade/100).
    pub grade_percent: f64,
    /// Amplitude of the slow seated-sway term added to the torso
    /// baseline, degrees. Zero disables sway entirely.
    pub sway_deg: f64,
    pub maneuvers: Vec<Maneuver>,
    pub pickups: Vec<Pickup>,
    pub seed: u64,
}

impl ScenarioSpec {
    /// Hand cart pushed through start / turn / stop / turn cycles.
    pub fn hand_cart(duration_s: f64, seed: u64) -> Self {
        let mut spec = Self {
            kind: ScenarioKind::HandCart,
            duration_s,
            grade_percent: 0.0,
            sway_deg: 2.0,
            maneuvers: Vec::new(),
            pickups: Vec::new(),
            seed,
        };
        spec.maneuvers = canonical_maneuvers(ScenarioKind::HandCart, duration_s);
        spec
    }

    /// City bus with gentle 0.1 G accelerate/brake cycles.
    pub fn regular_bus(duration_s: f64, seed: u64) -> Self {
        let mut spec = Self {
            kind: ScenarioKind::RegularBus,
            duration_s,
            grade_percent: 0.0,
            sway_deg: 2.0,
            maneuvers: Vec::new(),
            pickups: Vec::new(),
            seed,
        };
        spec.maneuvers = canonical_maneuvers(ScenarioKind::RegularBus, duration_s);
        spec
    }

    /// Steep climb at a 20% grade with surges and hairpins.
    pub fn mountain_climb(duration_s: f64, seed: u64) -> Self {
        let mut spec = Self {
            kind: ScenarioKind::MountainClimb,
            duration_s,
            grade_percent: 20.0,
            sway_deg: 2.0,
            maneuvers: Vec::new(),
            pickups: Vec::new(),
            seed,
        };
        spec.maneuvers = canonical_maneuvers(ScenarioKind::MountainClimb, duration_s);
        spec
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |field, reason: String| Err(Error::InvalidSpec { field, reason });
        if self.duration_s <= 0.0 || !self.duration_s.is_finite() {
            return fail(
                "duration_s",
                format!("must be positive, got {}", self.duration_s),
            );
        }
        if !(0.0..=30.0).contains(&self.grade_percent) {
            return fail(
                "grade_percent",
                format!("must be in [0, 30], got {}", self.grade_percent),
            );
        }
        if !(0.0..=5.0).contains(&self.sway_deg) {
            return fail(
                "sway_deg",
                format!("must be in [0, 5], got {}", self.sway_deg),
            );
        }
        for (i, m) in self.maneuvers.iter().enumerate() {
            if !m.start_s.is_finite() || m.start_s < 0.0 {
                return fail(
                    "maneuvers",
                    format!("segment {i}: start_s {} invalid", m.start_s),
                );
            }
            if m.duration_s <= 0.0 || !m.duration_s.is_finite() {
                return fail(
                    "maneuvers",
                    format!("segment {i}: duration_s {} invalid", m.duration_s),
                );
            }
            if m.start_s + m.duration_s > self.duration_s {
                return fail(
                    "maneuvers",
                    format!("segment {i} extends past the scenario end"),
                );
            }
            if !m.fore_aft_g.is_finite() || m.fore_aft_g.abs() > 0.5 {
                return fail(
                    "maneuvers",
                    format!("segment {i}: |fore_aft_g| {} exceeds 0.5", m.fore_aft_g),
                );
            }
            if !m.lateral_g.is_finite() || m.lateral_g.abs() > 0.5 {
                return fail(
                    "maneuvers",
                    format!("segment {i}: |lateral_g| {} exceeds 0.5", m.lateral_g),
                );
            }
        }
        for (i, p) in self.pickups.iter().enumerate() {
            if !p.start_s.is_finite() || p.start_s < 0.0 {
                return fail(
                    "pickups",
                    format!("pickup {i}: start_s {} invalid", p.start_s),
                );
            }
            if p.dip_s <= 0.0 || !p.dip_s.is_finite() {
                return fail("pickups", format!("pickup {i}: dip_s {} invalid", p.dip_s));
            }
            if p.hold_s < 0.0 || !p.hold_s.is_finite() {
                return fail(
                    "pickups",
                    format!("pickup {i}: hold_s {} invalid", p.hold_s),
                );
            }
            if !(-90.0..=90.0).contains(&p.target_alpha_deg) {
                return fail(
                    "pickups",
                    format!(
                        "pickup {i}: target_alpha_deg {} outside [-90, 90]",
                        p.target_alpha_deg
                    ),
                );
            }
            if p.start_s + p.span_s() > self.duration_s {
                return fail(
                    "pickups",
                    format!("pickup {i} extends past the scenario end"),
                );
            }
        }
        let mut sorted: Vec<&Pickup> = self.pickups.iter().collect();
        sorted.sort_by(|a, b| a.start_s.total_cmp(&b.start_s));
        for w in sorted.windows(2) {
            if w[0].start_s + w[0].span_s() > w[1].start_s {
                return Err(Error::OverlappingPickups {
                    first_start_s: w[0].start_s,
                    second_start_s: w[1].start_s,
                });
            }
        }
        Ok(())
    }
}

/// Tiles the fixed maneuver cycle of a built-in kind across the
/// duration, keeping only segments that fit entirely inside it.
pub fn canonical_maneuvers(kind: ScenarioKind, duration_s: f64) -> Vec<Maneuver> {
    // (start within cycle, duration, fore_aft_g, lateral_g), cycle period.
    let (cycle, period): (&[(f64, f64, f64, f64)], f64) = match kind {
        ScenarioKind::HandCart => (
            &[
                (0.0, 2.0, 0.15, 0.0),   // push off
                (5.0, 2.0, 0.0, 0.12),   // turn left
                (9.0, 2.0, -0.15, 0.0),  // stop
                (13.0, 2.0, 0.0, -0.12), // turn right
            ],
            18.0,
        ),
        ScenarioKind::RegularBus => (
            &[
                (0.0, 4.0, 0.10, 0.0),   // pull away
                (8.0, 3.0, 0.0, 0.08),   // gentle curve
                (14.0, 4.0, -0.10, 0.0), // brake to a stop
                (20.0, 2.0, 0.0, -0.08), // lane shift
            ],
            24.0,
        ),
        ScenarioKind::MountainClimb => (
            &[
                (0.0, 3.0, 0.15, 0.0),   // uphill surge
                (6.0, 2.5, 0.0, 0.15),   // hairpin left
                (10.0, 3.0, -0.12, 0.0), // ease off
                (15.0, 2.5, 0.0, -0.15), // hairpin right
            ],
            20.0,
        ),
        ScenarioKind::Custom => (&[], 1.0),
    };
    let mut out = Vec::new();
    let mut offset = 0.0;
    while offset < duration_s {
        for &(start, seg_duration, fore, lat) in cycle {
            let start_s = offset + start;
            if start_s + seg_duration <= duration_s {
                out.push(Maneuver {
                    start_s,
                    duration_s: seg_duration,
                    fore_aft_g: fore,
                    lateral_g: lat,
                });
            }
        }
        offset += period;
    }
    out
}

/// Per-sensor imperfection model applied after the ideal projection.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorModel {
    pub rate_hz: f64,
    /// Per-axis multiplicative factor.
    pub gain: [f64; 3],
    /// Per-axis additive offset, G.
    pub bias_g: [f64; 3],
    /// Reporting delay, ms.
    pub latency_ms: i64,
    /// White-noise standard deviation, G.
    pub noise_sigma_g: f64,
}

impl SensorModel {
    /// Chest-sensor default: 25 Hz, clean gain, noisy fabric contact.
    pub fn chest() -> Self {
        Self {
            rate_hz: 25.0,
            gain: [1.0; 3],
            bias_g: [0.0; 3],
            latency_ms: 0,
            noise_sigma_g: 0.02,
        }
    }

    /// Phone default: faster and quieter but with gain error, bias, and
    /// reporting latency relative to the chest sensor.
    pub fn phone() -> Self {
        Self {
            rate_hz: 50.0,
            gain: [1.05; 3],
            bias_g: [0.02; 3],
            latency_ms: 40,
            noise_sigma_g: 0.01,
        }
    }

    /// Error-free reference sensor at the given rate.
    pub fn ideal(rate_hz: f64) -> Self {
        Self {
            rate_hz,
            gain: [1.0; 3],
            bias_g: [0.0; 3],
            latency_ms: 0,
            noise_sigma_g: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |field, reason: String| Err(Error::InvalidModel { field, reason });
        if self.rate_hz <= 0.0 || !self.rate_hz.is_finite() || self.rate_hz > 1000.0 {
            return fail(
                "rate_hz",
                format!(
                    "must be in (0, 1000] for ms timestamps, got {}",
                    self.rate_hz
                ),
            );
        }
        for (i, g) in self.gain.iter().enumerate() {
            if !(0.8..=1.2).contains(g) {
                return fail("gain", format!("axis {i}: {g} outside [0.8, 1.2]"));
            }
        }
        for (i, b) in self.bias_g.iter().enumerate() {
            if !b.is_finite() || b.abs() > 0.1 {
                return fail("bias_g", format!("axis {i}: |{b}| exceeds 0.1 G"));
            }
        }
        if self.latency_ms < 0 {
            return fail(
                "latency_ms",
                format!("must be >= 0, got {}", self.latency_ms),
            );
        }
        if self.noise_sigma_g < 0.0 || !self.noise_sigma_g.is_finite() {
            return fail(
                "noise_sigma_g",
                format!("must be >= 0, got {}", self.noise_sigma_g),
            );
        }
        Ok(())
    }
}

/// Where the simulated sensor is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mounting {
    /// Worn on the torso: follows the torso pitch timeline.
    Torso,
    /// Rigid with the vehicle: pitch follows the road only, no sway.
    VehicleFixed,
}

/// Labels for a rendered stream, on the stream's own timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// Maximal spans where true torso pitch is at or below
    /// [`PICKUP_LABEL_ALPHA_DEG`], as (start_ms, end_ms), disjoint and
    /// sorted.
    pub pickup_intervals: Vec<(i64, i64)>,
    /// True torso pitch at each rendered timestamp, degrees.
    pub alpha_timeline: Vec<f64>,
    /// Road pitch at each rendered timestamp, degrees.
    pub vehicle_pitch_deg: Vec<f64>,
}

/// Vehicle motion sampled on the internal 5 ms grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleProfile {
    pub step_ms: i64,
    pub fore_aft_g: Vec<f64>,
    pub lateral_g: Vec<f64>,
    pub pitch_deg: Vec<f64>,
}

impl VehicleProfile {
    pub fn len(&self) -> usize {
        self.fore_aft_g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fore_aft_g.is_empty()
    }

    /// Timestamp of node `i`, ms.
    pub fn t_ms(&self, i: usize) -> i64 {
        i as i64 * self.step_ms
    }

    pub fn duration_ms(&self) -> i64 {
        (self.len().saturating_sub(1)) as i64 * self.step_ms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_specs_validate() {
        for spec in [
            ScenarioSpec::hand_cart(60.0, 1),
            ScenarioSpec::regular_bus(60.0, 2),
            ScenarioSpec::mountain_climb(120.0, 3),
        ] {
            spec.validate().unwrap();
        }
    }

    #[test]
    fn mountain_default_grade_is_20() {
        assert_eq!(ScenarioSpec::mountain_climb(120.0, 0).grade_percent, 20.0);
    }

    #[test]
    fn grade_out_of_range_rejected() {
        let mut spec = ScenarioSpec::hand_cart(60.0, 0);
        spec.grade_percent = 35.0;
        assert!(matches!(
            spec.validate(),
            Err(Error::InvalidSpec {
                field: "grade_percent",
                ..
            })
        ));
    }

    #[test]
    fn maneuver_over_half_g_rejected() {
        let mut spec = ScenarioSpec::hand_cart(60.0, 0);
        spec.maneuvers.push(Maneuver {
            start_s: 1.0,
            duration_s: 2.0,
            fore_aft_g: 0.6,
            lateral_g: 0.0,
        });
        assert!(matches!(
            spec.validate(),
            Err(Error::InvalidSpec {
                field: "maneuvers",
                ..
            })
        ));
    }

    #[test]
    fn overlapping_pickups_rejected() {
        let mut spec = ScenarioSpec::regular_bus(60.0, 0);
        spec.pickups = vec![
            Pickup {
                start_s: 10.0,
                dip_s: 1.0,
                hold_s: 2.0,
                target_alpha_deg: -30.0,
            },
            Pickup {
                start_s: 12.0,
                dip_s: 1.0,
                hold_s: 1.0,
                target_alpha_deg: -30.0,
            },
        ];
        assert!(matches!(
            spec.validate(),
            Err(Error::OverlappingPickups { .. })
        ));
    }

    #[test]
    fn pickup_past_end_rejected() {
        let mut spec = ScenarioSpec::regular_bus(20.0, 0);
        spec.pickups = vec![Pickup {
            start_s: 19.0,
            dip_s: 1.0,
            hold_s: 1.0,
            target_alpha_deg: -30.0,
        }];
        assert!(matches!(
            spec.validate(),
            Err(Error::InvalidSpec {
                field: "pickups",
                ..
            })
        ));
    }

    #[test]
    fn canonical_segments_fit_inside_duration() {
        for kind in [
            ScenarioKind::HandCart,
            ScenarioKind::RegularBus,
            ScenarioKind::MountainClimb,
        ] {
            let maneuvers = canonical_maneuvers(kind, 45.0);
            assert!(!maneuvers.is_empty());
            for m in maneuvers {
                assert!(m.start_s + m.duration_s <= 45.0);
            }
        }
    }

    #[test]
    fn sensor_model_bounds() {
        SensorModel::chest().validate().unwrap();
        SensorModel::phone().validate().unwrap();
        let mut model = SensorModel::ideal(25.0);
        model.gain[1] = 1.3;
        assert!(matches!(
            model.validate(),
            Err(Error::InvalidModel { field: "gain", .. })
        ));
        model = SensorModel::ideal(25.0);
        model.bias_g[0] = 0.2;
        assert!(matches!(
            model.validate(),
            Err(Error::InvalidModel {
                field: "bias_g",
                ..
            })
        ));
    }

    #[test]
    fn kind_labels_round_trip() {
        for kind in [
            ScenarioKind::HandCart,
            ScenarioKind::RegularBus,
            ScenarioKind::MountainClimb,
            ScenarioKind::Custom,
        ] {
            let parsed: ScenarioKind = kind.to_string().parse().unwrap();
            assert_eq!(parsed, kind);
        }
    }
}
