//! Torso posture estimation from chest-worn 3-axis acceleration streams
//! inside moving vehicles.
//!
//! Two estimation routes are implemented side by side:
//!
//! - **Subtraction** ([`diff`]): align a phone stream (rigid with the
//!   vehicle) onto the chest stream's timestamps and subtract, then
//!   quantify the residual that sensor gain, bias, and latency
//!   differences leave behind.
//! - **Threshold detection** ([`detector`]): low-pass the chest Y axis
//!   and flag forward bends where it drops to -0.34 G (a 20-degree
//!   head-below-horizontal lean), with hysteresis and a dwell time.
//!
//! The [`sim`] module synthesizes labeled chest and phone streams for
//! hand-cart, city-bus, and mountain-climb drives with injected pick-up
//! bends, so both routes can be exercised against exact ground truth.
//! [`io`] and [`eval`] provide the file formats and the precision/recall
//! harness used by the `leanguard` CLI.

pub mod detector;
pub mod diff;
pub mod error;
pub mod eval;
pub mod filters;
pub mod io;
pub mod model;
pub mod sim;

pub use detector::{detect_batch, Detector, DetectorConfig, PostureEvent, Transition};
pub use diff::{residual_metrics, subtract_streams, ResidualMetrics, ResidualStream};
pub use error::{Error, Result};
pub use eval::{eval_events, EvalReport};
pub use filters::{resample_align, AlignedPair, LowPass};
pub use model::{tilt_from_y, AccelSample, AccelStream, Source, TiltAngle, MPS2_PER_G};
pub use sim::{
    render_scenario, render_sensor, synth_torso_profile, synth_vehicle_profile, GroundTruth,
    Maneuver, Mounting, Pickup, ScenarioKind, ScenarioSpec, SensorModel, VehicleProfile,
};
