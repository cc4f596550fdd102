//! Vehicle and torso motion profiles on the internal timeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ScenarioSpec, VehicleProfile, BASE_STEP_MS};
use crate::error::{Error, Result};

/// Maneuver ramp length, seconds. Short segments shrink it to half
/// their duration so the plateau never inverts.
const RAMP_S: f64 = 0.5;

/// Seed salt so sway draws never collide with sensor-noise draws.
const SWAY_SALT: u64 = 0x73_77_61_79; // "sway"

/// Cubic smoothstep on [0, 1].
pub(crate) fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

/// Weight of a maneuver segment at time `t_s`: smoothstep ramp in,
/// plateau at 1, smoothstep ramp out.
fn segment_weight(t_s: f64, start_s: f64, duration_s: f64) -> f64 {
    if t_s < start_s || t_s > start_s + duration_s {
        return 0.0;
    }
    let ramp = RAMP_S.min(duration_s / 2.0);
    let w_in = smoothstep((t_s - start_s) / ramp);
    let w_out = smoothstep((start_s + duration_s - t_s) / ramp);
    w_in * w_out
}

/// Renders the maneuver plan onto the 5 ms grid and attaches the road
/// pitch implied by the grade.
pub fn synth_vehicle_profile(spec: &ScenarioSpec) -> Result<VehicleProfile> {
    spec.validate()?;
    let duration_ms = (spec.duration_s * 1000.0).round() as i64;
    let n = (duration_ms / BASE_STEP_MS) as usize + 1;
    let pitch = (spec.grade_percent / 100.0).atan().to_degrees();

    let mut fore_aft_g = vec![0.0; n];
    let mut lateral_g = vec![0.0; n];
    for i in 0..n {
        let t_s = (i as i64 * BASE_STEP_MS) as f64 / 1000.0;
        let mut fore = 0.0;
        let mut lat = 0.0;
        for m in &spec.maneuvers {
            let w = segment_weight(t_s, m.start_s, m.duration_s);
            fore += w * m.fore_aft_g;
            lat += w * m.lateral_g;
        }
        fore_aft_g[i] = fore;
        lateral_g[i] = lat;
    }
    Ok(VehicleProfile {
        step_ms: BASE_STEP_MS,
        fore_aft_g,
        lateral_g,
        pitch_deg: vec![pitch; n],
    })
}

/// Torso pitch timeline: upright against the seat back (90 degrees plus
/// road pitch), a slow seeded sway, and the injected pick-up bends.
pub fn synth_torso_profile(spec: &ScenarioSpec, vehicle: &VehicleProfile) -> Result<Vec<f64>> {
    spec.validate()?;
    if vehicle.is_empty() {
        return Err(Error::MismatchedTimelines {
            vehicle: 0,
            torso: 0,
        });
    }

    // Two incommensurate sub-0.3 Hz sinusoids with seeded frequencies and
    // phases; amplitudes sum to sway_deg so |sway| <= sway_deg.
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ SWAY_SALT);
    let f1 = rng.gen_range(0.05..0.15);
    let f2 = rng.gen_range(0.15..0.28);
    let ph1 = rng.gen_range(0.0..std::f64::consts::TAU);
    let ph2 = rng.gen_range(0.0..std::f64::consts::TAU);

    let n = vehicle.len();
    let mut alpha = Vec::with_capacity(n);
    for i in 0..n {
        let t_s = vehicle.t_ms(i) as f64 / 1000.0;
        let sway = spec.sway_deg
            * (0.6 * (std::f64::consts::TAU * f1 * t_s + ph1).sin()
                + 0.4 * (std::f64::consts::TAU * f2 * t_s + ph2).sin());
        let baseline = 90.0 + vehicle.pitch_deg[i] + sway;
        let mut value = baseline;
        for p in &spec.pickups {
            let w = pickup_weight(t_s, p.start_s, p.dip_s, p.hold_s);
            if w > 0.0 {
                value = baseline + (p.target_alpha_deg - baseline) * w;
                break;
            }
        }
        alpha.push(value);
    }
    Ok(alpha)
}

/// Blend weight of a pickup at `t_s`: 0 outside, smoothstep up during
/// the dip, 1 through the hold, smoothstep back down.
fn pickup_weight(t_s: f64, start_s: f64, dip_s: f64, hold_s: f64) -> f64 {
    let rel = t_s - start_s;
    if rel < 0.0 {
        0.0
    } else if rel < dip_s {
        smoothstep(rel / dip_s)
    } else if rel < dip_s + hold_s {
        1.0
    } else if rel < 2.0 * dip_s + hold_s {
        smoothstep((2.0 * dip_s + hold_s - rel) / dip_s)
    } else {
        0.0
    }
}
