//! Projection of motion onto sensor axes and the sensor error model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{
    synth_torso_profile, synth_vehicle_profile, GroundTruth, Mounting, ScenarioSpec, SensorModel,
    VehicleProfile, PICKUP_LABEL_ALPHA_DEG,
};
use crate::error::{Error, Result};
use crate::model::{AccelSample, AccelStream, Source};

/// Noise-seed salts so the two mountings draw independent noise from
/// the same scenario seed.
const TORSO_NOISE_SALT: u64 = 0x746f_7273; // "tors"
const VEHICLE_NOISE_SALT: u64 = 0x7665_6869; // "vehi"

/// Ideal specific force on the sensor axes, in G, for torso pitch
/// `alpha` (degrees above horizontal), fore-aft acceleration `a_f`, and
/// lateral acceleration `a_lat`:
///
///   x = a_lat
///   y = sin(alpha) + a_f * cos(alpha)
///   z = a_f * sin(alpha) - cos(alpha)
///
/// At rest upright this reads (0, 1, 0); bent fully forward it reads
/// (0, 0, -1): gravity has moved from the torso axis onto the chest.
fn project(alpha_deg: f64, a_f: f64, a_lat: f64) -> [f64; 3] {
    let (sin_a, cos_a) = alpha_deg.to_radians().sin_cos();
    [a_lat, sin_a + a_f * cos_a, a_f * sin_a - cos_a]
}

/// Linear interpolation of a base-grid series at `t_ms`.
fn sample_series(series: &[f64], step_ms: i64, t_ms: i64) -> f64 {
    let idx = (t_ms / step_ms) as usize;
    let rem = t_ms % step_ms;
    if rem == 0 || idx + 1 >= series.len() {
        series[idx.min(series.len() - 1)]
    } else {
        let frac = rem as f64 / step_ms as f64;
        series[idx] + frac * (series[idx + 1] - series[idx])
    }
}

/// Renders one sensor stream plus its ground truth.
///
/// The ideal projection is evaluated on the internal grid, delayed by the
/// model latency, resampled to the model rate, then scaled by gain,
/// offset by bias, and overlaid with seeded Gaussian noise. Ground truth
/// (pitch timeline and pick-up intervals) is sampled at the same output
/// timestamps without latency or noise.
pub fn render_sensor(
    vehicle: &VehicleProfile,
    torso_alpha_deg: &[f64],
    model: &SensorModel,
    mounting: Mounting,
    seed: u64,
) -> Result<(AccelStream, GroundTruth)> {
    model.validate()?;
    if vehicle.len() != torso_alpha_deg.len() {
        return Err(Error::MismatchedTimelines {
            vehicle: vehicle.len(),
            torso: torso_alpha_deg.len(),
        });
    }
    if vehicle.is_empty() {
        return Err(Error::MismatchedTimelines {
            vehicle: 0,
            torso: 0,
        });
    }

    let n = vehicle.len();
    let mut alpha_eff = Vec::with_capacity(n);
    let mut ideal = [
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    ];
    for (i, torso_alpha) in torso_alpha_deg.iter().enumerate() {
        let alpha = match mounting {
            Mounting::Torso => *torso_alpha,
            Mounting::VehicleFixed => 90.0 + vehicle.pitch_deg[i],
        };
        alpha_eff.push(alpha);
        let v = project(alpha, vehicle.fore_aft_g[i], vehicle.lateral_g[i]);
        for k in 0..3 {
            ideal[k].push(v[k]);
        }
    }

    let duration_ms = vehicle.duration_ms();
    let source = match mounting {
        Mounting::Torso => Source::ChestSensor,
        Mounting::VehicleFixed => Source::Phone,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = if model.noise_sigma_g > 0.0 {
        Some(Normal::new(0.0, model.noise_sigma_g).expect("validated sigma"))
    } else {
        None
    };

    let mut samples = Vec::new();
    let mut alpha_timeline = Vec::new();
    let mut vehicle_pitch_deg = Vec::new();
    let mut i = 0i64;
    loop {
        let t_ms = (i as f64 * 1000.0 / model.rate_hz).round() as i64;
        if t_ms > duration_ms {
            break;
        }
        let t_src = (t_ms - model.latency_ms).clamp(0, duration_ms);
        let mut v = [0.0f64; 3];
        for k in 0..3 {
            let raw = sample_series(&ideal[k], vehicle.step_ms, t_src);
            let mut value = model.gain[k] * raw + model.bias_g[k];
            if let Some(dist) = &noise {
                value += dist.sample(&mut rng);
            }
            v[k] = value;
        }
        samples.push(AccelSample::new(t_ms, v[0], v[1], v[2]));
        alpha_timeline.push(sample_series(&alpha_eff, vehicle.step_ms, t_ms));
        vehicle_pitch_deg.push(sample_series(&vehicle.pitch_deg, vehicle.step_ms, t_ms));
        i += 1;
    }

    let pickup_intervals = scan_intervals(&alpha_timeline, &samples);
    let stream = AccelStream::new(source, model.rate_hz, samples)?;
    Ok((
        stream,
        GroundTruth {
            pickup_intervals,
            alpha_timeline,
            vehicle_pitch_deg,
        },
    ))
}

/// Maximal runs where the pitch timeline sits at or below the label
/// threshold, reported on the sample timestamps.
fn scan_intervals(alpha: &[f64], samples: &[AccelSample]) -> Vec<(i64, i64)> {
    let mut intervals = Vec::new();
    let mut run_start: Option<i64> = None;
    for (a, s) in alpha.iter().zip(samples) {
        if *a <= PICKUP_LABEL_ALPHA_DEG {
            if run_start.is_none() {
                run_start = Some(s.t_ms);
            }
        } else if let Some(start) = run_start.take() {
            intervals.push((start, prev_t(samples, s.t_ms)));
        }
    }
    if let (Some(start), Some(last)) = (run_start, samples.last()) {
        intervals.push((start, last.t_ms));
    }
    intervals
}

fn prev_t(samples: &[AccelSample], t_ms: i64) -> i64 {
    match samples.binary_search_by_key(&t_ms, |s| s.t_ms) {
        Ok(idx) if idx > 0 => samples[idx - 1].t_ms,
        _ => t_ms,
    }
}

/// Renders a whole scenario for one sensor: vehicle profile, torso
/// profile, then the sensor model. Noise seeds derive from the scenario
/// seed, salted per mounting so chest and phone noise are independent.
pub fn render_scenario(
    spec: &ScenarioSpec,
    model: &SensorModel,
    mounting: Mounting,
) -> Result<(AccelStream, GroundTruth)> {
    let vehicle = synth_vehicle_profile(spec)?;
    let alpha = synth_torso_profile(spec, &vehicle)?;
    let salt = match mounting {
        Mounting::Torso => TORSO_NOISE_SALT,
        Mounting::VehicleFixed => VEHICLE_NOISE_SALT,
    };
    render_sensor(&vehicle, &alpha, model, mounting, spec.seed ^ salt)
}
