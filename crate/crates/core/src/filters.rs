//! Noise reduction and two-stream temporal alignment.
//!
//! Both estimation methods share the same preprocessing: a causal
//! first-order low-pass to strip vehicle vibration, and (for the
//! subtraction method) resampling of the phone stream onto the chest
//! stream's timestamps.

use crate::error::{Error, Result};
use crate::model::{AccelSample, AccelStream};

/// Streaming first-order exponential low-pass, one state per axis.
///
/// `y[n] = y[n-1] + alpha * (x[n] - y[n-1])`; the first sample passes
/// through unchanged and seeds the state. DC gain is exactly 1.
#[derive(Debug, Clone)]
pub struct LowPass {
    alpha: f64,
    y_prev: [f64; 3],
    initialized: bool,
}

impl LowPass {
    /// Builds a filter from a cutoff frequency and sample rate with
    /// `alpha = 1 - exp(-2*pi*cutoff/rate)`. Requires 0 < cutoff < rate/2.
    pub fn new(cutoff_hz: f64, rate_hz: f64) -> Result<Self> {
        if !cutoff_hz.is_finite()
            || !rate_hz.is_finite()
            || cutoff_hz <= 0.0
            || rate_hz <= 0.0
            || cutoff_hz >= rate_hz / 2.0
        {
            return Err(Error::InvalidCutoff { cutoff_hz, rate_hz });
        }
        let alpha = 1.0 - (-2.0 * std::f64::consts::PI * cutoff_hz / rate_hz).exp();
        Self::with_alpha(alpha)
    }

    /// Builds a filter from an explicit smoothing coefficient in (0, 1].
    pub fn with_alpha(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self {
            alpha,
            y_prev: [0.0; 3],
            initialized: false,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Feeds one sample and returns the filtered sample with the same
    /// timestamp.
    pub fn step(&mut self, s: &AccelSample) -> AccelSample {
        let x = [s.x_g, s.y_g, s.z_g];
        if !self.initialized {
            self.y_prev = x;
            self.initialized = true;
        } else {
            for (y, xi) in self.y_prev.iter_mut().zip(x) {
                *y += self.alpha * (xi - *y);
            }
        }
        AccelSample::new(s.t_ms, self.y_prev[0], self.y_prev[1], self.y_prev[2])
    }

    /// Clears the state; the next sample passes through again.
    pub fn reset(&mut self) {
        self.y_prev = [0.0; 3];
        self.initialized = false;
    }
}

/// One timestamp with values from both streams.
///
/// `gap_exceeded` is set when the pair of source samples bracketing this
/// timestamp in stream B spans more than the configured gap, i.e. the B
/// value was interpolated across a hole rather than measured nearby.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedPair {
    pub t_ms: i64,
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub gap_exceeded: bool,
}

/// Resamples stream `b` onto stream `a`'s timestamps over their common
/// time window.
///
/// The output timeline is exactly `a`'s timestamps restricted to the
/// overlap; `b` values are linearly interpolated onto it. Pairs whose
/// bracketing `b` samples are more than `max_gap_ms` apart carry
/// `gap_exceeded = true`.
pub fn resample_align(
    a: &AccelStream,
    b: &AccelStream,
    max_gap_ms: i64,
) -> Result<Vec<AlignedPair>> {
    let (Some((a_first, a_last)), Some((b_first, b_last))) = (a.time_range_ms(), b.time_range_ms())
    else {
        return Err(Error::NoOverlap);
    };
    let window_start = a_first.max(b_first);
    let window_end = a_last.min(b_last);
    if window_start > window_end {
        return Err(Error::NoOverlap);
    }

    let mut pairs = Vec::new();
    // Index of the last b sample with timestamp <= current a timestamp.
    let mut left = 0usize;
    for sa in &a.samples {
        let t = sa.t_ms;
        if t < window_start || t > window_end {
            continue;
        }
        while left + 1 < b.samples.len() && b.samples[left + 1].t_ms <= t {
            left += 1;
        }
        let lo = &b.samples[left];
        let (value, span_ms) = if lo.t_ms == t {
            ([lo.x_g, lo.y_g, lo.z_g], 0)
        } else {
            let hi = &b.samples[left + 1];
            let frac = (t - lo.t_ms) as f64 / (hi.t_ms - lo.t_ms) as f64;
            (
                [
                    lo.x_g + frac * (hi.x_g - lo.x_g),
                    lo.y_g + frac * (hi.y_g - lo.y_g),
                    lo.z_g + frac * (hi.z_g - lo.z_g),
                ],
                hi.t_ms - lo.t_ms,
            )
        };
        pairs.push(AlignedPair {
            t_ms: t,
            a: [sa.x_g, sa.y_g, sa.z_g],
            b: value,
            gap_exceeded: span_ms > max_gap_ms,
        });
    }
    if pairs.is_empty() {
        return Err(Error::NoOverlap);
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Source;
    use proptest::prelude::*;

    fn stream_from_y(rate_hz: f64, dt_ms: i64, ys: &[f64]) -> AccelStream {
        let samples = ys
            .iter()
            .enumerate()
            .map(|(i, &y)| AccelSample::new(i as i64 * dt_ms, 0.0, y, 0.0))
            .collect();
        AccelStream::new(Source::Synthetic, rate_hz, samples).unwrap()
    }

    #[test]
    fn alpha_for_1hz_at_25hz() {
        // 1 - exp(-2*pi/25) evaluated independently.
        let f = LowPass::new(1.0, 25.0).unwrap();
        assert!((f.alpha() - 0.22223232082821098).abs() < 1e-12);
    }

    #[test]
    fn alpha_for_2p5hz_at_25hz() {
        let f = LowPass::new(2.5, 25.0).unwrap();
        assert!((f.alpha() - 0.4665119089088967).abs() < 1e-12);
    }

    #[test]
    fn cutoff_at_nyquist_rejected() {
        assert!(matches!(
            LowPass::new(12.5, 25.0),
            Err(Error::InvalidCutoff { .. })
        ));
        assert!(LowPass::new(0.0, 25.0).is_err());
        assert!(LowPass::new(-1.0, 25.0).is_err());
    }

    #[test]
    fn dc_gain_is_one() {
        let mut f = LowPass::new(1.0, 25.0).unwrap();
        let mut last = 0.0;
        for i in 0..200 {
            let out = f.step(&AccelSample::new(i * 40, 0.7, 0.7, 0.7));
            last = out.y_g;
        }
        assert!((last - 0.7).abs() < 1e-6);
    }

    #[test]
    fn zero_input_stays_zero() {
        let mut f = LowPass::new(1.0, 25.0).unwrap();
        for i in 0..100 {
            let out = f.step(&AccelSample::new(i * 40, 0.0, 0.0, 0.0));
            assert_eq!(out.y_g, 0.0);
        }
    }

    #[test]
    fn unit_step_follows_closed_form() {
        // Seed state with 0, then feed a unit step on y: after n steps the
        // output is 1 - (1-alpha)^n.
        let mut f = LowPass::with_alpha(0.2).unwrap();
        f.step(&AccelSample::new(0, 0.0, 0.0, 0.0));
        let mut outputs = Vec::new();
        for n in 1..=50 {
            let out = f.step(&AccelSample::new(n * 40, 0.0, 1.0, 0.0));
            outputs.push(out.y_g);
            let expected = 1.0 - 0.8f64.powi(n as i32);
            assert!(
                (out.y_g - expected).abs() < 1e-9,
                "step {n}: {} vs {expected}",
                out.y_g
            );
        }
        assert!((outputs[0] - 0.2).abs() < 1e-12);
        assert!((outputs[1] - 0.36).abs() < 1e-12);
        assert!((outputs[4] - 0.67232).abs() < 1e-12);
    }

    #[test]
    fn first_sample_passes_through() {
        let mut f = LowPass::new(1.0, 25.0).unwrap();
        let out = f.step(&AccelSample::new(0, 0.3, -0.9, 0.5));
        assert_eq!(out, AccelSample::new(0, 0.3, -0.9, 0.5));
    }

    #[test]
    fn sine_attenuation_at_ten_times_cutoff() {
        // First-order rolloff: a 10 Hz sine through a 1 Hz filter at 100 Hz
        // should lose at least 15 dB.
        let mut f = LowPass::new(1.0, 100.0).unwrap();
        let mut peak = 0.0f64;
        for i in 0..2000 {
            let t = i as f64 / 100.0;
            let y = (2.0 * std::f64::consts::PI * 10.0 * t).sin();
            let out = f.step(&AccelSample::new(i * 10, 0.0, y, 0.0));
            if i >= 1000 {
                peak = peak.max(out.y_g.abs());
            }
        }
        let attenuation_db = -20.0 * peak.log10();
        assert!(attenuation_db >= 15.0, "only {attenuation_db:.2} dB");
    }

    #[test]
    fn align_identity_timestamps() {
        let a = stream_from_y(25.0, 40, &[0.1, 0.2, 0.3, 0.4]);
        let b = stream_from_y(25.0, 40, &[1.0, 0.9, 0.8, 0.7]);
        let pairs = resample_align(&a, &b, 100).unwrap();
        assert_eq!(pairs.len(), 4);
        for (i, p) in pairs.iter().enumerate() {
            assert_eq!(p.t_ms, i as i64 * 40);
            assert_eq!(p.a[1], a.samples[i].y_g);
            assert_eq!(p.b[1], b.samples[i].y_g);
            assert!(!p.gap_exceeded);
        }
    }

    #[test]
    fn align_interpolates_linear_ramp() {
        // b ramps 0 -> 1 G on y over [0, 1000] ms at 50 Hz.
        let ys: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        let b = stream_from_y(50.0, 20, &ys);
        let a = AccelStream::new(
            Source::Synthetic,
            25.0,
            vec![
                AccelSample::new(500, 0.0, 0.0, 0.0),
                AccelSample::new(510, 0.0, 0.0, 0.0),
            ],
        )
        .unwrap();
        let pairs = resample_align(&a, &b, 100).unwrap();
        assert!((pairs[0].b[1] - 0.5).abs() < 1e-9);
        assert!((pairs[1].b[1] - 0.51).abs() < 1e-9);
    }

    #[test]
    fn align_flags_gap_across_hole() {
        // b sampled every 40 ms with a 400 ms hole between 200 and 600.
        let mut samples = Vec::new();
        for t in (0..=200).step_by(40) {
            samples.push(AccelSample::new(t, 0.0, 0.5, 0.0));
        }
        for t in (600..=800).step_by(40) {
            samples.push(AccelSample::new(t, 0.0, 0.5, 0.0));
        }
        let b = AccelStream::new(Source::Synthetic, 25.0, samples).unwrap();
        let ys = vec![0.0; 21];
        let a = stream_from_y(25.0, 40, &ys); // 0..800 ms
        let pairs = resample_align(&a, &b, 100).unwrap();
        for p in &pairs {
            let inside_hole = p.t_ms > 200 && p.t_ms < 600;
            assert_eq!(p.gap_exceeded, inside_hole, "t={}", p.t_ms);
        }
    }

    #[test]
    fn align_disjoint_streams_error() {
        let a = stream_from_y(25.0, 40, &[0.0, 0.0]);
        let mut b = stream_from_y(25.0, 40, &[0.0, 0.0]);
        for s in &mut b.samples {
            s.t_ms += 10_000;
        }
        assert!(matches!(resample_align(&a, &b, 100), Err(Error::NoOverlap)));
    }

    #[test]
    fn align_empty_stream_error() {
        let a = stream_from_y(25.0, 40, &[0.0, 0.0]);
        let b = AccelStream::new(Source::Synthetic, 25.0, vec![]).unwrap();
        assert!(matches!(resample_align(&a, &b, 100), Err(Error::NoOverlap)));
    }

    proptest! {
        #[test]
        fn lowpass_output_stays_within_input_hull(
            ys in proptest::collection::vec(-2.0f64..2.0, 2..100),
            alpha in 0.01f64..=1.0,
        ) {
            let mut f = LowPass::with_alpha(alpha).unwrap();
            let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for (i, &y) in ys.iter().enumerate() {
                let out = f.step(&AccelSample::new(i as i64 * 40, 0.0, y, 0.0));
                prop_assert!(out.y_g >= lo - 1e-12 && out.y_g <= hi + 1e-12);
            }
        }

        #[test]
        fn lowpass_is_linear(
            xs in proptest::collection::vec(-1.0f64..1.0, 1..60),
            zs in proptest::collection::vec(-1.0f64..1.0, 1..60),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
        ) {
            let n = xs.len().min(zs.len());
            let mut fx = LowPass::with_alpha(0.3).unwrap();
            let mut fz = LowPass::with_alpha(0.3).unwrap();
            let mut fc = LowPass::with_alpha(0.3).unwrap();
            for i in 0..n {
                let t = i as i64 * 40;
                let ox = fx.step(&AccelSample::new(t, 0.0, xs[i], 0.0)).y_g;
                let oz = fz.step(&AccelSample::new(t, 0.0, zs[i], 0.0)).y_g;
                let oc = fc
                    .step(&AccelSample::new(t, 0.0, a * xs[i] + b * zs[i], 0.0))
                    .y_g;
                prop_assert!((oc - (a * ox + b * oz)).abs() < 1e-9);
            }
        }

        #[test]
        fn align_self_gives_exact_copy(
            ys in proptest::collection::vec(-1.0f64..1.0, 1..80),
        ) {
            let s = stream_from_y(25.0, 40, &ys);
            let pairs = resample_align(&s, &s, 100).unwrap();
            prop_assert_eq!(pairs.len(), s.len());
            for (p, orig) in pairs.iter().zip(&s.samples) {
                prop_assert_eq!(p.t_ms, orig.t_ms);
                prop_assert_eq!(p.a, p.b);
                prop_assert!(!p.gap_exceeded);
            }
        }

        #[test]
        fn align_timestamps_subset_of_a(
            ya in proptest::collection::vec(-1.0f64..1.0, 2..60),
            yb in proptest::collection::vec(-1.0f64..1.0, 2..60),
            offset in -500i64..500,
        ) {
            let a = stream_from_y(25.0, 40, &ya);
            let mut b = stream_from_y(25.0, 40, &yb);
            for s in &mut b.samples {
                s.t_ms += offset;
            }
            if let Ok(pairs) = resample_align(&a, &b, 100) {
                let a_times: std::collections::HashSet<i64> =
                    a.samples.iter().map(|s| s.t_ms).collect();
                for p in pairs {
                    prop_assert!(a_times.contains(&p.t_ms));
                }
            }
        }
    }
}
