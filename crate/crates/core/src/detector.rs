//! Threshold detection of dangerous forward-bend postures.
//!
//! A streaming state machine low-pass filters the Y axis and compares it
//! against a trigger level (default -0.34 G, the gravity projection of a
//! 20-degree head-below-horizontal lean). Hysteresis and a dwell time
//! keep sensor noise from chattering events on and off. Setting
//! `release_g` just above `threshold_g` and `min_duration_ms` to zero
//! recovers plain single-threshold behavior.

use crate::error::{Error, Result};
use crate::filters::LowPass;
use crate::model::{tilt_from_y, AccelSample, AccelStream};

/// Trigger, release, dwell, and pre-filter settings.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    /// Filtered Y at or below this level triggers, in G.
    pub threshold_g: f64,
    /// Filtered Y at or above this level ends an active event, in G.
    /// Must sit above `threshold_g`.
    pub release_g: f64,
    /// Continuous triggering required before an event is confirmed.
    pub min_duration_ms: i64,
    /// Pre-filter cutoff, Hz.
    pub filter_cutoff_hz: f64,
    /// Expected sample rate, Hz.
    pub rate_hz: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            threshold_g: -0.34,
            release_g: -0.25,
            min_duration_ms: 300,
            filter_cutoff_hz: 1.0,
            rate_hz: 25.0,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |field, reason: String| Err(Error::InvalidConfig { field, reason });
        if !self.threshold_g.is_finite() {
            return fail(
                "threshold_g",
                format!("must be finite, got {}", self.threshold_g),
            );
        }
        if !self.release_g.is_finite() || self.release_g <= self.threshold_g {
            return fail(
                "release_g",
                format!(
                    "must be greater than threshold_g ({}), got {}",
                    self.threshold_g, self.release_g
                ),
            );
        }
        if self.min_duration_ms < 0 {
            return fail(
                "min_duration_ms",
                format!("must be >= 0, got {}", self.min_duration_ms),
            );
        }
        if self.rate_hz <= 0.0 || !self.rate_hz.is_finite() {
            return fail("rate_hz", format!("must be positive, got {}", self.rate_hz));
        }
        if !self.filter_cutoff_hz.is_finite()
            || self.filter_cutoff_hz <= 0.0
            || self.filter_cutoff_hz >= self.rate_hz / 2.0
        {
            return fail(
                "filter_cutoff_hz",
                format!(
                    "must satisfy 0 < cutoff < rate/2 ({} Hz), got {}",
                    self.rate_hz / 2.0,
                    self.filter_cutoff_hz
                ),
            );
        }
        Ok(())
    }
}

/// One detected dangerous-posture interval.
#[derive(Debug, Clone, PartialEq)]
pub struct PostureEvent {
    pub start_ms: i64,
    pub end_ms: i64,
    /// Most negative filtered Y seen during the event, in G.
    pub min_y_g: f64,
    /// Tilt angle corresponding to `min_y_g`, degrees.
    pub min_alpha_deg: f64,
    /// Dwell requirement was satisfied.
    pub confirmed: bool,
    /// Event was still open when the stream ended and was closed at the
    /// last timestamp instead of by a release crossing.
    pub truncated: bool,
}

/// Emitted by [`Detector::step`] when the state machine changes phase in
/// an externally visible way.
#[derive(Debug, Clone, PartialEq)]
pub enum Transition {
    /// Dwell satisfied; an event is now active. `start_ms` is the first
    /// triggering timestamp, not the confirmation timestamp.
    Started { start_ms: i64 },
    /// The active or candidate event closed.
    Ended(PostureEvent),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Idle,
    Candidate,
    Active,
}

/// Streaming posture detector; one instance per stream.
#[derive(Debug, Clone)]
pub struct Detector {
    config: DetectorConfig,
    filter: LowPass,
    phase: Phase,
    candidate_since_ms: i64,
    min_y_g: f64,
    last_t_ms: Option<i64>,
    fed: usize,
}

impl Detector {
    pub fn new(config: DetectorConfig) -> Result<Self> {
        config.validate()?;
        let filter = LowPass::new(config.filter_cutoff_hz, config.rate_hz)?;
        Ok(Self {
            config,
            filter,
            phase: Phase::Idle,
            candidate_since_ms: 0,
            min_y_g: f64::INFINITY,
            last_t_ms: None,
            fed: 0,
        })
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    fn close_event(&mut self, end_ms: i64, confirmed: bool, truncated: bool) -> PostureEvent {
        let min_y_g = self.min_y_g;
        self.phase = Phase::Idle;
        self.min_y_g = f64::INFINITY;
        PostureEvent {
            start_ms: self.candidate_since_ms,
            end_ms,
            min_y_g,
            min_alpha_deg: tilt_from_y(min_y_g).alpha_deg,
            confirmed,
            truncated,
        }
    }

    /// Feeds one sample. Timestamps must strictly increase across calls.
    pub fn step(&mut self, s: &AccelSample) -> Result<Option<Transition>> {
        let index = self.fed;
        if ![s.x_g, s.y_g, s.z_g].iter().all(|c| c.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        if let Some(last) = self.last_t_ms {
            if s.t_ms <= last {
                return Err(Error::NonMonotonicSample {
                    index,
                    t_ms: s.t_ms,
                });
            }
        }
        self.last_t_ms = Some(s.t_ms);
        self.fed += 1;

        let y_f = self.filter.step(s).y_g;
        let triggering = y_f <= self.config.threshold_g;

        match self.phase {
            Phase::Idle => {
                if triggering {
                    self.phase = Phase::Candidate;
                    self.candidate_since_ms = s.t_ms;
                    self.min_y_g = y_f;
                    if s.t_ms - self.candidate_since_ms >= self.config.min_duration_ms {
                        self.phase = Phase::Active;
                        return Ok(Some(Transition::Started {
                            start_ms: self.candidate_since_ms,
                        }));
                    }
                }
                Ok(None)
            }
            Phase::Candidate => {
                if triggering {
                    self.min_y_g = self.min_y_g.min(y_f);
                    if s.t_ms - self.candidate_since_ms >= self.config.min_duration_ms {
                        self.phase = Phase::Active;
                        return Ok(Some(Transition::Started {
                            start_ms: self.candidate_since_ms,
                        }));
                    }
                    Ok(None)
                } else {
                    // Dwell not met; discard the candidate silently.
                    self.phase = Phase::Idle;
                    self.min_y_g = f64::INFINITY;
                    Ok(None)
                }
            }
            Phase::Active => {
                self.min_y_g = self.min_y_g.min(y_f);
                if y_f >= self.config.release_g {
                    let event = self.close_event(s.t_ms, true, false);
                    return Ok(Some(Transition::Ended(event)));
                }
                Ok(None)
            }
        }
    }

    /// Closes any open candidate or active event at the last fed
    /// timestamp. Active events stay confirmed; a candidate whose dwell
    /// never elapsed comes back unconfirmed. Both are marked truncated.
    pub fn finish(&mut self) -> Option<PostureEvent> {
        let end_ms = self.last_t_ms?;
        match self.phase {
            Phase::Idle => None,
            Phase::Active => Some(self.close_event(end_ms, true, true)),
            Phase::Candidate => Some(self.close_event(end_ms, false, true)),
        }
    }
}

/// Runs a fresh detector over a whole stream, returning the events in
/// time order. Equivalent to feeding every sample through [`Detector::step`]
/// and collecting the `Ended` transitions plus the end-of-stream closure.
pub fn detect_batch(stream: &AccelStream, config: &DetectorConfig) -> Result<Vec<PostureEvent>> {
    let mut detector = Detector::new(config.clone())?;
    let mut events = Vec::new();
    for s in &stream.samples {
        if let Some(Transition::Ended(e)) = detector.step(s)? {
            events.push(e);
        }
    }
    if let Some(e) = detector.finish() {
        events.push(e);
    }
    Ok(events)
}
