//! Subtraction method: chest minus phone, and residual statistics.
//!
//! Subtracting the phone-measured vehicle acceleration from the chest
//! signal would in principle isolate the wearer's own motion. Sensor
//! gain, bias, and latency differences keep the residual from vanishing;
//! the metrics here quantify that.

use crate::error::{Error, Result};
use crate::filters::AlignedPair;

/// One per-axis difference at an aligned timestamp, in G.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    pub t_ms: i64,
    pub x_g: f64,
    pub y_g: f64,
    pub z_g: f64,
}

/// Per-axis differences over the aligned window, plus how many pairs
/// were dropped by the gap rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualStream {
    pub samples: Vec<ResidualSample>,
    pub excluded_count: usize,
}

/// RMS and peak statistics of a residual stream, in G.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualMetrics {
    pub rms_x_g: f64,
    pub rms_y_g: f64,
    pub rms_z_g: f64,
    /// RMS over all three axes pooled together.
    pub rms_pooled_g: f64,
    pub max_abs_x_g: f64,
    pub max_abs_y_g: f64,
    pub max_abs_z_g: f64,
    pub n: usize,
}

/// Computes `a - b` per axis for every pair that passed the gap rule.
///
/// Gap-flagged pairs are skipped and counted in `excluded_count` so data
/// loss is visible. Errors when nothing is left.
pub fn subtract_streams(pairs: &[AlignedPair]) -> Result<ResidualStream> {
    let mut samples = Vec::with_capacity(pairs.len());
    let mut excluded_count = 0;
    for p in pairs {
        if p.gap_exceeded {
            excluded_count += 1;
            continue;
        }
        samples.push(ResidualSample {
            t_ms: p.t_ms,
            x_g: p.a[0] - p.b[0],
            y_g: p.a[1] - p.b[1],
            z_g: p.a[2] - p.b[2],
        });
    }
    if samples.is_empty() {
        return Err(Error::AllGapsExcluded { pairs: pairs.len() });
    }
    Ok(ResidualStream {
        samples,
        excluded_count,
    })
}

/// RMS (root of mean square) and max-abs per axis plus the pooled RMS
/// over all axes.
pub fn residual_metrics(r: &ResidualStream) -> Result<ResidualMetrics> {
    if r.samples.is_empty() {
        return Err(Error::EmptyResidual);
    }
    let n = r.samples.len();
    let mut sum_sq = [0.0f64; 3];
    let mut max_abs = [0.0f64; 3];
    for s in &r.samples {
        for (i, v) in [s.x_g, s.y_g, s.z_g].into_iter().enumerate() {
            sum_sq[i] += v * v;
            max_abs[i] = max_abs[i].max(v.abs());
        }
    }
    let nf = n as f64;
    Ok(ResidualMetrics {
        rms_x_g: (sum_sq[0] / nf).sqrt(),
        rms_y_g: (sum_sq[1] / nf).sqrt(),
        rms_z_g: (sum_sq[2] / nf).sqrt(),
        rms_pooled_g: ((sum_sq[0] + sum_sq[1] + sum_sq[2]) / (3.0 * nf)).sqrt(),
        max_abs_x_g: max_abs[0],
        max_abs_y_g: max_abs[1],
        max_abs_z_g: max_abs[2],
        n,
    })
}
