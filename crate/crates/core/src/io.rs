//! File formats: sample CSV, line-delimited event records, and
//! ground-truth interval files.
//!
//! All formats are plain text, diff-able, and round-trip losslessly at
//! their stated precision. Every parse error carries a 1-based line
//! number.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::detector::{DetectorConfig, PostureEvent};
use crate::error::{Error, Result};
use crate::model::{AccelSample, AccelStream, Source, MAX_ABS_G};

const CSV_HEADER: &str = "t_ms,x_g,y_g,z_g";

/// Reads a sample CSV. The nominal rate is inferred as the reciprocal of
/// the median timestamp spacing; source is `synthetic` (the file format
/// does not carry provenance).
pub fn read_csv(path: &Path) -> Result<AccelStream> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text)
}

/// Parses sample-CSV text; see [`read_csv`].
pub fn parse_csv(text: &str) -> Result<AccelStream> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header `{CSV_HEADER}`, got `{}`", header.trim()),
            });
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("empty file; expected header `{CSV_HEADER}`"),
            });
        }
    }

    let mut samples: Vec<AccelSample> = Vec::new();
    for (i, raw) in lines {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 4 comma-separated fields, got {}", fields.len()),
            });
        }
        let t_ms: i64 = fields[0].trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("`{}` is not an integer timestamp", fields[0].trim()),
        })?;
        let mut comps = [0.0f64; 3];
        for (k, f) in fields[1..].iter().enumerate() {
            let v: f64 = f.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("`{}` is not a number", f.trim()),
            })?;
            if !v.is_finite() || v.abs() > MAX_ABS_G {
                return Err(Error::OutOfRangeValue {
                    line: line_no,
                    value: v,
                    limit: MAX_ABS_G,
                });
            }
            comps[k] = v;
        }
        if let Some(prev) = samples.last() {
            if t_ms <= prev.t_ms {
                return Err(Error::NonMonotonicLine {
                    line: line_no,
                    t_ms,
                });
            }
        }
        samples.push(AccelSample::new(t_ms, comps[0], comps[1], comps[2]));
    }

    let rate_hz = infer_rate_hz(&samples);
    AccelStream::new(Source::Synthetic, rate_hz, samples)
}

/// Median reciprocal spacing, Hz; 1 Hz for streams too short to infer.
fn infer_rate_hz(samples: &[AccelSample]) -> f64 {
    if samples.len() < 2 {
        return 1.0;
    }
    let mut gaps: Vec<i64> = samples.windows(2).map(|w| w[1].t_ms - w[0].t_ms).collect();
    gaps.sort_unstable();
    let mid = gaps.len() / 2;
    let median = if gaps.len().is_multiple_of(2) {
        (gaps[mid - 1] + gaps[mid]) as f64 / 2.0
    } else {
        gaps[mid] as f64
    };
    1000.0 / median
}

/// Writes the sample CSV with 6 fractional digits per component.
pub fn write_csv(stream: &AccelStream, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(stream))?;
    Ok(())
}

pub fn csv_string(stream: &AccelStream) -> String {
    let mut out = String::with_capacity(32 * (stream.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in &stream.samples {
        let _ = writeln!(out, "{},{:.6},{:.6},{:.6}", s.t_ms, s.x_g, s.y_g, s.z_g);
    }
    out
}

/// A detected event plus the provenance needed to evaluate it: which
/// stream it came from and a fingerprint of the detector settings.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub event: PostureEvent,
    pub source: Source,
    pub config_fingerprint: String,
}

/// Short stable hash of the detector settings, so evaluations can refuse
/// to mix events produced under different configurations.
pub fn config_fingerprint(config: &DetectorConfig) -> String {
    let canonical = format!(
        "threshold_g={};release_g={};min_duration_ms={};filter_cutoff_hz={};rate_hz={}",
        config.threshold_g,
        config.release_g,
        config.min_duration_ms,
        config.filter_cutoff_hz,
        config.rate_hz
    );
    let digest = Sha256::digest(canonical.as_bytes());
    digest[..8].iter().fold(String::new(), |mut acc, b| {
        let _ = write!(acc, "{b:02x}");
        acc
    })
}

/// Writes one self-describing `key=value` record per line. An empty list
/// produces an empty file.
pub fn write_events(records: &[EventRecord], path: &Path) -> Result<()> {
    std::fs::write(path, events_string(records))?;
    Ok(())
}

pub fn events_string(records: &[EventRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let e = &r.event;
        let _ = writeln!(
            out,
            "start_ms={} end_ms={} min_y_g={} min_alpha_deg={} confirmed={} truncated={} source={} config_fingerprint={}",
            e.start_ms,
            e.end_ms,
            e.min_y_g,
            e.min_alpha_deg,
            e.confirmed,
            e.truncated,
            r.source,
            r.config_fingerprint
        );
    }
    out
}

/// Reads event records; blank lines are ignored, unknown keys tolerated.
pub fn read_events(path: &Path) -> Result<Vec<EventRecord>> {
    let text = std::fs::read_to_string(path)?;
    parse_events(&text)
}

pub fn parse_events(text: &str) -> Result<Vec<EventRecord>> {
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        records.push(parse_event_line(line, line_no)?);
    }
    Ok(records)
}

fn parse_event_line(line: &str, line_no: usize) -> Result<EventRecord> {
    let mut start_ms = None;
    let mut end_ms = None;
    let mut min_y_g = None;
    let mut min_alpha_deg = None;
    let mut confirmed = None;
    let mut truncated = false;
    let mut source = None;
    let mut config = None;

    for token in line.split_whitespace() {
        let Some((key, value)) = token.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected key=value token, got `{token}`"),
            });
        };
        let bad = |what: &str| Error::Parse {
            line: line_no,
            msg: format!("{key}: `{value}` is not {what}"),
        };
        match key {
            "start_ms" => start_ms = Some(value.parse::<i64>().map_err(|_| bad("an integer"))?),
            "end_ms" => end_ms = Some(value.parse::<i64>().map_err(|_| bad("an integer"))?),
            "min_y_g" => min_y_g = Some(value.parse::<f64>().map_err(|_| bad("a number"))?),
            "min_alpha_deg" => {
                min_alpha_deg = Some(value.parse::<f64>().map_err(|_| bad("a number"))?)
            }
            "confirmed" => confirmed = Some(value.parse::<bool>().map_err(|_| bad("a bool"))?),
            "truncated" => truncated = value.parse::<bool>().map_err(|_| bad("a bool"))?,
            "source" => {
                source = Some(
                    value
                        .parse::<Source>()
                        .map_err(|msg| Error::Parse { line: line_no, msg })?,
                )
            }
            "config_fingerprint" => config = Some(value.to_string()),
            _ => {} // tolerate unknown keys from newer writers
        }
    }

    let missing = |field: &str| Error::Parse {
        line: line_no,
        msg: format!("missing required field `{field}`"),
    };
    Ok(EventRecord {
        event: PostureEvent {
            start_ms: start_ms.ok_or_else(|| missing("start_ms"))?,
            end_ms: end_ms.ok_or_else(|| missing("end_ms"))?,
            min_y_g: min_y_g.ok_or_else(|| missing("min_y_g"))?,
            min_alpha_deg: min_alpha_deg.ok_or_else(|| missing("min_alpha_deg"))?,
            confirmed: confirmed.ok_or_else(|| missing("confirmed"))?,
            truncated,
        },
        source: source.ok_or_else(|| missing("source"))?,
        config_fingerprint: config.ok_or_else(|| missing("config_fingerprint"))?,
    })
}

const TRUTH_HEADER: &str = "start_ms,end_ms";

/// Writes ground-truth pick-up intervals as a two-column CSV.
pub fn write_truth(intervals: &[(i64, i64)], path: &Path) -> Result<()> {
    let mut out = String::from(TRUTH_HEADER);
    out.push('\n');
    for (start, end) in intervals {
        let _ = writeln!(out, "{start},{end}");
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_truth(path: &Path) -> Result<Vec<(i64, i64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == TRUTH_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header `{TRUTH_HEADER}`"),
            });
        }
    }
    let mut intervals = Vec::new();
    for (i, raw) in lines {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let Some((a, b)) = line.split_once(',') else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected start,end, got `{line}`"),
            });
        };
        let parse = |s: &str| {
            s.trim().parse::<i64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("`{}` is not an integer", s.trim()),
            })
        };
        let interval = (parse(a)?, parse(b)?);
        if interval.1 < interval.0 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("interval end {} precedes start {}", interval.1, interval.0),
            });
        }
        intervals.push(interval);
    }
    Ok(intervals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tilt_from_y;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_line() {
        let text = "t_ms,x_g,y_g,z_g\n0,0.010000,0.980000,-0.020000\n";
        let stream = parse_csv(text).unwrap();
        assert_eq!(stream.samples.len(), 1);
        let s = stream.samples[0];
        assert_eq!(s.t_ms, 0);
        assert_eq!(s.x_g, 0.01);
        assert_eq!(s.y_g, 0.98);
        assert_eq!(s.z_g, -0.02);
    }

    #[test]
    fn malformed_value_names_line_3() {
        let text = "t_ms,x_g,y_g,z_g\n0,0.0,1.0,0.0\n40,abc,0,0\n";
        match parse_csv(text).unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("abc"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_monotonic_names_line() {
        let text = "t_ms,x_g,y_g,z_g\n0,0,1,0\n40,0,1,0\n40,0,1,0\n";
        assert!(matches!(
            parse_csv(text).unwrap_err(),
            Error::NonMonotonicLine { line: 4, t_ms: 40 }
        ));
    }

    #[test]
    fn out_of_range_value_rejected() {
        let text = "t_ms,x_g,y_g,z_g\n0,0,17.0,0\n";
        assert!(matches!(
            parse_csv(text).unwrap_err(),
            Error::OutOfRangeValue { line: 2, .. }
        ));
    }

    #[test]
    fn missing_header_rejected() {
        let text = "0,0,1,0\n";
        assert!(matches!(
            parse_csv(text).unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn rate_inferred_from_median_spacing() {
        let text = "t_ms,x_g,y_g,z_g\n0,0,1,0\n40,0,1,0\n80,0,1,0\n120,0,1,0\n";
        let stream = parse_csv(text).unwrap();
        assert!((stream.rate_hz - 25.0).abs() < 1e-9);
    }

    fn record(start_ms: i64, min_y: f64, confirmed: bool) -> EventRecord {
        EventRecord {
            event: PostureEvent {
                start_ms,
                end_ms: start_ms + 1500,
                min_y_g: min_y,
                min_alpha_deg: tilt_from_y(min_y).alpha_deg,
                confirmed,
                truncated: false,
            },
            source: Source::ChestSensor,
            config_fingerprint: config_fingerprint(&DetectorConfig::default()),
        }
    }

    #[test]
    fn empty_event_list_is_empty_file() {
        assert_eq!(events_string(&[]), "");
        assert_eq!(parse_events("").unwrap(), vec![]);
    }

    #[test]
    fn event_record_round_trips_exactly() {
        let records = vec![
            record(2000, -0.447213595499958, true),
            record(9000, -0.5, false),
        ];
        let text = events_string(&records);
        let parsed = parse_events(&text).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn trailing_blank_lines_accepted() {
        let records = vec![record(0, -0.4, true)];
        let text = format!("{}\n\n", events_string(&records));
        assert_eq!(parse_events(&text).unwrap(), records);
    }

    #[test]
    fn event_parse_error_names_line() {
        let text = "start_ms=0 end_ms=10 min_y_g=x min_alpha_deg=0 confirmed=true source=phone config_fingerprint=ff\n";
        assert!(matches!(
            parse_events(text).unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        let two = format!("{}not a record\n", events_string(&[record(0, -0.4, true)]));
        assert!(matches!(
            parse_events(&two).unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
    }

    #[test]
    fn missing_field_rejected() {
        let text =
            "start_ms=0 end_ms=10 min_y_g=-0.4 min_alpha_deg=-23 confirmed=true source=phone\n";
        match parse_events(text).unwrap_err() {
            Error::Parse { line: 1, msg } => assert!(msg.contains("config")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fingerprint_depends_on_fields() {
        let a = config_fingerprint(&DetectorConfig::default());
        let b = config_fingerprint(&DetectorConfig {
            threshold_g: -0.35,
            ..DetectorConfig::default()
        });
        assert_eq!(a.len(), 16);
        assert_ne!(a, b);
        assert_eq!(a, config_fingerprint(&DetectorConfig::default()));
    }

    #[test]
    fn truth_file_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("truth.csv");
        let intervals = vec![(1000, 2500), (10_000, 12_000)];
        write_truth(&intervals, &path).unwrap();
        assert_eq!(read_truth(&path).unwrap(), intervals);

        write_truth(&[], &path).unwrap();
        assert_eq!(read_truth(&path).unwrap(), vec![]);
    }

    proptest! {
        #[test]
        fn csv_round_trip_within_precision(
            ys in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0), 1..40),
        ) {
            let samples: Vec<AccelSample> = ys
                .iter()
                .enumerate()
                .map(|(i, &(x, y, z))| AccelSample::new(i as i64 * 40, x, y, z))
                .collect();
            let stream = AccelStream::new(Source::Synthetic, 25.0, samples).unwrap();
            let parsed = parse_csv(&csv_string(&stream)).unwrap();
            prop_assert_eq!(parsed.len(), stream.len());
            for (a, b) in parsed.samples.iter().zip(&stream.samples) {
                prop_assert_eq!(a.t_ms, b.t_ms);
                prop_assert!((a.x_g - b.x_g).abs() <= 1e-6);
                prop_assert!((a.y_g - b.y_g).abs() <= 1e-6);
                prop_assert!((a.z_g - b.z_g).abs() <= 1e-6);
            }
        }

        #[test]
        fn event_round_trip_is_lossless(
            entries in proptest::collection::vec(
                (0i64..1_000_000, 1i64..10_000, -1.0f64..0.0, proptest::bool::ANY, proptest::bool::ANY),
                0..20,
            ),
        ) {
            let mut t = 0i64;
            let records: Vec<EventRecord> = entries
                .iter()
                .map(|&(gap, len, min_y, confirmed, truncated)| {
                    let start = t + gap;
                    t = start + len;
                    EventRecord {
                        event: PostureEvent {
                            start_ms: start,
                            end_ms: start + len,
                            min_y_g: min_y,
                            min_alpha_deg: tilt_from_y(min_y).alpha_deg,
                            confirmed,
                            truncated,
                        },
                        source: Source::Phone,
                        config_fingerprint: "00ff00ff00ff00ff".into(),
                    }
                })
                .collect();
            let parsed = parse_events(&events_string(&records)).unwrap();
            prop_assert_eq!(parsed, records);
        }
    }
}
