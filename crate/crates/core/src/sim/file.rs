//! Plain-text scenario files.
//!
//! Key=value lines, one per field, `#` comments and blank lines ignored.
//! The first significant line must be `schema=1`. `maneuver` and
//! `pickup` keys repeat, with positional comma-separated values:
//!
//! ```text
//! schema=1
//! kind=regular_bus
//! duration_s=60
//! grade_percent=0
//! sway_deg=2
//! seed=7
//! # start_s,duration_s,fore_aft_g,lateral_g
//! maneuver=0,4,0.1,0
//! # start_s,dip_s,hold_s,target_alpha_deg
//! pickup=10,0.8,1.5,-30
//! ```
//!
//! A built-in `kind` with no explicit `maneuver` lines gets its
//! canonical maneuver cycle.

use std::path::Path;

use super::{canonical_maneuvers, Maneuver, Pickup, ScenarioKind, ScenarioSpec};
use crate::error::{Error, Result};

impl ScenarioSpec {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn to_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }

    /// Parses the key=value scenario format. Errors carry 1-based line
    /// numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kind = ScenarioKind::Custom;
        let mut duration_s = 60.0;
        let mut grade_percent: Option<f64> = None;
        let mut sway_deg = 2.0;
        let mut seed = 0u64;
        let mut maneuvers = Vec::new();
        let mut pickups = Vec::new();
        let mut saw_schema = false;

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected key=value, got `{line}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if !saw_schema {
                if key != "schema" || value != "1" {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "scenario file must start with `schema=1`".into(),
                    });
                }
                saw_schema = true;
                continue;
            }
            match key {
                "kind" => {
                    kind = value
                        .parse()
                        .map_err(|msg| Error::Parse { line: line_no, msg })?;
                }
                "duration_s" => duration_s = parse_f64(value, line_no, "duration_s")?,
                "grade_percent" => {
                    grade_percent = Some(parse_f64(value, line_no, "grade_percent")?)
                }
                "sway_deg" => sway_deg = parse_f64(value, line_no, "sway_deg")?,
                "seed" => {
                    seed = value.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("seed must be an unsigned integer, got `{value}`"),
                    })?;
                }
                "maneuver" => {
                    let v = parse_fields(value, 4, line_no, "maneuver")?;
                    maneuvers.push(Maneuver {
                        start_s: v[0],
                        duration_s: v[1],
                        fore_aft_g: v[2],
                        lateral_g: v[3],
                    });
                }
                "pickup" => {
                    let v = parse_fields(value, 4, line_no, "pickup")?;
                    pickups.push(Pickup {
                        start_s: v[0],
                        dip_s: v[1],
                        hold_s: v[2],
                        target_alpha_deg: v[3],
                    });
                }
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unknown key `{other}`"),
                    });
                }
            }
        }
        if !saw_schema {
            return Err(Error::Parse {
                line: 1,
                msg: "scenario file must start with `schema=1`".into(),
            });
        }

        let grade_percent = grade_percent.unwrap_or(match kind {
            ScenarioKind::MountainClimb => 20.0,
            _ => 0.0,
        });
        if maneuvers.is_empty() && kind != ScenarioKind::Custom {
            maneuvers = canonical_maneuvers(kind, duration_s);
        }
        let spec = ScenarioSpec {
            kind,
            duration_s,
            grade_percent,
            sway_deg,
            maneuvers,
            pickups,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str("schema=1\n");
        out.push_str(&format!("kind={}\n", self.kind));
        out.push_str(&format!("duration_s={}\n", self.duration_s));
        out.push_str(&format!("grade_percent={}\n", self.grade_percent));
        out.push_str(&format!("sway_deg={}\n", self.sway_deg));
        out.push_str(&format!("seed={}\n", self.seed));
        for m in &self.maneuvers {
            out.push_str(&format!(
                "maneuver={},{},{},{}\n",
                m.start_s, m.duration_s, m.fore_aft_g, m.lateral_g
            ));
        }
        for p in &self.pickups {
            out.push_str(&format!(
                "pickup={},{},{},{}\n",
                p.start_s, p.dip_s, p.hold_s, p.target_alpha_deg
            ));
        }
        out
    }
}

fn parse_f64(value: &str, line: usize, key: &str) -> Result<f64> {
    value.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("{key} must be a number, got `{value}`"),
    })
}

fn parse_fields(value: &str, expected: usize, line: usize, key: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != expected {
        return Err(Error::Parse {
            line,
            msg: format!(
                "{key} needs {expected} comma-separated values, got {}",
                parts.len()
            ),
        });
    }
    parts
        .iter()
        .map(|p| {
            p.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("{key}: `{p}` is not a number"),
            })
        })
        .collect()
}
