//! Command-line pipeline: simulate scenarios, detect posture events,
//! subtract streams, and evaluate detections against ground truth.
//!
//! Exit codes: 0 success, 1 usage/configuration error, 2 data error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use leanguard::io::{self, EventRecord};
use leanguard::{
    detect_batch, eval_events, resample_align, residual_metrics, subtract_streams, DetectorConfig,
    Mounting, ScenarioKind, ScenarioSpec, SensorModel,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

#[derive(Parser)]
#[command(
    name = "leanguard",
    version,
    about = "Driver posture estimation from chest acceleration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a synthetic scenario to a sample CSV (plus optional truth file)
    Simulate {
        /// Built-in kind (handcart|bus|mountain) or path to a scenario file
        #[arg(long)]
        scenario: String,
        /// Scenario length in seconds (overrides the file value)
        #[arg(long)]
        duration: Option<f64>,
        /// Random seed (overrides the file value)
        #[arg(long)]
        seed: Option<u64>,
        /// Which sensor to render
        #[arg(long, value_enum, default_value_t = SensorArg::Chest)]
        sensor: SensorArg,
        #[arg(long)]
        out: PathBuf,
        /// Also write ground-truth pick-up intervals
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Run the posture detector over a sample CSV
    Detect {
        #[arg(long = "in")]
        input: PathBuf,
        /// Trigger level on filtered Y, G
        #[arg(long, default_value_t = -0.34, allow_hyphen_values = true)]
        threshold: f64,
        /// Release level on filtered Y, G
        #[arg(long, default_value_t = -0.25, allow_hyphen_values = true)]
        release: f64,
        /// Dwell before an event is confirmed, ms
        #[arg(long = "dwell-ms", default_value_t = 300)]
        dwell_ms: i64,
        /// Pre-filter cutoff, Hz
        #[arg(long = "cutoff-hz", default_value_t = 1.0)]
        cutoff_hz: f64,
        /// Sample rate, Hz (default: inferred from timestamp spacing)
        #[arg(long = "rate-hz")]
        rate_hz: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Subtract stream B from stream A on A's timestamps
    Diff {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Longest B-sample gap to interpolate across, ms
        #[arg(long = "max-gap-ms", default_value_t = 100)]
        max_gap_ms: i64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare detected events against a ground-truth file
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Start-time matching tolerance, ms
        #[arg(long = "tol-ms", default_value_t = 500)]
        tol_ms: i64,
    },
    /// Extract one axis as a (t_ms, value) series for plotting
    Plotdata {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        axis: AxisArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SensorArg {
    Chest,
    Phone,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    X,
    Y,
    Z,
    Mag,
}

/// An error plus the exit code it should produce.
struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }

    fn data(err: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_DATA,
            msg: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                // Single-line diagnostic; clap's rendering is multi-line.
                let first = e.to_string();
                let line = first
                    .lines()
                    .find(|l| !l.trim().is_empty())
                    .unwrap_or("usage error");
                eprintln!("{line}");
                return ExitCode::from(EXIT_USAGE);
            }
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            scenario,
            duration,
            seed,
            sensor,
            out,
            truth,
        } => {
            let mut spec = load_scenario(&scenario)?;
            if let Some(d) = duration {
                spec.duration_s = d;
                if spec.kind != ScenarioKind::Custom {
                    spec.maneuvers = leanguard::sim::canonical_maneuvers(spec.kind, d);
                }
            }
            if let Some(s) = seed {
                spec.seed = s;
            }
            spec.validate()
                .map_err(|e| CliError::usage(e.to_string()))?;
            let (model, mounting) = match sensor {
                SensorArg::Chest => (SensorModel::chest(), Mounting::Torso),
                SensorArg::Phone => (SensorModel::phone(), Mounting::VehicleFixed),
            };
            let (stream, ground_truth) =
                leanguard::render_scenario(&spec, &model, mounting).map_err(CliError::data)?;
            io::write_csv(&stream, &out).map_err(CliError::data)?;
            if let Some(truth_path) = truth {
                io::write_truth(&ground_truth.pickup_intervals, &truth_path)
                    .map_err(CliError::data)?;
            }
            println!("samples={}", stream.len());
            println!(
                "duration_ms={}",
                stream.time_range_ms().map_or(0, |(a, b)| b - a)
            );
            Ok(())
        }
        Command::Detect {
            input,
            threshold,
            release,
            dwell_ms,
            cutoff_hz,
            rate_hz,
            out,
        } => {
            let stream = io::read_csv(&input).map_err(CliError::data)?;
            let config = DetectorConfig {
                threshold_g: threshold,
                release_g: release,
                min_duration_ms: dwell_ms,
                filter_cutoff_hz: cutoff_hz,
                rate_hz: rate_hz.unwrap_or(stream.rate_hz),
            };
            config
                .validate()
                .map_err(|e| CliError::usage(e.to_string()))?;
            let events = detect_batch(&stream, &config).map_err(CliError::data)?;
            let fingerprint = io::config_fingerprint(&config);
            let records: Vec<EventRecord> = events
                .into_iter()
                .map(|event| EventRecord {
                    event,
                    source: stream.source,
                    config_fingerprint: fingerprint.clone(),
                })
                .collect();
            io::write_events(&records, &out).map_err(CliError::data)?;
            println!("events={}", records.len());
            println!(
                "confirmed={}",
                records.iter().filter(|r| r.event.confirmed).count()
            );
            Ok(())
        }
        Command::Diff {
            a,
            b,
            max_gap_ms,
            out,
        } => {
            let stream_a = io::read_csv(&a).map_err(CliError::data)?;
            let stream_b = io::read_csv(&b).map_err(CliError::data)?;
            let pairs = resample_align(&stream_a, &stream_b, max_gap_ms).map_err(CliError::data)?;
            let residual = subtract_streams(&pairs).map_err(CliError::data)?;
            let metrics = residual_metrics(&residual).map_err(CliError::data)?;

            let samples: Vec<leanguard::AccelSample> = residual
                .samples
                .iter()
                .map(|r| leanguard::AccelSample::new(r.t_ms, r.x_g, r.y_g, r.z_g))
                .collect();
            let rate = stream_a.rate_hz;
            let out_stream =
                leanguard::AccelStream::new(leanguard::Source::Synthetic, rate, samples)
                    .map_err(CliError::data)?;
            io::write_csv(&out_stream, &out).map_err(CliError::data)?;

            println!("n={}", metrics.n);
            println!("excluded={}", residual.excluded_count);
            println!("rms_x_g={:.6}", metrics.rms_x_g);
            println!("rms_y_g={:.6}", metrics.rms_y_g);
            println!("rms_z_g={:.6}", metrics.rms_z_g);
            println!("rms_pooled_g={:.6}", metrics.rms_pooled_g);
            println!("max_abs_x_g={:.6}", metrics.max_abs_x_g);
            println!("max_abs_y_g={:.6}", metrics.max_abs_y_g);
            println!("max_abs_z_g={:.6}", metrics.max_abs_z_g);
            Ok(())
        }
        Command::Eval {
            pred,
            truth,
            tol_ms,
        } => {
            let records = io::read_events(&pred).map_err(CliError::data)?;
            if let Some(first) = records.first() {
                if records
                    .iter()
                    .any(|r| r.config_fingerprint != first.config_fingerprint)
                {
                    return Err(CliError {
                        code: EXIT_DATA,
                        msg: "event file mixes records from different detector configs".into(),
                    });
                }
            }
            let truth_intervals = io::read_truth(&truth).map_err(CliError::data)?;
            let events: Vec<_> = records.into_iter().map(|r| r.event).collect();
            let report = eval_events(&events, &truth_intervals, tol_ms);
            println!("true_positives={}", report.true_positives);
            println!("false_positives={}", report.false_positives);
            println!("false_negatives={}", report.false_negatives);
            println!("precision={:.6}", report.precision);
            println!("recall={:.6}", report.recall);
            println!("mean_start_error_ms={:.3}", report.mean_start_error_ms);
            Ok(())
        }
        Command::Plotdata { input, axis, out } => {
            let stream = io::read_csv(&input).map_err(CliError::data)?;
            let mut text = String::from("t_ms,value\n");
            for s in &stream.samples {
                let v = match axis {
                    AxisArg::X => s.x_g,
                    AxisArg::Y => s.y_g,
                    AxisArg::Z => s.z_g,
                    AxisArg::Mag => s.magnitude(),
                };
                text.push_str(&format!("{},{:.6}\n", s.t_ms, v));
            }
            std::fs::write(&out, text).map_err(CliError::data)?;
            println!("rows={}", stream.len());
            Ok(())
        }
    }
}

/// A built-in kind name or a scenario file path.
fn load_scenario(arg: &str) -> Result<ScenarioSpec, CliError> {
    match arg.parse::<ScenarioKind>() {
        Ok(ScenarioKind::HandCart) => Ok(ScenarioSpec::hand_cart(60.0, 0)),
        Ok(ScenarioKind::RegularBus) => Ok(ScenarioSpec::regular_bus(60.0, 0)),
        Ok(ScenarioKind::MountainClimb) => Ok(ScenarioSpec::mountain_climb(120.0, 0)),
        Ok(ScenarioKind::Custom) => Err(CliError::usage(
            "custom scenarios must be given as a file path",
        )),
        Err(_) => {
            let path = PathBuf::from(arg);
            if !path.exists() {
                return Err(CliError::usage(format!(
                    "`{arg}` is neither a scenario kind (handcart|bus|mountain) nor an existing file"
                )));
            }
            ScenarioSpec::from_file(&path).map_err(CliError::data)
        }
    }
}
