//! Command-line front end. [`dispatch`] takes argv and the three standard
//! streams so the whole binary can be driven from tests.

mod args;

pub use args::{BackendKind, Cli, Command, EsnCommand, Format, MapCommand};

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use crate::camera::CameraIntrinsics;
use crate::geometry::Point2;
use crate::grasp::{estimate_grasp, DepthImage, ObjectMask};
use crate::grid::{inject_obstacles, OccupancyGrid};
use crate::planner::{self, PlannerBackend, RuleBackend, Status, Transcript, WorldState};
use crate::render::{assign_colors, render_raster, render_svg};
use crate::reservoir::{self, synth, Esn, EsnConfig, FEATURE_DIM};
use crate::scenegen::{generate_dataset, SceneConfig, SceneError};
use crate::semantic_map::SemanticMap;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { kind: &'static str, message: String },
    Io { path: String, message: String },
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain { .. } => EXIT_DOMAIN,
            CliError::Io { .. } => EXIT_IO,
        }
    }

    fn to_json(&self) -> Value {
        let body = match self {
            CliError::Usage(m) => json!({"kind": "usage", "message": m}),
            CliError::Domain { kind, message } => json!({"kind": kind, "message": message}),
            CliError::Io { path, message } => json!({"kind": "io", "path": path, "message": message}),
        };
        json!({"error": body, "code": self.code()})
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Domain { kind, message } => format!("{kind}: {message}"),
            CliError::Io { path, message } => format!("{path}: {message}"),
        }
    }
}

fn domain(kind: &'static str, e: impl std::fmt::Display) -> CliError {
    CliError::Domain {
        kind,
        message: e.to_string(),
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| io_error(path, e))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read(path)?).map_err(|e| io_error(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| io_error(path, e))
}

struct Out<'a> {
    format: Format,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    verbose: u8,
}

impl Out<'_> {
    /// JSON mode prints `value`; text mode prints `text`.
    fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> Result<(), CliError> {
        let s = match self.format {
            Format::Json => serde_json::to_string_pretty(value).expect("serializable"),
            Format::Text => text(),
        };
        writeln!(self.stdout, "{s}").map_err(|e| io_error(Path::new("<stdout>"), e))
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.stderr, "{msg}");
    }
}

fn load_map(path: &Path) -> Result<SemanticMap, CliError> {
    SemanticMap::from_json(&read(path)?).map_err(|e| domain("map", e))
}

fn run_map(cmd: MapCommand, seed: u64, out: &mut Out) -> Result<(), CliError> {
    match cmd {
        MapCommand::Locate { map, x, y } => {
            let m = load_map(&map.map)?;
            let loc = m.locate(Point2::new(x, y));
            if let Some(d) = &loc.diagnostic {
                out.note(d);
            }
            out.emit(
                &json!({"x": x, "y": y, "room": loc.room, "diagnostic": loc.diagnostic}),
                || loc.room.clone().unwrap_or_else(|| "(none)".into()),
            )
        }
        MapCommand::Navgoal { map, target, standoff } => {
            let m = load_map(&map.map)?;
            let g = m.navigation_point(&target, standoff).map_err(|e| domain("navigation", e))?;
            out.emit(&json!({"target": target, "standoff": standoff, "goal": g}), || {
                format!("{} {} {}", g.pose.x, g.pose.y, g.pose.yaw)
            })
        }
        MapCommand::Rasterize { map, out: path, resolution } => {
            let m = load_map(&map.map)?;
            let grid = OccupancyGrid::covering(&m, resolution).map_err(|e| domain("grid", e))?;
            let grid = inject_obstacles(&m, &grid);
            write(&path, &grid.to_pgm())?;
            let o = grid.origin();
            out.emit(
                &json!({
                    "out": path.display().to_string(),
                    "width": grid.width(),
                    "height": grid.height(),
                    "resolution": grid.resolution(),
                    "origin": [o.x, o.y],
                    "occupied": grid.occupied_count(),
                }),
                || format!("{}x{} cells, {} occupied", grid.width(), grid.height(), grid.occupied_count()),
            )
        }
        MapCommand::Render { map, out: path, scale } => {
            let m = load_map(&map.map)?;
            if !(scale > 0.0 && scale.is_finite()) {
                return Err(CliError::Usage(format!("--scale must be positive, got {scale}")));
            }
            let colors = assign_colors(&m, seed);
            let svg = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"));
            let bytes = if svg {
                render_svg(&m, &colors, scale).into_bytes()
            } else {
                render_raster(&m, &colors, scale).to_ppm()
            };
            write(&path, &bytes)?;
            out.emit(
                &json!({"out": path.display().to_string(), "format": if svg {"svg"} else {"ppm"}, "colors": colors}),
                || path.display().to_string(),
            )
        }
    }
}

fn run_grasp(a: args::GraspArgs, out: &mut Out) -> Result<(), CliError> {
    let k: CameraIntrinsics =
        serde_json::from_slice(&read(&a.intrinsics)?).map_err(|e| domain("intrinsics", e))?;
    let depth = DepthImage::from_pgm(&read(&a.depth)?).map_err(|e| domain("grasp", e))?;
    let masks = a
        .mask
        .iter()
        .map(|p| ObjectMask::from_pgm(&read(p)?).map_err(|e| domain("grasp", e)))
        .collect::<Result<Vec<_>, _>>()?;
    let est = estimate_grasp(&depth, &masks, &k).map_err(|e| domain("grasp", e))?;
    if let Some(p) = &a.cloud {
        write(p, crate::imageio::encode_ply(&est.cloud.points).as_bytes())?;
    }
    let g = &est.pose;
    let mut v = json!({
        "object": est.object,
        "approach": g.approach,
        "position": g.position,
        "yaw": g.yaw,
        "pitch": g.pitch,
        "width": g.width,
        "height": g.height,
        "points": est.cloud.points.len(),
    });
    if a.dump_bbox {
        v["bbox"] = serde_json::to_value(&est.bbox).expect("serializable");
    }
    out.emit(&v, || {
        format!(
            "object {} approach {} at [{:.4}, {:.4}, {:.4}] yaw {:.4}",
            est.object,
            serde_json::to_value(g.approach).expect("serializable").as_str().unwrap_or("?"),
            g.position[0],
            g.position[1],
            g.position[2],
            g.yaw
        )
    })
}

fn load_dataset(path: &Path) -> Result<Vec<reservoir::LabeledSequence>, CliError> {
    synth::from_jsonl(&read_text(path)?).map_err(|e| domain("dataset", e))
}

fn load_model(path: &Path) -> Result<Esn, CliError> {
    Esn::from_json(&read_text(path)?).map_err(|e| domain("model", e))
}

fn run_esn(cmd: EsnCommand, seed: u64, out: &mut Out) -> Result<(), CliError> {
    match cmd {
        EsnCommand::Gen { out: path, count, config } => {
            let cfg: synth::SynthConfig = match config {
                Some(p) => serde_json::from_slice(&read(&p)?).map_err(|e| domain("config", e))?,
                None => Default::default(),
            };
            let seqs = synth::generate_dataset(&cfg, count, seed).map_err(|e| domain("esn", e))?;
            write(&path, synth::to_jsonl(&seqs).as_bytes())?;
            out.emit(
                &json!({"out": path.display().to_string(), "sequences": seqs.len(), "frames": cfg.frames, "seed": seed}),
                || format!("{} sequences -> {}", seqs.len(), path.display()),
            )
        }
        EsnCommand::Train { config, data, out: path } => {
            let cfg: EsnConfig = match config {
                Some(p) => serde_json::from_slice(&read(&p)?).map_err(|e| domain("config", e))?,
                None => EsnConfig::default(),
            };
            let seqs = load_dataset(&data)?;
            let dim = seqs.first().and_then(|s| s.frames.first()).map_or(FEATURE_DIM, Vec::len);
            let mut esn = Esn::new(cfg, dim).map_err(|e| domain("esn", e))?;
            reservoir::fit_readout(&mut esn, &seqs).map_err(|e| domain("esn", e))?;
            let ev = reservoir::evaluate(&esn, &seqs).map_err(|e| domain("esn", e))?;
            write(&path, esn.to_json().as_bytes())?;
            out.emit(
                &json!({
                    "out": path.display().to_string(),
                    "sequences": seqs.len(),
                    "input_dim": dim,
                    "n_reservoir": esn.n_reservoir(),
                    "train_accuracy": ev.accuracy,
                }),
                || format!("trained on {} sequences, train accuracy {:.4}", seqs.len(), ev.accuracy),
            )
        }
        EsnCommand::Eval { model, data, .. } => {
            let esn = load_model(&model)?;
            let seqs = load_dataset(&data)?;
            let start = Instant::now();
            let ev = reservoir::evaluate(&esn, &seqs).map_err(|e| domain("esn", e))?;
            let elapsed = start.elapsed();
            let per_seq_ms = if seqs.is_empty() {
                0.0
            } else {
                elapsed.as_secs_f64() * 1e3 / seqs.len() as f64
            };
            // Timing varies run to run, so it stays off standard output.
            out.note(&format!("mean inference latency: {per_seq_ms:.4} ms per sequence"));
            out.emit(&ev, || {
                format!(
                    "accuracy {:.4} ({} sequences)\nconfusion [[{}, {}], [{}, {}]]",
                    ev.accuracy,
                    ev.total,
                    ev.confusion[0][0],
                    ev.confusion[0][1],
                    ev.confusion[1][0],
                    ev.confusion[1][1]
                )
            })
        }
        EsnCommand::Classify { model, data, .. } => {
            let esn = load_model(&model)?;
            let seqs = load_dataset(&data)?;
            let results = seqs
                .iter()
                .map(|s| reservoir::classify(&esn, &s.frames))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| domain("esn", e))?;
            out.emit(&results, || {
                results
                    .iter()
                    .map(|c| format!("{:?} {:.6}", c.label, c.score))
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
    }
}

fn run_scenegen(a: args::ScenegenArgs, seed: Option<u64>, out: &mut Out) -> Result<(), CliError> {
    let mut cfg: SceneConfig = match &a.config {
        Some(p) => serde_json::from_slice(&read(p)?).map_err(|e| domain("config", e))?,
        None => SceneConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let m = generate_dataset(&cfg, a.count, &a.out, a.previews, a.jobs).map_err(|e| match e {
        SceneError::Io { path, source } => CliError::Io {
            path,
            message: source.to_string(),
        },
        other => domain("scenegen", other),
    })?;
    let annotations: usize = m.samples.iter().map(|s| s.annotations).sum();
    out.emit(
        &json!({
            "out": a.out.display().to_string(),
            "samples": m.samples.len(),
            "annotations": annotations,
            "seed": cfg.seed,
            "manifest": a.out.join("manifest.json").display().to_string(),
        }),
        || format!("{} samples, {annotations} annotations", m.samples.len()),
    )
}

fn transcript_text(t: &Transcript) -> String {
    let mut s = format!("> {}\n", t.command);
    for step in &t.steps {
        let detail = match (&step.outcome, &step.error) {
            (Some(o), _) => o.message.clone(),
            (_, Some(e)) => e.clone(),
            _ => String::new(),
        };
        s.push_str(&format!("{:2}. {} -> {}\n", step.index + 1, step.call, detail));
    }
    s.push_str(&match &t.status {
        Status::Done => "done".to_string(),
        Status::Failed { step, reason } => format!("failed at step {}: {reason}", step + 1),
        Status::StepLimitExceeded { steps } => format!("StepLimitExceeded after {steps} steps"),
        Status::BackendError { step, error } => format!("backend error at step {}: {error}", step + 1),
    });
    s
}

fn make_backend(a: &args::PlanArgs) -> Result<Box<dyn PlannerBackend>, CliError> {
    match a.backend {
        BackendKind::Rule => Ok(Box::new(RuleBackend)),
        BackendKind::Llm => {
            #[cfg(feature = "http")]
            {
                if !(a.timeout_secs > 0.0 && a.timeout_secs.is_finite()) {
                    return Err(CliError::Usage("--timeout-secs must be positive".into()));
                }
                let t = planner::llm::HttpTransport::from_env(
                    a.endpoint.as_deref(),
                    Duration::from_secs_f64(a.timeout_secs),
                )
                .map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(Box::new(planner::LlmBackend::new(t)))
            }
            #[cfg(not(feature = "http"))]
            {
                let _ = Duration::ZERO;
                Err(CliError::Usage("built without the `http` feature".into()))
            }
        }
    }
}

fn run_plan(a: args::PlanArgs, stdin: &mut dyn BufRead, out: &mut Out) -> Result<bool, CliError> {
    let mut world = WorldState::from_json(&read(&a.world)?).map_err(|e| domain("world", e))?;
    let mut backend = make_backend(&a)?;
    let commands: Vec<String> = if a.repl {
        let mut v = Vec::new();
        for line in stdin.lines() {
            let line = line.map_err(|e| io_error(Path::new("<stdin>"), e))?;
            if !line.trim().is_empty() {
                v.push(line);
            }
        }
        v
    } else {
        match &a.command {
            Some(c) => vec![c.clone()],
            None => return Err(CliError::Usage("plan needs --command or --repl".into())),
        }
    };
    let mut transcripts = Vec::new();
    for c in &commands {
        let t = planner::plan_and_execute(c, &mut world, backend.as_mut(), a.max_steps)
            .map_err(|e| domain("plan", e))?;
        out.emit(&t, || transcript_text(&t))?;
        transcripts.push(t);
    }
    if let Some(p) = &a.transcript {
        let v = if a.repl {
            serde_json::to_vec_pretty(&transcripts)
        } else {
            serde_json::to_vec_pretty(&transcripts[0])
        }
        .expect("serializable");
        write(p, &v)?;
    }
    Ok(transcripts.iter().all(|t| t.status == Status::Done))
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn dispatch<I, T>(argv: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let json_errors = !argv
        .windows(2)
        .any(|w| w[0] == "--format" && w[1] == "text")
        && !argv.iter().any(|a| a == "--format=text");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    if json_errors {
                        let err = CliError::Usage(e.kind().to_string());
                        let _ = writeln!(stderr, "{}", err.to_json());
                    }
                    EXIT_USAGE
                }
            };
        }
    };
    let explicit_seed = argv.iter().any(|a| a == "--seed" || a.to_string_lossy().starts_with("--seed="));
    let mut out = Out {
        format: cli.format,
        stdout,
        stderr,
        verbose: cli.verbose,
    };
    if out.verbose > 0 {
        let msg = format!("seed {}", cli.seed);
        out.note(&msg);
    }
    let result = match cli.command {
        Command::Map(m) => run_map(m, cli.seed, &mut out).map(|_| true),
        Command::Grasp(g) => run_grasp(g, &mut out).map(|_| true),
        Command::Esn(e) => run_esn(e, cli.seed, &mut out).map(|_| true),
        Command::Scenegen(s) => run_scenegen(s, explicit_seed.then_some(cli.seed), &mut out).map(|_| true),
        Command::Plan(p) => run_plan(p, stdin, &mut out),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_DOMAIN,
        Err(e) => {
            match cli.format {
                Format::Json => {
                    let _ = writeln!(out.stderr, "{}", e.to_json());
                }
                Format::Text => {
                    let _ = writeln!(out.stderr, "error: {}", e.message());
                }
            }
            e.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let argv = std::iter::once("homecore").chain(args.iter().copied());
        let code = dispatch(argv, &mut std::io::empty(), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = run(&["teleport"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn missing_file_is_io_error() {
        let (code, _, err) = run(&["map", "locate", "--map", "/nonexistent/m.json", "--x", "0", "--y", "0"]);
        assert_eq!(code, EXIT_IO);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "io");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("scenegen"));
    }
}
