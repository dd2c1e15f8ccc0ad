//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use homecore::geometry::{contains_point, normalize_angle, Point2};
use homecore::grasp::{box_grid_cloud, estimate_grasp, pca_bbox, render_boxes, Approach, BoxSolid};
use homecore::linalg;
use homecore::planner::{
    self, llm::HttpTransport, replay, validate_call, BackendError, LlmBackend, RuleBackend, ScriptedTransport,
    Status, WorldState,
};
use homecore::reservoir::{
    collect_states, evaluate, fit_readout, ridge_solve, spectral_radius, synth, Esn, EsnConfig, FEATURE_DIM,
};
use homecore::scenegen::{generate_dataset, SceneConfig};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

// 1. contains_point against an even-odd oracle.
fn geometry_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut agree, mut total, mut errors) = (0usize, 0usize, 0usize);
    let mut polys = Vec::new();
    for _ in 0..1000 {
        polys.push(random_convex(&mut rng));
    }
    for _ in 0..200 {
        polys.push(random_rectilinear(&mut rng));
    }
    for poly in &polys {
        for _ in 0..50 {
            let p = random_query(&mut rng, poly);
            total += 1;
            match contains_point(poly, p) {
                Ok(got) if got == ray_cast(poly, p) => agree += 1,
                Ok(_) => {}
                Err(_) => errors += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        agree == total && errors == 0 && elapsed < Duration::from_secs(5),
        format!(
            "{agree}/{total} queries agree on {} polygons, {errors} rejected, {}",
            polys.len(),
            secs(elapsed)
        ),
    )
}

// 2. Navigation goals on randomized rooms.
fn navigation_contract() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ok = 0;
    let mut worst_dist: f64 = 0.0;
    let mut worst_yaw: f64 = 0.0;
    let mut failures = Vec::new();
    for i in 0..100 {
        let f = nav_fixture(&mut rng);
        let goal = match f.map.navigation_point("target", f.standoff) {
            Ok(g) => g,
            Err(e) => {
                failures.push(format!("fixture {i}: {e}"));
                continue;
            }
        };
        let p = goal.pose.position();
        let contour = f.map.furniture_named("target").unwrap().contour.vertices().to_vec();
        let (a, b) = (contour[goal.edge], contour[(goal.edge + 1) % contour.len()]);
        let line_dist = ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)).abs() / a.distance(b);
        let mid = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
        let dist_err = (line_dist - f.standoff).abs().max((p.distance(mid) - f.standoff).abs());
        let yaw_err = normalize_angle(goal.pose.yaw - (mid.y - p.y).atan2(mid.x - p.x)).abs();
        let in_room = ray_cast(&f.room, p) && f.map.locate(p).room.as_deref() == Some("room");
        let clear = f.furniture.iter().all(|c| !ray_cast(c, p));
        worst_dist = worst_dist.max(dist_err);
        worst_yaw = worst_yaw.max(yaw_err);
        if in_room && clear && dist_err <= 1e-9 && yaw_err <= 1e-9 {
            ok += 1;
        } else {
            failures.push(format!(
                "fixture {i}: in_room={in_room} clear={clear} dist_err={dist_err:e} yaw_err={yaw_err:e}"
            ));
        }
    }
    let mut detail = format!("{ok}/100 goals valid, max distance error {worst_dist:.1e} m, max yaw error {worst_yaw:.1e} rad");
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first failure {f}"));
    }
    verdict(ok == 100, detail)
}

fn random_rotation(rng: &mut ChaCha8Rng) -> linalg::Mat3 {
    let axis = linalg::normalize([
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    ]);
    linalg::axis_angle(axis, rng.random_range(0.0..std::f64::consts::PI))
}

// 3. PCA boxes recover known axes.
fn pca_axes() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut axes_ok, mut contain_ok) = (0, 0);
    let mut worst: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for _ in 0..100 {
        let mut size: [f64; 3] = [
            rng.random_range(0.05..0.6),
            rng.random_range(0.05..0.6),
            rng.random_range(0.05..0.6),
        ];
        size.sort_by(|a, b| b.total_cmp(a));
        if size[0] / size[1] < 1.1 || size[1] / size[2] < 1.1 {
            size[0] *= 1.3;
            size[2] /= 1.3;
        }
        let solid = BoxSolid {
            center: [
                rng.random_range(-0.5..0.5),
                rng.random_range(-0.5..0.5),
                rng.random_range(0.5..2.0),
            ],
            rotation: random_rotation(&mut rng),
            size,
        };
        let cloud = box_grid_cloud(&solid, [9, 9, 9]);
        let Ok(bbox) = pca_bbox(&cloud) else { continue };
        let gap = (bbox.variances[0] - bbox.variances[1]).min(bbox.variances[1] - bbox.variances[2]);
        min_gap = min_gap.min(gap);
        let err = (0..3)
            .map(|i| {
                let truth = [solid.rotation[0][i], solid.rotation[1][i], solid.rotation[2][i]];
                linalg::norm(linalg::cross(truth, bbox.axes[i])).asin()
            })
            .fold(0.0, f64::max);
        worst = worst.max(err);
        if err <= 1e-6 {
            axes_ok += 1;
        }
        if cloud.points.iter().all(|p| bbox.contains(*p, 1e-6)) {
            contain_ok += 1;
        }
    }
    verdict(
        axes_ok == 100 && contain_ok == 100 && min_gap >= 1e-6,
        format!(
            "axes {axes_ok}/100 (worst {worst:.1e} rad), containment {contain_ok}/100, min eigenvalue gap {min_gap:.2e}"
        ),
    )
}

// 4. Two-object grasp scenes.
fn grasp_pipeline() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let k = grasp_intrinsics();
    let (mut nearest_ok, mut approach_ok, mut tops) = (0, 0, 0);
    let mut tray_top = false;
    for i in 0..50 {
        let scene = grasp_scene(&mut rng, i);
        let (depth, masks) = render_boxes(&scene.boxes, &k);
        let Ok(est) = estimate_grasp(&depth, &masks, &k) else { continue };
        if est.object == scene.nearest {
            nearest_ok += 1;
        }
        if est.pose.approach == scene.expected {
            approach_ok += 1;
        }
        if scene.expected == Approach::Top {
            tops += 1;
        }
        if i == 0 {
            tray_top = est.pose.approach == Approach::Top;
        }
    }
    verdict(
        nearest_ok == 50 && approach_ok == 50 && tray_top,
        format!(
            "nearest {nearest_ok}/50, approach {approach_ok}/50 ({tops} top / {} front expected), wide tray grasped from top: {tray_top}",
            50 - tops
        ),
    )
}

fn oracle_radius(w: &[f64], n: usize) -> f64 {
    DMatrix::from_row_slice(n, n, w)
        .complex_eigenvalues()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

fn normal_equations(design: &[f64], rows: usize, cols: usize, y: &[f64], lambda: f64) -> Vec<f64> {
    let s = DMatrix::from_row_slice(rows, cols, design);
    let y = DMatrix::from_column_slice(rows, 1, y);
    let gram = s.transpose() * &s + DMatrix::identity(cols, cols) * lambda;
    gram.lu().solve(&(s.transpose() * y)).expect("oracle solve").iter().copied().collect()
}

fn rms_residual(design: &[f64], cols: usize, y: &[f64], w: &[f64]) -> f64 {
    let sum: f64 = y
        .iter()
        .enumerate()
        .map(|(r, t)| {
            let p: f64 = design[r * cols..(r + 1) * cols].iter().zip(w).map(|(a, b)| a * b).sum();
            (p - t).powi(2)
        })
        .sum();
    (sum / y.len() as f64).sqrt()
}

// 5. Reservoir scaling, ridge readout, benchmark accuracy and timing.
fn esn_benchmark() -> Verdict {
    let mut worst_radius: f64 = 0.0;
    let mut reservoirs = 0;
    for (n, rho, conn) in [(10, 0.5, 1.0), (50, 0.9, 0.2), (100, 0.9, 0.1), (100, 0.99, 0.05), (200, 0.8, 0.1)] {
        for seed in 0..4 {
            let cfg = EsnConfig {
                n_reservoir: n,
                spectral_radius: rho,
                connectivity: conn,
                seed,
                ..EsnConfig::default()
            };
            let esn = Esn::new(cfg, FEATURE_DIM).expect("reservoir");
            worst_radius = worst_radius.max((oracle_radius(&esn.w_res, n) - rho).abs());
            worst_radius = worst_radius.max((spectral_radius(&esn.w_res, n) - rho).abs());
            reservoirs += 1;
        }
    }

    let (train, test) = synth::benchmark_split(&synth::SynthConfig::default(), 200, 100, 0).expect("dataset");
    let start = Instant::now();
    let mut esn = Esn::new(EsnConfig::default(), FEATURE_DIM).expect("reservoir");
    fit_readout(&mut esn, &train).expect("fit");
    let train_time = start.elapsed();

    let (design, targets) = collect_states(&esn, &train).expect("states");
    let cols = esn.n_reservoir() + 1;
    let oracle = normal_equations(&design, targets.len(), cols, &targets, esn.config.ridge);
    let w = esn.w_out.as_ref().unwrap();
    let residual_err = (rms_residual(&design, cols, &targets, w) - rms_residual(&design, cols, &targets, &oracle)).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut small_err: f64 = 0.0;
    for _ in 0..20 {
        let (rows, cols) = (200, 64);
        let a: Vec<f64> = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..rows).map(|_| rng.random_range(-1.0..1.0)).collect();
        let lambda = 1e-6;
        let ours = ridge_solve(&a, rows, cols, &y, lambda).expect("solve");
        let theirs = normal_equations(&a, rows, cols, &y, lambda);
        small_err = small_err.max(ours.iter().zip(&theirs).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max));
    }

    let start = Instant::now();
    let ev = evaluate(&esn, &test).expect("evaluate");
    let per_seq = start.elapsed() / test.len() as u32;

    verdict(
        worst_radius <= 1e-6
            && residual_err <= 1e-8
            && small_err <= 1e-8
            && ev.accuracy >= 0.95
            && per_seq < Duration::from_millis(10)
            && train_time < Duration::from_secs(5),
        format!(
            "radius error {worst_radius:.1e} over {reservoirs} reservoirs, readout residual vs normal equations {residual_err:.1e}, \
             200x64 weights {small_err:.1e}, \
             accuracy {:.3}, {:.3} ms per 100-frame sequence, training {}",
            ev.accuracy,
            per_seq.as_secs_f64() * 1e3,
            secs(train_time)
        ),
    )
}

fn read_tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

// 6. Dataset throughput, label validity and parallel equivalence.
fn dataset_generation() -> Verdict {
    let cfg = SceneConfig::default();
    let dir = tempfile::tempdir().unwrap();
    let serial = dir.path().join("serial");
    let start = Instant::now();
    let manifest = match generate_dataset(&cfg, 10_000, &serial, false, 1) {
        Ok(m) => m,
        Err(e) => return verdict(false, format!("generation failed: {e}")),
    };
    let elapsed = start.elapsed();

    let (mut labelled, mut boxes, mut out_of_range) = (0usize, 0usize, 0usize);
    for i in 0..10_000 {
        let Ok(text) = std::fs::read_to_string(serial.join(format!("labels/{i:06}.txt"))) else { continue };
        labelled += 1;
        for line in text.lines() {
            let f: Vec<&str> = line.split(' ').collect();
            boxes += 1;
            let nums: Vec<f64> = f[1..].iter().filter_map(|x| x.parse().ok()).collect();
            if f.len() != 5 || nums.len() != 4 || nums.iter().any(|v| !(0.0..=1.0).contains(v)) {
                out_of_range += 1;
            }
        }
    }
    let manifest_boxes: usize = manifest.samples.iter().map(|s| s.annotations).sum();

    let parallel = dir.path().join("parallel");
    generate_dataset(&cfg, 10_000, &parallel, false, 4).unwrap();
    let identical = read_tree(&serial) == read_tree(&parallel);
    let (pa, pb) = (dir.path().join("pa"), dir.path().join("pb"));
    generate_dataset(&cfg, 200, &pa, true, 1).unwrap();
    generate_dataset(&cfg, 200, &pb, true, 3).unwrap();
    let identical_previews = read_tree(&pa) == read_tree(&pb);

    verdict(
        elapsed < Duration::from_secs(60)
            && labelled == 10_000
            && boxes == manifest_boxes
            && boxes > 0
            && out_of_range == 0
            && identical
            && identical_previews,
        format!(
            "10000 samples in {} ({:.0} samples/s), {labelled} label files, {boxes} boxes, {out_of_range} out of [0,1], \
             parallel identical: {identical}, with previews: {identical_previews}",
            secs(elapsed),
            10_000.0 / elapsed.as_secs_f64()
        ),
    )
}

fn world() -> WorldState {
    WorldState::from_json(&fixture_bytes("world.json")).unwrap()
}

fn no_invalid_execution(initial: &WorldState, t: &planner::Transcript) -> bool {
    let mut w = initial.clone();
    for s in &t.steps {
        if s.executed {
            if !validate_call(&s.call, &w).is_empty() {
                return false;
            }
            for c in &s.changes {
                w.apply(c);
            }
        } else if !s.changes.is_empty() {
            return false;
        }
    }
    true
}

// 7. Planner corpus, canonical sequence and adversarial chat replies.
fn planner_suite() -> Verdict {
    let commands = corpus();
    let mut done = 0;
    let mut replay_ok = 0;
    let mut first_bad = None;
    for c in &commands {
        let initial = world();
        let mut w = initial.clone();
        let t = planner::plan_and_execute(c, &mut w, &mut RuleBackend, planner::DEFAULT_STEP_LIMIT).unwrap();
        if t.status == Status::Done {
            done += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!("`{c}`: {:?}", t.status));
        }
        if replay(&initial, &t).is_ok_and(|r| r == w) && no_invalid_execution(&initial, &t) {
            replay_ok += 1;
        }
    }

    let mut w = world();
    let t = planner::plan_and_execute(
        "Bring me the right-most object on the counter",
        &mut w,
        &mut RuleBackend,
        planner::DEFAULT_STEP_LIMIT,
    )
    .unwrap();
    let seq: Vec<String> = t.steps.iter().map(|s| s.call.skill.to_string()).collect();
    let canonical = seq == ["move", "find_obj", "grasp", "move", "hand_over"] && t.status == Status::Done;

    let mut adversarial = Vec::new();
    let check = |name: &str, t: &planner::Transcript, initial: &WorldState, w: &WorldState, want: &dyn Fn(&Status) -> bool| {
        let ok = want(&t.status) && no_invalid_execution(initial, t) && t.steps.iter().all(|s| s.executed || s.changes.is_empty());
        let unchanged = t.steps.iter().all(|s| !s.executed) && w == initial;
        (name.to_string(), ok && unchanged)
    };

    let initial = world();
    let mut w = initial.clone();
    let mut b = LlmBackend::new(ScriptedTransport::new(["{\"skill\": \"move\", \"args\": {", "move to the counter", "[]"]));
    let t = planner::plan_and_execute("go to the counter", &mut w, &mut b, 20).unwrap();
    adversarial.push(check("malformed JSON", &t, &initial, &w, &|s| {
        matches!(s, Status::BackendError { error: BackendError::SchemaViolation { .. }, .. })
    }));

    let mut w = initial.clone();
    let mut b = LlmBackend::new(ScriptedTransport::new([r#"{"skill":"teleport","args":{"location":"counter"}}"#; 3]));
    let t = planner::plan_and_execute("go to the counter", &mut w, &mut b, 20).unwrap();
    adversarial.push(check("out-of-set skill", &t, &initial, &w, &|s| {
        matches!(s, Status::BackendError { error: BackendError::SchemaViolation { .. }, .. })
    }));

    let mut w = initial.clone();
    let mut b = LlmBackend::new(ScriptedTransport::new([r#"{"skill":"move","args":{"location":"piano"}}"#]));
    let t = planner::plan_and_execute("go to the piano", &mut w, &mut b, 20).unwrap();
    adversarial.push(check("unknown location", &t, &initial, &w, &|s| {
        matches!(s, Status::Failed { step: 0, reason } if reason.starts_with("UnknownLocation"))
    }));

    let server = mock_server(vec![Reply::Hang]);
    let mut w = initial.clone();
    let mut b = LlmBackend::new(HttpTransport::new(&server.url, None, Duration::from_millis(300)));
    let t = planner::plan_and_execute("go to the counter", &mut w, &mut b, 20).unwrap();
    adversarial.push(check("timeout", &t, &initial, &w, &|s| {
        matches!(s, Status::BackendError { error: BackendError::Timeout { .. }, .. })
    }));

    let adv_ok = adversarial.iter().filter(|(_, ok)| *ok).count();
    let adv_failed: Vec<&str> = adversarial.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
    let mut detail = format!(
        "corpus done {done}/{}, replay valid {replay_ok}/{}, canonical sequence {canonical} ({}), adversarial {adv_ok}/{}",
        commands.len(),
        commands.len(),
        seq.join("->"),
        adversarial.len()
    );
    if let Some(b) = first_bad {
        detail.push_str(&format!("; first failure {b}"));
    }
    if !adv_failed.is_empty() {
        detail.push_str(&format!("; adversarial failures {adv_failed:?}"));
    }
    verdict(
        commands.len() == 20 && done == 20 && replay_ok == 20 && canonical && adv_ok == adversarial.len(),
        detail,
    )
}

fn prepare_inputs(dir: &Path) {
    std::fs::copy(fixture("map.json"), dir.join("map.json")).unwrap();
    std::fs::copy(fixture("world.json"), dir.join("world.json")).unwrap();
    let k = grasp_intrinsics();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let scene = grasp_scene(&mut rng, 0);
    let (depth, masks) = render_boxes(&scene.boxes, &k);
    std::fs::write(dir.join("depth.pgm"), depth.to_pgm()).unwrap();
    for (i, m) in masks.iter().enumerate() {
        std::fs::write(dir.join(format!("mask{i}.pgm")), m.to_pgm()).unwrap();
    }
    std::fs::write(dir.join("intrinsics.json"), serde_json::to_vec(&k).unwrap()).unwrap();
}

const CLI_RUNS: &[&[&str]] = &[
    &["map", "locate", "--map", "map.json", "--x", "2", "--y", "1"],
    &["map", "navgoal", "--map", "map.json", "--target", "counter"],
    &["map", "rasterize", "--map", "map.json", "--out", "grid.pgm"],
    &["--seed", "7", "map", "render", "--map", "map.json", "--out", "map.svg"],
    &["--seed", "7", "map", "render", "--map", "map.json", "--out", "map.ppm"],
    &["grasp", "--depth", "depth.pgm", "--mask", "mask0.pgm", "mask1.pgm", "--intrinsics", "intrinsics.json", "--dump-bbox", "--cloud", "cloud.ply"],
    &["--seed", "3", "esn", "gen", "--out", "train.jsonl", "--count", "40"],
    &["--seed", "4", "esn", "gen", "--out", "test.jsonl", "--count", "20"],
    &["esn", "train", "--data", "train.jsonl", "--out", "model.json"],
    &["esn", "eval", "--model", "model.json", "--data", "test.jsonl"],
    &["esn", "classify", "--model", "model.json", "--data", "test.jsonl"],
    &["--seed", "5", "scenegen", "--count", "25", "--out", "scenes", "--previews", "--jobs", "2"],
    &["plan", "--world", "world.json", "--backend", "rule", "--command", "Bring me the right-most object on the counter", "--transcript", "transcript.json"],
    &["--format", "text", "plan", "--world", "world.json", "--backend", "rule", "--command", "go to the kitchen"],
];

fn run_all(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    prepare_inputs(dir);
    let mut out = BTreeMap::new();
    for (i, args) in CLI_RUNS.iter().enumerate() {
        let o = Command::new(env!("CARGO_BIN_EXE_homecore"))
            .args(*args)
            .current_dir(dir)
            .output()
            .map_err(|e| e.to_string())?;
        if !o.status.success() {
            return Err(format!("`{}` exited {:?}: {}", args.join(" "), o.status.code(), String::from_utf8_lossy(&o.stderr)));
        }
        out.insert(format!("stdout:{i:02}"), o.stdout);
    }
    out.extend(read_tree(dir));
    Ok(out)
}

// 8. Byte-identical CLI output across repeated runs.
fn determinism() -> Verdict {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (ra, rb) = match (run_all(a.path()), run_all(b.path())) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return verdict(false, e),
    };
    let differing: Vec<&String> = ra.keys().filter(|k| ra.get(*k) != rb.get(*k)).collect();
    let json_outputs = ra
        .iter()
        .filter(|(k, v)| k.starts_with("stdout") && serde_json::from_slice::<serde_json::Value>(v).is_ok())
        .count();
    verdict(
        differing.is_empty() && ra.len() == rb.len(),
        format!(
            "{} subcommand runs, {json_outputs} JSON stdout documents, {} artifacts compared, {} differ{}",
            CLI_RUNS.len(),
            ra.len(),
            differing.len(),
            differing.first().map(|k| format!(" (first: {k})")).unwrap_or_default()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("geometry oracle equivalence", geometry_oracle),
        ("navigation-goal contract", navigation_contract),
        ("PCA bounding box", pca_axes),
        ("grasp pipeline", grasp_pipeline),
        ("echo state network", esn_benchmark),
        ("dataset generation", dataset_generation),
        ("planner", planner_suite),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let v = run();
        println!("criterion {id} [{}] {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
