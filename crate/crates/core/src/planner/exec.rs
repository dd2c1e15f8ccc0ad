use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;

use super::skills::{Skill, SkillCall};
use super::world::{normalize_name, WorldChange, WorldObject, WorldState, ROBOT};
use crate::geometry::{Point2, Pose2};
use crate::grasp::{box_grid_cloud, decide_grasp, pca_bbox, BoxSolid};
use crate::linalg;
use crate::semantic_map::DEFAULT_STANDOFF;

/// Maximum robot-to-target distance for manipulation, meters.
pub const REACH: f64 = 1.2;
pub const MAX_WAIT_SECONDS: f64 = 600.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Schema { message: String },
    UnknownLocation { name: String },
    UnknownObject { name: String },
    UnknownPerson { name: String },
    UnknownDoor { name: String },
    NothingHeld,
    HandOccupied { holding: String },
    ObjectUnavailable { name: String, holder: String },
    OutOfReach { target: String, distance: f64 },
    InvalidArgument { message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Schema { message } => write!(f, "SchemaViolation: {message}"),
            Violation::UnknownLocation { name } => write!(f, "UnknownLocation: `{name}`"),
            Violation::UnknownObject { name } => write!(f, "UnknownObject: `{name}`"),
            Violation::UnknownPerson { name } => write!(f, "UnknownPerson: `{name}`"),
            Violation::UnknownDoor { name } => write!(f, "UnknownDoor: `{name}`"),
            Violation::NothingHeld => write!(f, "NothingHeld"),
            Violation::HandOccupied { holding } => write!(f, "HandOccupied: holding `{holding}`"),
            Violation::ObjectUnavailable { name, holder } => {
                write!(f, "ObjectUnavailable: `{name}` is held by {holder}")
            }
            Violation::OutOfReach { target, distance } => {
                write!(f, "OutOfReach: `{target}` is {distance:.3} m away (limit {REACH} m)")
            }
            Violation::InvalidArgument { message } => write!(f, "InvalidArgument: {message}"),
        }
    }
}

/// Skill-level failure after the preconditions held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExecError {
    #[error("PreconditionFailed({skill}): {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    PreconditionFailed { skill: Skill, violations: Vec<Violation> },
    #[error("ObjectNotFound: nothing matches `{description}`")]
    ObjectNotFound { description: String },
    #[error("PersonNotFound: {query}")]
    PersonNotFound { query: String },
    #[error("NavigationFailed: {message}")]
    NavigationFailed { message: String },
    #[error("GraspFailed: {message}")]
    GraspFailed { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub message: String,
    /// Skill-specific results, e.g. `{"object": ...}` for `find_obj`.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepEffect {
    pub outcome: Outcome,
    pub changes: Vec<WorldChange>,
}

enum Place {
    Furniture(String),
    Room(String),
    Door(String),
    Person(String),
}

fn resolve_place(world: &WorldState, name: &str) -> Option<Place> {
    if let Some(f) = world.furniture_name(name) {
        return Some(Place::Furniture(f.to_string()));
    }
    if let Some(r) = world.room_name(name) {
        return Some(Place::Room(r.to_string()));
    }
    if let Some(d) = world.door_name(name) {
        return Some(Place::Door(d.to_string()));
    }
    world.person(name).map(|p| Place::Person(p.name.clone()))
}

fn xy(p: [f64; 3]) -> Point2 {
    Point2::new(p[0], p[1])
}

fn robot_distance(world: &WorldState, p: Point2) -> f64 {
    world.robot.pose.position().distance(p)
}

/// Distance from the robot to a contour (zero inside it).
fn distance_to_area(world: &WorldState, poly: &crate::geometry::Polygon2) -> f64 {
    let p = world.robot.pose.position();
    if poly.contains(p) {
        0.0
    } else {
        poly.boundary_distance(p)
    }
}

fn reach(target: &str, distance: f64) -> Option<Violation> {
    (distance > REACH + 1e-9).then(|| Violation::OutOfReach {
        target: target.to_string(),
        distance,
    })
}

/// Interior point of a room closest to its centroid on a 5 cm lattice,
/// outside all furniture.
fn room_point(world: &WorldState, room: &str) -> Option<Point2> {
    let r = world.map.room(room)?;
    let c = r.contour.centroid();
    let free = |p: Point2| {
        r.contour.contains(p) && !world.map.furniture().iter().any(|f| f.contour.contains(p))
    };
    if free(c) {
        return Some(c);
    }
    let (lo, hi) = r.contour.bounds();
    let step = 0.05;
    let mut best: Option<(f64, Point2)> = None;
    let mut y = lo.y + step / 2.0;
    while y < hi.y {
        let mut x = lo.x + step / 2.0;
        while x < hi.x {
            let p = Point2::new(x, y);
            let d = p.distance(c);
            if free(p) && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, p));
            }
            x += step;
        }
        y += step;
    }
    best.map(|(_, p)| p)
}

fn facing(from: Point2, to: Point2, fallback: f64) -> f64 {
    let d = to.sub(from);
    if d.norm() < 1e-12 {
        fallback
    } else {
        d.y.atan2(d.x)
    }
}

/// Goal pose for `move`, without changing the world.
fn move_goal(world: &WorldState, place: &Place) -> Result<Pose2, ExecError> {
    let nav = |m: String| ExecError::NavigationFailed { message: m };
    match place {
        Place::Furniture(f) => world
            .map
            .navigation_point(f, DEFAULT_STANDOFF)
            .map(|g| g.pose)
            .map_err(|e| nav(e.to_string())),
        Place::Room(r) => {
            let p = room_point(world, r).ok_or_else(|| nav(format!("room `{r}` has no free point")))?;
            Ok(Pose2::new(p, world.robot.pose.yaw))
        }
        Place::Door(d) => {
            let door = world.map.door(d).expect("resolved");
            let c = door.contour.centroid();
            let from = world.robot.pose.position();
            let dist = from.distance(c);
            let p = if dist > DEFAULT_STANDOFF {
                c.add(from.sub(c).scale(DEFAULT_STANDOFF / dist))
            } else {
                from
            };
            Ok(Pose2::new(p, facing(p, c, world.robot.pose.yaw)))
        }
        Place::Person(n) => {
            let target = world.person(n).expect("resolved").position;
            let from = world.robot.pose.position();
            let dist = from.distance(target);
            let dir = if dist < 1e-12 {
                Point2::new(1.0, 0.0)
            } else {
                target.sub(from).scale(1.0 / dist)
            };
            let p = target.sub(dir.scale(DEFAULT_STANDOFF));
            Ok(Pose2::new(p, facing(p, target, world.robot.pose.yaw)))
        }
    }
}

const FILLER: [&str; 7] = ["the", "a", "an", "object", "objects", "item", "thing"];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Qualifier {
    RightMost,
    LeftMost,
    Closest,
    Farthest,
}

/// Splits a description into a spatial qualifier and class words.
fn parse_description(desc: &str) -> (Option<Qualifier>, Vec<String>) {
    let n = normalize_name(desc);
    let mut q = None;
    let mut words = Vec::new();
    let toks: Vec<&str> = n.split(' ').collect();
    let mut i = 0;
    while i < toks.len() {
        let two = toks.get(i + 1).map(|b| format!("{} {b}", toks[i]));
        let hit = |a: &str| two.as_deref() == Some(a);
        if hit("right most") {
            q = Some(Qualifier::RightMost);
            i += 2;
            continue;
        }
        if hit("left most") {
            q = Some(Qualifier::LeftMost);
            i += 2;
            continue;
        }
        match toks[i] {
            "rightmost" => q = Some(Qualifier::RightMost),
            "leftmost" => q = Some(Qualifier::LeftMost),
            "closest" | "nearest" => q = Some(Qualifier::Closest),
            "farthest" | "furthest" => q = Some(Qualifier::Farthest),
            w if FILLER.contains(&w) => {}
            w => words.push(w.to_string()),
        }
        i += 1;
    }
    (q, words)
}

fn matches_words(o: &WorldObject, words: &[String]) -> bool {
    if words.is_empty() {
        return true;
    }
    let class = normalize_name(&o.class);
    let name = normalize_name(&o.name);
    let phrase = words.join(" ");
    let singular = phrase.strip_suffix('s').unwrap_or(&phrase);
    class == phrase || class == singular || name == phrase || name == singular
}

/// Objects resting on the surface (a furniture item or every furniture item
/// of a room), in world order.
fn objects_on<'a>(world: &'a WorldState, surface: &Place) -> Vec<&'a WorldObject> {
    let on = |o: &&WorldObject| match (surface, &o.surface) {
        (Place::Furniture(f), Some(s)) => s == f,
        (Place::Room(r), Some(s)) => world
            .map
            .furniture_named(s)
            .is_some_and(|f| &f.room == r),
        _ => false,
    };
    world.objects.iter().filter(on).collect()
}

/// Resolves `find_obj` without touching the world.
pub fn find_object<'a>(world: &'a WorldState, call: &SkillCall) -> Result<&'a WorldObject, ExecError> {
    let desc = call.text("description").unwrap_or_default();
    let surface = match call.text("surface") {
        Some(s) => resolve_place(world, s),
        None => match &world.robot.at {
            Some(a) if world.map.furniture_named(a).is_some() => Some(Place::Furniture(a.clone())),
            _ => world.robot_room().map(Place::Room),
        },
    };
    let (q, words) = parse_description(desc);
    let not_found = || ExecError::ObjectNotFound {
        description: desc.to_string(),
    };
    let candidates: Vec<&WorldObject> = match &surface {
        Some(s) => objects_on(world, s),
        None => Vec::new(),
    }
    .into_iter()
    .filter(|o| matches_words(o, &words))
    .collect();
    let pose = world.robot.pose;
    let rel = |o: &WorldObject| xy(o.position).sub(pose.position());
    let key = |o: &WorldObject| -> f64 {
        match q {
            Some(Qualifier::RightMost) => -rel(o).dot(pose.right()),
            Some(Qualifier::LeftMost) => rel(o).dot(pose.right()),
            Some(Qualifier::Farthest) => -rel(o).norm(),
            Some(Qualifier::Closest) | None => rel(o).norm(),
        }
    };
    // Stable minimum: ties keep world order.
    candidates
        .into_iter()
        .fold(None::<(&WorldObject, f64)>, |best, o| {
            let k = key(o);
            match best {
                Some((_, bk)) if bk <= k => best,
                _ => Some((o, k)),
            }
        })
        .map(|(o, _)| o)
        .ok_or_else(not_found)
}

/// Checks schema, name references and preconditions without mutating.
pub fn validate_call(call: &SkillCall, world: &WorldState) -> Vec<Violation> {
    if let Err(message) = call.skill.check_args(&call.args) {
        return vec![Violation::Schema { message }];
    }
    let mut v = Vec::new();
    let text = |k: &str| call.text(k).unwrap_or_default();
    let holding = || world.robot.held.clone();
    match call.skill {
        Skill::Move => {
            if resolve_place(world, text("location")).is_none() {
                v.push(Violation::UnknownLocation {
                    name: text("location").into(),
                });
            }
        }
        Skill::FindObj => {
            if let Some(s) = call.text("surface") {
                match resolve_place(world, s) {
                    Some(Place::Furniture(_)) | Some(Place::Room(_)) => {}
                    _ => v.push(Violation::UnknownLocation { name: s.into() }),
                }
            }
        }
        Skill::Grasp => {
            let name = text("object");
            if let Some(h) = holding() {
                v.push(Violation::HandOccupied { holding: h });
            }
            match world.object(name) {
                None => v.push(Violation::UnknownObject { name: name.into() }),
                Some(o) => {
                    if let Some(h) = &o.holder {
                        if h != ROBOT {
                            v.push(Violation::ObjectUnavailable {
                                name: o.name.clone(),
                                holder: h.clone(),
                            });
                        }
                    } else {
                        v.extend(reach(&o.name, robot_distance(world, xy(o.position))));
                    }
                }
            }
        }
        Skill::Place => {
            let s = text("surface");
            if holding().is_none() {
                v.push(Violation::NothingHeld);
            }
            match world.furniture_name(s) {
                None => v.push(Violation::UnknownLocation { name: s.into() }),
                Some(f) => {
                    let poly = &world.map.furniture_named(f).expect("resolved").contour;
                    v.extend(reach(f, distance_to_area(world, poly)));
                }
            }
        }
        Skill::HandOver => {
            let who = call.text("person").unwrap_or("operator");
            if holding().is_none() {
                v.push(Violation::NothingHeld);
            }
            match world.person(who) {
                None => v.push(Violation::UnknownPerson { name: who.into() }),
                Some(p) => v.extend(reach(&p.name, robot_distance(world, p.position))),
            }
        }
        Skill::FindPerson => {
            if let Some(n) = call.text("name") {
                if world.person(n).is_none() {
                    v.push(Violation::UnknownPerson { name: n.into() });
                }
            }
            if let Some(r) = call.text("room") {
                if world.room_name(r).is_none() {
                    v.push(Violation::UnknownLocation { name: r.into() });
                }
            }
        }
        Skill::FollowPerson => {
            let n = text("person");
            match world.person(n) {
                None => v.push(Violation::UnknownPerson { name: n.into() }),
                Some(p) => v.extend(reach(&p.name, robot_distance(world, p.position))),
            }
        }
        Skill::Ask => {
            let who = call.text("person").unwrap_or("operator");
            if world.person(who).is_none() {
                v.push(Violation::UnknownPerson { name: who.into() });
            }
        }
        Skill::OpenDoor => {
            let d = text("door");
            match world.door_name(d) {
                None => v.push(Violation::UnknownDoor { name: d.into() }),
                Some(name) => {
                    let poly = &world.map.door(name).expect("resolved").contour;
                    v.extend(reach(name, distance_to_area(world, poly)));
                }
            }
        }
        Skill::Wait => {
            let s = call.number("seconds").unwrap_or(-1.0);
            if !(0.0..=MAX_WAIT_SECONDS).contains(&s) {
                v.push(Violation::InvalidArgument {
                    message: format!("seconds must be in [0, {MAX_WAIT_SECONDS}], got {s}"),
                });
            }
        }
        Skill::Speak | Skill::Answer => {}
    }
    v
}

/// Template answers about the world state.
fn answer_question(world: &WorldState, question: &str) -> String {
    let q = normalize_name(question).replace(['?', '.', ','], "");
    let words: Vec<&str> = q.split(' ').collect();
    let after = |marker: &[&str]| -> Option<Vec<String>> {
        let i = words.windows(marker.len()).position(|w| w == marker)?;
        Some(words[i + marker.len()..].iter().map(|s| s.to_string()).collect())
    };
    if let Some(rest) = after(&["how", "many"]) {
        let cut = rest
            .iter()
            .position(|w| ["are", "is", "on", "in", "there"].contains(&w.as_str()))
            .unwrap_or(rest.len());
        let thing = rest[..cut].join(" ");
        let place = rest
            .iter()
            .position(|w| w == "on" || w == "in")
            .map(|i| rest[i + 1..].iter().filter(|w| *w != "the").cloned().collect::<Vec<_>>().join(" "));
        let surface = place.as_deref().and_then(|p| resolve_place(world, p));
        let (_, class_words) = parse_description(&thing);
        let count = world
            .objects
            .iter()
            .filter(|o| matches_words(o, &class_words))
            .filter(|o| match &surface {
                Some(s) => objects_on(world, s).iter().any(|x| x.name == o.name),
                None => true,
            })
            .count();
        let where_ = place.map(|p| format!(" on the {p}")).unwrap_or_default();
        return format!("There are {count} {thing}{where_}.");
    }
    if let Some(rest) = after(&["where", "is"]) {
        let (_, class_words) = parse_description(&rest.join(" "));
        if let Some(o) = world.objects.iter().find(|o| matches_words(o, &class_words)) {
            return match (&o.surface, &o.holder) {
                (Some(s), _) => format!("The {} is on the {}.", o.class, s.replace('_', " ")),
                (_, Some(h)) if h == ROBOT => format!("I am holding the {}.", o.class),
                (_, Some(h)) => format!("{h} has the {}.", o.class),
                _ => format!("I do not know where the {} is.", o.class),
            };
        }
        return "I do not know.".into();
    }
    if q.contains("your name") {
        return "I am a home service robot.".into();
    }
    "I do not know.".into()
}

fn object_change(o: &WorldObject, position: [f64; 3], surface: Option<String>, holder: Option<String>) -> WorldChange {
    WorldChange::ObjectState {
        name: o.name.clone(),
        position,
        surface,
        holder,
    }
}

/// Approach decision for an object, from a synthesized camera-frame cloud
/// of its box seen from the robot.
fn plan_grasp(world: &WorldState, o: &WorldObject) -> Result<Value, ExecError> {
    let pose = world.robot.pose;
    let rel = xy(o.position).sub(pose.position());
    // Camera frame: x right, y down, z forward; world z maps to −y.
    let right = pose.right();
    let fwd = pose.forward();
    let to_cam = |v: [f64; 3]| -> [f64; 3] {
        [v[0] * right.x + v[1] * right.y, -v[2], v[0] * fwd.x + v[1] * fwd.y]
    };
    let center = [rel.x, rel.y, o.size[2] / 2.0];
    let (s, c) = o.yaw.sin_cos();
    let axes = [to_cam([c, s, 0.0]), to_cam([-s, c, 0.0]), to_cam([0.0, 0.0, 1.0])];
    let solid = BoxSolid {
        center: to_cam(center),
        rotation: linalg::transpose(&axes),
        size: o.size,
    };
    let cloud = box_grid_cloud(&solid, [7, 6, 5]);
    let bbox = pca_bbox(&cloud).map_err(|e| ExecError::GraspFailed {
        message: e.to_string(),
    })?;
    let g = decide_grasp(&bbox);
    Ok(serde_json::to_value(g).expect("serializable"))
}

/// Executes a call whose preconditions hold; returns the outcome and the
/// state changes it made.
pub fn execute_skill(call: &SkillCall, world: &mut WorldState) -> Result<StepEffect, ExecError> {
    let violations = validate_call(call, world);
    if !violations.is_empty() {
        return Err(ExecError::PreconditionFailed {
            skill: call.skill,
            violations,
        });
    }
    let text = |k: &str| call.text(k).unwrap_or_default().to_string();
    let mut changes = Vec::new();
    let outcome = match call.skill {
        Skill::Move => {
            let place = resolve_place(world, &text("location")).expect("validated");
            let pose = move_goal(world, &place)?;
            let label = match &place {
                Place::Furniture(n) | Place::Room(n) | Place::Door(n) | Place::Person(n) => n.clone(),
            };
            changes.push(WorldChange::RobotPose { pose });
            changes.push(WorldChange::RobotAt {
                location: Some(label.clone()),
            });
            Outcome {
                message: format!("moved to {label}"),
                data: json!({"location": label, "pose": pose}),
            }
        }
        Skill::FindObj => {
            let o = find_object(world, call)?;
            Outcome {
                message: format!("found {} ({})", o.name, o.class),
                data: json!({"object": o.name, "class": o.class}),
            }
        }
        Skill::Grasp => {
            let o = world.object(&text("object")).expect("validated").clone();
            let data = plan_grasp(world, &o)?;
            changes.push(object_change(&o, o.position, None, Some(ROBOT.into())));
            changes.push(WorldChange::Held {
                object: Some(o.name.clone()),
            });
            Outcome {
                message: format!("grasped {} from the {}", o.name, data["approach"].as_str().unwrap_or("?")),
                data: json!({"object": o.name, "grasp": data}),
            }
        }
        Skill::Place => {
            let held = world.robot.held.clone().expect("validated");
            let o = world.object(&held).expect("held object exists").clone();
            let f = world.furniture_name(&text("surface")).expect("validated").to_string();
            let c = world.map.furniture_named(&f).expect("resolved").contour.centroid();
            changes.push(object_change(&o, [c.x, c.y, o.position[2]], Some(f.clone()), None));
            changes.push(WorldChange::Held { object: None });
            Outcome {
                message: format!("placed {} on {f}", o.name),
                data: json!({"object": o.name, "surface": f}),
            }
        }
        Skill::HandOver => {
            let held = world.robot.held.clone().expect("validated");
            let o = world.object(&held).expect("held object exists").clone();
            let p = world.person(call.text("person").unwrap_or("operator")).expect("validated");
            let pos = [p.position.x, p.position.y, o.position[2]];
            let who = p.name.clone();
            changes.push(object_change(&o, pos, None, Some(who.clone())));
            changes.push(WorldChange::Held { object: None });
            Outcome {
                message: format!("handed {} to {who}", o.name),
                data: json!({"object": o.name, "person": who}),
            }
        }
        Skill::FindPerson => {
            let room = call.text("room").map(|r| world.room_name(r).expect("validated").to_string());
            let in_room = |p: &super::world::Person| match &room {
                Some(r) => world.map.locate(p.position).room.as_deref() == Some(r.as_str()),
                None => true,
            };
            let found = match call.text("name") {
                Some(n) => world.person(n).filter(|p| in_room(p)),
                None => {
                    let here = world.robot.pose.position();
                    world
                        .persons
                        .iter()
                        .filter(|p| in_room(p))
                        .min_by(|a, b| a.position.distance(here).total_cmp(&b.position.distance(here)))
                }
            };
            let p = found.ok_or_else(|| ExecError::PersonNotFound {
                query: format!(
                    "{} in {}",
                    call.text("name").unwrap_or("anyone"),
                    room.as_deref().unwrap_or("the house")
                ),
            })?;
            let room_of = world.map.locate(p.position).room;
            Outcome {
                message: format!("found {}", p.name),
                data: json!({"person": p.name, "room": room_of}),
            }
        }
        Skill::FollowPerson => {
            let p = world.person(&text("person")).expect("validated").name.clone();
            changes.push(WorldChange::Following { person: Some(p.clone()) });
            Outcome {
                message: format!("following {p}"),
                data: json!({"person": p}),
            }
        }
        Skill::Speak => Outcome {
            message: format!("said: {}", text("text")),
            data: json!({"text": text("text")}),
        },
        Skill::Ask => {
            let p = world.person(call.text("person").unwrap_or("operator")).expect("validated");
            Outcome {
                message: format!("asked {}: {}", p.name, text("question")),
                data: json!({"person": p.name, "question": text("question")}),
            }
        }
        Skill::Answer => {
            let a = answer_question(world, &text("question"));
            Outcome {
                message: format!("answer: {a}"),
                data: json!({"answer": a}),
            }
        }
        Skill::OpenDoor => {
            let d = world.door_name(&text("door")).expect("validated").to_string();
            let already = world.open_doors.contains(&d);
            if !already {
                changes.push(WorldChange::DoorOpened { door: d.clone() });
            }
            Outcome {
                message: if already {
                    format!("{d} already open")
                } else {
                    format!("opened {d}")
                },
                data: json!({"door": d}),
            }
        }
        Skill::Wait => {
            let s = call.number("seconds").expect("validated");
            Outcome {
                message: format!("waited {s} s"),
                data: json!({"seconds": s}),
            }
        }
    };
    for c in &changes {
        world.apply(c);
    }
    Ok(StepEffect { outcome, changes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::world::fixture;

    fn world() -> WorldState {
        WorldState::from_json(fixture::WORLD.as_bytes()).unwrap()
    }

    fn mv(loc: &str) -> SkillCall {
        SkillCall::new(Skill::Move).arg("location", loc)
    }

    #[test]
    fn move_uses_navigation_point() {
        let mut w = world();
        execute_skill(&mv("counter"), &mut w).unwrap();
        let goal = w.map.navigation_point("counter", DEFAULT_STANDOFF).unwrap();
        assert_eq!(w.robot.pose, goal.pose);
        assert_eq!(w.robot.at.as_deref(), Some("counter"));
    }

    #[test]
    fn right_most_by_projection() {
        let mut w = world();
        // Facing +x at the origin: right axis is −y.
        w.robot.pose = Pose2::new(Point2::new(0.0, 0.0), 0.0);
        for (o, y) in w.objects.iter_mut().zip([-0.2, -0.5, -0.3]) {
            o.position = [1.0, y, 0.9];
        }
        let call = SkillCall::new(Skill::FindObj)
            .arg("description", "right-most")
            .arg("surface", "counter");
        assert_eq!(find_object(&w, &call).unwrap().name, "apple_1");
        let left = call.clone().arg("description", "left most object");
        assert_eq!(find_object(&w, &left).unwrap().name, "cup_1");
        let cup = call.arg("description", "cups");
        assert_eq!(find_object(&w, &cup).unwrap().name, "cup_1");
    }

    #[test]
    fn grasp_preconditions() {
        let mut w = world();
        let g = SkillCall::new(Skill::Grasp).arg("object", "cup_1");
        assert!(matches!(validate_call(&g, &w)[..], [Violation::OutOfReach { .. }]));
        execute_skill(&mv("counter"), &mut w).unwrap();
        let eff = execute_skill(&g, &mut w).unwrap();
        assert_eq!(w.robot.held.as_deref(), Some("cup_1"));
        assert_eq!(eff.outcome.data["grasp"]["approach"], "front");
        let again = SkillCall::new(Skill::Grasp).arg("object", "apple_1");
        assert!(matches!(
            execute_skill(&again, &mut w),
            Err(ExecError::PreconditionFailed { .. })
        ));
        let ghost = SkillCall::new(Skill::Grasp).arg("object", "unicorn");
        assert!(validate_call(&ghost, &w).contains(&Violation::UnknownObject { name: "unicorn".into() }));
    }

    #[test]
    fn wide_tray_grasped_from_top() {
        let mut w = world();
        execute_skill(&mv("counter"), &mut w).unwrap();
        let eff = execute_skill(&SkillCall::new(Skill::Grasp).arg("object", "tray_1"), &mut w).unwrap();
        assert_eq!(eff.outcome.data["grasp"]["approach"], "top");
    }

    #[test]
    fn hand_over_needs_object() {
        let w = world();
        let h = SkillCall::new(Skill::HandOver);
        assert!(validate_call(&h, &w).contains(&Violation::NothingHeld));
        assert!(validate_call(&mv("kitchen"), &w).is_empty());
        assert_eq!(
            validate_call(&mv("piano"), &w),
            vec![Violation::UnknownLocation { name: "piano".into() }]
        );
    }

    #[test]
    fn answers() {
        let w = world();
        assert_eq!(
            answer_question(&w, "How many cups are on the counter?"),
            "There are 1 cups on the counter."
        );
        assert_eq!(answer_question(&w, "where is the bottle"), "The bottle is on the table.");
    }

    #[test]
    fn room_and_person_moves() {
        let mut w = world();
        execute_skill(&mv("kitchen"), &mut w).unwrap();
        assert_eq!(w.robot_room().as_deref(), Some("kitchen"));
        execute_skill(&mv("operator"), &mut w).unwrap();
        let alex = w.person("alex").unwrap().position;
        assert!((w.robot.pose.position().distance(alex) - DEFAULT_STANDOFF).abs() < 1e-9);
    }
}
