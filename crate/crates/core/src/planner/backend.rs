use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::exec::Outcome;
use super::skills::{skill_listing, SkillCall};
use super::world::{WorldState, ROBOT};

pub const ROLE_DESCRIPTION: &str = "You are the task planner of a home service robot. \
The robot carries out a spoken command by running one skill at a time. \
After each skill you receive its outcome. Choose the next skill and its arguments, \
or report that the command is complete.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub call: SkillCall,
    pub ok: bool,
    pub outcome: Outcome,
}

/// Everything a backend sees when choosing the next step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendContext {
    pub role: String,
    pub command: String,
    pub skills: String,
    pub history: Vec<HistoryEntry>,
    pub observation: Value,
}

impl BackendContext {
    pub fn new(command: &str, world: &WorldState) -> Self {
        Self {
            role: ROLE_DESCRIPTION.into(),
            command: command.into(),
            skills: skill_listing(),
            history: Vec::new(),
            observation: observe(world),
        }
    }

    /// Appends a step; history only grows.
    pub fn record(&mut self, entry: HistoryEntry, world: &WorldState) {
        self.history.push(entry);
        self.observation = observe(world);
    }

    /// Most recent successful outcome value under `key`.
    pub fn last_result(&self, key: &str) -> Option<&str> {
        self.history
            .iter()
            .rev()
            .filter(|h| h.ok)
            .find_map(|h| h.outcome.data.get(key).and_then(Value::as_str))
    }
}

/// Compact world summary for prompts.
pub fn observe(world: &WorldState) -> Value {
    let objects: Vec<Value> = world
        .objects
        .iter()
        .map(|o| match (&o.surface, &o.holder) {
            (Some(s), _) => json!({"name": o.name, "class": o.class, "on": s}),
            (_, Some(h)) if h == ROBOT => json!({"name": o.name, "class": o.class, "held_by": "robot"}),
            (_, h) => json!({"name": o.name, "class": o.class, "held_by": h}),
        })
        .collect();
    let persons: Vec<Value> = world
        .persons
        .iter()
        .map(|p| json!({"name": p.name, "room": world.map.locate(p.position).room}))
        .collect();
    json!({
        "robot": {
            "room": world.robot_room(),
            "at": world.robot.at,
            "holding": world.robot.held,
            "following": world.robot.following,
        },
        "operator": world.operator,
        "rooms": world.map.rooms().iter().map(|r| r.name.clone()).collect::<Vec<_>>(),
        "furniture": world.map.furniture().iter().map(|f| json!({"name": f.name, "room": f.room})).collect::<Vec<_>>(),
        "doors": world.map.doors().iter().map(|d| json!({"name": d.name, "open": world.open_doors.contains(&d.name)})).collect::<Vec<_>>(),
        "objects": objects,
        "persons": persons,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Decision {
    Call(SkillCall),
    Done { done: bool },
}

impl Decision {
    pub fn done() -> Self {
        Decision::Done { done: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackendError {
    #[error("UnparsableCommand: {message}")]
    UnparsableCommand { message: String },
    #[error("SchemaViolation: {message}")]
    SchemaViolation { message: String },
    #[error("Timeout: no reply within {seconds} s")]
    Timeout { seconds: f64 },
    #[error("HttpError: {message}")]
    HttpError { message: String },
}

pub trait PlannerBackend {
    fn name(&self) -> &str;
    fn next(&mut self, ctx: &BackendContext) -> Result<Decision, BackendError>;
}
