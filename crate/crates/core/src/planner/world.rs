use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeSet;

use crate::geometry::{Point2, Pose2};
use crate::semantic_map::{MapError, SemanticMap};

/// Holder name used for objects in the robot's hand.
pub const ROBOT: &str = "robot";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldObject {
    pub name: String,
    pub class: String,
    /// Base center in world coordinates, meters.
    pub position: [f64; 3],
    #[serde(default)]
    pub yaw: f64,
    /// Width, depth, height in meters.
    #[serde(default = "default_size")]
    pub size: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holder: Option<String>,
}

fn default_size() -> [f64; 3] {
    [0.08, 0.08, 0.12]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Person {
    pub name: String,
    pub position: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Robot {
    pub pose: Pose2,
    #[serde(default)]
    pub held: Option<String>,
    /// Last location reached by `move`.
    #[serde(default)]
    pub at: Option<String>,
    #[serde(default)]
    pub following: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub map: SemanticMap,
    pub objects: Vec<WorldObject>,
    pub persons: Vec<Person>,
    pub operator: String,
    pub robot: Robot,
    pub open_doors: BTreeSet<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum WorldError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("world file: {0}")]
    Format(String),
    #[error("invalid world: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldSections {
    #[serde(default)]
    objects: Vec<WorldObject>,
    #[serde(default)]
    persons: Vec<Person>,
    operator: String,
    robot: Robot,
    #[serde(default)]
    open_doors: BTreeSet<String>,
}

const SECTION_KEYS: [&str; 5] = ["objects", "persons", "operator", "robot", "open_doors"];

/// Lowercase with `_` and `-` read as spaces; used for all name matching.
pub fn normalize_name(s: &str) -> String {
    s.trim()
        .to_lowercase()
        .replace(['_', '-'], " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

impl WorldState {
    pub fn new(
        map: SemanticMap,
        objects: Vec<WorldObject>,
        persons: Vec<Person>,
        operator: String,
        robot: Robot,
        open_doors: BTreeSet<String>,
    ) -> Result<Self, WorldError> {
        let w = Self {
            map,
            objects,
            persons,
            operator,
            robot,
            open_doors,
        };
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<(), WorldError> {
        let bad = |m: String| Err(WorldError::Invalid(m));
        let mut names = BTreeSet::new();
        for o in &self.objects {
            if !names.insert(o.name.as_str()) {
                return bad(format!("duplicate object `{}`", o.name));
            }
            match (&o.surface, &o.holder) {
                (Some(s), None) => {
                    if self.map.furniture_named(s).is_none() {
                        return bad(format!("object `{}` is on unknown furniture `{s}`", o.name));
                    }
                }
                (None, Some(h)) => {
                    if h == ROBOT {
                        if self.robot.held.as_deref() != Some(o.name.as_str()) {
                            return bad(format!("object `{}` held by robot but robot.held disagrees", o.name));
                        }
                    } else if self.person(h).is_none() {
                        return bad(format!("object `{}` held by unknown person `{h}`", o.name));
                    }
                }
                _ => return bad(format!("object `{}` needs exactly one of surface or holder", o.name)),
            }
            if o.size.iter().any(|s| !(*s > 0.0)) {
                return bad(format!("object `{}` has nonpositive size", o.name));
            }
        }
        if let Some(h) = &self.robot.held {
            match self.object(h) {
                Some(o) if o.holder.as_deref() == Some(ROBOT) => {}
                _ => return bad(format!("robot holds `{h}` which is not marked as held")),
            }
        }
        let mut people = BTreeSet::new();
        for p in &self.persons {
            if !people.insert(p.name.as_str()) {
                return bad(format!("duplicate person `{}`", p.name));
            }
        }
        if self.person(&self.operator).is_none() {
            return bad(format!("operator `{}` is not a listed person", self.operator));
        }
        for d in &self.open_doors {
            if self.map.door(d).is_none() {
                return bad(format!("open door `{d}` not in map"));
            }
        }
        Ok(())
    }

    /// Parses a world file: a map document plus world sections.
    pub fn from_json(bytes: &[u8]) -> Result<Self, WorldError> {
        let value: Value = serde_json::from_slice(bytes).map_err(MapError::from)?;
        let Value::Object(mut all) = value else {
            return Err(WorldError::Format("top level must be an object".into()));
        };
        let mut sections = serde_json::Map::new();
        for k in SECTION_KEYS {
            if let Some(v) = all.remove(k) {
                sections.insert(k.into(), v);
            }
        }
        let map_bytes = serde_json::to_vec(&Value::Object(all)).expect("serializable");
        let map = SemanticMap::from_json(&map_bytes)?;
        let s: WorldSections = serde_json::from_value(Value::Object(sections))
            .map_err(|e| WorldError::Format(e.to_string()))?;
        Self::new(map, s.objects, s.persons, s.operator, s.robot, s.open_doors)
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut v = serde_json::to_value(&self.map).expect("serializable");
        let s = serde_json::to_value(WorldSections {
            objects: self.objects.clone(),
            persons: self.persons.clone(),
            operator: self.operator.clone(),
            robot: self.robot.clone(),
            open_doors: self.open_doors.clone(),
        })
        .expect("serializable");
        if let (Value::Object(m), Value::Object(extra)) = (&mut v, s) {
            m.extend(extra);
        }
        serde_json::to_vec_pretty(&v).expect("serializable")
    }

    pub fn object(&self, name: &str) -> Option<&WorldObject> {
        let n = normalize_name(name);
        self.objects.iter().find(|o| normalize_name(&o.name) == n)
    }

    pub fn person(&self, name: &str) -> Option<&Person> {
        let n = normalize_name(name);
        if n == "operator" || n == "me" {
            let op = normalize_name(&self.operator);
            return self.persons.iter().find(|p| normalize_name(&p.name) == op);
        }
        self.persons.iter().find(|p| normalize_name(&p.name) == n)
    }

    pub fn furniture_name(&self, name: &str) -> Option<&str> {
        let n = normalize_name(name);
        self.map
            .furniture()
            .iter()
            .find(|f| normalize_name(&f.name) == n)
            .map(|f| f.name.as_str())
    }

    pub fn room_name(&self, name: &str) -> Option<&str> {
        let n = normalize_name(name);
        self.map
            .rooms()
            .iter()
            .find(|r| normalize_name(&r.name) == n)
            .map(|r| r.name.as_str())
    }

    pub fn door_name(&self, name: &str) -> Option<&str> {
        let n = normalize_name(name);
        let n2 = format!("{n} door");
        self.map
            .doors()
            .iter()
            .find(|d| {
                let dn = normalize_name(&d.name);
                dn == n || dn == n2
            })
            .map(|d| d.name.as_str())
    }

    /// Room containing the robot, if any.
    pub fn robot_room(&self) -> Option<String> {
        self.map.locate(self.robot.pose.position()).room
    }

    pub fn apply(&mut self, change: &WorldChange) {
        match change {
            WorldChange::RobotPose { pose } => self.robot.pose = *pose,
            WorldChange::RobotAt { location } => self.robot.at = location.clone(),
            WorldChange::Held { object } => self.robot.held = object.clone(),
            WorldChange::Following { person } => self.robot.following = person.clone(),
            WorldChange::ObjectState {
                name,
                position,
                surface,
                holder,
            } => {
                if let Some(o) = self.objects.iter_mut().find(|o| &o.name == name) {
                    o.position = *position;
                    o.surface = surface.clone();
                    o.holder = holder.clone();
                }
            }
            WorldChange::DoorOpened { door } => {
                self.open_doors.insert(door.clone());
            }
        }
    }
}

/// Absolute-valued state updates; applying a step's changes in order
/// reproduces its effect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorldChange {
    RobotPose {
        pose: Pose2,
    },
    RobotAt {
        location: Option<String>,
    },
    Held {
        object: Option<String>,
    },
    Following {
        person: Option<String>,
    },
    ObjectState {
        name: String,
        position: [f64; 3],
        surface: Option<String>,
        holder: Option<String>,
    },
    DoorOpened {
        door: String,
    },
}
