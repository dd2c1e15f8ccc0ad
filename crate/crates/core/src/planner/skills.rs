use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::fmt;

/// The closed set of primitive skills a backend may select.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Skill {
    FindObj,
    Grasp,
    Move,
    Place,
    HandOver,
    FindPerson,
    FollowPerson,
    Speak,
    Ask,
    Answer,
    OpenDoor,
    Wait,
}

pub const ALL_SKILLS: [Skill; 12] = [
    Skill::FindObj,
    Skill::Grasp,
    Skill::Move,
    Skill::Place,
    Skill::HandOver,
    Skill::FindPerson,
    Skill::FollowPerson,
    Skill::Speak,
    Skill::Ask,
    Skill::Answer,
    Skill::OpenDoor,
    Skill::Wait,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgKind {
    Text,
    Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArgSpec {
    pub name: &'static str,
    pub kind: ArgKind,
    pub required: bool,
    pub help: &'static str,
}

const fn arg(name: &'static str, kind: ArgKind, required: bool, help: &'static str) -> ArgSpec {
    ArgSpec {
        name,
        kind,
        required,
        help,
    }
}

use ArgKind::{Number, Text};

impl Skill {
    pub fn name(self) -> &'static str {
        match self {
            Skill::FindObj => "find_obj",
            Skill::Grasp => "grasp",
            Skill::Move => "move",
            Skill::Place => "place",
            Skill::HandOver => "hand_over",
            Skill::FindPerson => "find_person",
            Skill::FollowPerson => "follow_person",
            Skill::Speak => "speak",
            Skill::Ask => "ask",
            Skill::Answer => "answer",
            Skill::OpenDoor => "open_door",
            Skill::Wait => "wait",
        }
    }

    pub fn from_name(name: &str) -> Option<Skill> {
        ALL_SKILLS.into_iter().find(|s| s.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            Skill::FindObj => "detect an object matching a description, optionally on a given surface",
            Skill::Grasp => "pick up a detected object within reach",
            Skill::Move => "navigate to a furniture item, room, door or person",
            Skill::Place => "put the held object on a surface",
            Skill::HandOver => "give the held object to a person (default: the operator)",
            Skill::FindPerson => "look for a person by name or in a room",
            Skill::FollowPerson => "start following a person",
            Skill::Speak => "say a sentence",
            Skill::Ask => "ask a person a question",
            Skill::Answer => "answer a question about the environment",
            Skill::OpenDoor => "open a door within reach",
            Skill::Wait => "wait for a number of seconds",
        }
    }

    pub fn args(self) -> &'static [ArgSpec] {
        const FIND_OBJ: [ArgSpec; 2] = [
            arg("description", Text, true, "object class or qualifier, e.g. `cup` or `right-most object`"),
            arg("surface", Text, false, "furniture or room to search"),
        ];
        const GRASP: [ArgSpec; 1] = [arg("object", Text, true, "object name")];
        const MOVE: [ArgSpec; 1] = [arg("location", Text, true, "furniture, room, door, person or `operator`")];
        const PLACE: [ArgSpec; 1] = [arg("surface", Text, true, "furniture name")];
        const HAND_OVER: [ArgSpec; 1] = [arg("person", Text, false, "person name, default operator")];
        const FIND_PERSON: [ArgSpec; 2] = [
            arg("name", Text, false, "person name"),
            arg("room", Text, false, "room to search"),
        ];
        const FOLLOW: [ArgSpec; 1] = [arg("person", Text, true, "person name")];
        const SPEAK: [ArgSpec; 1] = [arg("text", Text, true, "sentence")];
        const ASK: [ArgSpec; 2] = [
            arg("question", Text, true, "question text"),
            arg("person", Text, false, "person name, default operator"),
        ];
        const ANSWER: [ArgSpec; 1] = [arg("question", Text, true, "question text")];
        const OPEN_DOOR: [ArgSpec; 1] = [arg("door", Text, true, "door name")];
        const WAIT: [ArgSpec; 1] = [arg("seconds", Number, true, "0 to 600")];
        match self {
            Skill::FindObj => &FIND_OBJ,
            Skill::Grasp => &GRASP,
            Skill::Move => &MOVE,
            Skill::Place => &PLACE,
            Skill::HandOver => &HAND_OVER,
            Skill::FindPerson => &FIND_PERSON,
            Skill::FollowPerson => &FOLLOW,
            Skill::Speak => &SPEAK,
            Skill::Ask => &ASK,
            Skill::Answer => &ANSWER,
            Skill::OpenDoor => &OPEN_DOOR,
            Skill::Wait => &WAIT,
        }
    }

    /// Checks an argument object against the schema.
    pub fn check_args(self, args: &Map<String, Value>) -> Result<(), String> {
        let specs = self.args();
        for key in args.keys() {
            if !specs.iter().any(|s| s.name == key) {
                return Err(format!("{}: unexpected argument `{key}`", self.name()));
            }
        }
        for s in specs {
            match (args.get(s.name), s.kind) {
                (None, _) if s.required => {
                    return Err(format!("{}: missing argument `{}`", self.name(), s.name))
                }
                (None, _) => {}
                (Some(Value::String(t)), Text) if !t.trim().is_empty() => {}
                (Some(Value::Number(n)), Number) if n.as_f64().is_some_and(f64::is_finite) => {}
                (Some(v), kind) => {
                    return Err(format!(
                        "{}: argument `{}` must be {}, got {v}",
                        self.name(),
                        s.name,
                        match kind {
                            Text => "a nonempty string",
                            Number => "a number",
                        }
                    ))
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Skill {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkillCall {
    pub skill: Skill,
    #[serde(default)]
    pub args: Map<String, Value>,
}

impl SkillCall {
    pub fn new(skill: Skill) -> Self {
        Self {
            skill,
            args: Map::new(),
        }
    }

    pub fn arg(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.args.insert(key.into(), value.into());
        self
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.args.get(key).and_then(Value::as_str)
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.args.get(key).and_then(Value::as_f64)
    }
}

impl fmt::Display for SkillCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self
            .args
            .values()
            .map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        write!(f, "{}({})", self.skill, args.join(", "))
    }
}

/// Multi-line listing of the skill set for prompts and `--help`.
pub fn skill_listing() -> String {
    let mut s = String::new();
    for skill in ALL_SKILLS {
        let args: Vec<String> = skill
            .args()
            .iter()
            .map(|a| {
                let t = match a.kind {
                    Text => "string",
                    Number => "number",
                };
                if a.required {
                    format!("{}: {t}", a.name)
                } else {
                    format!("{}?: {t}", a.name)
                }
            })
            .collect();
        s.push_str(&format!("- {}({}): {}\n", skill.name(), args.join(", "), skill.description()));
    }
    s
}
