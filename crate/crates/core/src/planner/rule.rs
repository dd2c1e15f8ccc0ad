//! Deterministic template grammar mapping commands to skill sequences.

use regex::Regex;
use serde_json::Value;
use std::sync::LazyLock;

use super::backend::{BackendContext, BackendError, Decision, PlannerBackend};
use super::skills::{Skill, SkillCall};
use super::world::normalize_name;

pub const TEMPLATES: &[&str] = &[
    "bring|fetch|get|give me <object> from|on|in <place>",
    "take|bring|carry|put|place <object> from <place> to|on|into <place or person>",
    "take|bring|carry|put|place <object> to|on|into <place or person>",
    "go|move|navigate|walk to <place>",
    "find|locate|look for <object or person> [in|on|at <place>]",
    "greet <person> | greet the person in <room>",
    "follow <person>",
    "tell me how many|where|what ...",
    "answer <question>",
    "open <door>",
    "wait [for] <n> seconds",
    "say <text>",
];

/// Step argument, possibly filled from an earlier outcome.
#[derive(Debug, Clone, PartialEq)]
enum Arg {
    Text(String),
    Num(f64),
    Found,
    Person,
    Answer,
}

#[derive(Debug, Clone, PartialEq)]
struct Step {
    skill: Skill,
    args: Vec<(&'static str, Arg)>,
}

fn step(skill: Skill, args: Vec<(&'static str, Arg)>) -> Step {
    Step { skill, args }
}

fn lit(s: &str) -> Arg {
    Arg::Text(s.to_string())
}

static RE: LazyLock<Vec<(&'static str, Regex)>> = LazyLock::new(|| {
    let pats = [
        ("move_obj", r"^(?:take|bring|carry|put|place|move) (?:me )?(?P<obj>.+?) (?:from|off) (?P<src>.+?) (?:to|onto|into|on|in) (?P<dst>.+)$"),
        ("move_obj_at", r"^(?:take|bring|carry|put|place|move) (?:me )?(?P<obj>.+?) (?:on|in|at) (?P<src>.+?) to (?P<dst>.+)$"),
        ("bring", r"^(?:bring|fetch|get|give) (?:me )?(?P<obj>.+?) (?:from|on|in|off) (?P<src>.+)$"),
        ("deliver", r"^(?:take|bring|carry|put|place) (?P<obj>.+?) (?:to|onto|into|on|in) (?P<dst>.+)$"),
        ("go", r"^(?:go|move|navigate|walk|drive) (?:to|into|in) (?P<loc>.+)$"),
        ("find_in", r"^(?:find|locate|look for|search for) (?P<what>.+?) (?:in|on|at) (?P<loc>.+)$"),
        ("find", r"^(?:find|locate|look for|search for) (?P<what>.+)$"),
        ("greet_in", r"^(?:greet|say hello to|say hi to) (?:the person|someone|somebody) in (?P<room>.+)$"),
        ("greet", r"^(?:greet|say hello to|say hi to) (?P<who>.+)$"),
        ("follow", r"^follow (?P<who>.+)$"),
        ("tell", r"^tell me (?P<q>(?:how many|where|what) .+)$"),
        ("answer", r"^answer (?P<q>.+)$"),
        ("open", r"^open (?P<door>.+)$"),
        ("wait", r"^wait (?:for )?(?P<n>\d+(?:\.\d+)?) ?(?:seconds?|secs?|s)$"),
        ("say", r"^(?:say|tell everyone) (?P<text>.+)$"),
    ];
    pats.into_iter()
        .map(|(k, p)| (k, Regex::new(p).expect("valid pattern")))
        .collect()
});

const VERBS: &[&str] = &[
    "bring", "fetch", "get", "give", "take", "carry", "put", "place", "go", "move", "navigate",
    "walk", "drive", "find", "locate", "look", "search", "greet", "follow", "tell", "answer",
    "open", "wait", "say",
];

fn clean(cmd: &str) -> String {
    let lowered = cmd.to_lowercase().replace([',', '.', '!', '?', ';'], " ");
    let mut words: Vec<&str> = lowered.split_whitespace().collect();
    while let Some(first) = words.first() {
        if ["please", "robot", "hey", "could", "you", "can"].contains(first) {
            words.remove(0);
        } else {
            break;
        }
    }
    words.retain(|w| *w != "please");
    words.join(" ")
}

/// Splits at `then`, `and then`, and `and <verb>`.
fn clauses(cmd: &str) -> Vec<String> {
    let words: Vec<&str> = cmd.split(' ').collect();
    let mut out = Vec::new();
    let mut cur: Vec<&str> = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let w = words[i];
        let next = words.get(i + 1).copied();
        let split = match w {
            "then" => Some(1),
            "and" if next == Some("then") => Some(2),
            "and" if next.is_some_and(|n| VERBS.contains(&n)) => Some(1),
            _ => None,
        };
        match split {
            Some(skip) if !cur.is_empty() => {
                out.push(cur.join(" "));
                cur.clear();
                i += skip;
            }
            Some(skip) => i += skip,
            None => {
                cur.push(w);
                i += 1;
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur.join(" "));
    }
    out
}

/// Drops leading articles and possessives.
fn noun(s: &str) -> String {
    let mut words: Vec<&str> = s.split(' ').collect();
    while words.len() > 1 && ["the", "a", "an", "my", "some", "your"].contains(&words[0]) {
        words.remove(0);
    }
    words.join(" ")
}

fn person_names(ctx: &BackendContext) -> Vec<String> {
    ctx.observation["persons"]
        .as_array()
        .map(|a| {
            a.iter()
                .filter_map(|p| p["name"].as_str().map(normalize_name))
                .collect()
        })
        .unwrap_or_default()
}

fn is_person(ctx: &BackendContext, s: &str) -> bool {
    let n = normalize_name(s);
    n == "me" || n == "operator" || person_names(ctx).contains(&n)
}

fn person_arg(s: &str) -> Arg {
    if s == "me" {
        lit("operator")
    } else {
        lit(s)
    }
}

fn deliver(ctx: &BackendContext, dst: &str, steps: &mut Vec<Step>) {
    let dst = noun(dst);
    steps.push(step(Skill::Move, vec![("location", person_arg(&dst))]));
    if is_person(ctx, &dst) {
        steps.push(step(Skill::HandOver, vec![("person", person_arg(&dst))]));
    } else {
        steps.push(step(Skill::Place, vec![("surface", lit(&dst))]));
    }
}

fn expand_clause(ctx: &BackendContext, clause: &str) -> Option<Vec<Step>> {
    let (kind, caps) = RE.iter().find_map(|(k, re)| re.captures(clause).map(|c| (*k, c)))?;
    let g = |name: &str| caps.name(name).map(|m| m.as_str().to_string()).unwrap_or_default();
    let mut s = Vec::new();
    match kind {
        "move_obj" | "move_obj_at" => {
            let (obj, src) = (noun(&g("obj")), noun(&g("src")));
            s.push(step(Skill::Move, vec![("location", lit(&src))]));
            s.push(step(Skill::FindObj, vec![("description", lit(&obj)), ("surface", lit(&src))]));
            s.push(step(Skill::Grasp, vec![("object", Arg::Found)]));
            deliver(ctx, &g("dst"), &mut s);
        }
        "bring" => {
            let (obj, src) = (noun(&g("obj")), noun(&g("src")));
            s.push(step(Skill::Move, vec![("location", lit(&src))]));
            s.push(step(Skill::FindObj, vec![("description", lit(&obj)), ("surface", lit(&src))]));
            s.push(step(Skill::Grasp, vec![("object", Arg::Found)]));
            s.push(step(Skill::Move, vec![("location", lit("operator"))]));
            s.push(step(Skill::HandOver, vec![]));
        }
        "deliver" => {
            let obj = noun(&g("obj"));
            if !["it", "that", "this", "them"].contains(&obj.as_str()) {
                s.push(step(Skill::FindObj, vec![("description", lit(&obj))]));
            }
            s.push(step(Skill::Grasp, vec![("object", Arg::Found)]));
            deliver(ctx, &g("dst"), &mut s);
        }
        "go" => s.push(step(Skill::Move, vec![("location", person_arg(&noun(&g("loc"))))])),
        "find_in" | "find" => {
            let what = noun(&g("what"));
            let loc = (kind == "find_in").then(|| noun(&g("loc")));
            let anyone = ["person", "someone", "somebody", "anyone"].contains(&what.as_str());
            if anyone || is_person(ctx, &what) {
                let mut args = Vec::new();
                if !anyone {
                    args.push(("name", person_arg(&what)));
                }
                if let Some(l) = &loc {
                    s.push(step(Skill::Move, vec![("location", lit(l))]));
                    args.push(("room", lit(l)));
                }
                s.push(step(Skill::FindPerson, args));
                s.push(step(Skill::Move, vec![("location", Arg::Person)]));
            } else {
                let mut args = vec![("description", lit(&what))];
                if let Some(l) = &loc {
                    s.push(step(Skill::Move, vec![("location", lit(l))]));
                    args.push(("surface", lit(l)));
                }
                s.push(step(Skill::FindObj, args));
            }
        }
        "greet_in" => {
            let room = noun(&g("room"));
            s.push(step(Skill::Move, vec![("location", lit(&room))]));
            s.push(step(Skill::FindPerson, vec![("room", lit(&room))]));
            s.push(step(Skill::Move, vec![("location", Arg::Person)]));
            s.push(step(Skill::Speak, vec![("text", lit("Hello!"))]));
        }
        "greet" => {
            let who = noun(&g("who"));
            s.push(step(Skill::FindPerson, vec![("name", person_arg(&who))]));
            s.push(step(Skill::Move, vec![("location", Arg::Person)]));
            s.push(step(Skill::Speak, vec![("text", lit("Hello!"))]));
        }
        "follow" => {
            let who = noun(&g("who"));
            s.push(step(Skill::FindPerson, vec![("name", person_arg(&who))]));
            s.push(step(Skill::Move, vec![("location", Arg::Person)]));
            s.push(step(Skill::FollowPerson, vec![("person", Arg::Person)]));
        }
        "tell" => {
            s.push(step(Skill::Answer, vec![("question", lit(&g("q")))]));
            s.push(step(Skill::Move, vec![("location", lit("operator"))]));
            s.push(step(Skill::Speak, vec![("text", Arg::Answer)]));
        }
        "answer" => s.push(step(Skill::Answer, vec![("question", lit(&g("q")))])),
        "open" => {
            let d = noun(&g("door"));
            s.push(step(Skill::Move, vec![("location", lit(&d))]));
            s.push(step(Skill::OpenDoor, vec![("door", lit(&d))]));
        }
        "wait" => s.push(step(Skill::Wait, vec![("seconds", Arg::Num(g("n").parse().ok()?))])),
        "say" => s.push(step(Skill::Speak, vec![("text", lit(&g("text")))])),
        _ => return None,
    }
    Some(s)
}

fn expand(ctx: &BackendContext) -> Result<Vec<Step>, BackendError> {
    let unparsable = |part: &str| BackendError::UnparsableCommand {
        message: format!(
            "cannot parse `{part}`; supported templates: {}",
            TEMPLATES.join("; ")
        ),
    };
    let cmd = clean(&ctx.command);
    let parts = clauses(&cmd);
    if parts.is_empty() {
        return Err(unparsable(&ctx.command));
    }
    let mut steps = Vec::new();
    for p in &parts {
        steps.extend(expand_clause(ctx, p).ok_or_else(|| unparsable(p))?);
    }
    Ok(steps)
}

/// The skill sequence a command expands to, with references shown as
/// `<found>`, `<person>` and `<answer>`.
pub fn expand_command(command: &str, ctx: &BackendContext) -> Result<Vec<String>, BackendError> {
    let mut c = ctx.clone();
    c.command = command.into();
    Ok(expand(&c)?
        .into_iter()
        .map(|s| {
            let args: Vec<String> = s
                .args
                .iter()
                .map(|(_, a)| match a {
                    Arg::Text(t) => t.clone(),
                    Arg::Num(n) => n.to_string(),
                    Arg::Found => "<found>".into(),
                    Arg::Person => "<person>".into(),
                    Arg::Answer => "<answer>".into(),
                })
                .collect();
            format!("{}({})", s.skill, args.join(", "))
        })
        .collect())
}

#[derive(Debug, Default, Clone)]
pub struct RuleBackend;

impl PlannerBackend for RuleBackend {
    fn name(&self) -> &str {
        "rule"
    }

    fn next(&mut self, ctx: &BackendContext) -> Result<Decision, BackendError> {
        let steps = expand(ctx)?;
        let Some(s) = steps.get(ctx.history.len()) else {
            return Ok(Decision::done());
        };
        let mut call = SkillCall::new(s.skill);
        for (k, a) in &s.args {
            let v: Value = match a {
                Arg::Text(t) => t.clone().into(),
                Arg::Num(n) => (*n).into(),
                Arg::Found | Arg::Person | Arg::Answer => {
                    let key = match a {
                        Arg::Found => "object",
                        Arg::Person => "person",
                        _ => "answer",
                    };
                    ctx.last_result(key)
                        .ok_or_else(|| BackendError::UnparsableCommand {
                            message: format!("no earlier step produced a `{key}` for {}", s.skill),
                        })?
                        .into()
                }
            };
            call.args.insert((*k).into(), v);
        }
        Ok(Decision::Call(call))
    }
}
