//! Command planner: a backend proposes one skill call at a time, each call
//! is validated and executed against a simulated world, and the run is
//! recorded as a replayable transcript.

mod backend;
mod exec;
pub mod llm;
mod rule;
mod skills;
mod world;

pub use backend::{
    observe, BackendContext, BackendError, Decision, HistoryEntry, PlannerBackend, ROLE_DESCRIPTION,
};
pub use exec::{
    execute_skill, find_object, validate_call, ExecError, Outcome, StepEffect, Violation, MAX_WAIT_SECONDS,
    REACH,
};
pub use llm::{ChatMessage, ChatRequest, ChatTransport, LlmBackend, ScriptedTransport, TransportError};
pub use rule::{expand_command, RuleBackend, TEMPLATES};
pub use skills::{skill_listing, ArgKind, ArgSpec, Skill, SkillCall, ALL_SKILLS};
pub use world::{normalize_name, Person, Robot, WorldChange, WorldError, WorldObject, WorldState, ROBOT};

use serde::{Deserialize, Serialize};

pub const DEFAULT_STEP_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptStep {
    pub index: usize,
    pub call: SkillCall,
    /// False when the call was rejected before execution.
    pub executed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub changes: Vec<WorldChange>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Done,
    Failed { step: usize, reason: String },
    StepLimitExceeded { steps: usize },
    BackendError { step: usize, error: BackendError },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub command: String,
    pub backend: String,
    pub steps: Vec<TranscriptStep>,
    #[serde(flatten)]
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanError {
    #[error("command is empty")]
    EmptyCommand,
}

/// Runs the propose-validate-execute loop until the backend reports done,
/// a step fails, the backend errors, or `step_limit` calls have run.
pub fn plan_and_execute(
    command: &str,
    world: &mut WorldState,
    backend: &mut dyn PlannerBackend,
    step_limit: usize,
) -> Result<Transcript, PlanError> {
    let command = command.trim();
    if command.is_empty() {
        return Err(PlanError::EmptyCommand);
    }
    let mut ctx = BackendContext::new(command, world);
    let mut steps = Vec::new();
    let mut status = None;
    for index in 0..step_limit {
        let call = match backend.next(&ctx) {
            Err(error) => {
                status = Some(Status::BackendError { step: index, error });
                break;
            }
            Ok(Decision::Done { .. }) => {
                status = Some(Status::Done);
                break;
            }
            Ok(Decision::Call(call)) => call,
        };
        let violations = validate_call(&call, world);
        if !violations.is_empty() {
            let reason = violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
            steps.push(TranscriptStep {
                index,
                call,
                executed: false,
                outcome: None,
                error: Some(reason.clone()),
                changes: Vec::new(),
            });
            status = Some(Status::Failed { step: index, reason });
            break;
        }
        match execute_skill(&call, world) {
            Ok(effect) => {
                ctx.record(
                    HistoryEntry {
                        call: call.clone(),
                        ok: true,
                        outcome: effect.outcome.clone(),
                    },
                    world,
                );
                steps.push(TranscriptStep {
                    index,
                    call,
                    executed: true,
                    outcome: Some(effect.outcome),
                    error: None,
                    changes: effect.changes,
                });
            }
            Err(e) => {
                let reason = e.to_string();
                steps.push(TranscriptStep {
                    index,
                    call,
                    executed: true,
                    outcome: None,
                    error: Some(reason.clone()),
                    changes: Vec::new(),
                });
                status = Some(Status::Failed { step: index, reason });
                break;
            }
        }
    }
    let status = status.unwrap_or(Status::StepLimitExceeded { steps: step_limit });
    Ok(Transcript {
        command: command.into(),
        backend: backend.name().into(),
        steps,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("step {step}: {reason}")]
pub struct ReplayError {
    pub step: usize,
    pub reason: String,
}

/// Re-applies recorded changes to `initial`, checking that each executed
/// call was valid in the state it ran against.
pub fn replay(initial: &WorldState, transcript: &Transcript) -> Result<WorldState, ReplayError> {
    let mut w = initial.clone();
    for s in &transcript.steps {
        if !s.executed {
            continue;
        }
        let v = validate_call(&s.call, &w);
        if !v.is_empty() {
            return Err(ReplayError {
                step: s.index,
                reason: v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
            });
        }
        for c in &s.changes {
            w.apply(c);
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use world::fixture;

    fn world() -> WorldState {
        WorldState::from_json(fixture::WORLD.as_bytes()).unwrap()
    }

    fn calls(t: &Transcript) -> Vec<String> {
        t.steps.iter().map(|s| s.call.skill.to_string()).collect()
    }

    #[test]
    fn canonical_bring_sequence() {
        let mut w = world();
        let initial = w.clone();
        let t = plan_and_execute(
            "Bring me the right-most object on the counter",
            &mut w,
            &mut RuleBackend,
            DEFAULT_STEP_LIMIT,
        )
        .unwrap();
        assert_eq!(t.status, Status::Done);
        assert_eq!(calls(&t), ["move", "find_obj", "grasp", "move", "hand_over"]);
        assert_eq!(t.steps[2].call.text("object"), Some("tray_1"));
        assert_eq!(w.object("tray_1").unwrap().holder.as_deref(), Some("alex"));
        assert_eq!(replay(&initial, &t).unwrap(), w);
    }

    #[test]
    fn unknown_furniture_fails_at_move() {
        let mut w = world();
        let t = plan_and_execute("bring me the cup from the piano", &mut w, &mut RuleBackend, 20).unwrap();
        match &t.status {
            Status::Failed { step: 0, reason } => assert!(reason.starts_with("UnknownLocation")),
            s => panic!("unexpected {s:?}"),
        }
        assert!(!t.steps[0].executed);
    }

    #[test]
    fn empty_command() {
        assert_eq!(
            plan_and_execute("  ", &mut world(), &mut RuleBackend, 20),
            Err(PlanError::EmptyCommand)
        );
    }

    #[test]
    fn step_limit() {
        struct Forever;
        impl PlannerBackend for Forever {
            fn name(&self) -> &str {
                "forever"
            }
            fn next(&mut self, _: &BackendContext) -> Result<Decision, BackendError> {
                Ok(Decision::Call(SkillCall::new(Skill::Wait).arg("seconds", 1)))
            }
        }
        let t = plan_and_execute("wait a lot", &mut world(), &mut Forever, 20).unwrap();
        assert_eq!(t.status, Status::StepLimitExceeded { steps: 20 });
        assert_eq!(t.steps.len(), 20);
    }

    #[test]
    fn llm_invalid_skill_never_runs() {
        let mut b = LlmBackend::new(ScriptedTransport::new([r#"{"skill":"teleport","args":{}}"#; 3]));
        let t = plan_and_execute("go to the kitchen", &mut world(), &mut b, 20).unwrap();
        assert!(t.steps.is_empty());
        assert!(matches!(
            t.status,
            Status::BackendError {
                step: 0,
                error: BackendError::SchemaViolation { .. }
            }
        ));
    }

    #[test]
    fn transcript_json_round_trip() {
        let mut w = world();
        let t = plan_and_execute("go to the kitchen", &mut w, &mut RuleBackend, 20).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains(r#""status":"done""#));
        let back: Transcript = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
