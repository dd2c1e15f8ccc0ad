//! Chat-model backend: one JSON request per decision, strict JSON replies.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::time::Duration;

use super::backend::{BackendContext, BackendError, Decision, PlannerBackend};
use super::skills::{Skill, SkillCall};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);
/// Follow-up attempts after a malformed reply.
pub const SCHEMA_RETRIES: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    fn new(role: &str, content: String) -> Self {
        Self {
            role: role.into(),
            content,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub system: String,
    pub messages: Vec<ChatMessage>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransportError {
    #[error("timed out after {0:?}")]
    Timeout(Duration),
    #[error("{0}")]
    Http(String),
}

/// Sends one chat request and returns the reply text.
pub trait ChatTransport {
    fn send(&mut self, request: &ChatRequest) -> Result<String, TransportError>;
}

/// Canned replies, consumed in order; for tests and offline runs.
#[derive(Debug, Clone, Default)]
pub struct ScriptedTransport {
    pub replies: std::collections::VecDeque<Result<String, TransportError>>,
    pub requests: Vec<ChatRequest>,
}

impl ScriptedTransport {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(replies: I) -> Self {
        Self {
            replies: replies.into_iter().map(|s| Ok(s.into())).collect(),
            requests: Vec::new(),
        }
    }
}

impl ChatTransport for ScriptedTransport {
    fn send(&mut self, request: &ChatRequest) -> Result<String, TransportError> {
        self.requests.push(request.clone());
        self.replies
            .pop_front()
            .unwrap_or_else(|| Err(TransportError::Http("script exhausted".into())))
    }
}

pub fn system_prompt(ctx: &BackendContext) -> String {
    format!(
        "{}\n\nSkills:\n{}\nReply with exactly one JSON object and nothing else: \
         {{\"skill\": <skill name>, \"args\": {{...}}}} to run a skill, or {{\"done\": true}} \
         when the command is complete.",
        ctx.role, ctx.skills
    )
}

pub fn user_message(ctx: &BackendContext) -> String {
    let body = serde_json::json!({
        "command": ctx.command,
        "observation": ctx.observation,
        "history": ctx.history,
    });
    serde_json::to_string(&body).expect("serializable")
}

/// Parses a strict reply: the whole text must be one JSON object.
pub fn parse_reply(text: &str) -> Result<Decision, String> {
    let v: Value = serde_json::from_str(text.trim()).map_err(|e| format!("reply is not valid JSON: {e}"))?;
    let Value::Object(mut obj) = v else {
        return Err("reply must be a JSON object".into());
    };
    if obj.contains_key("done") {
        return match (obj.len(), obj.get("done")) {
            (1, Some(Value::Bool(true))) => Ok(Decision::done()),
            _ => Err("`done` replies must be exactly {\"done\": true}".into()),
        };
    }
    let name = match obj.remove("skill") {
        Some(Value::String(s)) => s,
        Some(other) => return Err(format!("`skill` must be a string, got {other}")),
        None => return Err("reply has neither `skill` nor `done`".into()),
    };
    let skill = Skill::from_name(&name).ok_or_else(|| format!("`{name}` is not in the skill set"))?;
    let args = match obj.remove("args") {
        None => Map::new(),
        Some(Value::Object(m)) => m,
        Some(other) => return Err(format!("`args` must be an object, got {other}")),
    };
    if let Some(k) = obj.keys().next() {
        return Err(format!("unexpected key `{k}`"));
    }
    skill.check_args(&args)?;
    Ok(Decision::Call(SkillCall { skill, args }))
}

pub struct LlmBackend<T: ChatTransport> {
    pub transport: T,
    pub retries: usize,
}

impl<T: ChatTransport> LlmBackend<T> {
    pub fn new(transport: T) -> Self {
        Self {
            transport,
            retries: SCHEMA_RETRIES,
        }
    }
}

impl<T: ChatTransport> PlannerBackend for LlmBackend<T> {
    fn name(&self) -> &str {
        "llm"
    }

    fn next(&mut self, ctx: &BackendContext) -> Result<Decision, BackendError> {
        let mut req = ChatRequest {
            system: system_prompt(ctx),
            messages: vec![ChatMessage::new("user", user_message(ctx))],
        };
        let mut last = String::new();
        for _ in 0..=self.retries {
            let reply = self.transport.send(&req).map_err(|e| match e {
                TransportError::Timeout(d) => BackendError::Timeout {
                    seconds: d.as_secs_f64(),
                },
                TransportError::Http(m) => BackendError::HttpError { message: m },
            })?;
            match parse_reply(&reply) {
                Ok(d) => return Ok(d),
                Err(e) => {
                    req.messages.push(ChatMessage::new("assistant", reply));
                    req.messages.push(ChatMessage::new(
                        "user",
                        format!(
                            "Your reply was rejected: {e}. Reply with only one JSON object, \
                             either {{\"skill\": ..., \"args\": {{...}}}} using a listed skill, or {{\"done\": true}}."
                        ),
                    ));
                    last = e;
                }
            }
        }
        Err(BackendError::SchemaViolation {
            message: format!("after {} retries: {last}", self.retries),
        })
    }
}

/// Pulls the assistant text out of common response shapes; falls back to
/// the raw body.
pub fn extract_reply_text(body: &str) -> String {
    let Ok(v) = serde_json::from_str::<Value>(body) else {
        return body.to_string();
    };
    if v.get("skill").is_some() || v.get("done").is_some() {
        return body.to_string();
    }
    let candidates = [
        v.pointer("/content"),
        v.pointer("/message/content"),
        v.pointer("/choices/0/message/content"),
        v.pointer("/content/0/text"),
    ];
    let found = candidates
        .into_iter()
        .flatten()
        .find_map(|c| c.as_str().map(str::to_string));
    found.unwrap_or_else(|| body.to_string())
}

#[cfg(feature = "http")]
pub use http::HttpTransport;

#[cfg(feature = "http")]
mod http {
    use super::*;

    /// Blocking HTTP POST transport with a bearer key.
    pub struct HttpTransport {
        endpoint: String,
        api_key: Option<String>,
        timeout: Duration,
        agent: ureq::Agent,
    }

    impl HttpTransport {
        pub fn new(endpoint: &str, api_key: Option<String>, timeout: Duration) -> Self {
            let agent = ureq::Agent::config_builder()
                .timeout_global(Some(timeout))
                .http_status_as_error(false)
                .build()
                .into();
            Self {
                endpoint: endpoint.into(),
                api_key,
                timeout,
                agent,
            }
        }

        /// Endpoint from `LLM_ENDPOINT` unless given; key from `LLM_API_KEY`.
        pub fn from_env(endpoint: Option<&str>, timeout: Duration) -> Result<Self, TransportError> {
            let endpoint = match endpoint {
                Some(e) => e.to_string(),
                None => std::env::var("LLM_ENDPOINT")
                    .map_err(|_| TransportError::Http("no endpoint: set LLM_ENDPOINT or pass --endpoint".into()))?,
            };
            Ok(Self::new(&endpoint, std::env::var("LLM_API_KEY").ok(), timeout))
        }
    }

    fn is_timeout(e: &ureq::Error) -> bool {
        match e {
            ureq::Error::Timeout(_) => true,
            ureq::Error::Io(io) => matches!(
                io.kind(),
                std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock
            ),
            _ => false,
        }
    }

    impl ChatTransport for HttpTransport {
        fn send(&mut self, request: &ChatRequest) -> Result<String, TransportError> {
            let body = serde_json::to_string(request).expect("serializable");
            let mut req = self
                .agent
                .post(&self.endpoint)
                .header("Content-Type", "application/json");
            if let Some(k) = &self.api_key {
                req = req.header("Authorization", &format!("Bearer {k}"));
            }
            let map = |e: ureq::Error| {
                if is_timeout(&e) {
                    TransportError::Timeout(self.timeout)
                } else {
                    TransportError::Http(e.to_string())
                }
            };
            let mut resp = req.send(body.as_str()).map_err(map)?;
            let status = resp.status();
            let text = resp.body_mut().read_to_string().map_err(map)?;
            if !status.is_success() {
                return Err(TransportError::Http(format!("status {}: {}", status.as_u16(), text)));
            }
            Ok(extract_reply_text(&text))
        }
    }
}
