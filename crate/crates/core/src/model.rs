//! The debugging metamodel: developers, products, tasks, sessions, the code
//! entities they touch, and the telemetry rows recorded against them.
//!
//! All types are plain immutable values; mutation goes through
//! [`crate::store::Store`]. Serialization uses snake_case field names and is
//! shared by the wire protocol, the JSONL log and every export.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

macro_rules! define_id {
    ($($(#[$meta:meta])* $name:ident),* $(,)?) => {$(
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            /// Fresh server-assigned identifier.
            pub fn generate() -> Self {
                Self(uuid::Uuid::new_v4().to_string())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    )*};
}

define_id!(
    DeveloperId,
    ProductId,
    TaskId,
    SessionId,
    NamespaceId,
    TypeId,
    MethodId,
    BreakpointId,
    InvocationId,
    EventId,
);

/// Milliseconds since the Unix epoch, UTC.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timestamp(pub i64);

impl Timestamp {
    pub fn now() -> Self {
        let ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as i64)
            .unwrap_or(0);
        Timestamp(ms)
    }

    pub fn millis(self) -> i64 {
        self.0
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Task colours, handed out round-robin per product.
pub const TASK_PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

pub fn palette_color(index: usize) -> &'static str {
    TASK_PALETTE[index % TASK_PALETTE.len()]
}

/// `#rrggbb`, case-insensitive.
pub fn is_rgb_hex(s: &str) -> bool {
    let digits = s.strip_prefix('#').unwrap_or(s);
    digits.len() == 6 && digits.chars().all(|c| c.is_ascii_hexdigit())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Developer {
    pub id: DeveloperId,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Product {
    pub id: ProductId,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub id: TaskId,
    pub product_id: ProductId,
    pub issue_key: String,
    pub title: String,
    pub display_color: String,
}

impl Task {
    pub fn validate(&self) -> Result<()> {
        if !is_rgb_hex(&self.display_color) {
            return Err(Error::Invalid(format!(
                "display_color {:?} is not a 6-digit RGB hex value",
                self.display_color
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionOutcome {
    FaultFound,
    FaultNotFound,
    Abandoned,
    Open,
}

impl FromStr for SessionOutcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_snake_enum(s, "session outcome")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: SessionId,
    pub developer_id: DeveloperId,
    pub task_id: TaskId,
    pub product_id: ProductId,
    pub started_at: Timestamp,
    pub finished_at: Option<Timestamp>,
    pub outcome: SessionOutcome,
    pub label: String,
}

impl Session {
    pub fn is_open(&self) -> bool {
        self.outcome == SessionOutcome::Open
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(end) = self.finished_at {
            if end < self.started_at {
                return Err(Error::Invalid(format!(
                    "session {} finishes at {} before it starts at {}",
                    self.id, end, self.started_at
                )));
            }
        }
        if !self.is_open() && self.finished_at.is_none() {
            return Err(Error::Invalid(format!(
                "session {} has an outcome but no finish time",
                self.id
            )));
        }
        Ok(())
    }

    /// Whether `at` falls inside the session's recorded interval.
    pub fn covers(&self, at: Timestamp) -> bool {
        at >= self.started_at && self.finished_at.is_none_or(|end| at <= end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Namespace {
    pub id: NamespaceId,
    pub product_id: ProductId,
    pub full_name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEntity {
    pub id: TypeId,
    pub product_id: ProductId,
    pub namespace_id: NamespaceId,
    pub simple_name: String,
    pub full_name: String,
    pub source_path: String,
    pub has_source: bool,
}

/// Splits `a.b.C` into (`a.b`, `C`). The default package is the empty string.
pub fn split_type_name(full_name: &str) -> (&str, &str) {
    match full_name.rfind('.') {
        Some(i) => (&full_name[..i], &full_name[i + 1..]),
        None => ("", full_name),
    }
}

/// Conventional source path for a type: `a/b/C.java`.
pub fn default_source_path(full_name: &str) -> String {
    format!("{}.java", full_name.replace('.', "/"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodEntity {
    pub id: MethodId,
    pub type_id: TypeId,
    pub signature: String,
    pub declared_line: Option<u32>,
}

impl MethodEntity {
    /// Method name without the parameter list.
    pub fn name(&self) -> &str {
        self.signature
            .split_once('(')
            .map_or(self.signature.as_str(), |(name, _)| name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakpointKind {
    Line,
    Conditional,
    Watchpoint,
}

impl FromStr for BreakpointKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_snake_enum(s, "breakpoint kind")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub id: BreakpointId,
    pub session_id: SessionId,
    pub type_id: TypeId,
    pub method_id: Option<MethodId>,
    pub line_number: u32,
    pub kind: BreakpointKind,
    pub condition: Option<String>,
    pub created_at: Timestamp,
}

impl Breakpoint {
    pub fn validate(&self) -> Result<()> {
        if self.line_number < 1 {
            return Err(Error::InvalidLine(self.line_number.into()));
        }
        match (self.kind, &self.condition) {
            (BreakpointKind::Conditional, None) => Err(Error::Invalid(
                "conditional breakpoint without a condition".into(),
            )),
            (BreakpointKind::Line | BreakpointKind::Watchpoint, Some(_)) => Err(Error::Invalid(
                "only conditional breakpoints carry a condition".into(),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invocation {
    pub id: InvocationId,
    pub session_id: SessionId,
    pub invoking_method_id: MethodId,
    pub invoked_method_id: MethodId,
    pub occurred_at: Timestamp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DebugEventKind {
    BreakpointAdded,
    BreakpointRemoved,
    StepInto,
    StepOver,
    /// Also known as "step out".
    StepReturn,
    Suspend,
    Resume,
    SessionStart,
    SessionEnd,
}

impl DebugEventKind {
    pub fn is_step(self) -> bool {
        matches!(
            self,
            DebugEventKind::StepInto | DebugEventKind::StepOver | DebugEventKind::StepReturn
        )
    }
}

impl FromStr for DebugEventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_snake_enum(s, "debug event kind")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DebugEvent {
    pub id: EventId,
    pub session_id: SessionId,
    pub kind: DebugEventKind,
    pub occurred_at: Timestamp,
    #[serde(default)]
    pub payload: BTreeMap<String, String>,
}

/// Co-location key for breakpoint analyses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceLocation {
    pub type_full_name: String,
    pub line_number: u32,
}

pub(crate) fn parse_snake_enum<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T> {
    serde_json::from_value(serde_json::Value::String(s.to_owned()))
        .map_err(|_| Error::Invalid(format!("unknown {what} {s:?}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    OutOfOrderTimestamp,
    MissingSessionStart,
    EventAfterEnd,
    ForeignSession,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamViolation {
    pub index: usize,
    pub kind: ViolationKind,
}

/// Whether a stream is expected to open with `SessionStart`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamStart {
    Beginning,
    Continuation,
}

/// Checks an event stream, in arrival order, against the lifecycle rules.
/// An empty result means the stream is well formed.
pub fn validate_event_stream(session: &Session, events: &[DebugEvent]) -> Vec<StreamViolation> {
    validate_event_stream_from(session, events, StreamStart::Beginning)
}

pub fn validate_event_stream_from(
    session: &Session,
    events: &[DebugEvent],
    start: StreamStart,
) -> Vec<StreamViolation> {
    let mut violations = Vec::new();
    let mut push = |index, kind| violations.push(StreamViolation { index, kind });

    if start == StreamStart::Beginning {
        if let Some(first) = events.first() {
            if first.kind != DebugEventKind::SessionStart {
                push(0, ViolationKind::MissingSessionStart);
            }
        }
    }

    let mut last: Option<Timestamp> = None;
    let mut ended = false;
    for (index, event) in events.iter().enumerate() {
        if event.session_id != session.id {
            push(index, ViolationKind::ForeignSession);
        }
        if ended {
            push(index, ViolationKind::EventAfterEnd);
        }
        if last.is_some_and(|prev| event.occurred_at < prev) {
            push(index, ViolationKind::OutOfOrderTimestamp);
        }
        last = Some(last.map_or(event.occurred_at, |prev| prev.max(event.occurred_at)));
        if event.kind == DebugEventKind::SessionEnd {
            ended = true;
        }
    }
    violations
}
