//! Telemetry intake: session lifecycle, breakpoints, stepping events and the
//! invocations foraged from their stack snapshots.
//!
//! Every operation is a single store transaction, so a breakpoint and its
//! `BreakpointAdded` event (or a step event and its invocations) become
//! visible together. Timestamps supplied by clients must not go backwards
//! within a session; omitted timestamps are taken from the server clock.

mod log;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use log::{
    BreakpointBody, EventBody, IngestSummary, InvocationBody, ProductBody, SessionCloseBody,
    SessionLogRecord, SessionOpenBody, TaskBody, TypeBody, write_session_log,
};

use crate::error::{Error, Result};
use crate::model::*;
use crate::store::{require_session, Record, Store, StoreSnapshot, Txn};

/// One stack frame as reported by a tracer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StackFrame {
    pub type_full_name: String,
    pub method_signature: String,
    pub line_number: u32,
}

impl StackFrame {
    pub fn new(type_full_name: &str, method_signature: &str, line_number: u32) -> Self {
        StackFrame {
            type_full_name: type_full_name.into(),
            method_signature: method_signature.into(),
            line_number,
        }
    }
}

/// Call stack at a suspension point, innermost frame first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackSnapshot {
    pub frames: Vec<StackFrame>,
}

impl StackSnapshot {
    pub fn new(frames: Vec<StackFrame>) -> Self {
        StackSnapshot { frames }
    }

    /// Adjacent (caller, callee) frame pairs, innermost pair first.
    pub fn call_pairs(&self) -> impl Iterator<Item = (&StackFrame, &StackFrame)> {
        self.frames.windows(2).map(|w| (&w[1], &w[0]))
    }

    fn describe(&self) -> String {
        self.frames
            .iter()
            .map(|f| format!("{}.{}:{}", f.type_full_name, f.method_signature, f.line_number))
            .collect::<Vec<_>>()
            .join(" <- ")
    }
}

/// Method reference by name, for directly reported invocations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodRef {
    pub type_full_name: String,
    pub method_signature: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodDeclaration {
    pub signature: String,
    #[serde(default)]
    pub declared_line: Option<u32>,
}

/// Source-backed type registration, with its method line layout when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeDeclaration {
    pub full_name: String,
    #[serde(default)]
    pub source_path: Option<String>,
    #[serde(default)]
    pub methods: Vec<MethodDeclaration>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenSession {
    pub developer: String,
    pub product: String,
    pub task: String,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub started_at: Option<Timestamp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewBreakpoint {
    pub type_full_name: String,
    pub line_number: i64,
    #[serde(default = "default_kind")]
    pub kind: BreakpointKind,
    #[serde(default)]
    pub condition: Option<String>,
    #[serde(default)]
    pub created_at: Option<Timestamp>,
}

fn default_kind() -> BreakpointKind {
    BreakpointKind::Line
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewEvent {
    pub kind: DebugEventKind,
    #[serde(default)]
    pub occurred_at: Option<Timestamp>,
    #[serde(default)]
    pub payload: BTreeMap<String, String>,
    #[serde(default)]
    pub snapshot: Option<StackSnapshot>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewInvocation {
    pub invoking: MethodRef,
    pub invoked: MethodRef,
    #[serde(default)]
    pub occurred_at: Option<Timestamp>,
}

/// Result of recording a generic event.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedEvent {
    pub event: DebugEvent,
    pub invocations: Vec<Invocation>,
}

impl Store {
    pub fn create_product(&self, name: &str) -> Result<Product> {
        self.transact(|txn| {
            if txn.view().product_named(name).is_some() {
                return Err(Error::Duplicate(format!("product {name}")));
            }
            put_product(txn, name)
        })
    }

    /// Returns the named product, creating it if needed.
    pub fn ensure_product(&self, name: &str) -> Result<Product> {
        self.transact(|txn| match txn.view().product_named(name) {
            Some(p) => Ok(p.clone()),
            None => put_product(txn, name),
        })
    }

    pub fn create_task(&self, product: &str, issue_key: &str, title: &str) -> Result<Task> {
        self.transact(|txn| {
            let product = resolve_product(txn.view(), product)?.id.clone();
            if txn.view().task_by_key(&product, issue_key).is_some() {
                return Err(Error::Duplicate(format!("task {issue_key}")));
            }
            put_task(txn, &product, issue_key, title)
        })
    }

    pub fn ensure_task(&self, product: &str, issue_key: &str, title: &str) -> Result<Task> {
        self.transact(|txn| {
            let product = resolve_product(txn.view(), product)?.id.clone();
            match txn.view().task_by_key(&product, issue_key) {
                Some(t) => Ok(t.clone()),
                None => put_task(txn, &product, issue_key, title),
            }
        })
    }

    /// Registers (or refreshes) a type whose source is available, together with
    /// its methods' declaration lines.
    pub fn declare_type(&self, product: &str, decl: &TypeDeclaration) -> Result<TypeEntity> {
        self.transact(|txn| {
            let product = resolve_product(txn.view(), product)?.id.clone();
            let mut ty = ensure_type(txn, &product, &decl.full_name, true)?;
            if let Some(path) = &decl.source_path {
                if *path != ty.source_path {
                    ty.source_path = path.clone();
                    txn.put(Record::Type(ty.clone()));
                }
            }
            for m in &decl.methods {
                let mut method = ensure_method(txn, &ty.id, &m.signature);
                if m.declared_line.is_some() && method.declared_line != m.declared_line {
                    method.declared_line = m.declared_line;
                    txn.put(Record::Method(method));
                }
            }
            Ok(ty)
        })
    }

    pub fn open_session(&self, req: &OpenSession) -> Result<Session> {
        self.transact(|txn| {
            let view = txn.view();
            let product = resolve_product(view, &req.product)?.id.clone();
            let task = view
                .task_by_key(&product, &req.task)
                .or_else(|| view.task(&TaskId::from(req.task.as_str())).filter(|t| t.product_id == product))
                .ok_or_else(|| Error::UnknownTask(req.task.clone()))?
                .id
                .clone();
            if req.developer.is_empty() {
                return Err(Error::Invalid("developer name is empty".into()));
            }
            let developer = match view.developer_named(&req.developer) {
                Some(d) => d.id.clone(),
                None => {
                    let d = Developer { id: DeveloperId::generate(), name: req.developer.clone() };
                    txn.put(Record::Developer(d.clone()));
                    d.id
                }
            };
            let started_at = req.started_at.unwrap_or_else(Timestamp::now);
            let session = Session {
                id: SessionId::generate(),
                developer_id: developer,
                task_id: task,
                product_id: product,
                started_at,
                finished_at: None,
                outcome: SessionOutcome::Open,
                label: req.label.clone(),
            };
            txn.put(Record::Session(session.clone()));
            put_event(txn, &session.id, DebugEventKind::SessionStart, started_at, BTreeMap::new());
            Ok(session)
        })
    }

    pub fn record_breakpoint(&self, session_id: &SessionId, req: &NewBreakpoint) -> Result<Breakpoint> {
        self.transact(|txn| {
            let session = require_open(txn.view(), session_id)?.clone();
            if req.line_number < 1 || req.line_number > u32::MAX as i64 {
                return Err(Error::InvalidLine(req.line_number));
            }
            let line = req.line_number as u32;
            let at = telemetry_time(txn.view(), &session, req.created_at)?;
            let ty = ensure_type(txn, &session.product_id, &req.type_full_name, true)?;
            let method_id = txn.view().method_enclosing(&ty.id, line).map(|m| m.id.clone());
            let bp = Breakpoint {
                id: BreakpointId::generate(),
                session_id: session.id.clone(),
                type_id: ty.id.clone(),
                method_id,
                line_number: line,
                kind: req.kind,
                condition: req.condition.clone(),
                created_at: at,
            };
            bp.validate()?;
            txn.put(Record::Breakpoint(bp.clone()));
            let payload = BTreeMap::from([
                ("breakpoint_id".to_owned(), bp.id.to_string()),
                ("location".to_owned(), format!("{}:{}", ty.full_name, line)),
            ]);
            put_event(txn, &session.id, DebugEventKind::BreakpointAdded, at, payload);
            Ok(bp)
        })
    }

    /// Records a stepping command and persists the not-yet-seen invocations
    /// implied by its stack snapshot.
    pub fn record_step_event(
        &self,
        session_id: &SessionId,
        kind: DebugEventKind,
        snapshot: &StackSnapshot,
        at: Option<Timestamp>,
    ) -> Result<Vec<Invocation>> {
        let event = NewEvent { kind, occurred_at: at, payload: BTreeMap::new(), snapshot: Some(snapshot.clone()) };
        if !kind.is_step() {
            return Err(Error::InvalidEventKind(format!("{kind:?}")));
        }
        self.record_event(session_id, &event).map(|r| r.invocations)
    }

    /// Records any client-reportable event. Stepping events must carry a
    /// snapshot; lifecycle and breakpoint-added events have dedicated calls.
    pub fn record_event(&self, session_id: &SessionId, req: &NewEvent) -> Result<RecordedEvent> {
        use DebugEventKind::*;
        if matches!(req.kind, BreakpointAdded | SessionStart | SessionEnd) {
            return Err(Error::InvalidEventKind(format!("{:?}", req.kind)));
        }
        self.transact(|txn| {
            let session = require_open(txn.view(), session_id)?.clone();
            let at = telemetry_time(txn.view(), &session, req.occurred_at)?;
            let mut payload = req.payload.clone();
            let mut invocations = Vec::new();
            match (&req.snapshot, req.kind.is_step()) {
                (None, true) => return Err(Error::EmptySnapshot),
                (Some(snap), true) => {
                    if snap.frames.is_empty() {
                        return Err(Error::EmptySnapshot);
                    }
                    payload.insert("stack".into(), snap.describe());
                    invocations = forage(txn, &session, snap, at)?;
                }
                (Some(snap), false) if !snap.frames.is_empty() => {
                    payload.insert("stack".into(), snap.describe());
                }
                _ => {}
            }
            let event = put_event(txn, &session.id, req.kind, at, payload);
            Ok(RecordedEvent { event, invocations })
        })
    }

    /// Records one reported invocation pair. Returns `None` when the pair was
    /// already recorded for the session.
    pub fn record_invocation(&self, session_id: &SessionId, req: &NewInvocation) -> Result<Option<Invocation>> {
        self.transact(|txn| {
            let session = require_open(txn.view(), session_id)?.clone();
            let at = telemetry_time(txn.view(), &session, req.occurred_at)?;
            let caller = resolve_frame_method(txn, &session.product_id, &req.invoking.type_full_name, &req.invoking.method_signature)?;
            let callee = resolve_frame_method(txn, &session.product_id, &req.invoked.type_full_name, &req.invoked.method_signature)?;
            Ok(put_invocation(txn, &session.id, caller, callee, None, at))
        })
    }

    pub fn close_session(
        &self,
        session_id: &SessionId,
        outcome: SessionOutcome,
        at: Option<Timestamp>,
    ) -> Result<Session> {
        if outcome == SessionOutcome::Open {
            return Err(Error::Invalid("a session cannot be closed as open".into()));
        }
        self.transact(|txn| {
            let session = require_session(txn.view(), session_id)?;
            if !session.is_open() {
                return Err(Error::AlreadyClosed(session_id.to_string()));
            }
            let mut session = session.clone();
            let at = telemetry_time(txn.view(), &session, at)?;
            session.finished_at = Some(at);
            session.outcome = outcome;
            txn.put(Record::Session(session.clone()));
            put_event(txn, &session.id, DebugEventKind::SessionEnd, at, BTreeMap::new());
            Ok(session)
        })
    }
}

pub(crate) fn resolve_product<'a>(view: &'a StoreSnapshot, id_or_name: &str) -> Result<&'a Product> {
    view.resolve_product(id_or_name)
        .ok_or_else(|| Error::UnknownProduct(id_or_name.to_owned()))
}

fn require_open<'a>(view: &'a StoreSnapshot, id: &SessionId) -> Result<&'a Session> {
    let session = require_session(view, id)?;
    if !session.is_open() {
        return Err(Error::SessionClosed(id.to_string()));
    }
    Ok(session)
}

/// Client timestamp if given (must not precede the session clock), else the
/// server clock, never earlier than what the session already recorded.
fn telemetry_time(view: &StoreSnapshot, session: &Session, at: Option<Timestamp>) -> Result<Timestamp> {
    let last = view.session_clock(&session.id).unwrap_or(session.started_at);
    match at {
        Some(at) if at < last => Err(Error::OutOfOrderTimestamp { last: last.0, got: at.0 }),
        Some(at) => Ok(at),
        None => Ok(Timestamp::now().max(last)),
    }
}

fn put_product(txn: &mut Txn<'_>, name: &str) -> Result<Product> {
    if name.is_empty() {
        return Err(Error::Invalid("product name is empty".into()));
    }
    let p = Product { id: ProductId::generate(), name: name.to_owned() };
    txn.put(Record::Product(p.clone()));
    Ok(p)
}

fn put_task(txn: &mut Txn<'_>, product: &ProductId, issue_key: &str, title: &str) -> Result<Task> {
    let color = palette_color(txn.view().task_count(product));
    let t = Task {
        id: TaskId::generate(),
        product_id: product.clone(),
        issue_key: issue_key.to_owned(),
        title: title.to_owned(),
        display_color: color.to_owned(),
    };
    t.validate()?;
    txn.put(Record::Task(t.clone()));
    Ok(t)
}

fn put_event(
    txn: &mut Txn<'_>,
    session: &SessionId,
    kind: DebugEventKind,
    at: Timestamp,
    payload: BTreeMap<String, String>,
) -> DebugEvent {
    let e = DebugEvent { id: EventId::generate(), session_id: session.clone(), kind, occurred_at: at, payload };
    txn.put(Record::Event(e.clone()));
    e
}

fn ensure_namespace(txn: &mut Txn<'_>, product: &ProductId, full_name: &str) -> NamespaceId {
    if let Some(n) = txn.view().namespace_named(product, full_name) {
        return n.id.clone();
    }
    let n = Namespace { id: NamespaceId::generate(), product_id: product.clone(), full_name: full_name.to_owned() };
    txn.put(Record::Namespace(n.clone()));
    n.id
}

/// Finds or registers a type. `with_source` marks it as belonging to the
/// project; an existing source-less type is upgraded, never downgraded.
fn ensure_type(txn: &mut Txn<'_>, product: &ProductId, full_name: &str, with_source: bool) -> Result<TypeEntity> {
    if full_name.is_empty() {
        return Err(Error::Invalid("type name is empty".into()));
    }
    if let Some(t) = txn.view().type_named(product, full_name) {
        let mut t = t.clone();
        if with_source && !t.has_source {
            t.has_source = true;
            txn.put(Record::Type(t.clone()));
        }
        return Ok(t);
    }
    let (namespace, simple) = split_type_name(full_name);
    let namespace_id = ensure_namespace(txn, product, namespace);
    let t = TypeEntity {
        id: TypeId::generate(),
        product_id: product.clone(),
        namespace_id,
        simple_name: simple.to_owned(),
        full_name: full_name.to_owned(),
        source_path: default_source_path(full_name),
        has_source: with_source,
    };
    txn.put(Record::Type(t.clone()));
    Ok(t)
}

fn ensure_method(txn: &mut Txn<'_>, type_id: &TypeId, signature: &str) -> MethodEntity {
    if let Some(m) = txn.view().method_by_signature(type_id, signature) {
        return m.clone();
    }
    let m = MethodEntity {
        id: MethodId::generate(),
        type_id: type_id.clone(),
        signature: signature.to_owned(),
        declared_line: None,
    };
    txn.put(Record::Method(m.clone()));
    m
}

fn resolve_frame_method(txn: &mut Txn<'_>, product: &ProductId, type_name: &str, signature: &str) -> Result<MethodId> {
    if signature.is_empty() {
        return Err(Error::Invalid("method signature is empty".into()));
    }
    let ty = ensure_type(txn, product, type_name, false)?;
    Ok(ensure_method(txn, &ty.id, signature).id)
}

fn put_invocation(
    txn: &mut Txn<'_>,
    session: &SessionId,
    caller: MethodId,
    callee: MethodId,
    frame_line: Option<u32>,
    at: Timestamp,
) -> Option<Invocation> {
    let key = (session.clone(), caller.clone(), callee.clone(), frame_line);
    if txn.view().has_invocation_key(&key) {
        return None;
    }
    let row = Invocation {
        id: InvocationId::generate(),
        session_id: session.clone(),
        invoking_method_id: caller,
        invoked_method_id: callee,
        occurred_at: at,
    };
    txn.put(Record::Invocation { row: row.clone(), frame_line });
    Some(row)
}

/// Caller/callee pairs of adjacent frames, keeping only those this session
/// has not yet recorded with the same innermost line.
fn forage(txn: &mut Txn<'_>, session: &Session, snap: &StackSnapshot, at: Timestamp) -> Result<Vec<Invocation>> {
    let top_line = snap.frames[0].line_number;
    let mut out = Vec::new();
    for (caller, callee) in snap.call_pairs() {
        let caller = resolve_frame_method(txn, &session.product_id, &caller.type_full_name, &caller.method_signature)?;
        let callee = resolve_frame_method(txn, &session.product_id, &callee.type_full_name, &callee.method_signature)?;
        out.extend(put_invocation(txn, &session.id, caller, callee, Some(top_line), at));
    }
    Ok(out)
}
