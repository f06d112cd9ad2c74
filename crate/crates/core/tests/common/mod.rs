//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use serde_json::Value;
use swarm_debugging::ingestion::*;
use swarm_debugging::model::*;
use swarm_debugging::store::EntityKey;
use swarm_debugging::{Store, StoreSnapshot};

/// Every row in insertion order with server-assigned ids replaced by the
/// ordinal of the row that owns them. Two stores built from the same input
/// are isomorphic iff their canonical forms are equal.
pub fn canonical(snap: &StoreSnapshot) -> Vec<Value> {
    let events: HashMap<&EventId, &DebugEvent> = snap.events().map(|e| (&e.id, e)).collect();
    let rows: Vec<Value> = snap
        .insertion_order()
        .map(|key| {
            let v = match key {
                EntityKey::Developer(id) => serde_json::to_value(snap.developer(id)),
                EntityKey::Product(id) => serde_json::to_value(snap.product(id)),
                EntityKey::Task(id) => serde_json::to_value(snap.task(id)),
                EntityKey::Namespace(id) => serde_json::to_value(snap.namespace(id)),
                EntityKey::Type(id) => serde_json::to_value(snap.type_entity(id)),
                EntityKey::Method(id) => serde_json::to_value(snap.method(id)),
                EntityKey::Session(id) => serde_json::to_value(snap.session(id)),
                EntityKey::Breakpoint(id) => serde_json::to_value(snap.breakpoints().find(|b| b.id == *id)),
                EntityKey::Invocation(id) => serde_json::to_value(snap.invocations().find(|i| i.id == *id)),
                EntityKey::Event(id) => serde_json::to_value(events.get(id)),
            };
            v.unwrap()
        })
        .collect();
    let ordinals: HashMap<String, usize> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| Some((r.get("id")?.as_str()?.to_owned(), i)))
        .collect();
    rows.into_iter().map(|r| relabel(r, &ordinals)).collect()
}

fn relabel(v: Value, ids: &HashMap<String, usize>) -> Value {
    match v {
        Value::String(s) => match ids.get(&s) {
            Some(i) => Value::String(format!("#{i}")),
            None => Value::String(s),
        },
        Value::Array(xs) => Value::Array(xs.into_iter().map(|x| relabel(x, ids)).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, x)| (k, relabel(x, ids))).collect()),
        other => other,
    }
}

pub const TYPES: [&str; 4] = ["a.Alpha", "a.Beta", "b.Gamma", "b.Delta"];
pub const METHODS: [&str; 3] = ["run()", "step(int)", "done()"];

/// Store with one product, the given tasks and every `TYPES` entry declared
/// with source.
pub fn seeded_store(tasks: &[&str]) -> Store {
    let store = Store::in_memory();
    store.create_product("p").unwrap();
    for t in tasks {
        store.create_task("p", t, "").unwrap();
    }
    for ty in TYPES {
        store
            .declare_type(
                "p",
                &TypeDeclaration {
                    full_name: ty.into(),
                    source_path: None,
                    methods: METHODS
                        .iter()
                        .enumerate()
                        .map(|(i, m)| MethodDeclaration { signature: (*m).into(), declared_line: Some(10 * i as u32 + 1) })
                        .collect(),
                },
            )
            .unwrap();
    }
    store
}

pub fn open(store: &Store, developer: &str, task: &str, at: i64) -> Session {
    store
        .open_session(&OpenSession {
            developer: developer.into(),
            product: "p".into(),
            task: task.into(),
            label: String::new(),
            started_at: Some(Timestamp(at)),
        })
        .unwrap()
}

pub fn random_frame(rng: &mut impl Rng) -> StackFrame {
    StackFrame::new(
        TYPES[rng.gen_range(0..TYPES.len())],
        METHODS[rng.gen_range(0..METHODS.len())],
        rng.gen_range(1..40),
    )
}

pub fn random_snapshot(rng: &mut impl Rng, max_depth: usize) -> StackSnapshot {
    let depth = rng.gen_range(1..=max_depth);
    StackSnapshot::new((0..depth).map(|_| random_frame(rng)).collect())
}

pub type Named = ((String, String), (String, String));

/// Invocations the adjacent-frame rule predicts for a snapshot stream: one
/// per distinct (caller, callee, innermost line), caller being the outer frame.
pub fn adjacent_frame_oracle(stream: &[StackSnapshot]) -> BTreeMap<Named, usize> {
    let mut seen = BTreeSet::new();
    for snap in stream {
        let top = snap.frames[0].line_number;
        for i in 0..snap.frames.len().saturating_sub(1) {
            let callee = &snap.frames[i];
            let caller = &snap.frames[i + 1];
            seen.insert((
                (caller.type_full_name.clone(), caller.method_signature.clone()),
                (callee.type_full_name.clone(), callee.method_signature.clone()),
                top,
            ));
        }
    }
    let mut out = BTreeMap::new();
    for (a, b, _) in seen {
        *out.entry((a, b)).or_insert(0) += 1;
    }
    out
}

/// The stored invocations of a session, by method names.
pub fn stored_invocations(snap: &StoreSnapshot, session: &SessionId) -> BTreeMap<Named, usize> {
    let name = |m: &MethodId| {
        let m = snap.method(m).unwrap();
        (snap.type_entity(&m.type_id).unwrap().full_name.clone(), m.signature.clone())
    };
    let mut out = BTreeMap::new();
    for inv in snap.session_invocations(session) {
        *out.entry((name(&inv.invoking_method_id), name(&inv.invoked_method_id))).or_insert(0) += 1;
    }
    out
}

/// Feeds a random step stream into a fresh session; returns the stream.
pub fn drive_stream(store: &Store, session: &SessionId, rng: &mut impl Rng, steps: usize) -> Vec<StackSnapshot> {
    let kinds = [DebugEventKind::StepInto, DebugEventKind::StepOver, DebugEventKind::StepReturn];
    let mut at = store.snapshot().session_clock(session).unwrap().0;
    let mut stream = Vec::new();
    for _ in 0..steps {
        at += rng.gen_range(0..5);
        let snap = random_snapshot(rng, 6);
        store
            .record_step_event(session, kinds[rng.gen_range(0..3)], &snap, Some(Timestamp(at)))
            .unwrap();
        stream.push(snap);
    }
    stream
}

/// Random invocation set spread over sessions of the given tasks. Returns
/// the number of invocation rows stored.
pub fn random_invocations(store: &Store, tasks: &[&str], rng: &mut impl Rng) -> usize {
    let sessions: Vec<Session> = (0..rng.gen_range(1..5))
        .map(|i| open(store, &format!("dev{}", i % 3), tasks[rng.gen_range(0..tasks.len())], 1_000))
        .collect();
    for _ in 0..rng.gen_range(0..40) {
        let s = &sessions[rng.gen_range(0..sessions.len())];
        let pick = |rng: &mut dyn rand::RngCore| MethodRef {
            type_full_name: TYPES[rng.gen_range(0..TYPES.len())].into(),
            method_signature: METHODS[rng.gen_range(0..METHODS.len())].into(),
        };
        let req = NewInvocation { invoking: pick(rng), invoked: pick(rng), occurred_at: Some(Timestamp(2_000)) };
        store.record_invocation(&s.id, &req).unwrap();
    }
    for s in &sessions {
        let steps = rng.gen_range(0..5);
        drive_stream(store, &s.id, rng, steps);
    }
    store.snapshot().invocations().count()
}
