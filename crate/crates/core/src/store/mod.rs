//! Embedded persistence.
//!
//! All rows live in persistent ordered maps, so a [`StoreSnapshot`] is an
//! O(1) clone that never observes later writes. Writes go through a single
//! writer ([`Store::transact`]): a transaction mutates a private copy, the
//! resulting records are appended to the on-disk log, and only then is the new
//! state published to readers.

mod file;
mod query;

use std::path::Path;

use imbl::{OrdMap, OrdSet, Vector};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};

pub use query::{write_csv, QueryFilter};

use crate::error::{Error, Result};
use crate::model::*;
use file::LogFile;

/// One persisted row. Rows with an existing id replace the previous version.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "entity", rename_all = "snake_case")]
pub(crate) enum Record {
    Developer(Developer),
    Product(Product),
    Task(Task),
    Namespace(Namespace),
    Type(TypeEntity),
    Method(MethodEntity),
    Session(Session),
    Breakpoint(Breakpoint),
    Invocation {
        row: Invocation,
        /// Innermost frame line of the snapshot the pair came from.
        frame_line: Option<u32>,
    },
    Event(DebugEvent),
}

/// Insertion-order handle of any stored row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKey {
    Developer(DeveloperId),
    Product(ProductId),
    Task(TaskId),
    Namespace(NamespaceId),
    Type(TypeId),
    Method(MethodId),
    Session(SessionId),
    Breakpoint(BreakpointId),
    Invocation(InvocationId),
    Event(EventId),
}

/// De-duplication key for foraged invocations.
pub(crate) type InvocationKey = (SessionId, MethodId, MethodId, Option<u32>);

/// Frozen point-in-time view of every entity.
#[derive(Clone, Debug, Default)]
pub struct StoreSnapshot {
    developers: OrdMap<DeveloperId, Developer>,
    products: OrdMap<ProductId, Product>,
    tasks: OrdMap<TaskId, Task>,
    namespaces: OrdMap<NamespaceId, Namespace>,
    types: OrdMap<TypeId, TypeEntity>,
    methods: OrdMap<MethodId, MethodEntity>,
    sessions: OrdMap<SessionId, Session>,
    breakpoints: OrdMap<BreakpointId, Breakpoint>,
    invocations: OrdMap<InvocationId, Invocation>,
    events: OrdMap<EventId, DebugEvent>,

    developer_by_name: OrdMap<String, DeveloperId>,
    product_by_name: OrdMap<String, ProductId>,
    task_by_key: OrdMap<(ProductId, String), TaskId>,
    tasks_per_product: OrdMap<ProductId, usize>,
    namespace_by_name: OrdMap<(ProductId, String), NamespaceId>,
    type_by_name: OrdMap<(ProductId, String), TypeId>,
    method_by_signature: OrdMap<(TypeId, String), MethodId>,
    methods_of_type: OrdMap<TypeId, Vector<MethodId>>,
    session_clock: OrdMap<SessionId, Timestamp>,
    breakpoints_of_session: OrdMap<SessionId, Vector<BreakpointId>>,
    invocations_of_session: OrdMap<SessionId, Vector<InvocationId>>,
    events_of_session: OrdMap<SessionId, Vector<EventId>>,
    invocation_keys: OrdSet<InvocationKey>,
    invocation_frame_line: OrdMap<InvocationId, Option<u32>>,
    order: Vector<EntityKey>,
}

fn push_index<K: Ord + Clone, V: Clone>(map: &mut OrdMap<K, Vector<V>>, key: K, value: V) {
    map.entry(key).or_default().push_back(value);
}

impl StoreSnapshot {
    pub(crate) fn apply(&mut self, record: Record) {
        match record {
            Record::Developer(d) => {
                if !self.developers.contains_key(&d.id) {
                    self.order.push_back(EntityKey::Developer(d.id.clone()));
                }
                self.developer_by_name.insert(d.name.clone(), d.id.clone());
                self.developers.insert(d.id.clone(), d);
            }
            Record::Product(p) => {
                if !self.products.contains_key(&p.id) {
                    self.order.push_back(EntityKey::Product(p.id.clone()));
                }
                self.product_by_name.insert(p.name.clone(), p.id.clone());
                self.products.insert(p.id.clone(), p);
            }
            Record::Task(t) => {
                if !self.tasks.contains_key(&t.id) {
                    self.order.push_back(EntityKey::Task(t.id.clone()));
                    *self.tasks_per_product.entry(t.product_id.clone()).or_insert(0) += 1;
                }
                self.task_by_key
                    .insert((t.product_id.clone(), t.issue_key.clone()), t.id.clone());
                self.tasks.insert(t.id.clone(), t);
            }
            Record::Namespace(n) => {
                if !self.namespaces.contains_key(&n.id) {
                    self.order.push_back(EntityKey::Namespace(n.id.clone()));
                }
                self.namespace_by_name
                    .insert((n.product_id.clone(), n.full_name.clone()), n.id.clone());
                self.namespaces.insert(n.id.clone(), n);
            }
            Record::Type(t) => {
                if !self.types.contains_key(&t.id) {
                    self.order.push_back(EntityKey::Type(t.id.clone()));
                }
                self.type_by_name
                    .insert((t.product_id.clone(), t.full_name.clone()), t.id.clone());
                self.types.insert(t.id.clone(), t);
            }
            Record::Method(m) => {
                if !self.methods.contains_key(&m.id) {
                    self.order.push_back(EntityKey::Method(m.id.clone()));
                    push_index(&mut self.methods_of_type, m.type_id.clone(), m.id.clone());
                }
                self.method_by_signature
                    .insert((m.type_id.clone(), m.signature.clone()), m.id.clone());
                self.methods.insert(m.id.clone(), m);
            }
            Record::Session(s) => {
                if !self.sessions.contains_key(&s.id) {
                    self.order.push_back(EntityKey::Session(s.id.clone()));
                }
                self.bump_clock(&s.id, s.finished_at.unwrap_or(s.started_at));
                self.sessions.insert(s.id.clone(), s);
            }
            Record::Breakpoint(b) => {
                if !self.breakpoints.contains_key(&b.id) {
                    self.order.push_back(EntityKey::Breakpoint(b.id.clone()));
                    push_index(&mut self.breakpoints_of_session, b.session_id.clone(), b.id.clone());
                }
                self.bump_clock(&b.session_id, b.created_at);
                self.breakpoints.insert(b.id.clone(), b);
            }
            Record::Invocation { row, frame_line } => {
                if !self.invocations.contains_key(&row.id) {
                    self.order.push_back(EntityKey::Invocation(row.id.clone()));
                    push_index(&mut self.invocations_of_session, row.session_id.clone(), row.id.clone());
                }
                self.invocation_keys.insert((
                    row.session_id.clone(),
                    row.invoking_method_id.clone(),
                    row.invoked_method_id.clone(),
                    frame_line,
                ));
                self.invocation_frame_line.insert(row.id.clone(), frame_line);
                self.bump_clock(&row.session_id, row.occurred_at);
                self.invocations.insert(row.id.clone(), row);
            }
            Record::Event(e) => {
                if !self.events.contains_key(&e.id) {
                    self.order.push_back(EntityKey::Event(e.id.clone()));
                    push_index(&mut self.events_of_session, e.session_id.clone(), e.id.clone());
                }
                self.bump_clock(&e.session_id, e.occurred_at);
                self.events.insert(e.id.clone(), e);
            }
        }
    }

    fn bump_clock(&mut self, session: &SessionId, at: Timestamp) {
        let entry = self.session_clock.entry(session.clone()).or_insert(at);
        if at > *entry {
            *entry = at;
        }
    }

    /// Current version of a row, as a record, for compaction.
    pub(crate) fn record_for(&self, key: &EntityKey) -> Option<Record> {
        Some(match key {
            EntityKey::Developer(id) => Record::Developer(self.developers.get(id)?.clone()),
            EntityKey::Product(id) => Record::Product(self.products.get(id)?.clone()),
            EntityKey::Task(id) => Record::Task(self.tasks.get(id)?.clone()),
            EntityKey::Namespace(id) => Record::Namespace(self.namespaces.get(id)?.clone()),
            EntityKey::Type(id) => Record::Type(self.types.get(id)?.clone()),
            EntityKey::Method(id) => Record::Method(self.methods.get(id)?.clone()),
            EntityKey::Session(id) => Record::Session(self.sessions.get(id)?.clone()),
            EntityKey::Breakpoint(id) => Record::Breakpoint(self.breakpoints.get(id)?.clone()),
            EntityKey::Invocation(id) => Record::Invocation {
                row: self.invocations.get(id)?.clone(),
                frame_line: self.invocation_frame_line.get(id).copied().flatten(),
            },
            EntityKey::Event(id) => Record::Event(self.events.get(id)?.clone()),
        })
    }

    // ---- point lookups

    pub fn developer(&self, id: &DeveloperId) -> Option<&Developer> {
        self.developers.get(id)
    }

    pub fn developer_named(&self, name: &str) -> Option<&Developer> {
        self.developer_by_name.get(name).and_then(|id| self.developers.get(id))
    }

    pub fn product(&self, id: &ProductId) -> Option<&Product> {
        self.products.get(id)
    }

    pub fn product_named(&self, name: &str) -> Option<&Product> {
        self.product_by_name.get(name).and_then(|id| self.products.get(id))
    }

    /// Looks a product up by id first, then by name.
    pub fn resolve_product(&self, id_or_name: &str) -> Option<&Product> {
        self.products
            .get(&ProductId::from(id_or_name))
            .or_else(|| self.product_named(id_or_name))
    }

    pub fn task(&self, id: &TaskId) -> Option<&Task> {
        self.tasks.get(id)
    }

    pub fn task_by_key(&self, product: &ProductId, issue_key: &str) -> Option<&Task> {
        self.task_by_key
            .get(&(product.clone(), issue_key.to_owned()))
            .and_then(|id| self.tasks.get(id))
    }

    pub(crate) fn task_count(&self, product: &ProductId) -> usize {
        self.tasks_per_product.get(product).copied().unwrap_or(0)
    }

    pub fn session(&self, id: &SessionId) -> Option<&Session> {
        self.sessions.get(id)
    }

    /// Latest timestamp recorded against a session.
    pub fn session_clock(&self, id: &SessionId) -> Option<Timestamp> {
        self.session_clock.get(id).copied()
    }

    pub fn namespace(&self, id: &NamespaceId) -> Option<&Namespace> {
        self.namespaces.get(id)
    }

    pub fn namespace_named(&self, product: &ProductId, full_name: &str) -> Option<&Namespace> {
        self.namespace_by_name
            .get(&(product.clone(), full_name.to_owned()))
            .and_then(|id| self.namespaces.get(id))
    }

    pub fn type_entity(&self, id: &TypeId) -> Option<&TypeEntity> {
        self.types.get(id)
    }

    pub fn type_named(&self, product: &ProductId, full_name: &str) -> Option<&TypeEntity> {
        self.type_by_name
            .get(&(product.clone(), full_name.to_owned()))
            .and_then(|id| self.types.get(id))
    }

    pub fn method(&self, id: &MethodId) -> Option<&MethodEntity> {
        self.methods.get(id)
    }

    pub fn method_by_signature(&self, type_id: &TypeId, signature: &str) -> Option<&MethodEntity> {
        self.method_by_signature
            .get(&(type_id.clone(), signature.to_owned()))
            .and_then(|id| self.methods.get(id))
    }

    pub fn methods_of_type(&self, type_id: &TypeId) -> impl Iterator<Item = &MethodEntity> {
        self.methods_of_type
            .get(type_id)
            .into_iter()
            .flat_map(|ids| ids.iter())
            .filter_map(|id| self.methods.get(id))
    }

    /// The method whose declaration is the closest one at or above `line`.
    pub fn method_enclosing(&self, type_id: &TypeId, line: u32) -> Option<&MethodEntity> {
        self.methods_of_type(type_id)
            .filter(|m| m.declared_line.is_some_and(|d| d <= line))
            .max_by_key(|m| (m.declared_line, std::cmp::Reverse(m.id.clone())))
    }

    pub(crate) fn has_invocation_key(&self, key: &InvocationKey) -> bool {
        self.invocation_keys.contains(key)
    }

    // ---- scans

    pub fn developers(&self) -> impl Iterator<Item = &Developer> {
        self.developers.values()
    }

    pub fn products(&self) -> impl Iterator<Item = &Product> {
        self.products.values()
    }

    pub fn tasks(&self) -> impl Iterator<Item = &Task> {
        self.tasks.values()
    }

    pub fn sessions(&self) -> impl Iterator<Item = &Session> {
        self.sessions.values()
    }

    pub fn namespaces(&self) -> impl Iterator<Item = &Namespace> {
        self.namespaces.values()
    }

    pub fn types(&self) -> impl Iterator<Item = &TypeEntity> {
        self.types.values()
    }

    pub fn methods(&self) -> impl Iterator<Item = &MethodEntity> {
        self.methods.values()
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &Breakpoint> {
        self.breakpoints.values()
    }

    pub fn invocations(&self) -> impl Iterator<Item = &Invocation> {
        self.invocations.values()
    }

    pub fn events(&self) -> impl Iterator<Item = &DebugEvent> {
        self.events.values()
    }

    /// A session's breakpoints in recording order.
    pub fn session_breakpoints(&self, id: &SessionId) -> Vec<&Breakpoint> {
        self.collect_indexed(&self.breakpoints_of_session, id, &self.breakpoints)
    }

    /// A session's invocations in recording order.
    pub fn session_invocations(&self, id: &SessionId) -> Vec<&Invocation> {
        self.collect_indexed(&self.invocations_of_session, id, &self.invocations)
    }

    /// A session's debug events in recording order.
    pub fn session_events(&self, id: &SessionId) -> Vec<&DebugEvent> {
        self.collect_indexed(&self.events_of_session, id, &self.events)
    }

    fn collect_indexed<'a, K: Ord + Clone, V>(
        &'a self,
        index: &'a OrdMap<SessionId, Vector<K>>,
        session: &SessionId,
        rows: &'a OrdMap<K, V>,
    ) -> Vec<&'a V> {
        index
            .get(session)
            .map(|ids| ids.iter().filter_map(|id| rows.get(id)).collect())
            .unwrap_or_default()
    }

    /// Every row in insertion order.
    pub fn insertion_order(&self) -> impl Iterator<Item = &EntityKey> {
        self.order.iter()
    }

    pub fn row_count(&self) -> usize {
        self.order.len()
    }

    /// Full-store referential audit. Returns one message per dangling
    /// reference or violated row invariant; empty means the store is closed.
    pub fn audit(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let mut check = |ok: bool, what: String| {
            if !ok {
                problems.push(what);
            }
        };
        for t in self.tasks.values() {
            check(self.products.contains_key(&t.product_id), format!("task {} product", t.id));
            check(t.validate().is_ok(), format!("task {} colour", t.id));
        }
        for n in self.namespaces.values() {
            check(self.products.contains_key(&n.product_id), format!("namespace {} product", n.id));
        }
        for t in self.types.values() {
            check(self.products.contains_key(&t.product_id), format!("type {} product", t.id));
            check(self.namespaces.contains_key(&t.namespace_id), format!("type {} namespace", t.id));
        }
        for m in self.methods.values() {
            check(self.types.contains_key(&m.type_id), format!("method {} type", m.id));
        }
        for s in self.sessions.values() {
            check(self.developers.contains_key(&s.developer_id), format!("session {} developer", s.id));
            check(self.tasks.contains_key(&s.task_id), format!("session {} task", s.id));
            check(self.products.contains_key(&s.product_id), format!("session {} product", s.id));
            check(s.validate().is_ok(), format!("session {} lifecycle", s.id));
        }
        for b in self.breakpoints.values() {
            check(self.sessions.contains_key(&b.session_id), format!("breakpoint {} session", b.id));
            let ty = self.types.get(&b.type_id);
            check(ty.is_some(), format!("breakpoint {} type", b.id));
            check(ty.is_none_or(|t| t.has_source), format!("breakpoint {} type without source", b.id));
            if let Some(m) = &b.method_id {
                check(self.methods.contains_key(m), format!("breakpoint {} method", b.id));
            }
            check(b.validate().is_ok(), format!("breakpoint {} fields", b.id));
        }
        for i in self.invocations.values() {
            check(self.sessions.contains_key(&i.session_id), format!("invocation {} session", i.id));
            check(self.methods.contains_key(&i.invoking_method_id), format!("invocation {} invoking", i.id));
            check(self.methods.contains_key(&i.invoked_method_id), format!("invocation {} invoked", i.id));
        }
        for e in self.events.values() {
            check(self.sessions.contains_key(&e.session_id), format!("event {} session", e.id));
        }
        problems
    }
}

/// Mutable view handed to a [`Store::transact`] closure.
pub struct Txn<'a> {
    data: &'a mut StoreSnapshot,
    records: Vec<Record>,
}

impl Txn<'_> {
    /// State including this transaction's own writes.
    pub fn view(&self) -> &StoreSnapshot {
        self.data
    }

    pub(crate) fn put(&mut self, record: Record) {
        self.data.apply(record.clone());
        self.records.push(record);
    }
}

struct Writer {
    data: StoreSnapshot,
    file: Option<LogFile>,
}

/// Thread-safe store handle. Writes are serialized; reads work on snapshots.
pub struct Store {
    writer: Mutex<Writer>,
    published: RwLock<StoreSnapshot>,
}

impl Store {
    pub fn in_memory() -> Self {
        Self::from_parts(StoreSnapshot::default(), None)
    }

    /// Opens (or creates) the store kept in `dir`, replaying its log.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let (file, records) = LogFile::open(dir.as_ref())?;
        let mut data = StoreSnapshot::default();
        for record in records {
            data.apply(record);
        }
        let mut file = file;
        if file.should_compact(data.row_count()) {
            file.compact(&data)?;
        }
        Ok(Self::from_parts(data, Some(file)))
    }

    fn from_parts(data: StoreSnapshot, file: Option<LogFile>) -> Self {
        Store {
            published: RwLock::new(data.clone()),
            writer: Mutex::new(Writer { data, file }),
        }
    }

    pub fn snapshot(&self) -> StoreSnapshot {
        self.published.read().clone()
    }

    /// Runs `f` atomically: either every write it made becomes durable and
    /// visible, or none does.
    pub fn transact<T>(&self, f: impl FnOnce(&mut Txn<'_>) -> Result<T>) -> Result<T> {
        let mut writer = self.writer.lock();
        let mut work = writer.data.clone();
        let mut txn = Txn { data: &mut work, records: Vec::new() };
        let out = f(&mut txn)?;
        let records = txn.records;
        if records.is_empty() {
            return Ok(out);
        }
        if let Some(file) = writer.file.as_mut() {
            file.append(&records)?;
            if file.should_compact(work.row_count()) {
                file.compact(&work)?;
            }
        }
        writer.data = work.clone();
        *self.published.write() = work;
        Ok(out)
    }

    /// Rewrites the on-disk log to hold exactly one record per live row.
    pub fn compact(&self) -> Result<()> {
        let mut writer = self.writer.lock();
        let Writer { data, file } = &mut *writer;
        match file {
            Some(file) => file.compact(data),
            None => Ok(()),
        }
    }
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Store").field("rows", &self.snapshot().row_count()).finish()
    }
}

pub(crate) fn require_session<'a>(view: &'a StoreSnapshot, id: &SessionId) -> Result<&'a Session> {
    view.session(id).ok_or_else(|| Error::UnknownSession(id.to_string()))
}
