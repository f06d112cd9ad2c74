//! JSON-lines session logs: one `{"kind": ..., "body": {...}}` object per line.
//!
//! Sessions inside a log are referred to by a `session_ref` alias chosen by the
//! producer; the importer maps each alias to the id it assigns on open.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::*;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductBody {
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskBody {
    pub product: String,
    pub issue_key: String,
    #[serde(default)]
    pub title: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeBody {
    pub product: String,
    pub full_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_path: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub methods: Vec<MethodDeclaration>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionOpenBody {
    pub session_ref: String,
    pub developer: String,
    pub product: String,
    pub task: String,
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub started_at: Option<Timestamp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakpointBody {
    pub session_ref: String,
    pub type_full_name: String,
    pub line_number: i64,
    #[serde(default = "super::default_kind")]
    pub kind: BreakpointKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_at: Option<Timestamp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventBody {
    pub session_ref: String,
    pub kind: DebugEventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occurred_at: Option<Timestamp>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub payload: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<StackSnapshot>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvocationBody {
    pub session_ref: String,
    pub invoking: MethodRef,
    pub invoked: MethodRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occurred_at: Option<Timestamp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionCloseBody {
    pub session_ref: String,
    pub outcome: SessionOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finished_at: Option<Timestamp>,
}

/// One line of a session log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "body", rename_all = "snake_case", deny_unknown_fields)]
pub enum SessionLogRecord {
    Product(ProductBody),
    Task(TaskBody),
    Type(TypeBody),
    SessionOpen(SessionOpenBody),
    Breakpoint(BreakpointBody),
    Event(EventBody),
    Invocation(InvocationBody),
    SessionClose(SessionCloseBody),
}

impl SessionLogRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("log records always serialize")
    }
}

/// Counts of what an import persisted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub sessions_opened: usize,
    pub breakpoints: usize,
    pub events: usize,
    /// Invocation rows persisted, whether foraged from snapshots or reported.
    pub invocations: usize,
    pub rejected: usize,
    /// Error code of the first rejected record.
    pub first_error: Option<String>,
    /// 1-based line of the first rejected record.
    pub first_error_line: Option<usize>,
    /// Non-blank lines read.
    pub records: usize,
}

impl IngestSummary {
    fn reject(&mut self, line: usize, err: &Error) {
        self.rejected += 1;
        if self.first_error.is_none() {
            self.first_error = Some(err.code().to_owned());
            self.first_error_line = Some(line);
        }
    }
}

/// Writes records as a session log.
pub fn write_session_log<'a>(records: impl IntoIterator<Item = &'a SessionLogRecord>, mut out: impl Write) -> Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_line())?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Default)]
struct Importer {
    refs: HashMap<String, SessionId>,
    summary: IngestSummary,
}

impl Importer {
    fn session(&self, alias: &str) -> Result<SessionId> {
        self.refs
            .get(alias)
            .cloned()
            .ok_or_else(|| Error::UnknownSession(alias.to_owned()))
    }

    fn apply(&mut self, store: &Store, record: &SessionLogRecord) -> Result<()> {
        match record {
            SessionLogRecord::Product(b) => {
                store.ensure_product(&b.name)?;
            }
            SessionLogRecord::Task(b) => {
                store.ensure_task(&b.product, &b.issue_key, &b.title)?;
            }
            SessionLogRecord::Type(b) => {
                let decl = TypeDeclaration { full_name: b.full_name.clone(), source_path: b.source_path.clone(), methods: b.methods.clone() };
                store.declare_type(&b.product, &decl)?;
            }
            SessionLogRecord::SessionOpen(b) => {
                if self.refs.contains_key(&b.session_ref) {
                    return Err(Error::Duplicate(format!("session_ref {}", b.session_ref)));
                }
                let req = OpenSession {
                    developer: b.developer.clone(),
                    product: b.product.clone(),
                    task: b.task.clone(),
                    label: b.label.clone(),
                    started_at: b.started_at,
                };
                let s = store.open_session(&req)?;
                self.refs.insert(b.session_ref.clone(), s.id);
                self.summary.sessions_opened += 1;
            }
            SessionLogRecord::Breakpoint(b) => {
                let id = self.session(&b.session_ref)?;
                let req = NewBreakpoint {
                    type_full_name: b.type_full_name.clone(),
                    line_number: b.line_number,
                    kind: b.kind,
                    condition: b.condition.clone(),
                    created_at: b.created_at,
                };
                store.record_breakpoint(&id, &req)?;
                self.summary.breakpoints += 1;
            }
            SessionLogRecord::Event(b) => {
                let id = self.session(&b.session_ref)?;
                let req = NewEvent { kind: b.kind, occurred_at: b.occurred_at, payload: b.payload.clone(), snapshot: b.snapshot.clone() };
                let rec = store.record_event(&id, &req)?;
                self.summary.events += 1;
                self.summary.invocations += rec.invocations.len();
            }
            SessionLogRecord::Invocation(b) => {
                let id = self.session(&b.session_ref)?;
                let req = NewInvocation { invoking: b.invoking.clone(), invoked: b.invoked.clone(), occurred_at: b.occurred_at };
                if store.record_invocation(&id, &req)?.is_some() {
                    self.summary.invocations += 1;
                }
            }
            SessionLogRecord::SessionClose(b) => {
                let id = self.session(&b.session_ref)?;
                store.close_session(&id, b.outcome, b.finished_at)?;
            }
        }
        Ok(())
    }
}

fn parse_line(line: &str) -> Result<SessionLogRecord> {
    serde_json::from_str(line).map_err(|e| Error::Invalid(format!("malformed record: {e}")))
}

impl Store {
    /// Imports a session log. Records that fail are counted and skipped; only
    /// a failure to read the stream itself aborts the import.
    pub fn import_session_log(&self, reader: impl BufRead) -> Result<IngestSummary> {
        let mut imp = Importer::default();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::UnreadableStream(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            imp.summary.records += 1;
            if let Err(e) = parse_line(&line).and_then(|r| imp.apply(self, &r)) {
                imp.summary.reject(i + 1, &e);
            }
        }
        Ok(imp.summary)
    }

    pub fn import_session_log_file(&self, path: impl AsRef<Path>) -> Result<IngestSummary> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::UnreadableStream(format!("{}: {e}", path.display())))?;
        self.import_session_log(BufReader::new(file))
    }

    /// Imports already-parsed records.
    pub fn import_records<'a>(&self, records: impl IntoIterator<Item = &'a SessionLogRecord>) -> IngestSummary {
        let mut imp = Importer::default();
        for (i, r) in records.into_iter().enumerate() {
            imp.summary.records += 1;
            if let Err(e) = imp.apply(self, r) {
                imp.summary.reject(i + 1, &e);
            }
        }
        imp.summary
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALOG: &str = r#"{"kind":"product","body":{"name":"shapes"}}
{"kind":"task","body":{"product":"shapes","issue_key":"7","title":"wrong area"}}
"#;

    const FIVE: &str = r#"{"kind":"session_open","body":{"session_ref":"s1","developer":"ana","product":"shapes","task":"7","started_at":100}}
{"kind":"breakpoint","body":{"session_ref":"s1","type_full_name":"shapes.Circle","line_number":12,"created_at":110}}
{"kind":"event","body":{"session_ref":"s1","kind":"step_into","occurred_at":120,"snapshot":{"frames":[{"type_full_name":"shapes.Circle","method_signature":"area()","line_number":12},{"type_full_name":"shapes.Main","method_signature":"main(String[])","line_number":4}]}}}
{"kind":"event","body":{"session_ref":"s1","kind":"resume","occurred_at":130}}
{"kind":"session_close","body":{"session_ref":"s1","outcome":"fault_found","finished_at":140}}
"#;

    #[test]
    fn five_record_log() {
        let store = Store::in_memory();
        store.import_session_log(CATALOG.as_bytes()).unwrap();
        let sum = store.import_session_log(FIVE.as_bytes()).unwrap();
        assert_eq!(
            (sum.sessions_opened, sum.breakpoints, sum.events, sum.invocations, sum.rejected),
            (1, 1, 2, 1, 0)
        );
        let snap = store.snapshot();
        let s = snap.sessions().next().unwrap();
        assert_eq!(s.outcome, SessionOutcome::FaultFound);
        assert_eq!(s.finished_at, Some(Timestamp(140)));
    }

    #[test]
    fn bad_records_are_counted_not_fatal() {
        let store = Store::in_memory();
        store.import_session_log(CATALOG.as_bytes()).unwrap();
        let text = format!(
            "{FIVE}{}\n{}\n{}\n",
            r#"{"kind":"breakpoint","body":{"session_ref":"s1","type_full_name":"shapes.Circle","line_number":13}}"#,
            r#"{"kind":"teleport","body":{}}"#,
            "not json"
        );
        let sum = store.import_session_log(text.as_bytes()).unwrap();
        assert_eq!(sum.rejected, 3);
        assert_eq!(sum.first_error.as_deref(), Some("SessionClosed"));
        assert_eq!(sum.first_error_line, Some(6));
        assert_eq!(sum.records, 8);
    }

    #[test]
    fn unknown_alias_rejected() {
        let store = Store::in_memory();
        let line = r#"{"kind":"event","body":{"session_ref":"zz","kind":"resume"}}"#;
        let sum = store.import_session_log(line.as_bytes()).unwrap();
        assert_eq!(sum.first_error.as_deref(), Some("UnknownSession"));
    }

    #[test]
    fn records_round_trip() {
        let recs: Vec<SessionLogRecord> = FIVE.lines().map(|l| parse_line(l).unwrap()).collect();
        let mut buf = Vec::new();
        write_session_log(&recs, &mut buf).unwrap();
        let again: Vec<SessionLogRecord> = String::from_utf8(buf).unwrap().lines().map(|l| parse_line(l).unwrap()).collect();
        assert_eq!(recs, again);
    }

    #[test]
    fn unreadable_stream_aborts() {
        struct Broken;
        impl std::io::Read for Broken {
            fn read(&mut self, _: &mut [u8]) -> std::io::Result<usize> {
                Err(std::io::Error::other("gone"))
            }
        }
        let store = Store::in_memory();
        let err = store.import_session_log(BufReader::new(Broken)).unwrap_err();
        assert_eq!(err.code(), "UnreadableStream");
    }
}
