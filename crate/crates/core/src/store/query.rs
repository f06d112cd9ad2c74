use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::StoreSnapshot;
use crate::error::Result;
use crate::model::*;

/// Row filter over the owning session's dimensions plus a time window.
/// Absent or empty dimensions match everything.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryFilter {
    #[serde(default)]
    pub product_id: Option<ProductId>,
    #[serde(default)]
    pub task_ids: BTreeSet<TaskId>,
    #[serde(default)]
    pub developer_ids: BTreeSet<DeveloperId>,
    #[serde(default)]
    pub session_ids: BTreeSet<SessionId>,
    /// Inclusive bounds on the row's own timestamp.
    #[serde(default)]
    pub time_range: Option<(Timestamp, Timestamp)>,
}

impl QueryFilter {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn product(id: ProductId) -> Self {
        QueryFilter { product_id: Some(id), ..Self::default() }
    }

    pub fn with_tasks(mut self, tasks: impl IntoIterator<Item = TaskId>) -> Self {
        self.task_ids.extend(tasks);
        self
    }

    pub fn with_sessions(mut self, sessions: impl IntoIterator<Item = SessionId>) -> Self {
        self.session_ids.extend(sessions);
        self
    }

    pub fn with_developers(mut self, developers: impl IntoIterator<Item = DeveloperId>) -> Self {
        self.developer_ids.extend(developers);
        self
    }

    pub fn matches_session(&self, s: &Session) -> bool {
        self.product_id.as_ref().is_none_or(|p| *p == s.product_id)
            && (self.task_ids.is_empty() || self.task_ids.contains(&s.task_id))
            && (self.developer_ids.is_empty() || self.developer_ids.contains(&s.developer_id))
            && (self.session_ids.is_empty() || self.session_ids.contains(&s.id))
    }

    pub fn matches_time(&self, at: Timestamp) -> bool {
        self.time_range.is_none_or(|(from, to)| at >= from && at <= to)
    }
}

impl StoreSnapshot {
    /// Exact, case-sensitive name lookup.
    pub fn find_developer_by_name(&self, name: &str) -> Vec<Developer> {
        self.developer_named(name).cloned().into_iter().collect()
    }

    pub fn query_sessions(&self, filter: &QueryFilter) -> Vec<Session> {
        let mut out: Vec<Session> = self
            .sessions()
            .filter(|s| filter.matches_session(s))
            .cloned()
            .collect();
        out.sort_by(|a, b| (a.started_at, &a.id).cmp(&(b.started_at, &b.id)));
        out
    }

    fn owner_matches(&self, session: &SessionId, filter: &QueryFilter) -> bool {
        self.session(session).is_some_and(|s| filter.matches_session(s))
    }

    /// Breakpoints whose owning session matches, ordered by (created_at, id).
    pub fn query_breakpoints(&self, filter: &QueryFilter) -> Vec<Breakpoint> {
        let mut out: Vec<Breakpoint> = self
            .breakpoints()
            .filter(|b| filter.matches_time(b.created_at) && self.owner_matches(&b.session_id, filter))
            .cloned()
            .collect();
        out.sort_by(|a, b| (a.created_at, &a.id).cmp(&(b.created_at, &b.id)));
        out
    }

    /// Invocations whose owning session matches, ordered by (occurred_at, id).
    pub fn query_invocations(&self, filter: &QueryFilter) -> Vec<Invocation> {
        let mut out: Vec<Invocation> = self
            .invocations()
            .filter(|i| filter.matches_time(i.occurred_at) && self.owner_matches(&i.session_id, filter))
            .cloned()
            .collect();
        out.sort_by(|a, b| (a.occurred_at, &a.id).cmp(&(b.occurred_at, &b.id)));
        out
    }

    pub fn query_events(&self, filter: &QueryFilter) -> Vec<DebugEvent> {
        let mut out: Vec<DebugEvent> = self
            .events()
            .filter(|e| filter.matches_time(e.occurred_at) && self.owner_matches(&e.session_id, filter))
            .cloned()
            .collect();
        out.sort_by(|a, b| (a.occurred_at, &a.id).cmp(&(b.occurred_at, &b.id)));
        out
    }
}

/// CSV with a header row; columns follow the rows' canonical field order.
pub fn write_csv<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_filter_matches_everything() {
        let s = Session {
            id: "s".into(),
            developer_id: "d".into(),
            task_id: "t".into(),
            product_id: "p".into(),
            started_at: Timestamp(0),
            finished_at: None,
            outcome: SessionOutcome::Open,
            label: String::new(),
        };
        assert!(QueryFilter::all().matches_session(&s));
        assert!(QueryFilter::all().matches_time(Timestamp(i64::MIN)));
        assert!(!QueryFilter::all().with_tasks([TaskId::from("u")]).matches_session(&s));
        assert!(QueryFilter::product("p".into()).with_tasks([TaskId::from("t")]).matches_session(&s));
    }

    #[test]
    fn csv_header_follows_field_order() {
        let bp = Breakpoint {
            id: "b".into(),
            session_id: "s".into(),
            type_id: "t".into(),
            method_id: None,
            line_number: 3,
            kind: BreakpointKind::Line,
            condition: None,
            created_at: Timestamp(7),
        };
        let mut buf = Vec::new();
        write_csv(&[bp], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "id,session_id,type_id,method_id,line_number,kind,condition,created_at"
        );
        assert_eq!(text.lines().nth(1).unwrap(), "b,s,t,,3,line,,7");
    }
}
