//! Reproducible study-shaped corpora: session logs plus matching Java source
//! trees, generated from compact embedded tables.
//!
//! | name | contents |
//! |---|---|
//! | `study1` | 35 sessions, 5 tasks, 207 breakpoints with stepping |
//! | `study2` | 10 sessions, 2 tasks, 100 breakpoints |
//! | `table10` | control and experiment groups on two tasks |
//! | `across_tasks` | 20 breakpoints shared across developers and tasks |
//! | `two_task_gv` | two tasks with stepping, for call-graph views |

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::ingestion::*;
use crate::metrics::{MapSourceResolver, StatementClass};
use crate::model::*;
use crate::store::Store;

pub const LOG_FILE: &str = "session_log.jsonl";
pub const SOURCE_DIR: &str = "src";

const STUDY1_BREAKPOINTS: &str = include_str!("data/study1_breakpoints.tsv");
const STUDY1_SESSIONS: &str = include_str!("data/study1_sessions.tsv");
const STUDY1_TYPES: &str = include_str!("data/study1_types.tsv");
const STUDY2_BREAKPOINTS: &str = include_str!("data/study2_breakpoints.tsv");
const STUDY2_SESSIONS: &str = include_str!("data/study2_sessions.tsv");
const STUDY2_TYPES: &str = include_str!("data/study2_types.tsv");

/// 2017-01-02 00:00 UTC.
const BASE_MS: i64 = 1_483_315_200_000;
const DAY_MS: i64 = 86_400_000;

pub const STUDY1_PRODUCT: &str = "jabref";
pub const STUDY2_PRODUCT: &str = "study2";
pub const TABLE10_PRODUCT: &str = "jabref-eval";
pub const ACROSS_PRODUCT: &str = "jabref-across";
pub const GV_PRODUCT: &str = "jabref-gv";

/// One generated corpus.
#[derive(Clone, Debug)]
pub struct FixtureSet {
    pub name: &'static str,
    pub product: &'static str,
    pub records: Vec<SessionLogRecord>,
    /// Source files keyed by path relative to the source root.
    pub files: BTreeMap<String, String>,
}

impl FixtureSet {
    /// Session log text, one record per line.
    pub fn log_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out
    }

    /// Fresh in-memory store holding the corpus.
    pub fn load(&self) -> Result<Store> {
        let store = Store::in_memory();
        store.import_session_log(self.log_text().as_bytes())?;
        Ok(store)
    }

    /// Source lines of the corpus keyed by type full name.
    pub fn source_resolver(&self) -> MapSourceResolver {
        let mut r = MapSourceResolver::default();
        for rec in &self.records {
            if let SessionLogRecord::Type(t) = rec {
                let path = t.source_path.clone().unwrap_or_else(|| default_source_path(&t.full_name));
                if let Some(text) = self.files.get(&path) {
                    for (i, line) in text.lines().enumerate() {
                        r.insert(&t.full_name, i as u32 + 1, line);
                    }
                }
            }
        }
        r
    }

    /// Writes `<dir>/<name>/session_log.jsonl` and the source tree under
    /// `<dir>/<name>/src`. Returns the log path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let root = dir.join(self.name);
        fs::create_dir_all(&root)?;
        let log = root.join(LOG_FILE);
        fs::write(&log, self.log_text())?;
        for (path, text) in &self.files {
            let p = root.join(SOURCE_DIR).join(path);
            if let Some(parent) = p.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, text)?;
        }
        Ok(log)
    }
}

pub fn all() -> Vec<FixtureSet> {
    vec![study1(), study2(), table10(), across_tasks(), two_task_gv()]
}

pub fn by_name(name: &str) -> Option<FixtureSet> {
    all().into_iter().find(|f| f.name == name)
}

/// Writes every corpus below `dir`, returning the log paths.
pub fn write_all(dir: &Path) -> Result<Vec<PathBuf>> {
    all().iter().map(|f| f.write(dir)).collect()
}

#[derive(Default)]
struct TypeSource {
    methods: Vec<(String, u32)>,
    statements: BTreeMap<u32, String>,
}

/// Accumulates catalog and session records plus the source they point at.
struct Builder {
    product: &'static str,
    tasks: Vec<String>,
    types: BTreeMap<String, TypeSource>,
    sessions: Vec<SessionLogRecord>,
}

impl Builder {
    fn new(product: &'static str) -> Self {
        Builder { product, tasks: Vec::new(), types: BTreeMap::new(), sessions: Vec::new() }
    }

    fn task(&mut self, key: &str) {
        if !self.tasks.iter().any(|t| t == key) {
            self.tasks.push(key.to_owned());
        }
    }

    fn method(&mut self, full_name: &str, signature: &str, line: u32) {
        let ty = self.types.entry(full_name.to_owned()).or_default();
        if !ty.methods.iter().any(|(s, _)| s == signature) {
            ty.methods.push((signature.to_owned(), line));
            ty.methods.sort_by_key(|m| m.1);
        }
    }

    fn statement(&mut self, full_name: &str, line: u32, class: StatementClass) {
        let text = statement_text(full_name, line, class);
        self.types.entry(full_name.to_owned()).or_default().statements.insert(line, text);
    }

    /// Signature of the method enclosing `line`.
    fn enclosing(&self, full_name: &str, line: u32) -> String {
        self.types
            .get(full_name)
            .and_then(|t| t.methods.iter().rev().find(|m| m.1 <= line))
            .map_or_else(|| "<clinit>()".to_owned(), |m| m.0.clone())
    }

    fn open(&mut self, sref: &str, developer: &str, task: &str, label: &str, at: i64) {
        self.sessions.push(SessionLogRecord::SessionOpen(SessionOpenBody {
            session_ref: sref.into(),
            developer: developer.into(),
            product: self.product.into(),
            task: task.into(),
            label: label.into(),
            started_at: Some(Timestamp(at)),
        }));
    }

    fn breakpoint(&mut self, sref: &str, full_name: &str, line: u32, at: i64) {
        self.sessions.push(SessionLogRecord::Breakpoint(BreakpointBody {
            session_ref: sref.into(),
            type_full_name: full_name.into(),
            line_number: line as i64,
            kind: BreakpointKind::Line,
            condition: None,
            created_at: Some(Timestamp(at)),
        }));
    }

    fn event(&mut self, sref: &str, kind: DebugEventKind, snapshot: Option<StackSnapshot>, at: i64) {
        self.sessions.push(SessionLogRecord::Event(EventBody {
            session_ref: sref.into(),
            kind,
            occurred_at: Some(Timestamp(at)),
            payload: BTreeMap::new(),
            snapshot,
        }));
    }

    fn close(&mut self, sref: &str, at: i64) {
        self.sessions.push(SessionLogRecord::SessionClose(SessionCloseBody {
            session_ref: sref.into(),
            outcome: SessionOutcome::FaultFound,
            finished_at: Some(Timestamp(at)),
        }));
    }

    fn finish(self, name: &'static str) -> FixtureSet {
        let mut records = vec![SessionLogRecord::Product(ProductBody { name: self.product.into() })];
        for t in &self.tasks {
            records.push(SessionLogRecord::Task(TaskBody {
                product: self.product.into(),
                issue_key: t.clone(),
                title: format!("issue {t}"),
            }));
        }
        let mut files = BTreeMap::new();
        for (full_name, src) in &self.types {
            records.push(SessionLogRecord::Type(TypeBody {
                product: self.product.into(),
                full_name: full_name.clone(),
                source_path: None,
                methods: src
                    .methods
                    .iter()
                    .map(|(s, l)| MethodDeclaration { signature: s.clone(), declared_line: Some(*l) })
                    .collect(),
            }));
            files.insert(default_source_path(full_name), java_source(full_name, src));
        }
        records.extend(self.sessions);
        FixtureSet { name, product: self.product, records, files }
    }
}

fn statement_text(full_name: &str, line: u32, class: StatementClass) -> String {
    if full_name == "net.sf.jabref.gui.BasePanel" && line == 969 {
        return "JabRefDesktop.openExternalViewer(metaData(), link.toString(), field);".into();
    }
    match class {
        StatementClass::Call => format!("helper{line}.process(entry, {line});"),
        StatementClass::IfStatement => format!("if (entry.size() > {line}) {{"),
        StatementClass::Assignment => format!("int count{line} = entry.size();"),
        StatementClass::Return => format!("return result{line};"),
        StatementClass::WhileLoop => format!("while (iter{line}.hasNext()) {{"),
        StatementClass::Other => "{".into(),
    }
}

fn java_declaration(signature: &str) -> String {
    let (name, params) = signature.split_once('(').unwrap_or((signature, ")"));
    let params = params.trim_end_matches(')');
    let args: Vec<String> = params
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .enumerate()
        .map(|(i, p)| format!("{p} arg{i}"))
        .collect();
    format!("public void {name}({}) {{", args.join(", "))
}

fn java_source(full_name: &str, src: &TypeSource) -> String {
    let (package, simple) = split_type_name(full_name);
    let last = src
        .methods
        .iter()
        .map(|m| m.1)
        .chain(src.statements.keys().copied())
        .max()
        .unwrap_or(3)
        + 1;
    let mut lines = vec![String::new(); last as usize];
    lines[0] = format!("package {package};");
    lines[2] = format!("public class {simple} {{");
    for (sig, l) in &src.methods {
        lines[*l as usize - 1] = format!("    {}", java_declaration(sig));
    }
    for (l, text) in &src.statements {
        assert!(*l > 3, "statement line {l} of {full_name} overlaps the header");
        lines[*l as usize - 1] = format!("        {text}");
    }
    lines[last as usize - 1] = "}".into();
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn tsv(text: &str) -> Vec<Vec<&str>> {
    text.lines().skip(1).filter(|l| !l.trim().is_empty()).map(|l| l.split('\t').collect()).collect()
}

fn statement_class(tag: &str) -> StatementClass {
    match tag {
        "call" => StatementClass::Call,
        "if" => StatementClass::IfStatement,
        "assign" => StatementClass::Assignment,
        "return" => StatementClass::Return,
        "while" => StatementClass::WhileLoop,
        other => panic!("unknown statement tag {other}"),
    }
}

struct StudyRow<'a> {
    task: &'a str,
    developer: &'a str,
    type_name: &'a str,
    line: u32,
    class: StatementClass,
}

/// Study corpora: one session per (task, developer); breakpoints spread over
/// the session after the first one. With `stepping`, each breakpoint is
/// followed by a step into it from the program entry point.
fn study(
    name: &'static str,
    product: &'static str,
    types_tsv: &str,
    sessions_tsv: &str,
    breakpoints_tsv: &str,
    entry: Option<[(&str, &str, u32); 2]>,
) -> FixtureSet {
    let mut b = Builder::new(product);
    let mut full: BTreeMap<&str, &str> = BTreeMap::new();
    for r in tsv(types_tsv) {
        full.insert(r[0], r[1]);
        b.method(r[1], r[3], r[2].parse().expect("declared line"));
    }
    let rows: Vec<StudyRow> = tsv(breakpoints_tsv)
        .into_iter()
        .map(|r| StudyRow {
            task: r[0],
            developer: r[1],
            type_name: r[2],
            line: r[3].parse().expect("line"),
            class: statement_class(r[4]),
        })
        .collect();
    for r in &rows {
        b.statement(full[r.type_name], r.line, r.class);
    }
    for (i, s) in tsv(sessions_tsv).iter().enumerate() {
        let (task, dev) = (s[0], s[1]);
        let et: i64 = s[2].parse().expect("elapsed");
        let fb: i64 = s[3].parse().expect("first breakpoint");
        b.task(task);
        let sref = format!("{task}-{dev}");
        let st = BASE_MS + i as i64 * DAY_MS;
        b.open(&sref, dev, task, name, st);
        let mine: Vec<&StudyRow> = rows.iter().filter(|r| r.task == task && r.developer == dev).collect();
        let gap = (et - fb) / (mine.len() as i64 + 1);
        for (k, r) in mine.iter().enumerate() {
            let at = st + fb + k as i64 * gap;
            let ty = full[r.type_name];
            b.breakpoint(&sref, ty, r.line, at);
            if k == 0 {
                b.event(&sref, DebugEventKind::Resume, None, at + gap / 8);
            }
            if let Some(entry) = entry {
                let frames = vec![
                    StackFrame::new(ty, &b.enclosing(ty, r.line), r.line),
                    StackFrame::new(entry[0].0, entry[0].1, entry[0].2),
                    StackFrame::new(entry[1].0, entry[1].1, entry[1].2),
                ];
                b.event(&sref, DebugEventKind::StepInto, Some(StackSnapshot::new(frames)), at + gap / 4);
            }
        }
        b.close(&sref, st + et);
    }
    b.finish(name)
}

pub fn study1() -> FixtureSet {
    let entry = [
        ("net.sf.jabref.JabRef", "start(String[])", 52),
        ("net.sf.jabref.JabRefMain", "main(String[])", 7),
    ];
    study("study1", STUDY1_PRODUCT, STUDY1_TYPES, STUDY1_SESSIONS, STUDY1_BREAKPOINTS, Some(entry))
}

pub fn study2() -> FixtureSet {
    study("study2", STUDY2_PRODUCT, STUDY2_TYPES, STUDY2_SESSIONS, STUDY2_BREAKPOINTS, None)
}

/// Per task and group: mean first-breakpoint, time-to-start and elapsed
/// seconds of five sessions.
const TABLE10_MEANS: [(&str, &str, [i64; 3]); 4] = [
    ("0993", "control", [174_600, 284_400, 1_808_000]),
    ("0993", "experiment", [219_600, 317_600, 965_000]),
    ("1026", "control", [162_400, 242_000, 1_498_000]),
    ("1026", "experiment", [288_200, 223_000, 1_241_000]),
];

/// Five values around `mean`, symmetric so their mean is exact.
fn spread(mean: i64) -> [i64; 5] {
    let step = mean / 20;
    [mean - 2 * step, mean - step, mean, mean + step, mean + 2 * step]
}

pub fn table10() -> FixtureSet {
    let mut b = Builder::new(TABLE10_PRODUCT);
    let ty = "net.sf.jabref.logic.bibtex.BibtexParser";
    b.method(ty, "parseFileContent()", 130);
    b.statement(ty, 140, StatementClass::Call);
    let mut day = 0;
    for (task, group, [fb, ts, et]) in TABLE10_MEANS {
        b.task(task);
        let (fbs, tss, ets) = (spread(fb), spread(ts), spread(et));
        // pair short first-breakpoint times with long sessions
        for k in 0..5 {
            let dev = format!("{}{task}-{k}", &group[..1]);
            let sref = format!("{task}-{group}-{k}");
            let st = BASE_MS + day * DAY_MS;
            day += 1;
            b.open(&sref, &dev, task, group, st);
            let (f, t) = (fbs[k], tss[4 - k]);
            if f <= t {
                b.breakpoint(&sref, ty, 140, st + f);
                b.event(&sref, DebugEventKind::Resume, None, st + t);
            } else {
                b.event(&sref, DebugEventKind::Resume, None, st + t);
                b.breakpoint(&sref, ty, 140, st + f);
            }
            b.close(&sref, st + ets[4 - k]);
        }
    }
    b.finish("table10")
}

pub fn across_tasks() -> FixtureSet {
    let mut b = Builder::new(ACROSS_PRODUCT);
    let types = [
        ("net.sf.jabref.gui.BasePanel", "runCommand(String)", 920, 969, StatementClass::Call),
        ("net.sf.jabref.gui.entryeditor.EntryEditor", "storeSource()", 700, 717, StatementClass::Assignment),
        ("net.sf.jabref.logic.bibtex.BibtexParser", "parseFileContent()", 130, 140, StatementClass::WhileLoop),
        ("net.sf.jabref.gui.actions.OpenDatabaseAction", "loadDatabase(File, Charset)", 260, 268, StatementClass::Assignment),
        ("net.sf.jabref.logic.layout.format.AuthorsFormatter", "format(String)", 30, 43, StatementClass::Assignment),
        ("net.sf.jabref.logic.net.URLUtil", "cleanGoogleSearchURL(String)", 90, 95, StatementClass::IfStatement),
        ("net.sf.jabref.gui.desktop.JabRefDesktop", "openExternalViewer(MetaData, String, String)", 420, 430, StatementClass::Call),
    ];
    for (ty, sig, decl, line, class) in types {
        b.method(ty, sig, decl);
        b.statement(ty, line, class);
    }
    // (developer, task, type index)
    let plan: [(&str, &str, usize); 20] = [
        ("a1", "318", 0), ("a2", "318", 0), ("a3", "667", 0), ("a4", "669", 0), ("a5", "669", 0),
        ("a1", "318", 1), ("a2", "318", 1), ("a3", "667", 1), ("a6", "667", 1),
        ("a2", "669", 2), ("a2", "669", 2), ("a4", "669", 2), ("a7", "993", 2),
        ("a1", "1026", 3), ("a5", "993", 3), ("a8", "1026", 3),
        ("a3", "318", 4), ("a6", "318", 4),
        ("a7", "993", 5), ("a8", "1026", 6),
    ];
    let mut sessions: BTreeMap<(&str, &str), Vec<usize>> = BTreeMap::new();
    for (dev, task, ty) in plan {
        sessions.entry((task, dev)).or_default().push(ty);
    }
    let mut day = 0;
    for task in ["318", "667", "669", "993", "1026"] {
        b.task(task);
    }
    for ((task, dev), tys) in sessions {
        let sref = format!("{task}-{dev}");
        let st = BASE_MS + day * DAY_MS;
        day += 1;
        b.open(&sref, dev, task, "across", st);
        for (k, &t) in tys.iter().enumerate() {
            b.breakpoint(&sref, types[t].0, types[t].3, st + 60_000 * (k as i64 + 1));
        }
        b.close(&sref, st + 3_600_000);
    }
    b.finish("across_tasks")
}

pub fn two_task_gv() -> FixtureSet {
    let mut b = Builder::new(GV_PRODUCT);
    let main = ("net.sf.jabref.JabRefMain", "main(String[])", 5, 7);
    let start = ("net.sf.jabref.JabRef", "start(String[])", 45, 52);
    let panel = ("net.sf.jabref.gui.BasePanel", "runCommand(String)", 920, 930);
    let layout = ("net.sf.jabref.logic.layout.LayoutEntry", "doLayout(BibEntry, BibDatabase)", 50, 60);
    let authors = ("net.sf.jabref.logic.layout.format.AuthorsFormatter", "format(String)", 30, 43);
    let editor = ("net.sf.jabref.gui.entryeditor.EntryEditor", "storeSource()", 700, 717);
    let update = ("net.sf.jabref.gui.entryeditor.EntryEditor", "updateField(Object)", 830, 835);
    for (ty, sig, decl, line) in [main, start, panel, layout, authors, editor, update] {
        b.method(ty, sig, decl);
        b.statement(ty, line, StatementClass::Call);
    }
    let frame = |f: (&str, &str, u32, u32)| StackFrame::new(f.0, f.1, f.3);
    let swing = StackFrame::new("javax.swing.AbstractButton", "fireActionPerformed(ActionEvent)", 2002);
    let stacks_318 = vec![
        vec![frame(authors), frame(layout), frame(panel), frame(start), frame(main)],
        vec![frame(layout), frame(panel), frame(start), frame(main)],
    ];
    let stacks_667 = vec![
        vec![frame(editor), swing.clone(), frame(panel), frame(start), frame(main)],
        vec![frame(update), frame(editor), swing, frame(panel), frame(start), frame(main)],
    ];
    let mut day = 0;
    for (task, devs, stacks) in [("318", ["g1", "g2"], stacks_318), ("667", ["g3", "g4"], stacks_667)] {
        b.task(task);
        for dev in devs {
            let sref = format!("{task}-{dev}");
            let st = BASE_MS + day * DAY_MS;
            day += 1;
            b.open(&sref, dev, task, "gv", st);
            let mut at = st;
            for frames in &stacks {
                at += 60_000;
                let top = &frames[0];
                b.breakpoint(&sref, &top.type_full_name, top.line_number, at);
                b.event(&sref, DebugEventKind::Resume, None, at + 1_000);
                b.event(&sref, DebugEventKind::StepInto, Some(StackSnapshot::new(frames.clone())), at + 2_000);
            }
            b.close(&sref, st + 1_800_000);
        }
    }
    b.finish("two_task_gv")
}
