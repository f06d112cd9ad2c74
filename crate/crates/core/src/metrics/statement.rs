use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::PathBuf;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::TypeEntity;
use crate::store::{QueryFilter, StoreSnapshot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatementClass {
    Call,
    Return,
    Assignment,
    IfStatement,
    WhileLoop,
    Other,
}

impl std::str::FromStr for StatementClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::model::parse_snake_enum(s, "statement class")
    }
}

const NOT_CALLS: &[&str] = &["if", "while", "for", "switch", "catch", "synchronized", "return", "try"];

/// Removes `//` and `/* */` comments that are not inside string or char
/// literals.
fn strip_comments(line: &str) -> String {
    let chars: Vec<char> = line.chars().collect();
    let mut out = String::new();
    let mut quote: Option<char> = None;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match quote {
            Some(q) => {
                out.push(c);
                if c == '\\' && i + 1 < chars.len() {
                    out.push(chars[i + 1]);
                    i += 1;
                } else if c == q {
                    quote = None;
                }
            }
            None if c == '"' || c == '\'' => {
                quote = Some(c);
                out.push(c);
            }
            None if c == '/' && chars.get(i + 1) == Some(&'/') => break,
            None if c == '/' && chars.get(i + 1) == Some(&'*') => {
                let rest: String = chars[i + 2..].iter().collect();
                match rest.find("*/") {
                    Some(end) => {
                        out.push(' ');
                        i += 2 + rest[..end].chars().count() + 2;
                        continue;
                    }
                    None => break,
                }
            }
            None => out.push(c),
        }
        i += 1;
    }
    out
}

/// Same text with string and char literal contents blanked out.
fn blank_literals(code: &str) -> Vec<char> {
    let mut out = Vec::new();
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for c in code.chars() {
        match quote {
            Some(q) => {
                if escaped {
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    quote = None;
                    out.push(c);
                    continue;
                }
                out.push(' ');
            }
            None => {
                if c == '"' || c == '\'' {
                    quote = Some(c);
                }
                out.push(c);
            }
        }
    }
    out
}

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

fn leading_words(code: &[char]) -> Vec<String> {
    let mut words = Vec::new();
    let mut cur = String::new();
    for &c in code {
        if is_ident(c) {
            cur.push(c);
        } else {
            if !cur.is_empty() {
                words.push(std::mem::take(&mut cur));
                if words.len() == 2 {
                    return words;
                }
            }
            if !c.is_whitespace() {
                break;
            }
        }
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    words
}

fn has_top_level_assignment(code: &[char]) -> bool {
    let mut depth = 0i32;
    for (i, &c) in code.iter().enumerate() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '=' if depth == 0 => {
                let prev = i.checked_sub(1).map(|p| code[p]);
                let next = code.get(i + 1).copied();
                let shifted = i >= 2 && matches!((code[i - 2], code[i - 1]), ('<', '<') | ('>', '>'));
                let comparison = next == Some('=') || matches!(prev, Some('=' | '!' | '<' | '>'));
                if shifted || !comparison {
                    return true;
                }
            }
            _ => {}
        }
    }
    false
}

fn has_call(code: &[char]) -> bool {
    let mut word = String::new();
    for &c in code {
        if is_ident(c) {
            word.push(c);
            continue;
        }
        if c == '(' && !word.is_empty() && !word.starts_with(|d: char| d.is_ascii_digit()) && !NOT_CALLS.contains(&word.as_str()) {
            return true;
        }
        word.clear();
    }
    false
}

/// Classifies one source line by a fixed precedence: conditional keyword,
/// loop keyword, `return`, top-level assignment, call, anything else.
pub fn classify_statement(source_line: &str) -> StatementClass {
    let code = strip_comments(source_line);
    let code = code.trim().trim_start_matches(['}', ' ', '\t']);
    let code = blank_literals(code);
    let words = leading_words(&code);
    let first = words.first().map(String::as_str);
    let second = words.get(1).map(String::as_str);
    match (first, second) {
        (Some("if"), _) | (Some("else"), Some("if")) => StatementClass::IfStatement,
        (Some("while" | "for" | "do"), _) => StatementClass::WhileLoop,
        (Some("return"), _) => StatementClass::Return,
        _ if has_top_level_assignment(&code) => StatementClass::Assignment,
        _ if has_call(&code) => StatementClass::Call,
        _ => StatementClass::Other,
    }
}

/// Source text lookup for breakpoint lines.
pub trait SourceResolver {
    /// Text of 1-based `line` of the type's source, if available.
    fn line(&self, ty: &TypeEntity, line: u32) -> Option<String>;
}

/// Reads `source_path` files below a project root.
pub struct FsSourceResolver {
    root: PathBuf,
    cache: Mutex<HashMap<PathBuf, Option<Vec<String>>>>,
}

impl FsSourceResolver {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FsSourceResolver { root: root.into(), cache: Mutex::new(HashMap::new()) }
    }
}

impl SourceResolver for FsSourceResolver {
    fn line(&self, ty: &TypeEntity, line: u32) -> Option<String> {
        let path = self.root.join(&ty.source_path);
        let mut cache = self.cache.lock();
        let lines = cache
            .entry(path)
            .or_insert_with_key(|p| fs::read_to_string(p).ok().map(|t| t.lines().map(str::to_owned).collect()));
        lines.as_ref()?.get(line.checked_sub(1)? as usize).cloned()
    }
}

/// In-memory source keyed by (type full name, line).
#[derive(Clone, Debug, Default)]
pub struct MapSourceResolver {
    pub lines: HashMap<(String, u32), String>,
}

impl MapSourceResolver {
    pub fn insert(&mut self, type_full_name: &str, line: u32, text: &str) {
        self.lines.insert((type_full_name.to_owned(), line), text.to_owned());
    }
}

impl SourceResolver for MapSourceResolver {
    fn line(&self, ty: &TypeEntity, line: u32) -> Option<String> {
        self.lines.get(&(ty.full_name.clone(), line)).cloned()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub statement_class: StatementClass,
    pub count: usize,
    /// Whole percent of the total, rounded half up.
    pub percent: u32,
}

/// `round(100 * part / total)` with halves rounded up, in exact integers.
pub fn percent_half_up(part: usize, total: usize) -> u32 {
    if total == 0 {
        return 0;
    }
    ((200 * part + total) / (2 * total)) as u32
}

/// Breakpoints per statement class, most frequent first.
pub fn statement_type_distribution(
    snapshot: &StoreSnapshot,
    filter: &QueryFilter,
    resolver: &dyn SourceResolver,
) -> Result<Vec<DistributionRow>> {
    let mut counts: BTreeMap<StatementClass, usize> = BTreeMap::new();
    let mut total = 0;
    for bp in snapshot.query_breakpoints(filter) {
        let ty = snapshot
            .type_entity(&bp.type_id)
            .ok_or_else(|| Error::UnknownType(bp.type_id.to_string()))?;
        let text = resolver.line(ty, bp.line_number).ok_or_else(|| Error::MissingSource {
            type_name: ty.full_name.clone(),
            line: bp.line_number,
        })?;
        *counts.entry(classify_statement(&text)).or_default() += 1;
        total += 1;
    }
    let mut rows: Vec<DistributionRow> = counts
        .into_iter()
        .map(|(statement_class, count)| DistributionRow { statement_class, count, percent: percent_half_up(count, total) })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then(a.statement_class.cmp(&b.statement_class)));
    Ok(rows)
}
