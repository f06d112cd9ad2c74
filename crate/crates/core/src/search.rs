//! Breakpoint search over the identifiers breakpoints sit in.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use wildmatch::WildMatch;

use crate::error::{Error, Result};
use crate::model::Breakpoint;
use crate::store::{QueryFilter, StoreSnapshot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Fuzzy,
    Match,
    Wildcard,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::model::parse_snake_enum(s, "search mode")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchQuery {
    pub text: String,
    pub mode: SearchMode,
    #[serde(default)]
    pub filter: QueryFilter,
}

impl SearchQuery {
    pub fn new(text: &str, mode: SearchMode) -> Self {
        SearchQuery { text: text.to_owned(), mode, filter: QueryFilter::all() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchedField {
    TypeName,
    MethodSignature,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub breakpoint: Breakpoint,
    pub matched_field: MatchedField,
    pub score: f64,
}

/// Splits an identifier on punctuation and camelCase boundaries, lowercased.
/// `HTMLParser.parse2(String)` gives `html parser parse 2 string`.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()) {
        let chars: Vec<char> = word.chars().collect();
        let mut start = 0;
        for i in 1..chars.len() {
            let (a, b) = (chars[i - 1], chars[i]);
            let next_lower = chars.get(i + 1).is_some_and(|c| c.is_lowercase());
            let boundary = (a.is_lowercase() && b.is_uppercase())
                || (a.is_uppercase() && b.is_uppercase() && next_lower)
                || (a.is_alphabetic() != b.is_alphabetic());
            if boundary {
                out.push(chars[start..i].iter().collect::<String>().to_lowercase());
                start = i;
            }
        }
        out.push(chars[start..].iter().collect::<String>().to_lowercase());
    }
    out
}

/// Edit-distance bound for a fuzzy query of `len` characters.
pub fn fuzzy_bound(len: usize) -> usize {
    if len <= 5 {
        1
    } else {
        2
    }
}

/// Score of one field against the query, `None` when it does not match.
fn field_score(field: &str, query: &str, mode: SearchMode) -> Option<f64> {
    match mode {
        SearchMode::Match => tokenize(field).iter().any(|t| t == query).then_some(1.0),
        SearchMode::Fuzzy => {
            let bound = fuzzy_bound(query.chars().count());
            let best = tokenize(field).iter().map(|t| strsim::osa_distance(t, query)).min()?;
            (best <= bound).then(|| 1.0 - best as f64 / (bound as f64 + 1.0))
        }
        SearchMode::Wildcard => WildMatch::new(query).matches(&field.to_lowercase()).then_some(1.0),
    }
}

/// Fields a breakpoint can be found by.
pub fn searchable_fields(snapshot: &StoreSnapshot, bp: &Breakpoint) -> Vec<(MatchedField, String)> {
    let mut out = Vec::new();
    if let Some(t) = snapshot.type_entity(&bp.type_id) {
        out.push((MatchedField::TypeName, t.simple_name.clone()));
    }
    if let Some(m) = bp.method_id.as_ref().and_then(|m| snapshot.method(m)) {
        out.push((MatchedField::MethodSignature, m.signature.clone()));
    }
    out
}

/// At most one hit per breakpoint, on its best-scoring field; ranked by
/// score, then newest first, then id.
pub fn search_breakpoints(snapshot: &StoreSnapshot, query: &SearchQuery) -> Result<Vec<SearchHit>> {
    let text = query.text.trim().to_lowercase();
    if text.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let mut hits = Vec::new();
    for bp in snapshot.query_breakpoints(&query.filter) {
        let best = searchable_fields(snapshot, &bp)
            .into_iter()
            .filter_map(|(f, s)| field_score(&s, &text, query.mode).map(|score| (f, score)))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        if let Some((matched_field, score)) = best {
            hits.push(SearchHit { breakpoint: bp, matched_field, score });
        }
    }
    hits.sort_by(rank);
    Ok(hits)
}

fn rank(a: &SearchHit, b: &SearchHit) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(b.breakpoint.created_at.cmp(&a.breakpoint.created_at))
        .then(a.breakpoint.id.cmp(&b.breakpoint.id))
}
