use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::NodeId;
use crate::error::{Error, Result};
use crate::model::SessionId;
use crate::store::{require_session, StoreSnapshot};

/// One root-to-leaf invocation chain of a session.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub methods: Vec<NodeId>,
    /// Last position shared with the previous row, where the stack returns
    /// before diverging.
    pub dotted_return_index: Option<usize>,
}

/// Stack rows of a session's method-level invocation relation.
pub fn sequence_stack_rows(snapshot: &StoreSnapshot, session: &SessionId) -> Result<Vec<SequenceRow>> {
    require_session(snapshot, session)?;
    let pairs: Vec<(NodeId, NodeId)> = snapshot
        .session_invocations(session)
        .into_iter()
        .map(|i| (i.invoking_method_id.to_string(), i.invoked_method_id.to_string()))
        .collect();
    rows_from_pairs(&pairs)
}

/// Rows for an ordered list of observed (caller, callee) pairs, following
/// first-observation order for both roots and children.
pub fn rows_from_pairs(pairs: &[(NodeId, NodeId)]) -> Result<Vec<SequenceRow>> {
    let mut names: Vec<NodeId> = Vec::new();
    let mut ix: HashMap<&str, usize> = HashMap::new();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut has_parent: Vec<bool> = Vec::new();
    for (a, b) in pairs {
        let [u, v] = [a, b].map(|n| {
            *ix.entry(n.as_str()).or_insert_with(|| {
                names.push(n.clone());
                children.push(Vec::new());
                has_parent.push(false);
                names.len() - 1
            })
        });
        if !children[u].contains(&v) {
            children[u].push(v);
        }
        has_parent[v] = true;
    }
    if let Some(n) = find_cycle(&children) {
        return Err(Error::CyclicInvocation(names[n].clone()));
    }

    let mut rows: Vec<SequenceRow> = Vec::new();
    let mut path = Vec::new();
    for root in (0..names.len()).filter(|&n| !has_parent[n]) {
        walk(root, &children, &mut path, &mut |p| {
            let methods: Vec<NodeId> = p.iter().map(|&i| names[i].clone()).collect();
            let shared = rows.last().map_or(0, |prev| {
                prev.methods.iter().zip(&methods).take_while(|(a, b)| a == b).count()
            });
            rows.push(SequenceRow { methods, dotted_return_index: shared.checked_sub(1) });
        });
    }
    Ok(rows)
}

fn walk(n: usize, children: &[Vec<usize>], path: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    path.push(n);
    if children[n].is_empty() {
        emit(path);
    }
    for &c in &children[n] {
        walk(c, children, path, emit);
    }
    path.pop();
}

/// A node on some cycle, if the relation has one.
fn find_cycle(children: &[Vec<usize>]) -> Option<usize> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; children.len()];
    for start in 0..children.len() {
        if state[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        state[start] = 1;
        while let Some(&mut (n, ref mut next)) = stack.last_mut() {
            if let Some(&c) = children[n].get(*next) {
                *next += 1;
                match state[c] {
                    1 => return Some(c),
                    0 => {
                        state[c] = 1;
                        stack.push((c, 0));
                    }
                    _ => {}
                }
            } else {
                state[n] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Distinct edges covered by consecutive positions of the rows.
pub fn covered_edges(rows: &[SequenceRow]) -> BTreeMap<(NodeId, NodeId), usize> {
    let mut out = BTreeMap::new();
    for r in rows {
        for w in r.methods.windows(2) {
            *out.entry((w[0].clone(), w[1].clone())).or_default() += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(xs: &[(&str, &str)]) -> Vec<(NodeId, NodeId)> {
        xs.iter().map(|&(a, b)| (a.to_owned(), b.to_owned())).collect()
    }

    #[test]
    fn shapes_rows() {
        let p = pairs(&[
            ("main", "Shape.draw"),
            ("Shape.draw", "Circle.draw"),
            ("Shape.draw", "Square.draw"),
        ]);
        let rows = rows_from_pairs(&p).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].methods, ["main", "Shape.draw", "Circle.draw"]);
        assert_eq!(rows[0].dotted_return_index, None);
        assert_eq!(rows[1].methods, ["main", "Shape.draw", "Square.draw"]);
        assert_eq!(rows[1].dotted_return_index, Some(1));
    }

    #[test]
    fn single_and_empty() {
        let rows = rows_from_pairs(&pairs(&[("a", "b")])).unwrap();
        assert_eq!(rows, vec![SequenceRow { methods: vec!["a".into(), "b".into()], dotted_return_index: None }]);
        assert!(rows_from_pairs(&[]).unwrap().is_empty());
    }

    #[test]
    fn cycle_is_an_error() {
        let err = rows_from_pairs(&pairs(&[("a", "b"), ("b", "c"), ("c", "a")])).unwrap_err();
        assert_eq!(err.code(), "CyclicInvocation");
        assert!(rows_from_pairs(&pairs(&[("a", "a")])).is_err());
    }

    #[test]
    fn separate_roots_do_not_share() {
        let rows = rows_from_pairs(&pairs(&[("a", "b"), ("x", "y")])).unwrap();
        assert_eq!(rows[1].dotted_return_index, None);
    }
}
