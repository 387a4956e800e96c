//! Model updates: the pointed knowledge-sharing update and information
//! resolution.

use crate::formula::Agent;
use crate::kripke::{dependence_classes, Model, Relation};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum UpdateError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("resolution needs a non-empty group")]
    EmptyGroup,
    #[error("model has no designated point; pass a state explicitly")]
    NoPoint,
}

/// `M|_{a>b}` relative to `w`.
///
/// Only the receiver's relation changes, and only inside its cell at `w`:
/// there it is intersected with `≡_{a:w}` of the original model. Links of
/// the receiver elsewhere, and every other agent's links, are kept.
pub fn share_update(m: &Model, w: usize, a: usize, b: usize) -> Model {
    if a == b {
        return m.clone();
    }
    let cell = m.relation(b).cell(w);
    let classes = dependence_classes(m, a, w);
    let mut cells = m.relation(b).cells().to_vec();
    for class in classes {
        let part = cell & class;
        for s in part {
            cells[s] = part;
        }
    }
    let mut rel = m.relations().to_vec();
    rel[b] = Relation::from_cells_unchecked(cells);
    m.with_relations(rel)
}

/// `M|_G`: every member of the group gets the intersection of the group's
/// relations; other agents keep theirs.
pub fn resolve_update(m: &Model, group: &[usize]) -> Model {
    assert!(!group.is_empty(), "resolution needs a non-empty group");
    let meet = m.group_relation(group);
    let mut rel = m.relations().to_vec();
    for &a in group {
        rel[a] = meet.clone();
    }
    m.with_relations(rel)
}

/// Folds [`share_update`] over `(sender, receiver)` pairs, each applied at `w`.
pub fn apply_sequence(m: &Model, w: usize, steps: &[(usize, usize)]) -> Model {
    steps
        .iter()
        .fold(m.clone(), |acc, &(a, b)| share_update(&acc, w, a, b))
}

fn agent(m: &Model, a: &Agent) -> Result<usize, UpdateError> {
    m.agent_index(a)
        .ok_or_else(|| UpdateError::UnknownAgent(a.to_string()))
}

/// [`apply_sequence`] with named agents, at `state` or else the model's
/// point. The returned model keeps the original point.
pub fn apply_named(
    m: &Model,
    state: Option<&str>,
    steps: &[(Agent, Agent)],
) -> Result<Model, UpdateError> {
    let w = match state {
        Some(s) => m
            .state_index(s)
            .ok_or_else(|| UpdateError::UnknownState(s.to_string()))?,
        None => m.point().ok_or(UpdateError::NoPoint)?,
    };
    let steps = steps
        .iter()
        .map(|(a, b)| Ok((agent(m, a)?, agent(m, b)?)))
        .collect::<Result<Vec<_>, UpdateError>>()?;
    Ok(apply_sequence(m, w, &steps))
}

/// [`resolve_update`] with named agents.
pub fn resolve_named(m: &Model, group: &[Agent]) -> Result<Model, UpdateError> {
    if group.is_empty() {
        return Err(UpdateError::EmptyGroup);
    }
    let idx = group
        .iter()
        .map(|a| agent(m, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(resolve_update(m, &idx))
}

/// Pairs `(s, u)` with `s` in the receiver's cell at `w` and `u` outside it.
/// Always empty for an equivalence relation; kept as a checked assertion
/// that the case split of the update is exhaustive.
pub fn mixed_pairs(m: &Model, w: usize, b: usize) -> Vec<(usize, usize)> {
    let cell = m.relation(b).cell(w);
    cell.iter()
        .flat_map(|s| (m.relation(b).cell(s) - cell).iter().map(move |u| (s, u)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::kripke::StateSet;

    fn set(xs: &[usize]) -> StateSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn sharing_with_the_third_server() {
        let m = builtin::servers();
        let ac = share_update(&m, 0, 0, 2);
        assert_eq!(ac.relation(2).blocks(), vec![set(&[0, 1, 2]), set(&[3]), set(&[4])]);
        assert_eq!(ac.relation(0), m.relation(0));
        assert_eq!(ac.relation(1), m.relation(1));
        let bc = share_update(&m, 0, 1, 2);
        assert_eq!(bc.relation(2).blocks(), vec![set(&[0, 3, 4]), set(&[1]), set(&[2])]);
    }

    #[test]
    fn self_share_is_identity() {
        let m = builtin::servers();
        for a in 0..3 {
            for w in 0..5 {
                assert_eq!(share_update(&m, w, a, a), m);
            }
        }
    }

    #[test]
    fn sequence_of_two_shares_isolates_the_point() {
        let m = builtin::servers();
        let out = apply_sequence(&m, 0, &[(0, 2), (1, 2)]);
        assert_eq!(out.relation(2).cell(0), set(&[0]));
        assert_eq!(apply_sequence(&m, 0, &[]), m);
    }

    #[test]
    fn resolution() {
        let m = builtin::pooling_gap();
        let r = resolve_update(&m, &[0, 1]);
        assert_eq!(r.relation(0).cell(0), set(&[0]));
        assert_eq!(r.relation(1).cell(0), set(&[0]));
        assert_eq!(resolve_update(&m, &[0]), m);
        let s = builtin::servers();
        let all = resolve_update(&s, &[0, 1, 2]);
        assert_eq!(all.group_cell(&[0, 1, 2], 0), set(&[0]));
        assert_eq!(resolve_update(&all, &[0, 1, 2]), all);
        assert_eq!(resolve_update(&s, &[2, 0, 1]), all);
    }

    #[test]
    fn named_errors() {
        let m = builtin::servers();
        let x = Agent::new("x").unwrap();
        let a = Agent::new("a").unwrap();
        assert_eq!(
            apply_named(&m, None, &[(a.clone(), x.clone())]).unwrap_err(),
            UpdateError::UnknownAgent("x".into())
        );
        assert_eq!(
            apply_named(&m, Some("s9"), &[]).unwrap_err(),
            UpdateError::UnknownState("s9".into())
        );
        assert_eq!(
            apply_named(&m.with_point(None), None, &[]).unwrap_err(),
            UpdateError::NoPoint
        );
        assert_eq!(resolve_named(&m, &[]).unwrap_err(), UpdateError::EmptyGroup);
    }
}
