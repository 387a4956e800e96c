//! Permission to share, and a planner for sequences of shares that reach an
//! epistemic goal.

use std::collections::{HashSet, VecDeque};

use crate::formula::{Agent, Formula};
use crate::kripke::{fingerprint, Model};
use crate::semantics::{EvalError, Evaluator, ModelId};
use crate::update::share_update;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NormError {
    #[error("permissibility needs a model with an ideal relation")]
    MissingIdeal,
    #[error("model has no designated point")]
    NoPoint,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `Perm(a>b)` at `w`: after `a` shares with `b` at `w`, some ideal
/// transition from `w` stays inside `b`'s cell.
pub fn permissible_share(m: &Model, w: usize, a: usize, b: usize) -> Result<bool, NormError> {
    let o = m.ideal().ok_or(NormError::MissingIdeal)?;
    let updated = share_update(m, w, a, b);
    Ok(updated.relation(b).cell(w).intersects(o[w]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<(Agent, Agent)>,
    /// Permissibility of each step when it is taken; `None` without an ideal
    /// relation.
    pub verdicts: Vec<Option<bool>>,
    pub goal: Formula,
    pub achieved: bool,
}

impl Plan {
    /// Re-executes the steps at the model's point and recomputes every
    /// verdict and the goal value.
    pub fn replay(m: &Model, steps: &[(Agent, Agent)], goal: &Formula) -> Result<Plan, NormError> {
        let w = m.point().ok_or(NormError::NoPoint)?;
        let idx = |a: &Agent| {
            m.agent_index(a)
                .ok_or_else(|| NormError::Eval(EvalError::UnknownAgent(a.to_string())))
        };
        let mut current = m.clone();
        let mut verdicts = Vec::new();
        for (a, b) in steps {
            let (ai, bi) = (idx(a)?, idx(b)?);
            verdicts.push(match m.is_deontic() {
                true => Some(permissible_share(&current, w, ai, bi)?),
                false => None,
            });
            current = share_update(&current, w, ai, bi);
        }
        let achieved = Evaluator::new(&current).extension(goal)?.contains(w);
        Ok(Plan {
            steps: steps.to_vec(),
            verdicts,
            goal: goal.clone(),
            achieved,
        })
    }

    pub fn is_permissible(&self) -> bool {
        self.verdicts.iter().all(|v| *v == Some(true))
    }
}

/// Breadth-first search for a shortest sequence of shares at the model's
/// point after which `goal` holds there. Steps range over ordered pairs of
/// distinct agents, tried in (sender, receiver) name order, so among equally
/// short plans the lexicographically first is returned. Models are
/// deduplicated up to isomorphism. With `require_permissible`, every step
/// must be permissible when taken.
pub fn plan(
    m: &Model,
    goal: &Formula,
    max_len: usize,
    require_permissible: bool,
) -> Result<Option<Plan>, NormError> {
    let w = m.point().ok_or(NormError::NoPoint)?;
    if require_permissible && !m.is_deontic() {
        return Err(NormError::MissingIdeal);
    }
    let mut ev = Evaluator::new(m);
    let node = ev.compile(goal)?;

    let mut order: Vec<usize> = (0..m.agents().len()).collect();
    order.sort_by_key(|&a| m.agents()[a].as_str());
    let moves: Vec<(usize, usize)> = order
        .iter()
        .flat_map(|&a| order.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
        .collect();

    let found = |steps: &[(usize, usize)]| -> Result<Option<Plan>, NormError> {
        let named: Vec<(Agent, Agent)> = steps
            .iter()
            .map(|&(a, b)| (m.agents()[a].clone(), m.agents()[b].clone()))
            .collect();
        let plan = Plan::replay(m, &named, goal)?;
        assert!(plan.achieved, "planned sequence must reach the goal on replay");
        assert!(!require_permissible || plan.is_permissible());
        Ok(Some(plan))
    };

    if ev.eval(ModelId::BASE, node).contains(w) {
        return found(&[]);
    }
    let mut seen = HashSet::from([fingerprint(m)]);
    let mut queue: VecDeque<(ModelId, Vec<(usize, usize)>)> = VecDeque::from([(ModelId::BASE, vec![])]);
    while let Some((id, path)) = queue.pop_front() {
        if path.len() >= max_len {
            continue;
        }
        for &(a, b) in &moves {
            let current = ev.model(id).clone();
            if require_permissible && !permissible_share(&current, w, a, b)? {
                continue;
            }
            let next = ev.share_model(id, w, a, b);
            if !seen.insert(fingerprint(ev.model(next))) {
                continue;
            }
            let mut steps = path.clone();
            steps.push((a, b));
            if ev.eval(next, node).contains(w) {
                return found(&steps);
            }
            queue.push_back((next, steps));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::formula::parse;

    fn names(plan: &Plan) -> Vec<(String, String)> {
        plan.steps
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn permission_to_share() {
        let m = builtin::servers_ideal();
        assert!(permissible_share(&m, 0, 0, 2).unwrap());
        let after = share_update(&m, 0, 0, 2);
        assert!(!permissible_share(&after, 0, 1, 2).unwrap());
        let ok_a = m.relation(0).cell(0).intersects(m.ideal().unwrap()[0]);
        assert_eq!(permissible_share(&m, 0, 0, 0).unwrap(), ok_a);
        assert_eq!(
            permissible_share(&builtin::servers(), 0, 0, 1),
            Err(NormError::MissingIdeal)
        );
    }

    #[test]
    fn permissible_plans() {
        let m = builtin::servers_ideal();
        let p = plan(&m, &parse("K{c}(p -> q)").unwrap(), 3, true)
            .unwrap()
            .unwrap();
        assert_eq!(names(&p), [("a".into(), "c".into())]);
        assert_eq!(p.verdicts, [Some(true)]);
        assert!(plan(&m, &parse("K{c}(p -> r)").unwrap(), 4, true)
            .unwrap()
            .is_none());
    }

    #[test]
    fn free_plan_is_two_steps() {
        let m = builtin::servers_ideal();
        let goal = parse("K{c}(p -> r)").unwrap();
        let p = plan(&m, &goal, 2, false).unwrap().unwrap();
        assert_eq!(p.steps.len(), 2);
        assert_eq!(names(&p), [("a".into(), "b".into()), ("b".into(), "c".into())]);
        let a = Agent::new("a").unwrap();
        let b = Agent::new("b").unwrap();
        let c = Agent::new("c").unwrap();
        let other = Plan::replay(&m, &[(a, c.clone()), (b, c)], &goal).unwrap();
        assert!(other.achieved);
    }

    #[test]
    fn goal_already_true() {
        let m = builtin::servers_ideal();
        let p = plan(&m, &parse("K{a}(p -> q)").unwrap(), 0, true).unwrap().unwrap();
        assert!(p.steps.is_empty() && p.achieved);
    }
}
