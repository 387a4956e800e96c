//! Truth conditions.
//!
//! * `K{b|d1,..,dk}f` holds at `w` iff `R_b[w] ∩ cl_d1(w) ∩ .. ∩ cl_dk(w) ⊆ ||f||`.
//! * `D{G}f` holds at `w` iff `∩_{a∈G} R_a[w] ⊆ ||f||`.
//! * `[a>b]f` holds at `w` iff `f` holds at `w` after sharing at `w`.
//! * `Ri{G}f` holds at `w` iff `f` holds at `w` after resolving `G`.
//! * `O` holds at `w` iff `O[w]` is non-empty.
//! * `Ok{a}` holds at `w` iff `R_a[w] ∩ O[w]` is non-empty.
//!
//! Formulas are compiled into a hash-consed arena, and extensions are
//! memoised per (model, subformula). Updated models are interned by their
//! relations, so different evaluation paths reaching the same update share
//! work.

use std::collections::HashMap;
use std::sync::Arc;

use crate::formula::{expand, Formula};
use crate::kripke::{Model, Relation, StateSet};
use crate::update::{resolve_update, share_update};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("uninstantiated metavariable `{0}`")]
    Metavariable(String),
    #[error("`{0}` needs a model with an ideal relation")]
    MissingIdeal(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("model has no designated point; pass a state explicitly")]
    NoPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelId(u32);

impl ModelId {
    /// The model the evaluator was created with.
    pub const BASE: ModelId = ModelId(0);
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Atom(usize),
    Top,
    Bot,
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Imp(NodeId, NodeId),
    Iff(NodeId, NodeId),
    Know {
        agent: usize,
        deps: Vec<usize>,
        body: NodeId,
    },
    Dist {
        group: Vec<usize>,
        body: NodeId,
    },
    Share {
        sender: usize,
        receiver: usize,
        body: NodeId,
    },
    Resolve {
        group: Vec<usize>,
        body: NodeId,
    },
    Ideal,
    Ok(usize),
}

/// Evaluates formulas on one model and every model reachable from it by
/// updates. All those models share the same frame.
pub struct Evaluator {
    nodes: Vec<Node>,
    node_ids: HashMap<Node, NodeId>,
    models: Vec<Arc<Model>>,
    model_ids: HashMap<Vec<Relation>, ModelId>,
    memo: HashMap<(ModelId, NodeId), StateSet>,
    shares: HashMap<(ModelId, usize, usize, usize), ModelId>,
    resolutions: HashMap<(ModelId, Vec<usize>), ModelId>,
    memoise: bool,
}

impl Evaluator {
    pub fn new(model: &Model) -> Self {
        let mut ev = Evaluator {
            nodes: Vec::new(),
            node_ids: HashMap::new(),
            models: Vec::new(),
            model_ids: HashMap::new(),
            memo: HashMap::new(),
            shares: HashMap::new(),
            resolutions: HashMap::new(),
            memoise: true,
        };
        ev.intern_model(model.clone());
        ev
    }

    /// Evaluator that recomputes every subformula from scratch. Used to
    /// cross-check the memoised path.
    pub fn without_memo(model: &Model) -> Self {
        Evaluator {
            memoise: false,
            ..Evaluator::new(model)
        }
    }

    pub fn base(&self) -> &Model {
        &self.models[0]
    }

    pub fn model(&self, id: ModelId) -> &Model {
        &self.models[id.0 as usize]
    }

    pub fn intern_model(&mut self, model: Model) -> ModelId {
        if let Some(&id) = self.model_ids.get(model.relations()) {
            return id;
        }
        let id = ModelId(self.models.len() as u32);
        self.model_ids.insert(model.relations().to_vec(), id);
        self.models.push(Arc::new(model));
        id
    }

    fn node(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.node_ids.get(&node) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.node_ids.insert(node, id);
        id
    }

    fn agent(&self, a: &crate::formula::Agent) -> Result<usize, EvalError> {
        self.base()
            .agent_index(a)
            .ok_or_else(|| EvalError::UnknownAgent(a.to_string()))
    }

    fn agents(&self, g: &[crate::formula::Agent]) -> Result<Vec<usize>, EvalError> {
        g.iter().map(|a| self.agent(a)).collect()
    }

    /// Compiles a formula (expanding macros first) against the model's
    /// vocabulary.
    pub fn compile(&mut self, f: &Formula) -> Result<NodeId, EvalError> {
        if f.is_expanded() {
            self.compile_expanded(f)
        } else {
            self.compile_expanded(&expand(f))
        }
    }

    fn compile_expanded(&mut self, f: &Formula) -> Result<NodeId, EvalError> {
        use Formula as F;
        let node = match f {
            F::Atom(p) => Node::Atom(
                self.base()
                    .atom_index(p)
                    .ok_or_else(|| EvalError::UnknownAtom(p.clone()))?,
            ),
            F::Top => Node::Top,
            F::Bot => Node::Bot,
            F::Not(g) => Node::Not(self.compile_expanded(g)?),
            F::And(l, r) => Node::And(self.compile_expanded(l)?, self.compile_expanded(r)?),
            F::Or(l, r) => Node::Or(self.compile_expanded(l)?, self.compile_expanded(r)?),
            F::Imp(l, r) => Node::Imp(self.compile_expanded(l)?, self.compile_expanded(r)?),
            F::Iff(l, r) => Node::Iff(self.compile_expanded(l)?, self.compile_expanded(r)?),
            F::Know { agent, deps, body } => Node::Know {
                agent: self.agent(agent)?,
                deps: self.agents(deps)?,
                body: self.compile_expanded(body)?,
            },
            F::Dist { group, body } => Node::Dist {
                group: self.agents(group)?,
                body: self.compile_expanded(body)?,
            },
            F::Share {
                sender,
                receiver,
                body,
            } => Node::Share {
                sender: self.agent(sender)?,
                receiver: self.agent(receiver)?,
                body: self.compile_expanded(body)?,
            },
            F::ResolveInfo { group, body } => Node::Resolve {
                group: self.agents(group)?,
                body: self.compile_expanded(body)?,
            },
            F::Ideal | F::Ok(_) if !self.base().is_deontic() => {
                return Err(EvalError::MissingIdeal(f.to_string()))
            }
            F::Ideal => Node::Ideal,
            F::Ok(a) => Node::Ok(self.agent(a)?),
            F::Var(v) => return Err(EvalError::Metavariable(v.clone())),
            _ => unreachable!("macros are expanded before compilation"),
        };
        Ok(self.node(node))
    }

    /// `M|_{a>b}` at `w`, interned.
    pub fn share_model(&mut self, m: ModelId, w: usize, a: usize, b: usize) -> ModelId {
        if let Some(&id) = self.shares.get(&(m, w, a, b)) {
            return id;
        }
        let updated = share_update(self.model(m), w, a, b);
        let id = self.intern_model(updated);
        self.shares.insert((m, w, a, b), id);
        id
    }

    /// `M|_G`, interned.
    pub fn resolve_model(&mut self, m: ModelId, group: &[usize]) -> ModelId {
        let mut key = group.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&id) = self.resolutions.get(&(m, key.clone())) {
            return id;
        }
        let updated = resolve_update(self.model(m), &key);
        let id = self.intern_model(updated);
        self.resolutions.insert((m, key), id);
        id
    }

    /// `||f||` in model `m`.
    pub fn eval(&mut self, m: ModelId, f: NodeId) -> StateSet {
        if self.memoise {
            if let Some(&ext) = self.memo.get(&(m, f)) {
                return ext;
            }
        }
        let ext = self.compute(m, f);
        if self.memoise {
            self.memo.insert((m, f), ext);
        }
        ext
    }

    fn compute(&mut self, m: ModelId, f: NodeId) -> StateSet {
        let model = Arc::clone(&self.models[m.0 as usize]);
        let all = model.all_states();
        let n = model.num_states();
        match self.nodes[f.0 as usize].clone() {
            Node::Atom(p) => model.extension_of_atom(p),
            Node::Top => all,
            Node::Bot => StateSet::EMPTY,
            Node::Not(g) => all - self.eval(m, g),
            Node::And(l, r) => self.eval(m, l) & self.eval(m, r),
            Node::Or(l, r) => self.eval(m, l) | self.eval(m, r),
            Node::Imp(l, r) => (all - self.eval(m, l)) | self.eval(m, r),
            Node::Iff(l, r) => {
                let (l, r) = (self.eval(m, l), self.eval(m, r));
                all - ((l - r) | (r - l))
            }
            Node::Know { agent, deps, body } => {
                let ext = self.eval(m, body);
                let an = model.analysis();
                (0..n)
                    .filter(|&w| {
                        let reach = deps
                            .iter()
                            .fold(model.relation(agent).cell(w), |acc, &d| acc & an.closure(d, w));
                        reach.is_subset(ext)
                    })
                    .collect()
            }
            Node::Dist { group, body } => {
                let ext = self.eval(m, body);
                (0..n)
                    .filter(|&w| model.group_cell(&group, w).is_subset(ext))
                    .collect()
            }
            Node::Share {
                sender,
                receiver,
                body,
            } => (0..n)
                .filter(|&w| {
                    let updated = self.share_model(m, w, sender, receiver);
                    self.eval(updated, body).contains(w)
                })
                .collect(),
            Node::Resolve { group, body } => {
                let updated = self.resolve_model(m, &group);
                self.eval(updated, body)
            }
            Node::Ideal => {
                let o = model.ideal().expect("checked at compile time");
                (0..n).filter(|&w| !o[w].is_empty()).collect()
            }
            Node::Ok(a) => {
                let o = model.ideal().expect("checked at compile time");
                (0..n)
                    .filter(|&w| model.relation(a).cell(w).intersects(o[w]))
                    .collect()
            }
        }
    }

    /// `||f||` in the base model.
    pub fn extension(&mut self, f: &Formula) -> Result<StateSet, EvalError> {
        let node = self.compile(f)?;
        Ok(self.eval(ModelId::BASE, node))
    }

    /// Truth of `f` at `w` with an explanation when it fails.
    pub fn check(&mut self, f: &Formula, w: usize) -> Result<Check, EvalError> {
        let f = expand(f);
        let node = self.compile(&f)?;
        Ok(self.explain(ModelId::BASE, &f, node, w))
    }

    fn explain(&mut self, m: ModelId, f: &Formula, node: NodeId, w: usize) -> Check {
        let holds = self.eval(m, node).contains(w);
        if holds {
            return Check {
                holds,
                witness: None,
            };
        }
        let witness = match (&self.nodes[node.0 as usize].clone(), f) {
            (Node::Know { agent, deps, body }, _) => {
                let model = Arc::clone(&self.models[m.0 as usize]);
                let an = model.analysis();
                let reach = deps
                    .iter()
                    .fold(model.relation(*agent).cell(w), |acc, &d| acc & an.closure(d, w));
                let bad = reach - self.eval(m, *body);
                bad.first().map(|state| Witness::State { state })
            }
            (Node::Dist { group, body }, _) => {
                let reach = self.model(m).group_cell(group, w);
                let bad = reach - self.eval(m, *body);
                bad.first().map(|state| Witness::State { state })
            }
            (
                Node::Share {
                    sender,
                    receiver,
                    body,
                },
                Formula::Share { body: inner, .. },
            ) => {
                let updated = self.share_model(m, w, *sender, *receiver);
                let inner = self.explain(updated, inner, *body, w);
                Some(Witness::Update {
                    model: Box::new(self.model(updated).clone()),
                    inner: Box::new(inner),
                })
            }
            (Node::Resolve { group, body }, Formula::ResolveInfo { body: inner, .. }) => {
                let updated = self.resolve_model(m, group);
                let inner = self.explain(updated, inner, *body, w);
                Some(Witness::Update {
                    model: Box::new(self.model(updated).clone()),
                    inner: Box::new(inner),
                })
            }
            _ => None,
        };
        Check { holds, witness }
    }
}

/// Result of checking a formula at a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    /// Present only for failed boxes and failed updates.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An accessible state falsifying the body of a failed box.
    State { state: usize },
    /// The updated model in which the body failed, and why it failed there.
    Update { model: Box<Model>, inner: Box<Check> },
}

/// `||f||`
pub fn extension(m: &Model, f: &Formula) -> Result<StateSet, EvalError> {
    Evaluator::new(m).extension(f)
}

/// Truth at a single state.
pub fn holds_at(m: &Model, f: &Formula, w: usize) -> Result<bool, EvalError> {
    Ok(extension(m, f)?.contains(w))
}

/// True at every state.
pub fn global_truth(m: &Model, f: &Formula) -> Result<bool, EvalError> {
    Ok(extension(m, f)? == m.all_states())
}

/// Checks `f` at `state` (by name) or else at the model's point.
pub fn check(m: &Model, f: &Formula, state: Option<&str>) -> Result<Check, EvalError> {
    let w = match state {
        Some(s) => m
            .state_index(s)
            .ok_or_else(|| EvalError::UnknownState(s.to_string()))?,
        None => m.point().ok_or(EvalError::NoPoint)?,
    };
    Evaluator::new(m).check(f, w)
}
